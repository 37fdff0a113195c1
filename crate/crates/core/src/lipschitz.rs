//! The explicit Lipschitz constant `ν_p(𝒜) = max{1, ‖𝒜‖^p} / χ_p(𝒜)` and the
//! perturbation harness that checks `|ρ(𝒜) − ρ(ℬ)| ≤ ν_p(𝒜)·H(𝒜, ℬ)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::irreducibility::{chi, IrreducibilityCertificate, DEFAULT_CHI_GRID};
use crate::jsr::{bracket, spectral_radius, Interval, DEFAULT_DEPTH};
use crate::linalg::{set_norm, Matrix, MatrixSet, NormKind};
use crate::metric::hausdorff;

/// Slack allowed when comparing the certified gap with `ν·H`.
pub const VERDICT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LipschitzConstant {
    /// `max{1, ‖𝒜‖^p} / χ_lower`.
    pub nu: f64,
    /// `max{1, hi^p} / χ_lower` with `hi ≥ ρ(𝒜)` from a depth-`n` bracket.
    pub nu_sharp: f64,
    pub p: usize,
    pub kind: NormKind,
    pub chi_source: IrreducibilityCertificate,
}

pub fn nu(s: &MatrixSet, p: usize, kind: NormKind, cert: &IrreducibilityCertificate) -> Result<LipschitzConstant> {
    nu_with_depth(s, p, kind, cert, DEFAULT_DEPTH)
}

/// [`nu`] with an explicit bracket depth for the sharp variant.
pub fn nu_with_depth(
    s: &MatrixSet,
    p: usize,
    kind: NormKind,
    cert: &IrreducibilityCertificate,
    depth: usize,
) -> Result<LipschitzConstant> {
    if cert.p != p || cert.kind != kind {
        return Err(Error::Mismatch(format!(
            "certificate was computed for p = {}, kind = {} but p = {p}, kind = {kind} was requested",
            cert.p, cert.kind
        )));
    }
    if !cert.certifies() {
        return Err(Error::UncertifiedChi);
    }
    let exponent = p as i32;
    let nu = set_norm(s, kind).powi(exponent).max(1.0) / cert.chi_lower;
    let hi = bracket(s, depth, kind)?.hi;
    let nu_sharp = hi.powi(exponent).max(1.0) / cert.chi_lower;
    Ok(LipschitzConstant { nu, nu_sharp, p, kind, chi_source: cert.clone() })
}

/// `min{ν_p(𝒜), ν_p(ℬ)} · H(𝒜, ℬ)`, valid when both sets are certified irreducible.
pub fn lipschitz_bound_pair(
    a: &MatrixSet,
    b: &MatrixSet,
    p: usize,
    kind: NormKind,
    cert_a: &IrreducibilityCertificate,
    cert_b: &IrreducibilityCertificate,
) -> Result<f64> {
    let nu_a = nu(a, p, kind, cert_a)?.nu;
    let nu_b = nu(b, p, kind, cert_b)?.nu;
    Ok(nu_a.min(nu_b) * hausdorff(a, b, kind)?)
}

/// How the perturbed set `ℬ` is drawn from `𝒜`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Perturbation {
    /// Independent uniform noise in `[−η, η]` on every entry of every member.
    Entrywise,
    /// Entrywise noise plus one extra member, a second noisy copy of a random member.
    Add,
    /// Entrywise noise, then one random member removed (sets of one member are kept as is).
    Drop,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub p: usize,
    pub kind: NormKind,
    pub eta: f64,
    pub trials: usize,
    pub seed: u64,
    /// Bracket depth for both sets.
    pub depth: usize,
    pub grid_count: usize,
    pub perturbation: Perturbation,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            p: 1,
            kind: NormKind::Two,
            eta: 0.05,
            trials: 100,
            seed: 0,
            depth: DEFAULT_DEPTH,
            grid_count: DEFAULT_CHI_GRID,
            perturbation: Perturbation::Entrywise,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl From<&Interval> for Bounds {
    fn from(i: &Interval) -> Self {
        Bounds { lo: i.lo, hi: i.hi }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trial {
    pub seed: u64,
    #[serde(rename = "H")]
    pub h: f64,
    #[serde(rename = "bracket_A")]
    pub bracket_a: Bounds,
    #[serde(rename = "bracket_B")]
    pub bracket_b: Bounds,
    pub nu: f64,
    /// Certified lower bound on `|ρ(𝒜) − ρ(ℬ)|`.
    pub lhs_lower: f64,
    pub rhs: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub trials: Vec<Trial>,
    pub violations: usize,
}

impl VerificationReport {
    pub fn from_trials(trials: Vec<Trial>) -> Self {
        let violations = trials.iter().filter(|t| t.verdict == Verdict::Fail).count();
        VerificationReport { trials, violations }
    }

    /// Largest observed `lhs_lower / H` over trials with `H > 0`.
    pub fn max_ratio(&self) -> f64 {
        self.trials.iter().filter(|t| t.h > 0.0).map(|t| t.lhs_lower / t.h).fold(0.0, f64::max)
    }
}

fn noisy(m: &Matrix, eta: f64, rng: &mut ChaCha8Rng) -> Matrix {
    let data = m.entries().iter().map(|v| v + eta * (2.0 * rng.gen::<f64>() - 1.0)).collect();
    Matrix::new(m.dim(), data).expect("finite perturbation of a finite matrix")
}

/// Draws `ℬ` from `𝒜` with the chosen model; deterministic in `rng`.
pub fn perturb(a: &MatrixSet, eta: f64, model: Perturbation, rng: &mut ChaCha8Rng) -> MatrixSet {
    let mut members: Vec<Matrix> = a.iter().map(|m| noisy(m, eta, rng)).collect();
    match model {
        Perturbation::Entrywise => {}
        Perturbation::Add => {
            let i = rng.gen_range(0..members.len());
            let extra = noisy(&members[i], eta, rng);
            members.push(extra);
        }
        Perturbation::Drop => {
            if members.len() > 1 {
                let i = rng.gen_range(0..members.len());
                members.remove(i);
            }
        }
    }
    MatrixSet::new(members).expect("nonempty, uniform dimension")
}

/// `max(0, lo_A − hi_B, lo_B − hi_A)`.
pub fn certified_gap(a: &Interval, b: &Interval) -> f64 {
    (a.lo - b.hi).max(b.lo - a.hi).max(0.0)
}

/// Runs `config.trials` independent perturbation trials against a certified `𝒜`.
///
/// Trial `i` is seeded with `config.seed + i`, so the report does not depend on
/// scheduling.
pub fn verify_theorem(a: &MatrixSet, config: &VerifyConfig) -> Result<VerificationReport> {
    if !(config.eta >= 0.0 && config.eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("eta must be finite and non-negative, got {}", config.eta)));
    }
    let cert = chi(a, config.p, config.kind, config.grid_count)?;
    let constant = nu_with_depth(a, config.p, config.kind, &cert, config.depth)?;
    let bracket_a = bracket(a, config.depth, config.kind)?;

    let trials = (0..config.trials)
        .into_par_iter()
        .map(|i| {
            let seed = config.seed.wrapping_add(i as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = perturb(a, config.eta, config.perturbation, &mut rng);
            let h = hausdorff(a, &b, config.kind)?;
            let bracket_b = bracket(&b, config.depth, config.kind)?;
            let lhs_lower = certified_gap(&bracket_a, &bracket_b);
            let rhs = constant.nu * h;
            let verdict = if lhs_lower <= rhs + VERDICT_TOL { Verdict::Pass } else { Verdict::Fail };
            Ok(Trial {
                seed,
                h,
                bracket_a: (&bracket_a).into(),
                bracket_b: (&bracket_b).into(),
                nu: constant.nu,
                lhs_lower,
                rhs,
                verdict,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::from_trials(trials))
}

/// The non-irreducible singleton `{[[1, 1], [ε, 1]]}`.
pub fn example1_matrix(eps: f64) -> Matrix {
    Matrix::from_rows(&[[1.0, 1.0], [eps, 1.0]]).expect("finite entries")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example1Row {
    pub epsilon: f64,
    pub rho_exact: f64,
    pub rho_computed: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Example1Table {
    pub rows: Vec<Example1Row>,
    /// Least-squares slope of `log|Δρ|` against `log H`; needs two distinct rows.
    pub slope: Option<f64>,
}

/// Tabulates `ρ(A_ε) − ρ(A_0)` against `H({A_ε}, {A_0})`.
pub fn example1_sweep(eps_list: &[f64], kind: NormKind) -> Result<Example1Table> {
    let base = MatrixSet::singleton(example1_matrix(0.0));
    let rho_base = spectral_radius(&base.members()[0]);
    let mut rows = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {eps}")));
        }
        let m = example1_matrix(eps);
        let rho_computed = spectral_radius(&m);
        let h = hausdorff(&MatrixSet::singleton(m), &base, kind)?;
        rows.push(Example1Row {
            epsilon: eps,
            rho_exact: 1.0 + eps.sqrt(),
            rho_computed,
            h,
            ratio: (rho_computed - rho_base).abs() / h,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.h.ln(), (r.rho_computed - rho_base).abs().ln())).collect();
    Ok(Example1Table { slope: least_squares_slope(&points), rows })
}

fn least_squares_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_rows(&[[a, b], [c, d]]).unwrap()
    }

    fn r90() -> MatrixSet {
        MatrixSet::singleton(m2(0.0, -1.0, 1.0, 0.0))
    }

    #[test]
    fn nu_for_rotation() {
        let s = r90();
        let cert = chi(&s, 1, NormKind::Two, 256).unwrap();
        let c = nu(&s, 1, NormKind::Two, &cert).unwrap();
        // 1 / (1/√2 − 2 sin(π/1024))
        assert!((c.nu - 1.426_592_810_250_943_5).abs() < 1e-9, "{}", c.nu);
        assert!(c.nu > std::f64::consts::SQRT_2);
        assert!(c.nu_sharp <= c.nu);
    }

    #[test]
    fn nu_for_scaled_rotation() {
        // orbit {x, 2Rx} spans a rhombus with inradius 2/√5 for every unit x
        let s = r90().scaled(2.0);
        let cert = chi(&s, 1, NormKind::Two, 256).unwrap();
        assert!((cert.chi_estimate - 0.894_427_190_999_916).abs() < 1e-9);
        let c = nu(&s, 1, NormKind::Two, &cert).unwrap();
        assert!((c.nu - 2.267_174_334_290_819).abs() < 1e-8, "{}", c.nu);
    }

    #[test]
    fn nu_requires_certificate() {
        let id = MatrixSet::singleton(Matrix::identity(2));
        let cert = chi(&id, 1, NormKind::Two, 64).unwrap();
        assert_eq!(nu(&id, 1, NormKind::Two, &cert), Err(Error::UncertifiedChi));
        let rcert = chi(&r90(), 1, NormKind::Two, 64).unwrap();
        assert!(matches!(nu(&r90(), 1, NormKind::Inf, &rcert), Err(Error::Mismatch(_))));
    }

    #[test]
    fn pair_bound_examples() {
        let a = r90();
        let ca = chi(&a, 1, NormKind::Inf, 256).unwrap();
        assert_eq!(lipschitz_bound_pair(&a, &a, 1, NormKind::Inf, &ca, &ca).unwrap(), 0.0);

        let b = MatrixSet::singleton(m2(0.0, -1.0, 1.001, 0.0));
        let cb = chi(&b, 1, NormKind::Inf, 256).unwrap();
        let h = hausdorff(&a, &b, NormKind::Inf).unwrap();
        assert!((h - 1e-3).abs() < 1e-15);
        let ab = lipschitz_bound_pair(&a, &b, 1, NormKind::Inf, &ca, &cb).unwrap();
        let ba = lipschitz_bound_pair(&b, &a, 1, NormKind::Inf, &cb, &ca).unwrap();
        assert_eq!(ab, ba);
        let nu_a = nu(&a, 1, NormKind::Inf, &ca).unwrap().nu;
        let nu_b = nu(&b, 1, NormKind::Inf, &cb).unwrap().nu;
        assert_eq!(ab, nu_a.min(nu_b) * h);
    }

    #[test]
    fn zero_noise_is_exact() {
        let cfg = VerifyConfig { eta: 0.0, trials: 5, ..VerifyConfig::default() };
        let report = verify_theorem(&r90(), &cfg).unwrap();
        assert_eq!(report.violations, 0);
        assert!(report.trials.iter().all(|t| t.h == 0.0 && t.lhs_lower == 0.0 && t.verdict == Verdict::Pass));
    }

    #[test]
    fn rotation_harness() {
        let cfg = VerifyConfig { eta: 0.01, trials: 100, seed: 3, ..VerifyConfig::default() };
        let report = verify_theorem(&r90(), &cfg).unwrap();
        assert_eq!(report.trials.len(), 100);
        assert_eq!(report.violations, 0);
        assert!(report.max_ratio() <= report.trials[0].nu);
    }

    #[test]
    fn cardinality_changing_models() {
        let a = MatrixSet::new(vec![m2(1.0, 1.0, 0.0, 1.0), m2(1.0, 0.0, 1.0, 1.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(perturb(&a, 0.1, Perturbation::Add, &mut rng).len(), 3);
        assert_eq!(perturb(&a, 0.1, Perturbation::Drop, &mut rng).len(), 1);
        for model in [Perturbation::Add, Perturbation::Drop] {
            let cfg = VerifyConfig { eta: 0.05, trials: 50, perturbation: model, ..VerifyConfig::default() };
            assert_eq!(verify_theorem(&a, &cfg).unwrap().violations, 0);
        }
    }

    #[test]
    fn harness_rejects_reducible_input() {
        let a0 = MatrixSet::singleton(example1_matrix(0.0));
        assert_eq!(verify_theorem(&a0, &VerifyConfig::default()), Err(Error::UncertifiedChi));
    }

    #[test]
    fn example1_rows() {
        let t = example1_sweep(&[0.04], NormKind::Inf).unwrap();
        let row = &t.rows[0];
        assert!((row.rho_exact - 1.2).abs() < 1e-15);
        assert!((row.rho_computed - 1.2).abs() < 1e-15);
        assert_eq!(row.h, 0.04);
        assert!((row.ratio - 5.0).abs() < 1e-12);
        assert_eq!(t.slope, None);
        assert!(example1_sweep(&[0.0], NormKind::Inf).is_err());
        assert!(example1_sweep(&[1.5], NormKind::Inf).is_err());
    }

    #[test]
    fn example1_slope_is_one_half() {
        let eps = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6];
        for kind in NormKind::ALL {
            let t = example1_sweep(&eps, kind).unwrap();
            assert!((t.slope.unwrap() - 0.5).abs() <= 0.02, "{kind}: {:?}", t.slope);
            assert!(t.rows.windows(2).all(|w| w[1].ratio > w[0].ratio));
        }
    }
}

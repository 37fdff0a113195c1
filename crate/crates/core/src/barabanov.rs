//! Numerical Barabanov norm of an irreducible planar matrix set.
//!
//! The norm is stored as `‖x‖_b = ‖x‖ · h(angle(x))` with `h` sampled on a uniform
//! angle grid and interpolated linearly. The grid values are found by the
//! nonlinear power iteration `h ← T[h] / ρ̂` with
//! `T[h](θ) = max_{A ∈ 𝒜} ‖A x_θ‖ · h(angle(A x_θ))`, whose fixed points satisfy
//! the extremal identity `ρ‖x‖_b = max_A ‖Ax‖_b` at every grid direction.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{angle_of, unit_direction};
use crate::irreducibility::{is_irreducible, Irreducibility, IrreducibilityCertificate};
use crate::jsr::{bracket, norm_bracket, NormBracket, DEFAULT_DEPTH};
use crate::linalg::{set_norm, vector_norm, MatrixSet, NormKind};

pub const DEFAULT_GRID: usize = 2048;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 10_000;
/// Leading iterations that use the monotone max-step before switching to averaging.
pub const WARMUP_ITERS: usize = 1_000;

/// Sampled Barabanov norm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormField {
    pub kind: NormKind,
    /// `θ_i = 2πi / N`.
    pub thetas: Vec<f64>,
    /// `h(θ_i) > 0`, normalised to `max h = 1`, with `h(θ + π) = h(θ)`.
    pub values: Vec<f64>,
    pub rho_hat: f64,
    /// `max_i |T[h](θ_i)/h(θ_i) − ρ̂|`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    #[serde(skip)]
    pub residual_history: Vec<f64>,
}

impl NormField {
    pub fn grid_count(&self) -> usize {
        self.values.len()
    }

    /// `h` at an arbitrary angle, linear between grid nodes.
    pub fn profile(&self, theta: f64) -> f64 {
        interpolate(&self.values, theta)
    }

    /// `‖x‖_b`.
    pub fn norm(&self, x: &[f64]) -> f64 {
        let base = vector_norm(x, self.kind);
        if base == 0.0 {
            return 0.0;
        }
        base * self.profile(angle_of(x))
    }

    /// Unit vectors (in the base norm) at the grid angles, with `x_{i+N/2} = −x_i`.
    pub fn grid_vectors(&self) -> Vec<Vec<f64>> {
        grid_vectors(self.grid_count(), self.kind).into_iter().map(|v| v.to_vec()).collect()
    }
}

fn interpolate(values: &[f64], theta: f64) -> f64 {
    let (i, frac) = locate(values.len(), theta);
    interpolate_at(values, i, frac)
}

#[inline]
fn interpolate_at(values: &[f64], i: usize, frac: f64) -> f64 {
    let j = if i + 1 == values.len() { 0 } else { i + 1 };
    values[i] * (1.0 - frac) + values[j] * frac
}

/// Grid cell and offset of an angle in `[0, 2π)`.
fn locate(n: usize, theta: f64) -> (usize, f64) {
    let pos = theta.rem_euclid(std::f64::consts::TAU) / std::f64::consts::TAU * n as f64;
    let i = (pos.floor() as usize).min(n - 1);
    (i, (pos - i as f64).clamp(0.0, 1.0))
}

fn grid_vectors(n: usize, kind: NormKind) -> Vec<[f64; 2]> {
    let half = n / 2;
    let mut out: Vec<[f64; 2]> =
        (0..half).map(|i| unit_direction(std::f64::consts::TAU * i as f64 / n as f64, kind)).collect();
    for i in 0..half {
        let v = out[i];
        out.push([-v[0], -v[1]]);
    }
    out
}

/// Precomputed image `‖A x_i‖` and interpolation cell of `angle(A x_i)`.
struct Image {
    scale: f64,
    cell: usize,
    frac: f64,
}

/// Runs the fixed-point iteration. Requires a certified irreducible planar set.
///
/// When `max_iters` is reached first, the last field is returned with
/// `converged = false`.
pub fn barabanov_iterate(
    s: &MatrixSet,
    kind: NormKind,
    grid_count: usize,
    max_iters: usize,
    tol: f64,
) -> Result<NormField> {
    s.require_dim(2)?;
    match is_irreducible(s, kind, 0.0)? {
        Irreducibility::Irreducible => {}
        Irreducibility::Reducible => return Err(Error::Reducible),
        Irreducibility::Undecided => return Err(Error::Undecided),
    }
    iterate_unchecked(s, kind, grid_count, max_iters, tol)
}

/// [`barabanov_iterate`] without the irreducibility precondition.
pub fn iterate_unchecked(
    s: &MatrixSet,
    kind: NormKind,
    grid_count: usize,
    max_iters: usize,
    tol: f64,
) -> Result<NormField> {
    s.require_dim(2)?;
    if grid_count < 8 || !grid_count.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("grid_count must be even and at least 8, got {grid_count}")));
    }
    if max_iters == 0 || tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter("max_iters and tol must be positive".into()));
    }
    let n = grid_count;
    let half = n / 2;
    let xs = grid_vectors(n, kind);
    // h(θ + π) = h(θ), so only the first half of the grid is updated
    let images: Vec<Vec<Image>> = xs[..half]
        .iter()
        .map(|x| {
            s.iter()
                .map(|a| {
                    let y = a.apply(x);
                    let scale = vector_norm(&y, kind);
                    let (cell, frac) = if scale > 0.0 { locate(n, angle_of(&y)) } else { (0, 0.0) };
                    Image { scale, cell, frac }
                })
                .collect()
        })
        .collect();

    let warmup = WARMUP_ITERS.min(max_iters / 2);
    let mut h = vec![1.0; n];
    let mut next = vec![0.0; n];
    let mut history = Vec::new();
    let mut field = None;
    for iteration in 1..=max_iters {
        for (i, imgs) in images.iter().enumerate() {
            let v = imgs
                .iter()
                .map(|img| if img.scale > 0.0 { img.scale * interpolate_at(&h, img.cell, img.frac) } else { 0.0 })
                .fold(0.0, f64::max);
            next[i] = v;
            next[i + half] = v;
        }
        let (mut rmin, mut rmax) = (f64::INFINITY, 0.0_f64);
        for i in 0..half {
            let r = next[i] / h[i];
            rmin = rmin.min(r);
            rmax = rmax.max(r);
        }
        if !(rmin > 0.0 && rmax.is_finite()) {
            return Err(Error::InvalidParameter("fixed-point iteration degenerated to a zero profile".into()));
        }
        let rho_hat = (rmin * rmax).sqrt();
        let residual = (rmax - rho_hat).max(rho_hat - rmin);
        history.push(residual);
        let converged = residual <= tol * rho_hat;
        if converged || iteration == max_iters {
            field = Some(NormField {
                kind,
                thetas: (0..n).map(|i| std::f64::consts::TAU * i as f64 / n as f64).collect(),
                values: h.clone(),
                rho_hat,
                residual,
                iterations: iteration,
                converged,
                residual_history: std::mem::take(&mut history),
            });
            break;
        }
        if iteration <= warmup {
            // monotone step: approaches the orbit supremum, fast on rotation-like members
            for (hv, nv) in h.iter_mut().zip(&next) {
                *hv = hv.max(nv / rho_hat);
            }
        } else {
            // averaged step h ← (h + T[h]/ρ̂)/2 shares the fixed points of T and cannot cycle
            for (hv, nv) in h.iter_mut().zip(&next) {
                *hv = 0.5 * (*hv + nv / rho_hat);
            }
        }
        let top = h.iter().fold(0.0_f64, |m, &v| m.max(v));
        for hv in h.iter_mut() {
            *hv /= top;
        }
    }
    Ok(field.expect("max_iters is positive"))
}

/// Extreme values of `‖x‖_b / ‖x‖` and where they occur.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eccentricity {
    pub e_minus: f64,
    pub e_plus: f64,
    pub ecc: f64,
    pub argmin: [f64; 2],
    pub argmax: [f64; 2],
}

/// Eccentricity of the field's norm with respect to its base norm.
///
/// The ratio `‖x‖_b/‖x‖` is the piecewise-linear profile `h`, so its extrema sit
/// on grid nodes.
pub fn eccentricity(field: &NormField) -> Eccentricity {
    let (mut imin, mut imax) = (0, 0);
    for (i, &v) in field.values.iter().enumerate() {
        if v < field.values[imin] {
            imin = i;
        }
        if v > field.values[imax] {
            imax = i;
        }
    }
    let xs = grid_vectors(field.grid_count(), field.kind);
    let (e_minus, e_plus) = (field.values[imin], field.values[imax]);
    Eccentricity { e_minus, e_plus, ecc: e_plus / e_minus, argmin: xs[imin], argmax: xs[imax] }
}

/// Outcome of comparing the eccentricity with the Lipschitz constants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NuBoundReport {
    pub ecc: f64,
    pub nu: f64,
    pub nu_sharp: f64,
    /// Multiplier `(1 + residual/ρ̂)^p` granted to both bounds for the fixed-point defect.
    pub allowance: f64,
    pub pass_nu: bool,
    pub pass_sharp: bool,
    pub slack_nu: f64,
    pub slack_sharp: f64,
    pub residual: f64,
}

/// Checks `ecc(‖·‖_b, ‖·‖) ≤ ν_p(𝒜)` and the variant with `ρ(𝒜)` replaced by a
/// certified upper bound.
///
/// On the grid, products of `k` members grow `‖·‖_b` by at most `(ρ̂ + residual)^k`,
/// so both bounds are widened by `(1 + residual/ρ̂)^p` before comparing.
pub fn check_nubound(field: &NormField, cert: &IrreducibilityCertificate, s: &MatrixSet) -> Result<NuBoundReport> {
    if field.kind != cert.kind {
        return Err(Error::Mismatch(format!("field uses {} but certificate uses {}", field.kind, cert.kind)));
    }
    if !cert.certifies() {
        return Err(Error::UncertifiedChi);
    }
    let p = cert.p as i32;
    let ecc = eccentricity(field).ecc;
    let nu = set_norm(s, cert.kind).powi(p).max(1.0) / cert.chi_lower;
    let hi = bracket(s, DEFAULT_DEPTH, cert.kind)?.hi;
    let nu_sharp = hi.powi(p).max(1.0) / cert.chi_lower;
    let allowance = (1.0 + field.residual / field.rho_hat).powi(p);
    Ok(NuBoundReport {
        ecc,
        nu,
        nu_sharp,
        allowance,
        pass_nu: ecc <= nu * allowance,
        pass_sharp: ecc <= nu_sharp * allowance,
        slack_nu: nu * allowance - ecc,
        slack_sharp: nu_sharp * allowance - ecc,
        residual: field.residual,
    })
}

/// Growth bounds of the field's own norm over its grid directions.
pub fn bracket_from_field(field: &NormField, s: &MatrixSet) -> Result<NormBracket> {
    norm_bracket(s, |x| field.norm(x), &field.grid_vectors())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irreducibility::chi;
    use crate::linalg::Matrix;

    const PHI: f64 = 1.618_033_988_749_895;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_rows(&[[a, b], [c, d]]).unwrap()
    }

    fn r90() -> MatrixSet {
        MatrixSet::singleton(m2(0.0, -1.0, 1.0, 0.0))
    }

    fn golden_pair() -> MatrixSet {
        MatrixSet::new(vec![m2(1.0, 1.0, 0.0, 1.0), m2(1.0, 0.0, 1.0, 1.0)]).unwrap()
    }

    #[test]
    fn rotation_keeps_euclidean_norm() {
        let f = barabanov_iterate(&r90(), NormKind::Two, 256, 100, 1e-12).unwrap();
        assert!(f.converged);
        assert!(f.values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
        assert!((f.rho_hat - 1.0).abs() < 1e-14);
        assert!(f.residual <= 1e-14);
    }

    #[test]
    fn scaled_rotation() {
        let s = r90().scaled(3.0);
        let f = barabanov_iterate(&s, NormKind::Two, 256, 100, 1e-12).unwrap();
        assert!((f.rho_hat - 3.0).abs() < 1e-13);
        assert!(f.values.iter().all(|&v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn golden_pair_converges_to_phi() {
        let f = barabanov_iterate(&golden_pair(), NormKind::Two, 2048, DEFAULT_MAX_ITERS, 1e-8).unwrap();
        assert!(f.converged, "residual {} after {} iterations", f.residual, f.iterations);
        assert!((f.rho_hat - PHI).abs() <= 1e-3, "{}", f.rho_hat);
        assert!(f.residual <= 1e-8 * f.rho_hat);
    }

    #[test]
    fn reducible_input_is_rejected() {
        let two_i = MatrixSet::singleton(Matrix::identity(2).scaled(2.0));
        assert_eq!(barabanov_iterate(&two_i, NormKind::Two, 256, 10, 1e-8), Err(Error::Reducible));
        let a0 = MatrixSet::singleton(m2(1.0, 1.0, 0.0, 1.0));
        assert_eq!(barabanov_iterate(&a0, NormKind::Inf, 256, 10, 1e-8), Err(Error::Reducible));
    }

    #[test]
    fn non_convergence_is_flagged() {
        let f = iterate_unchecked(&golden_pair(), NormKind::Two, 512, 2, 1e-14).unwrap();
        assert!(!f.converged);
        assert_eq!(f.iterations, 2);
    }

    #[test]
    fn eccentricity_of_profiles() {
        let mut f = barabanov_iterate(&r90(), NormKind::Two, 64, 10, 1e-12).unwrap();
        assert_eq!(eccentricity(&f).ecc, 1.0);
        f.values[5] = 0.5;
        f.values[37] = 0.5;
        let e = eccentricity(&f);
        assert_eq!((e.e_minus, e.e_plus, e.ecc), (0.5, 1.0, 2.0));
    }

    #[test]
    fn nubound_for_rotation() {
        let s = r90();
        let f = barabanov_iterate(&s, NormKind::Two, 256, 10, 1e-12).unwrap();
        let cert = chi(&s, 1, NormKind::Two, 256).unwrap();
        let report = check_nubound(&f, &cert, &s).unwrap();
        assert_eq!(report.ecc, 1.0);
        assert!((report.nu - 1.0 / cert.chi_lower).abs() < 1e-14);
        assert!((report.nu - 1.426_592_810_250_943_5).abs() < 1e-9);
        assert!(report.pass_nu && report.pass_sharp);
    }

    #[test]
    fn nubound_rejects_mismatch_and_uncertified() {
        let s = r90();
        let f = barabanov_iterate(&s, NormKind::Two, 64, 10, 1e-12).unwrap();
        let cert = chi(&s, 1, NormKind::Inf, 64).unwrap();
        assert!(matches!(check_nubound(&f, &cert, &s), Err(Error::Mismatch(_))));
        let mut cert = chi(&s, 1, NormKind::Two, 64).unwrap();
        cert.chi_lower = 0.0;
        assert_eq!(check_nubound(&f, &cert, &s), Err(Error::UncertifiedChi));
    }

    #[test]
    fn field_bracket_for_rotation() {
        let f = barabanov_iterate(&r90(), NormKind::Two, 128, 10, 1e-12).unwrap();
        let nb = bracket_from_field(&f, &r90()).unwrap();
        assert!((nb.alpha - 1.0).abs() < 1e-14 && (nb.beta - 1.0).abs() < 1e-14);
    }

    #[test]
    fn profile_is_symmetric_and_homogeneous() {
        let f = barabanov_iterate(&golden_pair(), NormKind::Two, 512, DEFAULT_MAX_ITERS, 1e-8).unwrap();
        let half = f.grid_count() / 2;
        for i in 0..half {
            assert_eq!(f.values[i], f.values[i + half]);
        }
        let x = [0.3, -1.7];
        let nx = f.norm(&x);
        assert!((f.norm(&[2.5 * x[0], 2.5 * x[1]]) - 2.5 * nx).abs() <= 1e-12 * nx);
        assert!((f.norm(&[-x[0], -x[1]]) - nx).abs() <= 1e-12 * nx);
    }
}

//! Two-sided bounds on the joint spectral radius of a finite matrix set.
//!
//! Upper bounds come from `ρ(𝒜) = inf_k ‖𝒜^k‖^{1/k}`, lower bounds from
//! `ρ(𝒜) ≥ ρ(P)^{1/k}` for every product `P ∈ 𝒜^k`. Both are exhaustive over
//! all words up to the requested depth, so every endpoint is a valid certificate.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, Matrix, MatrixSet, NormKind};
use crate::semigroup::{visit_words, Word, DEFAULT_WORD_BUDGET};

/// Default product depth for brackets.
pub const DEFAULT_DEPTH: usize = 8;

/// Largest eigenvalue modulus.
///
/// Closed form for `d ≤ 2`; a real Schur decomposition otherwise.
pub fn spectral_radius(m: &Matrix) -> f64 {
    match m.dim() {
        1 => m.get(0, 0).abs(),
        2 => {
            let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
            let half_trace = 0.5 * (a + d);
            let half_gap = 0.5 * (a - d);
            // (λ - half_trace)^2 = half_gap^2 + bc, written to avoid cancellation
            let disc = half_gap * half_gap + b * c;
            if disc >= 0.0 {
                half_trace.abs() + disc.sqrt()
            } else {
                // complex pair: |λ|^2 = det
                (half_trace * half_trace - disc).sqrt()
            }
        }
        _ => m.to_nalgebra().complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max),
    }
}

/// A certified enclosure `lo ≤ ρ(𝒜) ≤ hi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Product whose spectral radius gives `lo`.
    pub lo_witness: Word,
    /// Length `k` minimising `‖𝒜^k‖^{1/k}`.
    pub hi_depth: usize,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lo <= value && value <= self.hi
    }
}

/// Per-length maxima over all words of length `1..=n`.
struct DepthScan {
    /// `max_{P ∈ 𝒜^k} ‖P‖`, index `k - 1`.
    max_norm: Vec<f64>,
    best_lower: f64,
    best_word: Vec<usize>,
}

fn scan(s: &MatrixSet, n: usize, kind: Option<NormKind>, budget: usize) -> Result<DepthScan> {
    if n == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let mut out = DepthScan { max_norm: vec![0.0; n], best_lower: -1.0, best_word: Vec::new() };
    visit_words(s, n, budget, |word, product| {
        let k = word.len();
        if let Some(kind) = kind {
            let nrm = operator_norm(product, kind);
            if nrm > out.max_norm[k - 1] {
                out.max_norm[k - 1] = nrm;
            }
        }
        let lower = root(spectral_radius(product), k);
        if lower > out.best_lower {
            out.best_lower = lower;
            out.best_word.clear();
            out.best_word.extend_from_slice(word);
        }
    })?;
    Ok(out)
}

fn root(value: f64, k: usize) -> f64 {
    if k == 1 {
        value
    } else {
        value.powf(1.0 / k as f64)
    }
}

fn best_upper(max_norm: &[f64]) -> (f64, usize) {
    let mut best = (f64::INFINITY, 1);
    for (i, &v) in max_norm.iter().enumerate() {
        let candidate = root(v, i + 1);
        if candidate < best.0 {
            best = (candidate, i + 1);
        }
    }
    best
}

/// `min_{1 ≤ k ≤ n} ‖𝒜^k‖^{1/k}` and the minimising `k`.
pub fn upper_bound_gelfand(s: &MatrixSet, n: usize, kind: NormKind) -> Result<(f64, usize)> {
    upper_bound_gelfand_with_budget(s, n, kind, DEFAULT_WORD_BUDGET)
}

pub fn upper_bound_gelfand_with_budget(s: &MatrixSet, n: usize, kind: NormKind, budget: usize) -> Result<(f64, usize)> {
    let scan = scan(s, n, Some(kind), budget)?;
    Ok(best_upper(&scan.max_norm))
}

/// `max_{1 ≤ k ≤ n, P ∈ 𝒜^k} ρ(P)^{1/k}` and the first word attaining it
/// (depth-first order, so `A` precedes `AA` precedes `AB` precedes `B`).
pub fn lower_bound_spectral(s: &MatrixSet, n: usize) -> Result<(f64, Word)> {
    lower_bound_spectral_with_budget(s, n, DEFAULT_WORD_BUDGET)
}

pub fn lower_bound_spectral_with_budget(s: &MatrixSet, n: usize, budget: usize) -> Result<(f64, Word)> {
    let scan = scan(s, n, None, budget)?;
    Ok((scan.best_lower, Word(scan.best_word)))
}

pub fn bracket(s: &MatrixSet, n: usize, kind: NormKind) -> Result<Interval> {
    bracket_with_budget(s, n, kind, DEFAULT_WORD_BUDGET)
}

pub fn bracket_with_budget(s: &MatrixSet, n: usize, kind: NormKind, budget: usize) -> Result<Interval> {
    let scan = scan(s, n, Some(kind), budget)?;
    let (hi, hi_depth) = best_upper(&scan.max_norm);
    // ρ(P) ≤ ‖P‖ holds exactly; only rounding can invert the endpoints
    let lo = scan.best_lower.min(hi);
    Ok(Interval { lo, hi, lo_witness: Word(scan.best_word), hi_depth })
}

/// Growth bounds `(α, β)` of a norm over sample directions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormBracket {
    pub alpha: f64,
    pub beta: f64,
}

/// `α = max_x max_A ‖Ax‖′/‖x‖′` and `β = min_x max_A ‖Ax‖′/‖x‖′` over `samples`.
///
/// When the inequalities hold for every `x`, `β ≤ ρ(𝒜) ≤ α`. Over a finite sample
/// `α` can only under-estimate the true supremum and `β` can only over-estimate
/// the true infimum, so the result is not by itself a certificate.
pub fn norm_bracket<F>(s: &MatrixSet, norm_eval: F, samples: &[Vec<f64>]) -> Result<NormBracket>
where
    F: Fn(&[f64]) -> f64,
{
    if samples.is_empty() {
        return Err(Error::InvalidParameter("norm_bracket needs at least one sample".into()));
    }
    let mut alpha = f64::NEG_INFINITY;
    let mut beta = f64::INFINITY;
    for (index, x) in samples.iter().enumerate() {
        if x.len() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), found: x.len() });
        }
        let base = norm_eval(x);
        if !(base.is_finite() && base > 0.0) {
            return Err(Error::BadNormValue { index, value: base });
        }
        let mut growth = 0.0_f64;
        for a in s {
            let v = norm_eval(&a.apply(x));
            if !v.is_finite() {
                return Err(Error::BadNormValue { index, value: v });
            }
            growth = growth.max(v / base);
        }
        alpha = alpha.max(growth);
        beta = beta.min(growth);
    }
    Ok(NormBracket { alpha, beta })
}

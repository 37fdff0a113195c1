//! Orbits `𝒜_p(x)`, the `p`-measure of irreducibility `χ_p(𝒜)` and irreducibility tests.
//!
//! `χ_p(𝒜) = inf_{‖x‖=1} r(x)` where `r(x)` is the radius of the largest ball
//! inscribed in `conv(𝒜_p(x) ∪ −𝒜_p(x))`. The infimum is taken over an angle grid
//! and then lowered by `L·δ`, with `L = max{1, ‖𝒜‖^p}` bounding how far orbit points
//! move when `x` moves and `δ` the covering radius of the grid. Since the inscribed
//! radius is 1-Lipschitz under Hausdorff perturbation of the body, the corrected
//! value is a lower bound on the true `χ_p`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{covering_radius, inscribed_radius_planar, unit_direction};
use crate::linalg::{operator_norm, set_norm, vector_norm, Matrix, MatrixSet, NormKind};
use crate::semigroup::{semigroup_up_to, ProductSemigroup};

/// Grid size used by [`is_irreducible`].
pub const DEFAULT_CHI_GRID: usize = 256;
/// Tolerance of the common-eigenvector test.
pub const ALGEBRA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
}

/// `{Wx : W ∈ 𝒜_p}`; the first point is `x` itself.
pub fn orbit(s: &MatrixSet, p: usize, x: &[f64]) -> Result<PointCloud> {
    if x.len() != s.dim() {
        return Err(Error::DimensionMismatch { expected: s.dim(), found: x.len() });
    }
    if vector_norm(x, NormKind::Inf) == 0.0 {
        return Err(Error::ZeroVector);
    }
    let group = semigroup_up_to(s, p)?;
    Ok(orbit_in(&group, x))
}

pub fn orbit_in(group: &ProductSemigroup, x: &[f64]) -> PointCloud {
    PointCloud { dim: group.base.dim(), points: group.products().map(|w| w.apply(x)).collect() }
}

/// Inscribed radius of the symmetric hull of `cloud` (exact, planar only).
pub fn inscribed_radius(cloud: &PointCloud, kind: NormKind) -> Result<f64> {
    if cloud.dim != 2 {
        return Err(Error::UnsupportedDimension(cloud.dim));
    }
    if cloud.points.is_empty() {
        return Err(Error::InvalidParameter("empty point cloud".into()));
    }
    let pts: Vec<[f64; 2]> = cloud.points.iter().map(|p| [p[0], p[1]]).collect();
    Ok(inscribed_radius_planar(&pts, kind))
}

/// Certified lower bound on `χ_p(𝒜)` with the parameters that justify it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibilityCertificate {
    pub p: usize,
    pub kind: NormKind,
    pub chi_estimate: f64,
    pub chi_lower: f64,
    pub grid_count: usize,
    #[serde(rename = "lipschitz_L")]
    pub lipschitz_l: f64,
    pub covering_delta: f64,
}

impl IrreducibilityCertificate {
    pub fn certifies(&self) -> bool {
        self.chi_lower > 0.0
    }
}

fn radius_at(group: &ProductSemigroup, theta: f64, kind: NormKind) -> f64 {
    let x = unit_direction(theta, kind);
    let pts: Vec<[f64; 2]> = group
        .products()
        .map(|w| [w.get(0, 0) * x[0] + w.get(0, 1) * x[1], w.get(1, 0) * x[0] + w.get(1, 1) * x[1]])
        .collect();
    inscribed_radius_planar(&pts, kind)
}

/// Grid estimate of `χ_p` over `θ_j = jπ/grid_count` and its certified lower bound.
pub fn chi(s: &MatrixSet, p: usize, kind: NormKind, grid_count: usize) -> Result<IrreducibilityCertificate> {
    s.require_dim(2)?;
    if p == 0 {
        return Err(Error::InvalidParameter("p must be positive".into()));
    }
    if grid_count < 8 {
        return Err(Error::InvalidParameter(format!("grid_count must be at least 8, got {grid_count}")));
    }
    let group = semigroup_up_to(s, p)?;
    let step = std::f64::consts::PI / grid_count as f64;
    let radii: Vec<f64> = (0..grid_count).into_par_iter().map(|j| radius_at(&group, j as f64 * step, kind)).collect();
    let chi_estimate = radii.iter().cloned().fold(f64::INFINITY, f64::min);

    let lipschitz_l = set_norm(s, kind).powi(p as i32).max(1.0);
    let covering_delta = covering_radius(grid_count, kind);
    // every dyadic sub-grid yields its own sound bound; keeping the best makes refinement monotone
    let mut chi_lower = chi_estimate - lipschitz_l * covering_delta;
    let mut stride = 2;
    while grid_count.is_multiple_of(stride) && grid_count / stride >= 8 {
        let coarse = radii.iter().step_by(stride).cloned().fold(f64::INFINITY, f64::min);
        chi_lower = chi_lower.max(coarse - lipschitz_l * covering_radius(grid_count / stride, kind));
        stride *= 2;
    }
    let chi_lower = chi_lower.max(0.0);
    Ok(IrreducibilityCertificate { p, kind, chi_estimate, chi_lower, grid_count, lipschitz_l, covering_delta })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Undecided,
}

/// Decides irreducibility of a planar set from `χ_1` at the default grid.
pub fn is_irreducible(s: &MatrixSet, kind: NormKind, tol: f64) -> Result<Irreducibility> {
    s.require_dim(2)?;
    is_irreducible_with(s, kind, tol, s.dim() - 1, DEFAULT_CHI_GRID)
}

/// Combines the `χ_p` certificate with the common-eigenvector test.
///
/// A positive certified `χ_p` means irreducible, a common invariant line means
/// reducible. If the two disagree, or the grid is too coarse to certify, the
/// answer is [`Irreducibility::Undecided`]. Estimates at or below `tol` are
/// never taken as evidence of irreducibility.
pub fn is_irreducible_with(
    s: &MatrixSet,
    kind: NormKind,
    tol: f64,
    p: usize,
    grid_count: usize,
) -> Result<Irreducibility> {
    let cert = chi(s, p, kind, grid_count)?;
    let algebraic = algebra_span_irreducible(s)?;
    let certified = cert.certifies() && cert.chi_estimate > tol;
    Ok(match (certified, algebraic) {
        (true, true) => Irreducibility::Irreducible,
        (false, false) if !cert.certifies() => Irreducibility::Reducible,
        _ => Irreducibility::Undecided,
    })
}

/// Real eigen-directions of a non-scalar 2×2 matrix, or `None` for a scalar matrix.
fn eigen_lines(m: &Matrix) -> Option<Vec<[f64; 2]>> {
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    if b.abs() <= ALGEBRA_TOL * scale && c.abs() <= ALGEBRA_TOL * scale && (a - d).abs() <= ALGEBRA_TOL * scale {
        return None;
    }
    let half_trace = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let disc = half_gap * half_gap + b * c;
    if disc < -ALGEBRA_TOL * scale * scale {
        return Some(Vec::new());
    }
    let root = disc.max(0.0).sqrt();
    let mut lines = Vec::new();
    for lambda in [half_trace + root, half_trace - root] {
        let r1 = [a - lambda, b];
        let r2 = [c, d - lambda];
        let row = if r1[0].hypot(r1[1]) >= r2[0].hypot(r2[1]) { r1 } else { r2 };
        let v = [row[1], -row[0]];
        let n = v[0].hypot(v[1]);
        if n > 0.0 {
            lines.push([v[0] / n, v[1] / n]);
        }
    }
    Some(lines)
}

fn leaves_line_invariant(m: &Matrix, v: [f64; 2]) -> bool {
    let w = m.apply(&v);
    let cross = w[0] * v[1] - w[1] * v[0];
    cross.abs() <= ALGEBRA_TOL * operator_norm(m, NormKind::Two).max(f64::MIN_POSITIVE)
}

/// True iff the members share no real invariant line (planar sets only).
pub fn algebra_span_irreducible(s: &MatrixSet) -> Result<bool> {
    s.require_dim(2)?;
    let Some(candidates) = s.iter().find_map(eigen_lines) else {
        // every member is scalar
        return Ok(false);
    };
    let shared = candidates.iter().any(|&v| s.iter().all(|m| leaves_line_invariant(m, v)));
    Ok(!shared)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

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
    fn orbit_examples() {
        let id = MatrixSet::singleton(Matrix::identity(2));
        let cloud = orbit(&id, 3, &[0.3, -0.2]).unwrap();
        assert!(cloud.points.iter().all(|p| p == &vec![0.3, -0.2]));

        assert_eq!(orbit(&r90(), 1, &[1.0, 0.0]).unwrap().points, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);

        let a0 = MatrixSet::singleton(m2(1.0, 1.0, 0.0, 1.0));
        assert_eq!(orbit(&a0, 2, &[0.0, 1.0]).unwrap().points, vec![vec![0.0, 1.0], vec![1.0, 1.0], vec![2.0, 1.0]]);
        assert_eq!(orbit(&a0, 2, &[0.0, 0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn inscribed_radius_examples() {
        let single = PointCloud { dim: 2, points: vec![vec![0.4, 0.9]] };
        assert_eq!(inscribed_radius(&single, NormKind::Two).unwrap(), 0.0);
        let diamond = PointCloud { dim: 2, points: vec![vec![1.0, 0.0], vec![0.0, 1.0]] };
        assert!((inscribed_radius(&diamond, NormKind::Two).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((inscribed_radius(&diamond, NormKind::Inf).unwrap() - 0.5).abs() < 1e-12);
        let cube = PointCloud { dim: 3, points: vec![vec![1.0, 0.0, 0.0]] };
        assert_eq!(inscribed_radius(&cube, NormKind::Two), Err(Error::UnsupportedDimension(3)));
    }

    #[test]
    fn chi_identity_is_zero() {
        let cert = chi(&MatrixSet::singleton(Matrix::identity(2)), 1, NormKind::Two, 64).unwrap();
        assert_eq!(cert.chi_estimate, 0.0);
        assert_eq!(cert.chi_lower, 0.0);
    }

    #[test]
    fn chi_rotation_is_constant() {
        let cert = chi(&r90(), 1, NormKind::Two, 256).unwrap();
        assert!((cert.chi_estimate - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert_eq!(cert.lipschitz_l, 1.0);
        assert_eq!(cert.chi_lower, cert.chi_estimate - cert.lipschitz_l * cert.covering_delta);
    }

    #[test]
    fn chi_golden_pair_matches_oracle() {
        // dense-direction oracle: the minimum sits at x = e1 where the hull of
        // ±(1,0), ±(1,1) has inradius 1/√5
        let cert = chi(&golden_pair(), 1, NormKind::Two, 1024).unwrap();
        assert!((cert.chi_estimate - 0.447_213_595_499_957_9).abs() < 1e-9, "{}", cert.chi_estimate);
        assert!(cert.chi_lower > 0.0);
        assert!((cert.chi_lower - 0.444_731_562_690_422_3).abs() < 1e-9);
    }

    #[test]
    fn chi_argument_checks() {
        let cube = MatrixSet::singleton(Matrix::identity(3));
        assert_eq!(chi(&cube, 2, NormKind::Two, 64), Err(Error::UnsupportedDimension(3)));
        assert!(chi(&r90(), 1, NormKind::Two, 4).is_err());
        assert!(chi(&r90(), 0, NormKind::Two, 64).is_err());
    }

    #[test]
    fn deciders_on_examples() {
        let a0 = MatrixSet::singleton(m2(1.0, 1.0, 0.0, 1.0));
        assert_eq!(is_irreducible(&a0, NormKind::Two, 1e-6).unwrap(), Irreducibility::Reducible);
        assert_eq!(is_irreducible(&r90(), NormKind::Two, 1e-6).unwrap(), Irreducibility::Irreducible);
        let id = MatrixSet::singleton(Matrix::identity(2));
        assert_eq!(is_irreducible(&id, NormKind::Inf, 1e-6).unwrap(), Irreducibility::Reducible);
    }

    #[test]
    fn algebraic_oracle_examples() {
        let upper = MatrixSet::new(vec![m2(1.0, 2.0, 0.0, 3.0), m2(-1.0, 0.5, 0.0, 2.0)]).unwrap();
        assert!(!algebra_span_irreducible(&upper).unwrap());
        assert!(algebra_span_irreducible(&r90()).unwrap());
        assert!(algebra_span_irreducible(&golden_pair()).unwrap());
        // distinct diagonal matrices share both axes
        let diag = MatrixSet::new(vec![m2(1.0, 0.0, 0.0, 2.0), m2(3.0, 0.0, 0.0, -1.0)]).unwrap();
        assert!(!algebra_span_irreducible(&diag).unwrap());
        // a Jordan block and a rotation share nothing
        let mixed = MatrixSet::new(vec![m2(1.0, 1.0, 0.0, 1.0), m2(0.0, -1.0, 1.0, 0.0)]).unwrap();
        assert!(algebra_span_irreducible(&mixed).unwrap());
    }
}

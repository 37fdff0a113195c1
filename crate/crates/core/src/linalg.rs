//! Small dense real matrices, finite matrix sets and the ℓ1 / ℓ2 / ℓ∞ norms.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vector norm selector. Operator norms are the induced ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    One,
    Two,
    Inf,
}

impl NormKind {
    pub const ALL: [NormKind; 3] = [NormKind::One, NormKind::Two, NormKind::Inf];

    pub fn dual(self) -> NormKind {
        match self {
            NormKind::One => NormKind::Inf,
            NormKind::Two => NormKind::Two,
            NormKind::Inf => NormKind::One,
        }
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormKind::One => "one",
            NormKind::Two => "two",
            NormKind::Inf => "inf",
        })
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "one" | "1" | "l1" => Ok(NormKind::One),
            "two" | "2" | "l2" => Ok(NormKind::Two),
            "inf" | "infinity" | "linf" => Ok(NormKind::Inf),
            other => Err(Error::InvalidParameter(format!("unknown norm kind `{other}`"))),
        }
    }
}

pub fn vector_norm(x: &[f64], kind: NormKind) -> f64 {
    match kind {
        NormKind::One => x.iter().map(|v| v.abs()).sum(),
        NormKind::Two => {
            // scaled to avoid overflow for large entries
            let scale = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                return 0.0;
            }
            scale * x.iter().map(|v| (v / scale).powi(2)).sum::<f64>().sqrt()
        }
        NormKind::Inf => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
    }
}

/// [`vector_norm`] with a check against the declared dimension.
pub fn vector_norm_checked(x: &[f64], dim: usize, kind: NormKind) -> Result<f64> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: x.len() });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("vector has non-finite entries".into()));
    }
    Ok(vector_norm(x, kind))
}

/// A unit vector `u` in the dual norm with `<u, x> = ‖x‖`.
///
/// Returns the zero vector when `x = 0`.
pub fn dual_witness(x: &[f64], kind: NormKind) -> Vec<f64> {
    let norm = vector_norm(x, kind);
    if norm == 0.0 {
        return vec![0.0; x.len()];
    }
    match kind {
        NormKind::One => x.iter().map(|&v| if v < 0.0 { -1.0 } else { 1.0 }).collect(),
        NormKind::Two => x.iter().map(|v| v / norm).collect(),
        NormKind::Inf => {
            let (imax, _) = x
                .iter()
                .enumerate()
                .fold((0, -1.0), |(bi, bv), (i, v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
            let mut u = vec![0.0; x.len()];
            u[imax] = x[imax].signum();
            u
        }
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dense square real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::InvalidShape);
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: pos / dim, col: pos % dim });
        }
        Ok(Matrix { dim, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            if row.len() != dim {
                return Err(Error::InvalidShape);
            }
            data.extend_from_slice(row);
        }
        Matrix::new(dim, data)
    }

    pub fn identity(dim: usize) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            data[i * dim + i] = 1.0;
        }
        Matrix { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![0.0; dim * dim] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn scaled(&self, c: f64) -> Matrix {
        Matrix { dim: self.dim, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let d = self.dim;
        let mut data = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                data[j * d + i] = self.data[i * d + j];
            }
        }
        Matrix { dim: d, data }
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        mul_into(self, rhs, &mut out);
        out
    }

    /// `self · x`. Panics if `x.len() != dim`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "vector length must match matrix dimension");
        self.data.chunks(self.dim).map(|row| dot(row, x)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }
}

/// `out = a · b` without allocating.
pub fn mul_into(a: &Matrix, b: &Matrix, out: &mut Matrix) {
    let d = a.dim;
    debug_assert_eq!(d, b.dim);
    debug_assert_eq!(d, out.dim);
    if d == 2 {
        let (x, y) = (&a.data, &b.data);
        out.data[0] = x[0] * y[0] + x[1] * y[2];
        out.data[1] = x[0] * y[1] + x[1] * y[3];
        out.data[2] = x[2] * y[0] + x[3] * y[2];
        out.data[3] = x[2] * y[1] + x[3] * y[3];
        return;
    }
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += a.data[i * d + k] * b.data[k * d + j];
            }
            out.data[i * d + j] = s;
        }
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        Matrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim);
        Matrix { dim: self.dim, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

/// Induced operator norm: max column sum (ONE), largest singular value (TWO), max row sum (INF).
pub fn operator_norm(m: &Matrix, kind: NormKind) -> f64 {
    let d = m.dim;
    match kind {
        NormKind::One => (0..d).map(|j| (0..d).map(|i| m.get(i, j).abs()).sum::<f64>()).fold(0.0, f64::max),
        NormKind::Inf => m.data.chunks(d).map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max),
        NormKind::Two => spectral_norm(m),
    }
}

fn spectral_norm(m: &Matrix) -> f64 {
    match m.dim {
        1 => m.data[0].abs(),
        2 => {
            // σ_max = (hypot(a+d, c-b) + hypot(a-d, b+c)) / 2
            let [a, b, c, d] = [m.data[0], m.data[1], m.data[2], m.data[3]];
            0.5 * ((a + d).hypot(c - b) + (a - d).hypot(b + c))
        }
        _ => m.to_nalgebra().singular_values().iter().fold(0.0, |acc, &s| acc.max(s)),
    }
}

/// A finite nonempty set of equally sized square matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSet {
    dim: usize,
    members: Vec<Matrix>,
}

impl MatrixSet {
    pub fn new(members: Vec<Matrix>) -> Result<Self> {
        let first = members.first().ok_or(Error::EmptySet)?;
        let dim = first.dim;
        if let Some(bad) = members.iter().find(|m| m.dim != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim });
        }
        Ok(MatrixSet { dim, members })
    }

    pub fn singleton(m: Matrix) -> Self {
        MatrixSet { dim: m.dim, members: vec![m] }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Matrix] {
        &self.members
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Matrix> {
        self.members.iter()
    }

    pub fn scaled(&self, c: f64) -> MatrixSet {
        MatrixSet { dim: self.dim, members: self.members.iter().map(|m| m.scaled(c)).collect() }
    }

    pub fn require_dim(&self, dim: usize) -> Result<()> {
        if self.dim != dim {
            return Err(Error::UnsupportedDimension(self.dim));
        }
        Ok(())
    }
}

impl<'a> IntoIterator for &'a MatrixSet {
    type Item = &'a Matrix;
    type IntoIter = std::slice::Iter<'a, Matrix>;

    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// `max_{A ∈ S} ‖A‖`.
pub fn set_norm(s: &MatrixSet, kind: NormKind) -> f64 {
    s.iter().map(|m| operator_norm(m, kind)).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m2(a: f64, b: f64, c: f64, d: f64) -> Matrix {
        Matrix::from_rows(&[[a, b], [c, d]]).unwrap()
    }

    #[test]
    fn vector_norm_examples() {
        assert_eq!(vector_norm(&[1.0, 0.0], NormKind::Two), 1.0);
        assert_eq!(vector_norm(&[3.0, 4.0], NormKind::Two), 5.0);
        assert_eq!(vector_norm(&[1.0, -2.0], NormKind::One), 3.0);
        assert_eq!(vector_norm(&[1.0, -2.0], NormKind::Inf), 2.0);
        assert_eq!(vector_norm(&[0.0, 0.0], NormKind::Two), 0.0);
    }

    #[test]
    fn vector_norm_rejects_wrong_length() {
        assert_eq!(
            vector_norm_checked(&[1.0, 2.0, 3.0], 2, NormKind::One),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn operator_norm_examples() {
        for d in 1..=4 {
            for kind in NormKind::ALL {
                assert!((operator_norm(&Matrix::identity(d), kind) - 1.0).abs() < 1e-14);
            }
        }
        assert_eq!(operator_norm(&m2(0.0, 0.0, 0.01, 0.0), NormKind::Inf), 0.01);
        assert_eq!(operator_norm(&m2(1.0, 1.0, 0.0, 1.0), NormKind::One), 2.0);
        // σ_max of the Jordan block is the golden ratio
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((operator_norm(&m2(1.0, 1.0, 0.0, 1.0), NormKind::Two) - phi).abs() < 1e-15);
    }

    #[test]
    fn spectral_norm_2x2_matches_svd() {
        let m = m2(0.3, -1.7, 2.2, 0.9);
        let svd = m.to_nalgebra().singular_values().max();
        assert!((operator_norm(&m, NormKind::Two) - svd).abs() <= 1e-12 * svd);
    }

    #[test]
    fn set_norm_examples() {
        let s = MatrixSet::new(vec![m2(1.0, 1.0, 0.0, 1.0), m2(1.0, 0.0, 1.0, 1.0)]).unwrap();
        assert_eq!(set_norm(&s, NormKind::Inf), 2.0);
        let a_eps = MatrixSet::singleton(m2(1.0, 1.0, 0.25, 1.0));
        assert_eq!(set_norm(&a_eps, NormKind::Inf), 2.0);
        assert_eq!(set_norm(&MatrixSet::singleton(Matrix::identity(3)), NormKind::One), 1.0);
    }

    #[test]
    fn constructors_validate() {
        assert_eq!(Matrix::new(2, vec![1.0, f64::NAN, 0.0, 1.0]), Err(Error::NonFinite { row: 0, col: 1 }));
        assert_eq!(Matrix::new(2, vec![1.0; 3]), Err(Error::InvalidShape));
        assert_eq!(MatrixSet::new(vec![]), Err(Error::EmptySet));
        assert_eq!(
            MatrixSet::new(vec![Matrix::identity(2), Matrix::identity(3)]),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        );
    }

    #[test]
    fn dual_kinds() {
        assert_eq!(NormKind::One.dual(), NormKind::Inf);
        assert_eq!(NormKind::Inf.dual(), NormKind::One);
        assert_eq!(NormKind::Two.dual(), NormKind::Two);
        assert_eq!("INF".parse::<NormKind>().unwrap(), NormKind::Inf);
        assert!("l3".parse::<NormKind>().is_err());
    }

    #[test]
    fn dual_witness_attains_equality() {
        let x = [0.5, -2.0, 1.25];
        for kind in NormKind::ALL {
            let u = dual_witness(&x, kind);
            assert!((vector_norm(&u, kind.dual()) - 1.0).abs() < 1e-15);
            assert!((dot(&u, &x) - vector_norm(&x, kind)).abs() < 1e-14);
        }
    }
}

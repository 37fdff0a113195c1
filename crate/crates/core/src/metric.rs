//! Hausdorff distance between finite matrix sets under an induced operator norm.

use crate::error::{Error, Result};
use crate::linalg::{operator_norm, MatrixSet, NormKind};

/// `sup_{A ∈ from} inf_{B ∈ to} ‖A − B‖`.
pub fn directed_distance(from: &MatrixSet, to: &MatrixSet, kind: NormKind) -> Result<f64> {
    if from.dim() != to.dim() {
        return Err(Error::DimensionMismatch { expected: from.dim(), found: to.dim() });
    }
    Ok(from
        .iter()
        .map(|a| to.iter().map(|b| operator_norm(&(a - b), kind)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

/// `H(S, T) = max{ sup_S inf_T ‖A − B‖, sup_T inf_S ‖A − B‖ }`.
pub fn hausdorff(s: &MatrixSet, t: &MatrixSet, kind: NormKind) -> Result<f64> {
    Ok(directed_distance(s, t, kind)?.max(directed_distance(t, s, kind)?))
}

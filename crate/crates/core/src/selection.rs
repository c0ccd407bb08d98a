//! Greedy index-set construction: the δ_k threshold rule and the ρ·max rule.
//!
//! Both rules compare squared residual components against a relatively-defined
//! threshold, so they are invariant under rescaling of the residual. Ties at
//! the threshold are included (the set definitions use ≥).

use thiserror::Error;

/// The residual is identically zero; no index can be selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("residual norm is zero: already converged, nothing to select")]
pub struct AlreadyConverged;

/// Selected block of equation indices, ascending and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// |τ_k|
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }
}

/// δ_k = ½(max_i |f_i|²/‖f‖² + 1/m).
///
/// Always lies in [1/m, 1], hitting 1/m exactly when all |f_i|² are equal.
pub fn compute_delta(res_squares: &[f64], res_norm_sq: f64) -> Result<f64, AlreadyConverged> {
    if res_norm_sq <= 0.0 {
        return Err(AlreadyConverged);
    }
    let m = res_squares.len() as f64;
    let max = res_squares.iter().cloned().fold(0.0, f64::max);
    Ok(0.5 * (max / res_norm_sq + 1.0 / m))
}

/// Greedy rule: τ_k = { i : |f_i|² ≥ δ_k‖f‖² }.
///
/// Non-empty by construction, since δ_k ≤ max_i |f_i|²/‖f‖².
pub fn select_greedy(res_squares: &[f64], delta: f64, res_norm_sq: f64) -> IndexSet {
    let threshold = delta * res_norm_sq;
    let indices = (0..res_squares.len())
        .filter(|&i| res_squares[i] >= threshold)
        .collect();
    IndexSet { indices }
}

/// Max-residual rule: τ_k = { i : |f_i|² ≥ ρ·max_i |f_i|² }.
///
/// Contains the argmax for any ρ ≤ 1; larger ρ selects a subset.
pub fn select_max_residual(res_squares: &[f64], rho: f64) -> Result<IndexSet, AlreadyConverged> {
    let max = res_squares.iter().cloned().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(AlreadyConverged);
    }
    let threshold = rho * max;
    let indices = (0..res_squares.len())
        .filter(|&i| res_squares[i] >= threshold)
        .collect();
    Ok(IndexSet { indices })
}

//! The q-weighted residual vector η_k.
//!
//! Component-wise over the selected residuals:
//!
//! ```text
//! η^(i) = f_i^(q-1)        q even
//! η^(i) = |f_i^(q-2)|·f_i  q odd
//! ```
//!
//! Both branches equal |f_i|^(q−2)·f_i, so η keeps the sign of f_i and
//! concentrates weight on the large components. Key identities, used all over
//! the convergence analysis: ηᵀf_τ = ‖f_τ‖_q^q and ‖η‖² = ‖f_τ‖_{2q−2}^{2q−2}.

use thiserror::Error;

/// η over large residuals (big q, big |f_i|) can overflow f64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("weight vector overflowed: non-finite entry at position {position} (q = {q})")]
pub struct NonFiniteWeight {
    pub position: usize,
    pub q: u32,
}

/// Weight vector aligned with the index-set ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    values: Vec<f64>,
}

impl WeightVector {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// ηᵀv
    pub fn dot(&self, v: &[f64]) -> f64 {
        self.values.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// Build η from the selected residual components `f_tau` with exponent `q ≥ 2`.
pub fn compute_eta(f_tau: &[f64], q: u32) -> Result<WeightVector, NonFiniteWeight> {
    let values: Vec<f64> = if q % 2 == 0 {
        f_tau.iter().map(|&f| f.powi(q as i32 - 1)).collect()
    } else {
        f_tau.iter().map(|&f| f.powi(q as i32 - 2).abs() * f).collect()
    };
    if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
        return Err(NonFiniteWeight { position: pos, q });
    }
    Ok(WeightVector { values })
}

/// Σ_i |v_i|^p
pub fn sum_abs_pow(v: &[f64], p: u32) -> f64 {
    v.iter().map(|x| x.abs().powi(p as i32)).sum()
}

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Solver variant: block-selection rule crossed with momentum on/off.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Greedy δ_k rule, no momentum.
    Rbwnk,
    /// Max-residual ρ rule, no momentum.
    Mrwnk,
    /// Greedy δ_k rule with heavy-ball momentum.
    RbwnkM,
    /// Max-residual ρ rule with heavy-ball momentum.
    MrwnkM,
}

/// Which rule builds the index set τ_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionRule {
    /// τ_k = { i : |f_i|² ≥ δ_k‖f‖² } with δ_k = ½(max_i|f_i|²/‖f‖² + 1/m).
    Greedy,
    /// τ_k = { i : |f_i|² ≥ ρ·max_i|f_i|² }.
    MaxResidual,
}

impl Method {
    pub fn selection_rule(self) -> SelectionRule {
        match self {
            Method::Rbwnk | Method::RbwnkM => SelectionRule::Greedy,
            Method::Mrwnk | Method::MrwnkM => SelectionRule::MaxResidual,
        }
    }

    pub fn uses_momentum(self) -> bool {
        matches!(self, Method::RbwnkM | Method::MrwnkM)
    }

    /// The same selection rule without the momentum term.
    pub fn without_momentum(self) -> Method {
        match self {
            Method::RbwnkM => Method::Rbwnk,
            Method::MrwnkM => Method::Mrwnk,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Rbwnk => "rbwnk",
            Method::Mrwnk => "mrwnk",
            Method::RbwnkM => "rbwnk-m",
            Method::MrwnkM => "mrwnk-m",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "rbwnk" => Ok(Method::Rbwnk),
            "mrwnk" => Ok(Method::Mrwnk),
            "rbwnk-m" => Ok(Method::RbwnkM),
            "mrwnk-m" => Ok(Method::MrwnkM),
            other => Err(format!(
                "unknown method '{other}' (expected rbwnk, mrwnk, rbwnk-m or mrwnk-m)"
            )),
        }
    }
}

/// Full parameterization of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub method: Method,
    /// Residual-weight exponent, q ≥ 2.
    pub q: u32,
    /// Momentum parameter ω ∈ [0, 1). Zero exactly for the non-momentum methods.
    pub omega: f64,
    /// Max-residual relaxation ρ ∈ (0, 1]. Used only by the mrwnk variants.
    pub rho: f64,
    /// Tolerance ε on the squared residual norm ‖f(x_k)‖².
    pub eps: f64,
    /// Iteration cap K.
    pub max_iter: usize,
    /// Keep a snapshot of every iterate in the report (memory-heavy; off by default).
    pub record_iterates: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            method: Method::Rbwnk,
            q: 2,
            omega: 0.0,
            rho: 0.2,
            eps: 1e-6,
            max_iter: 10_000,
            record_iterates: false,
        }
    }
}

/// A named constraint violated by a [`SolverConfig`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigViolation {
    #[error("q below 2 (got {q})")]
    QBelowTwo { q: u32 },
    #[error("omega out of range [0, 1) (got {omega})")]
    OmegaOutOfRange { omega: f64 },
    #[error("rho out of range (0, 1] (got {rho})")]
    RhoOutOfRange { rho: f64 },
    #[error("eps must be positive (got {eps})")]
    EpsNotPositive { eps: f64 },
    #[error("max_iter must be at least 1")]
    MaxIterZero,
    #[error("method {method} requires {expected}, got omega = {omega}")]
    MomentumMismatch {
        method: Method,
        expected: &'static str,
        omega: f64,
    },
}

impl SolverConfig {
    /// Numeric range checks only (q, ω, ρ, ε, K). The solver runs any config
    /// passing these, including a momentum method with ω = 0.
    pub(crate) fn numeric_violations(&self) -> Vec<ConfigViolation> {
        let mut v = Vec::new();
        if self.q < 2 {
            v.push(ConfigViolation::QBelowTwo { q: self.q });
        }
        if !(self.omega >= 0.0 && self.omega < 1.0) {
            v.push(ConfigViolation::OmegaOutOfRange { omega: self.omega });
        }
        if !(self.rho > 0.0 && self.rho <= 1.0) {
            v.push(ConfigViolation::RhoOutOfRange { rho: self.rho });
        }
        if !(self.eps > 0.0) {
            v.push(ConfigViolation::EpsNotPositive { eps: self.eps });
        }
        if self.max_iter == 0 {
            v.push(ConfigViolation::MaxIterZero);
        }
        v
    }

    /// Validate all invariants, including the canonical-labeling rule that
    /// ω = 0 exactly when the method carries no momentum term.
    ///
    /// Returns the config unchanged when everything holds, otherwise the full
    /// list of violated constraints.
    pub fn validate(&self) -> Result<&Self, Vec<ConfigViolation>> {
        let mut v = self.numeric_violations();
        match (self.method.uses_momentum(), self.omega == 0.0) {
            (true, true) => v.push(ConfigViolation::MomentumMismatch {
                method: self.method,
                expected: "omega > 0",
                omega: self.omega,
            }),
            (false, false) => v.push(ConfigViolation::MomentumMismatch {
                method: self.method,
                expected: "omega = 0",
                omega: self.omega,
            }),
            _ => {}
        }
        if v.is_empty() {
            Ok(self)
        } else {
            Err(v)
        }
    }
}

use serde::Serialize;

/// The step denominator ‖(f'_τ)ᵀη‖² vanished while the residual was still
/// above tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepBreakdown {
    /// Iteration at which the denominator vanished.
    pub iteration: usize,
    /// The offending denominator value.
    pub denominator: f64,
    /// Squared residual norm at that iterate.
    pub res_norm_sq: f64,
}

/// Outcome of one solve.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    /// True iff the final squared residual norm is below ε.
    pub converged: bool,
    /// Number of update steps actually taken (IT).
    pub iterations: usize,
    /// ‖f(x_IT)‖² at exit.
    pub final_res_norm_sq: f64,
    /// (k, ‖f(x_k)‖²) for k = 0..=iterations.
    pub history: Vec<(usize, f64)>,
    /// Wall time of the solve loop; mean over runs for timed solves.
    pub wall_time_seconds: f64,
    /// True iff the solve stopped on a vanished step denominator.
    pub breakdown: bool,
    /// Details of the breakdown, when one occurred.
    pub breakdown_info: Option<StepBreakdown>,
    /// Iterate snapshots x_0..=x_IT, recorded only when
    /// `SolverConfig::record_iterates` is set.
    pub iterates: Option<Vec<Vec<f64>>>,
}

//! The solve loop shared by all four method variants.
//!
//! Per iteration: recompute the full residual, test the stopping rule on the
//! newest iterate, select the block τ_k, build the weight vector η_k, evaluate
//! only the Jacobian rows in τ_k, and update
//!
//! ```text
//! x_{k+1} = x_k − (η_kᵀ f_τ / ‖(f'_τ)ᵀη_k‖²) (f'_τ)ᵀη_k + ω(x_k − x_{k−1})
//! ```
//!
//! The previous iterate is primed with x₀, so the first momentum term is zero.
//! With ω = 0 the momentum term is skipped entirely, which makes the ω = 0
//! trajectories of the momentum methods bit-identical to their plain
//! counterparts.

use std::time::Instant;

use crate::config::{ConfigViolation, SelectionRule, SolverConfig};
use crate::problem::{Problem, SparseRow};
use crate::report::{SolveReport, StepBreakdown};
use crate::selection::{compute_delta, select_greedy, select_max_residual, IndexSet};
use crate::weights::{compute_eta, NonFiniteWeight, WeightVector};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("configuration out of range: {0:?}")]
    InvalidConfig(Vec<ConfigViolation>),
    #[error("iterate or residual became non-finite at iteration {iteration}")]
    Diverged { iteration: usize },
    #[error("weight computation failed at iteration {iteration}: {source}")]
    NonFiniteWeights {
        iteration: usize,
        source: NonFiniteWeight,
    },
}

/// Everything a step touched, handed to observers after the update is formed.
pub struct StepRecord<'a> {
    /// Step number being taken (0-based: the step producing x_{k+1}).
    pub k: usize,
    /// Iterate the step was taken from.
    pub x: &'a [f64],
    /// New iterate after projection and momentum.
    pub x_next: &'a [f64],
    /// ‖f(x_k)‖².
    pub res_norm_sq: f64,
    /// Selected block.
    pub tau: &'a IndexSet,
    /// Residual components over τ_k.
    pub f_tau: &'a [f64],
    /// Weight vector η_k.
    pub eta: &'a WeightVector,
    /// Jacobian rows for τ_k, aligned with `tau.indices()`.
    pub rows: &'a [SparseRow],
    /// d = (f'_τ)ᵀη_k as a dense vector.
    pub direction: &'a [f64],
    /// ‖d‖².
    pub denom: f64,
}

/// Per-step hook for verification and instrumentation.
pub trait StepObserver {
    fn on_step(&mut self, step: &StepRecord<'_>);
}

/// Observer that does nothing.
pub struct NoopObserver;

impl StepObserver for NoopObserver {
    fn on_step(&mut self, _step: &StepRecord<'_>) {}
}

/// d = Σ_j η_j · f'_{τ[j]}(x) accumulated densely. Cost O(Σ nnz(row)).
pub fn projection_direction(rows: &[SparseRow], eta: &WeightVector, n: usize) -> Vec<f64> {
    let mut d = vec![0.0; n];
    for (row, &w) in rows.iter().zip(eta.values()) {
        for &(j, v) in row {
            d[j] += w * v;
        }
    }
    d
}

/// Run the configured method on `problem` until ‖f(x_k)‖² < ε, the iteration
/// cap, or a step breakdown.
///
/// Deterministic: identical inputs give identical reports, wall time aside.
/// Expects a config with sane numeric ranges (see [`SolverConfig::validate`]);
/// the method/omega labeling rule is not enforced here, so momentum methods
/// can be run with ω = 0 for reduction checks.
pub fn solve(problem: &dyn Problem, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    solve_with_observer(problem, config, &mut NoopObserver)
}

/// [`solve`] with a per-step observer.
pub fn solve_with_observer(
    problem: &dyn Problem,
    config: &SolverConfig,
    observer: &mut dyn StepObserver,
) -> Result<SolveReport, SolveError> {
    let numeric = config.numeric_violations();
    if !numeric.is_empty() {
        return Err(SolveError::InvalidConfig(numeric));
    }

    let n = problem.n();
    let rule = config.method.selection_rule();
    let omega = config.omega;

    let start = Instant::now();
    let mut x = problem.initial_point();
    let mut x_prev = x.clone();
    let mut history = Vec::new();
    let mut iterates = config.record_iterates.then(Vec::new);
    // running max of observed squared row norms; scales the breakdown guard
    let mut alpha_hat = 0.0f64;
    let mut k = 0usize;
    let mut converged = false;
    let mut breakdown_info = None;

    let (final_res_norm_sq, iterations) = loop {
        let f = problem.residual(&x);
        let res_norm_sq: f64 = f.iter().map(|v| v * v).sum();
        if !res_norm_sq.is_finite() {
            return Err(SolveError::Diverged { iteration: k });
        }
        history.push((k, res_norm_sq));
        if let Some(snaps) = iterates.as_mut() {
            snaps.push(x.clone());
        }
        if res_norm_sq < config.eps {
            converged = true;
            break (res_norm_sq, k);
        }
        if k >= config.max_iter {
            break (res_norm_sq, k);
        }

        let squares: Vec<f64> = f.iter().map(|v| v * v).collect();
        let tau = match rule {
            SelectionRule::Greedy => {
                let delta = compute_delta(&squares, res_norm_sq)
                    .expect("residual norm positive before selection");
                select_greedy(&squares, delta, res_norm_sq)
            }
            SelectionRule::MaxResidual => select_max_residual(&squares, config.rho)
                .expect("residual norm positive before selection"),
        };

        let f_tau: Vec<f64> = tau.indices().iter().map(|&i| f[i]).collect();
        let eta = compute_eta(&f_tau, config.q)
            .map_err(|source| SolveError::NonFiniteWeights { iteration: k, source })?;
        let rows: Vec<SparseRow> = tau
            .indices()
            .iter()
            .map(|&i| problem.jacobian_row(i, &x))
            .collect();
        for row in &rows {
            let norm_sq: f64 = row.iter().map(|&(_, v)| v * v).sum();
            alpha_hat = alpha_hat.max(norm_sq);
        }

        let d = projection_direction(&rows, &eta, n);
        let denom: f64 = d.iter().map(|v| v * v).sum();
        let f_tau_norm_sq: f64 = f_tau.iter().map(|v| v * v).sum();
        let breakdown_tol = f64::EPSILON * f_tau_norm_sq * alpha_hat.max(1.0);
        if !(denom > breakdown_tol) {
            breakdown_info = Some(StepBreakdown {
                iteration: k,
                denominator: denom,
                res_norm_sq,
            });
            break (res_norm_sq, k);
        }

        let step = eta.dot(&f_tau) / denom;
        let mut x_next: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi - step * di).collect();
        if omega != 0.0 {
            for j in 0..n {
                x_next[j] += omega * (x[j] - x_prev[j]);
            }
        }
        if x_next.iter().any(|v| !v.is_finite()) {
            return Err(SolveError::Diverged { iteration: k });
        }

        observer.on_step(&StepRecord {
            k,
            x: &x,
            x_next: &x_next,
            res_norm_sq,
            tau: &tau,
            f_tau: &f_tau,
            eta: &eta,
            rows: &rows,
            direction: &d,
            denom,
        });

        x_prev = std::mem::replace(&mut x, x_next);
        k += 1;
    };

    Ok(SolveReport {
        converged,
        iterations,
        final_res_norm_sq,
        history,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        breakdown: breakdown_info.is_some(),
        breakdown_info,
        iterates,
    })
}

/// Run `solve` `repeats` times and report the mean wall time.
///
/// The iteration count must be identical across runs (the methods are
/// deterministic); a mismatch is a bug and panics.
pub fn solve_with_timing(
    problem: &dyn Problem,
    config: &SolverConfig,
    repeats: usize,
) -> Result<SolveReport, SolveError> {
    assert!(repeats >= 1, "repeats must be at least 1");
    let mut report = solve(problem, config)?;
    let mut total = report.wall_time_seconds;
    for _ in 1..repeats {
        let next = solve(problem, config)?;
        assert_eq!(
            next.iterations, report.iterations,
            "nondeterministic iteration count across repeated solves"
        );
        total += next.wall_time_seconds;
        report = next;
    }
    report.wall_time_seconds = total / repeats as f64;
    Ok(report)
}

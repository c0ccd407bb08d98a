//! Greedy block nonlinear Kaczmarz solvers with heavy-ball momentum.
//!
//! Solves systems of nonlinear equations `f(x) = 0` using only residual
//! components and single Jacobian rows. Each iteration selects a block of
//! equations by a greedy residual criterion, combines their rows with a
//! residual-power weight vector, and projects the iterate onto the resulting
//! weighted hyperplane; an optional heavy-ball term `ω(x_k − x_{k−1})`
//! accelerates convergence. No pseudoinverse or least-squares subproblem is
//! ever formed: a step costs one sparse matrix–vector combination and one
//! scalar quotient.
//!
//! Four method variants are provided, crossing the two block-selection rules
//! with momentum on/off:
//!
//! | method    | selection rule                                   | momentum |
//! |-----------|--------------------------------------------------|----------|
//! | `rbwnk`   | greedy threshold δ_k (residual-based weighted)   | no       |
//! | `rbwnk-m` | greedy threshold δ_k                             | yes      |
//! | `mrwnk`   | max-residual relaxation ρ                        | no       |
//! | `mrwnk-m` | max-residual relaxation ρ                        | yes      |
//!
//! The crate also bundles the benchmark problems the methods are usually
//! evaluated on ([`problems`]) and numerical verification of the theoretical
//! convergence-rate machinery ([`analysis`]).
//!
//! # Example
//!
//! ```
//! use kaczmarz::{solve, Method, SolverConfig};
//! use kaczmarz::problems::SingularBroyden;
//!
//! let problem = SingularBroyden::new(100);
//! let config = SolverConfig {
//!     method: Method::MrwnkM,
//!     q: 2,
//!     omega: 0.5,
//!     rho: 0.2,
//!     ..SolverConfig::default()
//! };
//! let report = solve(&problem, &config).unwrap();
//! assert!(report.converged);
//! assert!(report.final_res_norm_sq <= 1e-6);
//! ```

pub mod analysis;
mod config;
mod problem;
pub mod problems;
mod report;
pub mod selection;
mod solver;
pub mod weights;

pub use config::{ConfigViolation, Method, SelectionRule, SolverConfig};
pub use problem::{densify, finite_difference_row, EvalError, Problem, SparseRow};
pub use report::{SolveReport, StepBreakdown};
pub use solver::{
    projection_direction, solve, solve_with_observer, solve_with_timing, NoopObserver,
    SolveError, StepObserver, StepRecord,
};

//! Plan execution: parallel iteration-count pass, sequential timing pass,
//! and the best-ω sweep summary.

use crate::emit::{row_order, ResultRow};
use crate::plan::{ExperimentPlan, PlanEntry};
use crate::HarnessError;
use kaczmarz::problems::benchmark;
use kaczmarz::{solve, solve_with_timing, SelectionRule, SolveError, SolveReport};
use rayon::prelude::*;

/// Rows and their reports, aligned index-for-index, in deterministic order.
pub struct RunOutput {
    pub rows: Vec<ResultRow>,
    pub reports: Vec<Option<SolveReport>>,
}

fn row_skeleton(entry: &PlanEntry) -> ResultRow {
    ResultRow {
        problem: entry.problem.as_str().to_string(),
        n: entry.n,
        method: entry.config.method.as_str().to_string(),
        q: entry.config.q,
        rho: entry.config.rho,
        omega: entry.config.omega,
        it: 0,
        converged: false,
        final_res_norm_sq: f64::NAN,
        cpu_mean_seconds: f64::NAN,
        breakdown: false,
        capped: false,
    }
}

fn fill_from_report(row: &mut ResultRow, report: &SolveReport, max_iter: usize) {
    row.it = report.iterations;
    row.converged = report.converged;
    row.final_res_norm_sq = report.final_res_norm_sq;
    row.breakdown = report.breakdown;
    row.capped = !report.converged && !report.breakdown && report.iterations >= max_iter;
}

fn fill_from_error(row: &mut ResultRow, err: &SolveError) {
    if let SolveError::Diverged { iteration } | SolveError::NonFiniteWeights { iteration, .. } =
        err
    {
        row.it = *iteration;
    }
    row.converged = false;
}

/// Run one plan entry: a timed solve (`repeats` runs, mean wall time).
/// Solver errors are recorded in the row rather than propagated.
pub fn run_single(entry: &PlanEntry, repeats: usize) -> (ResultRow, Option<SolveReport>) {
    let problem = benchmark(entry.problem, entry.n, entry.c);
    let mut row = row_skeleton(entry);
    match solve_with_timing(problem.as_ref(), &entry.config, repeats) {
        Ok(report) => {
            fill_from_report(&mut row, &report, entry.config.max_iter);
            row.cpu_mean_seconds = report.wall_time_seconds;
            (row, Some(report))
        }
        Err(err) => {
            fill_from_error(&mut row, &err);
            (row, None)
        }
    }
}

/// Execute every entry of the plan.
///
/// Two passes: a parallel pass establishes iteration counts and convergence,
/// then a sequential pass re-runs each entry `repeats` times for contention-
/// free wall-time means. Iteration counts must agree across the passes (the
/// methods are deterministic). Rows come back sorted by
/// (problem, n, method, q, rho, omega).
pub fn run_plan(plan: &ExperimentPlan) -> Result<RunOutput, HarnessError> {
    let entries = plan.entries()?;

    // pass 1: iteration counts, in parallel
    let first: Vec<(ResultRow, Option<SolveReport>)> = entries
        .par_iter()
        .map(|entry| {
            let problem = benchmark(entry.problem, entry.n, entry.c);
            let mut row = row_skeleton(entry);
            match solve(problem.as_ref(), &entry.config) {
                Ok(report) => {
                    fill_from_report(&mut row, &report, entry.config.max_iter);
                    (row, Some(report))
                }
                Err(err) => {
                    fill_from_error(&mut row, &err);
                    (row, None)
                }
            }
        })
        .collect();

    // pass 2: dedicated sequential timing runs
    let mut combined: Vec<(ResultRow, Option<SolveReport>)> = Vec::with_capacity(entries.len());
    for (entry, (mut row, report)) in entries.iter().zip(first) {
        if report.is_some() {
            let (timed_row, timed_report) = run_single(entry, plan.repeats);
            debug_assert_eq!(timed_row.it, row.it, "nondeterministic iteration count");
            row.cpu_mean_seconds = timed_row.cpu_mean_seconds;
            combined.push((row, timed_report));
        } else {
            combined.push((row, report));
        }
    }

    combined.sort_by(|a, b| row_order(&a.0, &b.0));
    let (rows, reports) = combined.into_iter().unzip();
    Ok(RunOutput { rows, reports })
}

/// Sweep summary group key: problem, size, selection-rule family, q, ρ.
/// Momentum and plain variants of the same rule share a group so that ω = 0
/// competes with ω > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGroup {
    pub problem: String,
    pub n: usize,
    pub rule: SelectionRule,
    pub q: u32,
    pub rho: f64,
}

/// Best momentum value for one group, by minimal IT among converged rows,
/// ties broken by smaller ω. `None` when no configuration converged.
#[derive(Debug, Clone)]
pub struct SweepBest {
    pub group: SweepGroup,
    pub best: Option<(f64, usize, String)>,
}

fn rule_of(method: &str) -> SelectionRule {
    if method.starts_with("rbwnk") {
        SelectionRule::Greedy
    } else {
        SelectionRule::MaxResidual
    }
}

/// Derive the best-ω summary from a result table. Pure function of the rows,
/// so it can be recomputed from an emitted CSV.
pub fn best_omega_summary(rows: &[ResultRow]) -> Vec<SweepBest> {
    let mut groups: Vec<(SweepGroup, Vec<&ResultRow>)> = Vec::new();
    for row in rows {
        let key = SweepGroup {
            problem: row.problem.clone(),
            n: row.n,
            rule: rule_of(&row.method),
            q: row.q,
            rho: row.rho,
        };
        match groups.iter_mut().find(|(g, _)| *g == key) {
            Some((_, members)) => members.push(row),
            None => groups.push((key, vec![row])),
        }
    }
    groups
        .into_iter()
        .map(|(group, members)| {
            let best = members
                .iter()
                .filter(|r| r.converged)
                .min_by(|a, b| a.it.cmp(&b.it).then(a.omega.total_cmp(&b.omega)))
                .map(|r| (r.omega, r.it, r.method.clone()));
            SweepBest { group, best }
        })
        .collect()
}

/// Render the summary, one line per group.
pub fn format_summary(summary: &[SweepBest]) -> String {
    let mut out = String::new();
    for entry in summary {
        let g = &entry.group;
        let rule = match g.rule {
            SelectionRule::Greedy => "greedy",
            SelectionRule::MaxResidual => "max-residual",
        };
        match &entry.best {
            Some((omega, it, method)) => out.push_str(&format!(
                "best omega [{} n={} {} q={} rho={}]: omega={} (IT={}, {})\n",
                g.problem, g.n, rule, g.q, g.rho, omega, it, method
            )),
            None => out.push_str(&format!(
                "best omega [{} n={} {} q={} rho={}]: no convergent configuration\n",
                g.problem, g.n, rule, g.q, g.rho
            )),
        }
    }
    out
}

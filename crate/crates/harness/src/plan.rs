//! Experiment plans: value grids, config-file keys, and expansion into
//! validated solver runs.

use crate::HarnessError;
use kaczmarz::problems::BenchmarkName;
use kaczmarz::{Method, SolverConfig};
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

/// Output format for result emission.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

/// Parse a float list: a plain value, a comma list, or a MATLAB-style
/// `start:step:end` grid (inclusive end, e.g. `0.01:0.01:0.99` gives the 99
/// values 0.01, 0.02, …, 0.99).
pub fn parse_float_grid(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid '{s}' must have the form start:step:end"));
        }
        let start: f64 = parts[0].trim().parse().map_err(|_| format!("bad grid start in '{s}'"))?;
        let step: f64 = parts[1].trim().parse().map_err(|_| format!("bad grid step in '{s}'"))?;
        let end: f64 = parts[2].trim().parse().map_err(|_| format!("bad grid end in '{s}'"))?;
        if step <= 0.0 || end < start {
            return Err(format!("grid '{s}' must have positive step and end >= start"));
        }
        let mut vals = Vec::new();
        let mut k = 0u32;
        loop {
            let v = start + step * k as f64;
            if v > end + step * 1e-9 {
                break;
            }
            vals.push(v);
            k += 1;
        }
        Ok(vals)
    } else {
        s.split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad float '{p}'")))
            .collect()
    }
}

/// Parse a comma list of unsigned integers.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("bad integer '{p}'")))
        .collect()
}

pub fn parse_u32_list(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<u32>().map_err(|_| format!("bad integer '{p}'")))
        .collect()
}

pub fn parse_method_list(s: &str) -> Result<Vec<Method>, String> {
    s.split(',').map(|p| p.trim().parse::<Method>()).collect()
}

pub fn parse_problem_list(s: &str) -> Result<Vec<BenchmarkName>, String> {
    s.split(',').map(|p| p.trim().parse::<BenchmarkName>()).collect()
}

/// Fully resolved experiment description: the Cartesian product of problems,
/// sizes, methods and parameter grids, plus run/emission settings.
#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub problems: Vec<BenchmarkName>,
    pub n_values: Vec<usize>,
    pub methods: Vec<Method>,
    pub q_values: Vec<u32>,
    pub rho_values: Vec<f64>,
    pub omega_values: Vec<f64>,
    pub eps: f64,
    pub max_iter: usize,
    pub repeats: usize,
    /// H-equation constant; ignored by the other problems.
    pub c: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
    pub history: Option<PathBuf>,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            problems: Vec::new(),
            n_values: Vec::new(),
            methods: Vec::new(),
            q_values: vec![2],
            rho_values: vec![0.2],
            omega_values: vec![0.0],
            eps: 1e-6,
            max_iter: 10_000,
            repeats: 10,
            c: 0.9,
            out: None,
            format: OutputFormat::Csv,
            history: None,
        }
    }
}

/// One concrete solve of the plan, with a validated, canonically-labeled
/// config (a momentum method swept at ω = 0 normalizes to its base method).
#[derive(Debug, Clone)]
pub struct PlanEntry {
    pub problem: BenchmarkName,
    pub n: usize,
    pub c: f64,
    pub config: SolverConfig,
}

impl ExperimentPlan {
    /// Expand into deduplicated, validated entries.
    ///
    /// The ω grid applies to the momentum methods only (plain methods always
    /// run at ω = 0), and the ρ grid to the max-residual methods only (greedy
    /// entries carry the first ρ value, unused). ω = 0 under a momentum
    /// method normalizes to the base method, mirroring the convention that
    /// the momentum method with ω = 0 *is* the base method.
    pub fn entries(&self) -> Result<Vec<PlanEntry>, HarnessError> {
        if self.problems.is_empty() {
            return Err(HarnessError::Config("no problem selected (--problem)".into()));
        }
        if self.n_values.is_empty() {
            return Err(HarnessError::Config("no system size selected (--n)".into()));
        }
        if self.methods.is_empty() {
            return Err(HarnessError::Config("no method selected (--method)".into()));
        }
        if self.q_values.is_empty()
            || self.rho_values.is_empty()
            || self.omega_values.is_empty()
        {
            return Err(HarnessError::Config("empty parameter grid".into()));
        }
        if self.repeats == 0 {
            return Err(HarnessError::Config("repeats must be at least 1".into()));
        }

        let mut seen = BTreeSet::new();
        let mut entries = Vec::new();
        for &problem in &self.problems {
            for &n in &self.n_values {
                for &method in &self.methods {
                    for &q in &self.q_values {
                        let rhos: &[f64] = match method.selection_rule() {
                            kaczmarz::SelectionRule::MaxResidual => &self.rho_values,
                            kaczmarz::SelectionRule::Greedy => &self.rho_values[..1],
                        };
                        let omegas: &[f64] = if method.uses_momentum() {
                            &self.omega_values
                        } else {
                            &[0.0]
                        };
                        for &rho in rhos {
                            for &omega in omegas {
                                let eff_method = if omega == 0.0 {
                                    method.without_momentum()
                                } else {
                                    method
                                };
                                let key = (
                                    problem,
                                    n,
                                    eff_method,
                                    q,
                                    rho.to_bits(),
                                    omega.to_bits(),
                                );
                                if !seen.insert(key) {
                                    continue;
                                }
                                let config = SolverConfig {
                                    method: eff_method,
                                    q,
                                    omega,
                                    rho,
                                    eps: self.eps,
                                    max_iter: self.max_iter,
                                    record_iterates: false,
                                };
                                if let Err(violations) = config.validate() {
                                    let msgs: Vec<String> =
                                        violations.iter().map(|v| v.to_string()).collect();
                                    return Err(HarnessError::Config(format!(
                                        "invalid entry {problem} n={n} {eff_method} q={q} \
                                         rho={rho} omega={omega}: {}",
                                        msgs.join("; ")
                                    )));
                                }
                                entries.push(PlanEntry {
                                    problem,
                                    n,
                                    c: self.c,
                                    config,
                                });
                            }
                        }
                    }
                }
            }
        }
        if entries.is_empty() {
            return Err(HarnessError::Config("plan expands to no runs".into()));
        }
        Ok(entries)
    }
}

/// Key = value file with `#` comments. Keys match the long CLI flags;
/// values use the same syntax as on the command line.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    pub problem: Option<String>,
    pub n: Option<String>,
    pub method: Option<String>,
    pub q: Option<String>,
    pub omega: Option<String>,
    pub rho: Option<String>,
    pub eps: Option<f64>,
    pub max_iter: Option<usize>,
    pub repeats: Option<usize>,
    pub c: Option<f64>,
    pub out: Option<String>,
    pub format: Option<String>,
    pub history: Option<String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut cfg = ConfigFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                HarnessError::Config(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim().to_string();
            let bad = |what: &str| HarnessError::Config(format!("config line {}: {what}", lineno + 1));
            match key {
                "problem" => cfg.problem = Some(value),
                "n" => cfg.n = Some(value),
                "method" => cfg.method = Some(value),
                "q" => cfg.q = Some(value),
                "omega" => cfg.omega = Some(value),
                "rho" => cfg.rho = Some(value),
                "eps" => cfg.eps = Some(value.parse().map_err(|_| bad("bad eps"))?),
                "max-iter" => cfg.max_iter = Some(value.parse().map_err(|_| bad("bad max-iter"))?),
                "repeats" => cfg.repeats = Some(value.parse().map_err(|_| bad("bad repeats"))?),
                "c" => cfg.c = Some(value.parse().map_err(|_| bad("bad c"))?),
                "out" => cfg.out = Some(value),
                "format" => cfg.format = Some(value),
                "history" => cfg.history = Some(value),
                other => {
                    return Err(HarnessError::Config(format!(
                        "config line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(cfg)
    }
}

//! Benchmark nonlinear systems with analytic Jacobian rows.
//!
//! Five systems are bundled:
//!
//! * [`SingularBroyden`] — the squared Broyden tridiagonal system
//!   f_k = g_k², whose Jacobian is singular at every solution. This is the
//!   form behind the bundled iteration-count benchmarks.
//! * [`BroydenTridiagonal`] — the plain tridiagonal system g_k = 0.
//! * [`HEquation`] — a discretized Chandrasekhar H-equation variant that is
//!   affine in x (the integral term enters without the classical reciprocal).
//! * [`HEquationClassical`] — the classical discrete H-equation with the
//!   reciprocal, f_i = x_i − (1 − (c/2n)Σ_j μ_i x_j/(μ_i+μ_j))⁻¹.
//! * [`Nondquar`] — a quadratic tridiagonal system with weak off-diagonal
//!   coupling.
//!
//! Broyden and NONDQUAR rows have at most three nonzeros; the H-equation rows
//! are dense.

use crate::problem::{Problem, SparseRow};
use std::str::FromStr;

/// Broyden tridiagonal base component
/// g_k = (3 − 2x_k)x_k − x_{k−1} − 2x_{k+1} + 1 (boundary rows drop the
/// missing neighbor).
fn broyden_component(i: usize, x: &[f64]) -> f64 {
    let n = x.len();
    let mut g = (3.0 - 2.0 * x[i]) * x[i] + 1.0;
    if i > 0 {
        g -= x[i - 1];
    }
    if i < n - 1 {
        g -= 2.0 * x[i + 1];
    }
    g
}

/// Gradient of `broyden_component` as (index, value) pairs.
fn broyden_gradient(i: usize, x: &[f64]) -> SparseRow {
    let n = x.len();
    let mut row = SparseRow::with_capacity(3);
    if i > 0 {
        row.push((i - 1, -1.0));
    }
    row.push((i, 3.0 - 4.0 * x[i]));
    if i < n - 1 {
        row.push((i + 1, -2.0));
    }
    row
}

/// Squared Broyden tridiagonal system, f_k = g_k².
///
/// Every residual component is a square, so the Jacobian rows 2·g_k·∇g_k all
/// vanish at a solution: the system is singular there, which is what makes it
/// a hard benchmark for row-action methods. Initial point −0.5·1.
pub struct SingularBroyden {
    n: usize,
}

impl SingularBroyden {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "singular Broyden needs n >= 2");
        SingularBroyden { n }
    }
}

impl Problem for SingularBroyden {
    fn m(&self) -> usize {
        self.n
    }
    fn n(&self) -> usize {
        self.n
    }
    fn residual_component(&self, i: usize, x: &[f64]) -> f64 {
        let g = broyden_component(i, x);
        g * g
    }
    fn jacobian_row(&self, i: usize, x: &[f64]) -> SparseRow {
        let g = broyden_component(i, x);
        let mut row = broyden_gradient(i, x);
        for (_, v) in row.iter_mut() {
            *v *= 2.0 * g;
        }
        row
    }
    fn initial_point(&self) -> Vec<f64> {
        vec![-0.5; self.n]
    }
}

/// Plain Broyden tridiagonal system, g_k = 0. Initial point −0.5·1.
pub struct BroydenTridiagonal {
    n: usize,
}

impl BroydenTridiagonal {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "Broyden tridiagonal needs n >= 2");
        BroydenTridiagonal { n }
    }
}

impl Problem for BroydenTridiagonal {
    fn m(&self) -> usize {
        self.n
    }
    fn n(&self) -> usize {
        self.n
    }
    fn residual_component(&self, i: usize, x: &[f64]) -> f64 {
        broyden_component(i, x)
    }
    fn jacobian_row(&self, i: usize, x: &[f64]) -> SparseRow {
        broyden_gradient(i, x)
    }
    fn initial_point(&self) -> Vec<f64> {
        vec![-0.5; self.n]
    }
}

/// Shared kernel for the H-equation variants:
/// K[i][j] = (c/2n)·μ_i/(μ_i + μ_j) with μ_i = (i − 1/2)/n, stored dense
/// row-major.
struct HKernel {
    n: usize,
    k: Vec<f64>,
}

impl HKernel {
    fn new(n: usize, c: f64) -> Self {
        let nf = n as f64;
        let mu: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / nf).collect();
        let scale = c / (2.0 * nf);
        let mut k = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                k.push(scale * mu[i] / (mu[i] + mu[j]));
            }
        }
        HKernel { n, k }
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.k[i * self.n..(i + 1) * self.n]
    }

    /// 1 − Σ_j K[i][j]·x_j
    fn s(&self, i: usize, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (kij, xj) in self.row(i).iter().zip(x) {
            acc += kij * xj;
        }
        1.0 - acc
    }
}

/// Discretized H-equation, affine form:
/// f_i = x_i − (1 − (c/2n)Σ_j μ_i x_j/(μ_i + μ_j)).
///
/// Note this variant omits the reciprocal of the classical H-equation and is
/// therefore a linear system in disguise; see [`HEquationClassical`] for the
/// nonlinear original. Initial point 0.
pub struct HEquation {
    kernel: HKernel,
    c: f64,
}

impl HEquation {
    pub fn new(n: usize, c: f64) -> Self {
        assert!(n >= 2, "H-equation needs n >= 2");
        assert!(c > 0.0 && c < 1.0, "H-equation constant must lie in (0, 1)");
        HEquation {
            kernel: HKernel::new(n, c),
            c,
        }
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Problem for HEquation {
    fn m(&self) -> usize {
        self.kernel.n
    }
    fn n(&self) -> usize {
        self.kernel.n
    }
    fn residual_component(&self, i: usize, x: &[f64]) -> f64 {
        x[i] - self.kernel.s(i, x)
    }
    fn jacobian_row(&self, i: usize, x: &[f64]) -> SparseRow {
        let _ = x;
        let mut row: SparseRow = self
            .kernel
            .row(i)
            .iter()
            .cloned()
            .enumerate()
            .collect();
        row[i].1 += 1.0;
        row
    }
    fn initial_point(&self) -> Vec<f64> {
        vec![0.0; self.kernel.n]
    }
}

/// Classical discrete Chandrasekhar H-equation:
/// f_i = x_i − (1 − (c/2n)Σ_j μ_i x_j/(μ_i + μ_j))⁻¹. Initial point 0.
pub struct HEquationClassical {
    kernel: HKernel,
    c: f64,
}

impl HEquationClassical {
    pub fn new(n: usize, c: f64) -> Self {
        assert!(n >= 2, "H-equation needs n >= 2");
        assert!(c > 0.0 && c < 1.0, "H-equation constant must lie in (0, 1)");
        HEquationClassical {
            kernel: HKernel::new(n, c),
            c,
        }
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

impl Problem for HEquationClassical {
    fn m(&self) -> usize {
        self.kernel.n
    }
    fn n(&self) -> usize {
        self.kernel.n
    }
    fn residual_component(&self, i: usize, x: &[f64]) -> f64 {
        x[i] - 1.0 / self.kernel.s(i, x)
    }
    fn jacobian_row(&self, i: usize, x: &[f64]) -> SparseRow {
        let s = self.kernel.s(i, x);
        let s2 = s * s;
        let mut row: SparseRow = self
            .kernel
            .row(i)
            .iter()
            .map(|kij| -kij / s2)
            .enumerate()
            .collect();
        row[i].1 += 1.0;
        row
    }
    fn initial_point(&self) -> Vec<f64> {
        vec![0.0; self.kernel.n]
    }
}

/// Quadratic tridiagonal system
/// f_k = (0.5x_k − 3)x_k + x_{k−1} + x_{k+1} − 1 (boundary rows drop the
/// missing neighbor). Initial point −0.5·1.
pub struct Nondquar {
    n: usize,
}

impl Nondquar {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "nondquar needs n >= 2");
        Nondquar { n }
    }
}

impl Problem for Nondquar {
    fn m(&self) -> usize {
        self.n
    }
    fn n(&self) -> usize {
        self.n
    }
    fn residual_component(&self, i: usize, x: &[f64]) -> f64 {
        let mut f = (0.5 * x[i] - 3.0) * x[i] - 1.0;
        if i > 0 {
            f += x[i - 1];
        }
        if i < self.n - 1 {
            f += x[i + 1];
        }
        f
    }
    fn jacobian_row(&self, i: usize, x: &[f64]) -> SparseRow {
        let mut row = SparseRow::with_capacity(3);
        if i > 0 {
            row.push((i - 1, 1.0));
        }
        row.push((i, x[i] - 3.0));
        if i < self.n - 1 {
            row.push((i + 1, 1.0));
        }
        row
    }
    fn initial_point(&self) -> Vec<f64> {
        vec![-0.5; self.n]
    }
}

/// Names under which the benchmarks are selectable from the CLI and config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkName {
    SingularBroyden,
    BroydenTridiagonal,
    HEquation,
    HEquationClassical,
    Nondquar,
}

impl BenchmarkName {
    pub const ALL: [BenchmarkName; 5] = [
        BenchmarkName::SingularBroyden,
        BenchmarkName::BroydenTridiagonal,
        BenchmarkName::HEquation,
        BenchmarkName::HEquationClassical,
        BenchmarkName::Nondquar,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkName::SingularBroyden => "singular-broyden",
            BenchmarkName::BroydenTridiagonal => "broyden-tridiagonal",
            BenchmarkName::HEquation => "h-equation",
            BenchmarkName::HEquationClassical => "h-equation-classical",
            BenchmarkName::Nondquar => "nondquar",
        }
    }
}

impl std::fmt::Display for BenchmarkName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "singular-broyden" => Ok(BenchmarkName::SingularBroyden),
            "broyden-tridiagonal" => Ok(BenchmarkName::BroydenTridiagonal),
            "h-equation" => Ok(BenchmarkName::HEquation),
            "h-equation-classical" => Ok(BenchmarkName::HEquationClassical),
            "nondquar" => Ok(BenchmarkName::Nondquar),
            other => Err(format!(
                "unknown problem '{other}' (expected one of: singular-broyden, \
                 broyden-tridiagonal, h-equation, h-equation-classical, nondquar)"
            )),
        }
    }
}

/// Construct a benchmark by name. `c` is used only by the H-equation variants.
pub fn benchmark(name: BenchmarkName, n: usize, c: f64) -> Box<dyn Problem> {
    match name {
        BenchmarkName::SingularBroyden => Box::new(SingularBroyden::new(n)),
        BenchmarkName::BroydenTridiagonal => Box::new(BroydenTridiagonal::new(n)),
        BenchmarkName::HEquation => Box::new(HEquation::new(n, c)),
        BenchmarkName::HEquationClassical => Box::new(HEquationClassical::new(n, c)),
        BenchmarkName::Nondquar => Box::new(Nondquar::new(n)),
    }
}

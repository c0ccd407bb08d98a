use thiserror::Error;

/// Sparse Jacobian row as `(column index, value)` pairs in ascending index order.
pub type SparseRow = Vec<(usize, f64)>;

/// Evaluation failed because the problem produced a non-finite value.
#[derive(Debug, Clone, Error)]
pub enum EvalError {
    #[error("residual component {index} is non-finite at the evaluation point")]
    NonFiniteResidual { index: usize },
    #[error("jacobian row {index} contains a non-finite entry")]
    NonFiniteRow { index: usize },
}

/// A system of nonlinear equations `f(x) = 0` accessed one component and one
/// Jacobian row at a time.
///
/// The solvers never assemble the full Jacobian; they only evaluate the rows
/// of the selected block, so implementations should make `jacobian_row` cheap
/// and sparse where the system structure allows it.
///
/// Implementations must be pure: evaluation may not mutate shared state, so a
/// single problem can back many concurrent solves.
pub trait Problem: Send + Sync {
    /// Number of equations `m`.
    fn m(&self) -> usize;

    /// Number of unknowns `n`.
    fn n(&self) -> usize;

    /// Value of the i-th residual component `f_i(x)`, `i ∈ 0..m`.
    fn residual_component(&self, i: usize, x: &[f64]) -> f64;

    /// The i-th Jacobian row `f'_i(x)` as sparse `(index, value)` pairs.
    fn jacobian_row(&self, i: usize, x: &[f64]) -> SparseRow;

    /// Starting point `x₀` for the iteration.
    fn initial_point(&self) -> Vec<f64>;

    /// Full residual vector `f(x)`.
    ///
    /// Delegates to `residual_component` so the two access paths agree
    /// bit-for-bit; implementations should not override this.
    fn residual(&self, x: &[f64]) -> Vec<f64> {
        (0..self.m()).map(|i| self.residual_component(i, x)).collect()
    }
}

impl<P: Problem + ?Sized> Problem for &P {
    fn m(&self) -> usize {
        (**self).m()
    }
    fn n(&self) -> usize {
        (**self).n()
    }
    fn residual_component(&self, i: usize, x: &[f64]) -> f64 {
        (**self).residual_component(i, x)
    }
    fn jacobian_row(&self, i: usize, x: &[f64]) -> SparseRow {
        (**self).jacobian_row(i, x)
    }
    fn initial_point(&self) -> Vec<f64> {
        (**self).initial_point()
    }
}

/// Central-difference approximation of the Jacobian row `f'_i(x)`.
///
/// Validation oracle for analytic rows, and a fallback for user problems
/// without them. Per-coordinate step `h_j = h_scale · max(1, |x_j|)` where
/// `h_scale` defaults to `ε_machine^(1/3)`; pass `h` to override the scale.
pub fn finite_difference_row(
    problem: &dyn Problem,
    i: usize,
    x: &[f64],
    h: Option<f64>,
) -> Result<SparseRow, EvalError> {
    let h_scale = h.unwrap_or_else(|| f64::EPSILON.cbrt());
    let mut xp = x.to_vec();
    let mut row = Vec::new();
    for j in 0..x.len() {
        let hj = h_scale * x[j].abs().max(1.0);
        xp[j] = x[j] + hj;
        let fp = problem.residual_component(i, &xp);
        xp[j] = x[j] - hj;
        let fm = problem.residual_component(i, &xp);
        xp[j] = x[j];
        if !fp.is_finite() || !fm.is_finite() {
            return Err(EvalError::NonFiniteResidual { index: i });
        }
        let deriv = (fp - fm) / (2.0 * hj);
        if deriv != 0.0 {
            row.push((j, deriv));
        }
    }
    Ok(row)
}

/// Densify a sparse row to length `n`.
pub fn densify(row: &SparseRow, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    for &(j, v) in row {
        out[j] += v;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{HEquation, SingularBroyden};

    /// f(x) = x, the identity system.
    struct Identity(usize);
    impl Problem for Identity {
        fn m(&self) -> usize {
            self.0
        }
        fn n(&self) -> usize {
            self.0
        }
        fn residual_component(&self, i: usize, x: &[f64]) -> f64 {
            x[i]
        }
        fn jacobian_row(&self, i: usize, _x: &[f64]) -> SparseRow {
            vec![(i, 1.0)]
        }
        fn initial_point(&self) -> Vec<f64> {
            vec![1.0; self.0]
        }
    }

    #[test]
    fn identity_fd_row_is_unit_vector() {
        let p = Identity(5);
        let x = vec![0.3, -0.7, 1.1, 0.0, 2.0];
        let row = finite_difference_row(&p, 2, &x, None).unwrap();
        let dense = densify(&row, 5);
        for (j, v) in dense.iter().enumerate() {
            let expect = if j == 2 { 1.0 } else { 0.0 };
            assert!((v - expect).abs() < 1e-9, "j={j}: {v}");
        }
    }

    #[test]
    fn h_equation_fd_matches_analytic_diagonal_at_origin() {
        let n = 20;
        let c = 0.9;
        let p = HEquation::new(n, c);
        let x = vec![0.0; n];
        for i in [0, 7, n - 1] {
            let fd = densify(&finite_difference_row(&p, i, &x, None).unwrap(), n);
            let analytic = densify(&p.jacobian_row(i, &x), n);
            // diagonal entry is 1 + (c/2n)·μ_i/(2μ_i) = 1 + c/(4n)
            let expect_diag = 1.0 + c / (4.0 * n as f64);
            assert!((analytic[i] - expect_diag).abs() < 1e-12);
            for j in 0..n {
                let rel = (fd[j] - analytic[j]).abs() / analytic[j].abs().max(1.0);
                assert!(rel <= 1e-6, "i={i} j={j}: fd={} analytic={}", fd[j], analytic[j]);
            }
        }
    }

    #[test]
    fn singular_broyden_fd_interior_diagonal_at_half() {
        // At x = -0.5·1 the interior base residual is 0.5, so the squared
        // system's row 2g·(−1, 3−4x, −2) has diagonal 2·0.5·5 = 5.
        let n = 10;
        let p = SingularBroyden::new(n);
        let x = vec![-0.5; n];
        let fd = densify(&finite_difference_row(&p, 4, &x, None).unwrap(), n);
        assert!((fd[4] - 5.0).abs() < 1e-5, "diag {}", fd[4]);
        let analytic = densify(&p.jacobian_row(4, &x), n);
        assert!((analytic[4] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn residual_matches_componentwise_calls_bitwise() {
        let p = HEquation::new(13, 0.9);
        let x: Vec<f64> = (0..13).map(|i| 0.1 * i as f64 - 0.4).collect();
        let full = p.residual(&x);
        for i in 0..13 {
            assert_eq!(full[i].to_bits(), p.residual_component(i, &x).to_bits());
        }
    }
}

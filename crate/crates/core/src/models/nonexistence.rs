//! Quantified obstruction for `R = 2S`, twice the unilateral shift.
//!
//! For every `|lambda| = 1` the functional `X_lambda h = sum_j 2^{-j} lambda^j h_j`
//! satisfies `X_lambda R = lambda X_lambda`, so a unitary asymptote would need an
//! eigenvector for every point of the circle. On the window `e_0..e_N` this shows
//! up as a family of `N` linearly independent eigenfunctionals.

use crate::linalg::{self, c64, cis, CMat, C64};
use crate::tuple::OperatorTuple;

#[derive(Debug, Clone)]
pub struct NonexistenceReport {
    pub window: usize,
    /// `||R^k||` for `k = 1..=N`.
    pub power_norms: Vec<f64>,
    /// `power_bound_estimate` flagged growth.
    pub growing: bool,
    pub lambdas: Vec<C64>,
    /// Largest `|(X_lambda R - lambda X_lambda) e_j|` over `j < N` and the grid.
    pub intertwining_residual: f64,
    /// Numerical rank of the stacked `X_lambda`.
    pub rank: usize,
    /// Smallest singular value of the stacked `X_lambda`.
    pub sigma_min: f64,
    /// Orthogonal eigenspaces a minimal unitary asymptote would need on this grid.
    pub required_eigenspaces: usize,
    /// `max_j ||(R^*)^{j+1} e_j||`, zero when every basis vector is annihilated.
    pub adjoint_annihilation: f64,
}

/// `2S` on `span(e_0, ..., e_N)`.
pub fn doubled_shift(n: usize) -> CMat {
    let mut r = CMat::zeros(n + 1, n + 1);
    for j in 0..n {
        r[(j + 1, j)] = c64(2.0, 0.0);
    }
    r
}

/// Row vector `(2^{-j} lambda^j)_{j=0..=N}`.
pub fn eigenfunctional(lambda: C64, n: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(n + 1);
    let mut p = c64(1.0, 0.0);
    for j in 0..=n {
        out.push(p * 2f64.powi(-(j as i32)));
        p *= lambda;
    }
    out
}

pub fn nonexistence_diagnostic(n: usize) -> NonexistenceReport {
    assert!(n >= 4, "window must be at least 4");
    let r = doubled_shift(n);
    let mut power_norms = Vec::with_capacity(n);
    let mut rk = linalg::identity(n + 1);
    for _ in 0..n {
        rk = &rk * &r;
        power_norms.push(linalg::op_norm(&rk));
    }
    let t = OperatorTuple::single(r.clone()).expect("single matrix");
    let growing = t.power_bound_estimate(n).growing;

    let lambdas: Vec<C64> = (0..n).map(|m| cis(std::f64::consts::TAU * m as f64 / n as f64)).collect();
    let mut stacked = CMat::zeros(n, n + 1);
    let mut residual: f64 = 0.0;
    for (row, &lam) in lambdas.iter().enumerate() {
        let x = eigenfunctional(lam, n);
        for (j, &v) in x.iter().enumerate() {
            stacked[(row, j)] = v;
        }
        // (X R) e_j = 2 x_{j+1}
        for j in 0..n {
            let lhs = x[j + 1] * 2.0;
            residual = residual.max((lhs - lam * x[j]).norm());
        }
    }
    let rank = linalg::rank(&stacked, linalg::RANK_TOL);
    let sigma_min = linalg::singular_values(&stacked).last().copied().unwrap_or(0.0);

    let ra = r.adjoint();
    let mut annihilation: f64 = 0.0;
    for j in 0..=n {
        let mut v = linalg::CVec::zeros(n + 1);
        v[j] = c64(1.0, 0.0);
        for _ in 0..=j {
            v = &ra * v;
        }
        annihilation = annihilation.max(v.norm());
    }

    NonexistenceReport {
        window: n,
        power_norms,
        growing,
        lambdas,
        intertwining_residual: residual,
        rank,
        sigma_min,
        required_eigenspaces: rank,
        adjoint_annihilation: annihilation,
    }
}

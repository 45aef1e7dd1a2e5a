//! Analytic Toeplitz tuples on the Hardy space with outer symbols.
//!
//! Each symbol is a polynomial approximation of an outer function
//! `exp(u + i u~)` with `u <= 0` a smooth bump vanishing on a prescribed arc
//! set, so `|phi| ~ 1` there and `|phi| < 1` elsewhere. Toeplitz operators act
//! on coefficient vectors by polynomial multiplication, never compressed, and
//! norms of orbits are evaluated exactly by Parseval on a grid finer than the
//! degree of the product.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::{Fft, FftPlanner};

use super::arcs::{self, ArcSet, TURN};
use crate::error::{Error, Result};
use crate::linalg::{c64, C64};

pub const DEFAULT_TEST_DEGREE: usize = 10;

#[derive(Debug, Clone, Copy)]
pub struct ToeplitzParams {
    /// Depth of the bump `u` away from the arcs.
    pub amplitude: f64,
    /// Transition length (radians) of the smooth step at each arc endpoint.
    pub width: f64,
    /// Largest accepted `max (1 - |phi|)` on the arc grid.
    pub eps_max: f64,
}

impl Default for ToeplitzParams {
    fn default() -> Self {
        Self { amplitude: 0.3, width: 0.16, eps_max: 1e-3 }
    }
}

#[derive(Debug, Clone)]
pub struct ToeplitzSymbol {
    /// Taylor coefficients `0..=M`.
    pub coeffs: Vec<C64>,
    /// The arc set `Omega(phi)` where `|phi| = 1` is targeted.
    pub omega: ArcSet,
    /// `max (1 - |phi|)` over grid nodes in the closure of `omega`.
    pub eps: f64,
}

#[derive(Debug, Clone)]
pub struct HardyToeplitzModel {
    degree: usize,
    grid: usize,
    symbols: Vec<ToeplitzSymbol>,
    omega: ArcSet,
    /// Lebesgue measure of `omega` inside the dual cell of each grid node.
    weights: Vec<f64>,
    /// Nodes with positive weight.
    omega_nodes: Vec<usize>,
    test_degree: usize,
}

/// Smooth step from 0 at `t <= 0` to 1 at `t >= 1`.
fn smooth_step(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    let f = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let (a, b) = (f(t), f(1.0 - t));
    a / (a + b)
}

struct Ffts {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl Ffts {
    fn new(len: usize) -> Self {
        let mut p = FftPlanner::new();
        Self { fwd: p.plan_fft_forward(len), inv: p.plan_fft_inverse(len) }
    }
}

/// `p(2 pi j / len)` for `j < len`; coefficients beyond `len` are folded, which is exact at the nodes.
pub fn evaluate_on_grid(coeffs: &[C64], len: usize) -> Vec<C64> {
    let mut buf = vec![c64(0.0, 0.0); len];
    for (k, &c) in coeffs.iter().enumerate() {
        buf[k % len] += c;
    }
    Ffts::new(len).inv.process(&mut buf);
    buf
}

/// Product of two polynomials by direct convolution.
pub fn poly_mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![c64(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn random_polynomial<R: Rng>(rng: &mut R, max_degree: usize) -> Vec<C64> {
    let deg = rng.random_range(1..=max_degree.max(1));
    (0..=deg).map(|_| c64(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect()
}

fn node_ticks(j: usize, g: usize) -> u64 {
    (j as u128 * TURN as u128 / g as u128) as u64
}

fn dual_cell(j: usize, g: usize) -> ArcSet {
    let h = TURN / (2 * g as u64);
    let t = node_ticks(j, g);
    ArcSet::arc_ticks((t + TURN - h) % TURN, (t + h) % TURN)
}

fn check_arc(omega: &ArcSet) -> Result<()> {
    if omega.is_empty() {
        return Err(Error::MeasureHypothesisViolated("arc set has measure 0".into()));
    }
    if omega.is_full() {
        return Err(Error::MeasureHypothesisViolated("complement of the arc set has measure 0".into()));
    }
    Ok(())
}

fn build_symbol(omega: &ArcSet, degree: usize, g: usize, p: &ToeplitzParams) -> Result<ToeplitzSymbol> {
    check_arc(omega)?;
    let gaps: Vec<(f64, f64)> = omega
        .complement()
        .circular_intervals()
        .into_iter()
        .map(|(s, e)| (s as f64 / TURN as f64 * std::f64::consts::TAU, (e - s) as f64 / TURN as f64 * std::f64::consts::TAU))
        .collect();
    let ffts = Ffts::new(g);
    let mut buf: Vec<C64> = (0..g)
        .map(|j| {
            let theta = std::f64::consts::TAU * j as f64 / g as f64;
            let mut u = 0.0;
            for &(s, len) in &gaps {
                let x = (theta - s).rem_euclid(std::f64::consts::TAU);
                if x > 0.0 && x < len {
                    u = -p.amplitude * smooth_step(x / p.width) * smooth_step((len - x) / p.width);
                }
            }
            c64(u, 0.0)
        })
        .collect();
    ffts.fwd.process(&mut buf);
    let scale = 1.0 / g as f64;
    for (k, v) in buf.iter_mut().enumerate() {
        *v *= if k == 0 {
            scale
        } else if k < g / 2 {
            2.0 * scale
        } else {
            0.0
        };
    }
    ffts.inv.process(&mut buf);
    for v in buf.iter_mut() {
        *v = v.exp();
    }
    ffts.fwd.process(&mut buf);
    let mut coeffs: Vec<C64> = buf[..=degree.min(g - 1)].iter().map(|c| c * scale).collect();
    let sup = evaluate_on_grid(&coeffs, 8 * g).iter().map(|z| z.norm()).fold(0.0, f64::max);
    for c in coeffs.iter_mut() {
        *c /= sup;
    }
    let vals = evaluate_on_grid(&coeffs, g);
    let eps = (0..g)
        .filter(|&j| omega.closure_contains_ticks(node_ticks(j, g)))
        .map(|j| 1.0 - vals[j].norm())
        .fold(0.0, f64::max);
    if eps > p.eps_max {
        return Err(Error::SeriesNotConverged { eps });
    }
    Ok(ToeplitzSymbol { coeffs, omega: omega.clone(), eps })
}

/// Toeplitz tuple with one symbol per arc set; only each `Omega(phi_i)` is checked.
pub fn build_toeplitz_tuple(arcs: &[ArcSet], degree: usize, grid: usize, params: &ToeplitzParams) -> Result<HardyToeplitzModel> {
    if arcs.is_empty() {
        return Err(Error::ArityMismatch { expected: 1, found: 0 });
    }
    if grid < 2 * (degree + 1) {
        return Err(Error::WindowTooSmall(grid));
    }
    let symbols = arcs.iter().map(|a| build_symbol(a, degree, grid, params)).collect::<Result<Vec<_>>>()?;
    let omega = arcs::meet_all(arcs);
    let weights: Vec<f64> = (0..grid).map(|j| omega.meet(&dual_cell(j, grid)).measure()).collect();
    let omega_nodes = (0..grid).filter(|&j| weights[j] > 0.0).collect();
    Ok(HardyToeplitzModel { degree, grid, symbols, omega, weights, omega_nodes, test_degree: DEFAULT_TEST_DEGREE })
}

/// Toeplitz tuple whose common arc set `Omega` and its complement both have positive measure.
pub fn build_toeplitz_model(arcs: &[ArcSet], degree: usize, grid: usize) -> Result<HardyToeplitzModel> {
    build_toeplitz_model_with(arcs, degree, grid, &ToeplitzParams::default())
}

pub fn build_toeplitz_model_with(arcs: &[ArcSet], degree: usize, grid: usize, params: &ToeplitzParams) -> Result<HardyToeplitzModel> {
    let omega = arcs::meet_all(arcs);
    if omega.is_empty() {
        return Err(Error::MeasureHypothesisViolated("intersection of the arc sets has measure 0".into()));
    }
    build_toeplitz_tuple(arcs, degree, grid, params)
}

impl HardyToeplitzModel {
    pub fn arity(&self) -> usize {
        self.symbols.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn symbols(&self) -> &[ToeplitzSymbol] {
        &self.symbols
    }

    pub fn symbol(&self, i: usize) -> &ToeplitzSymbol {
        &self.symbols[i]
    }

    pub fn omega(&self) -> &ArcSet {
        &self.omega
    }

    pub fn eps(&self) -> f64 {
        self.symbols.iter().map(|s| s.eps).fold(0.0, f64::max)
    }

    pub fn test_degree(&self) -> usize {
        self.test_degree
    }

    pub fn quadrature_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn omega_nodes(&self) -> &[usize] {
        &self.omega_nodes
    }

    /// Normalized measure of one grid cell.
    pub fn cell_measure(&self) -> f64 {
        1.0 / self.grid as f64
    }

    /// `T_{phi_i} f`.
    pub fn apply(&self, i: usize, f: &[C64]) -> Vec<C64> {
        poly_mul(&self.symbols[i].coeffs, f)
    }

    /// `Xf`: samples of `f` on the `Omega` nodes scaled by the square roots of the weights.
    pub fn apply_x(&self, f: &[C64]) -> Vec<C64> {
        let vals = evaluate_on_grid(f, self.grid);
        self.omega_nodes.iter().map(|&j| vals[j] * self.weights[j].sqrt()).collect()
    }

    /// Pointwise multiplication by `phi_i` on the `Omega` nodes.
    pub fn apply_u(&self, i: usize, v: &[C64]) -> Vec<C64> {
        let vals = evaluate_on_grid(&self.symbols[i].coeffs, self.grid);
        self.omega_nodes.iter().zip(v).map(|(&j, &x)| vals[j] * x).collect()
    }

    pub fn x_norm(&self, f: &[C64]) -> f64 {
        self.apply_x(f).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|| prod_i T_{phi_i}^{k_i} f ||_{H^2}`, exact up to rounding.
    pub fn power_norm(&self, k: &[usize], f: &[C64]) -> f64 {
        assert_eq!(k.len(), self.arity());
        let deg = k.iter().sum::<usize>() * self.degree + f.len();
        let len = (deg + 1).next_power_of_two().max(self.grid);
        let fv = evaluate_on_grid(f, len);
        let mut acc: Vec<f64> = fv.iter().map(|z| z.norm_sqr()).collect();
        for (s, &ki) in self.symbols.iter().zip(k) {
            if ki == 0 {
                continue;
            }
            let pv = evaluate_on_grid(&s.coeffs, len);
            for (a, p) in acc.iter_mut().zip(pv) {
                *a *= p.norm_sqr().powi(ki as i32);
            }
        }
        (acc.iter().sum::<f64>() / len as f64).sqrt()
    }

    /// A-priori bound on `| ||Xf|| - ||chi_Omega f|| |`: one cell of mass per arc endpoint.
    pub fn quadrature_error(&self, f: &[C64]) -> f64 {
        let sup2 = evaluate_on_grid(f, (8 * self.grid).max(f.len().next_power_of_two()))
            .iter()
            .map(|z| z.norm_sqr())
            .fold(0.0, f64::max);
        let endpoints = 2 * self.omega.circular_intervals().len();
        endpoints as f64 * sup2 / self.grid as f64 / (2.0 * self.x_norm(f))
    }
}

#[derive(Debug, Clone)]
pub struct AcResidualSets {
    /// Arc cover of the `Omega` nodes where `|f|^2 > support_tol`.
    pub local: ArcSet,
    /// The measurable support `Omega`.
    pub global: ArcSet,
    pub dropped_nodes: Vec<usize>,
    /// Local and global differ only by cells explainable by isolated zeros of `f`.
    pub grid_artifact: bool,
}

pub fn ac_residual_sets(model: &HardyToeplitzModel, f: &[C64], support_tol: f64) -> Result<AcResidualSets> {
    if f.iter().all(|z| *z == c64(0.0, 0.0)) {
        return Err(Error::ZeroVector);
    }
    let g = model.grid;
    let vals = evaluate_on_grid(f, g);
    let mut local = ArcSet::empty();
    let mut dropped = Vec::new();
    for &j in &model.omega_nodes {
        if vals[j].norm_sqr() > support_tol {
            local = local.join(&dual_cell(j, g));
        } else {
            dropped.push(j);
        }
    }
    let local = local.meet(&model.omega);
    let zeros = f.iter().rposition(|z| *z != c64(0.0, 0.0)).unwrap_or(0);
    let grid_artifact = !dropped.is_empty() && dropped.len() <= zeros;
    Ok(AcResidualSets { local, global: model.omega.clone(), dropped_nodes: dropped, grid_artifact })
}

#[derive(Debug, Clone)]
pub struct AcQuasiReport {
    pub pi_a: ArcSet,
    pub omega_a: ArcSet,
    /// `m(omega_a \ pi_a)` in grid cells.
    pub missing_cells: f64,
    /// `pi_a` is inside `omega_a` and misses at most one cell. Approximate, not a certificate.
    pub agrees: bool,
    pub samples: usize,
}

/// Meet of the local residual sets over a family of nonzero polynomials.
pub fn pi_a_over(model: &HardyToeplitzModel, fs: &[Vec<C64>], support_tol: f64) -> Result<AcQuasiReport> {
    let mut pi = model.omega.clone();
    for f in fs {
        pi = pi.meet(&ac_residual_sets(model, f, support_tol)?.local);
    }
    let missing_cells = model.omega.difference(&pi).measure() / model.cell_measure();
    Ok(AcQuasiReport {
        agrees: pi.is_subset(&model.omega) && missing_cells <= 1.0,
        pi_a: pi,
        omega_a: model.omega.clone(),
        missing_cells,
        samples: fs.len(),
    })
}

pub fn ac_quasianalytic_check(model: &HardyToeplitzModel, samples: usize, seed: u64) -> AcQuasiReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fs: Vec<Vec<C64>> = (0..samples).map(|_| random_polynomial(&mut rng, model.test_degree)).collect();
    pi_a_over(model, &fs, crate::spectral::DEFAULT_SUPPORT_TOL).expect("random polynomials are nonzero")
}

//! The limit operator `A` with `<A h, h> = lim ||T^k h||^2` in the invariant-mean sense.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, cis, identity, op_norm, zeros, CMat, C64};
use crate::tuple::OperatorTuple;

/// Default order of the iterated Cesaro means.
pub const DEFAULT_CESARO_ORDER: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitMethod {
    /// Iterated box means of the given order over `2^m` terms per coordinate.
    Cesaro { order: usize },
    /// Closed form from the oblique joint spectral projections.
    Exact,
}

#[derive(Debug, Clone)]
pub struct LimitOperator {
    pub a: CMat,
    pub method: LimitMethod,
    /// Doubling checkpoints used (Cesaro) or combination attempts (exact).
    pub iterations: usize,
    /// Last checkpoint difference (Cesaro) or worst semisimplicity residual (exact), relative.
    pub residual: f64,
    /// Box side reached by the Cesaro construction.
    pub horizon: u64,
}

impl LimitOperator {
    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// `max_i ||T_i^H A T_i - A|| / max(||A||, 1)`; absolute when the limit vanishes.
    pub fn isometry_residual(&self, t: &OperatorTuple) -> f64 {
        let na = op_norm(&self.a).max(1.0);
        t.mats()
            .iter()
            .map(|m| op_norm(&(m.adjoint() * &self.a * m - &self.a)))
            .fold(0.0, f64::max)
            / na
    }

    /// `||A - A^H|| / ||A||`.
    pub fn hermitian_defect(&self) -> f64 {
        let na = op_norm(&self.a).max(f64::MIN_POSITIVE);
        op_norm(&(&self.a - self.a.adjoint())) / na
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let (vals, _) = linalg::hermitian_eigen(&self.a);
        vals.last().copied().unwrap_or(0.0)
    }
}

/// One pass of the box mean `B -> 2^-m sum_{k < 2^m} (T^k)^H B T^k` by doubling.
fn box_mean(t: &CMat, b: &CMat, m: u32) -> CMat {
    let mut s = b.clone();
    let mut p = t.clone();
    for _ in 0..m {
        s = &s + p.adjoint() * &s * &p;
        p = &p * &p;
    }
    s * c64(2f64.powi(-(m as i32)), 0.0)
}

fn cesaro_at(t: &OperatorTuple, m: u32, order: usize) -> CMat {
    let mut a = identity(t.dim());
    for ti in t.mats() {
        for _ in 0..order {
            a = box_mean(ti, &a, m);
        }
    }
    (&a + a.adjoint()) * c64(0.5, 0.0)
}

/// Iterated Cesaro limit of `(T^k)^H T^k` with box side doubling up to `max_n`.
///
/// Order 1 is the plain box mean; higher orders converge as `N^-order` on the
/// vanishing and oscillating parts while leaving the limit unchanged.
pub fn cesaro_limit(t: &OperatorTuple, max_n: u64, tol: f64) -> Result<LimitOperator> {
    cesaro_limit_with_order(t, max_n, tol, DEFAULT_CESARO_ORDER)
}

pub fn cesaro_limit_with_order(t: &OperatorTuple, max_n: u64, tol: f64, order: usize) -> Result<LimitOperator> {
    let d = t.dim();
    let method = LimitMethod::Cesaro { order: order.max(1) };
    if d == 0 {
        return Ok(LimitOperator { a: zeros(0, 0), method, iterations: 0, residual: 0.0, horizon: 1 });
    }
    let scan = scan_horizon(t.arity());
    let pb = t.power_bound_estimate(scan);
    if pb.growing {
        return Err(Error::Diverging { checkpoint: 0, diff: pb.max });
    }
    let max_m = (max_n.max(2) as f64).log2().floor() as u32;
    let mut prev = cesaro_at(t, 0, order.max(1));
    let mut prev_norm = op_norm(&prev);
    let mut calm = 0;
    let mut growth = 0;
    let mut last_diff = f64::INFINITY;
    for m in 1..=max_m {
        let cur = cesaro_at(t, m, order.max(1));
        let cur_norm = op_norm(&cur);
        let diff = op_norm(&(&cur - &prev));
        let scale = cur_norm.max(prev_norm).max(1.0);
        last_diff = diff / scale;
        growth = if cur_norm > 1.5 * prev_norm && cur_norm > 1.0 { growth + 1 } else { 0 };
        if growth >= 3 {
            return Err(Error::Diverging { checkpoint: m as usize, diff: last_diff });
        }
        calm = if last_diff < tol { calm + 1 } else { 0 };
        prev = cur;
        prev_norm = cur_norm;
        if calm >= 2 {
            return Ok(LimitOperator { a: prev, method, iterations: m as usize, residual: last_diff, horizon: 1 << m });
        }
    }
    let best = LimitOperator { a: prev, method, iterations: max_m as usize, residual: last_diff, horizon: 1 << max_m };
    Err(Error::HorizonExhausted { best: Box::new(best) })
}

fn scan_horizon(n: usize) -> usize {
    match n {
        1 => 64,
        2 => 16,
        3 => 8,
        _ => 4,
    }
}

/// Joint eigenvalue block of a tuple: oblique projection and point in `C^n`.
#[derive(Debug, Clone)]
pub struct JointBlock {
    pub point: Vec<C64>,
    pub projection: CMat,
    pub rank: usize,
}

impl JointBlock {
    pub fn is_unimodular(&self, tol: f64) -> bool {
        self.point.iter().all(|z| (z.norm() - 1.0).abs() <= tol)
    }
}

const UNIMODULAR_TOL: f64 = 1e-6;

/// Closed-form limit `A = sum_z Pi_z^H Pi_z` over unimodular joint eigenvalues.
pub fn exact_limit(t: &OperatorTuple) -> Result<LimitOperator> {
    let d = t.dim();
    if d == 0 {
        return Ok(LimitOperator { a: zeros(0, 0), method: LimitMethod::Exact, iterations: 0, residual: 0.0, horizon: 0 });
    }
    let (blocks, attempts) = joint_blocks(t)?;
    let mut a = zeros(d, d);
    let mut worst = 0.0f64;
    for b in &blocks {
        if b.point.iter().any(|z| z.norm() > 1.0 + UNIMODULAR_TOL) {
            return Err(Error::DecompositionFailed(format!(
                "joint eigenvalue outside the closed polydisc (modulus {:.6})",
                b.point.iter().map(|z| z.norm()).fold(0.0, f64::max)
            )));
        }
        if !b.is_unimodular(UNIMODULAR_TOL) {
            continue;
        }
        let pn = op_norm(&b.projection).max(1.0);
        for (ti, zi) in t.mats().iter().zip(b.point.iter()) {
            let scale = op_norm(ti).max(1.0) * pn;
            let defect = op_norm(&((ti - identity(d) * *zi) * &b.projection)) / scale;
            if defect > 1e-7 {
                return Err(Error::NonSemisimpleUnimodular { defect });
            }
            worst = worst.max(defect);
        }
        a += b.projection.adjoint() * &b.projection;
    }
    let a = (&a + a.adjoint()) * c64(0.5, 0.0);
    Ok(LimitOperator { a, method: LimitMethod::Exact, iterations: attempts, residual: worst, horizon: 0 })
}

/// Oblique joint spectral projections via a generic linear combination.
pub fn joint_blocks(t: &OperatorTuple) -> Result<(Vec<JointBlock>, usize)> {
    let mut last = String::new();
    for attempt in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + attempt as u64);
        let coefs: Vec<C64> = (0..t.arity())
            .map(|i| if i == 0 && attempt == 0 { c64(1.0, 0.0) } else { cis(rng.random::<f64>() * std::f64::consts::TAU) * (0.5 + rng.random::<f64>()) })
            .collect();
        let mut comb = zeros(t.dim(), t.dim());
        for (m, c) in t.mats().iter().zip(coefs.iter()) {
            comb += m * *c;
        }
        // defective stable blocks split into wide eigenvalue clouds; coarser clustering absorbs them
        for factor in [1e-6, 1e-4, 1e-2] {
            match blocks_of_combination(t, &comb, factor) {
                Ok(b) => return Ok((b, attempt + 1)),
                Err(e) => last = e,
            }
        }
    }
    Err(Error::DecompositionFailed(last))
}

fn blocks_of_combination(t: &OperatorTuple, comb: &CMat, factor: f64) -> std::result::Result<Vec<JointBlock>, String> {
    let d = t.dim();
    let ev = linalg::eigenvalues(comb);
    let scale = op_norm(comb).max(1.0);
    let clusters = cluster_points(&ev, factor * scale);
    let centers: Vec<C64> = clusters.iter().map(|c| c.iter().map(|&i| ev[i]).sum::<C64>() / c.len() as f64).collect();
    let mut blocks = Vec::with_capacity(clusters.len());
    let mut total = zeros(d, d);
    for (ci, members) in clusters.iter().enumerate() {
        let mu = centers[ci];
        let gap = centers
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != ci)
            .map(|(_, c)| (c - mu).norm())
            .fold(f64::INFINITY, f64::min);
        let spread = members.iter().map(|&i| (ev[i] - mu).norm()).fold(0.0, f64::max);
        let radius = if gap.is_finite() { gap / 2.0 } else { scale };
        if spread >= radius / 2.0 {
            return Err("eigenvalue cluster too wide for its isolation".into());
        }
        let proj = riesz_projection(comb, mu, radius);
        let rank = members.len();
        let tr = proj.trace();
        if (tr.re - rank as f64).abs() > 1e-6 * rank as f64 {
            return Err(format!("projection trace {:.6} does not match multiplicity {rank}", tr.re));
        }
        let point: Vec<C64> = t.mats().iter().map(|m| (m * &proj).trace() / rank as f64).collect();
        // a merged cluster hides two joint eigenvalues; detect it via the spread of each T_i on the block
        let basis = linalg::range_basis(&proj, 1e-8);
        let left = linalg::pinv(&basis, 1e-12);
        let restricted: Vec<Vec<C64>> = t.mats().iter().map(|m| linalg::eigenvalues(&(&left * m * &basis))).collect();
        // a block on which some T_i is uniformly stable carries no unimodular point, whatever its structure
        let stable = restricted.iter().any(|evs| evs.iter().all(|e| e.norm() < 1.0 - 1e-3));
        if !stable {
            for ((m, z), evs) in t.mats().iter().zip(point.iter()).zip(restricted.iter()) {
                let mscale = op_norm(m).max(1.0);
                if evs.iter().any(|e| (e - z).norm() > 1e-5 * mscale) {
                    return Err("combination merged distinct joint eigenvalues".into());
                }
            }
        }
        total += &proj;
        blocks.push(JointBlock { point, projection: proj, rank });
    }
    let defect = op_norm(&(total - identity(d)));
    if defect > 1e-8 * (d as f64) * blocks.iter().map(|b| op_norm(&b.projection)).fold(1.0, f64::max) {
        return Err(format!("projections do not resolve the identity (defect {defect:.3e})"));
    }
    Ok(blocks)
}

/// Single-linkage clusters of complex points at distance `tol`.
pub(crate) fn cluster_points(pts: &[C64], tol: f64) -> Vec<Vec<usize>> {
    let n = pts.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut c = i;
        while p[c] != r {
            let nx = p[c];
            p[c] = r;
            c = nx;
        }
        r
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (pts[i] - pts[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a] = b;
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        match root_of[r] {
            Some(g) => groups[g].push(i),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Riesz projection `(2 pi i)^-1 oint (zeta - C)^-1 d zeta` on a circle, trapezoidal rule.
fn riesz_projection(c: &CMat, center: C64, radius: f64) -> CMat {
    const NODES: usize = 96;
    let d = c.nrows();
    let mut acc = zeros(d, d);
    for k in 0..NODES {
        let w = cis(std::f64::consts::TAU * k as f64 / NODES as f64);
        let zeta = center + w * radius;
        let res = (identity(d) * zeta - c).try_inverse().unwrap_or_else(|| zeros(d, d));
        // d zeta = i r w d theta, and the 1/(2 pi i) cancels the i
        acc += res * (w * radius);
    }
    acc * c64(1.0 / NODES as f64, 0.0)
}

//! Bilateral shifts on a weighted lattice, truncated to a window.
//!
//! The space is `l^2(Z^n, beta)` with `log2 beta(k) = -sum_i min(0, k_i)`,
//! restricted to `[-N, N]^n`. Coordinates are taken in the orthonormal basis
//! `f_k = delta_k / beta(k)`, so the Euclidean norm of a coefficient vector is
//! the `beta`-norm. In that basis `T^j f_k = beta(k+j)/beta(k) f_{k+j}`, every
//! coefficient a power of two, and vectors supported in `[-N/2, N/2]^n` moved by
//! at most `N/2` per coordinate never touch the boundary.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, c64, CMat, CVec};
use crate::tuple::OperatorTuple;

#[derive(Debug, Clone)]
pub struct WeightedShiftModel {
    n: usize,
    radius: i64,
    side: usize,
    dim: usize,
}

#[derive(Debug, Clone)]
pub struct ShiftLocReport {
    /// Largest `|ratio - 1|` of `inf_j ||T^j h|| / ||Xh||` over the interior samples.
    pub loc_deviation: f64,
    /// Largest `inf_j ||T^{-j} h|| / ||Xh||` over interior basis vectors.
    pub inverse_ratio: f64,
    /// Lattice point attaining `inverse_ratio`.
    pub inverse_argmax: Vec<i64>,
    pub horizon: usize,
    pub cases: usize,
}

impl WeightedShiftModel {
    pub fn new(n: usize, radius: usize) -> Result<Self> {
        if radius < 2 {
            return Err(Error::WindowTooSmall(radius));
        }
        if n == 0 {
            return Err(Error::ArityMismatch { expected: 1, found: 0 });
        }
        let side = 2 * radius + 1;
        Ok(Self { n, radius: radius as i64, side, dim: side.pow(n as u32) })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn radius(&self) -> usize {
        self.radius as usize
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Support radius and horizon on which truncation is exact.
    pub fn margin(&self) -> usize {
        self.radius as usize / 2
    }

    pub fn log2_weight(k: &[i64]) -> i64 {
        -k.iter().map(|&x| x.min(0)).sum::<i64>()
    }

    pub fn weight(k: &[i64]) -> f64 {
        2f64.powi(Self::log2_weight(k) as i32)
    }

    pub fn index(&self, k: &[i64]) -> Option<usize> {
        debug_assert_eq!(k.len(), self.n);
        let mut idx = 0usize;
        for &x in k {
            if x.abs() > self.radius {
                return None;
            }
            idx = idx * self.side + (x + self.radius) as usize;
        }
        Some(idx)
    }

    pub fn point(&self, mut idx: usize) -> Vec<i64> {
        let mut k = vec![0i64; self.n];
        for i in (0..self.n).rev() {
            k[i] = (idx % self.side) as i64 - self.radius;
            idx /= self.side;
        }
        k
    }

    pub fn is_interior(&self, k: &[i64]) -> bool {
        let m = self.margin() as i64;
        k.iter().all(|x| x.abs() <= m)
    }

    pub fn interior_points(&self) -> Vec<Vec<i64>> {
        (0..self.dim).map(|i| self.point(i)).filter(|k| self.is_interior(k)).collect()
    }

    pub fn basis_vector(&self, k: &[i64]) -> CVec {
        let mut v = CVec::zeros(self.dim);
        v[self.index(k).expect("point inside window")] = c64(1.0, 0.0);
        v
    }

    /// `T^j v` for a signed multi-index, with zero fill outside the window.
    pub fn apply_power(&self, j: &[i64], v: &CVec) -> CVec {
        let mut out = CVec::zeros(self.dim);
        for (idx, &c) in v.iter().enumerate() {
            if c == c64(0.0, 0.0) {
                continue;
            }
            let k = self.point(idx);
            let target: Vec<i64> = k.iter().zip(j).map(|(a, b)| a + b).collect();
            if let Some(t) = self.index(&target) {
                let e = Self::log2_weight(&target) - Self::log2_weight(&k);
                out[t] = c * 2f64.powi(e as i32);
            }
        }
        out
    }

    pub fn apply(&self, i: usize, v: &CVec) -> CVec {
        let mut j = vec![0; self.n];
        j[i] = 1;
        self.apply_power(&j, v)
    }

    pub fn apply_inverse(&self, i: usize, v: &CVec) -> CVec {
        let mut j = vec![0; self.n];
        j[i] = -1;
        self.apply_power(&j, v)
    }

    /// The embedding into the unweighted window: `X f_k = delta_k / beta(k)`.
    pub fn apply_x(&self, v: &CVec) -> CVec {
        CVec::from_iterator(
            self.dim,
            v.iter().enumerate().map(|(idx, &c)| c * 2f64.powi(-Self::log2_weight(&self.point(idx)) as i32)),
        )
    }

    /// Euclidean norm summed in index order, so shifted copies give bit-identical results.
    pub fn norm(v: &CVec) -> f64 {
        v.iter().fold(0.0, |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// `inf` over `j` in `[0, horizon]^n` of `||T^{sign j} v|| / ||Xv||`.
    pub fn orbit_ratio(&self, v: &CVec, horizon: usize, inverse: bool) -> f64 {
        let xv = Self::norm(&self.apply_x(v));
        let sign = if inverse { -1 } else { 1 };
        let mut best = f64::INFINITY;
        for k in crate::tuple::MultiIndex::box_indices(self.n, horizon as u64) {
            let j: Vec<i64> = k.entries().iter().map(|&x| sign * x).collect();
            best = best.min(Self::norm(&self.apply_power(&j, v)));
        }
        best / xv
    }

    /// Bound-control of the lower orbit condition for `(X, U)` and its failure for `(X, U^{-1})`,
    /// both checked on interior vectors at the exact horizon.
    pub fn loc_report(&self, random_samples: usize, seed: u64) -> ShiftLocReport {
        let h = self.margin();
        let mut dev: f64 = 0.0;
        let mut inv = (0.0, Vec::new());
        let pts = self.interior_points();
        for k in &pts {
            let v = self.basis_vector(k);
            dev = dev.max((self.orbit_ratio(&v, h, false) - 1.0).abs());
            let r = self.orbit_ratio(&v, h, true);
            if r > inv.0 {
                inv = (r, k.clone());
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..random_samples {
            let mut v = CVec::zeros(self.dim);
            let g = linalg::random_vector(&mut rng, pts.len());
            for (k, c) in pts.iter().zip(g.iter()) {
                v[self.index(k).expect("interior")] = *c;
            }
            dev = dev.max((self.orbit_ratio(&v, h, false) - 1.0).abs());
        }
        ShiftLocReport {
            loc_deviation: dev,
            inverse_ratio: inv.0,
            inverse_argmax: inv.1,
            horizon: h,
            cases: pts.len() + random_samples,
        }
    }

    /// Re-index a vector of this window into a larger window of the same arity.
    pub fn embed_into(&self, larger: &WeightedShiftModel, v: &CVec) -> CVec {
        assert_eq!(self.n, larger.n);
        let mut out = CVec::zeros(larger.dim);
        for (idx, &c) in v.iter().enumerate() {
            out[larger.index(&self.point(idx)).expect("larger window")] = c;
        }
        out
    }

    fn dense(&self, f: impl Fn(&CVec) -> CVec) -> CMat {
        let mut m = CMat::zeros(self.dim, self.dim);
        for c in 0..self.dim {
            let mut e = CVec::zeros(self.dim);
            e[c] = c64(1.0, 0.0);
            m.set_column(c, &f(&e));
        }
        m
    }

    /// Dense shift tuple; intended for small windows.
    pub fn tuple(&self) -> Result<OperatorTuple> {
        let mats = (0..self.n).map(|i| self.dense(|v| self.apply(i, v))).collect();
        OperatorTuple::with_default_tol(mats)
    }

    /// Dense unweighted shifts, the truncated unitary side.
    pub fn unitary_tuple(&self) -> Result<OperatorTuple> {
        let mats = (0..self.n)
            .map(|i| {
                self.dense(|v| {
                    let mut out = CVec::zeros(self.dim);
                    for (idx, &c) in v.iter().enumerate() {
                        let mut k = self.point(idx);
                        k[i] += 1;
                        if let Some(t) = self.index(&k) {
                            out[t] = c;
                        }
                    }
                    out
                })
            })
            .collect();
        OperatorTuple::with_default_tol(mats)
    }

    pub fn embedding(&self) -> CMat {
        self.dense(|v| self.apply_x(v))
    }
}

/// Dense shift tuple on `[-N, N]^n` together with the embedding `X`.
pub fn build_weighted_shift(n: usize, radius: usize) -> Result<(OperatorTuple, CMat)> {
    let m = WeightedShiftModel::new(n, radius)?;
    Ok((m.tuple()?, m.embedding()))
}

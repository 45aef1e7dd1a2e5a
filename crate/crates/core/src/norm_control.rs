//! Optimal norm-control of a unitary asymptote.
//!
//! Every `Y'` in the commutant of `U` is block diagonal over the atoms,
//! `Y' = sum_j Q_j M_j Q_j^H`, and `||Y' X h||^2 = sum_j ||M_j B_j h||^2` with
//! `B_j = Q_j^H X`. Since `B_j B_j^H >= s_j^2 I` where `s_j` is the smallest
//! singular value of `B_j` on `C^{r_j}`, the infimum of `||Y' X||` over
//! `max_j ||M_j|| = 1` is `min_j s_j`, attained by a rank-one `M_j`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::asymptote::{KappaBounds, UnitaryAsymptote};
use crate::error::{Error, Result};
use crate::linalg::{self, c64, op_norm, zeros, CMat};
use crate::spectral::AtomicSpectralMeasure;

#[derive(Debug, Clone)]
pub struct NormControlReport {
    /// `max(1/||X||, 1/descent_min)`.
    pub kappa_op_lower: f64,
    /// `1 / min_j s_j`, the exact optimum.
    pub kappa_op_upper: f64,
    /// `||X|| * kappa_op_upper`.
    pub kappa_aop: f64,
    /// Unit-norm `Y'` in the commutant with `||Y' X|| = 1 / kappa_op_upper`.
    pub witness: CMat,
    /// Atom whose block attains the infimum.
    pub atom: usize,
    /// Best `||Y' X||` found by projected subgradient descent from random starts.
    pub descent_min: f64,
}

impl NormControlReport {
    pub fn bounds(&self) -> KappaBounds {
        KappaBounds { lower: self.kappa_op_lower, upper: self.kappa_op_upper }
    }
}

/// Smallest singular value of `B` as a map onto `C^rows`; zero when `B` is not onto.
fn row_sigma_min(b: &CMat) -> (f64, linalg::CVec) {
    let (r, c) = b.shape();
    if r > c {
        // the rows are dependent: a left null vector exists
        let ns = linalg::nullspace(&b.adjoint(), 1e-14);
        let v = if ns.ncols() > 0 { ns.column(0).into_owned() } else { linalg::CVec::zeros(r) };
        return (0.0, v);
    }
    let f = linalg::thin_svd(b);
    let j = f.s.len() - 1;
    (f.s[j], f.u.column(j).into_owned())
}

pub fn norm_control(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure, restarts: usize, seed: u64) -> Result<NormControlReport> {
    if a.is_degenerate() {
        return Err(Error::ZeroX);
    }
    if m.dim() != a.k_dim() {
        return Err(Error::DimMismatch { expected: a.k_dim(), found: m.dim() });
    }
    let x = a.x();
    let mut best = (f64::INFINITY, 0usize, linalg::CVec::zeros(0));
    for j in 0..m.len() {
        let b = m.basis(j).adjoint() * x;
        let (s, v) = row_sigma_min(&b);
        if s < best.0 {
            best = (s, j, v);
        }
    }
    let (smin, atom, v) = best;
    let q = m.basis(atom);
    let qv = q * v;
    let witness = &qv * qv.adjoint();
    let descent_min = descent(a, m, restarts, seed);
    let nx = op_norm(x);
    let upper = if smin > 0.0 { 1.0 / smin } else { f64::INFINITY };
    let lower = (1.0 / nx).max(1.0 / descent_min).min(upper);
    Ok(NormControlReport {
        kappa_op_lower: lower,
        kappa_op_upper: upper,
        kappa_aop: nx * upper,
        witness,
        atom,
        descent_min,
    })
}

/// Attach the norm-control bounds to the asymptote.
pub fn with_norm_control(a: &UnitaryAsymptote, report: &NormControlReport) -> UnitaryAsymptote {
    let mut out = a.clone();
    out.kappa = Some(report.bounds());
    out
}

/// Projected subgradient descent of `||Y' X||` over the block unit sphere.
fn descent(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure, restarts: usize, seed: u64) -> f64 {
    const ITERS: usize = 120;
    let x = a.x();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let assemble = |blocks: &[CMat]| {
        let mut y = zeros(m.dim(), m.dim());
        for (j, mj) in blocks.iter().enumerate() {
            y += m.basis(j) * mj * m.basis(j).adjoint();
        }
        y
    };
    let normalize = |blocks: &mut Vec<CMat>| {
        let top = blocks.iter().map(op_norm).fold(0.0, f64::max);
        if top > 0.0 {
            for b in blocks.iter_mut() {
                *b /= c64(top, 0.0);
            }
        }
    };
    let mut best = f64::INFINITY;
    for _ in 0..restarts.max(1) {
        let mut blocks: Vec<CMat> = (0..m.len()).map(|j| linalg::random_matrix(&mut rng, m.rank(j), m.rank(j))).collect();
        normalize(&mut blocks);
        for it in 0..ITERS {
            let y = assemble(&blocks);
            let yx = &y * x;
            let f = linalg::thin_svd(&yx);
            best = best.min(f.s[0]);
            let u1 = f.u.column(0).into_owned();
            let v1 = f.v.column(0).into_owned();
            let g = &u1 * (x * v1).adjoint();
            let step = 0.5 / ((it + 1) as f64).sqrt();
            for (j, b) in blocks.iter_mut().enumerate() {
                let gj = m.basis(j).adjoint() * &g * m.basis(j);
                *b -= gj * c64(step, 0.0);
            }
            normalize(&mut blocks);
        }
        let y = assemble(&blocks);
        best = best.min(op_norm(&(&y * x)));
    }
    best
}

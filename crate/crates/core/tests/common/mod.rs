#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unitary_asymptotes::linalg::{self, c64, cis, CMat, CVec, C64};
use unitary_asymptotes::tuple::OperatorTuple;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `T_i = S (diag(z_i) + B_i) S^-1` with the stable block known.
pub struct Instance {
    pub t: OperatorTuple,
    pub s: CMat,
    /// Number of unimodular coordinates; the rest is stable.
    pub unimodular: usize,
    /// Joint unimodular points, one per unimodular coordinate.
    pub points: Vec<Vec<C64>>,
}

impl Instance {
    /// Orthonormal basis of `S (0 + C^s)`.
    pub fn stable_subspace(&self) -> CMat {
        let d = self.t.dim();
        let cols: Vec<usize> = (self.unimodular..d).collect();
        let raw = linalg::select_cols(&self.s, &cols);
        if raw.ncols() == 0 {
            return CMat::zeros(d, 0);
        }
        linalg::range_basis(&raw, 1e-12)
    }
}

/// Random matrix with singular values spread over `[1, cond]`.
pub fn conditioned<R: Rng>(rng: &mut R, d: usize, cond: f64) -> CMat {
    let u = linalg::random_unitary(rng, d);
    let v = linalg::random_unitary(rng, d);
    let mut sv: Vec<f64> = (0..d).map(|_| 1.0 + (cond - 1.0) * rng.random::<f64>()).collect();
    if d >= 2 {
        sv[0] = 1.0;
        sv[1] = cond;
    }
    let sig = CMat::from_diagonal(&CVec::from_iterator(d, sv.iter().map(|&x| c64(x, 0.0))));
    u * sig * v.adjoint()
}

/// `count` joint points on the torus, pairwise at least `sep` apart.
pub fn separated_points<R: Rng>(rng: &mut R, n: usize, count: usize, sep: f64) -> Vec<Vec<C64>> {
    loop {
        let pts: Vec<Vec<C64>> =
            (0..count).map(|_| (0..n).map(|_| cis(rng.random::<f64>() * std::f64::consts::TAU)).collect()).collect();
        let ok = (0..count).all(|a| {
            (a + 1..count).all(|b| pts[a].iter().zip(&pts[b]).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) >= sep)
        });
        if ok {
            return pts;
        }
    }
}

/// Commuting stable tuple on `C^s` with moduli at most `rmax`.
pub fn stable_block<R: Rng>(rng: &mut R, n: usize, s: usize, rmin: f64, rmax: f64) -> Vec<CMat> {
    let modulus = |rng: &mut R| rmin + (rmax - rmin) * rng.random::<f64>();
    if rng.random::<bool>() {
        // polynomials in one nilpotent matrix: defective, single eigenvalue per coordinate
        let mut m = CMat::zeros(s, s);
        for r in 0..s {
            for c in (r + 1)..s {
                m[(r, c)] = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 0.6;
            }
        }
        (0..n)
            .map(|_| {
                let alpha = cis(rng.random::<f64>() * std::f64::consts::TAU) * modulus(rng);
                let beta = c64(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5) * 0.5;
                linalg::identity(s) * alpha + &m * beta
            })
            .collect()
    } else {
        let p = conditioned(rng, s, 3.0);
        let pi = linalg::inverse(&p).expect("well conditioned");
        (0..n)
            .map(|_| {
                let d = CVec::from_iterator(
                    s,
                    (0..s).map(|_| cis(rng.random::<f64>() * std::f64::consts::TAU) * modulus(rng)),
                );
                &p * CMat::from_diagonal(&d) * &pi
            })
            .collect()
    }
}

pub fn assemble<R: Rng>(rng: &mut R, n: usize, d: usize, unimodular: usize, rmin: f64, rmax: f64) -> Instance {
    let s_dim = d - unimodular;
    let distinct = if unimodular == 0 { 0 } else { rng.random_range(1..=unimodular.min(4)) };
    let base = separated_points(rng, n, distinct, 0.3);
    let points: Vec<Vec<C64>> = (0..unimodular).map(|j| base[j % distinct.max(1)].clone()).collect();
    let stable = if s_dim > 0 { stable_block(rng, n, s_dim, rmin, rmax) } else { vec![CMat::zeros(0, 0); n] };
    let s = conditioned(rng, d, 10.0);
    let si = linalg::inverse(&s).expect("well conditioned");
    let mats = (0..n)
        .map(|i| {
            let diag = CMat::from_diagonal(&CVec::from_iterator(unimodular, points.iter().map(|p| p[i])));
            let core = linalg::block_diag(&diag, &stable[i]);
            &s * core * &si
        })
        .collect();
    Instance { t: OperatorTuple::new(mats, 1e-9).expect("commuting by construction"), s, unimodular, points }
}

/// Power-bounded instance: `n <= 3`, `d <= 12`, stable moduli at most 0.9.
pub fn power_bounded<R: Rng>(rng: &mut R) -> Instance {
    let n = rng.random_range(1..=3);
    let d = rng.random_range(2..=12);
    let unimodular = rng.random_range(0..=d);
    assemble(rng, n, d, unimodular, 0.05, 0.9)
}

/// Instance with at least one unimodular coordinate, so `X != 0`.
pub fn nondegenerate<R: Rng>(rng: &mut R, dmax: usize) -> Instance {
    let n = rng.random_range(1..=3);
    let d = rng.random_range(2..=dmax);
    let unimodular = rng.random_range(1..=d);
    assemble(rng, n, d, unimodular, 0.05, 0.9)
}

pub fn relative(a: &CMat, b: &CMat) -> f64 {
    linalg::op_norm(&(a - b)) / linalg::op_norm(a).max(linalg::op_norm(b)).max(f64::MIN_POSITIVE)
}

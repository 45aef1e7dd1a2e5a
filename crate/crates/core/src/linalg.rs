//! Dense complex linear algebra helpers shared by every module.

use faer::Side;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Default relative threshold for rank decisions.
pub const RANK_TOL: f64 = 1e-8;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Unimodular complex number `exp(i theta)`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

pub fn zeros(r: usize, c: usize) -> CMat {
    CMat::zeros(r, c)
}

fn to_faer(m: &CMat) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, C64>) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// `m = U diag(s) V^H` with singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMat,
    pub s: Vec<f64>,
    pub v: CMat,
}

fn unpack_svd(d: faer::linalg::solvers::Svd<C64>) -> Svd {
    let s = d.S().column_vector().iter().map(|z| z.re).collect();
    Svd { u: from_faer(d.U()), s, v: from_faer(d.V()) }
}

/// Full SVD: `U` and `V` are square.
pub fn svd(m: &CMat) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd { u: identity(r), s: Vec::new(), v: identity(c) };
    }
    unpack_svd(to_faer(m).svd().expect("SVD converged"))
}

/// Thin SVD: `U` is `r x k`, `V` is `c x k` with `k = min(r, c)`.
pub fn thin_svd(m: &CMat) -> Svd {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return Svd { u: zeros(r, 0), s: Vec::new(), v: zeros(c, 0) };
    }
    unpack_svd(to_faer(m).thin_svd().expect("SVD converged"))
}

/// Singular values in descending order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    to_faer(m).singular_values().expect("SVD converged")
}

/// Spectral (operator 2-) norm.
pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn fro_norm(m: &CMat) -> f64 {
    m.norm()
}

/// Smallest singular value of `m` regarded as a map from `C^ncols`.
///
/// Returns 0 when the map cannot be injective (more columns than rows).
pub fn sigma_min(m: &CMat) -> f64 {
    if m.ncols() == 0 {
        return f64::INFINITY;
    }
    if m.nrows() < m.ncols() {
        return 0.0;
    }
    singular_values(m).last().copied().unwrap_or(0.0)
}

/// Numerical rank with singular values above `rel_tol * sigma_max`.
pub fn rank(m: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > rel_tol * top).count(),
        _ => 0,
    }
}

/// Orthonormal basis (as columns) of the null space of `m`.
pub fn nullspace(m: &CMat, rel_tol: f64) -> CMat {
    let top = singular_values(m).first().copied().unwrap_or(0.0);
    nullspace_below(m, rel_tol * top)
}

/// Null space with singular values at or below the absolute level `abs_tol`.
pub fn nullspace_below(m: &CMat, abs_tol: f64) -> CMat {
    let c = m.ncols();
    if c == 0 {
        return zeros(0, 0);
    }
    if m.nrows() == 0 {
        return identity(c);
    }
    let f = svd(m);
    let keep: Vec<usize> = (0..c).filter(|&j| f.s.get(j).copied().unwrap_or(0.0) <= abs_tol).collect();
    select_cols(&f.v, &keep)
}

/// Orthonormal basis (as columns) of the column space of `m`.
pub fn range_basis(m: &CMat, rel_tol: f64) -> CMat {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return zeros(r, 0);
    }
    let f = thin_svd(m);
    let top = f.s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return zeros(r, 0);
    }
    let keep: Vec<usize> = (0..f.s.len()).filter(|&j| f.s[j] > rel_tol * top).collect();
    select_cols(&f.u, &keep)
}

pub fn select_cols(m: &CMat, idx: &[usize]) -> CMat {
    let mut out = zeros(m.nrows(), idx.len());
    for (k, &j) in idx.iter().enumerate() {
        out.set_column(k, &m.column(j));
    }
    out
}

/// Horizontal concatenation.
pub fn hcat(blocks: &[&CMat]) -> CMat {
    let r = blocks.first().map(|b| b.nrows()).unwrap_or(0);
    let c: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = zeros(r, c);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.nrows(), r, "hcat row mismatch");
        out.view_mut((0, off), (r, b.ncols())).copy_from(*b);
        off += b.ncols();
    }
    out
}

/// Vertical concatenation.
pub fn vcat(blocks: &[&CMat]) -> CMat {
    let c = blocks.first().map(|b| b.ncols()).unwrap_or(0);
    let r: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = zeros(r, c);
    let mut off = 0;
    for b in blocks {
        assert_eq!(b.ncols(), c, "vcat column mismatch");
        out.view_mut((off, 0), (b.nrows(), c)).copy_from(*b);
        off += b.nrows();
    }
    out
}

/// Block-diagonal direct sum.
pub fn block_diag(a: &CMat, b: &CMat) -> CMat {
    let mut out = zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), a.shape()).copy_from(a);
    out.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    out
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Moore-Penrose pseudo-inverse with relative cutoff.
pub fn pinv(m: &CMat, rel_tol: f64) -> CMat {
    let (r, c) = m.shape();
    if r == 0 || c == 0 {
        return zeros(c, r);
    }
    let f = thin_svd(m);
    let cut = rel_tol * f.s[0];
    let mut v = f.v;
    for (j, &sj) in f.s.iter().enumerate() {
        let w = if sj > cut && sj > 0.0 { 1.0 / sj } else { 0.0 };
        v.column_mut(j).scale_mut(w);
    }
    v * f.u.adjoint()
}

/// Inverse of a square matrix, or `None` when numerically singular.
pub fn inverse(m: &CMat) -> Option<CMat> {
    if m.nrows() == 0 {
        return Some(zeros(0, 0));
    }
    let s = singular_values(m);
    if s.last().copied().unwrap_or(0.0) <= RANK_TOL * s[0] {
        return None;
    }
    m.clone().try_inverse()
}

/// Hermitian eigen-decomposition, eigenvalues descending.
pub fn hermitian_eigen(a: &CMat) -> (Vec<f64>, CMat) {
    let d = a.nrows();
    if d == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let h = (a + a.adjoint()) * c64(0.5, 0.0);
    let e = to_faer(&h).self_adjoint_eigen(Side::Lower).expect("Hermitian eigensolver converged");
    let vals: Vec<f64> = e.S().column_vector().iter().map(|z| z.re).rev().collect();
    let q = from_faer(e.U());
    let order: Vec<usize> = (0..d).rev().collect();
    (vals, select_cols(&q, &order))
}

/// Positive semidefinite square root of a Hermitian matrix.
pub fn sqrt_psd(a: &CMat) -> CMat {
    let (vals, q) = hermitian_eigen(a);
    let mut scaled = q.clone();
    for (j, v) in vals.iter().enumerate() {
        let s = v.max(0.0).sqrt();
        scaled.column_mut(j).scale_mut(s);
    }
    scaled * q.adjoint()
}

/// Polar decomposition `m = W P` with `W` unitary (square input).
pub fn polar(m: &CMat) -> (CMat, CMat) {
    let d = m.nrows();
    if d == 0 {
        return (zeros(0, 0), zeros(0, 0));
    }
    let f = svd(m);
    let w = &f.u * f.v.adjoint();
    let mut sv = f.v.clone();
    for (j, s) in f.s.iter().enumerate() {
        sv.column_mut(j).scale_mut(*s);
    }
    (w, sv * f.v.adjoint())
}

/// Absolute value `|m| = (m^H m)^{1/2}` of a square matrix, taken from the SVD.
pub fn abs_mat(m: &CMat) -> CMat {
    polar(m).1
}

pub fn eigenvalues(m: &CMat) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    to_faer(m).eigenvalues().expect("eigensolver converged")
}

/// Orthonormal eigenvectors `Q` and eigenvalues of a unitary matrix.
///
/// The Cayley transform about the middle of the widest angular gap of the
/// spectrum is Hermitian with the same eigenvectors, so a Hermitian solver
/// gives an orthonormal eigenbasis even inside tight clusters.
pub fn unitary_eigen(u: &CMat) -> (Vec<C64>, CMat) {
    let d = u.nrows();
    if d == 0 {
        return (Vec::new(), zeros(0, 0));
    }
    let mut angles: Vec<f64> = eigenvalues(u).iter().map(|z| z.arg()).collect();
    angles.sort_by(f64::total_cmp);
    let mut pole = angles[0] + std::f64::consts::PI;
    let mut widest = 0.0;
    for k in 0..d {
        let next = if k + 1 < d { angles[k + 1] } else { angles[0] + std::f64::consts::TAU };
        if next - angles[k] > widest {
            widest = next - angles[k];
            pole = angles[k] + widest / 2.0;
        }
    }
    // H = i (U + w)(U - w)^{-1} with w = exp(i pole) is Hermitian for unitary U
    let w = cis(pole);
    let den = inverse(&(u - identity(d) * w)).expect("pole off the spectrum");
    let h = (u + identity(d) * w) * den * c64(0.0, 1.0);
    let (_, q) = hermitian_eigen(&h);
    let t = q.adjoint() * u * &q;
    ((0..d).map(|k| t[(k, k)]).collect(), q)
}

pub fn spectral_radius(m: &CMat) -> f64 {
    eigenvalues(m).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Nonnegative integer power by repeated squaring.
pub fn mat_pow(m: &CMat, k: u64) -> CMat {
    let mut result = identity(m.nrows());
    let mut base = m.clone();
    let mut e = k;
    while e > 0 {
        if e & 1 == 1 {
            result = &result * &base;
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result
}

/// Largest principal angle (radians) between two subspaces given by orthonormal columns.
///
/// Returns `PI/2` when the dimensions differ.
pub fn max_principal_angle(q1: &CMat, q2: &CMat) -> f64 {
    if q1.ncols() != q2.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if q1.ncols() == 0 {
        return 0.0;
    }
    let s = singular_values(&(q1.adjoint() * q2));
    let smin = s.last().copied().unwrap_or(0.0).min(1.0);
    smin.acos()
}

/// Distance of `m` from unitary: `||m^H m - I||`.
pub fn unitarity_defect(m: &CMat) -> f64 {
    op_norm(&(m.adjoint() * m - identity(m.ncols())))
}

/// `||P^2 - P|| + ||P - P^H||`.
pub fn projection_defect(p: &CMat) -> f64 {
    op_norm(&(p * p - p)) + op_norm(&(p - p.adjoint()))
}

pub fn orth_projector(basis: &CMat) -> CMat {
    basis * basis.adjoint()
}

/// Gaussian complex matrix with unit-variance real and imaginary parts.
pub fn random_matrix<R: Rng>(rng: &mut R, r: usize, c: usize) -> CMat {
    CMat::from_fn(r, c, |_, _| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn random_vector<R: Rng>(rng: &mut R, d: usize) -> CVec {
    CVec::from_fn(d, |_, _| c64(rng.sample(StandardNormal), rng.sample(StandardNormal)))
}

pub fn random_unit_vector<R: Rng>(rng: &mut R, d: usize) -> CVec {
    let v = random_vector(rng, d);
    let n = v.norm();
    if n == 0.0 {
        v
    } else {
        v.unscale(n)
    }
}

/// Haar-ish random unitary from the QR of a Gaussian matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> CMat {
    if d == 0 {
        return zeros(0, 0);
    }
    let g = random_matrix(rng, d, d);
    let (w, _) = polar(&g);
    w
}

/// `vec` stacking columns.
pub fn vec_of(m: &CMat) -> CVec {
    CVec::from_column_slice(m.as_slice())
}

pub fn unvec(v: &[C64], r: usize, c: usize) -> CMat {
    CMat::from_column_slice(r, c, v)
}

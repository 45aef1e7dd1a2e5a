//! Commuting tuples of matrices, their powers, orbits, commutants and intertwiners.

use crate::error::{Error, Result};
use crate::linalg::{
    self, block_diag, c64, identity, kron, mat_pow, nullspace, op_norm, spectral_radius, vcat, zeros, CMat, CVec,
    RANK_TOL,
};

pub const DEFAULT_COMMUTE_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct OperatorTuple {
    mats: Vec<CMat>,
    dim: usize,
    commute_tol: f64,
    residual: f64,
}

impl OperatorTuple {
    /// Validate commutation `||T_i T_j - T_j T_i|| <= tol ||T_i|| ||T_j||` and build the tuple.
    pub fn new(mats: Vec<CMat>, tol: f64) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::ShapeMismatch("a tuple needs at least one matrix".into()));
        }
        let dim = mats[0].nrows();
        for (i, m) in mats.iter().enumerate() {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::ShapeMismatch(format!(
                    "matrix {i} is {}x{}, expected {dim}x{dim}",
                    m.nrows(),
                    m.ncols()
                )));
            }
        }
        let norms: Vec<f64> = mats.iter().map(op_norm).collect();
        let mut worst = 0.0f64;
        for i in 0..mats.len() {
            for j in (i + 1)..mats.len() {
                let scale = norms[i] * norms[j];
                if scale == 0.0 {
                    continue;
                }
                let comm = &mats[i] * &mats[j] - &mats[j] * &mats[i];
                let r = op_norm(&comm) / scale;
                if r > tol {
                    return Err(Error::NonCommuting { i, j, residual: r });
                }
                worst = worst.max(r);
            }
        }
        Ok(Self { mats, dim, commute_tol: tol, residual: worst })
    }

    pub fn with_default_tol(mats: Vec<CMat>) -> Result<Self> {
        Self::new(mats, DEFAULT_COMMUTE_TOL)
    }

    /// Build a tuple known to commute exactly by construction.
    pub(crate) fn trusted(mats: Vec<CMat>) -> Self {
        let dim = mats.first().map(|m| m.nrows()).unwrap_or(0);
        Self { mats, dim, commute_tol: DEFAULT_COMMUTE_TOL, residual: 0.0 }
    }

    pub fn single(m: CMat) -> Result<Self> {
        Self::with_default_tol(vec![m])
    }

    pub fn arity(&self) -> usize {
        self.mats.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mats(&self) -> &[CMat] {
        &self.mats
    }

    pub fn mat(&self, i: usize) -> &CMat {
        &self.mats[i]
    }

    pub fn commute_tol(&self) -> f64 {
        self.commute_tol
    }

    /// Worst relative commutator residual seen at validation.
    pub fn commute_residual(&self) -> f64 {
        self.residual
    }

    /// `T^k`; negative entries require invertible factors.
    pub fn power(&self, k: &MultiIndex) -> Result<CMat> {
        if k.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: k.len() });
        }
        let mut out = identity(self.dim);
        for (i, &e) in k.entries().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if e < 0 {
                linalg::inverse(&self.mats[i]).ok_or(Error::SingularFactor(i))?
            } else {
                self.mats[i].clone()
            };
            out *= mat_pow(&base, e.unsigned_abs());
        }
        Ok(out)
    }

    /// Minimum of `||T^k h||` over the box `0 <= k_i <= horizon`.
    ///
    /// This is an upper bound on the orbit infimum over the whole semigroup.
    pub fn orbit_infimum(&self, h: &CVec, horizon: usize) -> f64 {
        let mut best = f64::INFINITY;
        self.walk_orbit(h.clone(), 0, horizon, &mut |v| best = best.min(v.norm()));
        best
    }

    fn walk_orbit(&self, v: CVec, coord: usize, horizon: usize, f: &mut impl FnMut(&CVec)) {
        if coord == self.arity() {
            f(&v);
            return;
        }
        let mut cur = v;
        for step in 0..=horizon {
            self.walk_orbit(cur.clone(), coord + 1, horizon, f);
            if step < horizon {
                cur = &self.mats[coord] * cur;
            }
        }
    }

    /// Maximum of `||T^k||` over the box, a lower bound on the power bound.
    pub fn power_bound_estimate(&self, horizon: usize) -> PowerBound {
        let mut interior = 0.0f64;
        let mut boundary = 0.0f64;
        let mut at = vec![0usize; self.arity()];
        self.walk_powers(identity(self.dim), 0, horizon, &mut at, &mut |k, m| {
            let v = op_norm(m);
            if k.contains(&horizon) && horizon > 0 {
                boundary = boundary.max(v);
            } else {
                interior = interior.max(v);
            }
        });
        let max = interior.max(boundary);
        PowerBound { max, growing: horizon > 0 && boundary > 1.01 * interior }
    }

    fn walk_powers(
        &self,
        m: CMat,
        coord: usize,
        horizon: usize,
        at: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize], &CMat),
    ) {
        if coord == self.arity() {
            f(at, &m);
            return;
        }
        let mut cur = m;
        for step in 0..=horizon {
            at[coord] = step;
            self.walk_powers(cur.clone(), coord + 1, horizon, at, f);
            if step < horizon {
                cur = &self.mats[coord] * cur;
            }
        }
        at[coord] = 0;
    }

    /// Spectral radii `r(T^k)` with the zero-type and necessary-condition verdicts.
    pub fn spectral_radius_report(&self, ks: &[MultiIndex]) -> Result<SpectralRadiusReport> {
        let invertible = self.mats.iter().all(|m| linalg::inverse(m).is_some());
        let mut radii = Vec::with_capacity(ks.len());
        let mut zero_type = false;
        let mut failed = false;
        for k in ks {
            let r = spectral_radius(&self.power(k)?);
            let nonneg = k.entries().iter().all(|&e| e >= 0);
            if invertible && (r - 1.0).abs() > 1e-8 {
                zero_type = true;
            }
            if nonneg && r < 1.0 - 1e-8 {
                failed = true;
            }
            radii.push((k.clone(), r));
        }
        Ok(SpectralRadiusReport { radii, zero_type_certified: zero_type, necessary_condition_failed: failed })
    }

    pub fn commutant_basis(&self) -> IntertwinerSpace {
        intertwiner_basis(self, self)
    }

    pub fn intertwiner_space(&self, target: &OperatorTuple) -> Result<IntertwinerSpace> {
        if self.arity() != target.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: target.arity() });
        }
        Ok(intertwiner_basis(self, target))
    }

    pub fn direct_sum(&self, other: &OperatorTuple) -> Result<OperatorTuple> {
        if self.arity() != other.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), found: other.arity() });
        }
        let mats = self.mats.iter().zip(other.mats.iter()).map(|(a, b)| block_diag(a, b)).collect();
        Ok(Self {
            mats,
            dim: self.dim + other.dim,
            commute_tol: self.commute_tol.max(other.commute_tol),
            residual: self.residual.max(other.residual),
        })
    }

    pub fn inverse_tuple(&self) -> Result<OperatorTuple> {
        let mut inv = Vec::with_capacity(self.arity());
        for (i, m) in self.mats.iter().enumerate() {
            inv.push(linalg::inverse(m).ok_or(Error::SingularFactor(i))?);
        }
        // inverses of commuting matrices commute; rounding is amplified by the condition number
        let cond: f64 = self
            .mats
            .iter()
            .zip(inv.iter())
            .map(|(m, mi)| op_norm(m) * op_norm(mi))
            .fold(1.0, f64::max);
        Self::new(inv, self.commute_tol.max(1e-14) * cond * cond)
    }

    /// `max_i ||T_i^H T_i - I||`.
    pub fn unitarity_defect(&self) -> f64 {
        self.mats.iter().map(linalg::unitarity_defect).fold(0.0, f64::max)
    }

    pub fn adjoint_tuple(&self) -> OperatorTuple {
        Self { mats: self.mats.iter().map(|m| m.adjoint()).collect(), ..self.clone() }
    }

    /// Conjugate every matrix: `S T_i S^{-1}`.
    pub fn similar(&self, s: &CMat) -> Result<OperatorTuple> {
        let si = linalg::inverse(s).ok_or(Error::Singular)?;
        let mats = self.mats.iter().map(|m| s * m * &si).collect();
        Self::new(mats, self.commute_tol.max(1e-12))
    }

    /// Residual `max_i ||X T_i - V_i X||`.
    pub fn intertwining_residual(&self, x: &CMat, target: &OperatorTuple) -> f64 {
        self.mats
            .iter()
            .zip(target.mats.iter())
            .map(|(t, v)| op_norm(&(x * t - v * x)))
            .fold(0.0, f64::max)
    }
}

/// Power-bound scan result.
#[derive(Debug, Clone, Copy)]
pub struct PowerBound {
    pub max: f64,
    /// The maximum sits on the box boundary and beats the interior by more than 1%.
    pub growing: bool,
}

#[derive(Debug, Clone)]
pub struct SpectralRadiusReport {
    pub radii: Vec<(MultiIndex, f64)>,
    pub zero_type_certified: bool,
    pub necessary_condition_failed: bool,
}

impl SpectralRadiusReport {
    pub fn min_radius(&self) -> f64 {
        self.radii.iter().map(|(_, r)| *r).fold(f64::INFINITY, f64::min)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<i64>,
    signed: bool,
}

impl MultiIndex {
    pub fn nonneg(entries: Vec<u64>) -> Self {
        Self { entries: entries.into_iter().map(|e| e as i64).collect(), signed: false }
    }

    pub fn signed(entries: Vec<i64>) -> Self {
        Self { entries, signed: true }
    }

    pub fn zero(n: usize) -> Self {
        Self { entries: vec![0; n], signed: false }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Self { entries: e, signed: false }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        Self {
            entries: self.entries.iter().zip(other.entries.iter()).map(|(a, b)| a + b).collect(),
            signed: self.signed || other.signed,
        }
    }

    /// All indices of the box `[0, horizon]^n`.
    pub fn box_indices(n: usize, horizon: u64) -> Vec<MultiIndex> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * (horizon as usize + 1));
            for prefix in &out {
                for k in 0..=horizon {
                    let mut p = prefix.clone();
                    p.push(k);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex::nonneg).collect()
    }
}

/// Orthonormal-column subspace of `C^d`.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    pub fn new(basis: CMat) -> Result<Self> {
        let k = basis.ncols();
        let defect = op_norm(&(basis.adjoint() * &basis - identity(k)));
        if defect > 1e-8 {
            return Err(Error::ShapeMismatch(format!("basis is not orthonormal (defect {defect:.3e})")));
        }
        Ok(Self { basis })
    }

    /// Orthonormalized column span of an arbitrary matrix.
    pub fn span_of(m: &CMat) -> Self {
        Self { basis: linalg::range_basis(m, RANK_TOL) }
    }

    pub fn zero(d: usize) -> Self {
        Self { basis: zeros(d, 0) }
    }

    pub fn full(d: usize) -> Self {
        Self { basis: identity(d) }
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// Relative distance of `v` from the subspace.
    pub fn distance(&self, v: &CVec) -> f64 {
        let n = v.norm();
        if n == 0.0 {
            return 0.0;
        }
        let r = v - &self.basis * (self.basis.adjoint() * v);
        r.norm() / n
    }

    pub fn contains(&self, v: &CVec, tol: f64) -> bool {
        self.distance(v) <= tol
    }

    /// Largest relative distance of `m * basis` from the subspace.
    pub fn invariance_residual(&self, m: &CMat) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        let img = m * &self.basis;
        let r = &img - &self.basis * (self.basis.adjoint() * &img);
        op_norm(&r) / op_norm(m).max(f64::MIN_POSITIVE)
    }
}

/// Basis of the solution space of `X T_i = V_i X`.
#[derive(Debug, Clone)]
pub struct IntertwinerSpace {
    source_dim: usize,
    target_dim: usize,
    basis: Vec<CMat>,
}

impl IntertwinerSpace {
    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.target_dim
    }

    /// Relative residual of the orthogonal projection of `m` onto the space.
    pub fn membership_residual(&self, m: &CMat) -> f64 {
        let n = m.norm();
        if n == 0.0 {
            return 0.0;
        }
        // basis elements are orthonormal in the Frobenius inner product
        let mut r = m.clone();
        for b in &self.basis {
            let coef = b.dotc(m);
            r -= b * coef;
        }
        r.norm() / n
    }
}

fn intertwiner_basis(src: &OperatorTuple, dst: &OperatorTuple) -> IntertwinerSpace {
    let (d1, d2) = (src.dim(), dst.dim());
    let unknowns = d1 * d2;
    if unknowns == 0 {
        return IntertwinerSpace { source_dim: d1, target_dim: d2, basis: Vec::new() };
    }
    let i1 = identity(d1);
    let i2 = identity(d2);
    let mut blocks = Vec::with_capacity(src.arity());
    for (t, v) in src.mats().iter().zip(dst.mats().iter()) {
        let scale = op_norm(t).max(op_norm(v)).max(f64::MIN_POSITIVE);
        // vec(X T) = (T^T kron I) vec X, vec(V X) = (I kron V) vec X
        let block = (kron(&t.transpose(), &i2) - kron(&i1, v)) * c64(1.0 / scale, 0.0);
        blocks.push(block);
    }
    let refs: Vec<&CMat> = blocks.iter().collect();
    let sys = vcat(&refs);
    let ns = absolute_nullspace(&sys);
    let basis = (0..ns.ncols())
        .map(|j| linalg::unvec(ns.column(j).as_slice(), d2, d1))
        .collect();
    IntertwinerSpace { source_dim: d1, target_dim: d2, basis }
}

/// Null space where the threshold is relative to the unit-scaled system, so a zero system yields everything.
fn absolute_nullspace(sys: &CMat) -> CMat {
    let top = op_norm(sys);
    if top == 0.0 {
        return identity(sys.ncols());
    }
    // the blocks are normalized to norm about one, so the top singular value is O(1)
    let rel = RANK_TOL / top.max(1.0);
    nullspace(sys, rel)
}

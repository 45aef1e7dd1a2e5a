//! Unitary asymptotes `(X, U)`: construction, minimality, classification and factorization.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::limit::{self, LimitMethod, LimitOperator};
use crate::linalg::{
    self, c64, hcat, identity, op_norm, polar, random_unit_vector, range_basis, sigma_min, zeros, CMat, CVec,
    RANK_TOL,
};
use crate::tuple::{OperatorTuple, Subspace};

/// Cesaro horizon used when the closed form is unavailable.
pub const DEFAULT_MAX_N: u64 = 1 << 22;
pub const DEFAULT_CESARO_TOL: f64 = 1e-12;

/// Bounds on the optimal norm-control constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KappaBounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone)]
pub struct UnitaryAsymptote {
    source: OperatorTuple,
    x: CMat,
    u: OperatorTuple,
    pub kappa: Option<KappaBounds>,
    pub loc_bound: Option<f64>,
    pub method: Option<LimitMethod>,
}

impl UnitaryAsymptote {
    /// Assemble a pair and check that `X T_i = U_i X` and each `U_i` is unitary.
    pub fn new(source: OperatorTuple, x: CMat, u: OperatorTuple) -> Result<Self> {
        if x.ncols() != source.dim() || x.nrows() != u.dim() {
            return Err(Error::ShapeMismatch(format!(
                "X is {}x{}, expected {}x{}",
                x.nrows(),
                x.ncols(),
                u.dim(),
                source.dim()
            )));
        }
        if source.arity() != u.arity() {
            return Err(Error::ArityMismatch { expected: source.arity(), found: u.arity() });
        }
        for (i, ui) in u.mats().iter().enumerate() {
            if linalg::unitarity_defect(ui) > 1e-8 {
                return Err(Error::NotUnitary(i));
            }
        }
        let a = Self { source, x, u, kappa: None, loc_bound: None, method: None };
        let r = a.intertwining_residual();
        if r > 1e-8 {
            return Err(Error::NotIntertwining { residual: r });
        }
        Ok(a)
    }

    /// The `(0, 0)` pair on a zero-dimensional space.
    pub fn degenerate(source: OperatorTuple) -> Self {
        let u = OperatorTuple::trusted(vec![zeros(0, 0); source.arity()]);
        let x = zeros(0, source.dim());
        Self { source, x, u, kappa: Some(KappaBounds { lower: 0.0, upper: 0.0 }), loc_bound: None, method: None }
    }

    pub fn source(&self) -> &OperatorTuple {
        &self.source
    }

    pub fn x(&self) -> &CMat {
        &self.x
    }

    pub fn u(&self) -> &OperatorTuple {
        &self.u
    }

    /// Dimension of the unitary space `K`.
    pub fn k_dim(&self) -> usize {
        self.x.nrows()
    }

    pub fn is_degenerate(&self) -> bool {
        self.k_dim() == 0 || op_norm(&self.x) == 0.0
    }

    pub fn x_norm(&self) -> f64 {
        op_norm(&self.x)
    }

    /// `max_i ||X T_i - U_i X|| / (||X|| ||T_i||)`.
    pub fn intertwining_residual(&self) -> f64 {
        let nx = self.x_norm();
        if nx == 0.0 {
            return 0.0;
        }
        self.source
            .mats()
            .iter()
            .zip(self.u.mats().iter())
            .map(|(t, u)| op_norm(&(&self.x * t - u * &self.x)) / (nx * op_norm(t).max(f64::MIN_POSITIVE)))
            .fold(0.0, f64::max)
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.u.unitarity_defect()
    }

    /// Minimal iff `X` is onto `K`: the range of `X` is invariant under each `U_i`,
    /// hence reducing, so the generated space is the range itself.
    pub fn is_minimal(&self) -> bool {
        self.k_dim() == 0 || linalg::rank(&self.x, RANK_TOL) == self.k_dim()
    }

    /// Same pair with `X` multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.x = &self.x * c64(c, 0.0);
        out.kappa = self.kappa.map(|k| KappaBounds { lower: k.lower / c.abs(), upper: k.upper / c.abs() });
        out.loc_bound = None;
        out
    }

    /// Replace `X` by `Y X` for an invertible `Y` in the commutant of `U`.
    pub fn twisted(&self, y: &CMat) -> Result<Self> {
        let mut out = Self::new(self.source.clone(), y * &self.x, self.u.clone())?;
        out.method = self.method;
        Ok(out)
    }
}

/// Build the asymptote from the closed-form limit, falling back to Cesaro means.
pub fn build_asymptote(t: &OperatorTuple) -> Result<UnitaryAsymptote> {
    let lim = match limit::exact_limit(t) {
        Ok(l) => l,
        Err(Error::DecompositionFailed(_)) => match limit::cesaro_limit(t, DEFAULT_MAX_N, DEFAULT_CESARO_TOL) {
            Ok(l) => l,
            Err(Error::HorizonExhausted { best }) => *best,
            Err(e) => return Err(e),
        },
        Err(e) => return Err(e),
    };
    asymptote_from_limit(t, &lim)
}

/// `X = A^{1/2}` corestricted to the range of `A`, and `U_i (X h) = X (T_i h)`.
pub fn asymptote_from_limit(t: &OperatorTuple, lim: &LimitOperator) -> Result<UnitaryAsymptote> {
    let d = t.dim();
    let (vals, q) = linalg::hermitian_eigen(&lim.a);
    let top = vals.first().copied().unwrap_or(0.0);
    if d == 0 || top <= 1e-14 {
        let mut a = UnitaryAsymptote::degenerate(t.clone());
        a.method = Some(lim.method);
        a.loc_bound = Some(1.0);
        return Ok(a);
    }
    let keep: Vec<usize> = (0..vals.len()).filter(|&j| vals[j] > RANK_TOL * top).collect();
    let r = keep.len();
    let qp = linalg::select_cols(&q, &keep);
    let mut x = qp.adjoint();
    let mut x_pinv = qp.clone();
    for (row, &j) in keep.iter().enumerate() {
        let s = vals[j].sqrt();
        x.row_mut(row).scale_mut(s);
        x_pinv.column_mut(row).scale_mut(1.0 / s);
    }
    let mut us = Vec::with_capacity(t.arity());
    for (i, ti) in t.mats().iter().enumerate() {
        let v = &x * ti * &x_pinv;
        let defect = linalg::unitarity_defect(&v);
        if defect > 1e-6 {
            return Err(Error::NotUnitary(i));
        }
        let (w, _) = polar(&v);
        us.push(w);
    }
    debug_assert_eq!(x.nrows(), r);
    let u = OperatorTuple::new(us, 1e-8)?;
    let mut a = UnitaryAsymptote::new(t.clone(), x, u)?;
    a.loc_bound = Some(1.0);
    a.method = Some(lim.method);
    Ok(a)
}

/// Restrict `(X, U)` to the smallest reducing subspace containing the range of `X`.
pub fn minimal_part(x: &CMat, u: &OperatorTuple) -> (CMat, OperatorTuple) {
    let dk = u.dim();
    if dk == 0 || op_norm(x) == 0.0 {
        return (zeros(0, x.ncols()), OperatorTuple::trusted(vec![zeros(0, 0); u.arity()]));
    }
    let basis = reducing_closure(x, u);
    let x0 = basis.adjoint() * x;
    let u0: Vec<CMat> = u.mats().iter().map(|ui| basis.adjoint() * ui * &basis).collect();
    (x0, OperatorTuple::trusted(u0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassLabel {
    /// Every vector is stable.
    C0Dot,
    /// Some but not all vectors are stable.
    CStar,
    /// No nonzero stable vector.
    C1Dot,
}

impl ClassLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassLabel::C0Dot => "C0dot",
            ClassLabel::CStar => "Cstar",
            ClassLabel::C1Dot => "C1dot",
        }
    }
}

#[derive(Debug, Clone)]
pub struct AnnihilatingReport {
    pub subspace: Subspace,
    pub label: ClassLabel,
    /// Largest `||T^k h|| / ||h||` at the far corner of the scan box over sampled `h` in the kernel.
    pub decay_ratio: f64,
}

/// `H_0(T) = ker X` with the class label and a decay check on sampled stable vectors.
pub fn annihilating_subspace(a: &UnitaryAsymptote, horizon: usize, seed: u64) -> AnnihilatingReport {
    let d = a.source().dim();
    let ker = if a.is_degenerate() { identity(d) } else { linalg::nullspace(a.x(), RANK_TOL) };
    let label = if ker.ncols() == d {
        ClassLabel::C0Dot
    } else if ker.ncols() == 0 {
        ClassLabel::C1Dot
    } else {
        ClassLabel::CStar
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut decay = 0.0f64;
    if ker.ncols() > 0 {
        let corner = crate::tuple::MultiIndex::nonneg(vec![horizon as u64; a.source().arity()]);
        let p = a.source().power(&corner).expect("nonnegative power");
        for _ in 0..4 {
            let coef = random_unit_vector(&mut rng, ker.ncols());
            let h = &ker * coef;
            decay = decay.max((&p * &h).norm() / h.norm());
        }
    }
    let subspace = Subspace::new(ker).expect("null space basis is orthonormal");
    AnnihilatingReport { subspace, label, decay_ratio: decay }
}

#[derive(Debug, Clone)]
pub struct OrbitReport {
    /// Worst `||X h|| - ||X|| * boxmin(h)`, relative; must be `<= 1e-8`.
    pub uoc_excess: f64,
    pub uoc_holds: bool,
    /// Sup over samples of `boxmin(h) / ||X h||`.
    pub loc_ratio: f64,
    pub loc_fails: bool,
}

/// Sample the upper and lower orbit conditions on random unit vectors.
pub fn check_orbit_conditions(
    a: &UnitaryAsymptote,
    samples: usize,
    horizon: usize,
    ceiling: f64,
    seed: u64,
) -> OrbitReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nx = a.x_norm();
    let mut excess = f64::NEG_INFINITY;
    let mut ratio = 0.0f64;
    for _ in 0..samples {
        let h = random_unit_vector(&mut rng, a.source().dim());
        let m = a.source().orbit_infimum(&h, horizon);
        let xh = if a.k_dim() == 0 { 0.0 } else { (a.x() * &h).norm() };
        excess = excess.max(xh - nx * m);
        let r = if xh > 0.0 { m / xh } else if m > 0.0 { f64::INFINITY } else { 1.0 };
        ratio = ratio.max(r);
    }
    let scale = nx.max(1.0);
    OrbitReport {
        uoc_excess: excess / scale,
        uoc_holds: excess <= 1e-8 * scale,
        loc_ratio: ratio,
        loc_fails: ratio > ceiling,
    }
}

/// The unique `D` in the commutant of `U` with `X C = D X`.
pub fn commutant_mapping(a: &UnitaryAsymptote, c: &CMat) -> Result<CMat> {
    let t = a.source();
    let nc = op_norm(c);
    for ti in t.mats() {
        let r = op_norm(&(c * ti - ti * c)) / (nc * op_norm(ti)).max(f64::MIN_POSITIVE);
        if r > 1e-8 {
            return Err(Error::NotInCommutant { residual: r });
        }
    }
    let dk = a.k_dim();
    if dk == 0 {
        return Ok(zeros(0, 0));
    }
    let rk = linalg::rank(a.x(), RANK_TOL);
    if rk < dk {
        return Err(Error::NonUnique { defect: dk - rk });
    }
    let xp = linalg::pinv(a.x(), RANK_TOL);
    Ok(a.x() * c * xp)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// `Z` is unitary.
    Equivalent,
    /// `Z` is invertible.
    Similar,
    /// `Z` exists but is not invertible.
    FactorsOnly,
}

impl Verdict {
    pub fn is_similar(&self) -> bool {
        matches!(self, Verdict::Equivalent | Verdict::Similar)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Equivalent => "equivalent",
            Verdict::Similar => "similar",
            Verdict::FactorsOnly => "factors-only",
        }
    }
}

#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    pub z: CMat,
    pub verdict: Verdict,
    /// `kappa(a2) <= ||Z^-1|| kappa(a1)` and `kappa(a1) <= ||Z|| kappa(a2)`, when both are known.
    pub kappa_bound_holds: Option<bool>,
}

/// Solve `Z X_1 = X_2` with `Z U_1 = U_2 Z` and classify `Z`.
pub fn check_equivalence(a1: &UnitaryAsymptote, a2: &UnitaryAsymptote) -> Result<EquivalenceReport> {
    if a1.source().dim() != a2.source().dim() {
        return Err(Error::DimMismatch { expected: a1.source().dim(), found: a2.source().dim() });
    }
    let (k1, k2) = (a1.k_dim(), a2.k_dim());
    if k1 == 0 && k2 == 0 {
        return Ok(EquivalenceReport { z: zeros(0, 0), verdict: Verdict::Equivalent, kappa_bound_holds: None });
    }
    if k1 > 0 && linalg::rank(a1.x(), RANK_TOL) < k1 {
        return Err(Error::NonUnique { defect: k1 - linalg::rank(a1.x(), RANK_TOL) });
    }
    let z = if k1 == 0 { zeros(k2, 0) } else { a2.x() * linalg::pinv(a1.x(), RANK_TOL) };
    let scale = a2.x_norm().max(a1.x_norm()).max(f64::MIN_POSITIVE);
    let fact = if k1 == 0 { a2.x_norm() } else { op_norm(&(&z * a1.x() - a2.x())) } / scale;
    let inter = a1
        .u()
        .mats()
        .iter()
        .zip(a2.u().mats().iter())
        .map(|(u1, u2)| if k1 == 0 || k2 == 0 { 0.0 } else { op_norm(&(&z * u1 - u2 * &z)) })
        .fold(0.0, f64::max)
        / op_norm(&z).max(f64::MIN_POSITIVE);
    let residual = fact.max(inter);
    if residual > 1e-7 {
        return Err(Error::NoFactorization { residual });
    }
    let invertible = k1 == k2 && sigma_min(&z) > RANK_TOL * op_norm(&z);
    let verdict = if invertible && linalg::unitarity_defect(&z) < 1e-8 {
        Verdict::Equivalent
    } else if invertible {
        Verdict::Similar
    } else {
        Verdict::FactorsOnly
    };
    let kappa_bound_holds = match (a1.kappa, a2.kappa, invertible) {
        (Some(c1), Some(c2), true) => {
            let zi = linalg::inverse(&z).expect("checked invertible");
            let slack = 1e-6;
            Some(
                c2.upper <= op_norm(&zi) * c1.upper * (1.0 + slack)
                    && c1.upper <= op_norm(&z) * c2.upper * (1.0 + slack),
            )
        }
        _ => None,
    };
    Ok(EquivalenceReport { z, verdict, kappa_bound_holds })
}

/// Pull an asymptote of `T~` back through an invertible `Z` with `Z T_i = T~_i Z`.
pub fn transport_similarity(a2: &UnitaryAsymptote, t: &OperatorTuple, z: &CMat) -> Result<UnitaryAsymptote> {
    let r = t.intertwining_residual(z, a2.source()) / (op_norm(z) * t.mats().iter().map(op_norm).fold(1.0, f64::max));
    if r > 1e-8 {
        return Err(Error::NotIntertwining { residual: r });
    }
    let zi = linalg::inverse(z).ok_or(Error::Singular)?;
    let mut out = if a2.k_dim() == 0 {
        UnitaryAsymptote::degenerate(t.clone())
    } else {
        UnitaryAsymptote::new(t.clone(), a2.x() * z, a2.u().clone())?
    };
    out.kappa = a2.kappa.map(|k| {
        let upper = k.upper * op_norm(&zi);
        KappaBounds { lower: k.lower.min(upper), upper }
    });
    out.method = a2.method;
    Ok(out)
}

/// Bound `kappa_aop(X~ Z) <= ||Z|| ||Z^-1|| kappa_aop(X~)`.
pub fn transported_aop_bound(a2_kappa_aop: f64, z: &CMat) -> Result<f64> {
    let zi = linalg::inverse(z).ok_or(Error::Singular)?;
    Ok(op_norm(z) * op_norm(&zi) * a2_kappa_aop)
}

#[derive(Debug, Clone)]
pub struct InverseReport {
    pub asymptote: UnitaryAsymptote,
    /// `X` square and invertible: the tuple is similar to a unitary tuple.
    pub x_invertible: bool,
    pub x_condition: f64,
}

/// `(X, U^{-1})` as the asymptote of `T^{-1}`.
pub fn asymptote_of_inverse(a: &UnitaryAsymptote) -> Result<InverseReport> {
    let inv = a.source().inverse_tuple()?;
    let u_inv = a.u().adjoint_tuple();
    let mut out = if a.k_dim() == 0 {
        UnitaryAsymptote::degenerate(inv)
    } else {
        UnitaryAsymptote { source: inv, x: a.x().clone(), u: u_inv, kappa: a.kappa, loc_bound: None, method: a.method }
    };
    out.kappa = a.kappa;
    let d = a.source().dim();
    let smin = if a.k_dim() == d && d > 0 { sigma_min(a.x()) } else { 0.0 };
    let cond = if smin > 0.0 { a.x_norm() / smin } else { f64::INFINITY };
    Ok(InverseReport { asymptote: out, x_invertible: d > 0 && smin > RANK_TOL * a.x_norm(), x_condition: cond })
}

/// `(X_1 + X_2, U_1 + U_2)` on the direct sum, with norm-control `sqrt 2 max(kappa_1, kappa_2)`.
pub fn direct_sum_asymptote(a1: &UnitaryAsymptote, a2: &UnitaryAsymptote) -> Result<UnitaryAsymptote> {
    let source = a1.source().direct_sum(a2.source())?;
    let u = a1.u().direct_sum(a2.u())?;
    let x = linalg::block_diag(a1.x(), a2.x());
    let mut out = UnitaryAsymptote { source, x, u, kappa: None, loc_bound: None, method: a1.method };
    out.kappa = match (a1.kappa, a2.kappa) {
        (Some(k1), Some(k2)) => {
            Some(KappaBounds { lower: k1.lower.max(k2.lower), upper: std::f64::consts::SQRT_2 * k1.upper.max(k2.upper) })
        }
        _ => None,
    };
    if out.k_dim() > 0 && out.intertwining_residual() > 1e-8 {
        return Err(Error::NotIntertwining { residual: out.intertwining_residual() });
    }
    Ok(out)
}

/// Restrict an asymptote of `T_1 + T_2` to the summand on coordinates `range`, then take the minimal part.
pub fn project_summand(a: &UnitaryAsymptote, summand: &OperatorTuple, offset: usize) -> Result<UnitaryAsymptote> {
    let d = summand.dim();
    let xs = a.x().columns(offset, d).into_owned();
    let (x0, u0) = minimal_part(&xs, a.u());
    if x0.nrows() == 0 {
        let mut out = UnitaryAsymptote::degenerate(summand.clone());
        out.method = a.method;
        return Ok(out);
    }
    let mut out = UnitaryAsymptote::new(summand.clone(), x0, u0)?;
    out.method = a.method;
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct UniversalityReport {
    pub trials: usize,
    /// Worst relative error recovering `Y'` from `Y' X`.
    pub recovery_error: f64,
    /// Worst `||Q_0 Q_0^H Y' - Y'||` (the factor maps into the minimal part).
    pub restriction_error: f64,
    /// Minimal parts of `(Y' X, U)` and `(|Y'| X, U)` equivalent in every trial.
    pub modulus_equivalence: bool,
    pub unique: bool,
}

/// Sample pairs `(Y' X, U)` and check that each factors uniquely through `(X, U)`.
pub fn verify_universality(a: &UnitaryAsymptote, trials: usize, seed: u64) -> Result<UniversalityReport> {
    let dk = a.k_dim();
    let unique = a.is_minimal();
    if dk == 0 {
        return Ok(UniversalityReport {
            trials,
            recovery_error: 0.0,
            restriction_error: 0.0,
            modulus_equivalence: true,
            unique,
        });
    }
    let comm = a.u().commutant_basis();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xp = linalg::pinv(a.x(), RANK_TOL);
    let mut rec = 0.0f64;
    let mut restr = 0.0f64;
    let mut modulus_ok = true;
    for trial in 0..trials {
        let mut y = zeros(dk, dk);
        let coefs = linalg::random_vector(&mut rng, comm.dim());
        for (b, cf) in comm.basis().iter().zip(coefs.iter()) {
            y += b * *cf;
        }
        if trial == 0 {
            y = identity(dk);
        } else if trial % 3 == 2 && dk > 1 {
            // rank-deficient factor: kill one direction of a block
            let (w, p) = polar(&y);
            let (vals, q) = linalg::hermitian_eigen(&p);
            let mut pk = zeros(dk, dk);
            for (j, &v) in vals.iter().enumerate().take(vals.len() - 1) {
                pk += q.column(j) * q.column(j).adjoint() * c64(v, 0.0);
            }
            let cand = &w * pk;
            if a.u().mats().iter().all(|u| op_norm(&(&cand * u - u * &cand)) < 1e-8 * op_norm(&cand).max(1.0)) {
                y = cand;
            }
        }
        let xprime = &y * a.x();
        let recovered = &xprime * &xp;
        rec = rec.max(op_norm(&(&recovered - &y)) / op_norm(&y).max(f64::MIN_POSITIVE));

        let (x0, u0) = minimal_part(&xprime, a.u());
        if x0.nrows() > 0 {
            let q0 = reducing_closure(&xprime, a.u());
            let yk = &y;
            restr = restr.max(op_norm(&(&q0 * (q0.adjoint() * yk) - yk)) / op_norm(yk).max(f64::MIN_POSITIVE));
        }
        let ym = linalg::abs_mat(&y);
        let (x1, u1) = minimal_part(&(&ym * a.x()), a.u());
        if x0.nrows() != x1.nrows() {
            modulus_ok = false;
            continue;
        }
        if x0.nrows() == 0 {
            continue;
        }
        let p0 = UnitaryAsymptote::new(a.source().clone(), x0, u0)?;
        let p1 = UnitaryAsymptote::new(a.source().clone(), x1, u1)?;
        match check_equivalence(&p1, &p0) {
            Ok(r) if r.verdict == Verdict::Equivalent => {}
            _ => modulus_ok = false,
        }
    }
    Ok(UniversalityReport { trials, recovery_error: rec, restriction_error: restr, modulus_equivalence: modulus_ok, unique })
}

/// Orthonormal basis of the smallest subspace containing the range of `x` and reducing `U`.
pub fn reducing_closure(x: &CMat, u: &OperatorTuple) -> CMat {
    let mut basis = range_basis(x, RANK_TOL);
    loop {
        let mut parts = vec![basis.clone()];
        for ui in u.mats() {
            parts.push(ui * &basis);
            parts.push(ui.adjoint() * &basis);
        }
        let refs: Vec<&CMat> = parts.iter().collect();
        let next = range_basis(&hcat(&refs), RANK_TOL);
        if next.ncols() == basis.ncols() {
            return next;
        }
        basis = next;
    }
}

/// Unit vector in `ker X`, if any.
pub fn kernel_vector(a: &UnitaryAsymptote) -> Option<CVec> {
    let ker = linalg::nullspace(a.x(), RANK_TOL);
    (ker.ncols() > 0).then(|| ker.column(0).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn diag(v: &[C64]) -> CMat {
        CMat::from_diagonal(&CVec::from_column_slice(v))
    }

    #[test]
    fn unitary_tuple_is_its_own_asymptote() {
        let w = diag(&[c64(0.0, 1.0), c64(-1.0, 0.0)]);
        let t = OperatorTuple::single(w.clone()).unwrap();
        let a = build_asymptote(&t).unwrap();
        assert_eq!(a.k_dim(), 2);
        assert!(linalg::unitarity_defect(a.x()) < 1e-12);
        assert_eq!(annihilating_subspace(&a, 8, 1).label, ClassLabel::C1Dot);
    }

    #[test]
    fn stable_tuple_is_degenerate() {
        let t = OperatorTuple::single(diag(&[c64(0.5, 0.0)])).unwrap();
        let a = build_asymptote(&t).unwrap();
        assert_eq!(a.k_dim(), 0);
        let rep = annihilating_subspace(&a, 30, 1);
        assert_eq!(rep.label, ClassLabel::C0Dot);
        assert!(rep.decay_ratio < 1e-8);
    }

    #[test]
    fn mixed_diagonal_is_cstar() {
        let t = OperatorTuple::single(diag(&[c64(0.0, 1.0), c64(0.5, 0.0)])).unwrap();
        let a = build_asymptote(&t).unwrap();
        let rep = annihilating_subspace(&a, 30, 1);
        assert_eq!(rep.label, ClassLabel::CStar);
        assert!(rep.subspace.contains(&CVec::from_column_slice(&[c64(0.0, 0.0), c64(1.0, 0.0)]), 1e-10));
    }

    #[test]
    fn minimal_part_of_coordinate_map() {
        let x = CMat::from_column_slice(2, 1, &[c64(1.0, 0.0), c64(0.0, 0.0)]);
        let u = OperatorTuple::single(diag(&[c64(1.0, 0.0), c64(-1.0, 0.0)])).unwrap();
        let (x0, u0) = minimal_part(&x, &u);
        assert_eq!(x0.nrows(), 1);
        assert!((u0.mat(0)[(0, 0)] - c64(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn commutant_mapping_of_powers() {
        let t = OperatorTuple::single(CMat::from_row_slice(
            2,
            2,
            &[c64(0.0, 1.0), c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0)],
        ))
        .unwrap();
        let a = build_asymptote(&t).unwrap();
        let t2 = t.mat(0) * t.mat(0);
        let d = commutant_mapping(&a, &t2).unwrap();
        assert!(op_norm(&(d - a.u().mat(0) * a.u().mat(0))) < 1e-9);
        let id = commutant_mapping(&a, &identity(2)).unwrap();
        assert!(op_norm(&(id - identity(2))) < 1e-9);
    }

    #[test]
    fn self_equivalence() {
        let t = OperatorTuple::single(diag(&[c64(0.0, 1.0), c64(0.5, 0.0), c64(-1.0, 0.0)])).unwrap();
        let a = build_asymptote(&t).unwrap();
        let r = check_equivalence(&a, &a).unwrap();
        assert_eq!(r.verdict, Verdict::Equivalent);
        assert!(op_norm(&(r.z - identity(a.k_dim()))) < 1e-10);
    }

    #[test]
    fn rescaled_asymptote_is_similar() {
        let t = OperatorTuple::single(diag(&[c64(0.0, 1.0), c64(1.0, 0.0)])).unwrap();
        let a = build_asymptote(&t).unwrap();
        let r = check_equivalence(&a, &a.scaled(3.0)).unwrap();
        assert_eq!(r.verdict, Verdict::Similar);
    }

    #[test]
    fn direct_sum_with_degenerate() {
        let t1 = OperatorTuple::single(diag(&[c64(0.0, 1.0)])).unwrap();
        let t2 = OperatorTuple::single(diag(&[c64(0.5, 0.0)])).unwrap();
        let a = direct_sum_asymptote(&build_asymptote(&t1).unwrap(), &build_asymptote(&t2).unwrap()).unwrap();
        assert_eq!(a.k_dim(), 1);
        assert!((a.u().mat(0)[(0, 0)] - c64(0.0, 1.0)).norm() < 1e-12);
        assert!(a.x()[(0, 1)].norm() == 0.0);
    }

    #[test]
    fn universality_on_mixed_atoms() {
        let t = OperatorTuple::single(diag(&[c64(0.0, 1.0), c64(0.0, 1.0), c64(-1.0, 0.0)])).unwrap();
        let a = build_asymptote(&t).unwrap();
        let r = verify_universality(&a, 9, 7).unwrap();
        assert!(r.unique);
        assert!(r.recovery_error < 1e-8);
        assert!(r.restriction_error < 1e-8);
        assert!(r.modulus_equivalence);
    }

    #[test]
    fn contraction_has_loc_one() {
        let t = OperatorTuple::single(diag(&[c64(0.0, 1.0), c64(0.5, 0.0)])).unwrap();
        let a = build_asymptote(&t).unwrap();
        let rep = check_orbit_conditions(&a, 16, 60, 10.0, 3);
        assert!(rep.uoc_holds);
        assert!(rep.loc_ratio <= 1.0 + 1e-6);
    }
}

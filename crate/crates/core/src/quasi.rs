//! Local residual sets of a tuple, the quasianalytic spectral set and hyperinvariant splitting.
//!
//! Atom `j` lies in every `omega(T, h)` with `h != 0` exactly when `P_j X` is
//! injective, so the meet over all nonzero `h` is decided by one kernel test
//! per atom.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::asymptote::UnitaryAsymptote;
use crate::atomset::AtomSet;
use crate::error::{Error, Result};
use crate::linalg::{self, op_norm, random_unit_vector, sigma_min, CMat, CVec, RANK_TOL};
use crate::spectral::{self, joint_diagonalize, unitary_commutant_blocks, AtomicSpectralMeasure, LocalMeasure};
use crate::tuple::{IntertwinerSpace, OperatorTuple, Subspace};

/// Default number of random vectors added to the basis when sampling criterion (ii).
pub const DEFAULT_RANDOM_SAMPLES: usize = 8;

fn check_measure(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure) -> Result<()> {
    if m.dim() != a.k_dim() {
        return Err(Error::DimMismatch { expected: a.k_dim(), found: m.dim() });
    }
    Ok(())
}

/// `omega(T, h) = omega(U, X h)`.
pub fn local_residual_t(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure, h: &CVec, support_tol: f64) -> Result<AtomSet> {
    check_measure(a, m)?;
    if h.len() != a.source().dim() {
        return Err(Error::DimMismatch { expected: a.source().dim(), found: h.len() });
    }
    if a.k_dim() == 0 {
        return Ok(m.empty_set());
    }
    spectral::local_residual_set(m, &(a.x() * h), support_tol)
}

/// Localization `E_{X h}`.
pub fn localize_t(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure, h: &CVec) -> Result<LocalMeasure> {
    check_measure(a, m)?;
    spectral::localize(m, &(a.x() * h))
}

#[derive(Debug, Clone)]
pub struct QuasianalyticSet {
    pub set: AtomSet,
    /// Smallest singular value of `P_j X` on `H`, per atom.
    pub margins: Vec<f64>,
    /// For each atom outside the set, a unit `h` with `P_j X h = 0`.
    pub kernel_witnesses: Vec<(usize, CVec)>,
}

/// `pi(T) = {j : P_j X injective}`.
pub fn quasianalytic_set(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure) -> Result<QuasianalyticSet> {
    check_measure(a, m)?;
    let nx = a.x_norm();
    let mut set = m.empty_set();
    let mut margins = Vec::with_capacity(m.len());
    let mut witnesses = Vec::new();
    for j in 0..m.len() {
        let b = m.basis(j).adjoint() * a.x();
        let s = sigma_min(&b);
        margins.push(s);
        if nx > 0.0 && s > RANK_TOL * nx {
            set.insert(j);
        } else {
            witnesses.push((j, smallest_right_vector(&b, RANK_TOL * nx)));
        }
    }
    Ok(QuasianalyticSet { set, margins, kernel_witnesses: witnesses })
}

/// Unit vector minimizing `||b h||`.
fn smallest_right_vector(b: &CMat, floor: f64) -> CVec {
    let c = b.ncols();
    let ns = linalg::nullspace_below(b, floor);
    if ns.ncols() > 0 {
        return ns.column(0).into_owned();
    }
    if b.nrows() == 0 || c == 0 {
        return CVec::zeros(c);
    }
    let f = linalg::svd(b);
    // with more columns than rows the trailing right vectors are exact null directions
    f.v.column(c - 1).into_owned()
}

#[derive(Debug, Clone)]
pub struct QuasiReport {
    pub quasianalytic: bool,
    /// `pi(T)` is the full atom set.
    pub criterion_i: bool,
    /// `X h` is cyclic for the commutant of `U` for every sampled `h`.
    pub criterion_ii: bool,
    /// `P_j X h != 0` for every atom and every sampled `h`.
    pub criterion_iii: bool,
    pub pi: QuasianalyticSet,
    /// Number of sample vectors used for criteria (ii) and (iii).
    pub samples: usize,
    /// `ker X = {0}`.
    pub injective_x: bool,
}

/// Evaluate the three equivalent quasianalyticity criteria and require agreement.
///
/// The sample family is a basis of `H`, `random` random unit vectors and the
/// kernel witnesses of every defective block, so (ii) and (iii) are decided
/// exactly at the rank threshold.
pub fn is_quasianalytic(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure, random: usize, seed: u64) -> Result<QuasiReport> {
    check_measure(a, m)?;
    if a.is_degenerate() {
        return Err(Error::ZeroX);
    }
    let d = a.source().dim();
    let x = a.x();
    let nx = a.x_norm();
    let pi = quasianalytic_set(a, m)?;
    let criterion_i = pi.set.is_full();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut family: Vec<CVec> = (0..d).map(|b| linalg::identity(d).column(b).into_owned()).collect();
    family.extend((0..random).map(|_| random_unit_vector(&mut rng, d)));
    family.extend(pi.kernel_witnesses.iter().map(|(_, v)| v.clone()));

    let blocks: Vec<CMat> = (0..m.len()).map(|j| m.basis(j).adjoint() * x).collect();
    let comm = unitary_commutant_blocks(m).basis_matrices();
    let mut criterion_ii = true;
    let mut criterion_iii = true;
    for h in &family {
        let hn = h.norm();
        let floor = RANK_TOL * nx * hn;
        if blocks.iter().any(|b| (b * h).norm() <= floor) {
            criterion_iii = false;
        }
        let xh = x * h;
        let cols: Vec<CMat> = comm.iter().map(|dm| CMat::from_column_slice(a.k_dim(), 1, (dm * &xh).as_slice())).collect();
        let refs: Vec<&CMat> = cols.iter().collect();
        let span = linalg::hcat(&refs);
        let rank = linalg::singular_values(&span).iter().filter(|&&s| s > floor).count();
        if rank < a.k_dim() {
            criterion_ii = false;
        }
    }
    if criterion_i != criterion_ii || criterion_i != criterion_iii {
        return Err(Error::CriteriaDisagree(format!(
            "(i) {criterion_i}, (ii) {criterion_ii}, (iii) {criterion_iii}"
        )));
    }
    let injective_x = linalg::nullspace_below(x, RANK_TOL * nx).ncols() == 0;
    if criterion_i && !injective_x {
        return Err(Error::CriteriaDisagree("quasianalytic but X has a kernel".into()));
    }
    Ok(QuasiReport {
        quasianalytic: criterion_i,
        criterion_i,
        criterion_ii,
        criterion_iii,
        pi,
        samples: family.len(),
        injective_x,
    })
}

#[derive(Debug, Clone)]
pub struct Pullback {
    pub subspace: Subspace,
    /// Worst relative distance of `C M` from `M` over the commutant basis.
    pub invariance_residual: f64,
}

/// `M = ker((I - E(omega)) X)`, checked against the full commutant of `T`.
pub fn hyperinvariant_pullback(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure, omega: &AtomSet) -> Result<Pullback> {
    let comm = a.source().commutant_basis();
    hyperinvariant_pullback_with(a, m, omega, &comm)
}

pub fn hyperinvariant_pullback_with(
    a: &UnitaryAsymptote,
    m: &AtomicSpectralMeasure,
    omega: &AtomSet,
    commutant: &IntertwinerSpace,
) -> Result<Pullback> {
    check_measure(a, m)?;
    m.check_set(omega)?;
    let d = a.source().dim();
    let rest = m.spectral_subspace(&omega.complement())?;
    let basis = if rest.ncols() == 0 || a.k_dim() == 0 {
        linalg::identity(d)
    } else {
        linalg::nullspace_below(&(rest.adjoint() * a.x()), RANK_TOL * a.x_norm())
    };
    let subspace = Subspace::new(basis)?;
    let residual = commutant.basis().iter().map(|c| subspace.invariance_residual(c)).fold(0.0, f64::max);
    if residual > 1e-8 {
        return Err(Error::InvarianceCheckFailed { residual });
    }
    Ok(Pullback { subspace, invariance_residual: residual })
}

#[derive(Debug, Clone)]
pub struct Split {
    pub subspace: Subspace,
    /// `u` outside `M`.
    pub u: CVec,
    /// Nonzero `v` inside `M`.
    pub v: CVec,
    /// Splitting atom, or `None` when `M = ker X`.
    pub atom: Option<usize>,
    pub invariance_residual: f64,
}

/// A nontrivial hyperinvariant subspace of a non-quasianalytic tuple with nonzero `X`.
pub fn split_non_quasianalytic(t: &OperatorTuple, a: &UnitaryAsymptote, m: &AtomicSpectralMeasure) -> Result<Split> {
    if a.is_degenerate() {
        return Err(Error::ZeroX);
    }
    let rep = is_quasianalytic(a, m, DEFAULT_RANDOM_SAMPLES, 0)?;
    if rep.quasianalytic {
        return Err(Error::IsQuasianalytic);
    }
    let d = t.dim();
    let comm = t.commutant_basis();
    let floor = RANK_TOL * a.x_norm();
    let ker = linalg::nullspace_below(a.x(), floor);
    let (pull, atom, u, v) = if ker.ncols() > 0 {
        let pull = hyperinvariant_pullback_with(a, m, &m.empty_set(), &comm)?;
        let v = ker.column(0).into_owned();
        let u = linalg::nullspace(&ker.adjoint(), RANK_TOL).column(0).into_owned();
        (pull, None, u, v)
    } else {
        // prefer the atom whose block has the largest kernel
        let (j, kdim) = (0..m.len())
            .map(|j| (j, linalg::nullspace_below(&(m.basis(j).adjoint() * a.x()), floor).ncols()))
            .filter(|&(j, k)| k > 0 && k < d && !rep.pi.set.contains(j))
            .max_by_key(|&(_, k)| k)
            .ok_or(Error::NoSplittingAtom)?;
        debug_assert!(kdim > 0);
        let b = m.basis(j).adjoint() * a.x();
        let v = linalg::nullspace_below(&b, floor).column(0).into_owned();
        let u = linalg::thin_svd(&b).v.column(0).into_owned();
        let omega2 = m.set_of(&[j]).complement();
        let pull = hyperinvariant_pullback_with(a, m, &omega2, &comm)?;
        (pull, Some(j), u, v)
    };
    let dim = pull.subspace.dim();
    if dim == 0 || dim == d || !pull.subspace.contains(&v, 1e-8) || pull.subspace.contains(&u, 1e-8) {
        return Err(Error::NoSplittingAtom);
    }
    Ok(Split { subspace: pull.subspace, u, v, atom, invariance_residual: pull.invariance_residual })
}

#[derive(Debug, Clone)]
pub enum InjectionVerdict {
    /// Two atoms of `U~` carried to mutually singular localizations `E_{X Y v_1}`, `E_{X Y v_2}`.
    NotQuasianalytic { v1: CVec, v2: CVec, support1: AtomSet, support2: AtomSet },
    Inconclusive,
}

/// Injective `Y` intertwining a unitary tuple `U~` into `T`: two or more atoms rule out quasianalyticity.
pub fn unitary_injection_test(
    a: &UnitaryAsymptote,
    m: &AtomicSpectralMeasure,
    u2: &OperatorTuple,
    y: &CMat,
    support_tol: f64,
) -> Result<InjectionVerdict> {
    let t = a.source();
    let scale = op_norm(y).max(f64::MIN_POSITIVE) * t.mats().iter().map(op_norm).fold(1.0, f64::max);
    let r = u2.intertwining_residual(y, t) / scale;
    if r > 1e-8 {
        return Err(Error::NotIntertwining { residual: r });
    }
    let s = sigma_min(y);
    if s <= RANK_TOL * op_norm(y) {
        return Err(Error::NotInjective { sigma: s });
    }
    let mu = joint_diagonalize(u2, spectral::DEFAULT_CLUSTER_TOL)?;
    if mu.len() < 2 {
        return Ok(InjectionVerdict::Inconclusive);
    }
    let v1 = mu.basis(0).column(0).into_owned();
    let v2 = mu.basis(1).column(0).into_owned();
    let support1 = local_residual_t(a, m, &(y * &v1), support_tol)?;
    let support2 = local_residual_t(a, m, &(y * &v2), support_tol)?;
    Ok(InjectionVerdict::NotQuasianalytic { v1, v2, support1, support2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptote::build_asymptote;
    use crate::linalg::{c64, C64};
    use crate::spectral::{DEFAULT_CLUSTER_TOL, DEFAULT_SUPPORT_TOL};

    fn diag(v: &[C64]) -> CMat {
        CMat::from_diagonal(&CVec::from_column_slice(v))
    }

    fn setup(v: &[C64]) -> (OperatorTuple, UnitaryAsymptote, AtomicSpectralMeasure) {
        let t = OperatorTuple::single(diag(v)).unwrap();
        let a = build_asymptote(&t).unwrap();
        let m = joint_diagonalize(a.u(), DEFAULT_CLUSTER_TOL).unwrap();
        (t, a, m)
    }

    #[test]
    fn scalar_unimodular_is_quasianalytic() {
        let (_, a, m) = setup(&[crate::linalg::cis(0.7)]);
        let r = is_quasianalytic(&a, &m, 4, 1).unwrap();
        assert!(r.quasianalytic && r.injective_x);
    }

    #[test]
    fn reflection_is_not_and_splits() {
        let (t, a, m) = setup(&[c64(1.0, 0.0), c64(-1.0, 0.0)]);
        let r = is_quasianalytic(&a, &m, 4, 1).unwrap();
        assert!(!r.quasianalytic);
        let e1 = CVec::from_column_slice(&[c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(local_residual_t(&a, &m, &e1, DEFAULT_SUPPORT_TOL).unwrap().len(), 1);
        let s = split_non_quasianalytic(&t, &a, &m).unwrap();
        assert_eq!(s.subspace.dim(), 1);
        assert!(s.invariance_residual < 1e-12);
    }

    #[test]
    fn stable_coordinate_split_is_kernel() {
        let (t, a, m) = setup(&[c64(0.0, 1.0), c64(0.5, 0.0)]);
        let s = split_non_quasianalytic(&t, &a, &m).unwrap();
        assert!(s.atom.is_none());
        assert_eq!(s.subspace.dim(), 1);
        let pull = hyperinvariant_pullback(&a, &m, &m.full_set()).unwrap();
        assert_eq!(pull.subspace.dim(), 2);
        let pull = hyperinvariant_pullback(&a, &m, &m.set_of(&[0])).unwrap();
        assert_eq!(pull.subspace.dim(), 2);
    }

    #[test]
    fn kernel_means_not_quasianalytic() {
        let (_, a, m) = setup(&[c64(0.0, 1.0), c64(0.0, 1.0), c64(0.5, 0.0)]);
        let r = is_quasianalytic(&a, &m, 4, 1).unwrap();
        assert!(!r.quasianalytic && !r.injective_x);
    }

    #[test]
    fn injection_single_atom_is_inconclusive() {
        let (_, a, m) = setup(&[c64(0.0, 1.0), c64(0.5, 0.0)]);
        let u2 = OperatorTuple::single(diag(&[c64(0.0, 1.0)])).unwrap();
        let y = CMat::from_column_slice(2, 1, &[c64(1.0, 0.0), c64(0.0, 0.0)]);
        assert!(matches!(unitary_injection_test(&a, &m, &u2, &y, DEFAULT_SUPPORT_TOL).unwrap(), InjectionVerdict::Inconclusive));
    }

    #[test]
    fn injection_reflection() {
        let (_, a, m) = setup(&[c64(1.0, 0.0), c64(-1.0, 0.0)]);
        let u2 = a.source().clone();
        match unitary_injection_test(&a, &m, &u2, &linalg::identity(2), DEFAULT_SUPPORT_TOL).unwrap() {
            InjectionVerdict::NotQuasianalytic { support1, support2, .. } => {
                assert!(support1.meet(&support2).unwrap().is_empty());
            }
            InjectionVerdict::Inconclusive => panic!("expected a verdict"),
        }
    }
}

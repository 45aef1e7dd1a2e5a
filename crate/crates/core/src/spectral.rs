//! Joint spectral measures of commuting unitary tuples.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::atomset::AtomSet;
use crate::error::{Error, Result};
use crate::limit::cluster_points;
use crate::linalg::{self, c64, identity, op_norm, select_cols, zeros, CMat, CVec, C64};
use crate::tuple::OperatorTuple;

pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;
pub const DEFAULT_SUPPORT_TOL: f64 = 1e-10;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Atoms in the n-torus with mutually orthogonal projections summing to the identity.
#[derive(Debug, Clone)]
pub struct AtomicSpectralMeasure {
    id: u64,
    dim: usize,
    atoms: Vec<Vec<C64>>,
    bases: Vec<CMat>,
    projections: Vec<CMat>,
    cluster_tol: f64,
}

impl AtomicSpectralMeasure {
    /// Assemble from atoms and orthonormal block bases.
    pub fn from_blocks(dim: usize, atoms: Vec<Vec<C64>>, bases: Vec<CMat>, cluster_tol: f64) -> Self {
        let projections = bases.iter().map(|b| b * b.adjoint()).collect();
        Self { id: NEXT_ID.fetch_add(1, Ordering::Relaxed), dim, atoms, bases, projections, cluster_tol }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.atoms.first().map(|a| a.len()).unwrap_or(0)
    }

    pub fn atoms(&self) -> &[Vec<C64>] {
        &self.atoms
    }

    pub fn atom(&self, j: usize) -> &[C64] {
        &self.atoms[j]
    }

    pub fn projection(&self, j: usize) -> &CMat {
        &self.projections[j]
    }

    pub fn projections(&self) -> &[CMat] {
        &self.projections
    }

    /// Orthonormal basis of the range of `P_j`.
    pub fn basis(&self, j: usize) -> &CMat {
        &self.bases[j]
    }

    pub fn rank(&self, j: usize) -> usize {
        self.bases[j].ncols()
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// `E(omega) = sum_{j in omega} P_j`.
    pub fn spectral_projection(&self, omega: &AtomSet) -> Result<CMat> {
        self.check_set(omega)?;
        let mut p = zeros(self.dim, self.dim);
        for j in omega.iter() {
            p += &self.projections[j];
        }
        Ok(p)
    }

    /// Orthonormal basis of `E(omega) K`.
    pub fn spectral_subspace(&self, omega: &AtomSet) -> Result<CMat> {
        self.check_set(omega)?;
        let blocks: Vec<&CMat> = omega.iter().map(|j| &self.bases[j]).collect();
        if blocks.is_empty() {
            return Ok(zeros(self.dim, 0));
        }
        Ok(linalg::hcat(&blocks))
    }

    pub(crate) fn check_set(&self, omega: &AtomSet) -> Result<()> {
        if omega.measure_id() != self.id {
            return Err(Error::MeasureMismatch);
        }
        Ok(())
    }

    pub fn empty_set(&self) -> AtomSet {
        AtomSet::empty(self.id, self.len())
    }

    pub fn full_set(&self) -> AtomSet {
        AtomSet::full(self.id, self.len())
    }

    pub fn set_of(&self, idx: &[usize]) -> AtomSet {
        AtomSet::from_indices(self.id, self.len(), idx)
    }

    /// `max_i ||U_i - sum_j z_{j,i} P_j||`.
    pub fn reconstruction_residual(&self, u: &OperatorTuple) -> f64 {
        let mut worst = 0.0f64;
        for (i, ui) in u.mats().iter().enumerate() {
            let mut r = ui.clone();
            for (z, p) in self.atoms.iter().zip(self.projections.iter()) {
                r -= p * z[i];
            }
            worst = worst.max(op_norm(&r));
        }
        worst
    }

    /// Worst of `||P_j^2 - P_j||`, `||P_j - P_j^H||`, `||P_j P_l||` and `||sum P_j - I||`.
    pub fn resolution_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        let mut sum = zeros(self.dim, self.dim);
        for (j, p) in self.projections.iter().enumerate() {
            worst = worst.max(linalg::projection_defect(p));
            for q in &self.projections[j + 1..] {
                worst = worst.max(op_norm(&(p * q)));
            }
            sum += p;
        }
        worst.max(op_norm(&(sum - identity(self.dim))))
    }

    /// Smallest max-coordinate distance between two atoms.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for j in 0..self.len() {
            for l in (j + 1)..self.len() {
                best = best.min(atom_distance(&self.atoms[j], &self.atoms[l]));
            }
        }
        best
    }

    /// Index of the atom within `tol` of `z` in max-coordinate distance.
    pub fn find_atom(&self, z: &[C64], tol: f64) -> Option<usize> {
        self.atoms.iter().position(|a| atom_distance(a, z) <= tol)
    }
}

pub fn atom_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Diagonalize `U_1`, then each `U_i` on the eigenspaces found so far.
pub fn joint_diagonalize(u: &OperatorTuple, cluster_tol: f64) -> Result<AtomicSpectralMeasure> {
    for (i, ui) in u.mats().iter().enumerate() {
        if linalg::unitarity_defect(ui) > 1e-8 {
            return Err(Error::NotUnitary(i));
        }
    }
    let d = u.dim();
    if d == 0 {
        return Ok(AtomicSpectralMeasure::from_blocks(0, Vec::new(), Vec::new(), cluster_tol));
    }
    let mut groups: Vec<CMat> = vec![identity(d)];
    for ui in u.mats() {
        let mut next = Vec::new();
        for b in &groups {
            let restricted = b.adjoint() * ui * b;
            let (ev, q) = linalg::unitary_eigen(&restricted);
            let clusters = cluster_points(&ev, cluster_tol);
            let centers: Vec<C64> =
                clusters.iter().map(|c| c.iter().map(|&k| ev[k]).sum::<C64>() / c.len() as f64).collect();
            for a in 0..centers.len() {
                for c in (a + 1)..centers.len() {
                    let sep = (centers[a] - centers[c]).norm();
                    if sep <= 2.0 * cluster_tol {
                        return Err(Error::ClusterAmbiguity { separation: sep });
                    }
                }
            }
            for members in &clusters {
                let sub = b * select_cols(&q, members);
                // re-orthonormalize to shed rounding from the product
                next.push(linalg::range_basis(&sub, 1e-6));
            }
        }
        groups = next;
    }
    let mut entries: Vec<(Vec<C64>, CMat)> = groups
        .into_iter()
        .map(|b| {
            let m = b.ncols() as f64;
            let z: Vec<C64> = u
                .mats()
                .iter()
                .map(|ui| {
                    let w = (b.adjoint() * ui * &b).trace() / m;
                    w / w.norm()
                })
                .collect();
            (z, b)
        })
        .collect();
    entries.sort_by(|(a, _), (b, _)| {
        let ka: Vec<f64> = a.iter().map(angle).collect();
        let kb: Vec<f64> = b.iter().map(angle).collect();
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });
    let (atoms, bases): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
    Ok(AtomicSpectralMeasure::from_blocks(d, atoms, bases, cluster_tol))
}

/// Argument in `[0, 2 pi)`.
pub fn angle(z: &C64) -> f64 {
    let a = z.arg();
    if a >= 0.0 {
        return a;
    }
    let b = a + std::f64::consts::TAU;
    if b >= std::f64::consts::TAU {
        0.0
    } else {
        b
    }
}

/// Per-atom weights `||P_j y||^2`.
#[derive(Debug, Clone)]
pub struct LocalMeasure {
    pub weights: Vec<f64>,
    measure_id: u64,
}

impl LocalMeasure {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn measure_id(&self) -> u64 {
        self.measure_id
    }

    /// Atoms carrying weight above `support_tol * total`.
    pub fn support(&self, support_tol: f64) -> AtomSet {
        let total = self.total();
        let idx: Vec<usize> = (0..self.weights.len()).filter(|&j| self.weights[j] > support_tol * total).collect();
        AtomSet::from_indices(self.measure_id, self.weights.len(), &idx)
    }

    /// Absolute continuity: the support of `self` lies in the support of `other`.
    pub fn is_ac_wrt(&self, other: &LocalMeasure, support_tol: f64) -> bool {
        self.support(support_tol).is_subset(&other.support(support_tol)).unwrap_or(false)
    }

    pub fn is_equivalent(&self, other: &LocalMeasure, support_tol: f64) -> bool {
        self.is_ac_wrt(other, support_tol) && other.is_ac_wrt(self, support_tol)
    }
}

pub fn localize(m: &AtomicSpectralMeasure, y: &CVec) -> Result<LocalMeasure> {
    if y.len() != m.dim() {
        return Err(Error::DimMismatch { expected: m.dim(), found: y.len() });
    }
    let weights = m.bases.iter().map(|b| (b.adjoint() * y).norm_squared()).collect();
    Ok(LocalMeasure { weights, measure_id: m.id })
}

/// `omega(U, y)`: atoms with `||P_j y||^2 > support_tol ||y||^2`.
pub fn local_residual_set(m: &AtomicSpectralMeasure, y: &CVec, support_tol: f64) -> Result<AtomSet> {
    Ok(localize(m, y)?.support(support_tol))
}

/// `y = sum_j 2^-j u_j` with unit `u_j` in the range of `P_j`.
///
/// The coefficient is held at `2^-16` from the sixteenth atom on so the weights
/// stay above the default support threshold for measures with many atoms.
pub fn scalar_spectral_vector(m: &AtomicSpectralMeasure) -> Result<CVec> {
    if m.dim() == 0 || m.is_empty() {
        return Err(Error::EmptySpace);
    }
    let mut y = CVec::zeros(m.dim());
    for (j, b) in m.bases.iter().enumerate() {
        let coef = 2f64.powi(-((j + 1).min(16) as i32));
        y += b.column(0) * c64(coef, 0.0);
    }
    Ok(y)
}

/// Block structure of the commutant of `U`: the full matrix algebra on each range of `P_j`.
#[derive(Debug, Clone)]
pub struct CommutantBlocks {
    pub bases: Vec<CMat>,
}

impl CommutantBlocks {
    pub fn dim(&self) -> usize {
        self.bases.iter().map(|b| b.ncols() * b.ncols()).sum()
    }

    /// Matrix units `Q_j e_a e_b^H Q_j^H` spanning the commutant.
    pub fn basis_matrices(&self) -> Vec<CMat> {
        let mut out = Vec::with_capacity(self.dim());
        for b in &self.bases {
            for a in 0..b.ncols() {
                for c in 0..b.ncols() {
                    out.push(b.column(a) * b.column(c).adjoint());
                }
            }
        }
        out
    }

    /// Assemble `sum_j Q_j M_j Q_j^H` from per-block matrices.
    pub fn assemble(&self, blocks: &[CMat]) -> CMat {
        let d = self.bases.first().map(|b| b.nrows()).unwrap_or(0);
        let mut out = zeros(d, d);
        for (q, m) in self.bases.iter().zip(blocks.iter()) {
            out += q * m * q.adjoint();
        }
        out
    }
}

pub fn unitary_commutant_blocks(m: &AtomicSpectralMeasure) -> CommutantBlocks {
    CommutantBlocks { bases: m.bases.clone() }
}

/// `g(U) = sum_j g(z_j) P_j`.
pub fn functional_calculus(m: &AtomicSpectralMeasure, g: &[C64]) -> Result<CMat> {
    if g.len() != m.len() {
        return Err(Error::ArityMismatch { expected: m.len(), found: g.len() });
    }
    let mut out = zeros(m.dim(), m.dim());
    for (v, p) in g.iter().zip(m.projections.iter()) {
        out += p * *v;
    }
    Ok(out)
}

/// Values of the `i`-th coordinate function at the atoms.
pub fn coordinate_values(m: &AtomicSpectralMeasure, i: usize) -> Vec<C64> {
    m.atoms.iter().map(|z| z[i]).collect()
}

/// Values of the characteristic function of `omega` at the atoms.
pub fn indicator_values(omega: &AtomSet) -> Vec<C64> {
    (0..omega.universe()).map(|j| if omega.contains(j) { c64(1.0, 0.0) } else { c64(0.0, 0.0) }).collect()
}

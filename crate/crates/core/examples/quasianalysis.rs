//! Quasianalyticity verdicts and hyperinvariant subspaces.

use unitary_asymptotes::asymptote::build_asymptote;
use unitary_asymptotes::linalg::{c64, cis, CMat};
use unitary_asymptotes::quasi::{is_quasianalytic, split_non_quasianalytic, DEFAULT_RANDOM_SAMPLES};
use unitary_asymptotes::spectral::{joint_diagonalize, DEFAULT_CLUSTER_TOL};
use unitary_asymptotes::tuple::OperatorTuple;

fn report(name: &str, t: &OperatorTuple) -> unitary_asymptotes::Result<()> {
    let a = build_asymptote(t)?;
    let m = joint_diagonalize(a.u(), DEFAULT_CLUSTER_TOL)?;
    let q = is_quasianalytic(&a, &m, DEFAULT_RANDOM_SAMPLES, 0)?;
    println!(
        "{name}: quasianalytic {}, pi(T) = {:?}, ker X trivial {}",
        q.quasianalytic,
        q.pi.set.iter().collect::<Vec<_>>(),
        q.injective_x
    );
    if !q.quasianalytic {
        let s = split_non_quasianalytic(t, &a, &m)?;
        println!(
            "  hyperinvariant M of dimension {} from {}, invariance residual {:.1e}",
            s.subspace.dim(),
            s.atom.map_or("ker X".to_string(), |j| format!("atom {j}")),
            s.invariance_residual
        );
    }
    Ok(())
}

fn main() -> unitary_asymptotes::Result<()> {
    let rotation = OperatorTuple::single(CMat::identity(3, 3) * cis(0.9))?;
    report("rotation", &rotation)?;

    let two_atoms = OperatorTuple::single(CMat::from_row_slice(
        2,
        2,
        &[c64(1.0, 0.0), c64(3.0, 0.0), c64(0.0, 0.0), c64(-1.0, 0.0)],
    ))?;
    report("two atoms", &two_atoms)?;

    let with_kernel = OperatorTuple::single(CMat::from_row_slice(
        2,
        2,
        &[cis(0.2), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.5, 0.0)],
    ))?;
    report("stable part", &with_kernel)?;
    Ok(())
}

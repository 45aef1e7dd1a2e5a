//! Optimal norm-control constant of an asymptote and its scaling behaviour.

use unitary_asymptotes::asymptote::build_asymptote;
use unitary_asymptotes::linalg::{c64, cis, CMat};
use unitary_asymptotes::norm_control::norm_control;
use unitary_asymptotes::spectral::{joint_diagonalize, DEFAULT_CLUSTER_TOL};
use unitary_asymptotes::tuple::OperatorTuple;

fn main() -> unitary_asymptotes::Result<()> {
    let t = OperatorTuple::single(CMat::from_row_slice(
        3,
        3,
        &[cis(0.7), c64(2.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), cis(-1.2), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.4, 0.0)],
    ))?;
    let a = build_asymptote(&t)?;
    let m = joint_diagonalize(a.u(), DEFAULT_CLUSTER_TOL)?;
    for c in [1.0, 0.25, 4.0] {
        let scaled = a.scaled(c);
        let r = norm_control(&scaled, &m, 8, 0)?;
        println!(
            "X scaled by {c}: kappa_op in [{:.6}, {:.6}], kappa_aop = {:.6}, attained at atom {}",
            r.kappa_op_lower, r.kappa_op_upper, r.kappa_aop, r.atom
        );
    }
    Ok(())
}

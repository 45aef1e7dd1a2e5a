//! Joint spectral measure of a unitary pair: atoms, local measures and functional calculus.

use unitary_asymptotes::asymptote::build_asymptote;
use unitary_asymptotes::linalg::{c64, cis, op_norm, CMat, CVec};
use unitary_asymptotes::spectral::{
    angle, functional_calculus, joint_diagonalize, local_residual_set, localize, scalar_spectral_vector,
    DEFAULT_CLUSTER_TOL, DEFAULT_SUPPORT_TOL,
};
use unitary_asymptotes::tuple::OperatorTuple;

fn main() -> unitary_asymptotes::Result<()> {
    let d1 = [cis(0.4), cis(0.4), cis(2.5), c64(0.3, 0.0)];
    let d2 = [cis(-1.0), cis(-1.0), cis(-1.0), c64(0.1, 0.0)];
    let diag = |v: &[_]| CMat::from_diagonal(&CVec::from_column_slice(v));
    let t = OperatorTuple::with_default_tol(vec![diag(&d1), diag(&d2)])?;
    let a = build_asymptote(&t)?;
    let m = joint_diagonalize(a.u(), DEFAULT_CLUSTER_TOL)?;

    for (j, z) in m.atoms().iter().enumerate() {
        let angles: Vec<String> = z.iter().map(|c| format!("{:.4}", angle(c))).collect();
        println!("atom {j}: angles [{}], rank {}", angles.join(", "), m.rank(j));
    }
    println!("resolution defect {:.2e}", m.resolution_defect());

    let y = a.x() * CVec::from_column_slice(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(1.0, 0.0), c64(1.0, 0.0)]);
    let mu = localize(&m, &y)?;
    println!("local weights {:?} (total {:.4})", mu.weights, mu.total());
    let omega = local_residual_set(&m, &y, DEFAULT_SUPPORT_TOL)?;
    println!("local residual set {:?}", omega.iter().collect::<Vec<_>>());

    let g = scalar_spectral_vector(&m)?;
    println!("scalar spectral vector support size {}", local_residual_set(&m, &g, DEFAULT_SUPPORT_TOL)?.len());

    // g(U) for g = z_1 * conj(z_2) agrees with U_1 U_2^H
    let vals: Vec<_> = m.atoms().iter().map(|z| z[0] * z[1].conj()).collect();
    let f = functional_calculus(&m, &vals)?;
    let direct = a.u().mat(0) * a.u().mat(1).adjoint();
    println!("||g(U) - U_1 U_2^H|| = {:.2e}", op_norm(&(f - direct)));
    Ok(())
}

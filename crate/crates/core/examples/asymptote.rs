//! Build the unitary asymptote of a commuting pair and inspect it.

use unitary_asymptotes::asymptote::{annihilating_subspace, build_asymptote, check_orbit_conditions};
use unitary_asymptotes::format::write_matrix;
use unitary_asymptotes::linalg::{c64, CMat, CVec};
use unitary_asymptotes::tuple::OperatorTuple;

fn main() -> unitary_asymptotes::Result<()> {
    // T_1 = S diag(1, -1, 1/2) S^-1 and T_2 = T_1^2, with a non-normal similarity
    let s = CMat::from_row_slice(3, 3, &[1.0, 2.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0].map(|v| c64(v, 0.0)));
    let si = s.clone().try_inverse().expect("invertible");
    let d = CMat::from_diagonal(&CVec::from_iterator(3, [1.0, -1.0, 0.5].map(|v| c64(v, 0.0))));
    let t1 = &s * d * &si;
    let t2 = &t1 * &t1;
    let t = OperatorTuple::with_default_tol(vec![t1, t2])?;

    let a = build_asymptote(&t)?;
    println!("dim K = {}, ||X|| = {:.6}", a.k_dim(), a.x_norm());
    println!("X =\n{}", write_matrix(a.x()));
    for (i, u) in a.u().mats().iter().enumerate() {
        println!("U_{} =\n{}", i + 1, write_matrix(u));
    }
    println!(
        "intertwining residual {:.2e}, unitarity defect {:.2e}, minimal {}",
        a.intertwining_residual(),
        a.unitarity_defect(),
        a.is_minimal()
    );
    let ann = annihilating_subspace(&a, 32, 0);
    println!("class {}, stable subspace of dimension {}", ann.label.as_str(), ann.subspace.dim());
    let orbit = check_orbit_conditions(&a, 16, 8, 1e3, 0);
    println!("upper orbit condition holds: {}", orbit.uoc_holds);
    Ok(())
}

//! The norm-control `||Z^-1||` of an invertible intertwiner can be far from optimal.
//!
//! For `T = [[lambda, 0], [1, 1]]` the pair `(Z, W)` with `W = diag(lambda, 1)`
//! has optimal constant 1 while `||Z^-1|| >= 1 / |1 - lambda|` blows up as
//! `lambda -> 1`.

use std::f64::consts::PI;

use unitary_asymptotes::linalg::cis;
use unitary_asymptotes::reproduce::example9;

fn main() -> unitary_asymptotes::Result<()> {
    for theta in [PI / 2.0, PI / 4.0, PI, 0.05] {
        let e = example9(cis(theta), 0)?;
        println!(
            "lambda = e^{{{theta:.4}i}}: kappa_op(Z,W) in [{:.6}, {:.6}], ||Z^-1|| = {:.4} >= {:.4}, verdict {}, pipeline kappa_op {:.4}",
            e.kappa_op.lower,
            e.kappa_op.upper,
            e.z_inv_norm,
            e.z_inv_floor,
            e.verdict.as_str(),
            e.pipeline_kappa_op,
        );
    }
    Ok(())
}

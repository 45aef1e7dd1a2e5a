//! Cesaro means of `(T^k)^H T^k` against the closed-form limit.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use unitary_asymptotes::asymptote::DEFAULT_MAX_N;
use unitary_asymptotes::limit::{cesaro_limit, exact_limit};
use unitary_asymptotes::linalg::{self, c64, cis, op_norm, CMat, CVec};
use unitary_asymptotes::tuple::OperatorTuple;
use unitary_asymptotes::Error;

fn main() -> unitary_asymptotes::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = linalg::random_matrix(&mut rng, 4, 4) * c64(0.3, 0.0) + linalg::identity(4);
    let si = linalg::inverse(&s).expect("invertible");
    let diag = |v: [_; 4]| CMat::from_diagonal(&CVec::from_vec(v.to_vec()));
    let t = OperatorTuple::with_default_tol(vec![
        &s * diag([cis(0.3), cis(2.0), c64(0.6, 0.0), c64(0.0, 0.3)]) * &si,
        &s * diag([cis(1.1), cis(-0.4), c64(0.2, 0.1), c64(-0.5, 0.0)]) * &si,
    ])?;

    let exact = exact_limit(&t)?;
    let cesaro = match cesaro_limit(&t, DEFAULT_MAX_N, 1e-12) {
        Ok(c) => c,
        Err(Error::HorizonExhausted { best }) => *best,
        Err(e) => return Err(e),
    };
    println!("exact: isometry residual {:.2e}, smallest eigenvalue {:.2e}", exact.isometry_residual(&t), exact.min_eigenvalue());
    println!("cesaro: {} checkpoints, box side {}, last difference {:.2e}", cesaro.iterations, cesaro.horizon, cesaro.residual);
    println!("||A_cesaro - A_exact|| = {:.2e}", op_norm(&(&cesaro.a - &exact.a)));
    Ok(())
}

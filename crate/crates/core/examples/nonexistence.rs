//! Twice the unilateral shift has no unitary asymptote: a circle of eigenfunctionals.

use unitary_asymptotes::models::nonexistence_diagnostic;

fn main() {
    for n in [8, 16, 32] {
        let r = nonexistence_diagnostic(n);
        println!(
            "window {n}: ||R^N|| = {:.3e}, growing {}, eigenfunctionals of rank {} (sigma_min {:.2e}), residual {:.1e}",
            r.power_norms.last().copied().unwrap_or(0.0),
            r.growing,
            r.rank,
            r.sigma_min,
            r.intertwining_residual
        );
    }
}

//! Analytic Toeplitz tuples on a truncated Hardy space and their a.c. invariants.

use std::f64::consts::PI;

use unitary_asymptotes::models::toeplitz::ToeplitzParams;
use unitary_asymptotes::models::{ac_quasianalytic_check, build_toeplitz_model, build_toeplitz_tuple, ArcSet};
use unitary_asymptotes::reproduce::{toeplitz_joint_decay, toeplitz_orbit_trend};

fn main() -> unitary_asymptotes::Result<()> {
    let model = build_toeplitz_model(&[ArcSet::arc(0.0, PI)], 256, 4096)?;
    println!("Omega measure {:.4}, eps {:.3e}", model.omega().measure(), model.eps());
    let trend = toeplitz_orbit_trend(&model, 8, 200, 0);
    println!(
        "orbit norms nonincreasing {}, final gap {:.2} quadrature errors",
        trend.nonincreasing, trend.worst_ratio
    );
    let ac = ac_quasianalytic_check(&model, 16, 0);
    println!("pi_a = omega_a (approx): {}, missing cells {}", ac.agrees, ac.missing_cells);

    // two symbols unimodular on disjoint arcs: Omega is empty and the joint orbit decays
    let pair = build_toeplitz_tuple(
        &[ArcSet::arc(0.2 * PI, 0.8 * PI), ArcSet::arc(1.2 * PI, 1.8 * PI)],
        256,
        4096,
        &ToeplitzParams::default(),
    )?;
    println!("two-symbol Omega measure {}", pair.omega().measure());
    for j in [10, 100, 1000] {
        println!("  sup ||T_1^j T_2^j h|| / ||h|| at j={j}: {:.2e}", toeplitz_joint_decay(&pair, j, 8, 0));
    }
    Ok(())
}

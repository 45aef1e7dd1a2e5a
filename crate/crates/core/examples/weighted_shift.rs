//! Truncated weighted bilateral shifts: exact lower orbit condition forward, failure backward.

use unitary_asymptotes::models::WeightedShiftModel;

fn main() -> unitary_asymptotes::Result<()> {
    for n in [1, 2] {
        for radius in [8, 16] {
            let m = WeightedShiftModel::new(n, radius)?;
            let r = m.loc_report(16, 0);
            println!(
                "n={n} N={radius}: dim {}, horizon {}, forward deviation {:e}, backward ratio {} at {:?}",
                m.dim(),
                r.horizon,
                r.loc_deviation,
                r.inverse_ratio,
                r.inverse_argmax
            );
        }
    }
    Ok(())
}

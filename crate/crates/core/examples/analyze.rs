//! The full report pipeline on a tuple given in the text format.

use unitary_asymptotes::analysis::{analyze_tuple, AnalysisConfig, Command};
use unitary_asymptotes::format::parse_tuple;
use unitary_asymptotes::report::{OutputFormat, Report, Thresholds};

const INPUT: &str = "
tuple n=2 dim=3
1 1 0
0 -1 0
0 0 0.5
i 0 0
0 i 0
0 0 0.5i
";

fn main() -> unitary_asymptotes::Result<()> {
    let t = parse_tuple(INPUT)?;
    let cfg = AnalysisConfig::new("inline", Command::Analyze);
    let mut r = Report::new("analyze", cfg.seed, &Thresholds::default());
    analyze_tuple(&cfg, &t, &mut r);
    print!("{}", r.render(OutputFormat::Text));
    println!("--- csv ---");
    print!("{}", r.render(OutputFormat::Csv));
    Ok(())
}

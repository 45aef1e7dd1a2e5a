use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use unitary_asymptotes::analysis::{analyze, write_report, AnalysisConfig, Command};
use unitary_asymptotes::report::{OutputFormat, Report, Status, Thresholds};
use unitary_asymptotes::reproduce::reproduce_example;

#[derive(Parser)]
#[command(name = "uasym", version, about = "Unitary asymptotes of commuting matrix tuples")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_rank: f64,
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol_cluster: f64,
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_support: f64,
    #[arg(long, global = true, default_value_t = 16)]
    horizon: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Text)]
    format: Fmt,
    /// Write the report into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fmt {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline: asymptote, spectrum, quasianalysis, split, norm-control.
    Analyze { input: PathBuf },
    Asymptote { input: PathBuf },
    Spectrum { input: PathBuf },
    Quasi { input: PathBuf },
    Split { input: PathBuf },
    NormControl { input: PathBuf },
    /// Rebuild a worked example (9, 14, 17, 23, 26, 32) and check its expectations.
    ReproduceExample { id: String },
}

fn emit(r: &Report, o: &Opts, fmt: OutputFormat, stem: &str) -> ExitCode {
    match &o.out {
        Some(dir) => match write_report(r, fmt, dir, stem) {
            Ok(p) => eprintln!("wrote {}", p.display()),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(Status::InputError.exit_code() as u8);
            }
        },
        None => print!("{}", r.render(fmt)),
    }
    ExitCode::from(r.status.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let o = &cli.opts;
    let th = Thresholds { rank: o.tol_rank, cluster: o.tol_cluster, support: o.tol_support };
    if !(th.rank > 0.0 && th.cluster > 0.0 && th.support > 0.0) {
        eprintln!("error: thresholds must be positive");
        return ExitCode::from(1);
    }
    let fmt = match o.format {
        Fmt::Text => OutputFormat::Text,
        Fmt::Csv => OutputFormat::Csv,
    };
    let (command, input) = match cli.cmd {
        Cmd::ReproduceExample { id } => {
            return match reproduce_example(&id, o.seed, &th) {
                Ok(r) => emit(&r, o, fmt, &format!("example{}", id.trim())),
                Err(e) => {
                    let mut r = Report::new(format!("reproduce-example {id}"), o.seed, &th);
                    r.error("example", &e);
                    emit(&r, o, fmt, "example")
                }
            };
        }
        Cmd::Analyze { input } => (Command::Analyze, input),
        Cmd::Asymptote { input } => (Command::Asymptote, input),
        Cmd::Spectrum { input } => (Command::Spectrum, input),
        Cmd::Quasi { input } => (Command::Quasi, input),
        Cmd::Split { input } => (Command::Split, input),
        Cmd::NormControl { input } => (Command::NormControl, input),
    };
    let mut cfg = AnalysisConfig::new(input, command);
    cfg.thresholds = th;
    cfg.horizon = o.horizon;
    cfg.seed = o.seed;
    cfg.format = fmt;
    let r = analyze(&cfg);
    emit(&r, o, fmt, command.name())
}

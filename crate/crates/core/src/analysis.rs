//! Pipeline orchestration behind the command-line tool.

use std::path::PathBuf;

use crate::asymptote::{annihilating_subspace, build_asymptote, UnitaryAsymptote};
use crate::error::Result;
use crate::format::{ingest_path, Ingested};
use crate::linalg;
use crate::models::{ac_quasianalytic_check, HardyToeplitzModel, WeightedShiftModel};
use crate::norm_control::norm_control;
use crate::quasi::{is_quasianalytic, split_non_quasianalytic, DEFAULT_RANDOM_SAMPLES};
use crate::report::{num, OutputFormat, Report, Status, Thresholds};
use crate::spectral::{angle, joint_diagonalize, AtomicSpectralMeasure};
use crate::tuple::OperatorTuple;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Analyze,
    Asymptote,
    Spectrum,
    Quasi,
    Split,
    NormControl,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Asymptote => "asymptote",
            Command::Spectrum => "spectrum",
            Command::Quasi => "quasi",
            Command::Split => "split",
            Command::NormControl => "norm-control",
        }
    }

    fn wants_spectrum(&self) -> bool {
        !matches!(self, Command::Asymptote)
    }

    fn wants_quasi(&self) -> bool {
        matches!(self, Command::Analyze | Command::Quasi | Command::Split)
    }

    fn wants_split(&self) -> bool {
        matches!(self, Command::Analyze | Command::Split)
    }

    fn wants_norm_control(&self) -> bool {
        matches!(self, Command::Analyze | Command::NormControl)
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub input: PathBuf,
    pub command: Command,
    pub thresholds: Thresholds,
    pub horizon: usize,
    pub format: OutputFormat,
    pub seed: u64,
    pub restarts: usize,
}

impl AnalysisConfig {
    pub fn new(input: impl Into<PathBuf>, command: Command) -> Self {
        Self {
            input: input.into(),
            command,
            thresholds: Thresholds::default(),
            horizon: 16,
            format: OutputFormat::Text,
            seed: 0,
            restarts: 4,
        }
    }
}

/// Reads the input and runs the requested stages; every failure ends up in the report.
pub fn analyze(cfg: &AnalysisConfig) -> Report {
    let mut r = Report::new(cfg.command.name(), cfg.seed, &cfg.thresholds);
    r.header("input", cfg.input.display().to_string());
    r.header("horizon", cfg.horizon.to_string());
    match ingest_path(&cfg.input) {
        Ok(Ingested::Tuple(t)) => analyze_tuple(cfg, &t, &mut r),
        Ok(Ingested::Shift(m)) => analyze_shift(cfg, &m, &mut r),
        Ok(Ingested::Toeplitz(m)) => analyze_toeplitz(cfg, &m, &mut r),
        Err(e) => r.error("input", &e),
    }
    r
}

pub fn analyze_tuple(cfg: &AnalysisConfig, t: &OperatorTuple, r: &mut Report) {
    r.row("tuple", "arity", t.arity().to_string());
    r.row("tuple", "dim", t.dim().to_string());
    r.value("tuple", "commute_residual", t.commute_residual());
    let a = match build_asymptote(t) {
        Ok(a) => a,
        Err(e) => {
            r.error("asymptote", &e);
            return;
        }
    };
    report_asymptote(cfg, &a, r);
    if !cfg.command.wants_spectrum() {
        return;
    }
    if a.is_degenerate() {
        r.skip("spectrum", "ZeroX");
        return;
    }
    let m = match joint_diagonalize(a.u(), cfg.thresholds.cluster) {
        Ok(m) => m,
        Err(e) => {
            r.error("spectrum", &e);
            return;
        }
    };
    report_spectrum(&a, &m, r);
    if cfg.command.wants_quasi() {
        match is_quasianalytic(&a, &m, DEFAULT_RANDOM_SAMPLES, cfg.seed) {
            Ok(q) => {
                r.row("quasi", "quasianalytic", q.quasianalytic.to_string());
                r.row("quasi", "criterion_i", q.criterion_i.to_string());
                r.row("quasi", "criterion_ii", q.criterion_ii.to_string());
                r.row("quasi", "criterion_iii", q.criterion_iii.to_string());
                r.row("quasi", "pi", format!("{:?}", q.pi.set.iter().collect::<Vec<_>>()));
                r.row("quasi", "samples", q.samples.to_string());
                r.row("quasi", "injective_x", q.injective_x.to_string());
                if cfg.command.wants_split() {
                    if q.quasianalytic {
                        r.skip("split", "IsQuasianalytic");
                    } else {
                        match split_non_quasianalytic(t, &a, &m) {
                            Ok(s) => {
                                r.row("split", "dim", s.subspace.dim().to_string());
                                r.row("split", "atom", s.atom.map_or("kernel".to_string(), |j| j.to_string()));
                                r.value("split", "invariance_residual", s.invariance_residual);
                                r.row("split", "v", vector_text(&s.v));
                                r.row("split", "u", vector_text(&s.u));
                            }
                            Err(e) => r.error("split", &e),
                        }
                    }
                }
            }
            Err(e) => r.error("quasi", &e),
        }
    }
    if cfg.command.wants_norm_control() {
        match norm_control(&a, &m, cfg.restarts, cfg.seed) {
            Ok(nc) => {
                r.value("norm_control", "kappa_op_lower", nc.kappa_op_lower);
                r.value("norm_control", "kappa_op_upper", nc.kappa_op_upper);
                r.value("norm_control", "kappa_aop", nc.kappa_aop);
                r.row("norm_control", "atom", nc.atom.to_string());
            }
            Err(e) => r.error("norm_control", &e),
        }
    }
}

fn vector_text(v: &linalg::CVec) -> String {
    let parts: Vec<String> = v.iter().map(|z| crate::format::format_complex(c_round(*z))).collect();
    format!("[{}]", parts.join(" "))
}

fn c_round(z: linalg::C64) -> linalg::C64 {
    let r = |x: f64| format!("{x:.9e}").parse::<f64>().unwrap_or(x);
    linalg::c64(r(z.re), r(z.im))
}

fn report_asymptote(cfg: &AnalysisConfig, a: &UnitaryAsymptote, r: &mut Report) {
    r.row("asymptote", "method", a.method.map_or("none".to_string(), |m| format!("{m:?}")));
    r.row("asymptote", "k_dim", a.k_dim().to_string());
    r.value("asymptote", "x_norm", a.x_norm());
    let rank = if a.k_dim() == 0 { 0 } else { linalg::rank(a.x(), cfg.thresholds.rank) };
    r.row("asymptote", "x_rank", rank.to_string());
    r.row("asymptote", "minimal", a.is_minimal().to_string());
    r.value("asymptote", "intertwining_residual", a.intertwining_residual());
    r.value("asymptote", "unitarity_defect", a.unitarity_defect());
    let ann = annihilating_subspace(a, cfg.horizon, cfg.seed);
    r.row("asymptote", "class", ann.label.as_str());
    r.row("asymptote", "stable_dim", ann.subspace.dim().to_string());
    r.value("asymptote", "stable_decay_ratio", ann.decay_ratio);
}

fn report_spectrum(a: &UnitaryAsymptote, m: &AtomicSpectralMeasure, r: &mut Report) {
    r.row("spectrum", "atoms", m.len().to_string());
    r.value("spectrum", "min_separation", if m.len() > 1 { m.min_separation() } else { 0.0 });
    r.value("spectrum", "reconstruction_residual", m.reconstruction_residual(a.u()));
    for j in 0..m.len() {
        let angles: Vec<String> = m.atom(j).iter().map(|z| num(angle(z))).collect();
        r.row("atoms", format!("atom_{j}_angles"), angles.join(" "));
        r.row("atoms", format!("atom_{j}_rank"), m.rank(j).to_string());
    }
}

fn analyze_shift(cfg: &AnalysisConfig, m: &WeightedShiftModel, r: &mut Report) {
    if cfg.command != crate::analysis::Command::Analyze {
        r.skip(cfg.command.name(), "weighted shift models support analyze only");
        return;
    }
    r.row("shift", "arity", m.arity().to_string());
    r.row("shift", "radius", m.radius().to_string());
    r.row("shift", "dim", m.dim().to_string());
    let rep = m.loc_report(8, cfg.seed);
    r.value("shift", "loc_deviation", rep.loc_deviation);
    r.value("shift", "inverse_loc_ratio", rep.inverse_ratio);
    r.row("shift", "inverse_argmax", format!("{:?}", rep.inverse_argmax));
    r.row("shift", "horizon", rep.horizon.to_string());
}

fn analyze_toeplitz(cfg: &AnalysisConfig, m: &HardyToeplitzModel, r: &mut Report) {
    if cfg.command != crate::analysis::Command::Analyze {
        r.skip(cfg.command.name(), "Toeplitz models support analyze only");
        return;
    }
    r.row("toeplitz", "symbols", m.arity().to_string());
    r.row("toeplitz", "degree", m.degree().to_string());
    r.row("toeplitz", "grid", m.grid().to_string());
    r.value("toeplitz", "eps", m.eps());
    r.value("toeplitz", "omega_measure", m.omega().measure());
    let arcs: Vec<String> = m.omega().arcs().iter().map(|(s, e)| format!("[{} {}]", num(*s), num(*e))).collect();
    r.row("toeplitz", "omega", arcs.join(" "));
    let q = ac_quasianalytic_check(m, 50, cfg.seed);
    r.value("ac", "pi_a_measure", q.pi_a.measure());
    r.value("ac", "missing_cells", q.missing_cells);
    r.row("ac", "pi_a_equals_omega_a_approx", q.agrees.to_string());
}

/// Writes `<command>.<ext>` into `dir`.
pub fn write_report(r: &Report, fmt: OutputFormat, dir: &std::path::Path, stem: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let ext = match fmt {
        OutputFormat::Text => "txt",
        OutputFormat::Csv => "csv",
    };
    let path = dir.join(format!("{stem}.{ext}"));
    std::fs::write(&path, r.render(fmt))?;
    Ok(path)
}

pub fn exit_status(r: &Report) -> Status {
    r.status
}

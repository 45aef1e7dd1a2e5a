//! Deterministic text and CSV reports.
//!
//! CSV reports have the frozen columns `section,key,value`. Header rows use
//! section `header`, expectation rows use section `check` with value `PASS` or
//! `FAIL`, and errors use section `error`.

use std::fmt::Write as _;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub rank: f64,
    pub cluster: f64,
    pub support: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { rank: crate::linalg::RANK_TOL, cluster: crate::spectral::DEFAULT_CLUSTER_TOL, support: crate::spectral::DEFAULT_SUPPORT_TOL }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Ok = 0,
    InputError = 1,
    InvariantViolation = 2,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        self as i32
    }

    pub fn of_error(e: &Error) -> Status {
        if e.is_invariant_violation() {
            Status::InvariantViolation
        } else {
            Status::InputError
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub title: String,
    header: Vec<(String, String)>,
    rows: Vec<(String, String, String)>,
    pub checks: Vec<Check>,
    pub status: Status,
}

/// Fixed-width scientific notation, identical across runs.
pub fn num(v: f64) -> String {
    format!("{v:.6e}")
}

impl Report {
    pub fn new(title: impl Into<String>, seed: u64, th: &Thresholds) -> Self {
        let header = vec![
            ("version".into(), format!("{} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"))),
            ("seed".into(), seed.to_string()),
            ("tol_rank".into(), num(th.rank)),
            ("tol_cluster".into(), num(th.cluster)),
            ("tol_support".into(), num(th.support)),
        ];
        Self { title: title.into(), header, rows: Vec::new(), checks: Vec::new(), status: Status::Ok }
    }

    pub fn header(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.header.push((key.into(), value.into()));
    }

    pub fn row(&mut self, section: &str, key: impl Into<String>, value: impl Into<String>) {
        self.rows.push((section.into(), key.into(), value.into()));
    }

    pub fn value(&mut self, section: &str, key: impl Into<String>, v: f64) {
        self.row(section, key, num(v));
    }

    pub fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check { name: name.into(), pass, detail: detail.into() });
        if !pass {
            self.status = self.status.max(Status::InvariantViolation);
        }
        pass
    }

    /// Records an error as a structured line and raises the status accordingly.
    pub fn error(&mut self, stage: &str, e: &Error) {
        self.rows.push(("error".into(), stage.into(), e.to_string()));
        self.status = self.status.max(Status::of_error(e));
    }

    pub fn skip(&mut self, stage: &str, reason: &str) {
        self.rows.push(("skipped".into(), stage.into(), reason.into()));
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn rows(&self) -> &[(String, String, String)] {
        &self.rows
    }

    pub fn get(&self, section: &str, key: &str) -> Option<&str> {
        self.rows.iter().find(|r| r.0 == section && r.1 == key).map(|r| r.2.as_str())
    }

    pub fn render(&self, fmt: OutputFormat) -> String {
        match fmt {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Csv => self.render_csv(),
        }
    }

    fn render_text(&self) -> String {
        let mut s = format!("# {}\n", self.title);
        for (k, v) in &self.header {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let mut section = "";
        for (sec, k, v) in &self.rows {
            if sec != section {
                let _ = writeln!(s, "[{sec}]");
                section = sec;
            }
            let _ = writeln!(s, "{k} = {v}");
        }
        for c in &self.checks {
            let _ = writeln!(s, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        let _ = writeln!(s, "# status: {:?}", self.status);
        s
    }

    fn render_csv(&self) -> String {
        let mut s = String::from("section,key,value\n");
        let mut line = |a: &str, b: &str, c: &str| {
            let _ = writeln!(s, "{},{},{}", csv_field(a), csv_field(b), csv_field(c));
        };
        line("header", "title", &self.title);
        for (k, v) in &self.header {
            line("header", k, v);
        }
        for (sec, k, v) in &self.rows {
            line(sec, k, v);
        }
        for c in &self.checks {
            line("check", &c.name, if c.pass { "PASS" } else { "FAIL" });
            line("check_detail", &c.name, &c.detail);
        }
        line("header", "status", &format!("{:?}", self.status));
        s
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_check_sets_status() {
        let mut r = Report::new("t", 1, &Thresholds::default());
        r.check("a", true, "");
        assert_eq!(r.status, Status::Ok);
        r.check("b", false, "x");
        assert_eq!(r.status.exit_code(), 2);
    }

    #[test]
    fn csv_quotes() {
        let mut r = Report::new("t", 1, &Thresholds::default());
        r.row("s", "k", "a,b");
        assert!(r.render(OutputFormat::Csv).contains("s,k,\"a,b\""));
    }

    #[test]
    fn input_error_status() {
        let mut r = Report::new("t", 1, &Thresholds::default());
        r.error("parse", &Error::Parse { line: 1, col: 2, msg: "x".into() });
        assert_eq!(r.status, Status::InputError);
        r.error("quasi", &Error::CriteriaDisagree("x".into()));
        assert_eq!(r.status, Status::InvariantViolation);
    }
}

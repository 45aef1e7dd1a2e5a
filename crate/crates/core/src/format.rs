//! Text formats for tuples and model specifications.
//!
//! A tuple file:
//!
//! ```text
//! # comment
//! tuple n=2 dim=2 [tol=1e-10]
//! 1 0
//! 0 -1
//! 0.5+1i 0
//! 0 i
//! ```
//!
//! lists `n` matrices of `dim` rows each. Entries are complex literals such as
//! `2`, `-1.5e-3`, `3i`, `-i`, `1-2.5i`.
//!
//! A model file is either `shift n=<n> N=<N>` or `toeplitz M=<M> G=<G>`
//! followed by `symbol` lines, each followed by `arc <start> <end>` lines.
//! Angles are radians and may carry a `pi` suffix (`0.5pi`, `pi`). Arcs given
//! before any `symbol` line belong to a single symbol.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMat, C64};
use crate::models::{build_toeplitz_model, ArcSet, HardyToeplitzModel, WeightedShiftModel};
use crate::tuple::OperatorTuple;

#[derive(Debug, Clone)]
pub enum Ingested {
    Tuple(OperatorTuple),
    Shift(WeightedShiftModel),
    Toeplitz(HardyToeplitzModel),
}

struct Token<'a> {
    text: &'a str,
    line: usize,
    col: usize,
}

fn err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// Non-empty, comment-stripped lines split into tokens with 1-based positions.
fn lines(src: &str) -> Vec<Vec<Token<'_>>> {
    let mut out = Vec::new();
    for (ln, raw) in src.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let mut toks = Vec::new();
        let mut start = None;
        for (i, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    toks.push(Token { text: &body[s..i], line: ln + 1, col: s + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !toks.is_empty() {
            out.push(toks);
        }
    }
    out
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
pub fn parse_complex(s: &str) -> Option<C64> {
    if let Some(body) = s.strip_suffix('i') {
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
        });
        let (re, im) = match split {
            Some(k) => (body[..k].parse::<f64>().ok()?, &body[k..]),
            None => (0.0, body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => t.parse::<f64>().ok()?,
        };
        if !re.is_finite() || !im.is_finite() {
            return None;
        }
        return Some(c64(re, im));
    }
    let re = s.parse::<f64>().ok()?;
    re.is_finite().then(|| c64(re, 0.0))
}

fn parse_angle(t: &Token) -> Result<f64> {
    let s = t.text;
    let v = if let Some(body) = s.strip_suffix("pi") {
        let k = match body {
            "" | "+" => 1.0,
            "-" => -1.0,
            b => b.strip_suffix('*').unwrap_or(b).parse::<f64>().map_err(|_| err(t.line, t.col, format!("bad angle `{s}`")))?,
        };
        k * std::f64::consts::PI
    } else {
        s.parse::<f64>().map_err(|_| err(t.line, t.col, format!("bad angle `{s}`")))?
    };
    if !v.is_finite() {
        return Err(err(t.line, t.col, format!("bad angle `{s}`")));
    }
    Ok(v)
}

fn keyed<'a>(t: &Token<'a>, key: &str) -> Result<&'a str> {
    t.text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| err(t.line, t.col, format!("expected `{key}=<value>`")))
}

fn keyed_usize(t: &Token, key: &str) -> Result<usize> {
    keyed(t, key)?.parse().map_err(|_| err(t.line, t.col, format!("`{key}` must be a nonnegative integer")))
}

fn header<'a, 'b>(toks: &'b [Token<'a>], keys: &[&str]) -> Result<Vec<&'b Token<'a>>> {
    let first = &toks[0];
    if toks.len() < keys.len() + 1 {
        let last = toks.last().expect("nonempty line");
        return Err(err(last.line, last.col + last.text.len(), format!("`{}` needs {}", first.text, keys.join(", "))));
    }
    Ok(toks[1..].iter().collect())
}

pub fn parse_tuple(src: &str) -> Result<OperatorTuple> {
    let ls = lines(src);
    let Some(head) = ls.first() else {
        return Err(err(1, 1, "empty input"));
    };
    if head[0].text != "tuple" {
        return Err(err(head[0].line, head[0].col, "expected `tuple`"));
    }
    let h = header(head, &["n", "dim"])?;
    let n = keyed_usize(h[0], "n")?;
    let d = keyed_usize(h[1], "dim")?;
    let tol = match h.get(2) {
        Some(t) => keyed(t, "tol")?.parse::<f64>().ok().filter(|v| *v >= 0.0).ok_or_else(|| err(t.line, t.col, "bad tolerance"))?,
        None => 1e-10,
    };
    if let Some(t) = h.get(3) {
        return Err(err(t.line, t.col, "unexpected token"));
    }
    if n == 0 {
        return Err(err(h[0].line, h[0].col, "arity must be positive"));
    }
    let rows = &ls[1..];
    if rows.len() != n * d {
        let (line, col) = rows.get(n * d).map(|r| (r[0].line, r[0].col)).unwrap_or((head[0].line + rows.len() + 1, 1));
        return Err(err(line, col, format!("expected {} matrix rows, found {}", n * d, rows.len())));
    }
    let mut mats = Vec::with_capacity(n);
    for m in 0..n {
        let mut a = CMat::zeros(d, d);
        for r in 0..d {
            let row = &rows[m * d + r];
            if row.len() != d {
                let t = row.get(d).unwrap_or(&row[row.len() - 1]);
                return Err(err(t.line, t.col, format!("expected {d} entries, found {}", row.len())));
            }
            for (c, t) in row.iter().enumerate() {
                a[(r, c)] = parse_complex(t.text).ok_or_else(|| err(t.line, t.col, format!("malformed complex literal `{}`", t.text)))?;
            }
        }
        mats.push(a);
    }
    OperatorTuple::new(mats, tol)
}

fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        return fmt_f64(z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt_f64(z.re), sign, fmt_f64(z.im.abs()))
}

/// Serializes a tuple; `parse_tuple` reads it back bit-exactly.
pub fn write_tuple(t: &OperatorTuple) -> String {
    let mut s = format!("tuple n={} dim={} tol={:?}\n", t.arity(), t.dim(), t.commute_tol());
    for (i, m) in t.mats().iter().enumerate() {
        let _ = writeln!(s, "# T_{}", i + 1);
        for r in 0..m.nrows() {
            let row: Vec<String> = m.row(r).iter().map(|z| format_complex(*z)).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
    }
    s
}

pub fn write_matrix(m: &CMat) -> String {
    let mut s = String::new();
    for r in 0..m.nrows() {
        let row: Vec<String> = m.row(r).iter().map(|z| format_complex(*z)).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

/// Arc lists per symbol of a `toeplitz` model file, without building the symbols.
#[derive(Debug, Clone)]
pub struct ToeplitzSpec {
    pub degree: usize,
    pub grid: usize,
    pub symbols: Vec<ArcSet>,
}

#[derive(Debug, Clone)]
pub enum ModelSpec {
    Shift { n: usize, radius: usize },
    Toeplitz(ToeplitzSpec),
}

pub fn parse_model_spec(src: &str) -> Result<ModelSpec> {
    let ls = lines(src);
    let Some(head) = ls.first() else {
        return Err(err(1, 1, "empty input"));
    };
    match head[0].text {
        "shift" => {
            let h = header(head, &["n", "N"])?;
            if let Some(t) = h.get(2) {
                return Err(err(t.line, t.col, "unexpected token"));
            }
            if let Some(r) = ls.get(1) {
                return Err(err(r[0].line, r[0].col, "unexpected line after shift header"));
            }
            Ok(ModelSpec::Shift { n: keyed_usize(h[0], "n")?, radius: keyed_usize(h[1], "N")? })
        }
        "toeplitz" => {
            let h = header(head, &["M", "G"])?;
            if let Some(t) = h.get(2) {
                return Err(err(t.line, t.col, "unexpected token"));
            }
            let degree = keyed_usize(h[0], "M")?;
            let grid = keyed_usize(h[1], "G")?;
            let mut symbols: Vec<ArcSet> = Vec::new();
            let mut open = false;
            for row in &ls[1..] {
                match row[0].text {
                    "symbol" => {
                        if let Some(t) = row.get(1) {
                            return Err(err(t.line, t.col, "unexpected token"));
                        }
                        symbols.push(ArcSet::empty());
                        open = true;
                    }
                    "arc" => {
                        if row.len() != 3 {
                            let t = row.last().expect("nonempty");
                            return Err(err(t.line, t.col, "`arc` takes a start and an end angle"));
                        }
                        let arc = ArcSet::arc(parse_angle(&row[1])?, parse_angle(&row[2])?);
                        if !open {
                            symbols.push(ArcSet::empty());
                            open = true;
                        }
                        let last = symbols.last_mut().expect("open symbol");
                        *last = last.join(&arc);
                    }
                    other => return Err(err(row[0].line, row[0].col, format!("unknown directive `{other}`"))),
                }
            }
            if symbols.is_empty() {
                return Err(err(head[0].line, head[0].col, "toeplitz model needs at least one arc"));
            }
            Ok(ModelSpec::Toeplitz(ToeplitzSpec { degree, grid, symbols }))
        }
        other => Err(err(head[0].line, head[0].col, format!("unknown model `{other}`"))),
    }
}

/// Reads a tuple or model file and validates it.
pub fn ingest(src: &str) -> Result<Ingested> {
    let first = lines(src).first().map(|l| l[0].text.to_string());
    match first.as_deref() {
        Some("tuple") => parse_tuple(src).map(Ingested::Tuple),
        Some("shift") | Some("toeplitz") => match parse_model_spec(src)? {
            ModelSpec::Shift { n, radius } => WeightedShiftModel::new(n, radius).map(Ingested::Shift),
            ModelSpec::Toeplitz(s) => build_toeplitz_model(&s.symbols, s.degree, s.grid).map(Ingested::Toeplitz),
        },
        Some(_) => {
            let l = &lines(src)[0][0];
            Err(err(l.line, l.col, format!("expected `tuple`, `shift` or `toeplitz`, found `{}`", l.text)))
        }
        None => Err(err(1, 1, "empty input")),
    }
}

pub fn ingest_path(path: &std::path::Path) -> Result<Ingested> {
    ingest(&std::fs::read_to_string(path)?)
}

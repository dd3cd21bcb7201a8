//! Orbit dumps as CSV or JSON lines, with optional limit-function columns.

use std::io::Write;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::dynamics::{Orbit, Point};
use crate::error::{Error, Result};
use crate::series::LimitPair;

pub const CSV_HEADER: &str = "n,re_z,im_z,re_w,im_w,norm,re_ratio,im_ratio,u_n";
pub const LIMIT_HEADER: &str = "re_h1,im_h1,err_h1,re_h2,im_h2,err_h2,N_used";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DumpFormat {
    Csv,
    JsonLines,
}

/// 17 significant digits, enough to round-trip any `f64`.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt).unwrap_or_default()
}

fn u_n(p: &Point, n: usize) -> Option<f64> {
    (n > 0).then(|| -p.z.re / n as f64)
}

/// Writes one row per orbit point. Row `n = 0` is the input point; `u_n` is
/// empty there and the ratio is empty wherever `w_n = 0`. `pairs`, if given,
/// must have one entry per orbit point.
pub fn dump_orbit<W: Write>(orbit: &Orbit, pairs: Option<&[LimitPair]>, format: DumpFormat, mut sink: W) -> Result<()> {
    if let Some(pairs) = pairs {
        if pairs.len() != orbit.len() {
            return Err(Error::InvalidParameter(format!(
                "{} limit pairs for an orbit of {} points",
                pairs.len(),
                orbit.len()
            )));
        }
    }
    if format == DumpFormat::Csv {
        match pairs {
            Some(_) => writeln!(sink, "{CSV_HEADER},{LIMIT_HEADER}")?,
            None => writeln!(sink, "{CSV_HEADER}")?,
        }
    }
    for (n, p) in orbit.points().iter().enumerate() {
        let ratio = orbit.ratio(n);
        let pair = pairs.map(|ps| &ps[n]);
        match format {
            DumpFormat::Csv => {
                let mut row = format!(
                    "{n},{},{},{},{},{},{},{},{}",
                    fmt(p.z.re),
                    fmt(p.z.im),
                    fmt(p.w.re),
                    fmt(p.w.im),
                    fmt(p.norm()),
                    opt(ratio.map(|q| q.re)),
                    opt(ratio.map(|q| q.im)),
                    opt(u_n(p, n)),
                );
                if let Some(pair) = pair {
                    let r = pair.record();
                    row.push_str(&format!(
                        ",{},{},{},{},{},{},{}",
                        fmt(r.re_h1),
                        fmt(r.im_h1),
                        fmt(r.err_h1),
                        fmt(r.re_h2),
                        fmt(r.im_h2),
                        fmt(r.err_h2),
                        r.n_used
                    ));
                }
                writeln!(sink, "{row}")?;
            }
            DumpFormat::JsonLines => {
                let mut obj = json!({
                    "n": n,
                    "re_z": p.z.re,
                    "im_z": p.z.im,
                    "re_w": p.w.re,
                    "im_w": p.w.im,
                    "norm": p.norm(),
                    "re_ratio": ratio.map(|q| q.re),
                    "im_ratio": ratio.map(|q| q.im),
                    "u_n": u_n(p, n),
                });
                if let (Some(pair), Value::Object(map)) = (pair, &mut obj) {
                    if let Value::Object(extra) = json!(pair.record()) {
                        map.extend(extra);
                    }
                }
                writeln!(sink, "{obj}")?;
            }
        }
    }
    Ok(())
}

/// One parsed CSV row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitRow {
    pub n: usize,
    pub point: Point,
    pub norm: f64,
    pub ratio: Option<Complex64>,
    pub u_n: Option<f64>,
}

/// Reads back the leading orbit columns of a CSV dump.
pub fn parse_orbit_csv(text: &str) -> Result<Vec<OrbitRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.starts_with(CSV_HEADER) => {}
        _ => return Err(Error::Parse("missing orbit CSV header".into())),
    }
    let num = |s: &str| s.parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
    let opt_num = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() < 9 {
                return Err(Error::Parse(format!("short CSV row: {line}")));
            }
            let n = f[0].parse().map_err(|e| Error::Parse(format!("{:?}: {e}", f[0])))?;
            let point = Point::new(Complex64::new(num(f[1])?, num(f[2])?), Complex64::new(num(f[3])?, num(f[4])?));
            let ratio = match (opt_num(f[6])?, opt_num(f[7])?) {
                (Some(re), Some(im)) => Some(Complex64::new(re, im)),
                _ => None,
            };
            Ok(OrbitRow { n, point, norm: num(f[5])?, ratio, u_n: opt_num(f[8])? })
        })
        .collect()
}

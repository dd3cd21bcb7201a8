//! Rouché certificate that a target `c` lies in `h1(W_R)`.
//!
//! On the boundary of a disk `D ⊂ W_R` transverse to `L_c`, compare
//! `A = |h0 - c|` with `h0(z, w) = z / w` against `B = |h1 - h0|`. If
//! `B < A` everywhere on `∂D` and `h0 - c` winds around zero, then `h1 - c`
//! has the same winding number, so `h1` takes the value `c` inside `D`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::disk::{rouche_disk, DiskSpec};
use super::require_some_admissible;
use super::winding::winding_number;
use crate::bounded::Bounded;
use crate::certificate::{num, Certificate, CertificateKind, Verdict};
use crate::dynamics::{MapSpec, Point};
use crate::error::{Error, Result};
use crate::series::{k_sums, terms_for_tolerance};

/// Boundary samples used before refinement.
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 256;

/// Relative change in `A_min` or `B_max` that triggers one more doubling.
const REFINE_THRESHOLD: f64 = 0.01;

/// Smallest `M` tried by [`rouche_certificate_auto`].
const AUTO_M_START: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProfile {
    /// `min |h0 - c|` over the sampled boundary.
    pub a_min: f64,
    /// `max |h1 - h0|` including the series radius.
    pub b_max: f64,
    /// `max |h1 - h0|` from the truncated series alone.
    pub b_max_raw: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoucheCertificate {
    pub c: Complex64,
    pub disk: DiskSpec,
    pub m_param: f64,
    pub a_min: f64,
    pub b_max: f64,
    pub b_max_raw: f64,
    pub winding_h0: i64,
    /// Winding of `h1 - c`, computed directly from `h1` when the test passes.
    pub winding_h1: Option<i64>,
    pub boundary_samples: usize,
    pub n_terms: usize,
    pub verdict: Verdict,
}

impl RoucheCertificate {
    pub fn to_certificate(&self, m: &MapSpec, r: f64, tol: f64) -> Certificate {
        Certificate::new(CertificateKind::Rouche, m, self.verdict)
            .param("R", r)
            .param("c", vec![num(self.c.re), num(self.c.im)])
            .param("M", self.m_param)
            .param("tol", tol)
            .value("w0", vec![num(self.disk.w0.re), num(self.disk.w0.im)])
            .value("delta", num(self.disk.delta))
            .value("A_min", num(self.a_min))
            .value("B_max", num(self.b_max))
            .value("B_max_raw", num(self.b_max_raw))
            .value("winding_h0", self.winding_h0)
            .value("winding_h1", self.winding_h1)
            .value("n_terms", self.n_terms)
            .with_samples(self.boundary_samples)
    }
}

/// `A = |t| (1 + |c|^2) / |w0 + conj(c) t|`, which equals `|h0 - c|` at the
/// disk point with parameter `t` without the cancellation in `z/w - c`.
fn a_at(disk: &DiskSpec, t: Complex64) -> f64 {
    t.norm() * (1.0 + disk.c.norm_sqr()) / (disk.w0 + disk.c.conj() * t).norm()
}

/// `h1 - h0 = (k1 w - k2 z) / (w (w + k2))` as a bounded value.
fn h1_minus_h0(m: &MapSpec, p: &Point, r: f64, n: usize) -> Result<Bounded> {
    let (k1, k2) = k_sums(m, p, r, n)?;
    let num = k1 * p.w - k2 * p.z;
    let den = (k2 + p.w) * p.w;
    num.checked_div(den)
}

fn h1_value(m: &MapSpec, p: &Point, r: f64, n: usize) -> Result<Complex64> {
    let (k1, k2) = k_sums(m, p, r, n)?;
    Ok((p.z + k1.value) / (p.w + k2.value))
}

fn profile_at(m: &MapSpec, disk: &DiskSpec, r: f64, n: usize, samples: usize) -> BoundaryProfile {
    let per_point: Vec<(f64, f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let t = Complex64::from_polar(disk.delta, TAU * i as f64 / samples as f64);
            let a = a_at(disk, t);
            match h1_minus_h0(m, &disk.point(t), r, n) {
                Ok(b) => (a, b.upper_modulus(), b.value.norm()),
                Err(_) => (a, f64::INFINITY, f64::INFINITY),
            }
        })
        .collect();
    let mut out = BoundaryProfile { a_min: f64::INFINITY, b_max: 0.0, b_max_raw: 0.0, samples };
    for (a, b, raw) in per_point {
        out.a_min = out.a_min.min(a);
        out.b_max = out.b_max.max(b);
        out.b_max_raw = out.b_max_raw.max(raw);
    }
    out
}

fn relative_change(coarse: f64, fine: f64) -> f64 {
    if coarse == fine {
        0.0
    } else {
        (fine - coarse).abs() / coarse.abs().max(fine.abs())
    }
}

/// `A_min`, `B_max` on `∂D` from `samples` and `2 samples` points, with one
/// further doubling if either moved by more than 1%. The finest pass wins.
pub fn boundary_profile(m: &MapSpec, disk: &DiskSpec, r: f64, n_terms: usize, samples: usize) -> BoundaryProfile {
    let samples = samples.max(4);
    let coarse = profile_at(m, disk, r, n_terms, samples);
    let fine = profile_at(m, disk, r, n_terms, 2 * samples);
    let moved = relative_change(coarse.a_min, fine.a_min) > REFINE_THRESHOLD
        || relative_change(coarse.b_max, fine.b_max) > REFINE_THRESHOLD;
    if moved {
        profile_at(m, disk, r, n_terms, 4 * samples)
    } else {
        fine
    }
}

fn require_target(c: Complex64) -> Result<()> {
    if c == Complex64::new(0.0, 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter("target c must be finite and nonzero".into()));
    }
    Ok(())
}

/// Runs the Rouché test for `c` on the disk built at parameter `m_param`.
///
/// `h1` is truncated where the series tail is at most `tol`, and that tail is
/// added to `B_max`. The boundary sampling is heuristic; the winding of
/// `h1 - c` is computed independently on pass as a cross-check.
pub fn rouche_certificate(
    m: &MapSpec,
    c: Complex64,
    r: f64,
    m_param: f64,
    samples: usize,
    tol: f64,
) -> Result<RoucheCertificate> {
    require_some_admissible(m, r)?;
    require_target(c)?;
    let disk = rouche_disk(c, m_param, r)?;
    let n_terms = terms_for_tolerance(m, r, tol)?;
    let profile = boundary_profile(m, &disk, r, n_terms, samples);

    let h0 = |theta: f64| {
        let p = disk.boundary_point(theta);
        p.z / p.w
    };
    let winding_h0 = winding_number(h0, c, profile.samples)?;
    let pass = profile.b_max < profile.a_min && winding_h0 >= 1;
    let winding_h1 = if pass {
        let h1 = |theta: f64| {
            h1_value(m, &disk.boundary_point(theta), r, n_terms).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        };
        Some(winding_number(h1, c, profile.samples)?)
    } else {
        None
    };
    Ok(RoucheCertificate {
        c,
        disk,
        m_param,
        a_min: profile.a_min,
        b_max: profile.b_max,
        b_max_raw: profile.b_max_raw,
        winding_h0,
        winding_h1,
        boundary_samples: profile.samples,
        n_terms,
        verdict: Verdict::from_pass(pass),
    })
}

/// Doubles `M` from 2 until the certificate passes or `M` exceeds
/// `2^10 R`. Disk-construction failures at small `M` are retried.
///
/// Returns the passing certificate, or the last failing one, or the last
/// disk-construction error if no disk could be built at all.
pub fn rouche_certificate_auto(
    m: &MapSpec,
    c: Complex64,
    r: f64,
    samples: usize,
    tol: f64,
) -> Result<RoucheCertificate> {
    require_some_admissible(m, r)?;
    require_target(c)?;
    let cap = 1024.0 * r.max(1.0);
    let mut m_param = AUTO_M_START;
    let mut last: Result<RoucheCertificate> = Err(Error::MTooSmall(format!("no M tried below {cap}")));
    while m_param <= cap {
        match rouche_certificate(m, c, r, m_param, samples, tol) {
            Ok(cert) if cert.verdict.passed() => return Ok(cert),
            Ok(cert) => last = Ok(cert),
            Err(e @ (Error::MTooSmall(_) | Error::CentreOutsideRegion)) => {
                if last.is_err() {
                    last = Err(e);
                }
            }
            Err(e) => return Err(e),
        }
        m_param *= 2.0;
    }
    last
}

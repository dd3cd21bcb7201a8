//! The growth sandwich `(m - eps)^n / C <= ‖F^n(P)‖ <= C (M + eps)^n`, tested
//! through `s_n = log‖F^n(P)‖ / n` and the one-step ratios `|z_n / z_{n-1}|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificate::{num, Certificate, CertificateKind, Verdict};
use crate::dynamics::{iterate_orbit, MapSpec, Point};
use crate::error::{Error, Result};
use crate::series::{limit_pair, require_in_region, LimitPair};

/// Radius used for the limit functions that define the band.
pub const LIMIT_TOL: f64 = 1e-12;

/// `m = min_K min(|h1|, |h2|)`, `M = max_K max(|h1|, |h2|)` and `eps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthBand {
    pub m: f64,
    pub big_m: f64,
    pub eps: f64,
}

impl GrowthBand {
    /// `[log(m - eps), log(M + eps)]`.
    pub fn log_band(&self) -> (f64, f64) {
        ((self.m - self.eps).ln(), (self.big_m + self.eps).ln())
    }

    /// `[m - eps, M + eps]`.
    pub fn ratio_band(&self) -> (f64, f64) {
        (self.m - self.eps, self.big_m + self.eps)
    }
}

/// Computes the band from limit pairs. `eps` defaults to `m / 10`.
pub fn growth_band(pairs: &[LimitPair], eps: Option<f64>) -> Result<GrowthBand> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter("growth check needs at least one sample".into()));
    }
    let mut m = f64::INFINITY;
    let mut big_m = 0.0f64;
    for pair in pairs {
        for h in [pair.h1, pair.h2] {
            if !h.certified_nonzero() || !h.value.is_finite() {
                return Err(Error::DegenerateLimit);
            }
            m = m.min(h.value.norm());
            big_m = big_m.max(h.value.norm());
        }
    }
    let eps = eps.unwrap_or(m / 10.0);
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {eps}")));
    }
    if eps >= m {
        return Err(Error::EpsilonTooLarge { eps, m });
    }
    Ok(GrowthBand { m, big_m, eps })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub band: GrowthBand,
    /// `s[i][n - 1] = log‖F^n(P_i)‖ / n` for `n = 1..=n_max`.
    pub s: Vec<Vec<f64>>,
    /// `ratios[i][n - 1] = |z_n / z_{n-1}|`.
    pub ratios: Vec<Vec<f64>>,
    /// First `n` from which every `s_n` and every ratio of every sample stays
    /// in its band up to `n_max`.
    pub n0: Option<usize>,
    pub n_max: usize,
    pub verdict: Verdict,
}

impl GrowthReport {
    pub fn to_certificate(&self, m: &MapSpec, r: f64) -> Certificate {
        let (lo, hi) = self.band.log_band();
        let last_s: Vec<_> = self.s.iter().map(|s| s.last().copied().map(num)).collect();
        Certificate::new(CertificateKind::Growth, m, self.verdict)
            .param("R", r)
            .param("epsilon", self.band.eps)
            .param("n_max", self.n_max)
            .value("m", num(self.band.m))
            .value("M", num(self.band.big_m))
            .value("log_band", vec![num(lo), num(hi)])
            .value("n0", self.n0)
            .value("s_last", last_s)
            .with_samples(self.s.len())
    }
}

/// Runs the growth sandwich on `samples ⊂ W_R`.
///
/// Passes iff the first index `n0` from which all `s_n` lie in
/// `[log(m - eps), log(M + eps)]` and all ratios lie in `[m - eps, M + eps]`
/// satisfies `n0 <= n_max / 2`.
pub fn growth_check(m: &MapSpec, samples: &[Point], r: f64, eps: Option<f64>, n_max: usize) -> Result<GrowthReport> {
    for p in samples {
        require_in_region(p, r)?;
    }
    let pairs = samples.par_iter().map(|p| limit_pair(m, p, r, LIMIT_TOL)).collect::<Result<Vec<_>>>()?;
    let band = growth_band(&pairs, eps)?;
    let (lo, hi) = band.log_band();
    let (rlo, rhi) = band.ratio_band();

    let mut s = Vec::with_capacity(samples.len());
    let mut ratios = Vec::with_capacity(samples.len());
    let mut ok = vec![true; n_max + 1];
    for p in samples {
        let orbit = iterate_orbit(m, p, n_max);
        let pts = orbit.points();
        let s_i: Vec<f64> = (1..pts.len()).map(|n| pts[n].norm().ln() / n as f64).collect();
        let r_i: Vec<f64> = (1..pts.len()).map(|n| (pts[n].z / pts[n - 1].z).norm()).collect();
        for (n, ok_n) in ok.iter_mut().enumerate().skip(1) {
            let inside = match (s_i.get(n - 1), r_i.get(n - 1)) {
                (Some(&sn), Some(&rn)) => (lo..=hi).contains(&sn) && (rlo..=rhi).contains(&rn),
                _ => false,
            };
            *ok_n &= inside;
        }
        s.push(s_i);
        ratios.push(r_i);
    }
    let mut n0 = None;
    for n in (1..=n_max).rev() {
        if !ok[n] {
            break;
        }
        n0 = Some(n);
    }
    let verdict = Verdict::from_pass(matches!(n0, Some(n) if n <= n_max / 2));
    Ok(GrowthReport { band, s, ratios, n0, n_max, verdict })
}

use rayon::prelude::*;
use serde_json::json;

use crate::certificate::{num, Certificate, CertificateKind, Verdict};
use crate::dynamics::{apply, require_admissible, MapSpec};
use crate::error::Result;
use crate::sampling::RegionSampler;

/// Checks on seeded samples of `W_R` that `F(P) ∈ W_R` with
/// `Re z_1 > R + eps`.
///
/// The reported margin is `min(Re z_1 - R - eps, Re w_1 - R)` over all samples;
/// the verdict is pass iff it is positive.
pub fn invariance_check(m: &MapSpec, r: f64, eps: f64, samples: usize, seed: u64) -> Result<Certificate> {
    require_admissible(m, r, eps)?;
    let points = RegionSampler::new(seed, r).points(samples);
    let margins: Vec<Option<f64>> =
        points.par_iter().map(|p| apply(m, p).ok().map(|q| (q.z.re - (r + eps)).min(q.w.re - r))).collect();

    let mut min_margin = f64::INFINITY;
    let mut failures = 0usize;
    let mut counterexamples = Vec::new();
    for (p, margin) in points.iter().zip(&margins) {
        let ok = matches!(margin, Some(x) if *x > 0.0);
        if let Some(x) = margin {
            min_margin = min_margin.min(*x);
        }
        if !ok {
            failures += 1;
            if counterexamples.len() < 10 {
                counterexamples.push(json!({"z": [p.z.re, p.z.im], "w": [p.w.re, p.w.im]}));
            }
        }
    }
    Ok(Certificate::new(CertificateKind::Invariance, m, Verdict::from_pass(failures == 0))
        .param("R", r)
        .param("epsilon", eps)
        .value("min_margin", num(min_margin))
        .value("failures", failures)
        .value("counterexamples", json!(counterexamples))
        .with_samples(samples)
        .with_seed(seed))
}

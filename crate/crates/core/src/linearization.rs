//! Conjugacy of `F` to the linear map `L(z, w) = (a w, z)`.
//!
//! `φ_n = L^{-n} ∘ F^n` has the closed partial-sum form
//!
//! ```text
//! φ_{2k}   = (z + Σ_{j<=k} a^{-j} f(z_{2j-1}), w + Σ_{j<=k}   a^{-j} f(z_{2j-2}))
//! φ_{2k+1} = (z + Σ_{j<=k} a^{-j} f(z_{2j-1}), w + Σ_{j<=k+1} a^{-j} f(z_{2j-2}))
//! ```
//!
//! and its limit `φ = id + (k1, k2)` on `W_R`. Off `W_R`, `φ` is extended
//! along the forward orbit as `L^{-k} ∘ φ ∘ F^k`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bounded::Bounded;
use crate::certificate::{num, Certificate, CertificateKind, Verdict};
use crate::dynamics::{apply, f_eval, f_sup_bound, in_region, iterate, iterate_orbit, MapSpec, Point, Region};
use crate::error::{Error, Overflow, Result};
use crate::sampling::RegionSampler;
use crate::series::{delta_bound, k_sums, require_in_region, terms_for_tolerance};

/// Forward steps searched for entry into `W_R` before giving up.
pub const DEFAULT_ENTRY_LIMIT: usize = 1000;
/// Iteration cap for the fixed-point preimage solve.
pub const FIXED_POINT_MAX_ITER: usize = 20;

/// A point of `C^2` with a radius on each coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundedPoint {
    pub z: Bounded,
    pub w: Bounded,
}

impl BoundedPoint {
    pub fn value(&self) -> Point {
        Point::new(self.z.value, self.w.value)
    }

    /// Radius of the enclosing ball in the Euclidean norm.
    pub fn err(&self) -> f64 {
        self.z.err.hypot(self.w.err)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyResult {
    pub phi: BoundedPoint,
    pub n_used: usize,
    /// `k` with `φ(P) = L^{-k}(φ(F^k(P)))`; zero when `P ∈ W_R`.
    pub extension_depth: usize,
}

/// `L^n(P)` for `n ∈ Z` via the parity split `n = 2k + r`:
/// `L^{2k}(z, w) = a^k (z, w)` and `L^{2k+1}(z, w) = (a^{k+1} w, a^k z)`.
pub fn linear_apply(a: f64, p: &Point, n: i64) -> Result<Point, Overflow> {
    let (k, odd) = (n.div_euclid(2), n.rem_euclid(2) == 1);
    let s = a.powf(k as f64);
    let q = if odd { Point::new(p.w * (a * s), p.z * s) } else { Point::new(p.z * s, p.w * s) };
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Overflow)
    }
}

fn linear_apply_bounded(a: f64, p: &BoundedPoint, n: i64) -> Result<BoundedPoint, Overflow> {
    let (k, odd) = (n.div_euclid(2), n.rem_euclid(2) == 1);
    let s = a.powf(k as f64);
    let q = if odd {
        BoundedPoint { z: p.w.scale(a * s), w: p.z.scale(s) }
    } else {
        BoundedPoint { z: p.z.scale(s), w: p.w.scale(s) }
    };
    if q.value().is_finite() && q.z.err.is_finite() && q.w.err.is_finite() {
        Ok(q)
    } else {
        Err(Overflow)
    }
}

/// `φ_n(P)` from the partial-sum formulas.
pub fn phi_n(m: &MapSpec, p: &Point, n: usize) -> Result<Point, Overflow> {
    if n == 0 {
        return Ok(*p);
    }
    let orbit = iterate_orbit(m, p, n - 1);
    if orbit.stopped_at().is_some() {
        return Err(Overflow);
    }
    let pts = orbit.points();
    let inv_a = 1.0 / m.a();
    let (mut s1, mut s2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    let mut coeff = inv_a;
    for j in 1..=n.div_ceil(2) {
        s2 += f_eval(m, pts[2 * j - 2].z)? * coeff;
        if j <= n / 2 {
            s1 += f_eval(m, pts[2 * j - 1].z)? * coeff;
        }
        coeff *= inv_a;
    }
    let q = Point::new(p.z + s1, p.w + s2);
    if q.is_finite() {
        Ok(q)
    } else {
        Err(Overflow)
    }
}

/// `φ_n(P)` by literally composing `L^{-n}` with `F^n`.
pub fn phi_n_composed(m: &MapSpec, p: &Point, n: usize) -> Result<Point, Overflow> {
    let q = iterate(m, p, n as i64)?;
    linear_apply(m.a(), &q, -(n as i64))
}

fn phi_in_region(m: &MapSpec, p: &Point, r: f64, n: usize) -> Result<BoundedPoint> {
    let (k1, k2) = k_sums(m, p, r, n)?;
    Ok(BoundedPoint { z: k1 + p.z, w: k2 + p.w })
}

/// `φ(P)` with each coordinate radius at most `tol`, searching up to
/// [`DEFAULT_ENTRY_LIMIT`] forward steps for entry into `W_R`.
pub fn phi(m: &MapSpec, p: &Point, r: f64, tol: f64) -> Result<ConjugacyResult> {
    phi_with_limit(m, p, r, tol, DEFAULT_ENTRY_LIMIT)
}

pub fn phi_with_limit(m: &MapSpec, p: &Point, r: f64, tol: f64, n_max: usize) -> Result<ConjugacyResult> {
    let region = Region::new(r)?;
    let n = terms_for_tolerance(m, r, tol)?;
    let mut q = *p;
    for k in 0..=n_max {
        if in_region(&q, &region) {
            let inside = phi_in_region(m, &q, r, n)?;
            let phi = linear_apply_bounded(m.a(), &inside, -(k as i64))?;
            return Ok(ConjugacyResult { phi, n_used: n, extension_depth: k });
        }
        if k < n_max {
            q = match apply(m, &q) {
                Ok(next) => next,
                Err(Overflow) => break,
            };
        }
    }
    Err(Error::NotAbsorbed(n_max))
}

/// `‖φ(F(P)) − L(φ(P))‖` together with the radius it is certified against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residual {
    pub norm: f64,
    /// `err(φ(F(P))) + err(L(φ(P)))`.
    pub err: f64,
}

pub fn conjugacy_residual(m: &MapSpec, p: &Point, r: f64, tol: f64) -> Result<Residual> {
    let here = phi(m, p, r, tol)?;
    let image = apply(m, p)?;
    let there = phi(m, &image, r, tol)?;
    let pushed = linear_apply_bounded(m.a(), &here.phi, 1)?;
    Ok(Residual { norm: there.phi.value().distance(&pushed.value()), err: there.phi.err() + pushed.err() })
}

/// Solves `φ(P) = Q` for `P ∈ W_R` by iterating `P ← Q − (k1(P), k2(P))`.
///
/// Returns the solution and the number of iterations used.
pub fn solve_preimage(m: &MapSpec, q: &Point, r: f64, tol: f64) -> Result<(Point, usize)> {
    let n = terms_for_tolerance(m, r, tol)?;
    let step_tol = tol.max(1e-15 * (1.0 + q.norm()));
    let mut p = *q;
    for iter in 1..=FIXED_POINT_MAX_ITER {
        let (k1, k2) = k_sums(m, &p, r, n)?;
        let next = Point::new(q.z - k1.value, q.w - k2.value);
        let step = next.distance(&p);
        p = next;
        if step <= step_tol {
            require_in_region(&p, r)?;
            return Ok((p, iter));
        }
    }
    Err(Error::ToleranceUnreachable { tol: step_tol, cap: FIXED_POINT_MAX_ITER })
}

/// Checks `φ ∘ F = L ∘ φ` on seeded samples of `W_R`, and that the two
/// routes to `φ_n` (partial sums and `L^{-n} ∘ F^n`) agree for
/// `n = 1..=max_route_n`.
///
/// Passes iff every residual and every route gap is at most `threshold`.
pub fn conjugacy_check(
    m: &MapSpec,
    r: f64,
    samples: usize,
    seed: u64,
    tol: f64,
    max_route_n: usize,
    threshold: f64,
) -> Result<Certificate> {
    Region::new(r)?;
    let points = RegionSampler::new(seed, r).points(samples);
    let per_point: Vec<Result<(Residual, f64)>> = points
        .par_iter()
        .map(|p| {
            let residual = conjugacy_residual(m, p, r, tol)?;
            let mut gap = 0.0f64;
            for n in 1..=max_route_n {
                gap = gap.max(phi_n(m, p, n)?.distance(&phi_n_composed(m, p, n)?));
            }
            Ok((residual, gap))
        })
        .collect();

    let (mut max_residual, mut max_err, mut max_gap) = (0.0f64, 0.0f64, 0.0f64);
    let mut failures = 0usize;
    let mut counterexamples = Vec::new();
    for (p, res) in points.iter().zip(&per_point) {
        let detail = match res {
            Ok((residual, gap)) => {
                max_residual = max_residual.max(residual.norm);
                max_err = max_err.max(residual.err);
                max_gap = max_gap.max(*gap);
                if residual.norm <= threshold && *gap <= threshold {
                    continue;
                }
                format!("residual {:e}, route gap {gap:e}", residual.norm)
            }
            Err(e) => e.to_string(),
        };
        failures += 1;
        if counterexamples.len() < MAX_COUNTEREXAMPLES {
            counterexamples.push(counterexample("conjugacy", p, detail));
        }
    }
    Ok(Certificate::new(CertificateKind::Conjugacy, m, Verdict::from_pass(failures == 0))
        .param("R", r)
        .param("tol", tol)
        .param("threshold", threshold)
        .param("max_route_n", max_route_n)
        .value("max_residual", num(max_residual))
        .value("max_residual_err", num(max_err))
        .value("max_route_gap", num(max_gap))
        .value("failures", failures)
        .value("counterexamples", json!(counterexamples))
        .with_samples(samples)
        .with_seed(seed))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct Counterexample {
    stage: &'static str,
    z: [f64; 2],
    w: [f64; 2],
    detail: String,
}

fn counterexample(stage: &'static str, p: &Point, detail: String) -> Counterexample {
    Counterexample { stage, z: [p.z.re, p.z.im], w: [p.w.re, p.w.im], detail }
}

const MAX_COUNTEREXAMPLES: usize = 10;

/// Checks `W_{R+Δ̄} ⊂ φ(W_R) ⊂ W_{R−Δ̄}` on seeded samples.
///
/// The right inclusion is tested on images of samples of `W_R`; the left one
/// by solving `φ(P) = Q` for samples `Q` of `W_{R+Δ̄}` and checking that the
/// solution lies in `W_R` and reproduces `Q` within its certified radius.
pub fn sandwich_phi_w(m: &MapSpec, r: f64, samples: usize, seed: u64, tol: f64) -> Result<Certificate> {
    let delta = delta_bound(m, r);
    if !(f_sup_bound(m, r) < (m.a() - 1.0) * r) {
        return Err(Error::InvalidParameter(format!("R = {r} is not admissible for any epsilon > 0")));
    }
    if !(r > delta) {
        return Err(Error::InvalidParameter(format!("R = {r} must exceed the delta bound {delta}")));
    }
    let n = terms_for_tolerance(m, r, tol)?;

    let inner = RegionSampler::new(seed, r).points(samples);
    let forward: Vec<Result<f64>> = inner
        .par_iter()
        .map(|p| {
            let img = phi_in_region(m, p, r, n)?;
            let lower = (img.z.value.re - img.z.err).min(img.w.value.re - img.w.err);
            Ok(lower - (r - delta))
        })
        .collect();

    let outer = RegionSampler::new(seed.wrapping_add(1), r + delta).points(samples);
    let backward: Vec<Result<(usize, f64)>> = outer
        .par_iter()
        .map(|q| {
            let (p, iters) = solve_preimage(m, q, r, tol)?;
            let img = phi_in_region(m, &p, r, n)?;
            let miss = img.value().distance(q) - img.err();
            Ok((iters, miss))
        })
        .collect();

    let mut counterexamples = Vec::new();
    let mut min_margin = f64::INFINITY;
    for (p, res) in inner.iter().zip(&forward) {
        match res {
            Ok(margin) => {
                min_margin = min_margin.min(*margin);
                if *margin <= 0.0 && counterexamples.len() < MAX_COUNTEREXAMPLES {
                    counterexamples.push(counterexample("image", p, format!("margin {margin:e}")));
                }
            }
            Err(e) if counterexamples.len() < MAX_COUNTEREXAMPLES => {
                counterexamples.push(counterexample("image", p, e.to_string()));
            }
            Err(_) => {}
        }
    }
    let forward_ok = forward.iter().all(|r| matches!(r, Ok(m) if *m > 0.0));

    let mut max_iters = 0usize;
    let mut max_miss = f64::NEG_INFINITY;
    for (q, res) in outer.iter().zip(&backward) {
        match res {
            Ok((iters, miss)) => {
                max_iters = max_iters.max(*iters);
                max_miss = max_miss.max(*miss);
                // Rounding in |φ(P) − Q| is far below this allowance.
                if *miss > 1e-12 * (1.0 + q.norm()) && counterexamples.len() < MAX_COUNTEREXAMPLES {
                    counterexamples.push(counterexample("preimage", q, format!("miss {miss:e}")));
                }
            }
            Err(e) if counterexamples.len() < MAX_COUNTEREXAMPLES => {
                counterexamples.push(counterexample("preimage", q, e.to_string()));
            }
            Err(_) => {}
        }
    }
    let backward_ok =
        backward.iter().zip(&outer).all(|(r, q)| matches!(r, Ok((_, miss)) if *miss <= 1e-12 * (1.0 + q.norm())));

    Ok(Certificate::new(CertificateKind::Sandwich, m, Verdict::from_pass(forward_ok && backward_ok))
        .param("R", r)
        .param("tol", tol)
        .value("delta_bar", num(delta))
        .value("n_terms", n)
        .value("image_inclusion", forward_ok)
        .value("preimage_inclusion", backward_ok)
        .value("min_image_margin", num(min_margin))
        .value("max_fixed_point_iterations", max_iters)
        .value("max_preimage_miss", num(max_miss))
        .value("counterexamples", json!(counterexamples))
        .with_samples(samples)
        .with_seed(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::make_map;
    use crate::series::tail_bound;

    fn expz() -> MapSpec {
        make_map(2.0, &[(1.0, 1.0)]).unwrap()
    }

    fn linear() -> MapSpec {
        make_map(2.0, &[]).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn linear_apply_closed_form() {
        let p = Point::new(c(1.0, 2.0), c(-3.0, 0.5));
        assert_eq!(linear_apply(2.0, &p, 0).unwrap(), p);
        assert_eq!(linear_apply(2.0, &p, 2).unwrap(), Point::new(p.z * 2.0, p.w * 2.0));
        assert_eq!(linear_apply(2.0, &p, 1).unwrap(), Point::new(p.w * 2.0, p.z));
        assert_eq!(linear_apply(2.0, &p, -1).unwrap(), Point::new(p.w, p.z / 2.0));
        // L^{-3}(z, w) = (w / a, z / a^2)
        assert_eq!(linear_apply(2.0, &p, -3).unwrap(), Point::new(p.w / 2.0, p.z / 4.0));
        for n in -7..=7 {
            let there = linear_apply(2.0, &p, n).unwrap();
            assert_eq!(linear_apply(2.0, &there, -n).unwrap(), p);
        }
        // Matches n-fold iteration of the linear map.
        let l = linear();
        for n in 0..9 {
            assert_eq!(linear_apply(2.0, &p, n).unwrap(), iterate(&l, &p, n).unwrap());
        }
    }

    #[test]
    fn phi_n_linear_is_identity() {
        let p = Point::new(c(4.0, 1.0), c(2.0, -1.0));
        for n in 0..12 {
            assert_eq!(phi_n(&linear(), &p, n).unwrap(), p);
        }
        assert_eq!(phi_n(&expz(), &p, 0).unwrap(), p);
    }

    #[test]
    fn phi_n_two_routes_agree() {
        let p = Point::real(5.0, 5.0);
        for n in 0..=40 {
            let sums = phi_n(&expz(), &p, n).unwrap();
            let composed = phi_n_composed(&expz(), &p, n).unwrap();
            assert!(sums.distance(&composed) < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn phi_inside_region() {
        let lin = phi(&linear(), &Point::real(4.0, 2.0), 1.0, 1e-12).unwrap();
        assert_eq!(lin.phi.value(), Point::real(4.0, 2.0));
        assert_eq!(lin.phi.err(), 0.0);

        let p = Point::real(5.0, 5.0);
        let res = phi(&expz(), &p, 4.9, 1e-12).unwrap();
        assert_eq!(res.extension_depth, 0);
        let (k1, k2) = k_sums(&expz(), &p, 4.9, res.n_used).unwrap();
        assert!((res.phi.z.value - p.z - k1.value).norm() < 1e-15);
        assert!((res.phi.w.value - p.w - k2.value).norm() < 1e-15);
        let d = delta_bound(&expz(), 4.9);
        assert!(k1.value.norm() < d && k2.value.norm() < d);
        assert_eq!(res.phi.z.err, tail_bound(&expz(), 4.9, res.n_used));
    }

    #[test]
    fn phi_extension_satisfies_functional_equation() {
        let m = expz();
        let q = Point::real(5.0, 5.0);
        let p = apply_inverse_checked(&m, &q);
        let at_p = phi(&m, &p, 4.9, 1e-12).unwrap();
        assert_eq!(at_p.extension_depth, 1);
        let at_q = phi(&m, &q, 4.9, 1e-12).unwrap();
        let pushed = linear_apply(2.0, &at_p.phi.value(), 1).unwrap();
        assert!(at_q.phi.value().distance(&pushed) < 1e-12);
    }

    fn apply_inverse_checked(m: &MapSpec, q: &Point) -> Point {
        crate::dynamics::apply_inverse(m, q).unwrap()
    }

    #[test]
    fn phi_reports_non_entry() {
        let err = phi_with_limit(&expz(), &Point::real(-100.0, -100.0), 5.0, 1e-10, 50).unwrap_err();
        assert!(matches!(err, Error::NotAbsorbed(50)));
    }

    #[test]
    fn residual_values() {
        let lin = conjugacy_residual(&linear(), &Point::real(4.0, 2.0), 1.0, 1e-10).unwrap();
        assert_eq!(lin.norm, 0.0);
        let p = Point::real(5.0, 5.0);
        let res = conjugacy_residual(&expz(), &p, 4.9, 1e-10).unwrap();
        assert!(res.norm < 1e-9);
        let moved = conjugacy_residual(&expz(), &apply(&expz(), &p).unwrap(), 4.9, 1e-10).unwrap();
        assert!(moved.norm <= 2.0 * res.err.max(res.norm) + 2.0 * moved.err);
    }

    #[test]
    fn preimage_solve_converges_fast() {
        let q = Point::new(c(5.02, 3.0), c(7.0, -100.0));
        let (p, iters) = solve_preimage(&expz(), &q, 5.0, 1e-12).unwrap();
        assert!(iters < FIXED_POINT_MAX_ITER);
        let img = phi(&expz(), &p, 5.0, 1e-12).unwrap();
        assert!(img.phi.value().distance(&q) < 1e-12);
    }

    #[test]
    fn sandwich_linear_and_exponential() {
        let lin = sandwich_phi_w(&linear(), 1.0, 50, 1, 1e-12).unwrap();
        assert!(lin.verdict.passed());
        assert_eq!(lin.values["delta_bar"], 0.0);
        let cert = sandwich_phi_w(&expz(), 5.0, 200, 1, 1e-12).unwrap();
        assert!(cert.verdict.passed(), "{}", cert.to_json());
        assert!(cert.values["max_fixed_point_iterations"].as_u64().unwrap() < 20);
    }

    #[test]
    fn conjugacy_check_exponential() {
        let cert = conjugacy_check(&expz(), 5.0, 200, 3, 1e-12, 40, 1e-9).unwrap();
        assert!(cert.verdict.passed(), "{}", cert.to_json());
        let linear = conjugacy_check(&linear(), 1.0, 50, 3, 1e-12, 10, 1e-9).unwrap();
        assert_eq!(linear.values["max_residual"], 0.0);
    }
}

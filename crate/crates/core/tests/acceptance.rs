//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Every criterion is evaluated as stated. The single test asserts that the
//! set of failing criteria is exactly `KNOWN_UNATTAINABLE`, so a regression
//! and an unexpected pass both break the build.
//!
//! Each criterion also has a wall-clock limit, enforced in every build
//! profile.

use std::f64::consts::LN_2;
use std::io::Write;
use std::time::{Duration, Instant};

use henon_core::certify::DEFAULT_BOUNDARY_SAMPLES;
use henon_core::{
    absorbing_membership, apply, conjugacy_check, delta_bound, growth_check, invariance_check, iterate, k_sums,
    lemma_disk_radius, limit_pair, make_map, phi, ratio_sequence, render_slice, rouche_certificate_auto, rouche_disk,
    sample_region, sandwich_phi_w, u_n_diagnostics, Complex64, Error, MapSpec, Plane, Point, SliceSpec, Window,
};

/// Criteria that cannot hold as stated, with the reason.
const KNOWN_UNATTAINABLE: &[(u32, &str)] = &[
    (
        7,
        "c = -1: h1 has positive real numerator and denominator on W_R once R exceeds the delta bound, \
         so no negative real lies in h1(W_R); no disk centre (c w0, w0) with c < 0 lies in W_R",
    ),
    (
        10,
        "u_n is monotone within each parity class, but u_{2k+1}/u_{2k} tends to \
         a Re(w0+k2)/Re(z0+k1) * 2k/(2k+1), which is below 1 for generic samples",
    ),
];

const SEED: u64 = 20_240_601;

struct Outcome {
    id: u32,
    name: &'static str,
    holds: bool,
    detail: String,
    elapsed: Duration,
    limit: Duration,
}

impl Outcome {
    fn within_time(&self) -> bool {
        self.elapsed <= self.limit
    }

    fn passed(&self) -> bool {
        self.holds && self.within_time()
    }
}

fn run(id: u32, name: &'static str, limit_secs: u64, check: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (holds, detail) = check();
    Outcome { id, name, holds, detail, elapsed: start.elapsed(), limit: Duration::from_secs(limit_secs) }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn expz() -> MapSpec {
    make_map(2.0, &[(1.0, 1.0)]).unwrap()
}

fn linear() -> MapSpec {
    make_map(2.0, &[]).unwrap()
}

fn criterion_1() -> (bool, String) {
    let m = linear();
    let p = Point::real(4.0, 2.0);
    let pair = limit_pair(&m, &p, 1.0, 1e-12).unwrap();
    let exact =
        pair.h1.value == c(2.0, 0.0) && pair.h2.value == c(1.0, 0.0) && pair.h1.err == 0.0 && pair.h2.err == 0.0;

    let identity = sample_region(SEED, 1.0, 50).iter().chain([Point::real(0.5, 3.0)].iter()).all(|q| {
        let r = phi(&m, q, 1.0, 1e-12).unwrap();
        r.phi.value().distance(q) <= 1e-12 * q.norm() && r.phi.err() == 0.0
    });

    let report = growth_check(&m, &[p], 1.0, None, 60).unwrap();
    let half_log_a = 0.5 * LN_2;
    let worst =
        report.s[0].iter().enumerate().map(|(i, s)| (s - half_log_a).abs() * (i + 1) as f64).fold(0.0, f64::max);
    let growth = worst <= 17f64.ln();
    (
        exact && identity && growth,
        format!(
            "h1={} h2={} errs=0:{exact} phi=id:{identity} max n|s_n-log√2|={worst:.4} <= ln17",
            pair.h1.value, pair.h2.value
        ),
    )
}

fn criterion_2() -> (bool, String) {
    let cert = invariance_check(&expz(), 5.0, 0.1, 1000, SEED).unwrap();
    let margin = cert.values["min_margin"].as_f64().unwrap();
    (cert.verdict.passed() && margin > 0.0, format!("1000 samples, min margin {margin:.3e}"))
}

fn criterion_3() -> (bool, String) {
    let m = expz();
    let mut worst = 0.0f64;
    let mut worst_ratio = 0.0f64;
    let mut ok = true;
    for p in sample_region(SEED, 5.0, 100) {
        let pair = limit_pair(&m, &p, 5.0, 1e-10).unwrap();
        let gap = (pair.h1.value * pair.h2.value - 2.0).norm();
        ok &= gap <= pair.product_err() && gap <= 1e-9;
        worst = worst.max(gap);
        worst_ratio = worst_ratio.max(gap / pair.product_err());
    }
    (ok, format!("max |h1 h2 - a| = {worst:.3e}, max ratio to propagated err {worst_ratio:.3e}"))
}

fn criterion_4() -> (bool, String) {
    let m = expz();
    let mut worst_even = 0.0f64;
    let mut worst_odd = 0.0f64;
    let mut ok = true;
    for p in sample_region(SEED, 5.0, 100) {
        let pair = limit_pair(&m, &p, 5.0, 1e-12).unwrap();
        let ratios = ratio_sequence(&m, &p, 101);
        let even = (ratios[100].unwrap() - pair.h1.value).norm();
        let odd = (ratios[101].unwrap() - 2.0 / pair.h1.value).norm();
        ok &= even <= pair.h1.err + 1e-8 && odd <= 1e-8;
        // The even (odd) subsequence approaches h1 (h2) at least geometrically.
        let e40 = (ratios[40].unwrap() - pair.h1.value).norm();
        let o41 = (ratios[41].unwrap() - pair.h2.value).norm();
        ok &= e40 <= 1e-6 && o41 <= 1e-6;
        worst_even = worst_even.max(even);
        worst_odd = worst_odd.max(odd);
    }
    (ok, format!("max |z100/w100 - h1| = {worst_even:.3e}, max |z101/w101 - a/h1| = {worst_odd:.3e}"))
}

fn criterion_5() -> (bool, String) {
    let report = growth_check(&expz(), &[Point::real(6.0, 6.0)], 5.0, None, 60).unwrap();
    let (lo, hi) = report.band.log_band();
    let (rlo, rhi) = report.band.ratio_band();
    let s_ok = report.s[0][9..].iter().all(|s| (lo..=hi).contains(s));
    let r_ok = report.ratios[0][9..].iter().all(|x| (rlo..=rhi).contains(x));
    (
        s_ok && r_ok && report.s[0].len() == 60,
        format!("band [{lo:.4}, {hi:.4}], ratios [{rlo:.4}, {rhi:.4}], n0 = {:?}", report.n0),
    )
}

fn criterion_6() -> (bool, String) {
    let cert = conjugacy_check(&expz(), 5.0, 1000, SEED, 1e-12, 40, 1e-9).unwrap();
    (
        cert.verdict.passed(),
        format!(
            "max residual {}, max route gap {} (n <= 40)",
            cert.values["max_residual"], cert.values["max_route_gap"]
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let m = expz();
    let targets = [c(1.0, 0.0), c(2.0, 0.0), c(-1.0, 0.0), c(1.0, 1.0), c(-3.0, 0.5), c(0.0, 0.1)];
    let mut ok = true;
    let mut parts = Vec::new();
    for target in targets {
        match rouche_certificate_auto(&m, target, 5.0, DEFAULT_BOUNDARY_SAMPLES, 1e-12) {
            Ok(cert) => {
                let pass = cert.verdict.passed() && cert.winding_h0 >= 1 && cert.winding_h1 == Some(cert.winding_h0);
                ok &= pass;
                parts.push(format!(
                    "{target}: {} M={} wind={}/{:?}",
                    if pass { "pass" } else { "fail" },
                    cert.m_param,
                    cert.winding_h0,
                    cert.winding_h1
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{target}: fail ({e})"));
            }
        }
    }
    (ok, parts.join("; "))
}

fn criterion_8() -> (bool, String) {
    let (m_param, r) = (10.0, 5.0);
    let d1 = lemma_disk_radius(c(1.0, 0.0), c(2.0 * m_param + r, 0.0), r).unwrap();
    let di = lemma_disk_radius(c(0.0, 1.0), c(m_param + r, -(2.0 * m_param + r)), r).unwrap();
    let worked = (d1 - 20.0).abs() <= 1e-12 && (di - 10.0).abs() <= 1e-12;

    let targets = [c(1.0, 0.0), c(2.0, 0.0), c(1.0, 1.0), c(-3.0, 0.5), c(0.0, 0.1), c(0.0, 1.0), c(0.5, -2.0)];
    let mut disks = 0;
    let mut contained = true;
    for target in targets {
        for k in 1..=10 {
            if let Ok(disk) = rouche_disk(target, 2f64.powi(k), r) {
                disks += 1;
                contained &= disk.boundary_inside(r, 512);
            }
        }
    }
    (
        worked && contained && disks > 0,
        format!("δ(c=1)={d1}, δ(c=i)={di}, {disks} disks x 512 boundary points inside W_5: {contained}"),
    )
}

fn criterion_9() -> (bool, String) {
    let m = expz();
    let q = Point::real(6.0, 6.0);
    let mut points = Vec::new();
    let mut reentry = true;
    let mut indices = Vec::new();
    for k in 0..=10 {
        let p = iterate(&m, &q, -k).unwrap();
        let v = absorbing_membership(&m, &p, 5.0, 100).unwrap();
        reentry &= matches!(v.entry_index, Some(n) if n <= k as usize);
        indices.push(v.entry_index);
        points.push(p);
    }
    // Consistency on the preimages and on a box around W_5.
    let box_points = (0..400).map(|i| {
        let (x, y) = ((i % 20) as f64 - 5.0, (i / 20) as f64 - 5.0);
        Point::new(c(x, 0.3 * y), c(y + 3.0, -0.2 * x))
    });
    let mut consistent = true;
    let mut members = 0;
    for p in points.iter().copied().chain(box_points) {
        let v = absorbing_membership(&m, &p, 5.0, 100).unwrap();
        if let Some(n) = v.entry_index {
            members += 1;
            let next = absorbing_membership(&m, &apply(&m, &p).unwrap(), 5.0, 100).unwrap();
            consistent &= next.entry_index == Some(n.saturating_sub(1));
        }
    }
    (
        reentry && consistent,
        format!("entry indices for k=0..10: {indices:?}; {members} members index-consistent: {consistent}"),
    )
}

fn criterion_10() -> (bool, String) {
    let m = expz();
    let r = 5.0;
    let gap = r - delta_bound(&m, r);
    let mut bound_ok = true;
    let mut monotone = 0;
    let mut parity_monotone = 0;
    let samples = sample_region(SEED, r, 100);
    for p in &samples {
        let u = u_n_diagnostics(&m, p, 40);
        let get = |n: usize| u.get(n).unwrap();
        for n in 2..=40 {
            bound_ok &= get(n) <= -(2f64.powi((n / 2) as i32)) * gap / n as f64;
        }
        if (4..40).all(|n| get(n + 1) < get(n)) {
            monotone += 1;
        }
        if (4..=38).all(|n| get(n + 2) < get(n)) {
            parity_monotone += 1;
        }
    }
    (
        bound_ok && monotone == samples.len(),
        format!(
            "bound holds: {bound_ok}; u_n monotone past n=4 on {monotone}/100; per parity on {parity_monotone}/100"
        ),
    )
}

fn criterion_11() -> (bool, String) {
    let m = expz();
    let delta = delta_bound(&m, 5.0);
    let closed = (-5.0f64).exp() / (2f64.sqrt() - 1.0);
    let cert = sandwich_phi_w(&m, 5.0, 1000, SEED, 1e-12).unwrap();
    (
        cert.verdict.passed() && (delta - closed).abs() <= 1e-15,
        format!(
            "Δ̄ = {delta:.6e}; image margin {}; max preimage miss {}; max iterations {}",
            cert.values["min_image_margin"],
            cert.values["max_preimage_miss"],
            cert.values["max_fixed_point_iterations"]
        ),
    )
}

fn criterion_12() -> (bool, String) {
    let m = expz();
    let spec = SliceSpec {
        plane: Plane::ReZReW { im_z: 0.5, im_w: -0.5 },
        window: Window { min_x: -10.0, max_x: 10.0, min_y: -10.0, max_y: 10.0 },
        width: 512,
        height: 512,
    };
    let start = Instant::now();
    let first = render_slice(&m, 5.0, &spec, 100, true).unwrap().to_ppm();
    let once = start.elapsed();
    let second = render_slice(&m, 5.0, &spec, 100, true).unwrap().to_ppm();
    let header_ok = first.starts_with(b"P6\n512 512\n255\n") && first.len() == 15 + 3 * 512 * 512;
    let fast = once.as_secs_f64() < 30.0;
    (
        first == second && header_ok && fast,
        format!("512x512 n_max=100 in {:.2}s, byte-identical: {}", once.as_secs_f64(), first == second),
    )
}

#[test]
fn acceptance() {
    let outcomes = vec![
        run(1, "linear oracle", 1, criterion_1),
        run(2, "invariance of W_5", 1, criterion_2),
        run(3, "limit identity h1 h2 = a", 5, criterion_3),
        run(4, "series vs iteration", 5, criterion_4),
        run(5, "growth sandwich", 1, criterion_5),
        run(6, "conjugacy residual", 5, criterion_6),
        run(7, "Rouché surjectivity", 30, criterion_7),
        run(8, "disks inside W_R", 1, criterion_8),
        run(9, "absorbing membership", 1, criterion_9),
        run(10, "u_n diagnostics", 1, criterion_10),
        run(11, "φ sandwich", 5, criterion_11),
        run(12, "render determinism", 60, criterion_12),
    ];
    // Written straight to stderr so the lines survive the test harness's output capture.
    let mut out = std::io::stderr().lock();
    let profile = if cfg!(debug_assertions) { "debug" } else { "release" };
    writeln!(out, "acceptance ({profile} build)").unwrap();
    for o in &outcomes {
        writeln!(
            out,
            "[{}] {:>2} {:<26} {:>8.3}s/{}s  {}",
            if o.passed() { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.elapsed.as_secs_f64(),
            o.limit.as_secs(),
            o.detail
        )
        .unwrap();
    }
    for (id, why) in KNOWN_UNATTAINABLE {
        writeln!(out, "     {id:>2} known unattainable: {why}").unwrap();
    }
    let failing: Vec<u32> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    let expected: Vec<u32> = KNOWN_UNATTAINABLE.iter().map(|(id, _)| *id).collect();
    assert_eq!(failing, expected, "failing criteria differ from the documented unattainable set");
}

#[test]
fn negative_real_target_is_rejected_for_the_stated_reason() {
    let r = rouche_certificate_auto(&expz(), c(-1.0, 0.0), 5.0, DEFAULT_BOUNDARY_SAMPLES, 1e-12);
    assert!(matches!(r, Err(Error::CentreOutsideRegion)));
    // h1 = (z + k1) / (w + k2) is a quotient of two numbers with positive real
    // part, so its argument stays in (-π, π) and it is never a negative real.
    for p in sample_region(SEED, 5.0, 200) {
        let (k1, k2) = k_sums(&expz(), &p, 5.0, 40).unwrap();
        assert!((p.z + k1.value).re - k1.err > 0.0 && (p.w + k2.value).re - k2.err > 0.0);
    }
}

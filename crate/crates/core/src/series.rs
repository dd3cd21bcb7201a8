//! The series `k1 = Σ a^{-j} f(z_{2j-1})`, `k2 = Σ a^{-j} f(z_{2j-2})`, the
//! uniform bound on them over `W_R`, and the two limit functions
//!
//! ```text
//! h1 = lim z_{2n}/w_{2n}     = (z0 + k1) / (w0 + k2)
//! h2 = lim z_{2n+1}/w_{2n+1} = a (w0 + k2) / (z0 + k1)
//! ```
//!
//! evaluated with certified truncation radii.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounded::Bounded;
use crate::dynamics::{f_eval, f_sup_bound, in_region, iterate_orbit, MapSpec, Point, Region};
use crate::error::{Error, Result};

/// First truncation length tried by the doubling search.
pub const INITIAL_TERMS: usize = 8;
/// Largest truncation length the doubling search will use.
pub const MAX_TERMS: usize = 10_000;

/// `sup_{Re z > R} |f| · Σ_{j>=1} a^{-j/2}`, a uniform bound for `|k1|`,
/// `|k2|` on `W_R`.
pub fn delta_bound(m: &MapSpec, r: f64) -> f64 {
    f_sup_bound(m, r) / (m.a().sqrt() - 1.0)
}

/// `sup_{Re z > R} |f| · a^{-N} / (a - 1)`, bounding the series tail past
/// `j = N` for either parity at any point of `W_R`.
pub fn tail_bound(m: &MapSpec, r: f64, n: usize) -> f64 {
    f_sup_bound(m, r) * m.a().powf(-(n as f64)) / (m.a() - 1.0)
}

/// Smallest `N` in the doubling sequence `8, 16, ...` (capped at
/// [`MAX_TERMS`]) whose tail bound is at most `tol`.
pub fn terms_for_tolerance(m: &MapSpec, r: f64, tol: f64) -> Result<usize> {
    let mut n = INITIAL_TERMS;
    loop {
        if tail_bound(m, r, n) <= tol {
            return Ok(n);
        }
        if n >= MAX_TERMS {
            return Err(Error::ToleranceUnreachable { tol, cap: MAX_TERMS });
        }
        n = (2 * n).min(MAX_TERMS);
    }
}

pub(crate) fn require_in_region(p: &Point, r: f64) -> Result<Region> {
    let region = Region::new(r)?;
    if !in_region(p, &region) {
        return Err(Error::NotInRegion(p.to_string(), r));
    }
    Ok(region)
}

/// Raw partial sums with the extra radius owed to an overflowing orbit.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PartialSums {
    pub k1: Complex64,
    pub k2: Complex64,
    /// Term `j = n2 + 1` of the `k2` series.
    pub k2_next: Complex64,
    pub k1_extra: f64,
    pub k2_extra: f64,
}

/// Sums `k1` to `j = n1` and `k2` to `j = n2` (plus its next term) along the
/// forward orbit of `p`, without storing the orbit.
///
/// `p` must lie in an invariant `W_R`. If the orbit overflows first, the
/// missing terms are bounded through `f_sup_bound` at the last finite
/// `min(Re z, Re w)`, which never decreases along orbits in `W_R`.
pub(crate) fn partial_sums(m: &MapSpec, p: &Point, n1: usize, n2: usize) -> PartialSums {
    let a = m.a();
    let inv_a = 1.0 / a;
    let zero = Complex64::new(0.0, 0.0);
    let mut out = PartialSums { k1: zero, k2: zero, k2_next: zero, k1_extra: 0.0, k2_extra: 0.0 };

    // Orbit indices needed: k1 uses z_{2j-1}, k2 uses z_{2j-2} up to j = n2 + 1.
    let last = (2 * n2).max((2 * n1).saturating_sub(1));
    let mut current = *p;
    let mut coeff_even = inv_a; // a^{-j} for i = 2j - 2
    let mut coeff_odd = inv_a; // a^{-j} for i = 2j - 1
    for i in 0..=last {
        let fz = match f_eval(m, current.z) {
            Ok(v) => v,
            Err(_) => {
                add_overflow_tail(m, &current, i, n1, n2, &mut out);
                return out;
            }
        };
        if i % 2 == 0 {
            let j = i / 2 + 1;
            if j <= n2 {
                out.k2 += fz * coeff_even;
            } else if j == n2 + 1 {
                out.k2_next = fz * coeff_even;
            }
            coeff_even *= inv_a;
        } else {
            let j = i.div_ceil(2);
            if j <= n1 {
                out.k1 += fz * coeff_odd;
            }
            coeff_odd *= inv_a;
        }
        if i == last {
            break;
        }
        let next = Point::new(current.w * a + fz, current.z);
        if !next.is_finite() {
            add_overflow_tail(m, &current, i + 1, n1, n2, &mut out);
            return out;
        }
        current = next;
    }
    out
}

fn add_overflow_tail(
    m: &MapSpec,
    last_finite: &Point,
    first_missing: usize,
    n1: usize,
    n2: usize,
    out: &mut PartialSums,
) {
    let a = m.a();
    let sup = f_sup_bound(m, last_finite.min_re());
    // First missing j for each parity.
    let j1 = first_missing.div_ceil(2).max(1);
    let j2 = first_missing / 2 + 1;
    let geometric_from = |j: usize| sup * a.powf(-(j as f64)) * a / (a - 1.0);
    if j1 <= n1 {
        out.k1_extra = geometric_from(j1);
    }
    if j2 <= n2 + 1 {
        out.k2_extra = geometric_from(j2);
    }
}

/// `(k1, k2)` truncated at `j = N`, each with radius `tail_bound(m, R, N)`.
pub fn k_sums(m: &MapSpec, p: &Point, r: f64, n: usize) -> Result<(Bounded, Bounded)> {
    require_in_region(p, r)?;
    let sums = partial_sums(m, p, n, n);
    let tail = tail_bound(m, r, n);
    Ok((Bounded::new(sums.k1, tail + sums.k1_extra), Bounded::new(sums.k2, tail + sums.k2_extra)))
}

/// `h1` and `h2` at one point, each with a certified radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitPair {
    pub h1: Bounded,
    pub h2: Bounded,
    pub n_used: usize,
}

/// Flat record used by the CSV and JSON dumps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRecord {
    pub re_h1: f64,
    pub im_h1: f64,
    pub err_h1: f64,
    pub re_h2: f64,
    pub im_h2: f64,
    pub err_h2: f64,
    #[serde(rename = "N_used")]
    pub n_used: usize,
}

impl LimitPair {
    pub fn record(&self) -> LimitRecord {
        LimitRecord {
            re_h1: self.h1.value.re,
            im_h1: self.h1.value.im,
            err_h1: self.h1.err,
            re_h2: self.h2.value.re,
            im_h2: self.h2.value.im,
            err_h2: self.h2.err,
            n_used: self.n_used,
        }
    }

    /// Radius for `|h1 h2 - a|` propagated from the two radii.
    pub fn product_err(&self) -> f64 {
        (self.h1 * self.h2).err
    }
}

/// `h1`, `h2` at a fixed truncation `N`. `h2` is formed from its own series
/// (including the `j = N + 1` term of `k2`) rather than as `a / h1`.
pub fn limit_pair_at(m: &MapSpec, p: &Point, r: f64, n: usize) -> Result<LimitPair> {
    require_in_region(p, r)?;
    let sums = partial_sums(m, p, n, n);
    let e_n = tail_bound(m, r, n);
    let e_next = tail_bound(m, r, n + 1);
    let num = Bounded::new(p.z + sums.k1, e_n + sums.k1_extra);
    let den = Bounded::new(p.w + sums.k2, e_n + sums.k2_extra);
    let den_next = Bounded::new(p.w + sums.k2 + sums.k2_next, e_next + sums.k2_extra);

    let h1 = num.checked_div(den);
    debug_assert!(
        h1.is_ok() || r <= delta_bound(m, r),
        "denominator of h1 cannot vanish when R exceeds the delta bound"
    );
    let h1 = h1?;
    let h2 = den_next.scale(m.a()).checked_div(num)?;
    Ok(LimitPair { h1, h2, n_used: n })
}

/// `h1`, `h2` with both radii at most `tol`, choosing `N` by doubling from
/// [`INITIAL_TERMS`] up to [`MAX_TERMS`].
pub fn limit_pair(m: &MapSpec, p: &Point, r: f64, tol: f64) -> Result<LimitPair> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be > 0, got {tol}")));
    }
    let mut n = INITIAL_TERMS;
    loop {
        let pair = limit_pair_at(m, p, r, n)?;
        if pair.h1.err <= tol && pair.h2.err <= tol {
            return Ok(pair);
        }
        if n >= MAX_TERMS {
            return Err(Error::ToleranceUnreachable { tol, cap: MAX_TERMS });
        }
        n = (2 * n).min(MAX_TERMS);
    }
}

/// `z_k / w_k` for `k = 0..=n`; `None` where `w_k = 0`. Shorter than `n + 1`
/// when the orbit overflows.
pub fn ratio_sequence(m: &MapSpec, p: &Point, n: usize) -> Vec<Option<Complex64>> {
    let orbit = iterate_orbit(m, p, n);
    (0..orbit.len()).map(|k| orbit.ratio(k)).collect()
}

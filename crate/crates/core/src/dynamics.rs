//! The map family `F(z, w) = (a w + f(z), z)` with `f` a finite positive
//! exponential sum, its inverse, forward orbits and the half-plane product
//! region `W_R = {Re z > R, Re w > R}`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Overflow, Result};

/// Relative bracket width at which [`admissible_r`] stops bisecting.
pub const ADMISSIBLE_R_TOLERANCE: f64 = 1e-9;

/// One term `A e^{-k z}` of the exponential sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub amplitude: f64,
    pub rate: f64,
}

/// A validated member of the map family.
///
/// `a > 1` and every term has `A > 0`, `k > 0`. An empty term list is the
/// linear map `L(z, w) = (a w, z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMapSpec", into = "RawMapSpec")]
pub struct MapSpec {
    a: f64,
    terms: Vec<ExpTerm>,
}

#[derive(Serialize, Deserialize)]
struct RawMapSpec {
    a: f64,
    f_terms: Vec<(f64, f64)>,
}

impl TryFrom<RawMapSpec> for MapSpec {
    type Error = Error;

    fn try_from(raw: RawMapSpec) -> Result<Self> {
        make_map(raw.a, &raw.f_terms)
    }
}

impl From<MapSpec> for RawMapSpec {
    fn from(m: MapSpec) -> Self {
        RawMapSpec { a: m.a, f_terms: m.terms.iter().map(|t| (t.amplitude, t.rate)).collect() }
    }
}

/// Builds a [`MapSpec`] from `a` and `(A, k)` pairs.
pub fn make_map(a: f64, f_terms: &[(f64, f64)]) -> Result<MapSpec> {
    if !(a.is_finite() && a > 1.0) {
        return Err(Error::InvalidParameter(format!("a must be a finite real > 1, got {a}")));
    }
    let mut terms = Vec::with_capacity(f_terms.len());
    for &(amplitude, rate) in f_terms {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(Error::InvalidParameter(format!("amplitude must be > 0, got {amplitude}")));
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(Error::InvalidParameter(format!("rate must be > 0, got {rate}")));
        }
        terms.push(ExpTerm { amplitude, rate });
    }
    Ok(MapSpec { a, terms })
}

impl MapSpec {
    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn terms(&self) -> &[ExpTerm] {
        &self.terms
    }

    /// True iff `f` is nonlinear and bounded on right half-planes, i.e. the
    /// term list is non-empty.
    pub fn theorem_hypotheses_met(&self) -> bool {
        !self.terms.is_empty()
    }

    pub fn is_linear(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Σ A_i`, the value of `sup |f|` on `Re z >= 0`.
    pub fn total_amplitude(&self) -> f64 {
        self.terms.iter().map(|t| t.amplitude).sum()
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "a={};f=", self.a)?;
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(out, "+")?;
            }
            write!(out, "{},{}", t.amplitude, t.rate)?;
        }
        Ok(())
    }
}

impl FromStr for MapSpec {
    type Err = Error;

    /// Parses `a=<float>;f=<A1>,<k1>[+<A2>,<k2>...]` or `a=<float>;f=0`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse(format!("map spec {s:?}: {msg}"));
        let mut a = None;
        let mut f = None;
        for field in s.split(';') {
            let (key, value) = field.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            match key.trim() {
                "a" if a.is_none() => a = Some(value.trim()),
                "f" if f.is_none() => f = Some(value.trim()),
                "a" | "f" => return Err(bad("duplicate key")),
                other => return Err(bad(&format!("unknown key {other:?}"))),
            }
        }
        let a: f64 = a.ok_or_else(|| bad("missing a"))?.parse().map_err(|_| bad("a is not a number"))?;
        let f = f.ok_or_else(|| bad("missing f"))?;
        let mut terms = Vec::new();
        if f != "0" {
            for term in f.split('+') {
                let (amp, rate) = term.split_once(',').ok_or_else(|| bad("term must be A,k"))?;
                let amp: f64 = amp.trim().parse().map_err(|_| bad("bad amplitude"))?;
                let rate: f64 = rate.trim().parse().map_err(|_| bad("bad rate"))?;
                terms.push((amp, rate));
            }
        }
        make_map(a, &terms)
    }
}

/// A point `(z, w)` of `C^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub z: Complex64,
    pub w: Complex64,
}

impl Point {
    pub fn new(z: Complex64, w: Complex64) -> Self {
        Point { z, w }
    }

    pub fn real(z: f64, w: f64) -> Self {
        Point::new(Complex64::new(z, 0.0), Complex64::new(w, 0.0))
    }

    pub fn is_finite(&self) -> bool {
        self.z.is_finite() && self.w.is_finite()
    }

    /// Euclidean norm in `C^2`.
    pub fn norm(&self) -> f64 {
        self.z.norm().hypot(self.w.norm())
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.z - other.z).norm().hypot((self.w - other.w).norm())
    }

    /// `min(Re z, Re w)`.
    pub fn min_re(&self) -> f64 {
        self.z.re.min(self.w.re)
    }

    fn checked(self) -> Result<Point, Overflow> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Overflow)
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "({}, {})", self.z, self.w)
    }
}

/// `W_R`, the open product of right half-planes `Re z > R, Re w > R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    r: f64,
}

impl Region {
    pub fn new(r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::InvalidParameter(format!("R must be finite and > 0, got {r}")));
        }
        Ok(Region { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn contains(&self, p: &Point) -> bool {
        in_region(p, self)
    }
}

/// Strict membership test `Re z > R` and `Re w > R`.
pub fn in_region(p: &Point, region: &Region) -> bool {
    p.z.re > region.r && p.w.re > region.r
}

/// `Σ A_i e^{-k_i z}`. Underflows to exact zero far to the right.
pub fn f_eval(m: &MapSpec, z: Complex64) -> Result<Complex64, Overflow> {
    let mut sum = Complex64::new(0.0, 0.0);
    for t in &m.terms {
        let modulus = (-t.rate * z.re).exp();
        if modulus == 0.0 {
            continue;
        }
        let (sin, cos) = (-t.rate * z.im).sin_cos();
        sum += Complex64::new(modulus * cos, modulus * sin) * t.amplitude;
    }
    if sum.is_finite() {
        Ok(sum)
    } else {
        Err(Overflow)
    }
}

/// `Σ A_i e^{-k_i R}`, an upper bound for `|f|` on `Re z > R`.
pub fn f_sup_bound(m: &MapSpec, r: f64) -> f64 {
    m.terms.iter().map(|t| t.amplitude * (-t.rate * r).exp()).sum()
}

/// `F(z, w) = (a w + f(z), z)`.
pub fn apply(m: &MapSpec, p: &Point) -> Result<Point, Overflow> {
    let fz = f_eval(m, p.z)?;
    Point::new(p.w * m.a + fz, p.z).checked()
}

/// `F^{-1}(z, w) = (w, (z - f(w)) / a)`.
pub fn apply_inverse(m: &MapSpec, p: &Point) -> Result<Point, Overflow> {
    let fw = f_eval(m, p.w)?;
    Point::new(p.w, (p.z - fw) / m.a).checked()
}

/// A finite forward orbit `P_0, ..., P_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Orbit {
    points: Vec<Point>,
    /// Step at which overflow stopped the iteration, if it did.
    stopped_at: Option<usize>,
}

impl Orbit {
    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn stopped_at(&self) -> Option<usize> {
        self.stopped_at
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("orbit always holds its starting point")
    }

    pub fn re_z(&self, n: usize) -> f64 {
        self.points[n].z.re
    }

    pub fn norm(&self, n: usize) -> f64 {
        self.points[n].norm()
    }

    /// `z_n / w_n`, `None` when `w_n = 0`.
    pub fn ratio(&self, n: usize) -> Option<Complex64> {
        let p = &self.points[n];
        if p.w == Complex64::new(0.0, 0.0) {
            None
        } else {
            Some(p.z / p.w)
        }
    }
}

/// Iterates `F` `n` times from `p`, stopping early at the first overflow.
pub fn iterate_orbit(m: &MapSpec, p: &Point, n: usize) -> Orbit {
    let mut points = Vec::with_capacity(n + 1);
    points.push(*p);
    let mut current = *p;
    for step in 1..=n {
        match apply(m, &current) {
            Ok(next) => {
                points.push(next);
                current = next;
            }
            Err(Overflow) => {
                return Orbit { points, stopped_at: Some(step) };
            }
        }
    }
    Orbit { points, stopped_at: None }
}

/// `F^k(p)` for `k >= 0`, or `F^{-|k|}(p)` for negative `k`.
pub fn iterate(m: &MapSpec, p: &Point, k: i64) -> Result<Point, Overflow> {
    let mut q = *p;
    if k >= 0 {
        for _ in 0..k {
            q = apply(m, &q)?;
        }
    } else {
        for _ in 0..k.unsigned_abs() {
            q = apply_inverse(m, &q)?;
        }
    }
    Ok(q)
}

/// True iff `sup_{Re z > R} |f| <= (a - 1) R - eps`, which makes `W_R`
/// forward invariant with `Re z_1 > R + eps`.
pub fn is_admissible(m: &MapSpec, r: f64, eps: f64) -> bool {
    r > 0.0 && admissibility_gap(m, r, eps) >= 0.0
}

fn admissibility_gap(m: &MapSpec, r: f64, eps: f64) -> f64 {
    (m.a - 1.0) * r - eps - f_sup_bound(m, r)
}

/// Smallest admissible `R` for `eps`, to within [`ADMISSIBLE_R_TOLERANCE`].
///
/// The gap `(a-1)R - eps - sup|f|` is continuous and strictly increasing, so
/// bisection on it converges; the returned value is the upper end of the
/// final bracket and is itself admissible.
pub fn admissible_r(m: &MapSpec, eps: f64) -> Result<f64> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be > 0, got {eps}")));
    }
    let mut lo = 0.0;
    let mut hi = 1.0_f64.max(2.0 * m.total_amplitude() / (m.a - 1.0)) + eps;
    while admissibility_gap(m, hi, eps) < 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    while hi - lo > ADMISSIBLE_R_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if admissibility_gap(m, mid, eps) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Rejects `r` unless it is admissible for `eps`.
pub fn require_admissible(m: &MapSpec, r: f64, eps: f64) -> Result<()> {
    if is_admissible(m, r, eps) {
        Ok(())
    } else {
        Err(Error::NotAdmissible { r, eps, sup: f_sup_bound(m, r), rhs: (m.a - 1.0) * r - eps })
    }
}

//! Complex disks `{(c w0, w0) + t (-1, conj c) : |t| < δ}` orthogonal to the
//! line `L_c = {(c w, w)}` and contained in `W_R`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{in_region, Point, Region};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskSpec {
    pub c: Complex64,
    pub w0: Complex64,
    /// Radius in the parameter `t`.
    pub delta: f64,
}

impl DiskSpec {
    pub fn centre(&self) -> Point {
        Point::new(self.c * self.w0, self.w0)
    }

    /// `(c w0, w0) + t (-1, conj c)`.
    pub fn point(&self, t: Complex64) -> Point {
        Point::new(self.c * self.w0 - t, self.w0 + self.c.conj() * t)
    }

    pub fn boundary_point(&self, theta: f64) -> Point {
        self.point(Complex64::from_polar(self.delta, theta))
    }

    /// `sqrt(1 + |c|^2) δ`, the radius in `C^2`.
    pub fn ambient_radius(&self) -> f64 {
        (1.0 + self.c.norm_sqr()).sqrt() * self.delta
    }

    /// True iff `samples` equally spaced boundary points all lie in `W_R`.
    pub fn boundary_inside(&self, r: f64, samples: usize) -> bool {
        let Ok(region) = Region::new(r) else { return false };
        (0..samples).all(|i| in_region(&self.boundary_point(TAU * i as f64 / samples as f64), &region))
    }
}

/// `min(|Re w0 - R| / |c|, |Re c Re w0 - Im c Im w0 - R|)`, the largest `δ`
/// keeping `D_{c,δ}(w0)` inside `W_R`.
///
/// The formula measures distance to the two boundary hyperplanes regardless
/// of side, so the centre `(c w0, w0)` must itself lie in `W_R`; that is
/// checked here.
pub fn lemma_disk_radius(c: Complex64, w0: Complex64, r: f64) -> Result<f64> {
    if c == Complex64::new(0.0, 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter("c must be finite and nonzero".into()));
    }
    let region = Region::new(r)?;
    if !in_region(&Point::new(c * w0, w0), &region) {
        return Err(Error::CentreOutsideRegion);
    }
    Ok(((w0.re - r).abs() / c.norm()).min((c.re * w0.re - c.im * w0.im - r).abs()))
}

/// The disk used for the Rouché argument at target `c`:
/// `w0 = M + R + i((M + R) Re c - 2M - R) / Im c` (or `2M + R` for real `c`)
/// and `δ = (M - 1) min(|c|, 1/|c|)`.
pub fn rouche_disk(c: Complex64, m_param: f64, r: f64) -> Result<DiskSpec> {
    if c == Complex64::new(0.0, 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter("c must be finite and nonzero".into()));
    }
    if !(m_param > 1.0 && m_param.is_finite()) {
        return Err(Error::MTooSmall(format!("M = {m_param} must exceed 1")));
    }
    let w0 = if c.im != 0.0 {
        Complex64::new(m_param + r, ((m_param + r) * c.re - 2.0 * m_param - r) / c.im)
    } else {
        Complex64::new(2.0 * m_param + r, 0.0)
    };
    let delta = (m_param - 1.0) * c.norm().min(1.0 / c.norm());
    if c.im == 0.0 && (2.0 * m_param + r) * c.re.abs() - r < delta {
        return Err(Error::MTooSmall(format!("(2M + R)|Re c| - R < δ at M = {m_param}")));
    }
    let limit = lemma_disk_radius(c, w0, r)?;
    if delta > limit {
        return Err(Error::MTooSmall(format!("δ = {delta} exceeds the containment radius {limit}")));
    }
    Ok(DiskSpec { c, w0, delta })
}

//! Complex values carrying an absolute error radius.
//!
//! The radius accounts for series truncation; floating-point rounding in the
//! value itself is not included.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounded {
    pub value: Complex64,
    pub err: f64,
}

impl Bounded {
    pub fn new(value: Complex64, err: f64) -> Self {
        debug_assert!(err >= 0.0 && err.is_finite(), "error radius must be finite and >= 0");
        Bounded { value, err }
    }

    pub fn exact(value: Complex64) -> Self {
        Bounded { value, err: 0.0 }
    }

    /// Largest modulus compatible with the radius.
    pub fn upper_modulus(&self) -> f64 {
        self.value.norm() + self.err
    }

    /// Smallest modulus compatible with the radius (may be zero).
    pub fn lower_modulus(&self) -> f64 {
        (self.value.norm() - self.err).max(0.0)
    }

    /// True when zero lies outside the error disk.
    pub fn certified_nonzero(&self) -> bool {
        self.value.norm() > self.err
    }

    pub fn contains(&self, x: Complex64) -> bool {
        (x - self.value).norm() <= self.err
    }

    pub fn scale(self, k: f64) -> Bounded {
        Bounded::new(self.value * k, self.err * k.abs())
    }

    /// `(u ± e_u) / (v ± e_v)` with error
    /// `(|u| e_v + |v| e_u) / (|v| (|v| - e_v))`, valid only when `|v| > e_v`.
    pub fn checked_div(self, den: Bounded) -> Result<Bounded> {
        let v = den.value.norm();
        if !den.certified_nonzero() {
            return Err(Error::DenominatorNotCertified { modulus: v, err: den.err });
        }
        let err = if self.err == 0.0 && den.err == 0.0 {
            0.0
        } else {
            (self.value.norm() * den.err + v * self.err) / (v * (v - den.err))
        };
        Ok(Bounded::new(self.value / den.value, err))
    }
}

impl Add for Bounded {
    type Output = Bounded;
    fn add(self, rhs: Bounded) -> Bounded {
        Bounded::new(self.value + rhs.value, self.err + rhs.err)
    }
}

impl Sub for Bounded {
    type Output = Bounded;
    fn sub(self, rhs: Bounded) -> Bounded {
        Bounded::new(self.value - rhs.value, self.err + rhs.err)
    }
}

impl Neg for Bounded {
    type Output = Bounded;
    fn neg(self) -> Bounded {
        Bounded::new(-self.value, self.err)
    }
}

impl Mul for Bounded {
    type Output = Bounded;
    fn mul(self, rhs: Bounded) -> Bounded {
        let err = self.value.norm() * rhs.err + rhs.value.norm() * self.err + self.err * rhs.err;
        Bounded::new(self.value * rhs.value, err)
    }
}

impl Add<Complex64> for Bounded {
    type Output = Bounded;
    fn add(self, rhs: Complex64) -> Bounded {
        Bounded::new(self.value + rhs, self.err)
    }
}

impl Mul<Complex64> for Bounded {
    type Output = Bounded;
    fn mul(self, rhs: Complex64) -> Bounded {
        Bounded::new(self.value * rhs, self.err * rhs.norm())
    }
}

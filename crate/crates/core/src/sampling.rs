//! Reproducible sampling of `W_R`.
//!
//! All randomness goes through ChaCha8 seeded from a `u64`, whose stream is
//! fixed by the algorithm and identical on every platform.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::Point;

/// Largest real offset above `R` and largest `|Im|` of a sample.
pub const SAMPLE_SPAN: f64 = 1e3;
/// Smallest real offset above `R`, as a power of ten.
const MIN_OFFSET_EXP: f64 = -3.0;

/// Draws points of `W_R ∩ {Re <= R + 10^3, |Im| <= 10^3}`.
///
/// Real offsets above `R` are log-uniform on `[10^-3, 10^3]` so that the
/// neighbourhood of the boundary is hit as often as the far interior;
/// imaginary parts are uniform.
#[derive(Debug, Clone)]
pub struct RegionSampler {
    rng: ChaCha8Rng,
    r: f64,
}

impl RegionSampler {
    pub fn new(seed: u64, r: f64) -> Self {
        RegionSampler { rng: ChaCha8Rng::seed_from_u64(seed), r }
    }

    fn coordinate(&mut self) -> Complex64 {
        let max_exp = SAMPLE_SPAN.log10();
        let e = MIN_OFFSET_EXP + (max_exp - MIN_OFFSET_EXP) * self.rng.random::<f64>();
        let im = SAMPLE_SPAN * (2.0 * self.rng.random::<f64>() - 1.0);
        Complex64::new(self.r + 10f64.powf(e), im)
    }

    pub fn point(&mut self) -> Point {
        let z = self.coordinate();
        let w = self.coordinate();
        Point::new(z, w)
    }

    pub fn points(&mut self, count: usize) -> Vec<Point> {
        (0..count).map(|_| self.point()).collect()
    }
}

/// `count` seeded samples of `W_R`.
pub fn sample_region(seed: u64, r: f64, count: usize) -> Vec<Point> {
    RegionSampler::new(seed, r).points(count)
}

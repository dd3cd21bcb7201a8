//! Winding number of a closed curve `θ ↦ γ(θ)`, `θ ∈ [0, 2π)`, around a
//! point, by summing principal argument increments with adaptive bisection.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Total curve evaluations allowed before giving up.
pub const MAX_WINDING_SAMPLES: usize = 1 << 20;

/// Integer winding number of `curve` around `target`.
///
/// Starts from `samples` equally spaced parameters and bisects any step whose
/// argument increment is at least `π/2`. Fails with
/// [`Error::CurveTooClose`] if the curve hits `target` at a sample or the
/// refinement exceeds [`MAX_WINDING_SAMPLES`] evaluations.
pub fn winding_number<F>(curve: F, target: Complex64, samples: usize) -> Result<i64>
where
    F: Fn(f64) -> Complex64,
{
    let samples = samples.max(4);
    let mut evaluations = 0usize;
    let mut eval = |theta: f64| -> Result<Complex64> {
        evaluations += 1;
        if evaluations > MAX_WINDING_SAMPLES {
            return Err(Error::CurveTooClose);
        }
        let v = curve(theta) - target;
        if v == Complex64::new(0.0, 0.0) || !v.is_finite() {
            return Err(Error::CurveTooClose);
        }
        Ok(v)
    };

    let thetas: Vec<f64> = (0..samples).map(|i| TAU * i as f64 / samples as f64).collect();
    let values = thetas.iter().map(|&t| eval(t)).collect::<Result<Vec<_>>>()?;

    let mut total = 0.0;
    // Segments still to integrate, as (θa, γ(θa), θb, γ(θb)).
    let mut stack = Vec::new();
    for i in (0..samples).rev() {
        let (tb, vb) = if i + 1 == samples { (TAU, values[0]) } else { (thetas[i + 1], values[i + 1]) };
        stack.push((thetas[i], values[i], tb, vb));
    }
    while let Some((ta, va, tb, vb)) = stack.pop() {
        let step = (vb / va).arg();
        if step.abs() < FRAC_PI_2 {
            total += step;
            continue;
        }
        let tm = 0.5 * (ta + tb);
        if !(tm > ta && tm < tb) {
            return Err(Error::CurveTooClose);
        }
        let vm = eval(tm)?;
        stack.push((tm, vm, tb, vb));
        stack.push((ta, va, tm, vm));
    }
    Ok((total / TAU).round() as i64)
}

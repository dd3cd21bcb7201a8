//! Membership in the absorbing union `A = ⋃ F^{-n}(W_R)` and the harmonic
//! diagnostics `u_n = -Re z_n / n`.

use serde::{Deserialize, Serialize};

use super::require_some_admissible;
use crate::dynamics::{apply, in_region, iterate_orbit, MapSpec, Point, Region};
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbsorbingStatus {
    Member,
    /// No entry into `W_R` within this many steps. Never a claim of
    /// non-membership.
    UnknownAfter(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbsorbingVerdict {
    /// First `n` with `F^n(P) ∈ W_R`, present iff the status is member.
    pub entry_index: Option<usize>,
    pub status: AbsorbingStatus,
}

impl AbsorbingVerdict {
    pub fn is_member(&self) -> bool {
        self.status == AbsorbingStatus::Member
    }
}

/// Iterates forward at most `n_max` steps looking for the first entry into
/// `W_R`. An overflowing orbit is reported as unknown.
pub fn absorbing_membership(m: &MapSpec, p: &Point, r: f64, n_max: usize) -> Result<AbsorbingVerdict> {
    require_some_admissible(m, r)?;
    let region = Region::new(r)?;
    Ok(first_entry(m, p, &region, n_max))
}

pub(crate) fn first_entry(m: &MapSpec, p: &Point, region: &Region, n_max: usize) -> AbsorbingVerdict {
    let unknown = AbsorbingVerdict { entry_index: None, status: AbsorbingStatus::UnknownAfter(n_max) };
    let mut q = *p;
    for n in 0..=n_max {
        if in_region(&q, region) {
            return AbsorbingVerdict { entry_index: Some(n), status: AbsorbingStatus::Member };
        }
        if n == n_max {
            break;
        }
        match apply(m, &q) {
            Ok(next) => q = next,
            Err(_) => return unknown,
        }
    }
    unknown
}

/// `u_n = -Re z_n / n` for `n = 1, ...`, up to `n_max` or the first overflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnSeries {
    /// `values[n - 1] = u_n`.
    pub values: Vec<f64>,
    pub stopped_at: Option<usize>,
}

impl UnSeries {
    /// `u_n`, for `n >= 1`.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.values.get(i)).copied()
    }
}

pub fn u_n_diagnostics(m: &MapSpec, p: &Point, n_max: usize) -> UnSeries {
    let orbit = iterate_orbit(m, p, n_max);
    let values = (1..orbit.len()).map(|n| -orbit.re_z(n) / n as f64).collect();
    UnSeries { values, stopped_at: orbit.stopped_at() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{iterate, make_map};
    use crate::series::delta_bound;
    use num_complex::Complex64;

    fn expz() -> MapSpec {
        make_map(2.0, &[(1.0, 1.0)]).unwrap()
    }

    #[test]
    fn region_points_are_members_at_zero() {
        let v = absorbing_membership(&expz(), &Point::real(6.0, 6.0), 5.0, 10).unwrap();
        assert_eq!(v.entry_index, Some(0));
        assert!(v.is_member());
    }

    #[test]
    fn constructed_preimage_reenters() {
        let m = expz();
        let p = iterate(&m, &Point::real(6.0, 6.0), -3).unwrap();
        let v = absorbing_membership(&m, &p, 5.0, 10).unwrap();
        assert!(matches!(v.entry_index, Some(n) if n <= 3), "{v:?}");
        let next = apply(&m, &p).unwrap();
        let w = absorbing_membership(&m, &next, 5.0, 10).unwrap();
        assert_eq!(w.entry_index, Some(v.entry_index.unwrap().saturating_sub(1)));
    }

    #[test]
    fn far_left_point_is_unknown() {
        let v = absorbing_membership(&expz(), &Point::real(-100.0, -100.0), 5.0, 50).unwrap();
        assert_eq!(v.entry_index, None);
        assert_eq!(v.status, AbsorbingStatus::UnknownAfter(50));
    }

    #[test]
    fn rejects_inadmissible_r() {
        assert!(absorbing_membership(&expz(), &Point::real(6.0, 6.0), 0.1, 10).is_err());
    }

    #[test]
    fn linear_even_terms() {
        let m = make_map(2.0, &[]).unwrap();
        let u = u_n_diagnostics(&m, &Point::real(4.0, 2.0), 40);
        for n in 1..=20 {
            let expected = -(2f64.powi(n as i32)) * 4.0 / (2 * n) as f64;
            assert_eq!(u.get(2 * n).unwrap(), expected);
        }
    }

    #[test]
    fn exponential_u_n_decreases_per_parity() {
        let u = u_n_diagnostics(&expz(), &Point::real(6.0, 6.0), 40);
        assert_eq!(u.stopped_at, None);
        for n in 2..=38 {
            assert!(u.get(n + 2).unwrap() < u.get(n).unwrap(), "n = {n}");
        }
        // z_{2k} ≈ 6·2^k and z_{2k+1} ≈ 12·2^k, so u_{2k+2} ≈ u_{2k+1}(2k+1)/(2k+2)
        // sits above u_{2k+1}: the full sequence is not monotone.
        for k in 1..19 {
            assert!(u.get(2 * k + 2).unwrap() > u.get(2 * k + 1).unwrap(), "k = {k}");
        }
        assert!(u.get(30).unwrap() < -1e3);
    }

    #[test]
    fn parity_corrected_bound() {
        let m = expz();
        let r = 5.0;
        let gap = r - delta_bound(&m, r);
        let u = u_n_diagnostics(&m, &Point::new(Complex64::new(5.5, 300.0), Complex64::new(900.0, -40.0)), 40);
        for n in 2..=40 {
            let bound = -(2f64.powi((n / 2) as i32)) * gap / n as f64;
            assert!(u.get(n).unwrap() <= bound, "n = {n}");
        }
    }
}

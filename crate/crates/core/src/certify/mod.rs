//! Numerical certificates for the structural claims about the escaping
//! component: forward invariance of `W_R`, the growth sandwich, disks inside
//! `W_R`, Rouché surjectivity of `h1`, and absorbing-set membership.

mod absorbing;
mod disk;
mod growth;
mod invariance;
mod rouche;
mod winding;

pub use absorbing::{absorbing_membership, u_n_diagnostics, AbsorbingStatus, AbsorbingVerdict, UnSeries};
pub use disk::{lemma_disk_radius, rouche_disk, DiskSpec};
pub use growth::{growth_band, growth_check, GrowthBand, GrowthReport, LIMIT_TOL};
pub use invariance::invariance_check;
pub use rouche::{
    boundary_profile, rouche_certificate, rouche_certificate_auto, BoundaryProfile, RoucheCertificate,
    DEFAULT_BOUNDARY_SAMPLES,
};
pub use winding::{winding_number, MAX_WINDING_SAMPLES};

use crate::dynamics::{f_sup_bound, MapSpec};
use crate::error::{Error, Result};

/// `sup_{Re z > R} |f| < (a - 1) R`, i.e. `R` is admissible for some `eps > 0`.
pub(crate) fn require_some_admissible(m: &MapSpec, r: f64) -> Result<()> {
    if r > 0.0 && f_sup_bound(m, r) < (m.a() - 1.0) * r {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("R = {r} is not admissible for any epsilon > 0")))
    }
}

//! Transcendental Hénon maps `F(z, w) = (a w + f(z), z)` with `f` a positive
//! exponential sum, and numerical certificates for the structure of their
//! invariant escaping Fatou component: the two limit functions `h1`, `h2`,
//! the conjugacy to `L(z, w) = (a w, z)`, the growth sandwich, Rouché
//! surjectivity and absorbing-domain membership.

// `!(x > 0.0)` is used on purpose so that NaN fails parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounded;
pub mod certificate;
pub mod certify;
pub mod dump;
pub mod dynamics;
pub mod error;
pub mod linearization;
pub mod render;
pub mod sampling;
pub mod series;

pub use bounded::Bounded;
pub use certificate::{Certificate, CertificateKind, Verdict};
pub use certify::{
    absorbing_membership, growth_check, invariance_check, lemma_disk_radius, rouche_certificate,
    rouche_certificate_auto, rouche_disk, u_n_diagnostics, winding_number, AbsorbingStatus, AbsorbingVerdict, DiskSpec,
    GrowthReport, RoucheCertificate, UnSeries,
};
pub use dump::{dump_orbit, parse_orbit_csv, DumpFormat, OrbitRow};
pub use dynamics::{
    admissible_r, apply, apply_inverse, f_eval, f_sup_bound, in_region, is_admissible, iterate, iterate_orbit,
    make_map, ExpTerm, MapSpec, Orbit, Point, Region,
};
pub use error::{Error, Overflow, Result};
pub use linearization::{
    conjugacy_check, conjugacy_residual, linear_apply, phi, phi_n, phi_n_composed, phi_with_limit, sandwich_phi_w,
    BoundedPoint, ConjugacyResult, Residual,
};
pub use render::{encode_ppm, parse_ppm, render_slice, EscapeCell, EscapeImage, Plane, Ppm, SliceSpec, Window};
pub use sampling::{sample_region, RegionSampler};
pub use series::{delta_bound, k_sums, limit_pair, limit_pair_at, ratio_sequence, tail_bound, LimitPair, LimitRecord};

pub use num_complex::Complex64;

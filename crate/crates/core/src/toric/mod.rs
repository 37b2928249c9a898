//! Toric quotients: moment polytopes, torus fibers, Blaschke disks,
//! Hori–Vafa potentials, critical branes and heaviness certificates.
//!
//! All facet values are rational parts `⟨λ, v_i⟩ − c_i`; the factor 2π is a
//! global scale on Novikov exponents and never materialised.

mod blaschke;
mod certify;
mod leading;
mod lift;
mod polytope;
mod potential;

pub use blaschke::{blaschke_disk, DiskClass};
pub use certify::{
    certify_heavy, lift_root, scan_csv, scan_fibers, Brane, BraneCheck, CertificateCheck, CertifyOutcome,
    HeavinessCertificate, NoneFound, ScanRow, CERTIFICATE_TAG,
};
pub use leading::{critical_points_leading, LeadingSolutions, LeadingStatus};
pub use lift::{lift_critical, CriticalCertificate, MAX_ITERATIONS};
pub use polytope::{Facet, MomentPolytope, PolytopeIssue, PolytopeReport};
pub use potential::{LeadingEquation, LeadingSystem, PotentialFunction, PotentialTerm};

use crate::novikov::NovikovError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ToricError {
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("fiber {fiber:?} is not interior (facet {facet})")]
    NotInterior { fiber: Vec<String>, facet: usize },
    #[error("coordinate {coordinate} is not a unit of valuation 0")]
    NotUnit { coordinate: usize },
    #[error("invalid polytope: {0:?}")]
    InvalidPolytope(PolytopeReport),
    #[error("degenerate critical point: leading Jacobian is singular (smallest singular value {smallest_singular_value:e})")]
    SingularJacobian { smallest_singular_value: f64 },
    #[error("Newton lifting did not converge after {iterations} iterations (residual valuation {residual_valuation})")]
    NoConvergence { iterations: usize, residual_valuation: String },
    #[error("zero {index} of coordinate {coordinate} is not inside the unit disk")]
    ZeroOutsideDisk { coordinate: usize, index: usize },
    #[error(transparent)]
    Novikov(#[from] NovikovError),
    #[error("malformed input: {0}")]
    Malformed(String),
}

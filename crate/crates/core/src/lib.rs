//! Exact algebra for vortex Floer spectral invariants on toric quotients.
//!
//! * [`novikov`]: truncated arithmetic in the downward Novikov field.
//! * [`complex`]: abstract filtered Floer–Novikov complexes, spectral numbers,
//!   tensor products and axiom checks.
//! * [`toric`]: moment polytopes, Hori–Vafa potentials, critical branes over
//!   the Novikov field and heaviness certificates.
//! * [`quasimap`]: the Koszul model of quasimap Floer cohomology of a brane.
//! * [`quasistate`]: homogenization of spectral oracles and quasi-state checks.

pub mod novikov;
pub mod rational;
pub mod complex;
mod linalg;
pub mod toric;
pub mod quasimap;
pub mod quasistate;
pub mod selftest;

/// Version tag carried by every JSON document.
pub const SCHEMA_VERSION: u64 = 1;

//! Exact computational Sen theory over p-adic fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`padic`]: `Q_p` at finite absolute precision, polynomials, Newton polygons, exp/log.
//! * [`field`]: finite extensions presented as an unramified step followed by an
//!   Eisenstein step, with valuation, trace, residue and substitutions.
//! * [`dpseries`]: truncated divided-power series `Σ c_n aⁿ/n!` with the Sen
//!   derivation `(1 + e a) d/da`, its inverse and the group coaction.
//! * [`senmod`]: Sen modules `(M, Θ)`, the nearly Hodge-Tate classifier,
//!   cohomology and the operator series `(1 + e b)^(Θ/e)`.
//! * [`gamma`]: finite-level cyclotomic model of the twisted Galois action with
//!   bounded inverses and Neumann inversion.
//! * [`picard`]: the boundary map `(1/p) Tr: K -> Q_p/Z_p`.
//!
//! Every value is immutable; operations are pure and may run concurrently.

pub mod dpseries;
pub mod error;
pub mod exec;
pub mod field;
pub mod gamma;
pub mod linalg;
pub mod padic;
pub mod picard;
pub mod senmod;
pub mod series;
pub mod valuation;

pub use error::{Error, Result};
pub use exec::Exec;
pub use valuation::{Rat, Val};

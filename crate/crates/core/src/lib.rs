//! Residual image analysis for compatible families of three-dimensional
//! Galois representations whose Frobenius traces live in an imaginary
//! quadratic field.
//!
//! Given a table of traces `a_p`, the crate runs finite sieves for every
//! small-image case of Mitchell's classification of subgroups of
//! `PSL(3, F_q)` and certifies, prime by prime, that the projective residual
//! image is `PSL(3, F_l)` (split `l`) or `PSU(3, F_l)` (inert `l`).
//!
//! Module map:
//! - [`arith`]: 64/128-bit integers, `Q(sqrt(-D))`, finite field towers and
//!   polynomial root finding.
//! - [`family`]: descriptors, eigenvalue tables, Frobenius characteristic
//!   polynomials.
//! - [`catalog`]: Mitchell's subgroup catalogue, inertia patterns, order
//!   spectra and the group-closure oracle.
//! - [`sieves`]: family-level candidate sieves.
//! - [`certify`]: per-prime verdicts.
//! - [`surfaces`]: point counts on the surfaces `S_a`.
//! - [`analysis`]: the end-to-end report consumed by the CLI.

pub mod analysis;
pub mod arith;
pub mod catalog;
pub mod certify;
mod error;
pub mod family;
pub mod sieves;
pub mod surfaces;

pub use arith::fq::{FqElem, FqField};
pub use arith::int::{factor, is_prime, legendre, Factorization};
pub use arith::quad::{splitting, QuadInt, SplittingType};
pub use error::{Error, Result};
pub use family::{ConductorMode, EigenTable, FamilyDescriptor};


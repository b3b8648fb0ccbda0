//! Exact combinatorics of exploded manifolds and explodable log schemes.
//!
//! The crate computes the polyhedral and monoid data that the analytic theory
//! hangs off: half-open integral affine polytopes and their faces, monoids of
//! nonnegative integral affine functions and their Hilbert bases, polyhedral
//! atlases and their tropical parts, tropical curve types with their moduli
//! polytopes, subdivisions, and the cut-and-glue identity for curve moduli.
//!
//! All arithmetic is exact. Integer algorithms are generic over
//! [`scalar::ExactInt`] and rational ones over [`scalar::ExactField`]; the
//! geometric layers use the concrete aliases below.

pub mod atlas;
pub mod curves;
pub mod error;
pub mod gluing;
pub mod json;
pub mod lattice;
pub mod monoid;
pub mod polytope;
pub mod refinement;
pub mod scalar;

pub use error::{Error, Result};

/// Arbitrary-precision rational used for affine constants and points.
pub type Rational = num_rational::BigRational;
/// Integer type used for slopes, lattice vectors and integer matrices.
pub type Int = i64;
pub type IntVec = Vec<Int>;
pub type RatVec = Vec<Rational>;
pub type IntMatrix = lattice::Matrix<Int>;
pub type RatSystem = lattice::LinearSystem<Rational>;

//! Constant dimension subspace codes: finite fields, subspaces, rank-metric
//! codes, skeleton codes, constructions, bounds and verification.

pub mod gf;
pub mod limits;
pub mod qpoly;
pub mod subspace;

pub use num_bigint::BigInt;

/// Polynomials in q with arbitrary precision integer coefficients.
pub type PolyQ = qpoly::Poly<BigInt>;
pub mod rankmetric;
pub mod construct;
pub mod skeleton;
pub mod bounds;
pub mod verify;
pub mod codefile;

/// Exact rationals used by the simplex.
pub type Rational = num_rational::BigRational;

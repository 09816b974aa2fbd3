//! Exact computations on the Geiser double cover of the plane.
//!
//! Seven points in general position determine a net of plane cubics; the
//! induced degree-two map onto the dual plane is branched along a smooth
//! quartic whose 28 bitangents come out of the point data. Pushing line
//! bundles down the cover gives rank-2 bundles on the dual plane, and this
//! crate computes their free presentations, sections and splitting types on
//! lines with exact rational arithmetic throughout.
//!
//! The linear algebra in [`linalg`] is generic over the scalar (any
//! [`Field`]); everything that feeds a verdict uses the exact instantiation
//! [`QMatrix`].

pub mod bitangents;
pub mod error;
pub mod exact;
pub mod forms;
pub mod harness;
pub mod linalg;
mod modular;
pub mod netcubics;
pub mod picsheaf;
pub mod presentations;
pub mod ramification;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Field;

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;
/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;
/// Dense exact matrix.
pub type QMatrix = linalg::Matrix<Rational>;
/// Dense floating-point matrix (display helpers only).
pub type FMatrix = linalg::Matrix<f64>;

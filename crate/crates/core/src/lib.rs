//! Higher-order digital sequences and point sets over F2.
//!
//! The crate builds generalized Niederreiter generating matrices, interlaces
//! them into order-2 digital sequences, and provides exact checks for the
//! resulting nets: dual-set minimal weights, row-independence strength,
//! Walsh character identities and L2/Lq discrepancy.
//!
//! All point construction is done in exact integer arithmetic. Coordinates
//! are dyadic rationals `numerator / 2^W` with `W <= 64`; floating point only
//! enters in [`discrepancy`].

pub mod discrepancy;
pub mod duality;
mod error;
pub mod genmat;
pub mod gf2;
pub mod points;
pub mod walsh;

pub use error::{Budget, Error, Result};
pub use genmat::{GeneratingMatrixSet, MatrixKind};
pub use gf2::{BitMatrix, BitVector, Gf2Poly};
pub use points::{DyadicValue, PointSet, Provenance, ShiftVector};

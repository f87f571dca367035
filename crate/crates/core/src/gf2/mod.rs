//! Polynomial and linear algebra over F2.
//!
//! [`Gf2Poly`] packs a polynomial of degree at most 63 into one machine word,
//! bit `l` holding the coefficient of `x^l`. [`BitMatrix`] stores rows as
//! packed bit arrays; [`BitMatrix::kernel_basis`] is the one Gaussian
//! elimination routine used for all rank and null-space questions.

mod matrix;
mod poly;

pub use matrix::{BitMatrix, BitVector};
pub use poly::{irreducible_sequence, laurent_coefficients, Gf2Poly, Irreducibles};

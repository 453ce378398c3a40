//! Toeplitz symbols of two-variable compressed shifts attached to rational
//! inner functions on the bidisk.
//!
//! The crate is organised bottom-up:
//!
//! * [`poly`] – univariate and bivariate complex polynomials, roots, resultants.
//! * [`rif`] – validated rational inner functions, slices, exceptional sets.
//! * [`agler`] – Agler decomposition data for small-degree factors and products.
//! * [`symbol`] – rational matrix symbols, product assembly, evaluation.
//! * [`numrange`] – numerical ranges of matrices and symbols, openness test.
//! * [`equiv`] – Blaschke-ratio detection and pointwise unitary similarity.

pub mod agler;
pub mod equiv;
pub mod error;
pub mod fixtures;
pub mod gram;
pub mod hull;
pub mod linalg;
pub mod numrange;
pub mod poly;
pub mod rational;
pub mod rif;
pub mod symbol;
pub mod toeplitz;

pub use error::{Error, Result};

/// Complex double used throughout.
pub type C64 = num_complex::Complex<f64>;

/// Shorthand constructor for [`C64`].
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

//! Exact fractional power series, cyclotomic products and representation
//! functions of multilinear forms.
//!
//! Everything is computed over the rationals with no floating point in the
//! arithmetic paths. See the crate README for a tour of the modules.

pub mod arith;
pub mod cyclotomic;
pub mod error;
pub mod fps;
pub mod lattice;
pub mod mspec;
pub mod poly;
pub mod rational;
pub mod repfn;
pub mod solver;

pub use error::{Error, Result};
pub use fps::{FracSeries, SeriesOrder, Valuation};
pub use mspec::MSpec;
pub use poly::IntPolynomial;
pub use rational::Rational;

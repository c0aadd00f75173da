//! Exact certificates of univariate polynomial positivity.

pub mod arith;
pub mod certio;
pub mod cli;
pub mod error;
pub mod fanin;
pub mod interval;
pub mod karlin;
pub mod pertsos;
pub mod roots;
pub mod upoly;
pub mod usos;

pub use arith::{Dyadic, DyadicComplex, Rational};
pub use error::{Error, Result, Witness};
pub use upoly::RatPoly;

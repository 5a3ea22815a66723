pub mod charlier;
pub mod cli;
pub mod error;
pub mod kernels;
pub mod ladder;
pub mod ratcore;
pub mod recurrences;
pub mod sobolev;
pub mod suite;
pub mod zeros;

pub use error::{Error, Result};
pub use ratcore::{Poly, RatFunc, Rational};

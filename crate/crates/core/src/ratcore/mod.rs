//! Exact scalars, polynomials and rational functions.

pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{factorial, format_rational, int, parse_rational, pochhammer, pow, rat, to_f64, Rational};

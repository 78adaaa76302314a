//! Exact arithmetic over ℚ in one variable q (standing for 𝕃^{1/2}).

mod poly;
mod ratfunc;
pub mod rational;
mod zpoly;

pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{binomial, parse_rational, rat, int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("pole of order {order} at q = {at}")]
    Pole { at: Rational, order: i64 },
}

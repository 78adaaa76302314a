//! Slope stability τ(α) = Σ α_i μ(i) / Σ α_i.

use crate::arith::{parse_rational, Rational};
use crate::classes::DimVector;
use crate::quiver::{QuiverError, SelfDualQuiver};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeFunction {
    mu: Vec<Rational>,
    self_dual: bool,
    /// μ(i) = scaled[i] / common
    scaled: Vec<i128>,
}

#[derive(Debug, thiserror::Error)]
pub enum SlopeError {
    #[error("malformed slope entry {0:?}; expected name=value")]
    Syntax(String),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("slope value {0} too large")]
    TooLarge(String),
    #[error("slope has {got} entries, quiver has {expected} vertices")]
    Length { got: usize, expected: usize },
}

impl SlopeFunction {
    pub fn new(quiver: &SelfDualQuiver, mu: Vec<Rational>) -> Result<Self, SlopeError> {
        if mu.len() != quiver.num_vertices() {
            return Err(SlopeError::Length { got: mu.len(), expected: quiver.num_vertices() });
        }
        let self_dual = (0..mu.len()).all(|i| mu[quiver.vertex_dual(i)] == -&mu[i]);
        SlopeFunction::build(mu, self_dual)
    }

    /// Slope function on abstract coordinates, with no quiver attached and
    /// hence not marked self-dual. Comparisons with 0 still work.
    pub fn from_values(mu: Vec<Rational>) -> Result<Self, SlopeError> {
        SlopeFunction::build(mu, false)
    }

    fn build(mu: Vec<Rational>, self_dual: bool) -> Result<Self, SlopeError> {
        let common = mu.iter().fold(BigInt::one(), |l, m| l.lcm(m.denom()));
        let scaled = mu
            .iter()
            .map(|m| {
                (m.numer() * (&common / m.denom()))
                    .to_i128()
                    .filter(|x| x.abs() < 1 << 60)
                    .ok_or_else(|| SlopeError::TooLarge(m.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SlopeFunction { mu, self_dual, scaled })
    }

    pub fn from_ints(quiver: &SelfDualQuiver, mu: &[i64]) -> Result<Self, SlopeError> {
        SlopeFunction::new(quiver, mu.iter().map(|&m| Rational::from_integer(m.into())).collect())
    }

    pub fn trivial(quiver: &SelfDualQuiver) -> Self {
        SlopeFunction::new(quiver, vec![Rational::zero(); quiver.num_vertices()]).expect("zero slope")
    }

    /// Parses `"i=1,j=-1/2"`; unnamed vertices get slope 0.
    pub fn parse(quiver: &SelfDualQuiver, s: &str) -> Result<Self, SlopeError> {
        let mut mu = vec![Rational::zero(); quiver.num_vertices()];
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part.split_once('=').ok_or_else(|| SlopeError::Syntax(part.into()))?;
            let i = quiver
                .vertex_index(k.trim())
                .ok_or_else(|| QuiverError::UnknownVertex(k.trim().into()))?;
            mu[i] = parse_rational(v).map_err(|_| SlopeError::Syntax(part.into()))?;
        }
        SlopeFunction::new(quiver, mu)
    }

    pub fn mu(&self) -> &[Rational] {
        &self.mu
    }

    pub fn is_self_dual(&self) -> bool {
        self.self_dual
    }

    pub fn is_trivial(&self) -> bool {
        self.mu.iter().all(|m| m.is_zero())
    }

    pub fn slope(&self, a: &DimVector) -> Result<Rational, QuiverError> {
        if a.is_zero() {
            return Err(QuiverError::ZeroClass);
        }
        let s: Rational = a.entries().iter().zip(&self.mu).map(|(&x, m)| m * Rational::from_integer(x.into())).sum();
        Ok(s / Rational::from_integer(a.total().into()))
    }

    /// Fast exact comparison key for τ(α); α must be nonzero.
    pub fn key(&self, a: &DimVector) -> SlopeKey {
        debug_assert!(!a.is_zero());
        let num = a.entries().iter().zip(&self.scaled).map(|(&x, m)| x as i128 * m).sum();
        SlopeKey { num, den: a.total() as i128 }
    }

    /// Sign of τ(α) (0 for α = 0).
    pub fn sign(&self, a: &DimVector) -> Ordering {
        let num: i128 = a.entries().iter().zip(&self.scaled).map(|(&x, m)| x as i128 * m).sum();
        num.cmp(&0)
    }
}

/// τ(α) up to the common positive factor of the slope function.
#[derive(Clone, Copy, Debug)]
pub struct SlopeKey {
    num: i128,
    den: i128,
}

impl SlopeKey {
    pub fn sign(&self) -> Ordering {
        self.num.cmp(&0)
    }
}

impl PartialEq for SlopeKey {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for SlopeKey {}

impl PartialOrd for SlopeKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for SlopeKey {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.num * o.den).cmp(&(o.num * self.den))
    }
}

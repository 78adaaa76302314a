//! Truncated power series in one variable with `RatFunc` coefficients.

use crate::arith::{binomial, RatFunc, Rational};
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    /// coefficient of s^k for k < len
    coeffs: Vec<RatFunc>,
}

impl PowerSeries {
    pub fn new(mut coeffs: Vec<RatFunc>, order: usize) -> Self {
        coeffs.resize(order, RatFunc::zero());
        PowerSeries { coeffs }
    }

    pub fn one(order: usize) -> Self {
        PowerSeries::new(vec![RatFunc::one()], order)
    }

    /// c0 + c1·s
    pub fn linear(c0: RatFunc, c1: RatFunc, order: usize) -> Self {
        PowerSeries::new(vec![c0, c1], order)
    }

    /// c·s^k
    pub fn monomial(k: usize, c: RatFunc, order: usize) -> Self {
        let mut v = vec![RatFunc::zero(); k + 1];
        v[k] = c;
        PowerSeries::new(v, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &RatFunc {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn add(&self, o: &PowerSeries) -> PowerSeries {
        PowerSeries { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn mul(&self, o: &PowerSeries) -> PowerSeries {
        let n = self.order().min(o.order());
        let mut c = vec![RatFunc::zero(); n];
        for i in 0..n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !o.coeffs[j].is_zero() {
                    c[i + j] += &(&self.coeffs[i] * &o.coeffs[j]);
                }
            }
        }
        PowerSeries { coeffs: c }
    }

    /// self^r for rational r; requires constant term 1.
    pub fn pow(&self, r: &Rational) -> PowerSeries {
        assert!(self.coeffs[0].is_one(), "pow needs constant term 1");
        let n = self.order();
        let mut f = self.clone();
        f.coeffs[0] = RatFunc::zero();
        // (1 + f)^r = Σ binom(r, k) f^k
        let mut acc = PowerSeries::one(n);
        let mut fk = PowerSeries::one(n);
        for k in 1..n {
            fk = fk.mul(&f);
            let b = binomial(r, k as u32);
            if b.is_zero() {
                continue;
            }
            acc = acc.add(&PowerSeries { coeffs: fk.coeffs.iter().map(|c| c.scale_by(&b)).collect() });
        }
        acc
    }

    pub fn inv(&self) -> PowerSeries {
        let c0 = self.coeffs[0].clone();
        let normed = PowerSeries { coeffs: self.coeffs.iter().map(|c| c / &c0).collect() };
        let r = normed.pow(&-Rational::one());
        PowerSeries { coeffs: r.coeffs.iter().map(|c| c / &c0).collect() }
    }
}

/// Writes Σ c_k·var^{k·step} with exact exponents.
pub struct SeriesDisplay<'a> {
    pub coeffs: &'a [RatFunc],
    pub step: &'a Rational,
    pub var: &'a str,
}

impl fmt::Display for SeriesDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let e = self.step * Rational::from_integer(k.into());
            if e.is_zero() {
                write!(f, "({c})")?;
            } else if e.is_integer() {
                write!(f, "({c})*{}^{}", self.var, e.numer())?;
            } else {
                write!(f, "({c})*{}^({}/{})", self.var, e.numer(), e.denom())?;
            }
        }
        let e = self.step * Rational::from_integer(self.coeffs.len().into());
        if e.is_integer() {
            write!(f, " + O({}^{})", self.var, e.numer())
        } else {
            write!(f, " + O({}^({}/{}))", self.var, e.numer(), e.denom())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    #[test]
    fn square_root_of_one_minus_s() {
        let f = PowerSeries::linear(RatFunc::one(), RatFunc::from_int(-1), 5);
        let g = f.pow(&rat(1, 2));
        let want = [int(1), rat(-1, 2), rat(-1, 8), rat(-1, 16), rat(-5, 128)];
        for (k, w) in want.iter().enumerate() {
            assert_eq!(g.coeff(k), &RatFunc::constant(w.clone()));
        }
        assert_eq!(g.mul(&g), f);
    }

    #[test]
    fn geometric_inverse() {
        let q = RatFunc::q_pow(1);
        let f = PowerSeries::linear(RatFunc::one(), -&q, 4);
        let g = f.inv();
        assert_eq!(g.coeff(3), &RatFunc::q_pow(3));
        assert_eq!(f.mul(&g), PowerSeries::one(4));
    }

    #[test]
    fn display() {
        let f = PowerSeries::linear(RatFunc::one(), RatFunc::constant(rat(-1, 4)), 2);
        let s = SeriesDisplay { coeffs: f.coeffs(), step: &rat(1, 2), var: "t" }.to_string();
        assert_eq!(s, "(1) + (-1/4)*t^(1/2) + O(t^1)");
    }
}

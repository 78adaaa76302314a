//! Dense integer polynomials. Internal backbone of `RatFunc`.

use super::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct ZPoly {
    /// c[k] is the coefficient of q^k; no trailing zeros.
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn zero() -> Self {
        ZPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        ZPoly::constant(BigInt::one())
    }

    pub fn constant(a: BigInt) -> Self {
        ZPoly::from_vec(vec![a])
    }

    pub fn from_vec(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        ZPoly { c }
    }

    #[cfg(test)]
    pub fn from_i64(c: &[i64]) -> Self {
        ZPoly::from_vec(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// q^n - 1
    pub fn q_pow_minus_one(n: usize) -> Self {
        let mut c = vec![BigInt::zero(); n + 1];
        c[0] = BigInt::from(-1);
        c[n] += BigInt::one();
        ZPoly::from_vec(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> &BigInt {
        self.c.last().expect("leading coefficient of zero polynomial")
    }

    /// Exponent of the lowest nonzero term.
    pub fn valuation(&self) -> usize {
        self.c.iter().position(|x| !x.is_zero()).unwrap_or(0)
    }

    pub fn shift_down(&self, k: usize) -> Self {
        ZPoly { c: self.c[k..].to_vec() }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        ZPoly { c }
    }

    /// q^deg · p(1/q)
    pub fn reversed(&self) -> Self {
        ZPoly::from_vec(self.c.iter().rev().cloned().collect())
    }

    pub fn scale(&self, a: &BigInt) -> Self {
        if a.is_zero() {
            return ZPoly::zero();
        }
        ZPoly { c: self.c.iter().map(|x| x * a).collect() }
    }

    /// Positive gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for x in &self.c {
            g = g.gcd(x);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide out the content and make the leading coefficient positive.
    /// Returns the signed factor removed.
    pub fn make_primitive(&mut self) -> BigInt {
        if self.is_zero() {
            return BigInt::one();
        }
        let mut g = self.content();
        if self.lead().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for x in &mut self.c {
                *x = &*x / &g;
            }
        }
        g
    }

    pub fn primitive(&self) -> Self {
        let mut p = self.clone();
        p.make_primitive();
        p
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + Rational::from_integer(a.clone());
        }
        acc
    }

    /// Pseudo-remainder of self by d: lc(d)^k · self mod d.
    fn pseudo_rem(&self, d: &ZPoly) -> ZPoly {
        let mut r = self.c.clone();
        let dd = d.degree();
        let lc = d.lead();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let a = r[k].clone();
            if a.is_zero() {
                r.pop();
                continue;
            }
            for x in r.iter_mut() {
                *x *= lc;
            }
            let off = k - dd;
            for (i, di) in d.c.iter().enumerate() {
                r[off + i] -= &a * di;
            }
            r.pop();
            let mut p = ZPoly::from_vec(std::mem::take(&mut r));
            let g = p.content();
            if !g.is_zero() && !g.is_one() {
                for x in &mut p.c {
                    *x = &*x / &g;
                }
            }
            r = p.c;
        }
        ZPoly::from_vec(r)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(a: &ZPoly, b: &ZPoly) -> ZPoly {
        if a.is_zero() {
            return b.primitive();
        }
        if b.is_zero() {
            return a.primitive();
        }
        if a.degree() == 0 || b.degree() == 0 {
            return ZPoly::one();
        }
        let (mut x, mut y) = if a.degree() >= b.degree() {
            (a.primitive(), b.primitive())
        } else {
            (b.primitive(), a.primitive())
        };
        while !y.is_zero() {
            if y.degree() == 0 {
                return ZPoly::one();
            }
            let r = x.pseudo_rem(&y).primitive();
            x = y;
            y = r;
        }
        x
    }

    /// Exact quotient; panics if `d` does not divide `self` over the integers.
    pub fn div_exact(&self, d: &ZPoly) -> ZPoly {
        if d.is_one() {
            return self.clone();
        }
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return ZPoly::zero();
        }
        let dd = d.degree();
        assert!(self.degree() >= dd, "inexact polynomial division");
        let lc = d.lead();
        let mut r = self.c.clone();
        let mut qc = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (dd..r.len()).rev() {
            if r[k].is_zero() {
                continue;
            }
            let (qk, rem) = r[k].div_rem(lc);
            assert!(rem.is_zero(), "inexact polynomial division");
            for (i, di) in d.c.iter().enumerate() {
                r[k - dd + i] -= &qk * di;
            }
            qc[k - dd] = qk;
        }
        assert!(r.iter().all(|x| x.is_zero()), "inexact polynomial division");
        ZPoly::from_vec(qc)
    }

    /// Multiplicity of the linear factor (b·q − a) where x0 = a/b.
    pub fn root_multiplicity(&self, x0: &Rational) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let lin = ZPoly::from_vec(vec![-x0.numer().clone(), x0.denom().clone()]);
        let mut p = self.primitive();
        let mut m = 0;
        while p.degree() >= 1 && p.eval(x0).is_zero() {
            p = p.div_exact(&lin);
            m += 1;
        }
        m
    }
}

impl Add for &ZPoly {
    type Output = ZPoly;
    fn add(self, o: &ZPoly) -> ZPoly {
        let (long, short) = if self.c.len() >= o.c.len() { (self, o) } else { (o, self) };
        let mut c = long.c.clone();
        for (x, y) in c.iter_mut().zip(&short.c) {
            *x += y;
        }
        ZPoly::from_vec(c)
    }
}

impl Sub for &ZPoly {
    type Output = ZPoly;
    fn sub(self, o: &ZPoly) -> ZPoly {
        self + &(-o)
    }
}

impl Neg for &ZPoly {
    type Output = ZPoly;
    fn neg(self) -> ZPoly {
        ZPoly { c: self.c.iter().map(|x| -x).collect() }
    }
}

impl Mul for &ZPoly {
    type Output = ZPoly;
    fn mul(self, o: &ZPoly) -> ZPoly {
        if self.is_zero() || o.is_zero() {
            return ZPoly::zero();
        }
        if self.is_one() {
            return o.clone();
        }
        if o.is_one() {
            return self.clone();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        ZPoly::from_vec(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    #[test]
    fn gcd_of_cyclotomic_products() {
        // (q^4-1) and (q^6-1) share q^2-1
        let a = ZPoly::q_pow_minus_one(4);
        let b = ZPoly::q_pow_minus_one(6);
        assert_eq!(ZPoly::gcd(&a, &b), ZPoly::from_i64(&[-1, 0, 1]));
        let c = ZPoly::from_i64(&[3, 2]);
        assert_eq!(ZPoly::gcd(&(&a * &c), &(&c * &b)), &c * &ZPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn exact_division_and_roots() {
        let a = ZPoly::from_i64(&[-1, 0, 1]);
        let sq = &a * &a;
        assert_eq!(sq.div_exact(&a), a);
        assert_eq!(sq.root_multiplicity(&int(1)), 2);
        assert_eq!(sq.root_multiplicity(&int(-1)), 2);
        assert_eq!(sq.root_multiplicity(&rat(1, 2)), 0);
        let lin = ZPoly::from_i64(&[-1, 2]);
        assert_eq!((&lin * &a).root_multiplicity(&rat(1, 2)), 1);
    }

    #[test]
    fn reverse_and_valuation() {
        let p = ZPoly::from_i64(&[0, 0, 1, 2]);
        assert_eq!(p.valuation(), 2);
        assert_eq!(p.shift_down(2).reversed(), ZPoly::from_i64(&[2, 1]));
    }
}

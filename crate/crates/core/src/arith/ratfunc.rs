use super::poly::Poly;
use super::rational::{format_rational, parse_rational, Rational};
use super::zpoly::ZPoly;
use super::ArithError;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Exact rational function in q, kept as `scale · q^shift · num/den` with
/// `num`, `den` primitive integer polynomials, positive leading coefficients,
/// nonzero constant terms and no common factor. That form is unique, so
/// structural equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    scale: Rational,
    shift: i64,
    num: ZPoly,
    den: ZPoly,
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc { scale: Rational::zero(), shift: 0, num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn one() -> Self {
        RatFunc::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { scale: c, shift: 0, num: ZPoly::one(), den: ZPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::constant(Rational::from_integer(n.into()))
    }

    /// q^k
    pub fn q_pow(k: i64) -> Self {
        RatFunc { scale: Rational::one(), shift: k, num: ZPoly::one(), den: ZPoly::one() }
    }

    /// q − q^{-1}
    pub fn q_minus_q_inv() -> Self {
        RatFunc {
            scale: Rational::one(),
            shift: -1,
            num: ZPoly::q_pow_minus_one(2),
            den: ZPoly::one(),
        }
    }

    /// 1/(q^n − 1), n ≥ 1.
    pub(crate) fn inv_q_pow_minus_one(n: usize) -> Self {
        // q^n - 1 = -(1 - q^n); keep the leading coefficient positive.
        RatFunc { scale: Rational::one(), shift: 0, num: ZPoly::one(), den: ZPoly::q_pow_minus_one(n) }
    }

    /// Canonical form of `q^shift · num/den`.
    pub fn normalize(num: &Poly, den: &Poly, shift: i64) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        let (sn, zn) = to_zpoly(num);
        let (sd, zd) = to_zpoly(den);
        Ok(RatFunc::from_parts(sn / sd, shift, zn, zd))
    }

    pub fn from_poly(p: &Poly) -> Self {
        RatFunc::normalize(p, &Poly::one(), 0).expect("unit denominator")
    }

    /// Full normalization of arbitrary integer parts.
    fn from_parts(scale: Rational, shift: i64, mut num: ZPoly, mut den: ZPoly) -> Self {
        if scale.is_zero() || num.is_zero() {
            return RatFunc::zero();
        }
        let vn = num.valuation();
        let vd = den.valuation();
        if vn > 0 {
            num = num.shift_down(vn);
        }
        if vd > 0 {
            den = den.shift_down(vd);
        }
        let g = ZPoly::gcd(&num, &den);
        if !g.is_one() {
            num = num.div_exact(&g);
            den = den.div_exact(&g);
        }
        let cn = num.make_primitive();
        let cd = den.make_primitive();
        RatFunc {
            scale: scale * Rational::new(cn, cd),
            shift: shift + vn as i64 - vd as i64,
            num,
            den,
        }
    }

    /// Normalization when `num`/`den` are already coprime and `den` is canonical.
    fn from_coprime(scale: Rational, shift: i64, mut num: ZPoly, den: ZPoly) -> Self {
        if scale.is_zero() || num.is_zero() {
            return RatFunc::zero();
        }
        let vn = num.valuation();
        if vn > 0 {
            num = num.shift_down(vn);
        }
        let cn = num.make_primitive();
        RatFunc { scale: scale * Rational::from_integer(cn), shift: shift + vn as i64, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.is_monomial() && self.scale.is_one()
    }

    fn is_monomial(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    /// Numerator over ℚ, with the denominator made monic.
    pub fn num(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let s = &self.scale / Rational::from_integer(self.den.lead().clone());
        zpoly_to_poly(&self.num, &s)
    }

    /// Monic denominator.
    pub fn den(&self) -> Poly {
        let s = Rational::new(BigInt::one(), self.den.lead().clone());
        zpoly_to_poly(&self.den, &s)
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// Laurent coefficients (exponent, coefficient) when the denominator is 1.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, Rational)>> {
        if !self.is_laurent() {
            return None;
        }
        if self.is_zero() {
            return Some(Vec::new());
        }
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(e, c)| (e as i64 + self.shift, &self.scale * Rational::from_integer(c.clone())))
                .collect(),
        )
    }

    pub fn scale_by(&self, c: &Rational) -> Self {
        if c.is_zero() || self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { scale: &self.scale * c, ..self.clone() }
    }

    pub fn mul_q_pow(&self, k: i64) -> Self {
        if self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc { shift: self.shift + k, ..self.clone() }
    }

    pub fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc {
            scale: self.scale.recip(),
            shift: -self.shift,
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of zero rational function")
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    /// The substitution q ↦ q^{-1}.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return RatFunc::zero();
        }
        let mut n = self.num.reversed();
        let mut d = self.den.reversed();
        let sn = n.make_primitive();
        let sd = d.make_primitive();
        RatFunc {
            scale: &self.scale * Rational::new(sn, sd),
            shift: -self.shift - self.num.degree() as i64 + self.den.degree() as i64,
            num: n,
            den: d,
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    /// Multiplicity of (q − q0) in the denominator minus that in the numerator.
    /// Zeros come out negative; the zero function reports 0.
    pub fn pole_order_at(&self, q0: &Rational) -> i64 {
        if self.is_zero() {
            return 0;
        }
        if q0.is_zero() {
            return -self.shift;
        }
        self.den.root_multiplicity(q0) as i64 - self.num.root_multiplicity(q0) as i64
    }

    pub fn eval_at(&self, q0: &Rational) -> Result<Rational, ArithError> {
        if self.is_zero() {
            return Ok(Rational::zero());
        }
        let order = self.pole_order_at(q0);
        if order > 0 {
            return Err(ArithError::Pole { at: q0.clone(), order });
        }
        if q0.is_zero() {
            return Ok(if self.shift == 0 {
                &self.scale * self.num.eval(q0) / self.den.eval(q0)
            } else {
                Rational::zero()
            });
        }
        let p = if self.shift >= 0 {
            num_traits::pow(q0.clone(), self.shift as usize)
        } else {
            num_traits::pow(q0.recip(), self.shift.unsigned_abs() as usize)
        };
        Ok(&self.scale * p * self.num.eval(q0) / self.den.eval(q0))
    }

    /// Value at q = −1, the Euler-characteristic specialization.
    pub fn at_minus_one(&self) -> Result<Rational, ArithError> {
        self.eval_at(&-Rational::one())
    }

    fn sum(a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        let e = a.shift.min(b.shift);
        let na = a.num.shift_up((a.shift - e) as usize);
        let nb = b.num.shift_up((b.shift - e) as usize);
        let l = a.scale.denom().lcm(b.scale.denom());
        let ka = a.scale.numer() * (&l / a.scale.denom());
        let kb = b.scale.numer() * (&l / b.scale.denom());
        let lscale = Rational::new(BigInt::one(), l);
        if a.den == b.den {
            let t = &na.scale(&ka) + &nb.scale(&kb);
            if a.den.is_one() {
                return RatFunc::from_coprime(lscale, e, t, ZPoly::one());
            }
            return RatFunc::from_parts(lscale, e, t, a.den.clone());
        }
        let g = ZPoly::gcd(&a.den, &b.den);
        let (da, db) = if g.is_one() {
            (a.den.clone(), b.den.clone())
        } else {
            (a.den.div_exact(&g), b.den.div_exact(&g))
        };
        let t = &(&na.scale(&ka) * &db) + &(&nb.scale(&kb) * &da);
        if t.is_zero() {
            return RatFunc::zero();
        }
        let mut d = &da * &b.den;
        let mut t = t;
        if !g.is_one() {
            let h = ZPoly::gcd(&t, &g);
            if !h.is_one() {
                t = t.div_exact(&h);
                d = d.div_exact(&h);
            }
        }
        RatFunc::from_coprime(lscale, e, t, d)
    }

    fn product(a: &RatFunc, b: &RatFunc) -> RatFunc {
        if a.is_zero() || b.is_zero() {
            return RatFunc::zero();
        }
        let scale = &a.scale * &b.scale;
        let shift = a.shift + b.shift;
        if a.is_monomial() {
            return RatFunc { scale, shift, num: b.num.clone(), den: b.den.clone() };
        }
        if b.is_monomial() {
            return RatFunc { scale, shift, num: a.num.clone(), den: a.den.clone() };
        }
        let g1 = ZPoly::gcd(&a.num, &b.den);
        let g2 = ZPoly::gcd(&b.num, &a.den);
        let num = &a.num.div_exact(&g1) * &b.num.div_exact(&g2);
        let den = &a.den.div_exact(&g2) * &b.den.div_exact(&g1);
        RatFunc { scale, shift, num, den }
    }
}

fn to_zpoly(p: &Poly) -> (Rational, ZPoly) {
    let Some(deg) = p.degree() else {
        return (Rational::zero(), ZPoly::zero());
    };
    let mut l = BigInt::one();
    for (_, c) in p.terms() {
        l = l.lcm(c.denom());
    }
    let mut v = vec![BigInt::zero(); deg as usize + 1];
    for (e, c) in p.terms() {
        v[e as usize] = c.numer() * (&l / c.denom());
    }
    (Rational::new(BigInt::one(), l), ZPoly::from_vec(v))
}

fn zpoly_to_poly(p: &ZPoly, s: &Rational) -> Poly {
    Poly::from_terms(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(e, c)| (e as u32, s * Rational::from_integer(c.clone()))),
    )
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

impl From<Rational> for RatFunc {
    fn from(c: Rational) -> Self {
        RatFunc::constant(c)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl $tr<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, o: &RatFunc) -> RatFunc {
                $f(self, o)
            }
        }
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                $f(&self, &o)
            }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: &RatFunc) -> RatFunc {
                $f(&self, o)
            }
        }
        impl $tr<RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc {
                $f(self, &o)
            }
        }
    };
}

forward_binop!(Add, add, RatFunc::sum);
forward_binop!(Sub, sub, |a: &RatFunc, b: &RatFunc| RatFunc::sum(a, &-b));
forward_binop!(Mul, mul, RatFunc::product);
forward_binop!(Div, div, |a: &RatFunc, b: &RatFunc| RatFunc::product(a, &b.inv()));

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { scale: -&self.scale, ..self.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(mut self) -> RatFunc {
        self.scale = -self.scale;
        self
    }
}

impl AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, o: &RatFunc) {
        *self = RatFunc::sum(self, o);
    }
}

impl SubAssign<&RatFunc> for RatFunc {
    fn sub_assign(&mut self, o: &RatFunc) {
        *self = RatFunc::sum(self, &-o);
    }
}

impl MulAssign<&RatFunc> for RatFunc {
    fn mul_assign(&mut self, o: &RatFunc) {
        *self = RatFunc::product(self, o);
    }
}

impl std::iter::Sum for RatFunc {
    fn sum<I: Iterator<Item = RatFunc>>(iter: I) -> RatFunc {
        iter.fold(RatFunc::zero(), |a, b| a + b)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let num = self.num();
        if self.is_laurent() {
            return num.fmt_in("q", self.shift, f);
        }
        write!(f, "(")?;
        num.fmt_in("q", self.shift, f)?;
        write!(f, ")/(")?;
        self.den().fmt_in("q", 0, f)?;
        write!(f, ")")
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{self}]")
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    shift: i64,
    num: Vec<(u32, String)>,
    den: Vec<(u32, String)>,
}

fn poly_to_wire(p: &Poly) -> Vec<(u32, String)> {
    p.terms().map(|(e, c)| (e, format_rational(c))).collect()
}

fn wire_to_poly(v: &[(u32, String)]) -> Result<Poly, String> {
    let mut p = Poly::zero();
    for (e, c) in v {
        p.add_term(*e, parse_rational(c).map_err(|e| e.to_string())?);
    }
    Ok(p)
}

impl Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire { shift: self.shift, num: poly_to_wire(&self.num()), den: poly_to_wire(&self.den()) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let w = Wire::deserialize(d)?;
        let num = wire_to_poly(&w.num).map_err(D::Error::custom)?;
        let den = wire_to_poly(&w.den).map_err(D::Error::custom)?;
        RatFunc::normalize(&num, &den, w.shift).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn normalize_examples() {
        let f = RatFunc::normalize(&p(&[-1, 0, 1]), &p(&[-1, 1]), 0).unwrap();
        assert_eq!(f, RatFunc::from_poly(&p(&[1, 1])));
        let g = RatFunc::normalize(&p(&[0, 1]), &p(&[0, 1]), 0).unwrap();
        assert!(g.is_one());
        let h = RatFunc::normalize(&p(&[0, -1, 0, 1]), &p(&[0, 1, 1]), 0).unwrap();
        assert_eq!(h.shift(), 0);
        assert_eq!(h.num(), p(&[-1, 1]));
        assert_eq!(h.den(), Poly::one());
        assert_eq!(
            RatFunc::normalize(&p(&[1]), &Poly::zero(), 0),
            Err(ArithError::ZeroDenominator)
        );
    }

    #[test]
    fn monic_denominator_absorbs_scale() {
        let f = RatFunc::normalize(&p(&[3]), &p(&[2, 4]), 0).unwrap();
        assert_eq!(f.den(), Poly::from_terms([(0, rat(1, 2)), (1, int(1))]));
        assert_eq!(f.num(), Poly::constant(rat(3, 4)));
    }

    #[test]
    fn eval_examples() {
        let f = RatFunc::normalize(&p(&[-1, 0, 1]), &p(&[-1, 1]), 0).unwrap();
        assert_eq!(f.eval_at(&int(1)).unwrap(), int(2));
        let g = RatFunc::normalize(&p(&[1]), &p(&[1, 0, 1]), 0).unwrap();
        assert_eq!(g.eval_at(&int(-1)).unwrap(), rat(1, 2));
        assert_eq!(g.eval_at(&int(1)).unwrap(), rat(1, 2));
        let h = RatFunc::inv_q_pow_minus_one(2);
        assert_eq!(h.eval_at(&int(-1)), Err(ArithError::Pole { at: int(-1), order: 1 }));
    }

    #[test]
    fn pole_orders() {
        let f = RatFunc::inv_q_pow_minus_one(2);
        assert_eq!(f.pole_order_at(&int(-1)), 1);
        assert_eq!(RatFunc::from_poly(&p(&[1, 1])).pole_order_at(&int(-1)), -1);
        assert_eq!((&f * &f).pole_order_at(&int(1)), 2);
        assert_eq!(RatFunc::q_pow(-3).pole_order_at(&int(0)), 3);
    }

    #[test]
    fn arithmetic_cancels() {
        let a = RatFunc::inv_q_pow_minus_one(2);
        let b = RatFunc::inv_q_pow_minus_one(4);
        // 1/(q^2-1) - 1/(q^4-1) = q^2/(q^4-1)
        let d = &a - &b;
        assert_eq!(d, RatFunc::q_pow(2) * &b);
        assert!((&d - &d).is_zero());
        assert!((&a * &a.inv()).is_one());
    }

    #[test]
    fn bar_and_symmetry() {
        let x = RatFunc::q_minus_q_inv();
        assert_eq!(x.bar(), -&x);
        let sym = &RatFunc::q_pow(1) + &RatFunc::q_pow(-1);
        assert!(sym.is_bar_invariant());
        let f = RatFunc::inv_q_pow_minus_one(2).mul_q_pow(1);
        // q/(q^2-1) is bar-anti-invariant
        assert_eq!(f.bar(), -&f);
    }

    #[test]
    fn display_forms() {
        assert_eq!(RatFunc::q_minus_q_inv().to_string(), "-q^-1 + q");
        assert_eq!(RatFunc::inv_q_pow_minus_one(2).mul_q_pow(1).to_string(), "(q)/(-1 + q^2)");
        assert_eq!(RatFunc::constant(rat(-1, 4)).to_string(), "-1/4");
    }

    #[test]
    fn serde_round_trip() {
        let f = RatFunc::normalize(&p(&[3, 0, -2]), &p(&[2, 4, 6]), -3).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"shift":-3,"num":[[0,"1/2"],[2,"-1/3"]],"den":[[0,"1/3"],[1,"2/3"],[2,"1/1"]]}"#);
        let g: RatFunc = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
        assert_eq!(serde_json::to_string(&g).unwrap(), s);
    }
}

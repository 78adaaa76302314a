//! The quantum torus Λ and its twisted module Λ^sd, truncated by total dimension.
//!
//! λ_α ∗ λ_β = q^{A(α,β)}/(q − q^{-1}) · λ_{α+β}
//! λ_α ⋄ λ^sd_θ = q^{B(α,θ)}/(q − q^{-1}) · λ^sd_{α+θ+α^∨}

use crate::arith::{RatFunc, Rational};
use crate::classes::{DimVector, SdClass};
use crate::quiver::{Forms, SelfDualQuiver};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElem {
    support: BTreeMap<DimVector, RatFunc>,
    bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusModElem {
    support: BTreeMap<SdClass, RatFunc>,
    bound: u32,
}

fn insert_add<K: Ord>(map: &mut BTreeMap<K, RatFunc>, k: K, c: RatFunc) {
    if c.is_zero() {
        return;
    }
    match map.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// (q^a − q^{-a})/(q − q^{-1}), a Laurent polynomial.
pub fn q_number(a: i64) -> RatFunc {
    let n = a.unsigned_abs() as i64;
    let s: RatFunc = (0..n).map(|k| RatFunc::q_pow(n - 1 - 2 * k)).sum();
    if a < 0 {
        -s
    } else {
        s
    }
}

impl TorusElem {
    pub fn zero(bound: u32) -> Self {
        TorusElem { support: BTreeMap::new(), bound }
    }

    /// c·λ_α (dropped if |α| > bound).
    pub fn term(a: DimVector, c: RatFunc, bound: u32) -> Self {
        let mut x = TorusElem::zero(bound);
        x.add_term(a, c);
        x
    }

    pub fn generator(a: DimVector, bound: u32) -> Self {
        TorusElem::term(a, RatFunc::one(), bound)
    }

    /// The algebra unit (q − q^{-1})·λ_0.
    pub fn unit(n: usize, bound: u32) -> Self {
        TorusElem::term(DimVector::zero(n), RatFunc::q_minus_q_inv(), bound)
    }

    pub fn from_map(map: BTreeMap<DimVector, RatFunc>, bound: u32) -> Self {
        let mut x = TorusElem::zero(bound);
        for (a, c) in map {
            x.add_term(a, c);
        }
        x
    }

    pub fn add_term(&mut self, a: DimVector, c: RatFunc) {
        if a.total() <= self.bound {
            insert_add(&mut self.support, a, c);
        }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn support(&self) -> &BTreeMap<DimVector, RatFunc> {
        &self.support
    }

    pub fn coeff(&self, a: &DimVector) -> RatFunc {
        self.support.get(a).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, o: &TorusElem) -> TorusElem {
        let mut x = TorusElem { support: self.support.clone(), bound: self.bound.min(o.bound) };
        x.support.retain(|a, _| a.total() <= x.bound);
        for (a, c) in &o.support {
            x.add_term(a.clone(), c.clone());
        }
        x
    }

    pub fn sub(&self, o: &TorusElem) -> TorusElem {
        self.add(&o.scale(&RatFunc::from_int(-1)))
    }

    pub fn scale(&self, c: &RatFunc) -> TorusElem {
        let mut x = TorusElem::zero(self.bound);
        for (a, v) in &self.support {
            x.add_term(a.clone(), v * c);
        }
        x
    }
}

impl TorusModElem {
    pub fn zero(bound: u32) -> Self {
        TorusModElem { support: BTreeMap::new(), bound }
    }

    pub fn term(t: SdClass, c: RatFunc, bound: u32) -> Self {
        let mut x = TorusModElem::zero(bound);
        x.add_term(t, c);
        x
    }

    pub fn generator(t: SdClass, bound: u32) -> Self {
        TorusModElem::term(t, RatFunc::one(), bound)
    }

    pub fn add_term(&mut self, t: SdClass, c: RatFunc) {
        if t.total() <= self.bound {
            insert_add(&mut self.support, t, c);
        }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn support(&self) -> &BTreeMap<SdClass, RatFunc> {
        &self.support
    }

    pub fn coeff(&self, t: &SdClass) -> RatFunc {
        self.support.get(t).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn add(&self, o: &TorusModElem) -> TorusModElem {
        let mut x = TorusModElem { support: self.support.clone(), bound: self.bound.min(o.bound) };
        x.support.retain(|t, _| t.total() <= x.bound);
        for (t, c) in &o.support {
            x.add_term(t.clone(), c.clone());
        }
        x
    }

    pub fn sub(&self, o: &TorusModElem) -> TorusModElem {
        self.add(&o.scale(&RatFunc::from_int(-1)))
    }

    pub fn scale(&self, c: &RatFunc) -> TorusModElem {
        let mut x = TorusModElem::zero(self.bound);
        for (t, v) in &self.support {
            x.add_term(t.clone(), v * c);
        }
        x
    }
}

pub fn star(f: &Forms<'_>, x: &TorusElem, y: &TorusElem) -> TorusElem {
    let bound = x.bound.min(y.bound);
    let inv = RatFunc::q_minus_q_inv().inv();
    let mut out = TorusElem::zero(bound);
    for (a, c) in &x.support {
        for (b, d) in &y.support {
            if a.total() + b.total() > bound {
                continue;
            }
            let v = (c * d * &inv).mul_q_pow(f.a(a, b));
            out.add_term(a + b, v);
        }
    }
    out
}

pub fn diamond(f: &Forms<'_>, x: &TorusElem, m: &TorusModElem) -> TorusModElem {
    let bound = x.bound.min(m.bound);
    let inv = RatFunc::q_minus_q_inv().inv();
    let q = f.quiver();
    let mut out = TorusModElem::zero(bound);
    for (a, c) in &x.support {
        let ad = q.dual_vector(a);
        for (t, d) in &m.support {
            if 2 * a.total() + t.total() > bound {
                continue;
            }
            let v = (c * d * &inv).mul_q_pow(f.b(a, t.as_dim()));
            out.add_term(SdClass(&(a + t.as_dim()) + &ad), v);
        }
    }
    out
}

pub fn bracket(f: &Forms<'_>, x: &TorusElem, y: &TorusElem) -> TorusElem {
    star(f, x, y).sub(&star(f, y, x))
}

/// λ_α ↦ λ_{α^∨}; coefficients are left alone.
pub fn dualize(q: &SelfDualQuiver, x: &TorusElem) -> TorusElem {
    let mut out = TorusElem::zero(x.bound);
    for (a, c) in &x.support {
        out.add_term(q.dual_vector(a), c.clone());
    }
    out
}

/// x ♥ m = x ⋄ m − x^∨ ⋄ m
pub fn heart(f: &Forms<'_>, x: &TorusElem, m: &TorusModElem) -> TorusModElem {
    diamond(f, x, m).sub(&diamond(f, &dualize(f.quiver(), x), m))
}

fn assert_no_constant(x: &TorusElem) {
    assert!(
        x.support.keys().all(|a| !a.is_zero()),
        "exp/log need an element without λ_0 term"
    );
}

/// exp in Λ (unit (q − q^{-1})λ_0) of an element with no λ_0 term.
pub fn exp(f: &Forms<'_>, x: &TorusElem) -> TorusElem {
    assert_no_constant(x);
    let n = f.quiver().num_vertices();
    let mut acc = TorusElem::unit(n, x.bound);
    let mut pw = TorusElem::unit(n, x.bound);
    for k in 1..=x.bound {
        pw = star(f, &pw, x).scale(&RatFunc::constant(Rational::new(1.into(), k.into())));
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw);
    }
    acc
}

/// log(unit + x) for x with no λ_0 term.
pub fn log_one_plus(f: &Forms<'_>, x: &TorusElem) -> TorusElem {
    assert_no_constant(x);
    let n = f.quiver().num_vertices();
    let mut acc = TorusElem::zero(x.bound);
    let mut pw = TorusElem::unit(n, x.bound);
    for k in 1..=x.bound {
        pw = star(f, &pw, x);
        if pw.is_zero() {
            break;
        }
        let sign = if k % 2 == 1 { 1 } else { -1 };
        acc = acc.add(&pw.scale(&RatFunc::constant(Rational::new(sign.into(), k.into()))));
    }
    acc
}

/// L(α₁,…,α_n): [[λ_{α₁}, λ_{α₂}], …, λ_{α_n}] = L·λ_{α₁+⋯+α_n}.
pub fn bracket_coeff_l(f: &Forms<'_>, parts: &[DimVector]) -> RatFunc {
    assert!(!parts.is_empty(), "bracket coefficient needs at least one part");
    let total: u32 = parts.iter().map(DimVector::total).sum();
    let mut acc = TorusElem::generator(parts[0].clone(), total);
    let mut sum = parts[0].clone();
    for p in &parts[1..] {
        acc = bracket(f, &acc, &TorusElem::generator(p.clone(), total));
        sum = &sum + p;
    }
    acc.coeff(&sum)
}

/// L^sd(groups; ρ): X₁ ♥ (X₂ ♥ (⋯ (X_m ♥ λ^sd_ρ))) = L^sd·λ^sd_θ where X_k is
/// the iterated bracket of the k-th group.
pub fn bracket_coeff_lsd(f: &Forms<'_>, groups: &[Vec<DimVector>], rho: &SdClass) -> RatFunc {
    let q = f.quiver();
    let mut target = rho.as_dim().clone();
    let mut xs = Vec::new();
    for g in groups {
        let total: u32 = g.iter().map(DimVector::total).sum();
        let mut acc = TorusElem::generator(g[0].clone(), total);
        let mut sum = g[0].clone();
        for p in &g[1..] {
            acc = bracket(f, &acc, &TorusElem::generator(p.clone(), total));
            sum = &sum + p;
        }
        target = &(&target + &sum) + &q.dual_vector(&sum);
        xs.push(acc);
    }
    let bound = target.total();
    let mut m = TorusModElem::generator(rho.clone(), bound);
    for x in xs.iter().rev() {
        let x = TorusElem::from_map(x.support.clone(), bound);
        m = heart(f, &x, &m);
    }
    m.coeff(&SdClass(target))
}

/// ℓ = L at q = −1.
pub fn ell(f: &Forms<'_>, parts: &[DimVector]) -> Rational {
    bracket_coeff_l(f, parts).at_minus_one().expect("bracket coefficients are Laurent polynomials")
}

pub fn ell_sd(f: &Forms<'_>, groups: &[Vec<DimVector>], rho: &SdClass) -> Rational {
    bracket_coeff_lsd(f, groups, rho)
        .at_minus_one()
        .expect("bracket coefficients are Laurent polynomials")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_numbers() {
        assert!(q_number(0).is_zero());
        assert!(q_number(1).is_one());
        assert_eq!(q_number(2), RatFunc::q_pow(1) + RatFunc::q_pow(-1));
        assert_eq!(q_number(-3), -q_number(3));
        for a in -4..=4 {
            let direct = (RatFunc::q_pow(a) - RatFunc::q_pow(-a)) / RatFunc::q_minus_q_inv();
            assert_eq!(q_number(a), direct);
        }
    }
}

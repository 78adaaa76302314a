//! Wall-crossing coefficients and the transform of epsilon integrals from one
//! slope function to another.
//!
//! Coefficients take the parts as actual dimension vectors; every comparison of
//! a part or a partial sum goes through the slope functions.

use crate::arith::{binomial, RatFunc, Rational};
use crate::classes::{DimVector, SdClass};
use crate::decompose::{
    block_sums, chain_exponent, for_each_composition, for_each_sd_decomposition, sd_chain_exponent,
    subdivisions,
};
use crate::invariants::Engine;
use crate::quiver::Forms;
use crate::slope::SlopeFunction;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum WallCrossError {
    #[error("tables computed to different bounds ({left} and {right})")]
    BoundMismatch { left: u32, right: u32 },
    #[error("self-dual wall-crossing needs self-dual slope functions")]
    NotSelfDual,
    #[error("slope functions have {0} and {1} entries")]
    Length(usize, usize),
}

fn sum(parts: &[DimVector]) -> DimVector {
    parts.iter().skip(1).fold(parts[0].clone(), |acc, p| &acc + p)
}

/// S(α₁,…,α_n; τ₊, τ₋) ∈ {−1, 0, 1}.
pub fn coeff_s(parts: &[DimVector], plus: &SlopeFunction, minus: &SlopeFunction) -> i64 {
    let mut acc = 1;
    for i in 0..parts.len().saturating_sub(1) {
        let dec = plus.key(&parts[i]) > plus.key(&parts[i + 1]);
        let split = minus.key(&sum(&parts[..=i])) <= minus.key(&sum(&parts[i + 1..]));
        match (dec, split) {
            (true, true) => {}
            (false, false) => acc = -acc,
            _ => return 0,
        }
    }
    acc
}

/// S^sd(α₁,…,α_n; τ₊, τ₋) ∈ {−1, 0, 1}, with τ₊(α_{n+1}) = 0.
pub fn coeff_s_sd(parts: &[DimVector], plus: &SlopeFunction, minus: &SlopeFunction) -> i64 {
    let n = parts.len();
    let mut acc = 1;
    for i in 0..n {
        let dec = if i + 1 < n {
            plus.key(&parts[i]) > plus.key(&parts[i + 1])
        } else {
            plus.sign(&parts[i]) == Ordering::Greater
        };
        let split = minus.sign(&sum(&parts[..=i])) != Ordering::Greater;
        match (dec, split) {
            (true, true) => {}
            (false, false) => acc = -acc,
            _ => return 0,
        }
    }
    acc
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Blocks of `parts` cut at `ends`, as slices.
fn blocks<'a, T>(parts: &'a [T], ends: &[usize]) -> Vec<&'a [T]> {
    let mut out = Vec::with_capacity(ends.len());
    let mut start = 0;
    for &e in ends {
        out.push(&parts[start..e]);
        start = e;
    }
    out
}

/// Whether each block of `parts` has all parts of the block's own τ₊-slope.
fn blocks_flat(parts: &[DimVector], ends: &[usize], betas: &[DimVector], plus: &SlopeFunction) -> bool {
    blocks(parts, ends)
        .iter()
        .zip(betas)
        .all(|(blk, b)| blk.iter().all(|p| plus.key(p) == plus.key(b)))
}

fn block_weight(ends: &[usize]) -> BigInt {
    let mut start = 0;
    let mut acc = BigInt::one();
    for &e in ends {
        acc *= factorial(e - start);
        start = e;
    }
    acc
}

/// U(α₁,…,α_n; τ₊, τ₋).
pub fn coeff_u(parts: &[DimVector], plus: &SlopeFunction, minus: &SlopeFunction) -> Rational {
    let n = parts.len();
    if n == 0 {
        return Rational::zero();
    }
    let target = minus.key(&sum(parts));
    let mut acc = Rational::zero();
    for a in subdivisions(n, true) {
        let betas = block_sums(parts, &a);
        if !blocks_flat(parts, &a, &betas, plus) {
            continue;
        }
        let w = block_weight(&a);
        for b in subdivisions(betas.len(), true) {
            let gammas = block_sums(&betas, &b);
            if gammas.iter().any(|g| minus.key(g) != target) {
                continue;
            }
            let s: i64 = blocks(&betas, &b).iter().map(|blk| coeff_s(blk, plus, minus)).product();
            if s == 0 {
                continue;
            }
            let l = b.len() as i64;
            let sign = if l % 2 == 1 { 1 } else { -1 };
            acc += Rational::new((sign * s).into(), BigInt::from(l) * &w);
        }
    }
    acc
}

/// U^sd(α₁,…,α_n; τ₊, τ₋).
pub fn coeff_u_sd(parts: &[DimVector], plus: &SlopeFunction, minus: &SlopeFunction) -> Rational {
    let n = parts.len();
    let half = Rational::new((-1).into(), 2.into());
    let mut acc = Rational::zero();
    for a in subdivisions(n, false) {
        let am = a.last().copied().unwrap_or(0);
        if parts[am..].iter().any(|p| plus.sign(p) != Ordering::Equal) {
            continue;
        }
        let betas = block_sums(parts, &a);
        if !blocks_flat(parts, &a, &betas, plus) {
            continue;
        }
        let tail = n - am;
        let w = block_weight(&a) * BigInt::from(2u32).pow(tail as u32) * factorial(tail);
        for b in subdivisions(betas.len(), false) {
            let gammas = block_sums(&betas, &b);
            if gammas.iter().any(|g| minus.sign(g) != Ordering::Equal) {
                continue;
            }
            let bl = b.last().copied().unwrap_or(0);
            let s: i64 = blocks(&betas, &b).iter().map(|blk| coeff_s(blk, plus, minus)).product::<i64>()
                * coeff_s_sd(&betas[bl..], plus, minus);
            if s == 0 {
                continue;
            }
            acc += binomial(&half, b.len() as u32) * Rational::new(s.into(), w.clone());
        }
    }
    acc
}

/// Both composition identities of S and S^sd for τ₁ → τ₂ → τ₃.
pub fn check_composition(parts: &[DimVector], t1: &SlopeFunction, t2: &SlopeFunction, t3: &SlopeFunction) -> bool {
    let n = parts.len();
    let mut lin = 0;
    if n > 0 {
        for a in subdivisions(n, true) {
            let betas = block_sums(parts, &a);
            let inner: i64 = blocks(parts, &a).iter().map(|blk| coeff_s(blk, t1, t2)).product();
            lin += coeff_s(&betas, t2, t3) * inner;
        }
        if lin != coeff_s(parts, t1, t3) {
            return false;
        }
    }
    let mut sd = 0;
    for a in subdivisions(n, false) {
        let am = a.last().copied().unwrap_or(0);
        let betas = block_sums(parts, &a);
        let inner: i64 = blocks(parts, &a).iter().map(|blk| coeff_s(blk, t1, t2)).product();
        sd += coeff_s_sd(&betas, t2, t3) * inner * coeff_s_sd(&parts[am..], t1, t2);
    }
    sd == coeff_s_sd(parts, t1, t3)
}

/// Epsilon integrals at one slope function, in the engine's coefficient coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonTable {
    pub bound: u32,
    pub linear: BTreeMap<DimVector, RatFunc>,
    pub self_dual: BTreeMap<SdClass, RatFunc>,
}

impl EpsilonTable {
    pub fn from_engine(e: &Engine<'_>) -> Self {
        EpsilonTable { bound: e.bound(), linear: e.epsilons().clone(), self_dual: e.sd_epsilons().clone() }
    }
}

/// A class whose two values differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub class: DimVector,
    pub self_dual: bool,
    pub left: RatFunc,
    pub right: RatFunc,
}

pub fn compare(left: &EpsilonTable, right: &EpsilonTable) -> Result<Vec<Mismatch>, WallCrossError> {
    if left.bound != right.bound {
        return Err(WallCrossError::BoundMismatch { left: left.bound, right: right.bound });
    }
    let mut out = Vec::new();
    let zero = RatFunc::zero();
    let keys: std::collections::BTreeSet<_> = left.linear.keys().chain(right.linear.keys()).collect();
    for a in keys {
        let (l, r) = (left.linear.get(a).unwrap_or(&zero), right.linear.get(a).unwrap_or(&zero));
        if l != r {
            out.push(Mismatch { class: a.clone(), self_dual: false, left: l.clone(), right: r.clone() });
        }
    }
    let keys: std::collections::BTreeSet<_> = left.self_dual.keys().chain(right.self_dual.keys()).collect();
    for t in keys {
        let (l, r) = (left.self_dual.get(t).unwrap_or(&zero), right.self_dual.get(t).unwrap_or(&zero));
        if l != r {
            out.push(Mismatch { class: t.as_dim().clone(), self_dual: true, left: l.clone(), right: r.clone() });
        }
    }
    Ok(out)
}

/// ε(τ₋) as U-weighted products of ε(τ₊). The self-dual part is transformed
/// when both slope functions are self-dual, and left empty otherwise.
pub fn wallcross_epsilon(
    forms: &Forms<'_>,
    table: &EpsilonTable,
    plus: &SlopeFunction,
    minus: &SlopeFunction,
) -> Result<EpsilonTable, WallCrossError> {
    if plus.mu().len() != minus.mu().len() {
        return Err(WallCrossError::Length(plus.mu().len(), minus.mu().len()));
    }
    let allowed: Vec<DimVector> =
        table.linear.iter().filter(|(_, v)| !v.is_zero()).map(|(a, _)| a.clone()).collect();
    let linear: BTreeMap<DimVector, RatFunc> = table
        .linear
        .par_iter()
        .map(|(a, _)| {
            let mut acc = RatFunc::zero();
            for_each_composition(a, &allowed, |_, _| true, |parts| {
                let u = coeff_u(parts, plus, minus);
                if u.is_zero() {
                    return;
                }
                let mut term = RatFunc::q_pow(chain_exponent(forms, parts)).scale_by(&u);
                for p in parts {
                    term *= &table.linear[p];
                }
                acc += &term;
            });
            (a.clone(), acc)
        })
        .collect();
    let mut self_dual = BTreeMap::new();
    if plus.is_self_dual() && minus.is_self_dual() {
        if table.self_dual.is_empty() {
            return Err(WallCrossError::NotSelfDual);
        }
        self_dual = table
            .self_dual
            .par_iter()
            .map(|(t, _)| {
                let mut acc = RatFunc::zero();
                for_each_sd_decomposition(forms, t, &allowed, |_, _| true, |parts, rho| {
                    let m = &table.self_dual[rho];
                    if m.is_zero() {
                        return;
                    }
                    let u = coeff_u_sd(parts, plus, minus);
                    if u.is_zero() {
                        return;
                    }
                    let mut term = (RatFunc::q_pow(sd_chain_exponent(forms, parts, rho)) * m).scale_by(&u);
                    for p in parts {
                        term *= &table.linear[p];
                    }
                    acc += &term;
                });
                (t.clone(), acc)
            })
            .collect();
    } else if minus.is_self_dual() != plus.is_self_dual() && !table.self_dual.is_empty() {
        return Err(WallCrossError::NotSelfDual);
    }
    Ok(EpsilonTable { bound: table.bound, linear, self_dual })
}

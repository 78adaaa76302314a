//! Identities between component, semistable and epsilon integrals, each
//! recomputed by a route independent of the engine's chain sums.

use crate::arith::{RatFunc, Rational};
use crate::classes::{DimVector, SdClass};
use crate::decompose::{chain_exponent, for_each_composition, for_each_sd_decomposition, sd_chain_exponent};
use crate::invariants::Engine;
use crate::oracle::CheckRecord;
use crate::slope::SlopeKey;
use crate::torus::{diamond, exp, log_one_plus, TorusElem, TorusModElem};
use num_bigint::BigInt;
use num_traits::One;
use std::cmp::Ordering;
use std::collections::BTreeMap;

fn ratio(n: u64, d: BigInt) -> Rational {
    Rational::new(n.into(), d)
}

fn factorial(n: usize) -> BigInt {
    (1..=n as u64).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Linear classes grouped by slope value.
fn slope_groups(e: &Engine<'_>) -> Vec<Vec<DimVector>> {
    let mut groups: Vec<(SlopeKey, Vec<DimVector>)> = Vec::new();
    for a in e.epsilons().keys() {
        let k = e.slope().key(a);
        match groups.iter_mut().find(|(g, _)| *g == k) {
            Some((_, v)) => v.push(a.clone()),
            None => groups.push((k, vec![a.clone()])),
        }
    }
    groups.into_iter().map(|(_, v)| v).collect()
}

/// Torus element Σ (q − q^{-1})·c_α·λ_α over `classes`.
fn lift(classes: &[DimVector], values: &BTreeMap<DimVector, RatFunc>, bound: u32) -> TorusElem {
    let l = RatFunc::q_minus_q_inv();
    TorusElem::from_map(classes.iter().map(|a| (a.clone(), &values[a] * &l)).collect(), bound)
}

fn lift_sd(values: &BTreeMap<SdClass, RatFunc>, bound: u32) -> TorusModElem {
    let mut m = TorusModElem::zero(bound);
    for (t, c) in values {
        m.add_term(t.clone(), c.clone());
    }
    m
}

/// J = exp(ε) and ε = log(J) on each slope ray, in the quantum torus.
pub fn exp_log_inversion(e: &Engine<'_>) -> CheckRecord {
    let f = e.forms();
    let bound = e.bound();
    let l = RatFunc::q_minus_q_inv();
    let mut rec = CheckRecord::new("exp/log inversion");
    for group in slope_groups(e) {
        let eps = lift(&group, e.epsilons(), bound);
        let delta = exp(f, &eps);
        for a in &group {
            let want = &e.semistable_integrals()[a] * &l;
            let got = delta.coeff(a);
            rec.case(got == want, || format!("exp at {a}: {got} vs {want}"));
        }
        let j = lift(&group, e.semistable_integrals(), bound);
        let back = log_one_plus(f, &j);
        for a in &group {
            let want = &e.epsilons()[a] * &l;
            let got = back.coeff(a);
            rec.case(got == want, || format!("log at {a}: {got} vs {want}"));
        }
    }
    rec
}

/// J^sd = exp(ε₀/2) ⋄ ε^sd and ε^sd = exp(−ε₀/2) ⋄ J^sd, with ε₀ the slope-zero
/// part of the linear epsilons.
pub fn sqrt_inversion(e: &Engine<'_>) -> CheckRecord {
    let mut rec = CheckRecord::new("self-dual square-root inversion");
    if !e.slope().is_self_dual() {
        return rec;
    }
    let f = e.forms();
    let bound = e.bound();
    let zero: Vec<DimVector> =
        e.epsilons().keys().filter(|a| e.slope().sign(a) == Ordering::Equal).cloned().collect();
    let eps0 = lift(&zero, e.epsilons(), bound);
    let half = RatFunc::constant(Rational::new(1.into(), 2.into()));
    let up = exp(f, &eps0.scale(&half));
    let down = exp(f, &eps0.scale(&-half));
    let jsd = diamond(f, &up, &lift_sd(e.sd_epsilons(), bound));
    let esd = diamond(f, &down, &lift_sd(e.sd_semistable_integrals(), bound));
    for t in e.sd_epsilons().keys() {
        let (got, want) = (jsd.coeff(t), &e.sd_semistable_integrals()[t]);
        rec.case(&got == want, || format!("J^sd at {t}: {got} vs {want}"));
        let (got, want) = (esd.coeff(t), &e.sd_epsilons()[t]);
        rec.case(&got == want, || format!("ε^sd at {t}: {got} vs {want}"));
    }
    rec
}

fn nonzero(values: &BTreeMap<DimVector, RatFunc>) -> Vec<DimVector> {
    values.iter().filter(|(_, v)| !v.is_zero()).map(|(a, _)| a.clone()).collect()
}

/// Π over maximal runs of equal slope of (run length)!; with `sd`, the run of
/// slope zero contributes z!·2^z.
fn weyl_order(e: &Engine<'_>, parts: &[DimVector], sd: bool) -> BigInt {
    let mut acc = BigInt::one();
    let mut i = 0;
    while i < parts.len() {
        let k = e.slope().key(&parts[i]);
        let mut j = i + 1;
        while j < parts.len() && e.slope().key(&parts[j]) == k {
            j += 1;
        }
        acc *= factorial(j - i);
        if sd && k.sign() == Ordering::Equal {
            acc *= BigInt::from(2u32).pow((j - i) as u32);
        }
        i = j;
    }
    acc
}

/// I_α = Σ 1/|W| · ε_{α₁} ∗ ⋯ ∗ ε_{α_n} over slope-non-increasing sequences,
/// and the self-dual analogue ending in ε^sd_ρ over sequences with slopes ≥ 0.
pub fn averaged_identity(e: &Engine<'_>) -> CheckRecord {
    let f = e.forms();
    let s = e.slope();
    let mut rec = CheckRecord::new("averaged ordering identity");
    let allowed = nonzero(e.epsilons());
    let non_increasing = |prefix: &[DimVector], p: &DimVector| prefix.last().is_none_or(|l| s.key(l) >= s.key(p));
    for (a, want) in e.component_integrals() {
        let mut acc = RatFunc::zero();
        for_each_composition(a, &allowed, non_increasing, |parts| {
            let mut term = RatFunc::q_pow(chain_exponent(f, parts)).scale_by(&ratio(1, weyl_order(e, parts, false)));
            for p in parts {
                term *= &e.epsilons()[p];
            }
            acc += &term;
        });
        rec.case(&acc == want, || format!("I at {a}: {acc} vs {want}"));
    }
    if s.is_self_dual() {
        let allowed: Vec<DimVector> =
            allowed.into_iter().filter(|p| s.sign(p) != Ordering::Less).collect();
        for (t, want) in e.sd_component_integrals() {
            let mut acc = RatFunc::zero();
            for_each_sd_decomposition(f, t, &allowed, non_increasing, |parts, rho| {
                let m = &e.sd_epsilons()[rho];
                if m.is_zero() {
                    return;
                }
                let w = ratio(1, weyl_order(e, parts, true));
                let mut term = (RatFunc::q_pow(sd_chain_exponent(f, parts, rho)) * m).scale_by(&w);
                for p in parts {
                    term *= &e.epsilons()[p];
                }
                acc += &term;
            });
            rec.case(&acc == want, || format!("I^sd at {t}: {acc} vs {want}"));
        }
    }
    rec
}

/// I_α = Σ J_{α₁} ∗ ⋯ ∗ J_{α_n} over strictly decreasing slopes, and
/// I^sd_θ = Σ J_{α₁} ⋄ ⋯ ⋄ J^sd_ρ over strictly decreasing positive slopes.
pub fn hn_completeness(e: &Engine<'_>) -> CheckRecord {
    let f = e.forms();
    let s = e.slope();
    let mut rec = CheckRecord::new("Harder-Narasimhan completeness");
    let allowed = nonzero(e.semistable_integrals());
    let decreasing = |prefix: &[DimVector], p: &DimVector| prefix.last().is_none_or(|l| s.key(l) > s.key(p));
    for (a, want) in e.component_integrals() {
        let mut acc = RatFunc::zero();
        for_each_composition(a, &allowed, decreasing, |parts| {
            let mut term = RatFunc::q_pow(chain_exponent(f, parts));
            for p in parts {
                term *= &e.semistable_integrals()[p];
            }
            acc += &term;
        });
        rec.case(&acc == want, || format!("I at {a}: {acc} vs {want}"));
    }
    if s.is_self_dual() {
        let allowed: Vec<DimVector> =
            allowed.into_iter().filter(|p| s.sign(p) == Ordering::Greater).collect();
        for (t, want) in e.sd_component_integrals() {
            let mut acc = RatFunc::zero();
            for_each_sd_decomposition(f, t, &allowed, decreasing, |parts, rho| {
                let mut term = RatFunc::q_pow(sd_chain_exponent(f, parts, rho)) * &e.sd_semistable_integrals()[rho];
                for p in parts {
                    term *= &e.semistable_integrals()[p];
                }
                acc += &term;
            });
            rec.case(&acc == want, || format!("I^sd at {t}: {acc} vs {want}"));
        }
    }
    rec
}

pub fn check_all(e: &Engine<'_>) -> Vec<CheckRecord> {
    vec![exp_log_inversion(e), sqrt_inversion(e), averaged_identity(e), hn_completeness(e)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::SelfDualQuiver;
    use crate::slope::SlopeFunction;

    #[test]
    fn kronecker_identities() {
        for (u, v1, v2) in [(1, 1, 1), (1, 1, -1), (-1, -1, -1)] {
            let q = SelfDualQuiver::a1_tilde(u, v1, v2);
            q.ensure_calibrated().unwrap();
            for mu in [[1, -1], [0, 0], [-2, 2]] {
                let e = Engine::new(&q, SlopeFunction::from_ints(&q, &mu).unwrap(), 4).unwrap();
                for c in check_all(&e) {
                    assert!(c.passed, "{} {:?}: {:?}", q.name(), mu, c.detail);
                    assert!(c.cases > 0);
                }
            }
        }
    }

    #[test]
    fn point_identities() {
        for u in [1, -1] {
            let q = SelfDualQuiver::point(u);
            q.ensure_calibrated().unwrap();
            let e = Engine::new(&q, SlopeFunction::trivial(&q), 6).unwrap();
            for c in check_all(&e) {
                assert!(c.passed, "{}: {:?}", c.name, c.detail);
            }
        }
    }

    #[test]
    fn trivial_slope_keeps_component_integrals() {
        let q = SelfDualQuiver::a1_tilde(1, 1, -1);
        q.ensure_calibrated().unwrap();
        let e = Engine::new(&q, SlopeFunction::trivial(&q), 4).unwrap();
        assert_eq!(e.semistable_integrals(), e.component_integrals());
        assert_eq!(e.sd_semistable_integrals(), e.sd_component_integrals());
    }
}

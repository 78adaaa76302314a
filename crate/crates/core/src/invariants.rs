//! Semistable integrals, epsilon integrals and DT invariants for one slope
//! function, for every class up to a total-dimension bound.
//!
//! Values are kept in coefficient coordinates: a linear value c stands for the
//! torus element (q − q^{-1})·c·λ_α and an sd value m for m·λ^sd_θ. In those
//! coordinates a product of parts α₁,…,α_n (ending in ρ) is
//! Π c_i · q^{Σ_{i<j} A(α_i,α_j) + B(α₁+⋯+α_n, ρ)} · m_ρ.

use crate::arith::{binomial, ArithError, RatFunc, Rational};
use crate::classes::{DimVector, SdClass};
use crate::motives::{component_integral, sd_component_integral};
use crate::quiver::{Forms, QuiverError, SelfDualQuiver};
use crate::slope::SlopeFunction;
use crate::table::{InvariantTable, LinearRow, SdRow};
use num_traits::One;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum DtError {
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error("slope function is not self-dual")]
    NotSelfDual,
    #[error("class {class} is outside the bound {bound}")]
    OutOfBound { class: String, bound: u32 },
    #[error("no-pole violation at {class}: {source}")]
    NoPole { class: String, source: ArithError },
}

/// For each P in `points` (downward closed, graded order, starting at 0) that is
/// `keep` or equals `target`: entry n is the sum over chains
/// 0 = P₀ < P₁ < ⋯ < P_n = P whose intermediate points are all `keep`, of
/// Π weight(P_k − P_{k−1}) · q^{Σ A(P_{k−1}, P_k − P_{k−1})}.
pub(crate) fn chain_sums<K, W>(
    f: &Forms<'_>,
    points: &[DimVector],
    target: Option<&DimVector>,
    keep: K,
    weight: W,
) -> BTreeMap<DimVector, Vec<RatFunc>>
where
    K: Fn(&DimVector) -> bool,
    W: Fn(&DimVector) -> Option<RatFunc>,
{
    let mut out: BTreeMap<DimVector, Vec<RatFunc>> = BTreeMap::new();
    let mut starts: Vec<&DimVector> = Vec::new();
    for p in points {
        if p.is_zero() {
            out.insert(p.clone(), vec![RatFunc::one()]);
            starts.push(p);
            continue;
        }
        let is_keep = keep(p);
        if !is_keep && Some(p) != target {
            continue;
        }
        let mut acc: Vec<RatFunc> = Vec::new();
        for &s in &starts {
            if !s.leq(p) || s == p {
                continue;
            }
            let part = p - s;
            let Some(w) = weight(&part) else { continue };
            if w.is_zero() {
                continue;
            }
            let w = w.mul_q_pow(f.a(s, &part));
            for (n, c) in out[s].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if acc.len() < n + 2 {
                    acc.resize(n + 2, RatFunc::zero());
                }
                acc[n + 1] += &(c * &w);
            }
        }
        out.insert(p.clone(), acc);
        if is_keep {
            starts.push(p);
        }
    }
    out
}

fn alternating(v: &[RatFunc], coef: impl Fn(usize) -> Rational) -> RatFunc {
    v.iter()
        .enumerate()
        .skip(1)
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| c.scale_by(&coef(n)))
        .sum()
}

fn sign(n: usize) -> Rational {
    if n.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// (−1)^{n−1}/n
pub(crate) fn log_coeff(n: usize) -> Rational {
    -sign(n) / Rational::from_integer(n.into())
}

/// binom(−1/2, n)
pub(crate) fn sqrt_coeff(n: usize) -> Rational {
    binomial(&Rational::new((-1).into(), 2.into()), n as u32)
}

pub struct Engine<'q> {
    forms: Forms<'q>,
    slope: SlopeFunction,
    bound: u32,
    i: BTreeMap<DimVector, RatFunc>,
    j: BTreeMap<DimVector, RatFunc>,
    eps: BTreeMap<DimVector, RatFunc>,
    i_sd: BTreeMap<SdClass, RatFunc>,
    j_sd: BTreeMap<SdClass, RatFunc>,
    eps_sd: BTreeMap<SdClass, RatFunc>,
}

impl<'q> Engine<'q> {
    /// Computes everything up to `bound`. The quiver must be calibrated; the sd
    /// part is computed only for self-dual slope functions.
    pub fn new(quiver: &'q SelfDualQuiver, slope: SlopeFunction, bound: u32) -> Result<Self, DtError> {
        Ok(Engine::with_forms(quiver.forms()?, slope, bound))
    }

    pub fn with_forms(forms: Forms<'q>, slope: SlopeFunction, bound: u32) -> Self {
        let q = forms.quiver();
        let classes = DimVector::all_up_to(q.num_vertices(), bound);
        let i: BTreeMap<_, _> =
            classes.par_iter().map(|a| (a.clone(), component_integral(q, a))).collect();
        let mut e = Engine {
            forms,
            slope,
            bound,
            i,
            j: BTreeMap::new(),
            eps: BTreeMap::new(),
            i_sd: BTreeMap::new(),
            j_sd: BTreeMap::new(),
            eps_sd: BTreeMap::new(),
        };
        e.j = classes.par_iter().map(|a| (a.clone(), e.compute_j(a))).collect();
        e.eps = classes.par_iter().map(|a| (a.clone(), e.compute_eps(a))).collect();
        if e.slope.is_self_dual() {
            e.compute_sd();
        }
        e
    }

    pub fn forms(&self) -> &Forms<'q> {
        &self.forms
    }

    pub fn quiver(&self) -> &'q SelfDualQuiver {
        self.forms.quiver()
    }

    pub fn slope(&self) -> &SlopeFunction {
        &self.slope
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    fn compute_j(&self, a: &DimVector) -> RatFunc {
        let s = self.slope.key(a);
        let sums = chain_sums(
            &self.forms,
            &a.below(),
            Some(a),
            |p| self.slope.key(p) > s,
            |part| Some(self.i[part].clone()),
        );
        alternating(&sums[a], |n| -sign(n))
    }

    fn compute_eps(&self, a: &DimVector) -> RatFunc {
        let s = self.slope.key(a);
        let sums = chain_sums(
            &self.forms,
            &a.below(),
            Some(a),
            |p| self.slope.key(p) == s,
            |part| Some(self.j[part].clone()),
        );
        alternating(&sums[a], log_coeff)
    }

    fn compute_sd(&mut self) {
        let q = self.forms.quiver();
        let n = q.num_vertices();
        let sd = q.sd_classes(self.bound);
        self.i_sd = sd.par_iter().map(|t| (t.clone(), sd_component_integral(q, t))).collect();
        let half: Vec<DimVector> = std::iter::once(DimVector::zero(n))
            .chain(DimVector::all_up_to(n, self.bound / 2))
            .collect();
        let pos = chain_sums(
            &self.forms,
            &half,
            None,
            |p| self.slope.sign(p) == Ordering::Greater,
            |part| Some(self.i[part].clone()),
        );
        let pos: BTreeMap<DimVector, RatFunc> =
            pos.into_iter().map(|(p, v)| (p, alternating_with_zero(&v, sign))).collect();
        self.j_sd = sd
            .par_iter()
            .map(|t| (t.clone(), self.fold_sd(t, &pos, &self.i_sd)))
            .collect();
        let flat = chain_sums(
            &self.forms,
            &half,
            None,
            |p| self.slope.sign(p) == Ordering::Equal,
            |part| Some(self.j[part].clone()),
        );
        let flat: BTreeMap<DimVector, RatFunc> =
            flat.into_iter().map(|(p, v)| (p, alternating_with_zero(&v, sqrt_coeff))).collect();
        self.eps_sd = sd
            .par_iter()
            .map(|t| (t.clone(), self.fold_sd(t, &flat, &self.j_sd)))
            .collect();
    }

    /// Σ_P prefix(P) · q^{B(P, ρ)} · tail(ρ) over θ = P + ρ + P^∨.
    fn fold_sd(
        &self,
        t: &SdClass,
        prefix: &BTreeMap<DimVector, RatFunc>,
        tail: &BTreeMap<SdClass, RatFunc>,
    ) -> RatFunc {
        let q = self.forms.quiver();
        let mut acc = RatFunc::zero();
        for (p, c) in prefix {
            if c.is_zero() {
                continue;
            }
            let pp = p + &q.dual_vector(p);
            let Some(rho) = t.as_dim().checked_sub(&pp) else { continue };
            let rho = SdClass(rho);
            let m = &tail[&rho];
            if m.is_zero() {
                continue;
            }
            acc += &(c * m).mul_q_pow(self.forms.b(p, rho.as_dim()));
        }
        acc
    }

    fn check_linear(&self, a: &DimVector) -> Result<(), DtError> {
        if a.is_zero() || a.total() > self.bound || a.len() != self.quiver().num_vertices() {
            return Err(DtError::OutOfBound { class: a.to_string(), bound: self.bound });
        }
        Ok(())
    }

    fn check_sd(&self, t: &SdClass) -> Result<(), DtError> {
        if !self.slope.is_self_dual() {
            return Err(DtError::NotSelfDual);
        }
        if t.total() > self.bound || t.as_dim().len() != self.quiver().num_vertices() {
            return Err(DtError::OutOfBound { class: t.to_string(), bound: self.bound });
        }
        Ok(())
    }

    pub fn component_integral(&self, a: &DimVector) -> Result<&RatFunc, DtError> {
        self.check_linear(a)?;
        Ok(&self.i[a])
    }

    pub fn semistable_integral(&self, a: &DimVector) -> Result<&RatFunc, DtError> {
        self.check_linear(a)?;
        Ok(&self.j[a])
    }

    pub fn epsilon_integral(&self, a: &DimVector) -> Result<&RatFunc, DtError> {
        self.check_linear(a)?;
        Ok(&self.eps[a])
    }

    pub fn sd_component_integral(&self, t: &SdClass) -> Result<&RatFunc, DtError> {
        self.check_sd(t)?;
        Ok(&self.i_sd[t])
    }

    pub fn sd_semistable_integral(&self, t: &SdClass) -> Result<&RatFunc, DtError> {
        self.check_sd(t)?;
        Ok(&self.j_sd[t])
    }

    pub fn sd_epsilon_integral(&self, t: &SdClass) -> Result<&RatFunc, DtError> {
        self.check_sd(t)?;
        Ok(&self.eps_sd[t])
    }

    /// DT^mot_α = (q − q^{-1})·ε_α, which must be regular at q = ±1.
    pub fn dt_mot(&self, a: &DimVector) -> Result<RatFunc, DtError> {
        let v = self.epsilon_integral(a)? * RatFunc::q_minus_q_inv();
        regular_at_units(&v, a)?;
        Ok(v)
    }

    pub fn sd_dt_mot(&self, t: &SdClass) -> Result<RatFunc, DtError> {
        let v = self.sd_epsilon_integral(t)?.clone();
        regular_at_units(&v, t.as_dim())?;
        Ok(v)
    }

    pub fn dt_num(&self, a: &DimVector) -> Result<Rational, DtError> {
        let v = self.dt_mot(a)?;
        v.at_minus_one().map_err(|e| DtError::NoPole { class: a.to_string(), source: e })
    }

    pub fn sd_dt_num(&self, t: &SdClass) -> Result<Rational, DtError> {
        let v = self.sd_dt_mot(t)?;
        v.at_minus_one().map_err(|e| DtError::NoPole { class: t.to_string(), source: e })
    }

    pub fn component_integrals(&self) -> &BTreeMap<DimVector, RatFunc> {
        &self.i
    }

    pub fn semistable_integrals(&self) -> &BTreeMap<DimVector, RatFunc> {
        &self.j
    }

    pub fn epsilons(&self) -> &BTreeMap<DimVector, RatFunc> {
        &self.eps
    }

    pub fn sd_component_integrals(&self) -> &BTreeMap<SdClass, RatFunc> {
        &self.i_sd
    }

    pub fn sd_semistable_integrals(&self) -> &BTreeMap<SdClass, RatFunc> {
        &self.j_sd
    }

    pub fn sd_epsilons(&self) -> &BTreeMap<SdClass, RatFunc> {
        &self.eps_sd
    }

    /// Pole orders of (q² − 1)·ε_α and ε^sd_θ at q = ±1.
    pub fn no_pole_report(&self) -> NoPoleReport {
        let plus = Rational::one();
        let minus = -Rational::one();
        let l = RatFunc::q_minus_q_inv().mul_q_pow(1);
        let mut entries = Vec::new();
        for (a, e) in &self.eps {
            let v = e * &l;
            entries.push(PoleEntry {
                class: a.clone(),
                self_dual: false,
                at_plus_one: v.pole_order_at(&plus),
                at_minus_one: v.pole_order_at(&minus),
            });
        }
        for (t, e) in &self.eps_sd {
            entries.push(PoleEntry {
                class: t.as_dim().clone(),
                self_dual: true,
                at_plus_one: e.pole_order_at(&plus),
                at_minus_one: e.pole_order_at(&minus),
            });
        }
        NoPoleReport { entries }
    }

    /// Rows for every class with a nonzero semistable or epsilon integral.
    pub fn table(&self) -> Result<InvariantTable, DtError> {
        let mut linear = Vec::new();
        for (a, j) in &self.j {
            let eps = &self.eps[a];
            if j.is_zero() && eps.is_zero() {
                continue;
            }
            linear.push(LinearRow {
                class: a.clone(),
                j: j.clone(),
                eps: eps.clone(),
                dt_mot: self.dt_mot(a)?,
                dt_num: self.dt_num(a)?,
            });
        }
        let mut self_dual = Vec::new();
        for (t, j) in &self.j_sd {
            let eps = &self.eps_sd[t];
            if j.is_zero() && eps.is_zero() {
                continue;
            }
            self_dual.push(SdRow {
                class: t.as_dim().clone(),
                j: j.clone(),
                eps: eps.clone(),
                dt_mot: self.sd_dt_mot(t)?,
                dt_num: self.sd_dt_num(t)?,
            });
        }
        Ok(InvariantTable {
            quiver: self.quiver().name().to_string(),
            slope: self.slope.mu().to_vec(),
            bound: self.bound,
            linear,
            self_dual,
        })
    }
}

fn alternating_with_zero(v: &[RatFunc], coef: impl Fn(usize) -> Rational) -> RatFunc {
    let mut acc = alternating(v, &coef);
    if let Some(c0) = v.first() {
        acc += &c0.scale_by(&coef(0));
    }
    acc
}

fn regular_at_units(v: &RatFunc, class: &DimVector) -> Result<(), DtError> {
    for q0 in [Rational::one(), -Rational::one()] {
        let order = v.pole_order_at(&q0);
        if order > 0 {
            return Err(DtError::NoPole {
                class: class.to_string(),
                source: ArithError::Pole { at: q0, order },
            });
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleEntry {
    pub class: DimVector,
    pub self_dual: bool,
    pub at_plus_one: i64,
    pub at_minus_one: i64,
}

impl PoleEntry {
    pub fn ok(&self) -> bool {
        self.at_plus_one <= 0 && self.at_minus_one <= 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoPoleReport {
    pub entries: Vec<PoleEntry>,
}

impl NoPoleReport {
    pub fn ok(&self) -> bool {
        self.entries.iter().all(PoleEntry::ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PoleEntry> {
        self.entries.iter().filter(|e| !e.ok())
    }
}

//! Seeded random self-dual quivers and slope functions shared by the
//! integration tests.

#![allow(dead_code)]

use osdt::arith::{rat, RatFunc};
use osdt::quiver::Edge;
use osdt::{DimVector, SelfDualQuiver, SlopeFunction};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const SUITE_SEED: u64 = 0x5e_ed_d7;
pub const SUITE_SIZE: usize = 10;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sign(r: &mut impl Rng) -> i8 {
    if r.gen_bool(0.5) {
        1
    } else {
        -1
    }
}

/// A random valid self-dual quiver with 1–3 vertices and at most 4 edges.
pub fn random_quiver(r: &mut impl Rng, name: &str) -> SelfDualQuiver {
    let n = *[1usize, 2, 2, 3, 3, 3].choose(r).expect("nonempty");
    let mut dual: Vec<usize> = (0..n).collect();
    if n >= 2 && r.gen_bool(0.85) {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.shuffle(r);
        dual[idx[0]] = idx[1];
        dual[idx[1]] = idx[0];
    }
    let mut u = vec![1i8; n];
    for i in 0..n {
        if dual[i] >= i {
            u[i] = sign(r);
            u[dual[i]] = u[i];
        }
    }
    let max_edges = r.gen_range(2..=4usize);
    let mut edges: Vec<Edge> = Vec::new();
    let mut edge_dual: Vec<usize> = Vec::new();
    let mut v: Vec<i8> = Vec::new();
    while edges.len() < max_edges {
        let s = r.gen_range(0..n);
        let self_dual_edge = r.gen_bool(0.4) || edges.len() + 2 > max_edges;
        let k = edges.len();
        if self_dual_edge {
            edges.push(Edge { name: format!("e{k}"), source: s, target: dual[s] });
            edge_dual.push(k);
            v.push(sign(r));
        } else {
            let t = r.gen_range(0..n);
            edges.push(Edge { name: format!("e{k}"), source: s, target: t });
            edges.push(Edge { name: format!("e{}", k + 1), source: dual[t], target: dual[s] });
            edge_dual.push(k + 1);
            edge_dual.push(k);
            let va = sign(r);
            v.push(va);
            v.push(va * u[s] * u[t]);
        }
    }
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let q = SelfDualQuiver::new(name, vertices, edges, dual, edge_dual, u, v);
    assert!(q.validate().is_empty(), "generator produced an invalid quiver");
    q
}

/// The fixed suite of random quivers used by the acceptance criteria.
pub fn suite() -> Vec<SelfDualQuiver> {
    let mut r = rng(SUITE_SEED);
    (0..SUITE_SIZE).map(|k| random_quiver(&mut r, &format!("suite-{k}"))).collect()
}

/// A random self-dual slope: μ(i^∨) = −μ(i), so fixed vertices get 0.
pub fn random_sd_slope(r: &mut impl Rng, q: &SelfDualQuiver) -> SlopeFunction {
    let n = q.num_vertices();
    let mut mu = vec![rat(0, 1); n];
    for i in 0..n {
        let j = q.vertex_dual(i);
        if i < j {
            let m = rat(r.gen_range(-4..=4), r.gen_range(1..=2));
            mu[j] = -&m;
            mu[i] = m;
        }
    }
    SlopeFunction::new(q, mu).expect("slope has the right length")
}

/// A random slope, not necessarily self-dual.
pub fn random_slope(r: &mut impl Rng, q: &SelfDualQuiver) -> SlopeFunction {
    let mu = (0..q.num_vertices()).map(|_| rat(r.gen_range(-4..=4), r.gen_range(1..=3))).collect();
    SlopeFunction::new(q, mu).expect("slope has the right length")
}

/// A random nonzero class of total at most `bound`.
pub fn random_class(r: &mut impl Rng, n: usize, bound: u32) -> DimVector {
    let all = DimVector::all_up_to(n, bound);
    all[r.gen_range(0..all.len())].clone()
}

/// A random Laurent polynomial with small integer coefficients.
pub fn random_laurent(r: &mut impl Rng) -> RatFunc {
    let terms = r.gen_range(1..=3);
    (0..terms)
        .map(|_| RatFunc::q_pow(r.gen_range(-3..=3)).scale_by(&rat(r.gen_range(-3..=3), r.gen_range(1..=2))))
        .sum()
}

/// A random rational function with a small denominator.
pub fn random_ratfunc(r: &mut impl Rng) -> RatFunc {
    let num = random_laurent(r);
    let den = RatFunc::q_pow(r.gen_range(1..=3)) - RatFunc::from_int(r.gen_range(-2..=2));
    if den.is_zero() {
        num
    } else {
        num / den
    }
}

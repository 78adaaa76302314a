//! Ordered decompositions of classes and the exponents of their torus products.

use crate::classes::{DimVector, SdClass};
use crate::quiver::Forms;

/// Calls `f` on every ordered tuple (α₁,…,α_n) of nonzero classes with
/// α₁+⋯+α_n = α, each α_k in `allowed`, and `next_ok(prefix, α_k)` for every k.
pub fn for_each_composition<N, F>(a: &DimVector, allowed: &[DimVector], next_ok: N, mut f: F)
where
    N: Fn(&[DimVector], &DimVector) -> bool,
    F: FnMut(&[DimVector]),
{
    fn rec<N: Fn(&[DimVector], &DimVector) -> bool, F: FnMut(&[DimVector])>(
        rest: &DimVector,
        allowed: &[DimVector],
        cur: &mut Vec<DimVector>,
        next_ok: &N,
        f: &mut F,
    ) {
        if rest.is_zero() {
            f(cur);
            return;
        }
        for p in allowed {
            let Some(r) = rest.checked_sub(p) else { continue };
            if !next_ok(cur, p) {
                continue;
            }
            cur.push(p.clone());
            rec(&r, allowed, cur, next_ok, f);
            cur.pop();
        }
    }
    if a.is_zero() {
        f(&[]);
        return;
    }
    rec(a, allowed, &mut Vec::new(), &next_ok, &mut f);
}

/// Calls `f` on every (α₁,…,α_n; ρ) with θ = Σ (α_k + α_k^∨) + ρ under the same
/// constraints on the α_k. ρ is any self-dual remainder, including zero.
pub fn for_each_sd_decomposition<N, F>(forms: &Forms<'_>, t: &SdClass, allowed: &[DimVector], next_ok: N, mut f: F)
where
    N: Fn(&[DimVector], &DimVector) -> bool,
    F: FnMut(&[DimVector], &SdClass),
{
    fn rec<N: Fn(&[DimVector], &DimVector) -> bool, F: FnMut(&[DimVector], &SdClass)>(
        forms: &Forms<'_>,
        rest: &DimVector,
        allowed: &[DimVector],
        cur: &mut Vec<DimVector>,
        next_ok: &N,
        f: &mut F,
    ) {
        f(cur, &SdClass(rest.clone()));
        let q = forms.quiver();
        for p in allowed {
            let pp = p + &q.dual_vector(p);
            let Some(r) = rest.checked_sub(&pp) else { continue };
            if !next_ok(cur, p) {
                continue;
            }
            cur.push(p.clone());
            rec(forms, &r, allowed, cur, next_ok, f);
            cur.pop();
        }
    }
    rec(forms, t.as_dim(), allowed, &mut Vec::new(), &next_ok, &mut f);
}

/// Σ_{i<j} A(α_i, α_j)
pub fn chain_exponent(f: &Forms<'_>, parts: &[DimVector]) -> i64 {
    let mut e = 0;
    let mut head: Option<DimVector> = None;
    for p in parts {
        if let Some(h) = &head {
            e += f.a(h, p);
            head = Some(h + p);
        } else {
            head = Some(p.clone());
        }
    }
    e
}

/// Σ_{i<j} A(α_i, α_j) + B(α₁+⋯+α_n, ρ)
pub fn sd_chain_exponent(f: &Forms<'_>, parts: &[DimVector], rho: &SdClass) -> i64 {
    let total = parts.iter().fold(DimVector::zero(rho.as_dim().len()), |acc, p| &acc + p);
    chain_exponent(f, parts) + f.b(&total, rho.as_dim())
}

/// Sums of consecutive blocks of `parts` cut at the given end indices.
pub fn block_sums(parts: &[DimVector], ends: &[usize]) -> Vec<DimVector> {
    let mut out = Vec::with_capacity(ends.len());
    let mut start = 0;
    for &e in ends {
        let s = parts[start..e].iter().skip(1).fold(parts[start].clone(), |acc, p| &acc + p);
        out.push(s);
        start = e;
    }
    out
}

/// All strictly increasing sequences 0 < a₁ < ⋯ < a_m = n (when `to_end`) or
/// with a_m ≤ n (otherwise, including the empty sequence).
pub fn subdivisions(n: usize, to_end: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if to_end {
        if n == 0 {
            return out;
        }
        for mask in 0u32..(1 << (n - 1)) {
            let mut v: Vec<usize> = (1..n).filter(|&k| mask >> (k - 1) & 1 == 1).collect();
            v.push(n);
            out.push(v);
        }
    } else {
        for mask in 0u32..(1 << n) {
            out.push((1..=n).filter(|&k| mask >> (k - 1) & 1 == 1).collect());
        }
    }
    out
}

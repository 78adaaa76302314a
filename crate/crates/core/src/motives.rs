//! Motives of classifying stacks of GL, O and Sp (with 𝕃 = q²) and the
//! twisted component integrals 𝕃^{(dim V + dim G)/2}·[∗/G].

use crate::arith::RatFunc;
use crate::classes::{DimVector, SdClass};
use crate::quiver::{SelfDualQuiver, VertexOrbit};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("motive_sp needs an even argument, got {0}")]
pub struct OddSymplectic(pub u32);

/// Π_{j=1}^{n} 1/(q^{step·j} − 1)
fn inv_q_factorial(n: u32, step: usize) -> RatFunc {
    (1..=n as usize).fold(RatFunc::one(), |acc, j| acc * RatFunc::inv_q_pow_minus_one(step * j))
}

/// [∗/GL(n)] = Π_{i<n} 1/(𝕃^n − 𝕃^i).
pub fn motive_gl(n: u32) -> RatFunc {
    let n64 = n as i64;
    inv_q_factorial(n, 2).mul_q_pow(-n64 * (n64 - 1))
}

/// [∗/O(n)].
pub fn motive_o(n: u32) -> RatFunc {
    let m = (n / 2) as i64;
    // Π_{i<m} 1/(𝕃^{2m} − 𝕃^{2i}) = 𝕃^{−m(m−1)} Π_{j=1}^{m} 1/(𝕃^{2j} − 1)
    let core = inv_q_factorial(n / 2, 4).mul_q_pow(-2 * m * (m - 1));
    if n.is_multiple_of(2) {
        core.mul_q_pow(2 * m)
    } else {
        core.mul_q_pow(-2 * m)
    }
}

/// [∗/Sp(n)], n even. Equal to [∗/O(n+1)].
pub fn motive_sp(n: u32) -> Result<RatFunc, OddSymplectic> {
    if n % 2 == 1 {
        return Err(OddSymplectic(n));
    }
    Ok(motive_o(n + 1))
}

/// I_α = q^{dim V_α + dim G_α} · Π_i [∗/GL(α_i)].
pub fn component_integral(q: &SelfDualQuiver, a: &DimVector) -> RatFunc {
    let (dv, dg) = q.dims(a);
    a.entries().iter().fold(RatFunc::q_pow(dv + dg), |acc, &n| acc * motive_gl(n))
}

/// I^sd_θ = q^{dim V^sd_θ + dim G^sd_θ} · [∗/G^sd_θ].
pub fn sd_component_integral(q: &SelfDualQuiver, t: &SdClass) -> RatFunc {
    let (dv, dg) = q.sd_dims(t);
    let mut acc = RatFunc::q_pow(dv + dg);
    for o in q.vertex_orbits() {
        acc = acc
            * match o {
                VertexOrbit::Pair(i, _) => motive_gl(t[i]),
                VertexOrbit::Fixed(i, s) if s > 0 => motive_o(t[i]),
                VertexOrbit::Fixed(i, _) => motive_sp(t[i]).expect("SdClass is even at symplectic vertices"),
            };
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, Poly, Rational};

    /// Literal product Π_{i<n} 1/(L^a − L^b) with L = q².
    fn literal(pairs: &[(u32, u32)], l_shift: i64) -> RatFunc {
        let mut acc = RatFunc::q_pow(2 * l_shift);
        for &(a, b) in pairs {
            let d = &Poly::monomial(2 * a, int(1)) - &Poly::monomial(2 * b, int(1));
            acc = acc * RatFunc::normalize(&Poly::one(), &d, 0).unwrap();
        }
        acc
    }

    #[test]
    fn gl_examples() {
        assert!(motive_gl(0).is_one());
        assert_eq!(motive_gl(1), literal(&[(1, 0)], 0));
        assert_eq!(motive_gl(2), literal(&[(2, 0), (2, 1)], 0));
        assert_eq!(motive_gl(3), literal(&[(3, 0), (3, 1), (3, 2)], 0));
    }

    #[test]
    fn orthogonal_and_symplectic() {
        assert!(motive_o(1).is_one());
        assert_eq!(motive_o(2), literal(&[(2, 0)], 1));
        assert_eq!(motive_sp(2).unwrap(), literal(&[(2, 0)], -1));
        assert_eq!(motive_o(4), literal(&[(4, 0), (4, 2)], 2));
        assert_eq!(motive_sp(4).unwrap(), literal(&[(4, 0), (4, 2)], -2));
        for n in 0..5 {
            assert_eq!(motive_o(2 * n + 1), motive_sp(2 * n).unwrap());
        }
        assert_eq!(motive_sp(3), Err(OddSymplectic(3)));
    }

    #[test]
    fn gl_point_counts() {
        // |GL_n(F_p)| = Π_{i<n} (p^n − p^i); evaluate at q0 with q0² = p.
        // q0 must be rational, so p runs over squares.
        for (q0, p) in [(2i64, 4i64), (-2, 4), (3, 9)] {
            let q0 = Rational::from_integer(q0.into());
            for n in 0..=3u32 {
                let count: i64 = (0..n).map(|i| p.pow(n) - p.pow(i)).product();
                let v = motive_gl(n).eval_at(&q0).unwrap();
                assert_eq!(v * int(count), int(1));
            }
        }
    }

    #[test]
    fn component_integral_examples() {
        let p = SelfDualQuiver::point(1);
        let i1 = component_integral(&p, &DimVector::new(vec![1]));
        assert_eq!(i1, RatFunc::inv_q_pow_minus_one(2).mul_q_pow(1));
        assert!(sd_component_integral(&p, &p.sd_class(&[1]).unwrap()).is_one());
        assert_eq!(
            sd_component_integral(&p, &p.sd_class(&[2]).unwrap()),
            RatFunc::inv_q_pow_minus_one(4).mul_q_pow(3)
        );
    }
}

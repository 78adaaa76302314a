//! Dimension vectors and self-dual classes.

use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Index, Sub};

/// Element of ℕ^{Q₀}, dense per vertex. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise ≤.
    pub fn leq(&self, o: &DimVector) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, o: &DimVector) -> Option<DimVector> {
        self.0
            .iter()
            .zip(&o.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn scaled(&self, k: u32) -> DimVector {
        DimVector(self.0.iter().map(|x| x * k).collect())
    }

    /// All nonzero vectors with n entries and total ≤ bound, in graded lex order.
    pub fn all_up_to(n: usize, bound: u32) -> Vec<DimVector> {
        let mut out = Vec::new();
        for total in 1..=bound {
            let mut cur = vec![0; n];
            fill_total(&mut cur, 0, total, &mut out);
        }
        out.sort();
        out
    }

    /// All P with 0 ≤ P ≤ self, including 0 and self, in graded lex order.
    pub fn below(&self) -> Vec<DimVector> {
        let mut out = vec![DimVector(vec![0; self.len()])];
        for (i, &a) in self.0.iter().enumerate() {
            let prev = std::mem::take(&mut out);
            for v in prev {
                for k in 0..=a {
                    let mut w = v.clone();
                    w.0[i] = k;
                    out.push(w);
                }
            }
        }
        out.sort();
        out
    }
}

fn fill_total(cur: &mut Vec<u32>, i: usize, left: u32, out: &mut Vec<DimVector>) {
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(DimVector(cur.clone()));
        return;
    }
    if cur.is_empty() {
        return;
    }
    for k in (0..=left).rev() {
        cur[i] = k;
        fill_total(cur, i + 1, left - k, out);
    }
    cur[i] = 0;
}

impl Ord for DimVector {
    fn cmp(&self, o: &Self) -> Ordering {
        self.total().cmp(&o.total()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for DimVector {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Index<usize> for DimVector {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, o: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DimVector {
    type Output = DimVector;
    fn sub(self, o: &DimVector) -> DimVector {
        self.checked_sub(o).expect("dimension vector subtraction underflow")
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, x) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A dimension vector fixed by the duality, even at symplectic fixed vertices.
/// Only built through `SelfDualQuiver::sd_class`, which checks both conditions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct SdClass(pub(crate) DimVector);

impl SdClass {
    pub fn as_dim(&self) -> &DimVector {
        &self.0
    }

    pub fn total(&self) -> u32 {
        self.0.total()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Index<usize> for SdClass {
    type Output = u32;
    fn index(&self, i: usize) -> &u32 {
        &self.0 .0[i]
    }
}

impl fmt::Display for SdClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for SdClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sd{}", self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    #[test]
    fn graded_lex_order() {
        let all = DimVector::all_up_to(2, 2);
        assert_eq!(all, vec![d(&[0, 1]), d(&[1, 0]), d(&[0, 2]), d(&[1, 1]), d(&[2, 0])]);
        let mut v = vec![d(&[0, 2]), d(&[1, 0]), d(&[1, 1])];
        v.sort();
        assert_eq!(v, vec![d(&[1, 0]), d(&[0, 2]), d(&[1, 1])]);
    }

    #[test]
    fn counts() {
        // C(n+k, k) - 1 nonzero vectors with total ≤ k in n variables
        assert_eq!(DimVector::all_up_to(3, 5).len(), 55);
        assert_eq!(DimVector::all_up_to(1, 4).len(), 4);
        assert_eq!(d(&[2, 1]).below().len(), 6);
        assert_eq!(d(&[2, 1]).below()[0], d(&[0, 0]));
        assert_eq!(d(&[2, 1]).below()[5], d(&[2, 1]));
    }
}

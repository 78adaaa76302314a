//! Inputs shared by the benchmarks in benches/.

use osdt::{SelfDualQuiver, SlopeFunction};

/// A calibrated Kronecker-type quiver with the slope (1, -1).
pub fn kronecker(u: i8, v1: i8, v2: i8) -> (SelfDualQuiver, SlopeFunction) {
    let q = SelfDualQuiver::a1_tilde(u, v1, v2);
    q.ensure_calibrated().expect("calibrates");
    let s = SlopeFunction::from_ints(&q, &[1, -1]).expect("two vertices");
    (q, s)
}

/// A calibrated point quiver with the trivial slope.
pub fn point(u: i8) -> (SelfDualQuiver, SlopeFunction) {
    let q = SelfDualQuiver::point(u);
    q.ensure_calibrated().expect("calibrates");
    let s = SlopeFunction::trivial(&q);
    (q, s)
}

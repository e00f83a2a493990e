//! Shared inputs for the criterion benchmarks.

use falsetheta::{evaluate_str, CoeffRing, TruncatedSeries};

/// Orders the benchmarks sweep over.
pub const ORDERS: [usize; 3] = [1000, 4000, 12000];

/// `Psi(-q^5, q)`: sparse, about `2 sqrt(N/3)` nonzero terms.
pub fn sparse(ring: CoeffRing, order: usize) -> TruncatedSeries {
    evaluate_str("psi(5)", order, ring.modulus()).expect("psi(5) evaluates")
}

/// `f_1^{-24}`: every coefficient nonzero, growing quickly over `Z`.
pub fn dense(ring: CoeffRing, order: usize) -> TruncatedSeries {
    evaluate_str("f1^-24", order, ring.modulus()).expect("f1^-24 evaluates")
}

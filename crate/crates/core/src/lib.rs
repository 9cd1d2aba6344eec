//! Simulation and verification toolkit for random 2-dimensional simplicial
//! complexes on the vertex set {1, …, n} with a complete 1-skeleton.
//!
//! The library covers:
//!
//! * [`complex`] — edges, triangles, complexes, the signed edge/triangle
//!   boundary matrix, coboundaries of graphs, and triangle-per-edge counts;
//! * [`linalg`] — exact linear algebra: bit-packed GF(2) rank, fraction-free
//!   (Bareiss) determinants over arbitrary-precision integers, Gram
//!   determinants, Smith normal form, and the homology dimensions/torsion
//!   derived from them;
//! * [`samplers`] — a projection-DPP sampler for determinantal hypertrees,
//!   the one-out and Linial–Meshulam models, exhaustive hypertree
//!   enumeration with exact measures for n ≤ 6, and deterministic
//!   counter-based RNG streams;
//! * [`graphon`] — step kernels/graphons and their functionals: cut norm,
//!   operator products, entropy and rate functions, and the f-functional
//!   driving the cocycle-probability bounds;
//! * [`bounds`] — exact cocycle/subcomplex probabilities as rationals,
//!   Hadamard-type upper bounds (set and graphon form), one-out analogues,
//!   cocycle counts, and the Cohen–Lenstra heuristic pmf.
//!
//! Everything downstream of a master seed is deterministic: samples are
//! functions of (seed, model, n, trial) only, independent of thread count.

pub mod bounds;
pub mod complex;
mod error;
pub mod extreal;
pub mod graphon;
pub mod io;
pub mod linalg;
pub mod samplers;

pub use error::{Error, Result};

/// Binomial coefficient C(n, k) as usize; saturates are a bug, so panics on
/// overflow (far beyond anything this crate handles).
pub fn binomial(n: u64, k: u64) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    usize::try_from(acc).expect("binomial overflow")
}

#[cfg(test)]
mod tests {
    use super::binomial;

    #[test]
    fn binomial_small_table() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(6, 3), 20);
        assert_eq!(binomial(200, 2), 19900);
        assert_eq!(binomial(200, 3), 1_313_400);
        assert_eq!(binomial(4, 7), 0);
    }
}

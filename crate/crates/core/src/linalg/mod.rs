//! Exact linear algebra: bit-packed GF(2) elimination, fraction-free integer
//! determinants, Smith normal form, and the homology quantities of
//! 2-complexes built on top of them.

mod gf2;
mod homology;
mod int;
mod snf;

pub use gf2::BitMatrix;
pub use homology::{
    boundary_bitmatrix, boundary_int_matrix, boundary_rank_f2, boundary_rank_fp, h1_f2_dim,
    h1_fp_dim, h1_snf, h1_torsion_order, is_prime_u64, p_torsion_dim, TorsionOrder,
};
pub use int::{bareiss_det, bareiss_det_i64, gram_det, gram_det_i64, IntMatrix};
pub use snf::{snf, SnfResult};

/// Rank of a bit matrix over GF(2) without mutating the input.
pub fn gf2_rank(m: &BitMatrix) -> usize {
    m.rank()
}

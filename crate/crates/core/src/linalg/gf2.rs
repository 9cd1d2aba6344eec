//! Dense bit-packed matrices over GF(2) with rank, reduced echelon form and
//! kernel computation.
//!
//! Rows are packed into u64 words; all elimination works word-wide. Rank on
//! large inputs is the performance-critical path of the whole crate, so the
//! destructive routines keep a per-column pivot cache and scan each row from
//! the word of its last elimination instead of from the start.

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

/// Dense matrix over GF(2), row-major, bit-packed into u64 words.
/// Padding bits beyond `cols` in the last word of each row are kept zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> BitMatrix {
        let words_per_row = cols.div_ceil(WORD_BITS).max(1);
        BitMatrix {
            rows,
            cols,
            words_per_row,
            data: vec![0u64; rows * words_per_row],
        }
    }

    /// Builds a matrix from one slice of set-bit column indices per row.
    pub fn from_rows(cols: usize, rows: &[Vec<usize>]) -> Result<BitMatrix> {
        let mut m = BitMatrix::zero(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for &c in r {
                if c >= cols {
                    return Err(Error::IndexOutOfRange(format!(
                        "column {c} out of range for width {cols}"
                    )));
                }
                m.set(i, c, true);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        debug_assert!(r < self.rows && c < self.cols);
        let w = self.data[r * self.words_per_row + c / WORD_BITS];
        (w >> (c % WORD_BITS)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        debug_assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.words_per_row + c / WORD_BITS];
        let bit = 1u64 << (c % WORD_BITS);
        if v {
            *w |= bit;
        } else {
            *w &= !bit;
        }
    }

    fn first_set_from(&self, r: usize, start_word: usize) -> Option<(usize, usize)> {
        let off = r * self.words_per_row;
        for wi in start_word..self.words_per_row {
            let w = self.data[off + wi];
            if w != 0 {
                return Some((wi, wi * WORD_BITS + w.trailing_zeros() as usize));
            }
        }
        None
    }

    /// XORs row `src` into row `dst` starting at word `start_word`;
    /// `src` must differ from `dst`.
    fn xor_rows_from(&mut self, dst: usize, src: usize, start_word: usize) {
        debug_assert_ne!(dst, src);
        let wpr = self.words_per_row;
        let (d0, s0) = (dst * wpr, src * wpr);
        if s0 < d0 {
            let (head, tail) = self.data.split_at_mut(d0);
            let srow = &head[s0 + start_word..s0 + wpr];
            let drow = &mut tail[start_word..wpr];
            for (d, s) in drow.iter_mut().zip(srow) {
                *d ^= *s;
            }
        } else {
            let (head, tail) = self.data.split_at_mut(s0);
            let srow = &tail[start_word..wpr];
            let drow = &mut head[d0 + start_word..d0 + wpr];
            for (d, s) in drow.iter_mut().zip(srow) {
                *d ^= *s;
            }
        }
    }

    /// Rank over GF(2); the matrix itself is left untouched (elimination runs
    /// on a working copy).
    pub fn rank(&self) -> usize {
        self.clone().rank_destructive()
    }

    /// Rank over GF(2), consuming the matrix.
    pub fn rank_destructive(mut self) -> usize {
        let mut pivot_row_of_col: Vec<u32> = vec![u32::MAX; self.cols];
        let mut rank = 0usize;
        for r in 0..self.rows {
            let mut start_word = 0usize;
            loop {
                let Some((wi, c)) = self.first_set_from(r, start_word) else {
                    break;
                };
                start_word = wi;
                let p = pivot_row_of_col[c];
                if p == u32::MAX {
                    pivot_row_of_col[c] = r as u32;
                    rank += 1;
                    break;
                }
                self.xor_rows_from(r, p as usize, wi);
            }
        }
        rank
    }

    /// Reduced row-echelon form in place; returns the pivot columns in
    /// increasing order.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots: Vec<usize> = Vec::new();
        let mut next_row = 0usize;
        for c in 0..self.cols {
            let wi = c / WORD_BITS;
            let bit = 1u64 << (c % WORD_BITS);
            let mut pivot = None;
            for r in next_row..self.rows {
                if self.data[r * self.words_per_row + wi] & bit != 0 {
                    pivot = Some(r);
                    break;
                }
            }
            let Some(p) = pivot else { continue };
            if p != next_row {
                for k in 0..self.words_per_row {
                    self.data.swap(p * self.words_per_row + k, next_row * self.words_per_row + k);
                }
            }
            for r in 0..self.rows {
                if r != next_row && self.data[r * self.words_per_row + wi] & bit != 0 {
                    self.xor_rows_from(r, next_row, wi);
                }
            }
            pivots.push(c);
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        pivots
    }

    /// A basis of the right kernel {x : M·x = 0}, one basis vector per row of
    /// the returned matrix (nullity × cols).
    pub fn kernel_basis(&self) -> BitMatrix {
        let mut work = self.clone();
        let pivots = work.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = BitMatrix::zero(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis.set(k, f, true);
            for (i, &c) in pivots.iter().enumerate() {
                if work.get(i, f) {
                    basis.set(k, c, true);
                }
            }
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn naive_rank(rows: usize, cols: usize, m: &[Vec<bool>]) -> usize {
        let mut a: Vec<Vec<bool>> = m.to_vec();
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| a[r][c]) else { continue };
            a.swap(rank, p);
            for r in 0..rows {
                if r != rank && a[r][c] {
                    for j in 0..cols {
                        let v = a[rank][j];
                        a[r][j] ^= v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_basics() {
        let mut id = BitMatrix::zero(3, 3);
        for i in 0..3 {
            id.set(i, i, true);
        }
        assert_eq!(id.rank(), 3);
        assert_eq!(BitMatrix::zero(5, 7).rank(), 0);
        // Rank must not mutate.
        let before = id.clone();
        let _ = id.rank();
        assert_eq!(id, before);
    }

    #[test]
    fn rank_matches_naive_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x6F2A);
        for trial in 0..500 {
            let rows = rng.gen_range(1..=64);
            let cols = rng.gen_range(1..=64);
            let density = [0.05, 0.2, 0.5, 0.9][trial % 4];
            let mut m = BitMatrix::zero(rows, cols);
            let mut dense = vec![vec![false; cols]; rows];
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(density) {
                        m.set(r, c, true);
                        dense[r][c] = true;
                    }
                }
            }
            assert_eq!(m.rank(), naive_rank(rows, cols, &dense));
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x8E11);
        for _ in 0..100 {
            let rows = rng.gen_range(1..=20);
            let cols = rng.gen_range(1..=20);
            let mut m = BitMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.4) {
                        m.set(r, c, true);
                    }
                }
            }
            let kernel = m.kernel_basis();
            assert_eq!(kernel.rows(), cols - m.rank());
            for k in 0..kernel.rows() {
                for r in 0..rows {
                    let mut parity = false;
                    for c in 0..cols {
                        parity ^= m.get(r, c) && kernel.get(k, c);
                    }
                    assert!(!parity, "kernel vector not annihilated");
                }
            }
            // Kernel rows are independent.
            assert_eq!(kernel.rank(), kernel.rows());
        }
    }

    #[test]
    fn from_rows_validates() {
        assert!(BitMatrix::from_rows(4, &[vec![0, 5]]).is_err());
        let m = BitMatrix::from_rows(4, &[vec![0, 3], vec![1]]).unwrap();
        assert!(m.get(0, 3) && m.get(1, 1) && !m.get(1, 0));
    }
}

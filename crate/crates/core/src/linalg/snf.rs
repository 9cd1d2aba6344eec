//! Smith normal form over the integers.
//!
//! Classical gcd-driven diagonal reduction with pivoting on the smallest
//! nonzero entry, followed by an explicit divisibility-chain correction.
//! Inputs stay at desk scale (a few hundred rows), so there are no modular
//! or probabilistic shortcuts: the output is exact and deterministic.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::int::IntMatrix;

/// Invariant factors of an integer matrix: `factors` is the chain
/// d₁ | d₂ | … | d_r of positive invariant factors; `rank` = r; the product
/// of the factors larger than 1 is the torsion order of the cokernel.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SnfResult {
    pub factors: Vec<BigUint>,
    pub rank: usize,
}

impl SnfResult {
    /// Product of all invariant factors (1 for an empty chain).
    pub fn factor_product(&self) -> BigUint {
        let mut p = BigUint::from(1u32);
        for f in &self.factors {
            p *= f;
        }
        p
    }
}

struct Work {
    rows: usize,
    cols: usize,
    a: Vec<BigInt>,
}

impl Work {
    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.a[i * self.cols + j]
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.cols {
            self.a.swap(i * self.cols + j, k * self.cols + j);
        }
    }

    fn swap_cols(&mut self, j: usize, l: usize) {
        if j == l {
            return;
        }
        for i in 0..self.rows {
            self.a.swap(i * self.cols + j, i * self.cols + l);
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * self.at(k, j);
            self.a[i * self.cols + j] -= delta;
        }
    }

    /// row_t += row_i
    fn row_add(&mut self, t: usize, i: usize) {
        for j in 0..self.cols {
            let v = self.at(i, j).clone();
            self.a[t * self.cols + j] += v;
        }
    }

    /// col_j -= q * col_l
    fn col_sub(&mut self, j: usize, l: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * self.at(i, l);
            self.a[i * self.cols + j] -= delta;
        }
    }
}

/// Smith normal form; returns the positive invariant factors in their
/// divisibility chain together with the rank.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let rows = m.rows();
    let cols = m.cols();
    let mut w = Work {
        rows,
        cols,
        a: (0..rows * cols)
            .map(|idx| m.get(idx / cols.max(1), idx % cols.max(1)).clone())
            .collect(),
    };
    if rows == 0 || cols == 0 {
        return SnfResult { factors: Vec::new(), rank: 0 };
    }
    let min = rows.min(cols);
    let mut t = 0usize;
    while t < min {
        // Pivot: smallest-magnitude nonzero entry of the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if w.at(i, j).is_zero() {
                    continue;
                }
                best = match best {
                    None => Some((i, j)),
                    Some((bi, bj)) => {
                        if w.at(i, j).magnitude() < w.at(bi, bj).magnitude() {
                            Some((i, j))
                        } else {
                            Some((bi, bj))
                        }
                    }
                };
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        // Clear column t and row t; swaps bring strictly smaller remainders
        // into the pivot, so this terminates.
        'reduce: loop {
            for i in t + 1..rows {
                if w.at(i, t).is_zero() {
                    continue;
                }
                let q = w.at(i, t) / w.at(t, t);
                if !q.is_zero() {
                    w.row_sub(i, t, &q);
                }
                if !w.at(i, t).is_zero() {
                    w.swap_rows(i, t);
                    continue 'reduce;
                }
            }
            for j in t + 1..cols {
                if w.at(t, j).is_zero() {
                    continue;
                }
                let q = w.at(t, j) / w.at(t, t);
                if !q.is_zero() {
                    w.col_sub(j, t, &q);
                }
                if !w.at(t, j).is_zero() {
                    w.swap_cols(j, t);
                    continue 'reduce;
                }
            }
            break;
        }

        // The pivot must divide the whole remaining block; otherwise fold the
        // offending row into row t and redo this position.
        let pivot = w.at(t, t).clone();
        let mut divides_all = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(w.at(i, j) % &pivot).is_zero() {
                    w.row_add(t, i);
                    divides_all = false;
                    break 'scan;
                }
            }
        }
        if divides_all {
            t += 1;
        }
    }

    let mut factors: Vec<BigUint> = (0..t)
        .map(|k| w.at(k, k).abs().to_biguint().expect("abs is nonnegative"))
        .filter(|d| !d.is_zero())
        .collect();

    // Belt-and-braces: enforce d_i | d_j pairwise (idempotent when the chain
    // already holds, as the reduction above guarantees).
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                let g = factors[i].gcd(&factors[j]);
                if g != factors[i] {
                    let l = &factors[i] / &g * &factors[j];
                    factors[i] = g;
                    factors[j] = l;
                    changed = true;
                }
            }
        }
    }
    factors.sort();
    let rank = factors.len();
    SnfResult { factors, rank }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};

    fn minor_gcd_factors(rows: usize, cols: usize, a: &[i64]) -> Vec<BigUint> {
        // d_k = D_k / D_{k-1} with D_k the gcd of all k×k minors.
        fn dets(rows: usize, cols: usize, a: &[i64], k: usize) -> BigUint {
            let row_sets = subsets(rows, k);
            let col_sets = subsets(cols, k);
            let mut g = BigUint::zero();
            for rs in &row_sets {
                for cs in &col_sets {
                    let sub: Vec<i64> = rs
                        .iter()
                        .flat_map(|&i| cs.iter().map(move |&j| a[i * cols + j]))
                        .collect();
                    let d = super::super::int::bareiss_det_i64(k, &sub).unwrap();
                    g = g.gcd(&BigUint::from(d.unsigned_abs()));
                }
            }
            g
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == k {
                    out.push(cur.clone());
                    return;
                }
                for v in start..n {
                    cur.push(v);
                    rec(v + 1, n, k, cur, out);
                    cur.pop();
                }
            }
            rec(0, n, k, &mut cur, &mut out);
            out
        }
        let mut factors = Vec::new();
        let mut prev = BigUint::one();
        for k in 1..=rows.min(cols) {
            let dk = dets(rows, cols, a, k);
            if dk.is_zero() {
                break;
            }
            factors.push(&dk / &prev);
            prev = dk;
        }
        factors
    }

    #[test]
    fn snf_frozen_examples() {
        let s = snf(&IntMatrix::from_i64(1, 1, &[2]));
        assert_eq!(s.factors, vec![BigUint::from(2u32)]);

        let s = snf(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]));
        assert_eq!(s.factors, vec![BigUint::from(1u32), BigUint::from(6u32)]);
        assert_eq!(s.rank, 2);
        assert_eq!(s.factor_product(), BigUint::from(6u32));

        let s = snf(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 4]));
        assert_eq!(s.factors, vec![BigUint::from(2u32), BigUint::from(4u32)]);

        let s = snf(&IntMatrix::zero(3, 2));
        assert!(s.factors.is_empty());
        assert_eq!(s.rank, 0);

        let s = snf(&IntMatrix::zero(0, 5));
        assert!(s.factors.is_empty());
    }

    #[test]
    fn snf_matches_minor_gcd_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x51F0);
        for _ in 0..250 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let a: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-6..=6)).collect();
            let s = snf(&IntMatrix::from_i64(rows, cols, &a));
            let oracle = minor_gcd_factors(rows, cols, &a);
            assert_eq!(s.factors, oracle, "matrix {a:?}");
            for w in s.factors.windows(2) {
                assert!((&w[1] % &w[0]).is_zero(), "chain violated: {:?}", s.factors);
            }
        }
    }
}

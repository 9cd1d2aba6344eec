//! Exact integer matrices and fraction-free (Bareiss) determinants.
//!
//! Determinants of the incidence submatrices can be exponentially large in
//! the vertex count, so the reference path works over unbounded integers.
//! A checked i64 fast path covers the small cases that dominate enumeration
//! loops; it reports overflow instead of wrapping so callers can fall back.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense matrix with unbounded integer entries, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> IntMatrix {
        assert_eq!(data.len(), rows * cols, "shape/payload mismatch");
        IntMatrix {
            rows,
            cols,
            data: data.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> IntMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMatrix {
        IntMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::bad_argument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.get(k, j);
                    let cell = &mut out.data[i * rhs.cols + j];
                    *cell += add;
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }
}

/// Exact determinant by fraction-free elimination. The 0×0 determinant is 1.
pub fn bareiss_det(m: &IntMatrix) -> Result<BigInt> {
    if m.rows != m.cols {
        return Err(Error::NonSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.data.clone();
    let at = |a: &Vec<BigInt>, i: usize, j: usize| -> BigInt { a[i * n + j].clone() };
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        let pivot = at(&a, k, k);
        for i in k + 1..n {
            let head = at(&a, i, k);
            for j in k + 1..n {
                let v = (&pivot * &a[i * n + j] - &head * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = a[(n - 1) * n + (n - 1)].clone();
    Ok(if sign < 0 { -det } else { det })
}

/// Checked-arithmetic Bareiss determinant over i64; `None` means an
/// intermediate value overflowed and the caller should use [`bareiss_det`].
pub fn bareiss_det_i64(n: usize, data: &[i64]) -> Option<i64> {
    assert_eq!(data.len(), n * n, "shape/payload mismatch");
    if n == 0 {
        return Some(1);
    }
    let mut a = data.to_vec();
    let mut sign = 1i64;
    let mut prev = 1i64;
    for k in 0..n {
        if a[k * n + k] == 0 {
            let swap = (k + 1..n).find(|&i| a[i * n + k] != 0);
            match swap {
                None => return Some(0),
                Some(s) => {
                    for j in 0..n {
                        a.swap(k * n + j, s * n + j);
                    }
                    sign = -sign;
                }
            }
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let head = a[i * n + k];
            for j in k + 1..n {
                let t1 = pivot.checked_mul(a[i * n + j])?;
                let t2 = head.checked_mul(a[k * n + j])?;
                let num = t1.checked_sub(t2)?;
                debug_assert_eq!(num % prev, 0, "fraction-free division must be exact");
                a[i * n + j] = num / prev;
            }
            a[i * n + k] = 0;
        }
        prev = pivot;
    }
    Some(sign * a[(n - 1) * n + (n - 1)])
}

/// det(A·Aᵀ), exactly.
pub fn gram_det(a: &IntMatrix) -> Result<BigInt> {
    let g = a.mul(&a.transpose())?;
    bareiss_det(&g)
}

/// det(A·Aᵀ) for an i64 payload, with overflow reported as `None`.
pub fn gram_det_i64(rows: usize, cols: usize, data: &[i64]) -> Option<i64> {
    assert_eq!(data.len(), rows * cols, "shape/payload mismatch");
    let mut g = vec![0i64; rows * rows];
    for i in 0..rows {
        for k in i..rows {
            let mut acc: i64 = 0;
            for j in 0..cols {
                let p = data[i * cols + j].checked_mul(data[k * cols + j])?;
                acc = acc.checked_add(p)?;
            }
            g[i * rows + k] = acc;
            g[k * rows + i] = acc;
        }
    }
    bareiss_det_i64(rows, &g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn naive_det(n: usize, a: &[i64]) -> i64 {
        // Laplace expansion; test sizes are tiny.
        if n == 0 {
            return 1;
        }
        if n == 1 {
            return a[0];
        }
        let mut det = 0i64;
        for j in 0..n {
            if a[j] == 0 {
                continue;
            }
            let minor: Vec<i64> = (1..n)
                .flat_map(|i| (0..n).filter(|&c| c != j).map(move |c| (i, c)))
                .map(|(i, c)| a[i * n + c])
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            det += s * a[j] * naive_det(n - 1, &minor);
        }
        det
    }

    #[test]
    fn determinant_basics() {
        let d = bareiss_det(&IntMatrix::from_i64(2, 2, &[2, 0, 0, 3])).unwrap();
        assert_eq!(d, BigInt::from(6));
        assert_eq!(bareiss_det(&IntMatrix::zero(0, 0)).unwrap(), BigInt::one());
        assert!(bareiss_det(&IntMatrix::zero(2, 3)).is_err());
        assert_eq!(bareiss_det_i64(2, &[2, 0, 0, 3]), Some(6));
        assert_eq!(bareiss_det_i64(0, &[]), Some(1));
    }

    #[test]
    fn bareiss_matches_laplace() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xBA5E);
        for _ in 0..300 {
            let n = rng.gen_range(1..=5);
            let a: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-6..=6)).collect();
            let expect = naive_det(n, &a);
            assert_eq!(bareiss_det_i64(n, &a), Some(expect));
            let big = bareiss_det(&IntMatrix::from_i64(n, n, &a)).unwrap();
            assert_eq!(big, BigInt::from(expect));
        }
    }

    #[test]
    fn i64_overflow_is_reported() {
        let big = 1i64 << 32;
        let a = vec![big, 1, 1, big];
        // det = 2^64 - 1 overflows the fast path but not the exact path.
        assert_eq!(bareiss_det_i64(2, &a), None);
        let exact = bareiss_det(&IntMatrix::from_i64(2, 2, &a)).unwrap();
        let expect = BigInt::from(u64::MAX);
        assert_eq!(exact, expect);
    }

    #[test]
    fn gram_paths_agree() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x96A3);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=6);
            let a: Vec<i64> = (0..rows * cols).map(|_| rng.gen_range(-3..=3)).collect();
            let fast = gram_det_i64(rows, cols, &a).unwrap();
            let exact = gram_det(&IntMatrix::from_i64(rows, cols, &a)).unwrap();
            assert_eq!(exact, BigInt::from(fast));
            assert!(fast >= 0, "Gram determinants are nonnegative");
        }
    }
}

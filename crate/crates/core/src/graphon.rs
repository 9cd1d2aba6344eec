//! Step kernels and step graphons on uniform block partitions of [0,1],
//! together with the functionals used by the probability bounds: cut/L1/L∞
//! norms, operator products, inner products against log-kernels, the
//! triangle-survival kernel Z_W, the rate function I_p, entropy H, and the
//! f / f_k functionals.
//!
//! Every integral over [0,1]² collapses to a finite blockwise sum for step
//! functions, so all values here are exact finite sums up to float rounding.
//! All reductions run through [`sum_sorted`], which totals each contribution
//! multiset in a canonical order; simultaneous relabeling of blocks therefore
//! leaves every functional bit-identically unchanged.

use rand::{Rng, SeedableRng};

use crate::complex::Graph;
use crate::error::{Error, Result};
use crate::extreal::{sum_sorted, ExtendedReal};

/// A symmetric m×m step kernel: the value on block (i,j) of the uniform
/// partition of [0,1] into m intervals. All entries finite.
#[derive(Clone, PartialEq, Debug)]
pub struct StepKernel {
    m: usize,
    values: Vec<f64>,
}

impl StepKernel {
    pub fn new(m: usize, values: Vec<f64>) -> Result<StepKernel> {
        if m == 0 {
            return Err(Error::bad_argument("kernel needs at least one block"));
        }
        if values.len() != m * m {
            return Err(Error::bad_argument(format!(
                "kernel payload has {} entries, expected {}",
                values.len(),
                m * m
            )));
        }
        for (idx, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::bad_argument(format!(
                    "kernel entry {idx} is not finite"
                )));
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                if values[i * m + j] != values[j * m + i] {
                    return Err(Error::bad_argument(format!(
                        "kernel is not symmetric at block ({i},{j})"
                    )));
                }
            }
        }
        Ok(StepKernel { m, values })
    }

    pub fn constant(m: usize, c: f64) -> Result<StepKernel> {
        StepKernel::new(m, vec![c; m * m])
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The kernel with blocks relabeled by `perm` (new block perm[i] carries
    /// the old block i). `perm` must be a permutation of 0..m.
    pub fn permuted(&self, perm: &[usize]) -> Result<StepKernel> {
        check_permutation(self.m, perm)?;
        let mut values = vec![0.0; self.m * self.m];
        for i in 0..self.m {
            for j in 0..self.m {
                values[perm[i] * self.m + perm[j]] = self.get(i, j);
            }
        }
        StepKernel::new(self.m, values)
    }
}

fn check_permutation(m: usize, perm: &[usize]) -> Result<()> {
    if perm.len() != m {
        return Err(Error::bad_argument("permutation length mismatch"));
    }
    let mut seen = vec![false; m];
    for &p in perm {
        if p >= m || seen[p] {
            return Err(Error::bad_argument("not a permutation"));
        }
        seen[p] = true;
    }
    Ok(())
}

/// A step kernel with entries in [0,1].
#[derive(Clone, PartialEq, Debug)]
pub struct StepGraphon {
    kernel: StepKernel,
}

impl StepGraphon {
    pub fn new(kernel: StepKernel) -> Result<StepGraphon> {
        for (idx, v) in kernel.values.iter().enumerate() {
            if !(0.0..=1.0).contains(v) {
                return Err(Error::bad_argument(format!(
                    "graphon entry {idx} = {v} outside [0,1]"
                )));
            }
        }
        Ok(StepGraphon { kernel })
    }

    pub fn constant(m: usize, c: f64) -> Result<StepGraphon> {
        StepGraphon::new(StepKernel::constant(m, c)?)
    }

    pub fn kernel(&self) -> &StepKernel {
        &self.kernel
    }

    pub fn m(&self) -> usize {
        self.kernel.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.kernel.get(i, j)
    }

    /// 1 − W, blockwise.
    pub fn complement(&self) -> StepGraphon {
        let values = self.kernel.values.iter().map(|v| 1.0 - v).collect();
        StepGraphon {
            kernel: StepKernel {
                m: self.kernel.m,
                values,
            },
        }
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<StepGraphon> {
        Ok(StepGraphon {
            kernel: self.kernel.permuted(perm)?,
        })
    }
}

/// The n-block step graphon of a graph on [n]: entry (u,v) is 1 exactly when
/// {u,v} is an edge; diagonal blocks are 0.
pub fn graphon_of_graph(g: &Graph) -> StepGraphon {
    let n = g.n() as usize;
    let adj = g.adjacency();
    let values = adj.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    StepGraphon {
        kernel: StepKernel { m: n, values },
    }
}

/// Result of a blockwise operator product; generally not symmetric.
#[derive(Clone, PartialEq, Debug)]
pub struct BlockMatrix {
    m: usize,
    values: Vec<f64>,
}

impl BlockMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.m + j]
    }
}

/// Operator product (V∘W)(i,j) = (1/m)·Σ_t V(i,t)·W(t,j) — the exact
/// integral over the shared coordinate for uniform step functions.
pub fn op_product(v: &StepKernel, w: &StepKernel) -> Result<BlockMatrix> {
    if v.m != w.m {
        return Err(Error::bad_argument(format!(
            "block counts differ: {} vs {}",
            v.m, w.m
        )));
    }
    let m = v.m;
    let mut values = vec![0.0; m * m];
    let mut buf: Vec<f64> = Vec::with_capacity(m);
    for i in 0..m {
        for j in 0..m {
            buf.clear();
            for t in 0..m {
                buf.push(v.get(i, t) * w.get(t, j));
            }
            values[i * m + j] = sum_sorted(&mut buf) / m as f64;
        }
    }
    Ok(BlockMatrix { m, values })
}

/// The kernel Z_W, symmetric by construction: blockwise value
/// (W∘(1−W) + (1−W)∘W)(i,j). For a graphon it lands in [0,1]; values beyond
/// a 1e−12 guard band indicate a broken input and error out; values within
/// the band are clamped.
pub fn z_kernel(w: &StepGraphon) -> Result<StepGraphon> {
    let comp = w.complement();
    let p = op_product(&w.kernel, &comp.kernel)?;
    let m = p.m;
    let mut values = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let z = p.get(i, j) + p.get(j, i);
            if !(-1e-12..=1.0 + 1e-12).contains(&z) {
                return Err(Error::internal(format!(
                    "survival kernel entry {z} outside [0,1] guard band"
                )));
            }
            values[i * m + j] = z.clamp(0.0, 1.0);
        }
    }
    Ok(StepGraphon {
        kernel: StepKernel { m, values },
    })
}

/// Cut norm value plus whether it is exact (block-subset enumeration) or a
/// certified lower bound from the heuristic used beyond 24 blocks.
#[derive(Clone, Copy, Debug)]
pub struct CutNorm {
    pub value: f64,
    pub exact: bool,
}

/// Threshold up to which the cut norm is computed exactly.
pub const CUT_NORM_EXACT_MAX_BLOCKS: usize = 24;

/// Cut norm sup_{S,T} |∫_{S×T} V| of a step kernel. For step functions the
/// supremum is attained on unions of blocks; with the row subset fixed, the
/// optimal column set takes exactly the columns whose partial sums share a
/// sign, so enumerating the 2^m row subsets is exact. Beyond 24 blocks an
/// alternating-maximization heuristic with 32 deterministic restarts returns
/// a lower bound flagged as inexact.
pub fn cut_norm_exact(v: &StepKernel) -> CutNorm {
    let m = v.m;
    if m <= CUT_NORM_EXACT_MAX_BLOCKS {
        CutNorm {
            value: cut_norm_enumerate(v),
            exact: true,
        }
    } else {
        CutNorm {
            value: cut_norm_heuristic(v),
            exact: false,
        }
    }
}

fn cut_norm_enumerate(v: &StepKernel) -> f64 {
    let m = v.m;
    let scale = (m * m) as f64;
    let mut best = 0.0f64;
    let mut col_sums = vec![0.0f64; m];
    let mut buf: Vec<f64> = Vec::with_capacity(m);
    for s in 1u32..(1u32 << m) {
        for (j, cs) in col_sums.iter_mut().enumerate() {
            buf.clear();
            let mut bits = s;
            while bits != 0 {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                buf.push(v.get(i, j));
            }
            *cs = sum_sorted(&mut buf);
        }
        buf.clear();
        for &cs in &col_sums {
            if cs > 0.0 {
                buf.push(cs);
            }
        }
        let pos = sum_sorted(&mut buf);
        buf.clear();
        for &cs in &col_sums {
            if cs < 0.0 {
                buf.push(cs);
            }
        }
        let neg = sum_sorted(&mut buf);
        best = best.max(pos.max(-neg));
    }
    best / scale
}

fn cut_norm_heuristic(v: &StepKernel) -> f64 {
    let m = v.m;
    let scale = (m * m) as f64;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0CEA_0CEA);
    let mut best = 0.0f64;
    for restart in 0..32 {
        for sign in [1.0f64, -1.0] {
            let mut s: Vec<bool> = (0..m).map(|_| restart > 0 && rng.gen_bool(0.5)).collect();
            if restart == 0 {
                s = vec![true; m];
            }
            let mut value = f64::NEG_INFINITY;
            for _ in 0..64 {
                // Best T for fixed S, then best S for fixed T.
                let mut t = vec![false; m];
                for (j, tj) in t.iter_mut().enumerate() {
                    let cs: f64 = (0..m).filter(|&i| s[i]).map(|i| sign * v.get(i, j)).sum();
                    *tj = cs > 0.0;
                }
                let mut new_s = vec![false; m];
                for (i, si) in new_s.iter_mut().enumerate() {
                    let rs: f64 = (0..m).filter(|&j| t[j]).map(|j| sign * v.get(i, j)).sum();
                    *si = rs > 0.0;
                }
                let total: f64 = (0..m)
                    .filter(|&i| new_s[i])
                    .flat_map(|i| (0..m).filter(|&j| t[j]).map(move |j| (i, j)))
                    .map(|(i, j)| sign * v.get(i, j))
                    .sum();
                if total <= value {
                    break;
                }
                value = total;
                s = new_s;
            }
            if value.is_finite() {
                best = best.max(value);
            }
        }
    }
    best / scale
}

/// L1 norm: blockwise average of |entries|.
pub fn l1_norm(v: &StepKernel) -> f64 {
    let mut buf: Vec<f64> = v.values.iter().map(|x| x.abs()).collect();
    sum_sorted(&mut buf) / (v.m * v.m) as f64
}

/// L∞ norm: maximal |entry|.
pub fn linf_norm(v: &StepKernel) -> f64 {
    v.values.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
}

/// A step function into the extended reals; the image of a kernel under log.
#[derive(Clone, Debug)]
pub struct ExtendedKernel {
    m: usize,
    entries: Vec<ExtendedReal>,
}

impl ExtendedKernel {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> ExtendedReal {
        self.entries[i * self.m + j]
    }
}

/// Blockwise natural log of a graphon; zero entries map to −∞.
pub fn log_graphon(w: &StepGraphon) -> ExtendedKernel {
    let entries = w
        .kernel
        .values
        .iter()
        .map(|&v| {
            if v == 0.0 {
                ExtendedReal::NegInf
            } else {
                ExtendedReal::Finite(v.ln())
            }
        })
        .collect();
    ExtendedKernel {
        m: w.m(),
        entries,
    }
}

/// ⟨V, U⟩ = ∫_{[0,1]²} V·U as a blockwise average, where U may take the
/// value −∞. A zero weight annihilates −∞ (the 0·log 0 convention); a
/// strictly positive weight meeting −∞ makes the whole integral −∞; a
/// negative weight meeting −∞ would be +∞ and is rejected.
pub fn inner(v: &StepKernel, u: &ExtendedKernel) -> Result<ExtendedReal> {
    if v.m != u.m {
        return Err(Error::bad_argument(format!(
            "block counts differ: {} vs {}",
            v.m, u.m
        )));
    }
    let m = v.m;
    let mut buf: Vec<f64> = Vec::with_capacity(m * m);
    let mut hit_neg_inf = false;
    for i in 0..m {
        for j in 0..m {
            let w = v.get(i, j);
            match u.get(i, j) {
                ExtendedReal::Finite(x) => buf.push(w * x),
                ExtendedReal::NegInf => {
                    if w == 0.0 {
                        // contributes 0
                    } else if w > 0.0 {
                        hit_neg_inf = true;
                    } else {
                        return Err(Error::bad_argument(
                            "negative weight against -inf: integral would be +inf",
                        ));
                    }
                }
            }
        }
    }
    if hit_neg_inf {
        return Ok(ExtendedReal::NegInf);
    }
    Ok(ExtendedReal::Finite(sum_sorted(&mut buf) / (m * m) as f64))
}

fn xlog_ratio(u: f64, p: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * (u / p).ln()
    }
}

/// Rate function I_p averaged over blocks:
/// I_p(u) = ½u·log(u/p) + ½(1−u)·log((1−u)/(1−p)).
pub fn rate_i(p: f64, w: &StepGraphon) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::bad_argument(format!("p = {p} outside (0,1)")));
    }
    let m = w.m();
    let mut buf: Vec<f64> = Vec::with_capacity(m * m);
    for u in w.kernel.values.iter() {
        buf.push(0.5 * xlog_ratio(*u, p) + 0.5 * xlog_ratio(1.0 - *u, 1.0 - p));
    }
    Ok(sum_sorted(&mut buf) / (m * m) as f64)
}

/// Binary entropy averaged over blocks: H(u) = −u·log u − (1−u)·log(1−u),
/// with H(0) = H(1) = 0.
pub fn entropy_h(w: &StepGraphon) -> f64 {
    let m = w.m();
    let mut buf: Vec<f64> = Vec::with_capacity(m * m);
    for u in w.kernel.values.iter() {
        buf.push(-xlog_ratio(*u, 1.0) - xlog_ratio(1.0 - *u, 1.0));
    }
    sum_sorted(&mut buf) / (m * m) as f64
}

/// f(W) = ⟨W, log Z_W⟩ + ⟨1−W, log(1−Z_W)⟩; −∞ exactly when a block of
/// positive weight meets a vanishing survival probability.
pub fn f_functional(w: &StepGraphon) -> Result<ExtendedReal> {
    let z = z_kernel(w)?;
    let log_z = log_graphon(&z);
    let log_zc = log_graphon(&z.complement());
    let a = inner(&w.kernel, &log_z)?;
    let b = inner(&w.complement().kernel, &log_zc)?;
    Ok(a.add(b))
}

/// f with log replaced by ℓ_k(x) = max(−k, log x); always finite, decreasing
/// in k, and an upper bound for f.
pub fn f_k_functional(w: &StepGraphon, k: f64) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::bad_argument(format!("cutoff k = {k} must be positive")));
    }
    let z = z_kernel(w)?;
    let lk = |x: f64| -> f64 {
        if x == 0.0 {
            -k
        } else {
            x.ln().max(-k)
        }
    };
    let m = w.m();
    let mut buf: Vec<f64> = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            let wij = w.get(i, j);
            let zij = z.get(i, j);
            let mut cell = 0.0;
            if wij != 0.0 {
                cell += wij * lk(zij);
            }
            if wij != 1.0 {
                cell += (1.0 - wij) * lk(1.0 - zij);
            }
            buf.push(cell);
        }
    }
    Ok(sum_sorted(&mut buf) / (m * m) as f64)
}

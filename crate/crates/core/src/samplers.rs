//! Random generation of 2-complexes.
//!
//! Three models share one seeding scheme: a 64-bit master seed is mixed with
//! a model tag, the vertex count and the trial index through a splitmix64
//! finalizer chain, and the result keys a per-trial ChaCha8 stream. Identical
//! (master, model, n, trial) always reproduces the identical complex, no
//! matter how trials are scheduled across threads.
//!
//! The weighted hypertree sampler follows the sequential algorithm for
//! projection determinantal processes: keep an orthonormal row basis of the
//! incidence row space, pick a triangle with probability proportional to its
//! squared column norm, then apply a Householder reflection that rotates the
//! selected direction into the last row and drop that row. The reflection
//! keeps the remaining rows exactly orthonormal in exact arithmetic; cheap
//! drift probes (every 64 drops) trigger a full re-orthonormalization only
//! when floating-point error actually accumulates.

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::binomial;
use crate::complex::{
    all_edges, all_triangles, edge_index, star_tree_complement, Complex2, Edge,
    SignedBoundaryMatrix, Triangle,
};
use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Seeding
// ---------------------------------------------------------------------------

/// The three supported random models.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Model {
    Determinantal,
    OneOut,
    LinialMeshulam,
}

impl Model {
    pub fn tag(self) -> u64 {
        match self {
            Model::Determinantal => 1,
            Model::OneOut => 2,
            Model::LinialMeshulam => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Model::Determinantal => "determinantal",
            Model::OneOut => "one-out",
            Model::LinialMeshulam => "linial-meshulam",
        }
    }

    pub fn parse(s: &str) -> Result<Model> {
        match s {
            "determinantal" => Ok(Model::Determinantal),
            "one-out" => Ok(Model::OneOut),
            "linial-meshulam" => Ok(Model::LinialMeshulam),
            _ => Err(Error::bad_argument(format!(
                "unknown model '{s}' (expected determinantal, one-out or linial-meshulam)"
            ))),
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Master seed plus the derivation of independent per-trial streams.
#[derive(Clone, Copy, Debug)]
pub struct RngState {
    master: u64,
}

impl RngState {
    pub fn new(master: u64) -> RngState {
        RngState { master }
    }

    pub fn master(&self) -> u64 {
        self.master
    }

    /// The seed for (model, n, trial): a splitmix64 finalizer chain over the
    /// master seed and the three coordinates.
    pub fn trial_seed(&self, model: Model, n: u32, trial: u64) -> u64 {
        let mut s = splitmix64(self.master);
        s = splitmix64(s ^ model.tag());
        s = splitmix64(s ^ u64::from(n));
        s = splitmix64(s ^ trial);
        s
    }

    /// A fresh ChaCha8 stream for the given trial coordinates.
    pub fn stream(&self, model: Model, n: u32, trial: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.trial_seed(model, n, trial))
    }
}

// ---------------------------------------------------------------------------
// Projection basis
// ---------------------------------------------------------------------------

/// An orthonormal row basis Q (r × N) of the row space of the incidence
/// submatrix on the non-tree edge rows; column j is the coordinate vector of
/// triangle j, and QᵀQ is the projection kernel of the weighted hypertree
/// measure: K(j,j) = ‖q_j‖², K(i,j) = q_i·q_j.
#[derive(Clone, Debug)]
pub struct ProjectionBasis {
    n: u32,
    rank: usize,
    cols: usize,
    q: Vec<f64>,
}

impl ProjectionBasis {
    /// Basis from the canonical star spanning tree.
    pub fn new(n: u32) -> Result<ProjectionBasis> {
        if n < 3 {
            return Err(Error::InvalidDimension { n, min: 3 });
        }
        ProjectionBasis::from_edge_rows(n, &star_tree_complement(n))
    }

    /// Basis from the complement of an arbitrary spanning tree.
    pub fn from_tree(n: u32, tree: &[Edge]) -> Result<ProjectionBasis> {
        if tree.len() != n as usize - 1 {
            return Err(Error::bad_argument(format!(
                "spanning tree on [{n}] needs {} edges, got {}",
                n - 1,
                tree.len()
            )));
        }
        let mut in_tree = vec![false; binomial(u64::from(n), 2)];
        for e in tree {
            in_tree[edge_index(n, *e)] = true;
        }
        let rows: Vec<Edge> = all_edges(n)
            .into_iter()
            .filter(|e| !in_tree[edge_index(n, *e)])
            .collect();
        ProjectionBasis::from_edge_rows(n, &rows)
    }

    fn from_edge_rows(n: u32, rows: &[Edge]) -> Result<ProjectionBasis> {
        let m = SignedBoundaryMatrix::new(n)?;
        let cols = m.cols();
        let rank = rows.len();
        let data = m.submatrix_i64(rows, &all_triangles(n))?;
        let mut q: Vec<f64> = data.iter().map(|&v| v as f64).collect();
        orthonormalize_rows(&mut q, rank, cols)?;
        Ok(ProjectionBasis { n, rank, cols, q })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_triangles(&self) -> usize {
        self.cols
    }

    /// Diagonal of the projection kernel: squared column norms.
    pub fn kernel_diag(&self) -> Vec<f64> {
        let mut diag = vec![0.0f64; self.cols];
        for i in 0..self.rank {
            let row = &self.q[i * self.cols..(i + 1) * self.cols];
            for (d, v) in diag.iter_mut().zip(row) {
                *d += v * v;
            }
        }
        diag
    }

    /// Kernel entry K(i,j) = q_i · q_j over triangle columns i, j.
    pub fn kernel_entry(&self, i: usize, j: usize) -> f64 {
        (0..self.rank)
            .map(|k| self.q[k * self.cols + i] * self.q[k * self.cols + j])
            .sum()
    }

    /// Frobenius distance ‖QᵀQ − PᵀP‖_F between two projection kernels on
    /// the same triangle set.
    pub fn projector_distance(&self, other: &ProjectionBasis) -> Result<f64> {
        if self.cols != other.cols {
            return Err(Error::bad_argument("bases live on different triangle sets"));
        }
        let mut acc = 0.0f64;
        for i in 0..self.cols {
            for j in 0..self.cols {
                let d = self.kernel_entry(i, j) - other.kernel_entry(i, j);
                acc += d * d;
            }
        }
        Ok(acc.sqrt())
    }
}

/// Modified Gram-Schmidt with reorthogonalization; errors if a row collapses
/// (non-tree incidence rows are provably independent, so a collapse means the
/// input was not a tree complement).
fn orthonormalize_rows(q: &mut [f64], rank: usize, cols: usize) -> Result<()> {
    for i in 0..rank {
        for _pass in 0..2 {
            for k in 0..i {
                let mut dot = 0.0f64;
                for j in 0..cols {
                    dot += q[i * cols + j] * q[k * cols + j];
                }
                if dot != 0.0 {
                    for j in 0..cols {
                        q[i * cols + j] -= dot * q[k * cols + j];
                    }
                }
            }
        }
        let norm2: f64 = (0..cols).map(|j| q[i * cols + j] * q[i * cols + j]).sum();
        let norm = norm2.sqrt();
        if !(norm > 1e-9) {
            return Err(Error::internal(format!(
                "row {i} collapsed during orthonormalization (norm {norm:.3e})"
            )));
        }
        for j in 0..cols {
            q[i * cols + j] /= norm;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Hypertree sampling
// ---------------------------------------------------------------------------

const NORM_FLOOR: f64 = 1e-12;
const DRIFT_TOLERANCE: f64 = 1e-9;
const PROBE_PERIOD: usize = 64;

/// Samples one weighted hypertree on [n], building the basis internally.
/// For repeated sampling at the same n, build one [`ProjectionBasis`] and use
/// [`sample_hypertree_with_basis`].
pub fn sample_hypertree(n: u32, rng: &mut ChaCha8Rng) -> Result<Complex2> {
    let basis = ProjectionBasis::new(n)?;
    sample_hypertree_with_basis(&basis, rng)
}

/// Samples one weighted hypertree from a prebuilt projection basis.
pub fn sample_hypertree_with_basis(
    basis: &ProjectionBasis,
    rng: &mut ChaCha8Rng,
) -> Result<Complex2> {
    let cols = basis.cols;
    let r = basis.rank;
    let mut v = basis.q.clone();
    let mut rows = r;
    let mut norms = basis.kernel_diag();
    let mut picked = vec![false; cols];
    let mut chosen: Vec<usize> = Vec::with_capacity(r);
    let mut wvec: Vec<f64> = Vec::with_capacity(r);
    let mut g: Vec<f64> = vec![0.0; cols];

    for step in 0..r {
        let mut j = select_column(&norms, &picked, rng)?;
        let mut nj2 = exact_column_norm2(&v, rows, cols, j);
        if nj2 < NORM_FLOOR {
            // One rescue attempt: rebuild orthonormality, refresh the norm
            // table, redraw. A second failure aborts the sample.
            orthonormalize_rows(&mut v[..rows * cols], rows, cols)
                .map_err(|_| numerical_failure(step))?;
            recompute_norms(&v, rows, cols, &mut norms);
            j = select_column(&norms, &picked, rng)?;
            nj2 = exact_column_norm2(&v, rows, cols, j);
            if nj2 < NORM_FLOOR {
                return Err(numerical_failure(step));
            }
        }
        picked[j] = true;
        chosen.push(j);

        // Householder reflection sending column j to a multiple of the last
        // coordinate; the surviving rows stay an orthonormal basis of the
        // orthocomplement of the chosen direction.
        let inv_norm = 1.0 / nj2.sqrt();
        wvec.clear();
        for i in 0..rows {
            wvec.push(v[i * cols + j] * inv_norm);
        }
        let last = rows - 1;
        let sign = if wvec[last] >= 0.0 { 1.0 } else { -1.0 };
        wvec[last] += sign;
        let wnorm2: f64 = wvec.iter().map(|x| x * x).sum();
        let beta = 2.0 / wnorm2;

        for x in g[..cols].iter_mut() {
            *x = 0.0;
        }
        for (i, &wi) in wvec.iter().enumerate() {
            let row = &v[i * cols..(i + 1) * cols];
            for (gx, &vx) in g.iter_mut().zip(row) {
                *gx += wi * vx;
            }
        }
        for (i, &wi) in wvec.iter().enumerate() {
            let f = beta * wi;
            let row = &mut v[i * cols..(i + 1) * cols];
            for (vx, &gx) in row.iter_mut().zip(g.iter()) {
                *vx -= f * gx;
            }
        }

        // The dropped row absorbs the squared mass of every column.
        {
            let row = &v[last * cols..(last + 1) * cols];
            for (nrm, &vx) in norms.iter_mut().zip(row) {
                *nrm -= vx * vx;
            }
        }
        norms[j] = 0.0;
        rows -= 1;

        if rows > 0 && (step + 1) % PROBE_PERIOD == 0 && drift_probe(&v, rows, cols) > DRIFT_TOLERANCE
        {
            orthonormalize_rows(&mut v[..rows * cols], rows, cols)
                .map_err(|_| numerical_failure(step))?;
            recompute_norms(&v, rows, cols, &mut norms);
            for (j, p) in picked.iter().enumerate() {
                if *p {
                    norms[j] = 0.0;
                }
            }
        }
    }

    let tris = all_triangles(basis.n);
    let faces: Vec<Triangle> = chosen.into_iter().map(|j| tris[j]).collect();
    Complex2::new(basis.n, faces)
        .map_err(|e| Error::internal(format!("sampler produced an invalid complex: {e}")))
}

fn numerical_failure(step: usize) -> Error {
    Error::numerical(format!(
        "column norms collapsed at selection step {step}; basis lost orthonormality"
    ))
}

fn select_column(norms: &[f64], picked: &[bool], rng: &mut ChaCha8Rng) -> Result<usize> {
    let mut total = 0.0f64;
    for (j, &nrm) in norms.iter().enumerate() {
        if !picked[j] && nrm > 0.0 {
            total += nrm;
        }
    }
    if !(total > 0.0) || !total.is_finite() {
        return Err(Error::numerical(format!(
            "no selectable column mass left (total {total})"
        )));
    }
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0f64;
    let mut fallback = None;
    for (j, &nrm) in norms.iter().enumerate() {
        if picked[j] || nrm <= 0.0 {
            continue;
        }
        fallback = Some(j);
        acc += nrm;
        if acc > target {
            return Ok(j);
        }
    }
    fallback.ok_or_else(|| Error::numerical("no selectable column left".to_string()))
}

fn exact_column_norm2(v: &[f64], rows: usize, cols: usize, j: usize) -> f64 {
    (0..rows).map(|i| v[i * cols + j] * v[i * cols + j]).sum()
}

fn recompute_norms(v: &[f64], rows: usize, cols: usize, norms: &mut [f64]) {
    for nrm in norms.iter_mut() {
        *nrm = 0.0;
    }
    for i in 0..rows {
        let row = &v[i * cols..(i + 1) * cols];
        for (nrm, &vx) in norms.iter_mut().zip(row) {
            *nrm += vx * vx;
        }
    }
}

/// Cheap orthonormality probe: worst deviation of a handful of fixed row
/// inner products from the identity.
fn drift_probe(v: &[f64], rows: usize, cols: usize) -> f64 {
    let idx = [0, rows / 3, rows / 2, rows.saturating_sub(1)];
    let mut worst = 0.0f64;
    for (a, &ia) in idx.iter().enumerate() {
        for &ib in &idx[a..] {
            if ia >= rows || ib >= rows {
                continue;
            }
            let mut dot = 0.0f64;
            for j in 0..cols {
                dot += v[ia * cols + j] * v[ib * cols + j];
            }
            let expect = if ia == ib { 1.0 } else { 0.0 };
            worst = worst.max((dot - expect).abs());
        }
    }
    worst
}

// ---------------------------------------------------------------------------
// One-out and Linial-Meshulam
// ---------------------------------------------------------------------------

/// The 1-out complex: every edge {a,b} of the complete graph picks one
/// uniformly random third vertex; coinciding triangles are kept once.
pub fn sample_one_out(n: u32, rng: &mut ChaCha8Rng) -> Result<Complex2> {
    if n < 3 {
        return Err(Error::InvalidDimension { n, min: 3 });
    }
    let mut faces = Vec::with_capacity(binomial(u64::from(n), 2));
    for a in 1..=n {
        for b in a + 1..=n {
            let mut w = rng.gen_range(1..=n - 2);
            if w >= a {
                w += 1;
            }
            if w >= b {
                w += 1;
            }
            faces.push(Triangle::new(a, b, w).expect("third vertex is distinct"));
        }
    }
    Complex2::new_dedup(n, faces)
}

/// The Linial-Meshulam complex: every triangle appears independently with
/// probability p.
pub fn sample_linial_meshulam(n: u32, p: f64, rng: &mut ChaCha8Rng) -> Result<Complex2> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::bad_argument(format!("probability p = {p} outside [0,1]")));
    }
    if n < 3 {
        return Err(Error::InvalidDimension { n, min: 3 });
    }
    let faces: Vec<Triangle> = all_triangles(n)
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect();
    Complex2::new(n, faces)
}

/// One sample from the given model. `lm_p` is the triangle probability and
/// is required exactly when the model is Linial-Meshulam. Determinantal
/// sampling rebuilds the projection basis on every call; batch users should
/// build a [`ProjectionBasis`] once and call
/// [`sample_hypertree_with_basis`] instead.
pub fn sample_complex(
    model: Model,
    n: u32,
    lm_p: Option<f64>,
    rng: &mut ChaCha8Rng,
) -> Result<Complex2> {
    match model {
        Model::Determinantal => sample_hypertree(n, rng),
        Model::OneOut => sample_one_out(n, rng),
        Model::LinialMeshulam => {
            let p = lm_p.ok_or_else(|| {
                Error::bad_argument("the Linial-Meshulam model requires a probability p")
            })?;
            sample_linial_meshulam(n, p, rng)
        }
    }
}

// ---------------------------------------------------------------------------
// Exhaustive oracle (small n)
// ---------------------------------------------------------------------------

/// Upper limit for exhaustive hypertree enumeration.
pub const ENUMERATION_MAX_N: u32 = 6;

/// Every hypertree on [n] together with its homology order |H₁(ℤ)|, in
/// lexicographic order of the triangle sets. Capped at n = 6, where the scan
/// covers C(20,10) = 184756 candidate subsets.
pub fn enumerate_hypertrees(n: u32) -> Result<Vec<(Complex2, BigUint)>> {
    if n < 3 {
        return Err(Error::InvalidDimension { n, min: 3 });
    }
    if n > ENUMERATION_MAX_N {
        return Err(Error::capacity(format!(
            "exhaustive enumeration is limited to n <= {ENUMERATION_MAX_N} (got n = {n})"
        )));
    }
    let r = binomial(u64::from(n) - 1, 2);
    let tris = all_triangles(n);
    let x = star_tree_complement(n);
    // Per-triangle sparse column restricted to the non-tree rows.
    let mut row_of_edge = vec![usize::MAX; binomial(u64::from(n), 2)];
    for (i, e) in x.iter().enumerate() {
        row_of_edge[edge_index(n, *e)] = i;
    }
    let columns: Vec<Vec<(usize, i64)>> = tris
        .iter()
        .map(|t| {
            t.boundary_edges()
                .into_iter()
                .filter_map(|(e, s)| {
                    let row = row_of_edge[edge_index(n, e)];
                    (row != usize::MAX).then_some((row, s))
                })
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut buf = vec![0i64; r * r];
    for combo in (0..tris.len()).combinations(r) {
        buf.iter_mut().for_each(|v| *v = 0);
        for (col, &tj) in combo.iter().enumerate() {
            for &(row, s) in &columns[tj] {
                buf[row * r + col] = s;
            }
        }
        let det = crate::linalg::bareiss_det_i64(r, &buf)
            .expect("sign-matrix determinants at n <= 6 fit in i64");
        if det != 0 {
            let faces: Vec<Triangle> = combo.iter().map(|&tj| tris[tj]).collect();
            let k = Complex2::new(n, faces)?;
            out.push((k, BigUint::from(det.unsigned_abs())));
        }
    }
    Ok(out)
}

/// The exact sampling measure on hypertrees: S ↦ |H₁(S,ℤ)|² / n^C(n−2,2),
/// as exact rationals summing to exactly 1.
pub fn exact_measure(n: u32) -> Result<Vec<(Complex2, BigRational)>> {
    let hypertrees = enumerate_hypertrees(n)?;
    let denom = num_traits::pow(
        BigInt::from(n),
        binomial(u64::from(n).saturating_sub(2), 2),
    );
    let mut total = BigRational::zero();
    let mut out = Vec::with_capacity(hypertrees.len());
    for (k, order) in hypertrees {
        let h = BigInt::from(order);
        let mass = BigRational::new(&h * &h, denom.clone());
        total += &mass;
        out.push((k, mass));
    }
    if !total.is_one() {
        return Err(Error::internal(format!(
            "hypertree masses sum to {total} instead of 1"
        )));
    }
    Ok(out)
}

/// A uniformly random labeled spanning tree on [n] (uniformity is not needed
/// by callers, only coverage of many distinct trees).
pub fn random_spanning_tree(n: u32, rng: &mut ChaCha8Rng) -> Result<Vec<Edge>> {
    if n < 2 {
        return Err(Error::InvalidDimension { n, min: 2 });
    }
    if n == 2 {
        return Ok(vec![Edge::new(1, 2)?]);
    }
    // Decode a random Prüfer sequence.
    let seq: Vec<u32> = (0..n - 2).map(|_| rng.gen_range(1..=n)).collect();
    let mut degree = vec![1u32; n as usize + 1];
    for &v in &seq {
        degree[v as usize] += 1;
    }
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    let mut leaves: BinaryHeap<Reverse<u32>> =
        (1..=n).filter(|&v| degree[v as usize] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n as usize - 1);
    for &v in &seq {
        let Reverse(leaf) = leaves.pop().expect("a tree always has a leaf");
        edges.push(Edge::new(leaf, v)?);
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 {
            leaves.push(Reverse(v));
        }
    }
    let Reverse(a) = leaves.pop().expect("two vertices remain");
    let Reverse(b) = leaves.pop().expect("two vertices remain");
    edges.push(Edge::new(a, b)?);
    edges.sort_unstable();
    Ok(edges)
}

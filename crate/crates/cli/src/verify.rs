//! Self-check suite: a battery of exact identities and cross-validations
//! that the library must satisfy. The fast level finishes in well under a
//! minute; the full level adds the exhaustive n = 5 and n = 6 sweeps.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypertree_core::bounds::{
    cohen_lenstra_pmf, is_cocycle, log_prob_at_most, one_out_cocycle_prob, prob_cocycle_exact,
    prob_subcomplex_exact, upperb_bound, upperbf_bound,
};
use hypertree_core::complex::{
    all_edges, all_triangles, full_boundary, star_tree_complement, Complex2, Edge, Graph,
    Triangle,
};
use hypertree_core::extreal::ExtendedReal;
use hypertree_core::graphon::{
    cut_norm_exact, entropy_h, f_functional, f_k_functional, l1_norm, linf_norm, z_kernel,
    StepGraphon, StepKernel,
};
use hypertree_core::linalg::{gram_det, h1_f2_dim, h1_fp_dim, h1_snf, IntMatrix};
use hypertree_core::samplers::{
    enumerate_hypertrees, sample_hypertree_with_basis, sample_linial_meshulam, Model,
    ProjectionBasis, RngState,
};
use hypertree_core::{binomial, Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VerifyLevel {
    Fast,
    Full,
}

impl VerifyLevel {
    pub fn parse(s: &str) -> Result<VerifyLevel> {
        match s {
            "fast" => Ok(VerifyLevel::Fast),
            "full" => Ok(VerifyLevel::Full),
            other => Err(Error::bad_argument(format!(
                "unknown level '{other}' (expected fast or full)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, body: impl FnOnce() -> std::result::Result<String, String>) -> Check {
    match body() {
        Ok(detail) => Check { name, passed: true, detail },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn core<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| format!("unexpected error: {e}"))
}

/// Runs every check at the given level; failures are recorded, not
/// short-circuited, so one report covers the whole battery.
pub fn run_verify(level: VerifyLevel) -> Vec<Check> {
    let mut checks = vec![
        check("hypertree-count-n5", hypertree_count_n5),
        check("projective-plane-homology", projective_plane_homology),
        check("boundary-composition", boundary_composition),
        check("measure-total-mass", measure_total_mass),
        check("cohen-lenstra-constants", cohen_lenstra_constants),
        check("projection-kernel", projection_kernel),
        check("sampler-validity", sampler_validity),
        check("one-out-product-formula", one_out_product_formula),
        check("expected-cocycles-n5", expected_cocycles_n5),
        check("graphon-identities", graphon_identities),
    ];
    if level == VerifyLevel::Full {
        checks.push(check("hypertree-count-n6", hypertree_count_n6));
        checks.push(check("determinant-homology-n5", determinant_homology_n5));
        checks.push(check("cocycle-bound-n5-exhaustive", cocycle_bound_n5_exhaustive));
        checks.push(check("containment-bound-n6", containment_bound_n6));
    }
    checks
}

// ---------------------------------------------------------------------------
// Fast checks
// ---------------------------------------------------------------------------

fn hypertree_count_n5() -> std::result::Result<String, String> {
    let trees = core(enumerate_hypertrees(5))?;
    if trees.len() != 125 {
        return Err(format!("expected 125 hypertrees, found {}", trees.len()));
    }
    let total: BigUint = trees.iter().map(|(_, h)| h * h).sum();
    if total != BigUint::from(125u32) {
        return Err(format!("squared homology orders sum to {total}, not 125"));
    }
    Ok("125 hypertrees, squared orders sum to 125".into())
}

fn projective_plane_homology() -> std::result::Result<String, String> {
    let faces = [
        (1, 2, 3),
        (1, 2, 4),
        (1, 3, 5),
        (1, 4, 6),
        (1, 5, 6),
        (2, 3, 6),
        (2, 4, 5),
        (2, 5, 6),
        (3, 4, 5),
        (3, 4, 6),
    ];
    let tris: Vec<Triangle> = faces
        .iter()
        .map(|&(a, b, c)| Triangle::new(a, b, c).unwrap())
        .collect();
    let k = core(Complex2::new(6, tris))?;
    let d2 = h1_f2_dim(&k);
    if d2 != 1 {
        return Err(format!("mod-2 homology dimension is {d2}, expected 1"));
    }
    let d3 = core(h1_fp_dim(&k, 3))?;
    if d3 != 0 {
        return Err(format!("mod-3 homology dimension is {d3}, expected 0"));
    }
    let s = h1_snf(&k);
    let z1 = binomial(6, 2) - 5;
    if s.rank != z1 {
        return Err(format!("free rank {} expected 0", z1 - s.rank));
    }
    let order = s.factor_product();
    if order != BigUint::from(2u32) {
        return Err(format!("torsion order {order}, expected 2"));
    }
    Ok("six-vertex projective plane has H₁ = Z/2".into())
}

fn boundary_composition() -> std::result::Result<String, String> {
    for n in 3u32..=6 {
        let m = core(full_boundary(n))?;
        let d2 = m.dense();
        let edges = all_edges(n);
        let d1 = IntMatrix::from_fn(n as usize, edges.len(), |v, e| {
            let edge = edges[e];
            if edge.a() == v as u32 + 1 {
                (-1).into()
            } else if edge.b() == v as u32 + 1 {
                1.into()
            } else {
                0.into()
            }
        });
        if !d1.mul(&d2).map_err(|e| e.to_string())?.is_zero() {
            return Err(format!("boundary composition does not vanish at n = {n}"));
        }
    }
    Ok("vertex boundary of every triangle boundary vanishes, n = 3..6".into())
}

fn measure_total_mass() -> std::result::Result<String, String> {
    // The measure constructor verifies that the masses sum to exactly 1;
    // additionally pin the uniform n = 4 case and the full-incidence Gram
    // determinant identity.
    let m4 = core(hypertree_core::samplers::exact_measure(4))?;
    if m4.len() != 4 || m4.iter().any(|(_, q)| *q != BigRational::new(1.into(), 4.into())) {
        return Err("n = 4 measure is not uniform on 4 hypertrees".into());
    }
    for n in [4u32, 5] {
        let b = core(full_boundary(n))?;
        let rows = star_tree_complement(n);
        let cols = all_triangles(n);
        let sub = core(b.submatrix(&rows, &cols))?;
        let det = core(gram_det(&sub))?;
        let expected = num_traits::pow(
            num_bigint::BigInt::from(n),
            binomial(u64::from(n) - 2, 2),
        );
        if det != expected {
            return Err(format!("total Gram mass {det} differs from {expected} at n = {n}"));
        }
    }
    Ok("exact measure sums to 1; total Gram mass matches nᶜ⁽ⁿ⁻²˒²⁾".into())
}

fn cohen_lenstra_constants() -> std::result::Result<String, String> {
    let c0 = core(cohen_lenstra_pmf(2, 0, 64))?;
    if (c0 - 0.2887880950866024).abs() > 1e-12 {
        return Err(format!("pmf(2,0) = {c0}"));
    }
    let c1 = core(cohen_lenstra_pmf(2, 1, 64))?;
    if (c1 - 2.0 * c0).abs() > 1e-12 {
        return Err(format!("pmf(2,1) = {c1} is not twice pmf(2,0)"));
    }
    let mut total = 0.0;
    for r in 0..=12 {
        total += core(cohen_lenstra_pmf(2, r, 64))?;
    }
    if (total - 1.0).abs() > 1e-9 {
        return Err(format!("pmf(2,·) sums to {total}"));
    }
    Ok("pinned values and unit mass reproduced".into())
}

fn projection_kernel() -> std::result::Result<String, String> {
    for n in [8u32, 10] {
        let b = core(ProjectionBasis::new(n))?;
        let trace: f64 = b.kernel_diag().iter().sum();
        let rank = binomial(u64::from(n) - 1, 2) as f64;
        if (trace - rank).abs() > 1e-6 {
            return Err(format!("kernel trace {trace} differs from rank {rank} at n = {n}"));
        }
    }
    let star1: Vec<Edge> = (2..=6).map(|v| Edge::new(1, v).unwrap()).collect();
    let path: Vec<Edge> = (1..6).map(|v| Edge::new(v, v + 1).unwrap()).collect();
    let star3: Vec<Edge> = [1, 2, 4, 5, 6].iter().map(|&v| Edge::new(3, v).unwrap()).collect();
    let bases: Vec<ProjectionBasis> = [star1, path, star3]
        .into_iter()
        .map(|t| core(ProjectionBasis::from_tree(6, &t)))
        .collect::<std::result::Result<_, _>>()?;
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            let d = core(bases[i].projector_distance(&bases[j]))?;
            if d > 1e-8 {
                return Err(format!("projectors from trees {i} and {j} differ by {d}"));
            }
        }
    }
    Ok("trace equals rank; projector independent of the spanning tree".into())
}

fn sampler_validity() -> std::result::Result<String, String> {
    let n = 6u32;
    let basis = core(ProjectionBasis::new(n))?;
    let state = RngState::new(0xC0FFEE);
    let want = binomial(u64::from(n) - 1, 2);
    let z1 = binomial(u64::from(n), 2) - (n as usize - 1);
    for trial in 0..200u64 {
        let mut rng = state.stream(Model::Determinantal, n, trial);
        let k = core(sample_hypertree_with_basis(&basis, &mut rng))?;
        if k.num_triangles() != want {
            return Err(format!(
                "trial {trial}: {} triangles instead of {want}",
                k.num_triangles()
            ));
        }
        if h1_snf(&k).rank != z1 {
            return Err(format!("trial {trial}: sample has positive first Betti number"));
        }
    }
    Ok("200 samples at n = 6, every one a hypertree".into())
}

fn one_out_product_formula() -> std::result::Result<String, String> {
    let n = 4u32;
    for edges in [vec![(1u32, 2u32)], vec![(1, 2), (1, 3)]] {
        let g = core(Graph::new(
            n,
            edges.iter().map(|&(a, b)| Edge::new(a, b).unwrap()).collect(),
        ))?;
        let formula = core(one_out_cocycle_prob(&g))?;
        let mut hits = 0u64;
        let edges = all_edges(n);
        let outcomes = 1u64 << edges.len();
        for code in 0..outcomes {
            let mut faces = Vec::new();
            for (i, e) in edges.iter().enumerate() {
                let mut w = 1 + (code >> i & 1) as u32;
                if w >= e.a() {
                    w += 1;
                }
                if w >= e.b() {
                    w += 1;
                }
                faces.push(Triangle::new(e.a(), e.b(), w).unwrap());
            }
            let k = core(Complex2::new_dedup(n, faces))?;
            if core(is_cocycle(&g, &k))? {
                hits += 1;
            }
        }
        let brute = BigRational::new(hits.into(), outcomes.into());
        if brute != formula {
            return Err(format!("formula {formula} vs brute force {brute}"));
        }
    }
    Ok("product formula matches full outcome enumeration at n = 4".into())
}

fn expected_cocycles_n5() -> std::result::Result<String, String> {
    let n = 5u32;
    let edges = all_edges(n);
    let mut total = BigRational::zero();
    for code in 0u32..1 << edges.len() {
        let picked: Vec<Edge> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| code >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let g = core(Graph::new(n, picked))?;
        total += core(prob_cocycle_exact(&g))?;
    }
    if total != BigRational::from_integer(16.into()) {
        return Err(format!("expected cocycle count is {total}, not 16"));
    }
    Ok("sum of cocycle probabilities over all 1024 graphs is exactly 16".into())
}

fn graphon_identities() -> std::result::Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1f);
    for round in 0..100 {
        let m = rng.gen_range(1..=10);
        let mut values = vec![0.0f64; m * m];
        for i in 0..m {
            for j in i..m {
                let v = rng.gen_range(0.0..=1.0);
                values[i * m + j] = v;
                values[j * m + i] = v;
            }
        }
        let w = StepGraphon::new(StepKernel::new(m, values).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;

        if let ExtendedReal::Finite(f) = core(f_functional(&w))? {
            let h = entropy_h(&w);
            if f + h > 1e-9 {
                return Err(format!("round {round}: f + H = {} > 0", f + h));
            }
            let mut prev = f64::INFINITY;
            for k in [0.5, 1.0, 2.0, 4.0] {
                let fk = core(f_k_functional(&w, k))?;
                if fk > prev + 1e-12 || fk < f - 1e-12 {
                    return Err(format!("round {round}: truncation order violated at k = {k}"));
                }
                prev = fk;
            }
        }

        let z = core(z_kernel(&w))?;
        let zc = core(z_kernel(&w.complement()))?;
        for (a, b) in z.kernel().values().iter().zip(zc.kernel().values()) {
            if (a - b).abs() > 1e-12 {
                return Err(format!("round {round}: Z not complement-invariant"));
            }
        }

        let cut = cut_norm_exact(w.kernel());
        let l1 = l1_norm(w.kernel());
        let linf = linf_norm(w.kernel());
        if !(cut.value <= l1 + 1e-12 && l1 <= linf + 1e-12) {
            return Err(format!("round {round}: norm chain violated"));
        }
    }
    Ok("Gibbs, truncation, complement and norm-chain identities hold on 100 kernels".into())
}

// ---------------------------------------------------------------------------
// Full-level checks
// ---------------------------------------------------------------------------

fn hypertree_count_n6() -> std::result::Result<String, String> {
    let trees = core(enumerate_hypertrees(6))?;
    if trees.len() != 46_620 {
        return Err(format!("expected 46620 hypertrees, found {}", trees.len()));
    }
    let mut total = BigUint::zero();
    let mut ones = 0u64;
    let mut twos = 0u64;
    for (_, h) in &trees {
        total += h * h;
        if h.is_one() {
            ones += 1;
        } else if *h == BigUint::from(2u32) {
            twos += 1;
        }
    }
    if total != BigUint::from(46_656u32) {
        return Err(format!("squared orders sum to {total}, not 46656"));
    }
    if (ones, twos) != (46_608, 12) {
        return Err(format!("order histogram 1:{ones} 2:{twos}, expected 1:46608 2:12"));
    }
    Ok("46620 hypertrees; Σ|H₁|² = 46656; orders 1:46608, 2:12".into())
}

fn determinant_homology_n5() -> std::result::Result<String, String> {
    let n = 5u32;
    let b = core(full_boundary(n))?;
    let rows = star_tree_complement(n);
    let tris = all_triangles(n);
    let r = rows.len() as u32;
    let mut agree = 0u64;
    let mut total = 0u64;
    for mask in 0u32..1 << tris.len() {
        if mask.count_ones() != r {
            continue;
        }
        total += 1;
        let combo: Vec<Triangle> = tris
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, t)| *t)
            .collect();
        let sub = core(b.submatrix_i64(&rows, &combo))?;
        let det = hypertree_core::linalg::bareiss_det_i64(rows.len(), &sub)
            .ok_or_else(|| "determinant overflow".to_string())?;
        let k = core(Complex2::new(n, combo))?;
        let s = h1_snf(&k);
        let z1 = binomial(u64::from(n), 2) - (n as usize - 1);
        let order_matches = if det == 0 {
            s.rank < z1
        } else {
            s.rank == z1 && s.factor_product() == BigUint::from(det.unsigned_abs())
        };
        if order_matches {
            agree += 1;
        }
    }
    if agree != total || total != 210 {
        return Err(format!("{agree}/{total} subsets agree (expected 210/210)"));
    }
    Ok("all 210 incidence determinants match the Smith normal form".into())
}

fn cocycle_bound_n5_exhaustive() -> std::result::Result<String, String> {
    let n = 5u32;
    let edges = all_edges(n);
    let mut violations = 0u64;
    for code in 0u32..1 << edges.len() {
        let picked: Vec<Edge> = edges
            .iter()
            .enumerate()
            .filter(|(i, _)| code >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect();
        let g = core(Graph::new(n, picked))?;
        let p = core(prob_cocycle_exact(&g))?;
        let bound = upperbf_bound(&g);
        if !core(log_prob_at_most(&p, bound))? {
            violations += 1;
        }
    }
    if violations > 0 {
        return Err(format!("{violations} of 1024 graphs violate the bound"));
    }
    Ok("bound holds for every one of the 1024 graphs".into())
}

fn containment_bound_n6() -> std::result::Result<String, String> {
    let state = RngState::new(0xB0B);
    let mut violations = 0u64;
    for trial in 0..500u64 {
        let mut rng = state.stream(Model::LinialMeshulam, 6, trial);
        let y = core(sample_linial_meshulam(6, 0.7, &mut rng))?;
        let p = core(prob_subcomplex_exact(&y))?;
        let bound = upperb_bound(&y);
        if !core(log_prob_at_most(&p, bound))? {
            violations += 1;
        }
    }
    if violations > 0 {
        return Err(format!("{violations} of 500 subcomplexes violate the bound"));
    }
    Ok("bound holds for 500 random subcomplexes at n = 6".into())
}

//! Exact event probabilities, log-scale upper bounds, and reference
//! distributions.
//!
//! Probabilities are exact rationals: containment events for the weighted
//! hypertree measure reduce to integer Gram determinants of incidence
//! submatrices, and cocycle events for the 1-out model factor over edges.
//! Upper bounds are closed-form expressions on the log scale; −∞ is a valid
//! bound value. Comparisons between an exact rational and a float bound go
//! through directed rounding of the rational's logarithm so that a reported
//! inequality can never be an artifact of float noise.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::binomial;
use crate::complex::{
    all_triangles, graph_coboundary, star_tree_complement, t_counts, Complex2, Graph,
    SignedBoundaryMatrix,
};
use crate::error::{Error, Result};
use crate::extreal::{sum_sorted, ExtendedReal};
use crate::linalg::{boundary_rank_f2, gram_det, gram_det_i64, is_prime_u64};

// ---------------------------------------------------------------------------
// Cocycle predicate and counting
// ---------------------------------------------------------------------------

/// Whether the edge set g is a mod-2 cocycle of k: every triangle of k must
/// contain an even number of edges of g.
pub fn is_cocycle(g: &Graph, k: &Complex2) -> Result<bool> {
    if g.n() != k.n() {
        return Err(Error::bad_argument(format!(
            "graph on [{}] and complex on [{}] do not match",
            g.n(),
            k.n()
        )));
    }
    Ok(k.triangles().iter().all(|t| {
        let hits = t.edges().iter().filter(|e| g.contains(**e)).count();
        hits % 2 == 0
    }))
}

/// |Z¹(k; F₂)| = 2^(C(n,2) − rank₂ ∂₂), the number of mod-2 cocycles.
pub fn cocycle_count(k: &Complex2) -> BigUint {
    let n = u64::from(k.n());
    let exponent = binomial(n, 2) - boundary_rank_f2(k);
    num_traits::pow(BigUint::from(2u32), exponent)
}

// ---------------------------------------------------------------------------
// Exact probabilities, weighted hypertree measure
// ---------------------------------------------------------------------------

fn measure_denominator(n: u32) -> BigInt {
    num_traits::pow(BigInt::from(n), binomial(u64::from(n).saturating_sub(2), 2))
}

/// P(S ⊆ k) for the weighted hypertree measure: the probability that the
/// sampled hypertree uses only triangles of k. Equals the sum of |H₁|² over
/// hypertrees inside k divided by n^C(n−2,2), computed as one integer Gram
/// determinant.
pub fn prob_subcomplex_exact(k: &Complex2) -> Result<BigRational> {
    let n = k.n();
    let r = binomial(u64::from(n) - 1, 2);
    if k.num_triangles() < r {
        return Ok(BigRational::zero());
    }
    let m = SignedBoundaryMatrix::new(n)?;
    let rows = star_tree_complement(n);
    let cols = k.num_triangles();
    let data = m.submatrix_i64(&rows, k.triangles())?;
    let numer = match gram_det_i64(r, cols, &data) {
        Some(d) => BigInt::from(d),
        None => gram_det(&m.submatrix(&rows, k.triangles())?)?,
    };
    Ok(BigRational::new(numer, measure_denominator(n)))
}

/// The subcomplex of triangles with even g-parity: exactly the triangles a
/// sample may use while keeping g a cocycle.
fn even_parity_complex(g: &Graph) -> Result<Complex2> {
    let n = g.n();
    let odd = graph_coboundary(g)?;
    let mut odd_iter = odd.iter().peekable();
    let mut even = Vec::with_capacity(binomial(u64::from(n), 3) - odd.len());
    for t in all_triangles(n) {
        if odd_iter.peek() == Some(&&t) {
            odd_iter.next();
        } else {
            even.push(t);
        }
    }
    Complex2::new(n, even)
}

/// P(g ∈ Z¹(S)) for the weighted hypertree measure: g is a cocycle exactly
/// when S avoids every triangle with odd g-parity, so this is a containment
/// probability for the even-parity subcomplex.
pub fn prob_cocycle_exact(g: &Graph) -> Result<BigRational> {
    prob_subcomplex_exact(&even_parity_complex(g)?)
}

// ---------------------------------------------------------------------------
// Exact probabilities, 1-out model
// ---------------------------------------------------------------------------

/// P(g ∈ Z¹(S)) for the 1-out model. Edge choices are independent, so the
/// probability is the product over edges e of (number of third vertices
/// giving e an even-parity triangle) / (n−2).
pub fn one_out_cocycle_prob(g: &Graph) -> Result<BigRational> {
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidDimension { n, min: 4 });
    }
    let counts = t_counts(&even_parity_complex(g)?);
    let mut numer = BigInt::one();
    for c in counts {
        if c == 0 {
            return Ok(BigRational::zero());
        }
        numer *= BigInt::from(c);
    }
    let denom = num_traits::pow(BigInt::from(n - 2), binomial(u64::from(n), 2));
    Ok(BigRational::new(numer, denom))
}

// ---------------------------------------------------------------------------
// Log-scale upper bounds
// ---------------------------------------------------------------------------

/// Upper bound for ln P(S ⊆ k) under the weighted hypertree measure:
/// (n−2)·ln n + (1 − 2/n)·Σ_e ln(t_k(e)/n), summed over all C(n,2) edges,
/// where t_k(e) counts the triangles of k containing e. An uncovered edge
/// makes the bound −∞.
pub fn upperb_bound(k: &Complex2) -> ExtendedReal {
    let n = k.n();
    let nf = f64::from(n);
    let counts = t_counts(k);
    let mut terms = Vec::with_capacity(counts.len());
    for c in counts {
        if c == 0 {
            return ExtendedReal::NegInf;
        }
        terms.push((c as f64 / nf).ln());
    }
    let sum = sum_sorted(&mut terms);
    ExtendedReal::Finite((nf - 2.0) * nf.ln() + (1.0 - 2.0 / nf) * sum)
}

/// The discrete entropy functional of a graph: with A the adjacency matrix
/// and B(u,v) = deg u + deg v − 2·(A²)(u,v) = |N(u) △ N(v)|,
///
///   f(G) = n⁻² · Σ_{u≠v} [ A(u,v)·ln(B(u,v)/n) + (1−A(u,v))·ln(1−B(u,v)/n) ].
///
/// Diagonal pairs contribute exactly zero since B(u,u) = 0. The value would
/// be −∞ if an edge had B = 0 or a non-edge had B = n, but neither can occur
/// for a simple graph: an edge uv always puts u and v inside N(u)△N(v), and
/// a non-edge never does, so 2 ≤ B ≤ n on edges and 0 ≤ B ≤ n−2 off them.
/// The guards keep the function total anyway. Agrees with the step-kernel
/// functional of the graph's step kernel up to float rounding.
pub fn discrete_f(g: &Graph) -> ExtendedReal {
    let n = g.n() as usize;
    let adj = g.adjacency();
    let deg: Vec<usize> = (0..n)
        .map(|u| (0..n).filter(|&v| adj[u * n + v]).count())
        .collect();
    let mut terms = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let common = (0..n).filter(|&w| adj[u * n + w] && adj[v * n + w]).count();
            let b = deg[u] + deg[v] - 2 * common;
            let z = b as f64 / n as f64;
            if adj[u * n + v] {
                if b == 0 {
                    return ExtendedReal::NegInf;
                }
                terms.push(z.ln());
            } else {
                if b == n {
                    return ExtendedReal::NegInf;
                }
                terms.push((1.0 - z).ln());
            }
        }
    }
    let total = sum_sorted(&mut terms);
    ExtendedReal::Finite(total / (n * n) as f64)
}

/// Upper bound for ln P(g ∈ Z¹(S)) under the weighted hypertree measure:
/// (n−2)·ln n + (n(n−2)/2)·f(G).
pub fn upperbf_bound(g: &Graph) -> ExtendedReal {
    let nf = f64::from(g.n());
    let lead = (nf - 2.0) * nf.ln();
    let coeff = nf * (nf - 2.0) / 2.0;
    ExtendedReal::Finite(lead).add(ExtendedReal::weighted(coeff, discrete_f(g)))
}

/// Upper bound for ln P(g ∈ Z¹(S)) under the 1-out model:
/// n(n−1)/(n−2) + (n²/2)·f(G).
pub fn one_out_bound(g: &Graph) -> Result<ExtendedReal> {
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidDimension { n, min: 4 });
    }
    let nf = f64::from(n);
    let lead = nf * (nf - 1.0) / (nf - 2.0);
    Ok(ExtendedReal::Finite(lead).add(ExtendedReal::weighted(nf * nf / 2.0, discrete_f(g))))
}

// ---------------------------------------------------------------------------
// Cohen-Lenstra reference masses
// ---------------------------------------------------------------------------

/// Minimum tail-product length accepted by [`cohen_lenstra_pmf`].
pub const COHEN_LENSTRA_MIN_JMAX: u32 = 32;

/// The Cohen-Lenstra mass at rank r for the prime p:
///
///   u_p(r) = p^(−r²) · Π_{j=1..r} (1 − p^(−j))^(−2) · Π_{j=1..jmax} (1 − p^(−j)),
///
/// with the infinite product truncated at jmax ≥ 32 (the tail beyond 32
/// factors is below double precision for every prime).
pub fn cohen_lenstra_pmf(p: u64, r: u32, jmax: u32) -> Result<f64> {
    if !is_prime_u64(p) {
        return Err(Error::bad_argument(format!("p = {p} is not prime")));
    }
    if jmax < COHEN_LENSTRA_MIN_JMAX {
        return Err(Error::bad_argument(format!(
            "jmax = {jmax} is below the minimum {COHEN_LENSTRA_MIN_JMAX}"
        )));
    }
    let pf = p as f64;
    let rr = i32::try_from(u64::from(r) * u64::from(r))
        .map_err(|_| Error::bad_argument(format!("rank r = {r} is out of range")))?;
    let mut value = pf.powi(-rr);
    for j in 1..=r {
        let factor = 1.0 - pf.powi(-(j as i32));
        value /= factor * factor;
    }
    for j in 1..=jmax {
        value *= 1.0 - pf.powi(-(j as i32));
    }
    Ok(value)
}

// ---------------------------------------------------------------------------
// Directed-rounding logarithms of exact rationals
// ---------------------------------------------------------------------------

/// Base-e logarithm of a positive big integer from its top 53 bits; the
/// relative error is far below the margin applied by the callers.
fn ln_biguint_point(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        (x.to_u64().expect("fits in 53 bits") as f64).ln()
    } else {
        let shift = bits - 53;
        let top = (x >> shift).to_u64().expect("53-bit window fits in u64") as f64;
        top.ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn ln_margin(v: f64) -> f64 {
    1e-12 * (v.abs() + 1.0)
}

fn ln_rational_point(q: &BigRational) -> Result<f64> {
    if q.numer().sign() == Sign::Minus {
        return Err(Error::bad_argument("logarithm of a negative rational"));
    }
    let num = ln_biguint_point(q.numer().magnitude());
    let den = ln_biguint_point(q.denom().magnitude());
    Ok(num - den)
}

/// A certified upper bound for ln q (−∞ when q = 0).
pub fn ln_rational_upper(q: &BigRational) -> Result<ExtendedReal> {
    if q.is_zero() {
        return Ok(ExtendedReal::NegInf);
    }
    let v = ln_rational_point(q)?;
    Ok(ExtendedReal::Finite(v + ln_margin(v)))
}

/// A certified lower bound for ln q (−∞ when q = 0).
pub fn ln_rational_lower(q: &BigRational) -> Result<ExtendedReal> {
    if q.is_zero() {
        return Ok(ExtendedReal::NegInf);
    }
    let v = ln_rational_point(q)?;
    Ok(ExtendedReal::Finite(v - ln_margin(v)))
}

/// Whether ln(exact) ≤ bound holds with certainty: the certified upper bound
/// of the exact logarithm must not exceed the bound. A false result from a
/// sound bound would require the true margin to be inside the ±1e−12 rounding
/// band.
pub fn log_prob_at_most(exact: &BigRational, bound: ExtendedReal) -> Result<bool> {
    let upper = ln_rational_upper(exact)?;
    Ok(match (upper, bound) {
        (ExtendedReal::NegInf, _) => true,
        (ExtendedReal::Finite(_), ExtendedReal::NegInf) => false,
        (ExtendedReal::Finite(u), ExtendedReal::Finite(b)) => u <= b,
    })
}

/// A float approximation of an exact rational for reporting; falls back to
/// exp(ln num − ln den) when the parts overflow direct conversion.
pub fn rational_approx_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    let negative = q.numer().sign() == Sign::Minus;
    let magnitude = if q.numer().magnitude().bits() < 900 && q.denom().magnitude().bits() < 900 {
        let n = q.numer().magnitude().to_f64().unwrap_or(f64::MAX);
        let d = q.denom().magnitude().to_f64().unwrap_or(f64::MAX);
        n / d
    } else {
        let ln = ln_biguint_point(q.numer().magnitude()) - ln_biguint_point(q.denom().magnitude());
        ln.exp()
    };
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cut_edges, Edge, Triangle};
    use crate::samplers::enumerate_hypertrees;

    fn graph(n: u32, edges: &[(u32, u32)]) -> Graph {
        let e: Vec<Edge> = edges.iter().map(|&(a, b)| Edge::new(a, b).unwrap()).collect();
        Graph::new(n, e).unwrap()
    }

    fn complex(n: u32, tris: &[(u32, u32, u32)]) -> Complex2 {
        let t: Vec<Triangle> = tris
            .iter()
            .map(|&(a, b, c)| Triangle::new(a, b, c).unwrap())
            .collect();
        Complex2::new(n, t).unwrap()
    }

    fn full_complex(n: u32) -> Complex2 {
        Complex2::new(n, all_triangles(n)).unwrap()
    }

    #[test]
    fn cocycle_predicate() {
        let k = full_complex(4);
        assert!(is_cocycle(&graph(4, &[]), &k).unwrap());
        assert!(!is_cocycle(&graph(4, &[(1, 2)]), &k).unwrap());
        let cut = cut_edges(4, &[1]).unwrap();
        assert!(is_cocycle(&cut, &k).unwrap());
        let tri = graph(4, &[(1, 2), (1, 3), (2, 3)]);
        assert!(!is_cocycle(&tri, &k).unwrap());
        assert!(is_cocycle(&tri, &complex(4, &[(1, 2, 3)])).is_ok());
        assert!(is_cocycle(&graph(5, &[]), &k).is_err());
    }

    #[test]
    fn cocycle_counts() {
        assert_eq!(cocycle_count(&full_complex(4)), BigUint::from(8u32));
        assert_eq!(cocycle_count(&complex(4, &[])), BigUint::from(64u32));
        for (k, _) in enumerate_hypertrees(5).unwrap() {
            assert_eq!(cocycle_count(&k), BigUint::from(16u32));
        }
    }

    #[test]
    fn containment_probabilities() {
        // All four triangles: certain containment.
        let p = prob_subcomplex_exact(&full_complex(4)).unwrap();
        assert!(p.is_one());
        // One vertex star of triangles is a single hypertree of mass 1/4.
        let y = complex(4, &[(1, 2, 3), (1, 2, 4), (1, 3, 4)]);
        let p = prob_subcomplex_exact(&y).unwrap();
        assert_eq!(p, BigRational::new(BigInt::from(1), BigInt::from(4)));
        // Too few triangles: impossible.
        let p = prob_subcomplex_exact(&complex(4, &[(1, 2, 3), (1, 2, 4)])).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn containment_matches_enumeration() {
        // P(S ⊆ Y) must equal the enumerated mass of hypertrees inside Y.
        let all5 = prob_subcomplex_exact(&full_complex(5)).unwrap();
        assert!(all5.is_one());
        let y = complex(
            5,
            &[
                (1, 2, 3),
                (1, 2, 4),
                (1, 2, 5),
                (1, 3, 4),
                (1, 3, 5),
                (1, 4, 5),
                (2, 3, 4),
            ],
        );
        let direct = prob_subcomplex_exact(&y).unwrap();
        let mut mass = BigRational::zero();
        for (k, h) in enumerate_hypertrees(5).unwrap() {
            let inside = k.triangles().iter().all(|t| y.contains(*t));
            if inside {
                let h = BigInt::from(h);
                mass += BigRational::new(&h * &h, BigInt::from(125));
            }
        }
        assert_eq!(direct, mass);
    }

    #[test]
    fn cocycle_probabilities_hypertree_measure() {
        assert!(prob_cocycle_exact(&graph(4, &[])).unwrap().is_one());
        assert!(prob_cocycle_exact(&graph(4, &[(1, 2)])).unwrap().is_zero());
        for side in [&[1u32][..], &[2], &[1, 2], &[1, 5], &[2, 3, 4]] {
            let cut = cut_edges(5, side).unwrap();
            assert!(
                prob_cocycle_exact(&cut).unwrap().is_one(),
                "cut on side {side:?} must be an almost-sure cocycle"
            );
        }
        assert!(prob_cocycle_exact(&graph(5, &[(1, 2)])).unwrap().is_zero());
    }

    #[test]
    fn containment_bound_examples() {
        let y = complex(4, &[(1, 2, 3), (1, 2, 4), (1, 3, 4)]);
        let b = upperb_bound(&y).finite().unwrap();
        let expect = -0.5 * std::f64::consts::LN_2;
        assert!((b - expect).abs() < 1e-12, "bound {b} vs {expect}");
        // The exact probability 1/4 respects the bound.
        let exact = prob_subcomplex_exact(&y).unwrap();
        assert!(log_prob_at_most(&exact, upperb_bound(&y)).unwrap());
        // An uncovered edge collapses the bound.
        let sparse = complex(4, &[(1, 2, 3)]);
        assert!(upperb_bound(&sparse).is_neg_inf());
    }

    #[test]
    fn discrete_functional_values() {
        // Single edge on 4 vertices: −(2 ln 2 + 8 ln(4/3))/16.
        let f = discrete_f(&graph(4, &[(1, 2)])).finite().unwrap();
        assert!((f - (-0.230_484_433_795_883_57)).abs() < 1e-15, "f = {f}");
        // Empty graph: every pair has B = 0, all terms ln(1−0) = 0.
        assert_eq!(discrete_f(&graph(5, &[])).finite().unwrap(), 0.0);
        // Complete graph: B(u,v) = 2 for every pair, all pairs are edges.
        let n = 4u32;
        let edges: Vec<(u32, u32)> =
            (1..=n).flat_map(|a| (a + 1..=n).map(move |b| (a, b))).collect();
        let f = discrete_f(&graph(n, &edges)).finite().unwrap();
        let expect = (f64::from(n * n - n) / f64::from(n * n)) * (2.0 / f64::from(n)).ln();
        assert!((f - expect).abs() < 1e-12, "f = {f} vs {expect}");
        // A perfect matching: every pair, edge or not, has B = 2, so all 12
        // off-diagonal pairs contribute ln(1/2).
        let f = discrete_f(&graph(4, &[(1, 2), (3, 4)])).finite().unwrap();
        let expect = -12.0 / 16.0 * std::f64::consts::LN_2;
        assert!((f - expect).abs() < 1e-15, "f = {f} vs {expect}");
    }

    #[test]
    fn discrete_functional_matches_step_kernel() {
        use crate::graphon::{f_functional, graphon_of_graph};
        let cases = [
            graph(4, &[(1, 2)]),
            graph(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]),
            graph(6, &[(1, 4), (2, 5), (3, 6), (1, 2)]),
            cut_edges(6, &[1, 3, 5]).unwrap(),
        ];
        for g in cases {
            let lhs = discrete_f(&g);
            let rhs = f_functional(&graphon_of_graph(&g)).unwrap();
            match (lhs, rhs) {
                (ExtendedReal::NegInf, ExtendedReal::NegInf) => {}
                (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
                    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
                }
                other => panic!("mismatched values {other:?}"),
            }
        }
    }

    #[test]
    fn cocycle_bound_soundness_small() {
        // Exhaustive over all graphs on 4 vertices.
        let edges4 = crate::complex::all_edges(4);
        for mask in 0u32..64 {
            let edges: Vec<Edge> = edges4
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| *e)
                .collect();
            let g = Graph::new(4, edges).unwrap();
            let exact = prob_cocycle_exact(&g).unwrap();
            assert!(
                log_prob_at_most(&exact, upperbf_bound(&g)).unwrap(),
                "bound violated at mask {mask}"
            );
        }
    }

    #[test]
    fn one_out_probabilities() {
        assert!(one_out_cocycle_prob(&graph(5, &[])).unwrap().is_one());
        let cut = cut_edges(5, &[1]).unwrap();
        assert!(one_out_cocycle_prob(&cut).unwrap().is_one());
        let tri = graph(5, &[(1, 2), (1, 3), (2, 3)]);
        assert!(one_out_cocycle_prob(&tri).unwrap().is_zero());
        assert!(one_out_cocycle_prob(&graph(3, &[])).is_err());

        // Two edges sharing a vertex on [6]: 729/524288.
        let p = one_out_cocycle_prob(&graph(6, &[(1, 2), (1, 3)])).unwrap();
        assert_eq!(
            p,
            BigRational::new(BigInt::from(729), BigInt::from(524288))
        );
        // Soundness against the closed-form bound.
        let g = graph(6, &[(1, 2), (1, 3)]);
        assert!(log_prob_at_most(
            &one_out_cocycle_prob(&g).unwrap(),
            one_out_bound(&g).unwrap()
        )
        .unwrap());
    }

    #[test]
    fn cohen_lenstra_values() {
        let u0 = cohen_lenstra_pmf(2, 0, 64).unwrap();
        assert!((u0 - 0.2887880950866024).abs() < 1e-15, "u0 = {u0}");
        let u1 = cohen_lenstra_pmf(2, 1, 64).unwrap();
        assert!((u1 - 0.5775761901732048).abs() < 1e-15, "u1 = {u1}");
        let total: f64 = (0..=10).map(|r| cohen_lenstra_pmf(2, r, 64).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-9, "total = {total}");
        let t3: f64 = (0..=10).map(|r| cohen_lenstra_pmf(3, r, 64).unwrap()).sum();
        assert!((t3 - 1.0).abs() < 1e-9, "total = {t3}");
        assert!(cohen_lenstra_pmf(4, 0, 64).is_err());
        assert!(cohen_lenstra_pmf(2, 0, 16).is_err());
    }

    #[test]
    fn directed_logs() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(4));
        let lo = ln_rational_lower(&q).unwrap().finite().unwrap();
        let hi = ln_rational_upper(&q).unwrap().finite().unwrap();
        let truth = -(4.0f64.ln());
        assert!(lo <= truth && truth <= hi);
        assert!(hi - lo < 1e-10);

        // A large power: ln(2^200 / 3^100) = 200 ln 2 − 100 ln 3.
        let num = num_traits::pow(BigInt::from(2), 200);
        let den = num_traits::pow(BigInt::from(3), 100);
        let q = BigRational::new(num, den);
        let truth = 200.0 * std::f64::consts::LN_2 - 100.0 * 3.0f64.ln();
        let lo = ln_rational_lower(&q).unwrap().finite().unwrap();
        let hi = ln_rational_upper(&q).unwrap().finite().unwrap();
        assert!(lo <= truth && truth <= hi);

        assert!(ln_rational_upper(&BigRational::zero()).unwrap().is_neg_inf());
        let neg = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert!(ln_rational_upper(&neg).is_err());

        // Comparison semantics.
        assert!(log_prob_at_most(&BigRational::zero(), ExtendedReal::NegInf).unwrap());
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert!(log_prob_at_most(&half, ExtendedReal::Finite(0.0)).unwrap());
        assert!(!log_prob_at_most(&half, ExtendedReal::NegInf).unwrap());
        assert!(!log_prob_at_most(&half, ExtendedReal::Finite(-1.0)).unwrap());
    }

    #[test]
    fn rational_display_values() {
        let q = BigRational::new(BigInt::from(3), BigInt::from(8));
        assert!((rational_approx_f64(&q) - 0.375).abs() < 1e-15);
        assert_eq!(rational_approx_f64(&BigRational::zero()), 0.0);
        let huge = BigRational::new(
            num_traits::pow(BigInt::from(7), 600),
            num_traits::pow(BigInt::from(7), 601),
        );
        assert!((rational_approx_f64(&huge) - 1.0 / 7.0).abs() < 1e-9);
        let tiny = BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), 400));
        assert_eq!(rational_approx_f64(&tiny), 0.0);
        let neg = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert!((rational_approx_f64(&neg) + 1.0 / 3.0).abs() < 1e-15);
    }
}

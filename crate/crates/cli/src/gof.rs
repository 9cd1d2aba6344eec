//! Goodness-of-fit check for the determinantal sampler against the fully
//! enumerated reference distribution at n = 5, where all 125 support
//! elements and their exact masses are known.

use std::collections::BTreeMap;

use hypertree_core::bounds::rational_approx_f64;
use hypertree_core::complex::Triangle;
use hypertree_core::samplers::{
    exact_measure, sample_hypertree_with_basis, Model, ProjectionBasis, RngState,
};
use hypertree_core::{Error, Result};

pub const GOF_N: u32 = 5;
pub const GOF_MIN_SAMPLES: u64 = 10_000;

#[derive(Clone, Debug)]
pub struct GofReport {
    pub samples: u64,
    pub categories: usize,
    pub degrees_of_freedom: usize,
    pub tv_distance: f64,
    pub chi_square: f64,
    pub p_value: f64,
}

/// Draws `trials` determinantal samples at n = 5 (the trial streams are the
/// same ones the experiment harness would use for this seed) and compares
/// the empirical category counts with the exact measure. Any sample outside
/// the enumerated support is an internal-consistency failure, not a
/// statistical one.
pub fn gof_determinantal(n: u32, trials: u64, seed: u64) -> Result<GofReport> {
    if n != GOF_N {
        return Err(Error::bad_argument(format!(
            "goodness-of-fit reference measure is only enumerated for n = {GOF_N} (got n = {n})"
        )));
    }
    if trials < GOF_MIN_SAMPLES {
        return Err(Error::bad_argument(format!(
            "goodness-of-fit requires at least {GOF_MIN_SAMPLES} samples (got {trials})"
        )));
    }
    let basis = ProjectionBasis::new(GOF_N)?;
    let state = RngState::new(seed);
    let samples = (0..trials).map(|t| {
        let mut rng = state.stream(Model::Determinantal, GOF_N, t);
        sample_hypertree_with_basis(&basis, &mut rng)
    });
    gof_against_exact(samples)
}

/// Core comparison, parameterized over the sample source so corrupted
/// samplers can be tested against it directly.
pub fn gof_against_exact<I>(samples: I) -> Result<GofReport>
where
    I: IntoIterator<Item = Result<hypertree_core::complex::Complex2>>,
{
    let measure = exact_measure(GOF_N)?;
    let mut index: BTreeMap<Vec<Triangle>, usize> = BTreeMap::new();
    let mut expected_mass = Vec::with_capacity(measure.len());
    for (i, (k, mass)) in measure.iter().enumerate() {
        index.insert(k.triangles().to_vec(), i);
        expected_mass.push(rational_approx_f64(mass));
    }

    let mut counts = vec![0u64; measure.len()];
    let mut total = 0u64;
    for s in samples {
        let k = s?;
        let cat = index.get(k.triangles()).ok_or_else(|| {
            Error::internal(format!(
                "sample outside the enumerated support: {} triangles on [{}]",
                k.num_triangles(),
                k.n()
            ))
        })?;
        counts[*cat] += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::bad_argument("no samples supplied"));
    }

    let tf = total as f64;
    let mut tv = 0.0;
    let mut chi2 = 0.0;
    for (c, e) in counts.iter().zip(&expected_mass) {
        let emp = *c as f64 / tf;
        tv += (emp - e).abs();
        let expected_count = e * tf;
        let d = *c as f64 - expected_count;
        chi2 += d * d / expected_count;
    }
    tv *= 0.5;

    let dof = measure.len() - 1;
    let p_value = statrs::function::gamma::gamma_ur(dof as f64 / 2.0, chi2 / 2.0);
    Ok(GofReport {
        samples: total,
        categories: measure.len(),
        degrees_of_freedom: dof,
        tv_distance: tv,
        chi_square: chi2,
        p_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use hypertree_core::complex::Complex2;

    #[test]
    fn rejects_wrong_n_and_too_few_samples() {
        assert!(matches!(
            gof_determinantal(4, 20_000, 1),
            Err(Error::BadArgument(_))
        ));
        assert!(matches!(
            gof_determinantal(5, 9_999, 1),
            Err(Error::BadArgument(_))
        ));
    }

    #[test]
    fn faithful_sampler_passes_at_moderate_size() {
        let r = gof_determinantal(5, 12_000, 71).unwrap();
        assert_eq!(r.samples, 12_000);
        assert_eq!(r.categories, 125);
        assert_eq!(r.degrees_of_freedom, 124);
        assert!(r.tv_distance < 0.08, "tv = {}", r.tv_distance);
        assert!(r.p_value > 0.01, "p = {}", r.p_value);
    }

    #[test]
    fn corrupted_sampler_is_rejected() {
        // Negative control: suppress every hypertree containing triangle
        // {1,2,3} by redrawing. The result stays on the support but hits
        // only 50 of the 125 categories, so the test must detect it.
        let banned = Triangle::new(1, 2, 3).unwrap();
        let basis = ProjectionBasis::new(5).unwrap();
        let state = RngState::new(404);
        let samples = (0..12_000u64).map(|t| -> hypertree_core::Result<Complex2> {
            let mut rng = state.stream(Model::Determinantal, 5, t);
            loop {
                let k = sample_hypertree_with_basis(&basis, &mut rng)?;
                if !k.contains(banned) {
                    return Ok(k);
                }
            }
        });
        let r = gof_against_exact(samples).unwrap();
        assert!(r.p_value < 0.01, "corrupted sampler passed: p = {}", r.p_value);
        assert!(r.tv_distance > 0.3, "tv = {}", r.tv_distance);
    }

    #[test]
    fn off_support_sample_is_an_internal_failure() {
        // A complex with the right size that is not a hypertree (contains
        // the boundary of the tetrahedron on {1,2,3,4} plus filler) must be
        // flagged as an invariant violation, not counted.
        let tris = [
            (1, 2, 3),
            (1, 2, 4),
            (1, 3, 4),
            (2, 3, 4),
            (1, 2, 5),
            (1, 3, 5),
        ];
        let k = Complex2::new(
            5,
            tris.iter()
                .map(|&(a, b, c)| Triangle::new(a, b, c).unwrap())
                .collect(),
        )
        .unwrap();
        let got = gof_against_exact(std::iter::once(Ok(k)));
        assert!(matches!(got, Err(Error::Internal(_))));
    }
}

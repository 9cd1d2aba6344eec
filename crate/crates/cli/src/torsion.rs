//! Torsion report: the distribution of dim_{F_p}(p-torsion part of H₁)
//! observed in sampled complexes, side by side with the Cohen–Lenstra
//! heuristic masses. The report makes no pass/fail claim about the
//! comparison; only the internal consistency of the reference column is
//! enforced.

use std::collections::BTreeMap;

use hypertree_core::bounds::{cohen_lenstra_pmf, rational_approx_f64};
use hypertree_core::linalg::{h1_snf, p_torsion_dim};
use hypertree_core::samplers::{exact_measure, sample_complex, Model, RngState};
use hypertree_core::{Error, Result};

const CL_JMAX: u32 = 64;
/// Reference masses must account for all but this much of the distribution.
const REFERENCE_TAIL: f64 = 1e-9;
const MAX_REFERENCE_ROWS: usize = 40;

#[derive(Clone, Debug)]
pub struct TorsionRow {
    pub p: u64,
    pub r: usize,
    pub mass: f64,
    pub reference: f64,
}

#[derive(Clone, Debug)]
pub struct TorsionReport {
    pub model: Model,
    pub n: u32,
    pub samples: u64,
    pub exhaustive: bool,
    pub rows: Vec<TorsionRow>,
}

/// Samples `trials` complexes and histograms the p-torsion dimensions.
/// Requires n within the Smith-normal-form cap, since every trial runs one.
pub fn torsion_empirical(
    model: Model,
    n: u32,
    trials: u64,
    seed: u64,
    primes: &[u64],
    snf_cap: u32,
    lm_p: Option<f64>,
) -> Result<TorsionReport> {
    if n > snf_cap {
        return Err(Error::capacity(format!(
            "torsion report needs Smith normal forms; n = {n} exceeds the cap {snf_cap}"
        )));
    }
    if trials == 0 {
        return Err(Error::bad_argument("at least one trial is required"));
    }
    if primes.is_empty() {
        return Err(Error::bad_argument("at least one prime is required"));
    }
    let state = RngState::new(seed);
    let mut hist: BTreeMap<(u64, usize), u64> = BTreeMap::new();
    for trial in 0..trials {
        let mut rng = state.stream(model, n, trial);
        let k = sample_complex(model, n, lm_p, &mut rng)?;
        let s = h1_snf(&k);
        for &p in primes {
            let d = p_torsion_dim(&s, p)?;
            *hist.entry((p, d)).or_insert(0) += 1;
        }
    }
    let masses: Vec<((u64, usize), f64)> = hist
        .into_iter()
        .map(|((p, d), c)| ((p, d), c as f64 / trials as f64))
        .collect();
    let rows = build_rows(primes, &masses)?;
    Ok(TorsionReport { model, n, samples: trials, exhaustive: false, rows })
}

/// Exact torsion distribution under the determinantal measure, by full
/// enumeration (n ≤ 6).
pub fn torsion_exhaustive(n: u32, primes: &[u64]) -> Result<TorsionReport> {
    if primes.is_empty() {
        return Err(Error::bad_argument("at least one prime is required"));
    }
    let measure = exact_measure(n)?;
    let mut acc: BTreeMap<(u64, usize), f64> = BTreeMap::new();
    let mut count = 0u64;
    for (k, mass) in &measure {
        let s = h1_snf(k);
        let m = rational_approx_f64(mass);
        for &p in primes {
            let d = p_torsion_dim(&s, p)?;
            *acc.entry((p, d)).or_insert(0.0) += m;
        }
        count += 1;
    }
    let masses: Vec<((u64, usize), f64)> = acc.into_iter().collect();
    let rows = build_rows(primes, &masses)?;
    Ok(TorsionReport {
        model: Model::Determinantal,
        n,
        samples: count,
        exhaustive: true,
        rows,
    })
}

/// Assembles rows per prime, extending the rank range until the reference
/// column accounts for everything but a negligible tail, and checks that the
/// reference masses do sum to 1 within 1e-6.
fn build_rows(primes: &[u64], masses: &[((u64, usize), f64)]) -> Result<Vec<TorsionRow>> {
    let mut rows = Vec::new();
    for &p in primes {
        let observed_max = masses
            .iter()
            .filter(|((q, _), _)| *q == p)
            .map(|((_, d), _)| *d)
            .max()
            .unwrap_or(0);
        let mut refs = Vec::new();
        let mut cum = 0.0;
        for r in 0..MAX_REFERENCE_ROWS {
            let v = cohen_lenstra_pmf(p, r as u32, CL_JMAX)?;
            refs.push(v);
            cum += v;
            if r >= observed_max.max(3) && 1.0 - cum < REFERENCE_TAIL {
                break;
            }
        }
        if (1.0 - cum).abs() > 1e-6 {
            return Err(Error::internal(format!(
                "reference masses for p = {p} sum to {cum}, not 1"
            )));
        }
        for (r, reference) in refs.into_iter().enumerate() {
            let mass = masses
                .iter()
                .find(|((q, d), _)| *q == p && *d == r)
                .map(|(_, m)| *m)
                .unwrap_or(0.0);
            rows.push(TorsionRow { p, r, mass, reference });
        }
    }
    Ok(rows)
}

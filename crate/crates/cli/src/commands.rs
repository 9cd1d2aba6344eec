//! Subcommand implementations. Each function resolves its inputs from the
//! shared [`Config`], performs the work, and prints a flat `key value`
//! report (or writes the requested files). All floats are printed with 17
//! significant digits.

use std::io::Write;
use std::path::Path;

use num_traits::Zero;

use hypertree_core::bounds::{
    ln_rational_lower, ln_rational_upper, one_out_bound, one_out_cocycle_prob, prob_cocycle_exact,
    prob_subcomplex_exact, rational_approx_f64, upperb_bound, upperbf_bound,
};
use hypertree_core::extreal::ExtendedReal;
use hypertree_core::graphon::{
    cut_norm_exact, entropy_h, f_functional, f_k_functional, l1_norm, linf_norm, rate_i,
    StepGraphon,
};
use hypertree_core::io::{read_complex_path, read_graph_path, read_kernel_path, write_complex};
use hypertree_core::linalg::{h1_f2_dim, h1_fp_dim, h1_snf, p_torsion_dim};
use hypertree_core::samplers::{
    enumerate_hypertrees, sample_complex, sample_hypertree_with_basis, Model, ProjectionBasis,
    RngState,
};
use hypertree_core::{binomial, Error, Result};

use crate::config::{Config, SAMPLER_MAX_N};
use crate::experiment::{run_experiment, summary_csv, summary_json, trials_csv};
use crate::fmt_float;
use crate::gof::gof_determinantal;
use crate::torsion::{torsion_empirical, torsion_exhaustive, TorsionReport};
use crate::verify::{run_verify, VerifyLevel};

fn extreal_text(v: ExtendedReal) -> String {
    match v {
        ExtendedReal::NegInf => "-inf".to_string(),
        ExtendedReal::Finite(x) => fmt_float(x),
    }
}

/// `sample`: draw complexes from a model. One trial goes to stdout or the
/// `--out` file; several trials require `--out` and become a directory of
/// numbered complex files.
pub fn cmd_sample(cfg: &Config) -> Result<()> {
    let model = cfg.require_model()?;
    let n = cfg.require_single_n()?;
    if model == Model::LinialMeshulam {
        cfg.lm_probability()?;
    }
    if model == Model::Determinantal && n > SAMPLER_MAX_N {
        return Err(Error::capacity(format!(
            "determinantal sampling is capped at n <= {SAMPLER_MAX_N} (got n = {n})"
        )));
    }
    let basis = if model == Model::Determinantal {
        Some(ProjectionBasis::new(n)?)
    } else {
        None
    };
    let state = RngState::new(cfg.seed);

    let draw = |trial: u64| -> Result<hypertree_core::complex::Complex2> {
        let mut rng = state.stream(model, n, trial);
        match &basis {
            Some(b) => sample_hypertree_with_basis(b, &mut rng),
            None => sample_complex(model, n, cfg.p, &mut rng),
        }
    };

    if cfg.trials == 1 {
        let k = draw(0)?;
        match &cfg.out {
            Some(path) => hypertree_core::io::write_complex_path(path, &k)?,
            None => {
                let mut text = Vec::new();
                write_complex(&mut text, &k)?;
                std::io::stdout().write_all(&text)?;
            }
        }
        return Ok(());
    }

    let dir = cfg.require_out()?;
    std::fs::create_dir_all(dir)?;
    for trial in 0..cfg.trials {
        let k = draw(trial)?;
        let path = dir.join(format!("sample_{trial:06}.cplx"));
        hypertree_core::io::write_complex_path(&path, &k)?;
    }
    println!("wrote {} complexes to {}", cfg.trials, dir.display());
    Ok(())
}

/// `homology`: exact homology of one complex file, as far as the caps allow.
pub fn cmd_homology(cfg: &Config, input: &Path) -> Result<()> {
    let k = read_complex_path(input)?;
    let n = k.n();
    println!("n {n}");
    println!("triangles {}", k.num_triangles());
    println!("dim_f2 {}", h1_f2_dim(&k));
    if n <= cfg.fp_cap {
        for &p in &cfg.primes {
            if p == 2 {
                continue;
            }
            println!("dim_f{p} {}", h1_fp_dim(&k, p)?);
        }
    }
    if n <= cfg.snf_cap {
        let s = h1_snf(&k);
        let z1 = binomial(u64::from(n), 2) - (n as usize - 1);
        println!("h1_rank {}", z1 - s.rank);
        if s.rank < z1 {
            println!("h1_order inf");
        } else {
            println!("h1_order {}", s.factor_product());
        }
        let nontrivial: Vec<String> = s
            .factors
            .iter()
            .filter(|f| **f != 1u32.into())
            .map(|f| f.to_string())
            .collect();
        println!(
            "torsion_factors {}",
            if nontrivial.is_empty() { "none".to_string() } else { nontrivial.join(" ") }
        );
        for &p in &cfg.primes {
            println!("tor_{p} {}", p_torsion_dim(&s, p)?);
        }
    }
    Ok(())
}

/// `enumerate`: every hypertree on [n] with its homology order (n ≤ 6).
pub fn cmd_enumerate(cfg: &Config) -> Result<()> {
    let n = cfg.require_single_n()?;
    let trees = enumerate_hypertrees(n)?;
    let total: num_bigint::BigUint = trees.iter().map(|(_, h)| h * h).sum();
    let mut text = String::new();
    text.push_str(&format!("n {n} hypertrees {} sum_h1_sq {total}\n", trees.len()));
    for (k, h) in &trees {
        text.push_str(&h.to_string());
        for t in k.triangles() {
            let [a, b, c] = t.vertices();
            text.push_str(&format!(" {a} {b} {c}"));
        }
        text.push('\n');
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn require_one_input<'a>(
    graph: &'a Option<std::path::PathBuf>,
    complex: &'a Option<std::path::PathBuf>,
) -> Result<(Option<&'a Path>, Option<&'a Path>)> {
    match (graph, complex) {
        (Some(g), None) => Ok((Some(g.as_path()), None)),
        (None, Some(c)) => Ok((None, Some(c.as_path()))),
        _ => Err(Error::bad_argument(
            "exactly one of --graph and --complex is required",
        )),
    }
}

fn print_probability(p: &num_rational::BigRational) -> Result<()> {
    println!("numerator {}", p.numer());
    println!("denominator {}", p.denom());
    println!("probability {}", fmt_float(rational_approx_f64(p)));
    if p.is_zero() {
        println!("ln_lower -inf");
        println!("ln_upper -inf");
    } else {
        println!("ln_lower {}", extreal_text(ln_rational_lower(p)?));
        println!("ln_upper {}", extreal_text(ln_rational_upper(p)?));
    }
    Ok(())
}

/// `prob`: exact event probabilities. With `--graph g` the event is "g is a
/// cocycle of the sampled complex" (determinantal or one-out); with
/// `--complex S` it is "S is contained in the sampled complex"
/// (determinantal only).
pub fn cmd_prob(
    cfg: &Config,
    graph: &Option<std::path::PathBuf>,
    complex: &Option<std::path::PathBuf>,
) -> Result<()> {
    let model = cfg.require_model()?;
    let (g, c) = require_one_input(graph, complex)?;
    let p = match (g, c, model) {
        (Some(g), None, Model::Determinantal) => prob_cocycle_exact(&read_graph_path(g)?)?,
        (Some(g), None, Model::OneOut) => one_out_cocycle_prob(&read_graph_path(g)?)?,
        (None, Some(c), Model::Determinantal) => prob_subcomplex_exact(&read_complex_path(c)?)?,
        (None, Some(_), Model::OneOut) => {
            return Err(Error::bad_argument(
                "containment probabilities are only implemented for the determinantal model",
            ))
        }
        (_, _, Model::LinialMeshulam) => {
            return Err(Error::bad_argument(
                "exact probabilities are implemented for the determinantal and one-out models",
            ))
        }
        _ => unreachable!("require_one_input guarantees exactly one input"),
    };
    print_probability(&p)
}

/// `bound`: closed-form upper bounds for the log-probabilities computed by
/// `prob`.
pub fn cmd_bound(
    cfg: &Config,
    graph: &Option<std::path::PathBuf>,
    complex: &Option<std::path::PathBuf>,
) -> Result<()> {
    let _ = cfg;
    let (g, c) = require_one_input(graph, complex)?;
    if let Some(g) = g {
        let g = read_graph_path(g)?;
        println!("cocycle_ln_bound {}", extreal_text(upperbf_bound(&g)));
        if g.n() >= 4 {
            println!("one_out_ln_bound {}", extreal_text(one_out_bound(&g)?));
        }
    } else if let Some(c) = c {
        let k = read_complex_path(c)?;
        println!("containment_ln_bound {}", extreal_text(upperb_bound(&k)));
    }
    Ok(())
}

/// `graphon`: norms and functionals of a step kernel. The entropy-based
/// functionals require values in [0,1]; the norms do not.
pub fn cmd_graphon(cfg: &Config, kernel: &Path, k: f64) -> Result<()> {
    let v = read_kernel_path(kernel)?;
    println!("blocks {}", v.m());
    let cut = cut_norm_exact(&v);
    println!("cut_norm {}", fmt_float(cut.value));
    println!("cut_exact {}", cut.exact);
    println!("l1_norm {}", fmt_float(l1_norm(&v)));
    println!("linf_norm {}", fmt_float(linf_norm(&v)));

    match StepGraphon::new(v) {
        Err(_) => println!("functionals skipped (values outside [0,1])"),
        Ok(w) => {
            println!("entropy_h {}", fmt_float(entropy_h(&w)));
            let p = cfg.p.unwrap_or(0.5);
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::bad_argument(format!(
                    "the rate functional needs 0 < p < 1 (got {p})"
                )));
            }
            println!("rate_i_{p} {}", fmt_float(rate_i(p, &w)?));
            println!("f {}", extreal_text(f_functional(&w)?));
            if !(k > 0.0) {
                return Err(Error::bad_argument(format!(
                    "the truncation depth must be positive (got {k})"
                )));
            }
            println!("f_{k} {}", fmt_float(f_k_functional(&w, k)?));
        }
    }
    Ok(())
}

/// `experiment`: the Monte Carlo grid; writes trials.csv, summary.csv and
/// summary.json into the output directory.
pub fn cmd_experiment(cfg: &Config) -> Result<()> {
    let out = cfg.require_out()?.to_path_buf();
    let (records, summaries) = run_experiment(cfg)?;
    std::fs::create_dir_all(&out)?;
    let trials_path = out.join("trials.csv");
    std::fs::write(&trials_path, trials_csv(&records, &cfg.primes))?;
    let summary_path = out.join("summary.csv");
    std::fs::write(&summary_path, summary_csv(&summaries))?;
    let json_path = out.join("summary.json");
    std::fs::write(&json_path, summary_json(&summaries))?;
    println!("wrote {}", trials_path.display());
    println!("wrote {}", summary_path.display());
    println!("wrote {}", json_path.display());
    let errors: u64 = summaries.iter().map(|s| s.trials_error).sum();
    println!(
        "trials {} ok {} error {errors}",
        records.len(),
        records.len() as u64 - errors
    );
    Ok(())
}

/// `verify`: the self-check battery; any failure is an invariant violation.
pub fn cmd_verify(level: &str) -> Result<()> {
    let level = VerifyLevel::parse(level)?;
    let checks = run_verify(level);
    let mut failed = Vec::new();
    for c in &checks {
        if c.passed {
            println!("PASS {}: {}", c.name, c.detail);
        } else {
            println!("FAIL {}: {}", c.name, c.detail);
            failed.push(c.name);
        }
    }
    if failed.is_empty() {
        println!("all {} checks passed", checks.len());
        Ok(())
    } else {
        Err(Error::internal(format!(
            "{} of {} checks failed: {}",
            failed.len(),
            checks.len(),
            failed.join(", ")
        )))
    }
}

/// `gof`: goodness of fit of the determinantal sampler at n = 5.
pub fn cmd_gof(cfg: &Config) -> Result<()> {
    let n = cfg.require_single_n()?;
    let r = gof_determinantal(n, cfg.trials, cfg.seed)?;
    println!("samples {}", r.samples);
    println!("categories {}", r.categories);
    println!("degrees_of_freedom {}", r.degrees_of_freedom);
    println!("tv_distance {}", fmt_float(r.tv_distance));
    println!("chi_square {}", fmt_float(r.chi_square));
    println!("p_value {}", fmt_float(r.p_value));
    Ok(())
}

fn print_torsion(rep: &TorsionReport) {
    println!(
        "model {} n {} samples {} exhaustive {}",
        rep.model.name(),
        rep.n,
        rep.samples,
        rep.exhaustive
    );
    println!("p r mass reference");
    for row in &rep.rows {
        println!(
            "{} {} {} {}",
            row.p,
            row.r,
            fmt_float(row.mass),
            fmt_float(row.reference)
        );
    }
}

/// `torsion`: distribution of p-torsion ranks against the heuristic
/// reference masses. Report only; no pass/fail claim.
pub fn cmd_torsion(cfg: &Config, exhaustive: bool) -> Result<()> {
    let n = cfg.require_single_n()?;
    let primes: Vec<u64> = if cfg.primes.is_empty() { vec![2, 3] } else { cfg.primes.clone() };
    let rep = if exhaustive {
        torsion_exhaustive(n, &primes)?
    } else {
        let model = cfg.require_model()?;
        if model == Model::LinialMeshulam {
            cfg.lm_probability()?;
        }
        torsion_empirical(model, n, cfg.trials, cfg.seed, &primes, cfg.snf_cap, cfg.p)?
    };
    print_torsion(&rep);
    Ok(())
}

//! Run configuration: a flat `key = value` file, every key overridable by a
//! command-line flag of the same name. Flags win over the file, the file
//! wins over defaults. Unknown keys are rejected so typos fail loudly.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hypertree_core::linalg::is_prime_u64;
use hypertree_core::samplers::Model;
use hypertree_core::{Error, Result};

pub const DEFAULT_TRIALS: u64 = 1;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_THREADS: usize = 1;
pub const DEFAULT_SNF_CAP: u32 = 10;
pub const DEFAULT_FP_CAP: u32 = 25;
pub const DEFAULT_DET_CAP: u32 = 12;
pub const DEFAULT_ALPHA: f64 = 2.0;

/// Hard cost wall for the projection sampler: the basis alone is O(r²N)
/// with r = C(n−1,2), N = C(n,3).
pub const SAMPLER_MAX_N: u32 = 60;

const KNOWN_KEYS: [&str; 12] = [
    "model", "n", "trials", "seed", "p", "out", "threads", "primes", "snf_cap", "fp_cap",
    "det_cap", "alpha",
];

/// Raw optional overrides coming from command-line flags; field names match
/// the config keys one to one.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub model: Option<String>,
    pub n: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub p: Option<f64>,
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
    pub primes: Option<String>,
    pub snf_cap: Option<u32>,
    pub fp_cap: Option<u32>,
    pub det_cap: Option<u32>,
    pub alpha: Option<f64>,
}

/// Fully resolved configuration.
#[derive(Clone, Debug)]
pub struct Config {
    pub model: Option<Model>,
    pub n: Vec<u32>,
    pub trials: u64,
    pub seed: u64,
    pub p: Option<f64>,
    pub out: Option<PathBuf>,
    pub threads: usize,
    pub primes: Vec<u64>,
    pub snf_cap: u32,
    pub fp_cap: u32,
    pub det_cap: u32,
    pub alpha: f64,
}

impl Config {
    pub fn resolve(file: Option<&Path>, flags: &Overrides) -> Result<Config> {
        let map = match file {
            Some(p) => parse_config_file(p)?,
            None => BTreeMap::new(),
        };
        let pick = |key: &str| -> Option<&String> { map.get(key) };

        let model = match flags.model.clone().or_else(|| pick("model").cloned()) {
            Some(s) => Some(Model::parse(&s)?),
            None => None,
        };
        let n = match flags.n.clone().or_else(|| pick("n").cloned()) {
            Some(s) => parse_n_list(&s)?,
            None => Vec::new(),
        };
        let trials = match flags.trials.or(parse_opt(pick("trials"), "trials")?) {
            Some(t) => t,
            None => DEFAULT_TRIALS,
        };
        if trials == 0 {
            return Err(Error::bad_argument("trials must be at least 1"));
        }
        let seed = flags
            .seed
            .or(parse_opt(pick("seed"), "seed")?)
            .unwrap_or(DEFAULT_SEED);
        let p = flags.p.or(parse_opt(pick("p"), "p")?);
        if let Some(p) = p {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::bad_argument(format!("p = {p} outside [0,1]")));
            }
        }
        let out = flags
            .out
            .clone()
            .or_else(|| pick("out").map(PathBuf::from));
        let threads = flags
            .threads
            .or(parse_opt(pick("threads"), "threads")?)
            .unwrap_or(DEFAULT_THREADS);
        if threads == 0 {
            return Err(Error::bad_argument("threads must be at least 1"));
        }
        let primes = match flags.primes.clone().or_else(|| pick("primes").cloned()) {
            Some(s) => parse_primes(&s)?,
            None => Vec::new(),
        };
        let snf_cap = flags
            .snf_cap
            .or(parse_opt(pick("snf_cap"), "snf_cap")?)
            .unwrap_or(DEFAULT_SNF_CAP);
        let fp_cap = flags
            .fp_cap
            .or(parse_opt(pick("fp_cap"), "fp_cap")?)
            .unwrap_or(DEFAULT_FP_CAP);
        let det_cap = flags
            .det_cap
            .or(parse_opt(pick("det_cap"), "det_cap")?)
            .unwrap_or(DEFAULT_DET_CAP);
        let alpha = flags
            .alpha
            .or(parse_opt(pick("alpha"), "alpha")?)
            .unwrap_or(DEFAULT_ALPHA);
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::bad_argument(format!("alpha = {alpha} must be positive")));
        }

        Ok(Config {
            model,
            n,
            trials,
            seed,
            p,
            out,
            threads,
            primes,
            snf_cap,
            fp_cap,
            det_cap,
            alpha,
        })
    }

    pub fn require_model(&self) -> Result<Model> {
        self.model
            .ok_or_else(|| Error::bad_argument("a model is required (--model or config key model)"))
    }

    pub fn require_single_n(&self) -> Result<u32> {
        match self.n.as_slice() {
            [n] => Ok(*n),
            [] => Err(Error::bad_argument("a vertex count is required (--n)")),
            _ => Err(Error::bad_argument(
                "this command takes a single n, not a grid",
            )),
        }
    }

    pub fn require_n_grid(&self) -> Result<&[u32]> {
        if self.n.is_empty() {
            Err(Error::bad_argument("an n grid is required (--n, comma separated)"))
        } else {
            Ok(&self.n)
        }
    }

    pub fn require_out(&self) -> Result<&Path> {
        self.out
            .as_deref()
            .ok_or_else(|| Error::bad_argument("an output path is required (--out)"))
    }

    /// The Linial-Meshulam probability, required when that model is chosen.
    pub fn lm_probability(&self) -> Result<f64> {
        self.p
            .ok_or_else(|| Error::bad_argument("model linial-meshulam requires p (--p or config key p)"))
    }
}

fn parse_opt<T: std::str::FromStr>(value: Option<&String>, key: &str) -> Result<Option<T>> {
    match value {
        None => Ok(None),
        Some(s) => s
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::bad_argument(format!("invalid value '{s}' for config key {key}"))),
    }
}

fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(Error::Parse {
            line: idx + 1,
            msg: format!("expected 'key = value', got '{raw}'"),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("unknown config key '{key}'"),
            });
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::Parse {
                line: idx + 1,
                msg: format!("duplicate config key '{key}'"),
            });
        }
    }
    Ok(map)
}

fn parse_n_list(s: &str) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let n: u32 = part
            .parse()
            .map_err(|_| Error::bad_argument(format!("invalid n value '{part}'")))?;
        if n < 3 {
            return Err(Error::bad_argument(format!("n = {n} is below the minimum 3")));
        }
        out.push(n);
    }
    if out.is_empty() {
        return Err(Error::bad_argument("empty n list"));
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn parse_primes(s: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let p: u64 = part
            .parse()
            .map_err(|_| Error::bad_argument(format!("invalid prime '{part}'")))?;
        if !is_prime_u64(p) {
            return Err(Error::bad_argument(format!("{p} is not prime")));
        }
        out.push(p);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_config(text: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(text.as_bytes()).unwrap();
        f
    }

    #[test]
    fn defaults_apply() {
        let cfg = Config::resolve(None, &Overrides::default()).unwrap();
        assert_eq!(cfg.trials, 1);
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.threads, 1);
        assert!(cfg.model.is_none());
        assert!(cfg.primes.is_empty());
        assert_eq!(cfg.alpha, 2.0);
    }

    #[test]
    fn file_and_flags_merge() {
        let f = write_config(
            "# comment\nmodel = one-out\nn = 6,5,6\ntrials = 7\nseed = 99\nprimes = 3,2\n",
        );
        let cfg = Config::resolve(Some(f.path()), &Overrides::default()).unwrap();
        assert_eq!(cfg.model, Some(Model::OneOut));
        assert_eq!(cfg.n, vec![5, 6]);
        assert_eq!(cfg.trials, 7);
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.primes, vec![2, 3]);

        // A flag beats the file.
        let flags = Overrides {
            trials: Some(2),
            model: Some("determinantal".into()),
            ..Default::default()
        };
        let cfg = Config::resolve(Some(f.path()), &flags).unwrap();
        assert_eq!(cfg.trials, 2);
        assert_eq!(cfg.model, Some(Model::Determinantal));
        assert_eq!(cfg.seed, 99);
    }

    #[test]
    fn rejections() {
        for text in [
            "mystery = 1\n",
            "trials\n",
            "trials = x\n",
            "trials = 3\ntrials = 4\n",
            "n = 2\n",
            "p = 1.5\n",
            "primes = 4\n",
        ] {
            let f = write_config(text);
            assert!(
                Config::resolve(Some(f.path()), &Overrides::default()).is_err(),
                "accepted {text:?}"
            );
        }
        let flags = Overrides {
            trials: Some(0),
            ..Default::default()
        };
        assert!(Config::resolve(None, &flags).is_err());
    }

    #[test]
    fn requirement_helpers() {
        let cfg = Config::resolve(None, &Overrides::default()).unwrap();
        assert!(cfg.require_model().is_err());
        assert!(cfg.require_single_n().is_err());
        assert!(cfg.require_out().is_err());
        assert!(cfg.lm_probability().is_err());

        let flags = Overrides {
            n: Some("5,8".into()),
            ..Default::default()
        };
        let cfg = Config::resolve(None, &flags).unwrap();
        assert!(cfg.require_single_n().is_err());
        assert_eq!(cfg.require_n_grid().unwrap(), &[5, 8]);
    }
}

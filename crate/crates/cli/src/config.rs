//! Flat `key = value` run configuration.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use shifted_prime::arith::DEFAULT_SIEVE_LIMIT;
use shifted_prime::diffsets::{DEFAULT_EXACT_CEILING, DEFAULT_NODE_BUDGET};
use shifted_prime::increment::{ArcScale, IncrementConstants};
use shifted_prime::majorarcs::MajorArcConstants;
use shifted_prime::zerodata::{default_data_dir, DichotomyConstants};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("config: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitialSet {
    GreedyAscending,
    GreedyRandom,
}

impl InitialSet {
    fn as_str(self) -> &'static str {
        match self {
            InitialSet::GreedyAscending => "greedy-ascending",
            InitialSet::GreedyRandom => "greedy-random",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub c1: f64,
    pub c4: f64,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    pub c8: f64,
    pub c9: f64,
    pub c10: f64,
    pub big_c1: f64,
    pub big_c3: f64,
    pub big_c4: f64,
    pub big_c5: f64,
    pub big_c6: f64,
    pub big_c_prime: f64,
    pub zero_budget: f64,
    pub tail_budget: f64,
    pub slack: f64,
    pub decomposition_budget: f64,
    pub density_big_c: f64,
    pub density_c: f64,
    pub node_budget: u64,
    pub exact_ceiling: u64,
    pub sieve_max: u64,
    pub grid_factor: usize,
    pub arc_scale: ArcScale,
    pub min_length_fraction: f64,
    pub max_difference: u64,
    pub enforce_caps: bool,
    pub zeroed_thresholds: bool,
    pub initial_set: InitialSet,
    pub characters_max_q: u64,
    pub sweep_n: u64,
    pub sweep_big_d: f64,
    pub sweep_t: f64,
    pub zeros_dir: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let inc = IncrementConstants::default();
        let arcs = MajorArcConstants::default();
        RunConfig {
            c1: arcs.dichotomy.c1,
            c4: arcs.c4,
            c5: inc.c5,
            c6: inc.c6,
            c7: inc.c7,
            c8: inc.c8,
            c9: inc.c9,
            c10: inc.c10,
            big_c1: arcs.dichotomy.big_c1,
            big_c3: arcs.big_c3,
            big_c4: inc.big_c4,
            big_c5: inc.big_c5,
            big_c6: inc.big_c6,
            big_c_prime: inc.big_c_prime,
            zero_budget: arcs.zero_budget,
            tail_budget: arcs.tail_budget,
            slack: arcs.slack,
            decomposition_budget: 10.0,
            density_big_c: 1.0,
            density_c: 1.0,
            node_budget: DEFAULT_NODE_BUDGET,
            exact_ceiling: DEFAULT_EXACT_CEILING,
            sieve_max: DEFAULT_SIEVE_LIMIT,
            grid_factor: 4,
            arc_scale: inc.scale,
            min_length_fraction: inc.min_length_fraction,
            max_difference: inc.max_difference,
            enforce_caps: inc.enforce_caps,
            zeroed_thresholds: false,
            initial_set: InitialSet::GreedyRandom,
            characters_max_q: 60,
            sweep_n: 100_000,
            sweep_big_d: 5.0,
            sweep_t: 30.0,
            zeros_dir: None,
            output_dir: None,
            seed: 0,
        }
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Syntax {
        line,
        msg: format!("bad value '{value}' for {key}"),
    })
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(ConfigError::Syntax {
            line,
            msg: format!("bad boolean '{value}' for {key}"),
        }),
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn load_or_default(path: Option<&Path>) -> Result<Self, ConfigError> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen = std::collections::BTreeSet::new();
        let (mut big_q, mut q_prime, mut scale_name) = match cfg.arc_scale {
            ArcScale::Desk { big_q, q_prime } => (big_q, q_prime, "desk".to_string()),
            ArcScale::Formula => (500.0, 20.0, "formula".to_string()),
        };
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line,
                msg: format!("expected 'key = value', got '{content}'"),
            })?;
            let (key, value) = (key.trim(), value.trim());
            let key = canonical_key(key).ok_or_else(|| ConfigError::Syntax {
                line,
                msg: format!("unknown key '{key}'"),
            })?;
            if !seen.insert(key) {
                return Err(ConfigError::Syntax {
                    line,
                    msg: format!("duplicate key '{key}'"),
                });
            }
            match key {
                "c1" => cfg.c1 = parse_num(line, key, value)?,
                "c4" => cfg.c4 = parse_num(line, key, value)?,
                "c5" => cfg.c5 = parse_num(line, key, value)?,
                "c6" => cfg.c6 = parse_num(line, key, value)?,
                "c7" => cfg.c7 = parse_num(line, key, value)?,
                "c8" => cfg.c8 = parse_num(line, key, value)?,
                "c9" => cfg.c9 = parse_num(line, key, value)?,
                "c10" => cfg.c10 = parse_num(line, key, value)?,
                "C1" => cfg.big_c1 = parse_num(line, key, value)?,
                "C3" => cfg.big_c3 = parse_num(line, key, value)?,
                "C4" => cfg.big_c4 = parse_num(line, key, value)?,
                "C5" => cfg.big_c5 = parse_num(line, key, value)?,
                "C6" => cfg.big_c6 = parse_num(line, key, value)?,
                "C_prime" => cfg.big_c_prime = parse_num(line, key, value)?,
                "zero_budget" => cfg.zero_budget = parse_num(line, key, value)?,
                "tail_budget" => cfg.tail_budget = parse_num(line, key, value)?,
                "slack" => cfg.slack = parse_num(line, key, value)?,
                "decomposition_budget" => cfg.decomposition_budget = parse_num(line, key, value)?,
                "density_C" => cfg.density_big_c = parse_num(line, key, value)?,
                "density_c" => cfg.density_c = parse_num(line, key, value)?,
                "node_budget" => cfg.node_budget = parse_num(line, key, value)?,
                "exact_ceiling" => cfg.exact_ceiling = parse_num(line, key, value)?,
                "sieve_max" => cfg.sieve_max = parse_num(line, key, value)?,
                "grid_factor" => cfg.grid_factor = parse_num(line, key, value)?,
                "arc_scale" => scale_name = value.to_string(),
                "big_Q" => big_q = parse_num(line, key, value)?,
                "Q_prime" => q_prime = parse_num(line, key, value)?,
                "min_length_fraction" => cfg.min_length_fraction = parse_num(line, key, value)?,
                "max_difference" => cfg.max_difference = parse_num(line, key, value)?,
                "enforce_caps" => cfg.enforce_caps = parse_bool(line, key, value)?,
                "zeroed_thresholds" => cfg.zeroed_thresholds = parse_bool(line, key, value)?,
                "initial_set" => {
                    cfg.initial_set = match value {
                        "greedy-ascending" => InitialSet::GreedyAscending,
                        "greedy-random" => InitialSet::GreedyRandom,
                        _ => {
                            return Err(ConfigError::Syntax {
                                line,
                                msg: format!("initial_set must be greedy-ascending or greedy-random, got '{value}'"),
                            })
                        }
                    }
                }
                "characters_max_q" => cfg.characters_max_q = parse_num(line, key, value)?,
                "sweep_N" => cfg.sweep_n = parse_num(line, key, value)?,
                "sweep_D" => cfg.sweep_big_d = parse_num(line, key, value)?,
                "sweep_T" => cfg.sweep_t = parse_num(line, key, value)?,
                "zeros_dir" => cfg.zeros_dir = Some(PathBuf::from(value)),
                "output_dir" => cfg.output_dir = Some(PathBuf::from(value)),
                "seed" => cfg.seed = parse_num(line, key, value)?,
                _ => unreachable!("canonical_key returned an unhandled key"),
            }
        }
        cfg.arc_scale = match scale_name.as_str() {
            "desk" => ArcScale::Desk { big_q, q_prime },
            "formula" => ArcScale::Formula,
            other => {
                return Err(ConfigError::Invalid(format!(
                    "arc_scale must be desk or formula, got '{other}'"
                )))
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut positive = vec![
            ("c1", self.c1),
            ("c4", self.c4),
            ("c5", self.c5),
            ("c6", self.c6),
            ("c7", self.c7),
            ("c8", self.c8),
            ("c9", self.c9),
            ("c10", self.c10),
            ("C1", self.big_c1),
            ("C3", self.big_c3),
            ("C4", self.big_c4),
            ("C5", self.big_c5),
            ("C6", self.big_c6),
            ("C_prime", self.big_c_prime),
            ("zero_budget", self.zero_budget),
            ("tail_budget", self.tail_budget),
            ("slack", self.slack),
            ("decomposition_budget", self.decomposition_budget),
            ("density_C", self.density_big_c),
            ("density_c", self.density_c),
            ("min_length_fraction", self.min_length_fraction),
            ("sweep_D", self.sweep_big_d),
            ("sweep_T", self.sweep_t),
        ];
        if let ArcScale::Desk { big_q, q_prime } = self.arc_scale {
            positive.push(("big_Q", big_q));
            positive.push(("Q_prime", q_prime));
        }
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::Invalid(format!("{name} must be positive, got {v}")));
            }
        }
        if self.big_c1 < 10.0 {
            return Err(ConfigError::Invalid(format!(
                "C1 must be at least 10, got {}",
                self.big_c1
            )));
        }
        if self.grid_factor < 4 {
            return Err(ConfigError::Invalid(format!(
                "grid_factor must be at least 4, got {}",
                self.grid_factor
            )));
        }
        for (name, v) in [
            ("node_budget", self.node_budget),
            ("exact_ceiling", self.exact_ceiling),
            ("sieve_max", self.sieve_max),
            ("max_difference", self.max_difference),
            ("characters_max_q", self.characters_max_q),
            ("sweep_N", self.sweep_n),
        ] {
            if v == 0 {
                return Err(ConfigError::Invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Canonical `(key, value)` listing; the echo and the hash are built from it.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let (scale, big_q, q_prime) = match self.arc_scale {
            ArcScale::Desk { big_q, q_prime } => ("desk", big_q.to_string(), q_prime.to_string()),
            ArcScale::Formula => ("formula", "-".to_string(), "-".to_string()),
        };
        let path = |p: &Option<PathBuf>| {
            p.as_ref()
                .map(|p| p.display().to_string())
                .unwrap_or_else(|| "default".to_string())
        };
        vec![
            ("c1", self.c1.to_string()),
            ("c4", self.c4.to_string()),
            ("c5", self.c5.to_string()),
            ("c6", self.c6.to_string()),
            ("c7", self.c7.to_string()),
            ("c8", self.c8.to_string()),
            ("c9", self.c9.to_string()),
            ("c10", self.c10.to_string()),
            ("C1", self.big_c1.to_string()),
            ("C3", self.big_c3.to_string()),
            ("C4", self.big_c4.to_string()),
            ("C5", self.big_c5.to_string()),
            ("C6", self.big_c6.to_string()),
            ("C_prime", self.big_c_prime.to_string()),
            ("zero_budget", self.zero_budget.to_string()),
            ("tail_budget", self.tail_budget.to_string()),
            ("slack", self.slack.to_string()),
            ("decomposition_budget", self.decomposition_budget.to_string()),
            ("density_C", self.density_big_c.to_string()),
            ("density_c", self.density_c.to_string()),
            ("node_budget", self.node_budget.to_string()),
            ("exact_ceiling", self.exact_ceiling.to_string()),
            ("sieve_max", self.sieve_max.to_string()),
            ("grid_factor", self.grid_factor.to_string()),
            ("arc_scale", scale.to_string()),
            ("big_Q", big_q),
            ("Q_prime", q_prime),
            ("min_length_fraction", self.min_length_fraction.to_string()),
            ("max_difference", self.max_difference.to_string()),
            ("enforce_caps", self.enforce_caps.to_string()),
            ("zeroed_thresholds", self.zeroed_thresholds.to_string()),
            ("initial_set", self.initial_set.as_str().to_string()),
            ("characters_max_q", self.characters_max_q.to_string()),
            ("sweep_N", self.sweep_n.to_string()),
            ("sweep_D", self.sweep_big_d.to_string()),
            ("sweep_T", self.sweep_t.to_string()),
            ("zeros_dir", path(&self.zeros_dir)),
            ("output_dir", path(&self.output_dir)),
            ("seed", self.seed.to_string()),
        ]
    }

    /// The configuration in its own file format.
    pub fn echo(&self) -> String {
        self.entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Hex SHA-256 of [`RunConfig::echo`].
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.echo().as_bytes()))
    }

    pub fn echo_map(&self) -> serde_json::Map<String, serde_json::Value> {
        self.entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
            .collect()
    }

    pub fn dichotomy(&self) -> DichotomyConstants {
        DichotomyConstants {
            c1: self.c1,
            big_c1: self.big_c1,
        }
    }

    pub fn major_arcs(&self) -> MajorArcConstants {
        MajorArcConstants {
            dichotomy: self.dichotomy(),
            big_c3: self.big_c3,
            c4: self.c4,
            zero_budget: self.zero_budget,
            tail_budget: self.tail_budget,
            slack: self.slack,
        }
    }

    pub fn increment(&self) -> IncrementConstants {
        let k = IncrementConstants {
            c5: self.c5,
            c6: self.c6,
            c7: self.c7,
            c8: self.c8,
            c9: self.c9,
            c10: self.c10,
            big_c4: self.big_c4,
            big_c5: self.big_c5,
            big_c6: self.big_c6,
            big_c_prime: self.big_c_prime,
            big_c1: self.big_c1,
            scale: self.arc_scale,
            min_length_fraction: self.min_length_fraction,
            max_difference: self.max_difference,
            enforce_caps: self.enforce_caps,
        };
        if self.zeroed_thresholds {
            k.zeroed_thresholds()
        } else {
            k
        }
    }

    /// Zero-fixture directory: the config value, else the environment or
    /// the shipped `data/`.
    pub fn zeros_dir(&self) -> PathBuf {
        self.zeros_dir.clone().unwrap_or_else(default_data_dir)
    }

    /// Relative output paths are taken under `output_dir` when set.
    pub fn output_path(&self, p: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }
}

fn canonical_key(key: &str) -> Option<&'static str> {
    const KEYS: &[&str] = &[
        "c1",
        "c4",
        "c5",
        "c6",
        "c7",
        "c8",
        "c9",
        "c10",
        "C1",
        "C3",
        "C4",
        "C5",
        "C6",
        "C_prime",
        "zero_budget",
        "tail_budget",
        "slack",
        "decomposition_budget",
        "density_C",
        "density_c",
        "node_budget",
        "exact_ceiling",
        "sieve_max",
        "grid_factor",
        "arc_scale",
        "big_Q",
        "Q_prime",
        "min_length_fraction",
        "max_difference",
        "enforce_caps",
        "zeroed_thresholds",
        "initial_set",
        "characters_max_q",
        "sweep_N",
        "sweep_D",
        "sweep_T",
        "zeros_dir",
        "output_dir",
        "seed",
    ];
    let alias = match key {
        "big_c1" => "C1",
        "big_c3" => "C3",
        "big_c4" => "C4",
        "big_c5" => "C5",
        "big_c6" => "C6",
        "C'" | "big_c_prime" => "C_prime",
        "Q" => "big_Q",
        "Q'" => "Q_prime",
        other => other,
    };
    KEYS.iter().copied().find(|k| *k == alias)
}

//! Run configuration: a TOML file with per-flag overrides (flags win).
//! The table cache directory can also come from the `HEDGETRIM_CACHE`
//! environment variable, with file and flag settings taking precedence.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

use hedgetrim_core::fii::ProblemId;

pub const CACHE_ENV_VAR: &str = "HEDGETRIM_CACHE";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Problem the run concerns.
    pub problem: ProblemId,
    /// Order of the excluded topological clique used by audits.
    pub r: usize,
    /// Largest protrusion boundary the reduction rule is applied to;
    /// tables are built for boundary sizes 0..=boundary_budget.
    pub boundary_budget: usize,
    /// Enumeration cap for table building.
    pub n_max: usize,
    /// Largest instance the exact solvers are run on.
    pub exact_cap: usize,
    pub seed: u64,
    /// Base of the logarithm in the clique-count bound.
    pub log_base: f64,
    /// Table cache directory; falls back to the environment, then to
    /// `<out_dir>/tables`.
    pub cache_dir: Option<PathBuf>,
    pub out_dir: PathBuf,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            problem: ProblemId::Fvs,
            r: 6,
            boundary_budget: 2,
            n_max: 5,
            exact_cap: hedgetrim_core::solvers::EXACT_SOLVE_CAP,
            seed: 0,
            log_base: 2.0,
            cache_dir: None,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl Config {
    pub fn load(path: Option<&Path>) -> anyhow::Result<Self> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.n_max == 0 || self.exact_cap == 0 {
            anyhow::bail!("caps must be positive");
        }
        if self.log_base <= 1.0 || self.log_base.is_nan() {
            anyhow::bail!("log base must exceed 1");
        }
        Ok(())
    }

    pub fn cache_dir(&self) -> PathBuf {
        if let Some(dir) = &self.cache_dir {
            return dir.clone();
        }
        if let Ok(dir) = std::env::var(CACHE_ENV_VAR) {
            if !dir.is_empty() {
                return PathBuf::from(dir);
            }
        }
        self.out_dir.join("tables")
    }
}

/// Flag-level overrides; every set field wins over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub problem: Option<ProblemId>,
    pub r: Option<usize>,
    pub boundary_budget: Option<usize>,
    pub n_max: Option<usize>,
    pub exact_cap: Option<usize>,
    pub seed: Option<u64>,
    pub cache_dir: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
}

impl Overrides {
    pub fn apply(&self, mut config: Config) -> Config {
        if let Some(problem) = self.problem {
            config.problem = problem;
        }
        if let Some(r) = self.r {
            config.r = r;
        }
        if let Some(b) = self.boundary_budget {
            config.boundary_budget = b;
        }
        if let Some(n_max) = self.n_max {
            config.n_max = n_max;
        }
        if let Some(cap) = self.exact_cap {
            config.exact_cap = cap;
        }
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(dir) = &self.cache_dir {
            config.cache_dir = Some(dir.clone());
        }
        if let Some(dir) = &self.out_dir {
            config.out_dir = dir.clone();
        }
        config
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_toml_round_trip() {
        let config = Config::default();
        let text = toml::to_string(&config).unwrap();
        let parsed: Config = toml::from_str(&text).unwrap();
        assert_eq!(parsed.problem, ProblemId::Fvs);
        assert_eq!(parsed.r, 6);
        assert_eq!(parsed.boundary_budget, 2);
    }

    #[test]
    fn flags_win_over_file_settings() {
        let config: Config = toml::from_str("problem = \"vc\"\nr = 4\n").unwrap();
        assert_eq!(config.problem, ProblemId::Vc);
        let overridden = Overrides {
            r: Some(7),
            ..Default::default()
        }
        .apply(config);
        assert_eq!(overridden.r, 7);
        assert_eq!(overridden.problem, ProblemId::Vc);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(toml::from_str::<Config>("bogus = 1\n").is_err());
    }
}

use std::path::{Path, PathBuf};

use cpgctx_core::questions::PopulationStats;
use serde::{Deserialize, Serialize};

use crate::error::ServiceError;

pub const PORT_ENV: &str = "CPGCTX_PORT";
pub const SCORER_ENV: &str = "CPGCTX_SCORER_ENDPOINT";

/// Risk score cut points. Scores below `elevated_from` are low, scores above
/// `high_above` are high, everything between is elevated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeverityBands {
    pub elevated_from: f64,
    pub high_above: f64,
}

impl Default for SeverityBands {
    fn default() -> Self {
        SeverityBands {
            elevated_from: 0.2,
            high_above: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Low,
    Elevated,
    High,
}

impl SeverityBands {
    pub fn classify(&self, score: f64) -> Severity {
        if score < self.elevated_from {
            Severity::Low
        } else if score > self.high_above {
            Severity::High
        } else {
            Severity::Elevated
        }
    }
}

fn default_population() -> PopulationStats {
    PopulationStats {
        medicare_ckd_rate: 0.12,
        cci3_ckd_rate: 0.25,
    }
}

fn default_max_tokens() -> usize {
    512
}

fn default_top_k() -> usize {
    cpgctx_core::augment::DEFAULT_TOP_K
}

fn default_cache() -> usize {
    256
}

fn default_port() -> u16 {
    8080
}

fn default_timeout() -> u64 {
    cpgctx_core::reader::DEFAULT_TIMEOUT_MS
}

/// Service configuration file. Relative paths resolve against the directory
/// holding the file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceConfig {
    /// Corpus JSON, or guideline HTML when `selectors` is set.
    pub corpus: PathBuf,
    #[serde(default)]
    pub selectors: Option<PathBuf>,
    pub annotations: PathBuf,
    pub graph: PathBuf,
    pub mapping: PathBuf,
    pub patients: PathBuf,
    pub ccs: PathBuf,
    #[serde(default)]
    pub templates: Option<PathBuf>,
    #[serde(default)]
    pub semantic_types: Option<PathBuf>,
    #[serde(default = "default_population")]
    pub population: PopulationStats,
    #[serde(default)]
    pub severity: SeverityBands,
    #[serde(default)]
    pub scorer_endpoint: Option<String>,
    #[serde(default = "default_timeout")]
    pub scorer_timeout_ms: u64,
    #[serde(default = "default_max_tokens")]
    pub max_tokens: usize,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default = "default_cache")]
    pub cache_capacity: usize,
    #[serde(default = "default_port")]
    pub port: u16,
}

impl ServiceConfig {
    pub fn from_json_str(text: &str, base: &Path) -> Result<Self, ServiceError> {
        let mut cfg: ServiceConfig =
            serde_json::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))?;
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        for p in [&mut cfg.corpus, &mut cfg.annotations, &mut cfg.graph, &mut cfg.mapping, &mut cfg.patients, &mut cfg.ccs] {
            resolve(p);
        }
        for p in [&mut cfg.selectors, &mut cfg.templates, &mut cfg.semantic_types].into_iter().flatten() {
            resolve(p);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ServiceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| ServiceError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_json_str(&text, base)
    }

    pub fn validate(&self) -> Result<(), ServiceError> {
        let bad = |m: String| Err(ServiceError::Config(m));
        let s = self.severity;
        if !(0.0..=1.0).contains(&s.elevated_from) || !(0.0..=1.0).contains(&s.high_above) || s.elevated_from > s.high_above {
            return bad(format!("severity bands {} / {} must be ordered within [0, 1]", s.elevated_from, s.high_above));
        }
        self.population.validate().map_err(|e| ServiceError::Config(e.to_string()))?;
        if self.max_tokens == 0 || self.top_k == 0 || self.cache_capacity == 0 {
            return bad("max_tokens, top_k and cache_capacity must be positive".into());
        }
        Ok(())
    }

    /// Applies the port and scorer-endpoint environment overrides.
    pub fn with_env(mut self, lookup: impl Fn(&str) -> Option<String>) -> Result<Self, ServiceError> {
        if let Some(port) = lookup(PORT_ENV) {
            self.port = port
                .trim()
                .parse()
                .map_err(|_| ServiceError::Config(format!("{PORT_ENV}={port} is not a port")))?;
        }
        if let Some(url) = lookup(SCORER_ENV) {
            self.scorer_endpoint = Some(url);
        }
        Ok(self)
    }
}

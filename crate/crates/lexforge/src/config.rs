//! JSON run configuration. Every section and key is optional except the
//! two word-list paths; unknown keys are rejected. Relative paths resolve
//! against the directory holding the config file.

use std::path::{Path, PathBuf};

use lexforge_core::{BiLstmHyperparams, LogRegHyperparams};
use serde::{Deserialize, Serialize};

use crate::error::{LexError, Result};
use crate::formats::read_text;

pub const WORKDIR_ENV: &str = "LEXFORGE_WORKDIR";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathsConfig {
    pub hindi_words: PathBuf,
    pub english_words: PathBuf,
    #[serde(default = "default_workdir")]
    pub workdir: PathBuf,
}

fn default_workdir() -> PathBuf {
    PathBuf::from("work")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CorpusConfig {
    pub seed: u64,
    pub test_fraction: f64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig { seed: 13, test_fraction: 0.25 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub min_freq: u64,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig { n_min: 1, n_max: 5, min_freq: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub paths: PathsConfig,
    #[serde(default)]
    pub corpus: CorpusConfig,
    #[serde(default)]
    pub features: FeatureConfig,
    #[serde(default)]
    pub logreg: LogRegHyperparams,
    #[serde(default)]
    pub bilstm: BiLstmHyperparams,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub workdir: Option<PathBuf>,
    pub hindi_words: Option<PathBuf>,
    pub english_words: Option<PathBuf>,
    pub seed: Option<u64>,
    pub test_fraction: Option<f64>,
    pub min_freq: Option<u64>,
    pub lr_epochs: Option<usize>,
    pub bilstm_epochs: Option<usize>,
}

const MAX_EPOCHS: usize = 100_000;
const MAX_BATCH: usize = 1 << 20;
const MAX_DIM: usize = 4096;
const MAX_N: usize = 10;

impl RunConfig {
    pub fn new(hindi_words: impl Into<PathBuf>, english_words: impl Into<PathBuf>, workdir: impl Into<PathBuf>) -> Self {
        RunConfig {
            paths: PathsConfig { hindi_words: hindi_words.into(), english_words: english_words.into(), workdir: workdir.into() },
            corpus: CorpusConfig::default(),
            features: FeatureConfig::default(),
            logreg: LogRegHyperparams::default(),
            bilstm: BiLstmHyperparams::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| LexError::Config(e.to_string()))
    }

    /// Reads, resolves paths against the file's directory, and validates.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg = Self::from_json(&read_text(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.paths.hindi_words, &mut cfg.paths.english_words, &mut cfg.paths.workdir] {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Flags win over the environment, which wins over the file.
    pub fn apply(&mut self, o: &Overrides, env_workdir: Option<PathBuf>) -> Result<()> {
        if let Some(w) = o.workdir.clone().or(env_workdir) {
            self.paths.workdir = w;
        }
        if let Some(p) = &o.hindi_words {
            self.paths.hindi_words = p.clone();
        }
        if let Some(p) = &o.english_words {
            self.paths.english_words = p.clone();
        }
        if let Some(s) = o.seed {
            self.corpus.seed = s;
        }
        if let Some(f) = o.test_fraction {
            self.corpus.test_fraction = f;
        }
        if let Some(m) = o.min_freq {
            self.features.min_freq = m;
        }
        if let Some(e) = o.lr_epochs {
            self.logreg.epochs = e;
        }
        if let Some(e) = o.bilstm_epochs {
            self.bilstm.epochs = e;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(LexError::Config(msg.to_owned()));
        let f = self.corpus.test_fraction;
        if !(f > 0.0 && f < 1.0) {
            return bad("corpus.test_fraction must lie in (0, 1)");
        }
        let ft = &self.features;
        if ft.n_min < 1 || ft.n_min > ft.n_max || ft.n_max > MAX_N {
            return bad("features need 1 <= n_min <= n_max <= 10");
        }
        if ft.min_freq < 1 {
            return bad("features.min_freq must be at least 1");
        }
        self.logreg.validate()?;
        self.bilstm.validate()?;
        if self.logreg.epochs > MAX_EPOCHS || self.bilstm.epochs > MAX_EPOCHS {
            return bad("epochs must be at most 100000");
        }
        if self.logreg.batch_size > MAX_BATCH || self.bilstm.batch_size > MAX_BATCH {
            return bad("batch_size must be at most 1048576");
        }
        if self.bilstm.embedding_dim > MAX_DIM || self.bilstm.hidden_dim > MAX_DIM {
            return bad("bilstm dimensions must be at most 4096");
        }
        Ok(())
    }
}

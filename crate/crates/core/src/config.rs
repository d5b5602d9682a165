//! Run configuration: degree caps, seed, cache directory and output format.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::numfield::{FactorCache, FactorCaps, MAX_FIELD_DEGREE, MAX_NORM_DEGREE};

/// Seed used when neither `--seed` nor `TSVS_SEED` is given.
pub const DEFAULT_SEED: u64 = 20_251_019;

/// Largest matrix accepted from a file by default.
pub const MAX_MATRIX_SIZE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub max_field_degree: usize,
    pub max_norm_degree: usize,
    pub max_matrix_size: usize,
    pub seed: u64,
    pub cache_dir: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_field_degree: MAX_FIELD_DEGREE,
            max_norm_degree: MAX_NORM_DEGREE,
            max_matrix_size: MAX_MATRIX_SIZE,
            seed: DEFAULT_SEED,
            cache_dir: None,
            format: OutputFormat::Text,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("field degree", self.max_field_degree),
            ("norm degree", self.max_norm_degree),
            ("matrix size", self.max_matrix_size),
        ] {
            if v == 0 {
                return Err(Error::DegreeCap(format!("{name} cap must be positive")));
            }
        }
        Ok(())
    }

    /// Seed from a `TSVS_SEED` value: decimal or `0x` hex.
    pub fn parse_seed(s: &str) -> Result<u64> {
        let s = s.trim();
        let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
            Some(hex) => u64::from_str_radix(hex, 16),
            None => s.parse::<u64>(),
        };
        parsed.map_err(|_| Error::parse(0, format!("TSVS_SEED must be a 64-bit integer, got {s:?}")))
    }

    pub fn factor_caps(&self) -> FactorCaps {
        FactorCaps { max_poly_degree: self.max_field_degree, max_norm_degree: self.max_norm_degree }
    }

    /// The on-disk cache when a directory is configured, else the process
    /// cache.
    pub fn factor_cache(&self) -> FactorCache {
        match &self.cache_dir {
            Some(d) => FactorCache::with_dir(d.clone()),
            None => FactorCache::new(),
        }
    }
}

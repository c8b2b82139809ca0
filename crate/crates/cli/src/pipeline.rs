//! Cached pipelines over the core modules.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;

use pinwheel_core::apcomplex::{enumerate_pairs, Adjacency};
use pinwheel_core::corona::{enumerate_collared, EnumConfig, Enumeration, EnumerationFile};
use pinwheel_core::linalg::IntMatrix;
use pinwheel_core::perron::{collared_matrix, perron_data, PerronData};
use pinwheel_core::substitution::SubstitutionRule;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub max_level: u32,
    pub scan_level_start: u32,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn enum_config(&self) -> EnumConfig {
        EnumConfig { scan_level_start: self.scan_level_start, max_level: self.max_level }
    }
}

pub struct Pipeline {
    pub rule: SubstitutionRule,
    pub hash: String,
    pub config: RunConfig,
}

impl Pipeline {
    pub fn new(rule: SubstitutionRule, config: RunConfig) -> Self {
        let hash = rule.hash();
        Pipeline { rule, hash, config }
    }

    fn cache_path(&self, name: &str) -> Option<PathBuf> {
        self.config.cache_dir.as_ref().map(|d| d.join(&self.hash).join(name))
    }

    fn load<T: DeserializeOwned>(path: &Path) -> Option<T> {
        let text = fs::read_to_string(path).ok()?;
        match serde_json::from_str(&text) {
            Ok(v) => Some(v),
            Err(e) => {
                log::warn!("ignoring unreadable cache entry {}: {e}", path.display());
                None
            }
        }
    }

    fn store<T: Serialize>(path: &Path, value: &T) -> Result<()> {
        let dir = path.parent().expect("cache entries live in a directory");
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_vec(value)?).with_context(|| format!("writing {}", tmp.display()))?;
        fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }

    pub fn enumeration(&self) -> Result<Enumeration> {
        let path = self.cache_path("classes.json");
        if let Some(p) = &path {
            if let Some(f) = Self::load::<EnumerationFile>(p) {
                match Enumeration::from_file(f) {
                    Ok(e) if e.certificate.closed => {
                        log::info!("loaded {} classes from {}", e.len(), p.display());
                        return Ok(e);
                    }
                    Ok(_) => log::warn!("cached enumeration lacks a closure certificate; recomputing"),
                    Err(err) => log::warn!("cached enumeration rejected: {err}"),
                }
            }
        }
        log::info!("enumerating collared classes");
        let e = enumerate_collared(&self.rule, self.config.enum_config())?;
        if let Some(p) = &path {
            Self::store(p, &e.to_file())?;
        }
        Ok(e)
    }

    pub fn adjacency(&self, e: &Enumeration) -> Result<Adjacency> {
        let path = self.cache_path("adjacency.json");
        if let Some(p) = &path {
            if let Some(a) = Self::load::<Adjacency>(p) {
                if a.pairs.iter().all(|q| q.a < e.len() && q.b < e.len()) {
                    return Ok(a);
                }
                log::warn!("cached adjacency refers to unknown classes; recomputing");
            }
        }
        log::info!("enumerating adjacency types");
        let a = enumerate_pairs(&self.rule, e, self.config.enum_config())?;
        if let Some(p) = &path {
            Self::store(p, &a)?;
        }
        Ok(a)
    }

    pub fn matrix(&self) -> Result<(Enumeration, IntMatrix)> {
        let e = self.enumeration()?;
        let a = collared_matrix(&e.children);
        Ok((e, a))
    }

    pub fn perron(&self) -> Result<(Enumeration, IntMatrix, PerronData)> {
        let (e, a) = self.matrix()?;
        let lambda = self.rule.area_factor();
        let lambda = i64::try_from(lambda.numer()).ok().filter(|_| lambda.is_integer());
        let lambda = lambda.context("the inflation factor is not an integer")?;
        let p = perron_data(&a, lambda)?;
        Ok((e, a, p))
    }
}

/// A machine-readable report with the rule hash and version attached.
#[derive(Serialize)]
pub struct Report<T: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    pub rule_hash: String,
    pub data: T,
}

impl Pipeline {
    pub fn report<T: Serialize>(&self, command: &'static str, data: T) -> Report<T> {
        Report { command, version: VERSION, rule_hash: self.hash.clone(), data }
    }
}

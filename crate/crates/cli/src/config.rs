//! Option resolution: flags override the config file, the config file
//! overrides the HBF_MODULI environment variable, and the built-in table is
//! the fallback.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use hbf_core::field::{parse_moduli_table, FieldCtx, MODULI_TABLE_TEXT};

/// Plain key=value file; '#' starts a comment. Known keys: moduli, workers.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    pub moduli: Option<PathBuf>,
    pub workers: Option<usize>,
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let mut out = ConfigFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("config line {}: expected key=value", lineno + 1);
        };
        match k.trim() {
            "moduli" => out.moduli = Some(PathBuf::from(v.trim())),
            "workers" => {
                out.workers = Some(v.trim().parse().context("config: bad workers value")?)
            }
            other => bail!("config line {}: unknown key {other:?}", lineno + 1),
        }
    }
    Ok(out)
}

/// The fully resolved run options.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub moduli: BTreeMap<u32, u64>,
    /// verbatim table text, hashed into the manifest
    pub moduli_text: String,
    pub workers: usize,
    pub seed: u64,
}

pub fn resolve(
    flag_config: Option<&Path>,
    flag_moduli: Option<&Path>,
    flag_workers: Option<usize>,
    flag_seed: Option<u64>,
) -> Result<Resolved> {
    let cfg = match flag_config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            parse_config(&text)?
        }
        None => ConfigFile::default(),
    };
    let moduli_path: Option<PathBuf> = flag_moduli
        .map(PathBuf::from)
        .or(cfg.moduli)
        .or_else(|| std::env::var_os("HBF_MODULI").map(PathBuf::from));
    let moduli_text = match &moduli_path {
        Some(p) => std::fs::read_to_string(p)
            .with_context(|| format!("reading modulus table {}", p.display()))?,
        None => MODULI_TABLE_TEXT.to_string(),
    };
    let moduli = parse_moduli_table(&moduli_text)?;
    let workers = flag_workers
        .or(cfg.workers)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    Ok(Resolved {
        moduli,
        moduli_text,
        workers,
        seed: flag_seed.unwrap_or(1),
    })
}

impl Resolved {
    /// Build a context for degree k from the resolved table (falling back
    /// to the built-in entry when the override file omits the degree).
    pub fn ctx(&self, k: u32) -> Result<Arc<FieldCtx>> {
        let modulus = self.moduli.get(&k).copied();
        Ok(FieldCtx::new(k, modulus)?)
    }
}

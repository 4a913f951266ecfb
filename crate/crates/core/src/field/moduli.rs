//! The repo's fixed table of default moduli, one irreducible polynomial per
//! degree, re-verified at context construction.

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Built-in table text, same format as external override files:
/// one "k: hex" line per degree, '#' starts a comment.
pub const MODULI_TABLE_TEXT: &str = include_str!("moduli.txt");

/// Parse a modulus table. Later lines win on duplicate degrees.
pub fn parse_moduli_table(text: &str) -> Result<BTreeMap<u32, u64>> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once(':').ok_or_else(|| {
            Error::InvalidInput(format!("moduli table line {}: missing ':'", lineno + 1))
        })?;
        let k: u32 = k.trim().parse().map_err(|_| {
            Error::InvalidInput(format!("moduli table line {}: bad degree", lineno + 1))
        })?;
        let v = u64::from_str_radix(v.trim().trim_start_matches("0x"), 16).map_err(|_| {
            Error::InvalidInput(format!("moduli table line {}: bad hex modulus", lineno + 1))
        })?;
        out.insert(k, v);
    }
    Ok(out)
}

pub fn default_modulus(degree: u32) -> Result<u64> {
    let table = parse_moduli_table(MODULI_TABLE_TEXT)?;
    table
        .get(&degree)
        .copied()
        .ok_or(Error::DegreeUnsupported(degree))
}

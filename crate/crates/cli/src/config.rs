//! Experiment configuration: global flags, an optional key=value config
//! file, and the resolved-config hash embedded in every artifact.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone)]
pub struct CommonConfig {
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub tol: Option<f64>,
    pub threads: Option<usize>,
    pub seed: u64,
    pub svg: bool,
    /// key=value pairs from the config file; flags override these.
    pub file_values: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl CommonConfig {
    pub fn load_file(path: &Path) -> Result<BTreeMap<String, String>> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut kv = line.splitn(2, '=');
            let k = kv.next().unwrap_or("").trim();
            let v = kv
                .next()
                .with_context(|| format!("config line {}: expected key=value", lineno + 1))?
                .trim();
            map.insert(k.to_string(), v.to_string());
        }
        Ok(map)
    }
}

/// Hash of the fully resolved configuration (experiment name, all resolved
/// parameters, global options), reproducible across runs.
pub fn config_hash(experiment: &str, resolved: &BTreeMap<String, String>) -> String {
    let mut hasher = Sha256::new();
    hasher.update(experiment.as_bytes());
    hasher.update(b"\n");
    for (k, v) in resolved {
        hasher.update(k.as_bytes());
        hasher.update(b"=");
        hasher.update(v.as_bytes());
        hasher.update(b"\n");
    }
    let digest = hasher.finalize();
    digest[..6].iter().map(|b| format!("{b:02x}")).collect()
}

/// Parse a radii specification `start:end:count` (inclusive linear spacing)
/// or a comma list `r1,r2,...`.
pub fn parse_radii(spec: &str) -> Result<Vec<f64>> {
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        anyhow::ensure!(parts.len() == 3, "radii spec must be start:end:count");
        let a: f64 = parts[0].parse().context("bad radii start")?;
        let b: f64 = parts[1].parse().context("bad radii end")?;
        let n: usize = parts[2].parse().context("bad radii count")?;
        anyhow::ensure!(n >= 1, "radii count must be >= 1");
        if n == 1 {
            return Ok(vec![a]);
        }
        Ok((0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect())
    } else {
        spec.split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| anyhow::anyhow!("bad radius '{t}': {e}"))
            })
            .collect()
    }
}

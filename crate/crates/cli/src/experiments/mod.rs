//! The experiment registry: each subcommand is a strategy behind the
//! `Experiment` trait, registered by name and selected at runtime.

mod flow;
mod hyperbolic;
mod large_sphere;
mod small_sphere;
mod spectrum;
mod thm1;

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::ArgMatches;
use diraclab::harness::CheckRecord;
use diraclab::spectral::ConformalSphereMetric;

use crate::config::CommonConfig;

pub struct Outcome {
    pub records: Vec<CheckRecord>,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

pub struct RunContext<'a> {
    pub matches: &'a ArgMatches,
    pub common: &'a CommonConfig,
    pub experiment: &'static str,
}

impl<'a> RunContext<'a> {
    pub fn param(&self, key: &str) -> Option<String> {
        self.matches
            .get_one::<String>(key)
            .cloned()
            .or_else(|| self.common.file_values.get(key).cloned())
    }

    pub fn require(&self, key: &str) -> Result<String> {
        self.param(key)
            .ok_or_else(|| anyhow!("missing required parameter --{key} (or config key '{key}')"))
    }

    pub fn param_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.param(key) {
            Some(v) => v
                .parse()
                .map_err(|_| anyhow!("parameter '{key}'='{v}' is not a number")),
            None => Ok(default),
        }
    }

    pub fn param_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.param(key) {
            Some(v) => v
                .parse()
                .map_err(|_| anyhow!("parameter '{key}'='{v}' is not an integer")),
            None => Ok(default),
        }
    }

    /// Fully resolved parameter map for hashing.
    pub fn resolved(&self, keys: &[&str]) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        for &k in keys {
            if let Some(v) = self.param(k) {
                map.insert(k.to_string(), v);
            }
        }
        map.insert("seed".into(), self.common.seed.to_string());
        if let Some(t) = self.common.tol {
            map.insert("tol".into(), format!("{t}"));
        }
        map
    }

    pub fn equality_tol(&self) -> f64 {
        self.common.tol.unwrap_or(1e-6)
    }
}

pub trait Experiment: Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn args(&self) -> Vec<clap::Arg>;
    fn run(&self, ctx: &RunContext) -> Result<Outcome>;
}

/// All registered experiments.
pub fn registry() -> Vec<Box<dyn Experiment>> {
    vec![
        Box::new(spectrum::Spectrum),
        Box::new(thm1::Thm1),
        Box::new(large_sphere::LargeSphere),
        Box::new(small_sphere::SmallSphere),
        Box::new(flow::ShitamFlow),
        Box::new(hyperbolic::Hyperbolic),
    ]
}

pub fn arg(name: &'static str, help: &'static str) -> clap::Arg {
    clap::Arg::new(name).long(name).help(help).num_args(1)
}

/// Metric descriptors for the spectrum experiment: `round:r=1`,
/// `bump:amp=0.2,width=5,center=0.3`, `file:path=...`.
pub fn parse_metric(descriptor: &str) -> Result<ConformalSphereMetric> {
    let mut split = descriptor.splitn(2, ':');
    let name = split.next().unwrap_or("");
    let rest = split.next().unwrap_or("");
    let mut params = BTreeMap::new();
    for item in rest.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let mut kv = item.splitn(2, '=');
        let k = kv.next().unwrap_or("").trim().to_string();
        let v = kv
            .next()
            .ok_or_else(|| anyhow!("metric descriptor expects key=value, got '{item}'"))?
            .trim()
            .to_string();
        params.insert(k, v);
    }
    let get = |key: &str| -> Result<f64> {
        params
            .get(key)
            .ok_or_else(|| anyhow!("metric '{name}' needs parameter '{key}'"))?
            .parse()
            .map_err(|_| anyhow!("metric parameter '{key}' is not a number"))
    };
    match name {
        "round" => Ok(ConformalSphereMetric::round(get("r")?)),
        "bump" => Ok(ConformalSphereMetric::bump(
            get("amp")?,
            get("width")?,
            get("center")?,
        )),
        "file" => {
            let path = params
                .get("path")
                .ok_or_else(|| anyhow!("metric 'file' needs path=..."))?;
            let field = diraclab::io::read_field(std::path::Path::new(path))?;
            Ok(field.into_metric()?)
        }
        other => Err(anyhow!(
            "unknown metric '{other}' (known: round, bump, file)"
        )),
    }
}

/// Records serialized to a JSON array value.
pub fn records_json(records: &[CheckRecord]) -> serde_json::Value {
    serde_json::to_value(records).expect("records serialize")
}

/// Records as CSV rows.
pub fn records_rows(records: &[CheckRecord]) -> Vec<Vec<String>> {
    records
        .iter()
        .map(|r| {
            vec![
                r.id.clone(),
                r.inputs.clone(),
                crate::output::fmt_f64(r.lhs),
                crate::output::fmt_f64(r.rhs),
                crate::output::fmt_f64(r.slack),
                crate::output::fmt_f64(r.tolerance),
                format!("{:?}", r.verdict).to_lowercase(),
            ]
        })
        .collect()
}

pub const RECORD_HEADER: [&str; 7] = [
    "id",
    "inputs",
    "lhs",
    "rhs",
    "slack",
    "tolerance",
    "verdict",
];

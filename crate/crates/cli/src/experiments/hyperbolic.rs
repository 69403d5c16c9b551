//! `hyperbolic`: weighted eigenvalue bounds for surfaces embedded in
//! H^3(-kappa^2).

use anyhow::Result;

use diraclab::harness::{hyperbolic_checks, PipelineOptions};
use diraclab::surface::embed_in_hyperbolic;

use super::{arg, records_json, records_rows, Experiment, Outcome, RunContext, RECORD_HEADER};
use crate::config::config_hash;
use crate::output::{write_csv, write_json};

pub struct Hyperbolic;

impl Experiment for Hyperbolic {
    fn name(&self) -> &'static str {
        "hyperbolic"
    }
    fn about(&self) -> &'static str {
        "weighted eigenvalue and Minkowski-type bounds in hyperbolic space"
    }
    fn args(&self) -> Vec<clap::Arg> {
        vec![
            arg(
                "surface",
                "shape: hyp-geodesic-sphere:r=..,kappa=.. | sphere:r=.. | ellipsoid:a=..,c=..",
            ),
            arg(
                "kappa",
                "ambient curvature scale (used when the shape is Euclidean-styled)",
            ),
            arg("truncation", "Galerkin truncation degree L (default 16)"),
            arg("nodes", "surface grid nodes (default 128)"),
        ]
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome> {
        let desc = ctx.require("surface")?;
        let kappa = ctx.param_f64("kappa", 1.0)?;
        let nodes = ctx.param_usize("nodes", 128)?;
        let l = ctx.param_usize("truncation", 16)?;
        let surface = embed_in_hyperbolic(&desc, kappa, nodes)?;
        let opts = PipelineOptions {
            truncation: l,
            equality_tol: ctx.equality_tol(),
            ..Default::default()
        };
        let records = hyperbolic_checks(&surface, &opts)?;
        let hash = config_hash(
            ctx.experiment,
            &ctx.resolved(&["surface", "kappa", "truncation", "nodes"]),
        );
        let jpath = ctx.common.out_dir.join("hyperbolic-records.json");
        write_json(&jpath, &hash, records_json(&records))?;
        let mut files = vec![jpath];
        if ctx.common.format == crate::config::OutputFormat::Csv {
            let cpath = ctx.common.out_dir.join("hyperbolic-records.csv");
            write_csv(&cpath, &hash, &RECORD_HEADER, &records_rows(&records))?;
            files.push(cpath);
        }
        let summary = records
            .iter()
            .map(|r| format!("{}: {:?} (slack {:.3e})", r.id, r.verdict, r.slack))
            .collect::<Vec<_>>()
            .join("; ");
        Ok(Outcome {
            records,
            files,
            summary,
        })
    }
}

//! `thm1`: the Euclidean inequality suite (upper bound, Bar, Bar-Hijazi,
//! Minkowski) on a convex surface.

use anyhow::Result;

use diraclab::harness::{check_euclidean_suite, PipelineOptions};
use diraclab::surface::make_surface;

use super::{arg, records_json, records_rows, Experiment, Outcome, RunContext, RECORD_HEADER};
use crate::config::config_hash;
use crate::output::{write_csv, write_json};

pub struct Thm1;

impl Experiment for Thm1 {
    fn name(&self) -> &'static str {
        "thm1"
    }
    fn about(&self) -> &'static str {
        "mean-curvature upper bound and companion inequalities on a convex surface"
    }
    fn args(&self) -> Vec<clap::Arg> {
        vec![
            arg(
                "surface",
                "shape descriptor, e.g. sphere:r=1 or ellipsoid:a=1,c=1.2",
            ),
            arg("truncation", "Galerkin truncation degree L (default 16)"),
            arg("nodes", "surface grid nodes (default 128)"),
        ]
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome> {
        let desc = ctx.require("surface")?;
        let nodes = ctx.param_usize("nodes", 128)?;
        let l = ctx.param_usize("truncation", 16)?;
        let surface = make_surface(&desc, nodes)?;
        let opts = PipelineOptions {
            truncation: l,
            equality_tol: ctx.equality_tol(),
            ..Default::default()
        };
        let records = check_euclidean_suite(&surface, &opts)?;
        let hash = config_hash(
            ctx.experiment,
            &ctx.resolved(&["surface", "truncation", "nodes"]),
        );
        let jpath = ctx.common.out_dir.join("thm1-records.json");
        write_json(&jpath, &hash, records_json(&records))?;
        let mut files = vec![jpath];
        if ctx.common.format == crate::config::OutputFormat::Csv {
            let cpath = ctx.common.out_dir.join("thm1-records.csv");
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

//! `small-sphere`: the small geodesic-sphere expansion of the first Dirac
//! eigenvalue around an interior point.

use anyhow::{anyhow, Result};

use diraclab::ambient::{parse_chart, Point};
use diraclab::harness::{small_sphere_expansion, PipelineOptions, SmallSphereOptions};

use super::{arg, records_json, Experiment, Outcome, RunContext};
use crate::config::{config_hash, parse_radii};
use crate::output::{fmt_f64, write_csv, write_json};

pub struct SmallSphere;

impl Experiment for SmallSphere {
    fn name(&self) -> &'static str {
        "small-sphere"
    }
    fn about(&self) -> &'static str {
        "small geodesic-sphere expansion of the first Dirac eigenvalue"
    }
    fn args(&self) -> Vec<clap::Arg> {
        vec![
            arg(
                "chart",
                "chart descriptor: spaceform:k=1 | schwarzschild:m=1 | ...",
            ),
            arg("point", "expansion point 'x,y,z' (default 0,0,0)"),
            arg("radii", "radius list 'r1,r2,...' or 'start:end:count'"),
            arg("truncation", "Galerkin truncation degree L (default 8)"),
        ]
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome> {
        let chart = parse_chart(&ctx.require("chart")?)?;
        let radii = parse_radii(&ctx.require("radii")?)?;
        let point = match ctx.param("point") {
            Some(spec) => {
                let xs: Vec<f64> = spec
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse()
                            .map_err(|_| anyhow!("bad point component '{t}'"))
                    })
                    .collect::<Result<_>>()?;
                anyhow::ensure!(xs.len() == 3, "point needs three components");
                Point::new(xs[0], xs[1], xs[2])
            }
            None => Point::zeros(),
        };
        let l = ctx.param_usize("truncation", 8)?;
        let opts = SmallSphereOptions {
            pipeline: PipelineOptions {
                truncation: l,
                equality_tol: ctx.equality_tol(),
                ..Default::default()
            },
            ..Default::default()
        };
        let exp = small_sphere_expansion(chart.as_ref(), &point, &radii, &opts)?;
        let hash = config_hash(
            ctx.experiment,
            &ctx.resolved(&["chart", "point", "radii", "truncation"]),
        );
        let rows: Vec<Vec<String>> = exp
            .lambda_fit
            .radii
            .iter()
            .zip(&exp.lambda_fit.samples)
            .zip(&exp.defect_fit.samples)
            .map(|((r, l1), d)| vec![fmt_f64(*r), fmt_f64(*l1), fmt_f64(*d)])
            .collect();
        let cpath = ctx.common.out_dir.join("small-sphere-samples.csv");
        write_csv(&cpath, &hash, &["radius", "lambda1", "defect"], &rows)?;
        let jpath = ctx.common.out_dir.join("small-sphere-fit.json");
        write_json(
            &jpath,
            &hash,
            serde_json::json!({
                "lambda_fit": exp.lambda_fit,
                "defect_fit": exp.defect_fit,
                "scalar_curvature": exp.scalar_curvature,
                "l_combination": exp.l_combination,
                "traceless_ricci_norm2": exp.traceless_ricci_norm2,
                "records": records_json(&exp.records),
            }),
        )?;
        let summary = exp
            .records
            .iter()
            .map(|r| {
                format!(
                    "{}: {:?} (lhs {:.6}, rhs {:.6})",
                    r.id, r.verdict, r.lhs, r.rhs
                )
            })
            .collect::<Vec<_>>()
            .join("; ");
        Ok(Outcome {
            records: exp.records.clone(),
            files: vec![cpath, jpath],
            summary,
        })
    }
}

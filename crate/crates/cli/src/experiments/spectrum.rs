//! `spectrum`: Dirac spectra of conformal sphere metrics, truncation
//! sweeps, and the seeded random-bump property sweep.

use anyhow::{anyhow, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use diraclab::spectral::{
    axisymmetric_mode_spectrum, conformal_dirac_spectrum, ConformalSphereMetric, SolveOptions,
};

use super::{arg, parse_metric, records_json, records_rows, Experiment, Outcome, RunContext};
use crate::config::config_hash;
use crate::output::{convergence_table, fmt_f64, svg_loglog, write_csv, write_json};

pub struct Spectrum;

impl Experiment for Spectrum {
    fn name(&self) -> &'static str {
        "spectrum"
    }
    fn about(&self) -> &'static str {
        "Dirac spectrum of a conformal metric on the 2-sphere"
    }
    fn args(&self) -> Vec<clap::Arg> {
        vec![
            arg(
                "metric",
                "metric descriptor: round:r=1 | bump:amp=..,width=..,center=.. | file:path=..",
            ),
            arg(
                "truncation",
                "Galerkin truncation degree L (default 16 or the file header)",
            ),
            arg(
                "mode-m",
                "solve a single azimuthal block (doubled order, odd integer)",
            ),
            arg("sweep", "comma list of truncations for a convergence table"),
            arg(
                "random-bumps",
                "run the property sweep over N random bump metrics",
            ),
        ]
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome> {
        if ctx.param("random-bumps").is_some() {
            return random_bump_sweep(ctx);
        }
        let desc = ctx.require("metric")?;
        let metric = parse_metric(&desc)?;
        let l = ctx.param_usize("truncation", 16)?;
        let hash = config_hash(
            ctx.experiment,
            &ctx.resolved(&["metric", "truncation", "mode-m", "sweep"]),
        );
        let opts = SolveOptions::default();
        let mut files = Vec::new();
        let summary;
        if let Some(m_str) = ctx.param("mode-m") {
            let two_m: i32 = m_str
                .parse()
                .map_err(|_| anyhow!("mode-m must be an odd integer (doubled order)"))?;
            let evs = axisymmetric_mode_spectrum(&metric, two_m, l, &opts)?;
            let rows: Vec<Vec<String>> = evs
                .iter()
                .enumerate()
                .map(|(i, ev)| vec![i.to_string(), fmt_f64(*ev)])
                .collect();
            let path = ctx.common.out_dir.join("spectrum.csv");
            write_csv(&path, &hash, &["index", "eigenvalue"], &rows)?;
            files.push(path);
            summary = format!("block 2m={two_m}: {} eigenvalues", evs.len());
        } else {
            let res = conformal_dirac_spectrum(&metric, l, &opts)?;
            let rows: Vec<Vec<String>> = res
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(i, ev)| vec![i.to_string(), fmt_f64(*ev)])
                .collect();
            let path = ctx.common.out_dir.join("spectrum.csv");
            write_csv(&path, &hash, &["index", "eigenvalue"], &rows)?;
            files.push(path);
            let jpath = ctx.common.out_dir.join("spectrum-summary.json");
            write_json(
                &jpath,
                &hash,
                serde_json::json!({
                    "lambda1": res.lambda1,
                    "truncation": res.truncation,
                    "convergence_estimate": res.convergence_estimate,
                    "area": metric.area(),
                    "bar_hijazi_bound": diraclab::spectral::bar_hijazi_bound(metric.area()),
                    "eigenvalue_count": res.eigenvalues.len(),
                }),
            )?;
            files.push(jpath);
            summary = format!(
                "lambda1 = {:.12} at L = {} (convergence estimate {:.2e})",
                res.lambda1, res.truncation, res.convergence_estimate
            );
        }
        if let Some(sweep) = ctx.param("sweep") {
            let ls: Vec<usize> = sweep
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| anyhow!("bad sweep entry '{t}'"))
                })
                .collect::<Result<_>>()?;
            let single = SolveOptions {
                convergence_tol: f64::INFINITY,
                ..Default::default()
            };
            let mut series = Vec::new();
            for &lv in &ls {
                let res = conformal_dirac_spectrum(&metric, lv, &single)?;
                series.push((lv as f64, res.lambda1));
            }
            let table = convergence_table(&series)?;
            let path = ctx.common.out_dir.join("spectrum-convergence.csv");
            write_csv(&path, &hash, &["L", "lambda1", "order"], &table.rows())?;
            files.push(path);
            if ctx.common.svg {
                let best = series.last().unwrap().1;
                let errs: Vec<(f64, f64)> = series
                    .iter()
                    .map(|&(l, v)| (l, (v - best).abs().max(1e-17)))
                    .collect();
                let svg = svg_loglog(&[("lambda1 error", &errs)], "truncation convergence", &hash);
                let path = ctx.common.out_dir.join("spectrum-convergence.svg");
                crate::output::write_atomic(&path, svg.as_bytes())?;
                files.push(path);
            }
        }
        Ok(Outcome {
            records: Vec::new(),
            files,
            summary,
        })
    }
}

/// Seeded sweep: spectral symmetry, Bar-Hijazi, Gauss-Bonnet, rotation and
/// Moebius-gauge invariance over random axisymmetric bump metrics.
fn random_bump_sweep(ctx: &RunContext) -> Result<Outcome> {
    let n: usize = ctx.param_usize("random-bumps", 10)?;
    let hash = config_hash(
        ctx.experiment,
        &ctx.resolved(&["random-bumps", "truncation"]),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.common.seed);
    let mut records = Vec::new();
    for k in 0..n {
        let amp = rng.gen_range(-0.3..0.3);
        let width = rng.gen_range(2.0..8.0);
        let center = rng.gen_range(-0.5..0.5);
        let inputs = format!("bump #{k}: amp={amp:.4}, width={width:.3}, center={center:.4}");
        let metric = ConformalSphereMetric::bump(amp, width, center);
        records.extend(diraclab::harness::metric_property_records(
            &metric, &inputs,
        )?);
    }
    let path = ctx.common.out_dir.join("property-sweep.json");
    write_json(&path, &hash, records_json(&records))?;
    let csv_path = ctx.common.out_dir.join("property-sweep.csv");
    write_csv(
        &csv_path,
        &hash,
        &super::RECORD_HEADER,
        &records_rows(&records),
    )?;
    let holds = records.iter().filter(|r| r.ok()).count();
    Ok(Outcome {
        summary: format!("{holds}/{} property records hold", records.len()),
        records,
        files: vec![path, csv_path],
    })
}

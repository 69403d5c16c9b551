//! `shitam-flow`: the quasi-spherical flow on the exterior of a convex
//! surface, its trajectory log, and the upper-bound certificate.

use anyhow::{anyhow, Result};

use diraclab::flow::{
    run_flow, theorem1_certificate, trajectory_residual, ExteriorFoliation, FlowOptions,
    InitialData, ResidualOptions,
};
use diraclab::harness::{surface_lambda1, CheckRecord, PipelineOptions};
use diraclab::surface::make_surface;

use super::{arg, Experiment, Outcome, RunContext};
use crate::config::config_hash;
use crate::output::{fmt_f64, write_csv, write_json};

pub struct ShitamFlow;

impl Experiment for ShitamFlow {
    fn name(&self) -> &'static str {
        "shitam-flow"
    }
    fn about(&self) -> &'static str {
        "scalar-flat quasi-spherical flow and its monotone mass functional"
    }
    fn args(&self) -> Vec<clap::Arg> {
        vec![
            arg("surface", "convex shape descriptor, e.g. sphere:r=2"),
            arg(
                "u0",
                "initial data: const:<value> | spectral (H0 / (2 lambda1))",
            ),
            arg("rho-max", "march distance (default 50 x surface diameter)"),
            arg("nodes", "surface grid nodes (default 48)"),
            arg("step-tol", "local step error target (default 1e-8)"),
            arg("truncation", "Galerkin degree for u0=spectral (default 16)"),
        ]
    }

    fn run(&self, ctx: &RunContext) -> Result<Outcome> {
        let desc = ctx.require("surface")?;
        let nodes = ctx.param_usize("nodes", 48)?;
        let surface = make_surface(&desc, nodes)?;
        let u0_spec = ctx.param("u0").unwrap_or_else(|| "const:1".to_string());
        let initial = if let Some(rest) = u0_spec.strip_prefix("const:") {
            InitialData::Const(
                rest.parse()
                    .map_err(|_| anyhow!("bad constant initial data '{rest}'"))?,
            )
        } else if u0_spec == "spectral" {
            let l = ctx.param_usize("truncation", 16)?;
            let (spec, _) = surface_lambda1(
                &surface,
                &PipelineOptions {
                    truncation: l,
                    ..Default::default()
                },
            )?;
            InitialData::MeanCurvatureOverTwoLambda1(spec.lambda1)
        } else {
            return Err(anyhow!("u0 must be const:<value> or spectral"));
        };
        let mut flow_opts = FlowOptions {
            step_tol: ctx.param_f64("step-tol", 1e-8)?,
            ..Default::default()
        };
        if let Some(rm) = ctx.param("rho-max") {
            flow_opts.rho_max = Some(rm.parse().map_err(|_| anyhow!("bad rho-max '{rm}'"))?);
        }
        let traj = run_flow(&surface, initial, &flow_opts)?;
        let hash = config_hash(
            ctx.experiment,
            &ctx.resolved(&[
                "surface",
                "u0",
                "rho-max",
                "nodes",
                "step-tol",
                "truncation",
            ]),
        );
        // trajectory CSV: thin the states, attach interior residual probes
        let fol = ExteriorFoliation::new(&surface)?;
        let n_states = traj.states.len();
        let stride = (n_states / 200).max(1);
        let u_interp = traj.interpolate(&fol);
        let res_opts = ResidualOptions::default();
        let mut rows = Vec::new();
        for (k, s) in traj.states.iter().enumerate() {
            if k % stride != 0 && k != n_states - 1 {
                continue;
            }
            let min_u = s.u.iter().cloned().fold(f64::INFINITY, f64::min);
            let max_u = s.u.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let interior = k >= 3 && k + 3 < n_states && s.rho < 0.6 * traj.rho_max;
            let residual = if interior && s.rho > 0.02 * traj.rho_max {
                let probes = [(s.rho, -0.5), (s.rho, 0.0), (s.rho, 0.5)];
                diraclab::flow::pde_residual(&fol, &u_interp, &probes, &res_opts)
                    .unwrap_or(f64::NAN)
            } else {
                f64::NAN
            };
            rows.push(vec![
                fmt_f64(s.rho),
                fmt_f64(min_u),
                fmt_f64(max_u),
                fmt_f64(s.q),
                fmt_f64(residual),
            ]);
        }
        let cpath = ctx.common.out_dir.join("flow-trajectory.csv");
        write_csv(
            &cpath,
            &hash,
            &["rho", "min_u", "max_u", "Q", "residual"],
            &rows,
        )?;
        let mut files = vec![cpath];
        let max_residual = trajectory_residual(&fol, &traj, &res_opts)?;
        let mut records = vec![CheckRecord::evaluate(
            "flow-monotonicity",
            &desc,
            traj.monotone_defect.max(0.0),
            1e-8,
            0.0,
            "largest upward step of Q",
            "tolerance",
        )];
        let summary;
        if matches!(traj.initial, InitialData::MeanCurvatureOverTwoLambda1(_)) {
            let cert = theorem1_certificate(&surface, &traj)?;
            records.push(CheckRecord::evaluate(
                "upper-bound",
                &desc,
                cert.thm1_lhs,
                cert.thm1_rhs,
                ctx.equality_tol() * cert.thm1_rhs.abs(),
                "lambda1",
                "total mean curvature / (2 area)",
            ));
            records.push(CheckRecord::evaluate(
                "mass-nonnegative",
                &desc,
                0.0,
                cert.mass,
                1e-6,
                "zero",
                "flow mass estimate",
            ));
            summary = format!(
                "mass = {:.8}, Q0 = {:.8}, slack = {:.3e}, residual <= {:.3e}",
                cert.mass, cert.q0, cert.slack, max_residual
            );
            let jpath = ctx.common.out_dir.join("flow-certificate.json");
            write_json(
                &jpath,
                &hash,
                serde_json::json!({
                    "certificate": cert,
                    "max_residual": max_residual,
                }),
            )?;
            files.push(jpath);
        } else {
            summary = format!(
                "mass = {:.8}, Q0 = {:.8}, residual <= {:.3e}",
                traj.mass, traj.q0, max_residual
            );
            let jpath = ctx.common.out_dir.join("flow-summary.json");
            write_json(
                &jpath,
                &hash,
                serde_json::json!({
                    "mass": traj.mass,
                    "Q0": traj.q0,
                    "rho_max": traj.rho_max,
                    "steps": traj.states.len(),
                    "max_residual": max_residual,
                    "monotone_defect": traj.monotone_defect,
                }),
            )?;
            files.push(jpath);
        }
        Ok(Outcome {
            records,
            files,
            summary,
        })
    }
}

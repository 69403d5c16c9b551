//! Certificate of the mean-curvature upper bound through the flow: the
//! chain Q(0) = int H0 - 2 lambda1 |Sigma| >= Q(rho) >= 8 pi m >= 0, with
//! the boundary mean curvature of g_u pinned at 2 lambda1 by the choice of
//! initial data.

use serde::Serialize;

use super::{FlowTrajectory, InitialData};
use crate::error::{Error, Result};
use crate::surface::EmbeddedSurface;

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Certificate {
    pub lambda1: f64,
    pub total_mean_curvature: f64,
    pub area: f64,
    pub thm1_lhs: f64,
    pub thm1_rhs: f64,
    pub slack: f64,
    #[serde(rename = "Q0")]
    pub q0: f64,
    pub mass: f64,
    #[serde(rename = "herzlich_H_over_2")]
    pub herzlich_h_over_2: f64,
    /// Worst upward drift of Q along the trajectory (round-off scale when
    /// the run is consistent).
    pub monotone_defect: f64,
    /// min over the trajectory of Q(rho) - 8 pi mass.
    pub min_q_minus_mass_term: f64,
}

/// Assemble the certificate for a flow started from u0 = H0 / (2 lambda1).
pub fn theorem1_certificate(
    base: &EmbeddedSurface,
    trajectory: &FlowTrajectory,
) -> Result<Theorem1Certificate> {
    let lambda1 = match trajectory.initial {
        InitialData::MeanCurvatureOverTwoLambda1(l) => l,
        _ => {
            return Err(Error::Precondition(
                "certificate requires the flow started from H0 / (2 lambda1)".into(),
            ))
        }
    };
    let total_mean_curvature = base.total_mean_curvature();
    let area = base.area;
    let thm1_rhs = total_mean_curvature / (2.0 * area);
    let mass_term = 8.0 * std::f64::consts::PI * trajectory.mass;
    let min_q_minus = trajectory
        .states
        .iter()
        .map(|s| s.q - mass_term)
        .fold(f64::INFINITY, f64::min);
    // boundary mean curvature of g_u is H0 / u0 = 2 lambda1 by construction
    let herzlich = lambda1;
    Ok(Theorem1Certificate {
        lambda1,
        total_mean_curvature,
        area,
        thm1_lhs: lambda1,
        thm1_rhs,
        slack: thm1_rhs - lambda1,
        q0: trajectory.q0,
        mass: trajectory.mass,
        herzlich_h_over_2: herzlich,
        monotone_defect: trajectory.monotone_defect,
        min_q_minus_mass_term: min_q_minus,
    })
}

//! Independent validation of the flow: the scalar curvature of
//! g_u = u^2 drho^2 + gamma_rho evaluated by finite differences of the
//! metric components on the (rho, tau) product grid, never through the
//! marched equation itself.

use nalgebra::Matrix3;

use super::{ExteriorFoliation, FlowTrajectory};
use crate::ambient::{Mat3, MetricDerivatives};
use crate::error::{Error, Result};
use crate::numerics::Barycentric;

#[derive(Debug, Clone)]
pub struct ResidualOptions {
    /// Finite-difference step in rho (scaled by 1 + rho).
    pub step_rho: f64,
    /// Finite-difference step in tau.
    pub step_tau: f64,
    pub n_probe_rho: usize,
    pub n_probe_tau: usize,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            step_rho: 5e-3,
            step_tau: 5e-3,
            n_probe_rho: 8,
            n_probe_tau: 12,
        }
    }
}

struct QsMetric<'a> {
    fol: &'a ExteriorFoliation,
    u: &'a dyn Fn(f64, f64) -> f64,
    f_bary: Barycentric,
}

impl<'a> QsMetric<'a> {
    fn new(fol: &'a ExteriorFoliation, u: &'a dyn Fn(f64, f64) -> f64) -> Self {
        Self {
            fol,
            u,
            f_bary: Barycentric::new(&fol.x),
        }
    }

    /// Metric components diag(u^2, f_rho^2, h_rho^2) at (rho, tau).
    fn metric(&self, rho: f64, tau: f64) -> Mat3 {
        let x = tau.cos();
        let f0 = self.f_bary.eval(&self.fol.f0, x);
        let ht0 = self.f_bary.eval(&self.fol.h_tilde0, x);
        let k1 = self.f_bary.eval(&self.fol.kappa1, x);
        let k2 = self.f_bary.eval(&self.fol.kappa2, x);
        let f = f0 * (1.0 + rho * k1);
        let h = ht0 * (1.0 + rho * k2) * tau.sin();
        let uu = (self.u)(rho, x);
        Matrix3::from_diagonal(&nalgebra::Vector3::new(uu * uu, f * f, h * h))
    }
}

/// Max |R(g_u)| over a probe set of (rho, x = cos tau) points.
///
/// `u` is a function of (rho, x); probes should avoid the first and last
/// trajectory steps when u is an interpolant.
pub fn pde_residual(
    fol: &ExteriorFoliation,
    u: &dyn Fn(f64, f64) -> f64,
    probes: &[(f64, f64)],
    opts: &ResidualOptions,
) -> Result<f64> {
    let qs = QsMetric::new(fol, u);
    let mut worst = 0.0f64;
    for &(rho, x) in probes {
        let tau = x.clamp(-0.999, 0.999).acos();
        let r = scalar_curvature_fd(&qs, rho, tau, opts)?;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Residual of a marched trajectory at interior probe points.
pub fn trajectory_residual(
    fol: &ExteriorFoliation,
    traj: &FlowTrajectory,
    opts: &ResidualOptions,
) -> Result<f64> {
    let u = traj.interpolate(fol);
    let rho_lo = 0.05 * traj.rho_max;
    let rho_hi = 0.60 * traj.rho_max;
    let mut probes = Vec::new();
    for i in 0..opts.n_probe_rho {
        let rho = rho_lo + (rho_hi - rho_lo) * i as f64 / (opts.n_probe_rho - 1).max(1) as f64;
        for j in 0..opts.n_probe_tau {
            let x = -0.92 + 1.84 * j as f64 / (opts.n_probe_tau - 1).max(1) as f64;
            probes.push((rho, x));
        }
    }
    pde_residual(fol, &u, &probes, opts)
}

/// Scalar curvature of the diagonal, phi-independent metric at (rho, tau) by
/// per-axis 4th-order differences of the components.
fn scalar_curvature_fd(qs: &QsMetric, rho: f64, tau: f64, opts: &ResidualOptions) -> Result<f64> {
    let hr = opts.step_rho * (1.0 + rho);
    let ht = opts.step_tau;
    let g = |dr: f64, dt: f64| qs.metric(rho + dr, tau + dt);
    let g0 = g(0.0, 0.0);
    let d4 = |f: &dyn Fn(f64) -> Mat3, h: f64| {
        (8.0 * (f(h) - f(-h)) - (f(2.0 * h) - f(-2.0 * h))) / (12.0 * h)
    };
    let dd4 = |f: &dyn Fn(f64) -> Mat3, h: f64| {
        (-f(2.0 * h) + 16.0 * f(h) - 30.0 * g0 + 16.0 * f(-h) - f(-2.0 * h)) / (12.0 * h * h)
    };
    let along_r = |s: f64| g(s, 0.0);
    let along_t = |s: f64| g(0.0, s);
    let first_r = d4(&along_r, hr);
    let first_t = d4(&along_t, ht);
    let second_rr = dd4(&along_r, hr);
    let second_tt = dd4(&along_t, ht);
    // mixed rho-tau by nested first differences
    let first_t_at = |dr: f64| {
        let f = |s: f64| g(dr, s);
        d4(&f, ht)
    };
    let fmix = |s: f64| first_t_at(s);
    let second_rt = d4(&fmix, hr);
    let zero = Mat3::zeros();
    let der = MetricDerivatives {
        first: [first_r, first_t, zero],
        second: [
            [second_rr, second_rt, zero],
            [second_rt, second_tt, zero],
            [zero, zero, zero],
        ],
    };
    crate::ambient::scalar_from_parts(&g0, &der)
        .ok_or_else(|| Error::Numerical("degenerate quasi-spherical metric".into()))
}

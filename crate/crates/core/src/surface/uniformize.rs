//! Conformal uniformization of axisymmetric surface metrics over the round
//! sphere via isothermal (Mercator) coordinates.
//!
//! With ds = (f/h) dtau the induced metric becomes h(s)^2 (ds^2 + dphi^2);
//! matching against the round metric in Mercator form gives
//! e^{2u} = h^2 cosh^2(s - s0). The gauge fixes the surface equator
//! tau = pi/2 to s = 0; a nonzero gauge offset reproduces the Moebius
//! translation freedom.

use std::sync::Arc;

use super::EmbeddedSurface;
use crate::error::{Error, Result};
use crate::numerics::{adaptive_simpson, gauss_legendre, Barycentric};
use crate::spectral::{ConformalSphereMetric, SampledField};

#[derive(Debug, Clone)]
pub struct UniformizationOptions {
    /// Translation gauge in the isothermal coordinate.
    pub gauge_offset: f64,
    /// Node count of the produced conformal factor.
    pub resolution: usize,
}

impl Default for UniformizationOptions {
    fn default() -> Self {
        Self {
            gauge_offset: 0.0,
            resolution: 160,
        }
    }
}

#[derive(Debug, Clone)]
pub struct UniformizationResult {
    pub metric: ConformalSphereMetric,
    pub gauge_offset: f64,
    /// |area(e^{2u} g_round) - area(surface)|.
    pub area_mismatch: f64,
    /// Max mismatch between the metric Gauss curvature and the surface
    /// intrinsic curvature pulled back through the coordinate change.
    pub curvature_mismatch: f64,
}

/// Cumulative isothermal coordinate evaluated through the Mercator variable
/// of the parameter: s(t) = int_0^t (f/h_tilde)(x(t')) dt', x(t) = -tanh(t).
struct IsothermalMap {
    node_t: Vec<f64>,
    node_s: Vec<f64>,
    integrand: Arc<dyn Fn(f64) -> f64>,
}

impl IsothermalMap {
    fn new(x_nodes: &[f64], f: &[f64], h_tilde: &[f64]) -> Self {
        let bary = Barycentric::new(x_nodes);
        let g: Vec<f64> = f.iter().zip(h_tilde).map(|(&f, &h)| f / h).collect();
        let bary = Arc::new(bary);
        let gv = Arc::new(g);
        let integrand: Arc<dyn Fn(f64) -> f64> = {
            let bary = bary.clone();
            let gv = gv.clone();
            Arc::new(move |t: f64| bary.eval(&gv, -t.tanh()))
        };
        // t at the surface nodes, ascending in t (x descending)
        let mut node_t: Vec<f64> = x_nodes
            .iter()
            .rev()
            .map(|&x| -x.clamp(-1.0 + 1e-16, 1.0 - 1e-16).atanh())
            .collect();
        // cumulative integral from t = 0 outward in both directions
        let mut node_s = vec![0.0; node_t.len()];
        let zero_idx = node_t.partition_point(|&t| t < 0.0);
        let mut acc = 0.0;
        let mut prev = 0.0;
        for i in zero_idx..node_t.len() {
            acc += adaptive_simpson(&|t| integrand(t), prev, node_t[i], 1e-13);
            node_s[i] = acc;
            prev = node_t[i];
        }
        acc = 0.0;
        prev = 0.0;
        for i in (0..zero_idx).rev() {
            acc += adaptive_simpson(&|t| integrand(t), prev, node_t[i], 1e-13);
            node_s[i] = acc;
            prev = node_t[i];
        }
        node_t.shrink_to_fit();
        Self {
            node_t,
            node_s,
            integrand,
        }
    }

    fn s_of_t(&self, t: f64) -> f64 {
        let i = self.node_t.partition_point(|&v| v < t);
        let (t0, s0) = if i == 0 {
            (self.node_t[0], self.node_s[0])
        } else {
            (self.node_t[i - 1], self.node_s[i - 1])
        };
        s0 + adaptive_simpson(&|x| (self.integrand)(x), t0, t, 1e-13)
    }

    /// Invert s(t) = target by bracketed bisection with a Newton polish.
    fn t_of_s(&self, target: f64) -> f64 {
        let mut lo = self.node_t[0].min(target) - 1.0;
        let mut hi = self.node_t[self.node_t.len() - 1].max(target) + 1.0;
        while self.s_of_t(lo) > target {
            lo -= 2.0;
        }
        while self.s_of_t(hi) < target {
            hi += 2.0;
        }
        for _ in 0..70 {
            let mid = 0.5 * (lo + hi);
            if self.s_of_t(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 * (1.0 + hi.abs()) {
                break;
            }
        }
        let mut t = 0.5 * (lo + hi);
        for _ in 0..4 {
            let ds = self.s_of_t(t) - target;
            let slope = (self.integrand)(t);
            if slope <= 0.0 {
                break;
            }
            t -= ds / slope;
        }
        t
    }
}

/// Uniformize with the default equator gauge.
pub fn uniformize_axisymmetric(
    surface: &EmbeddedSurface,
    opts: &UniformizationOptions,
) -> Result<UniformizationResult> {
    uniformize_parts(
        &surface.x,
        &surface.f,
        &surface.h_tilde,
        Some(&surface.intrinsic_gauss_curvature()),
        surface.area,
        opts,
    )
}

/// Uniformize with an explicit gauge offset.
pub fn uniformize_with_gauge(
    surface: &EmbeddedSurface,
    gauge_offset: f64,
    resolution: usize,
) -> Result<UniformizationResult> {
    uniformize_axisymmetric(
        surface,
        &UniformizationOptions {
            gauge_offset,
            resolution,
        },
    )
}

/// Core engine over raw induced-metric samples gamma = f^2 dtau^2 +
/// (h_tilde sin tau)^2 dphi^2 on a Gauss-Legendre grid in cos(tau).
pub fn uniformize_parts(
    x_nodes: &[f64],
    f: &[f64],
    h_tilde: &[f64],
    intrinsic_k: Option<&[f64]>,
    reference_area: f64,
    opts: &UniformizationOptions,
) -> Result<UniformizationResult> {
    if f.iter().chain(h_tilde.iter()).any(|&v| !(v > 0.0)) {
        return Err(Error::Geometry(
            "degenerate induced metric (pinched profile)".into(),
        ));
    }
    let map = IsothermalMap::new(x_nodes, f, h_tilde);
    let ht_bary = Barycentric::new(x_nodes);
    let n_out = opts.resolution.max(16);
    let (x_out, _) = gauss_legendre(n_out);
    let mut u = vec![0.0; n_out];
    let mut surf_x = vec![0.0; n_out];
    for (j, &xr) in x_out.iter().enumerate() {
        // round Mercator coordinate of the output node
        let t_round = -xr.clamp(-1.0 + 1e-16, 1.0 - 1e-16).atanh();
        let t_surf = map.t_of_s(t_round + opts.gauge_offset);
        let x_surf = -t_surf.tanh();
        let ht = ht_bary.eval(h_tilde, x_surf);
        // u = ln( h(tau*) cosh(t_round) ), h = h_tilde sech(t_surf)
        u[j] = ht.ln() - t_surf.cosh().ln() + t_round.cosh().ln();
        surf_x[j] = x_surf;
    }
    let field = SampledField::new(x_out.clone(), u, 1, true)?;
    let metric = ConformalSphereMetric::from_samples(field);
    let area_mismatch = (metric.area() - reference_area).abs();
    let curvature_mismatch = match intrinsic_k {
        Some(k) => {
            let k_bary = Barycentric::new(x_nodes);
            let k_metric = metric.gauss_curvature_axisym(&x_out)?;
            let mut worst = 0.0f64;
            for j in 0..n_out {
                let k_surface = k_bary.eval(k, surf_x[j]);
                worst = worst.max((k_metric[j] - k_surface).abs());
            }
            worst
        }
        None => f64::NAN,
    };
    Ok(UniformizationResult {
        metric,
        gauge_offset: opts.gauge_offset,
        area_mismatch,
        curvature_mismatch,
    })
}

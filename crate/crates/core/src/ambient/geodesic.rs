//! Geodesic spheres by exponential-map shooting with Jacobi fields.
//!
//! Each direction integrates the geodesic equation together with two Jacobi
//! fields (the angular coordinate variations), so the induced metric and the
//! mean curvature H = gamma^{ab} <nabla_T J_a, J_b> come from the same
//! integration, with no finite differencing of the exponential map.

use nalgebra::Matrix2;
use rayon::prelude::*;

use super::curvature::{christoffels_at, jacobi_curvature_term};
use super::{Chart, Point};
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereKind {
    Geodesic,
    Coordinate,
}

#[derive(Debug, Clone)]
pub struct GeodesicSphereSample {
    pub kind: SphereKind,
    pub center: Point,
    pub radius: f64,
    /// Direction grid: Gauss-Legendre in cos(theta) x uniform azimuth.
    pub x_dir: Vec<f64>,
    pub w_dir: Vec<f64>,
    pub phi_dir: Vec<f64>,
    /// Induced metric per node: [gamma_tt, gamma_tp, gamma_pp], theta-major.
    pub gamma: Vec<[f64; 3]>,
    pub mean_curvature: Vec<f64>,
    pub area: f64,
    pub total_mean_curvature: f64,
    /// min over the grid of det(gamma) / (r^4 sin^2 theta).
    pub min_jacobi_ratio: f64,
    /// (1/2) int g_r^{ij} sigma_ij dS_r, for coordinate spheres when the
    /// chart exposes sigma.
    pub beta: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct GeodesicOptions {
    pub n_dir_theta: usize,
    pub n_dir_phi: usize,
    pub steps: usize,
    /// Jacobi determinant floor (relative to r^4 sin^2 theta).
    pub jacobi_floor: f64,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self {
            n_dir_theta: 24,
            n_dir_phi: 49,
            steps: 256,
            jacobi_floor: 1e-8,
        }
    }
}

/// Orthonormal frame at p by Gram-Schmidt of the coordinate basis.
fn orthonormal_frame(chart: &dyn Chart, p: &Point) -> Result<[Point; 3]> {
    let g = chart.metric(p);
    let dot = |a: &Point, b: &Point| (a.transpose() * g * b)[(0, 0)];
    let mut frame = [
        Point::new(1.0, 0.0, 0.0),
        Point::new(0.0, 1.0, 0.0),
        Point::new(0.0, 0.0, 1.0),
    ];
    for i in 0..3 {
        let mut v = frame[i];
        for j in 0..i {
            let fj = frame[j];
            v -= fj * dot(&frame[i], &fj);
        }
        let n = dot(&v, &v);
        if !(n > 0.0) {
            return Err(Error::Numerical("degenerate metric at center".into()));
        }
        frame[i] = v / n.sqrt();
    }
    Ok(frame)
}

/// State: geodesic position/velocity plus two Jacobi fields and their
/// covariant derivatives, 18 components.
#[derive(Debug, Clone, Copy)]
struct RayState {
    x: Point,
    t: Point,
    j: [Point; 2],
    w: [Point; 2],
}

impl RayState {
    fn axpy(&self, h: f64, d: &RayState) -> RayState {
        RayState {
            x: self.x + d.x * h,
            t: self.t + d.t * h,
            j: [self.j[0] + d.j[0] * h, self.j[1] + d.j[1] * h],
            w: [self.w[0] + d.w[0] * h, self.w[1] + d.w[1] * h],
        }
    }
}

fn rhs(chart: &dyn Chart, s: &RayState, h_fd: f64) -> Result<RayState> {
    let gamma = christoffels_at(chart, &s.x, h_fd)?;
    let quad = |a: &Point, b: &Point| {
        let mut out = Point::zeros();
        for k in 0..3 {
            let mut acc = 0.0;
            for i in 0..3 {
                for j in 0..3 {
                    acc += gamma[k][i][j] * a[i] * b[j];
                }
            }
            out[k] = acc;
        }
        out
    };
    let dt = -quad(&s.t, &s.t);
    let mut dj = [Point::zeros(); 2];
    let mut dw = [Point::zeros(); 2];
    for a in 0..2 {
        dj[a] = s.w[a] - quad(&s.t, &s.j[a]);
        let curv = jacobi_curvature_term(chart, &s.x, &s.j[a], &s.t, h_fd)?;
        dw[a] = -curv - quad(&s.t, &s.w[a]);
    }
    Ok(RayState {
        x: s.t,
        t: dt,
        j: dj,
        w: dw,
    })
}

fn rk4_step(chart: &dyn Chart, s: &RayState, h: f64, h_fd: f64) -> Result<RayState> {
    let k1 = rhs(chart, s, h_fd)?;
    let k2 = rhs(chart, &s.axpy(0.5 * h, &k1), h_fd)?;
    let k3 = rhs(chart, &s.axpy(0.5 * h, &k2), h_fd)?;
    let k4 = rhs(chart, &s.axpy(h, &k3), h_fd)?;
    let mut out = s.axpy(h / 6.0, &k1);
    out = out.axpy(h / 3.0, &k2);
    out = out.axpy(h / 3.0, &k3);
    out = out.axpy(h / 6.0, &k4);
    Ok(out)
}

/// Integrate one direction to arc length r; returns the end state.
fn shoot(
    chart: &dyn Chart,
    p: &Point,
    v: &Point,
    dv_theta: &Point,
    dv_phi: &Point,
    r: f64,
    steps: usize,
) -> Result<RayState> {
    let mut s = RayState {
        x: *p,
        t: *v,
        j: [Point::zeros(), Point::zeros()],
        w: [*dv_theta, *dv_phi],
    };
    let h = r / steps as f64;
    let h_fd = 1e-3 * (1.0 + p.norm());
    for _ in 0..steps {
        if !chart.domain_contains(&s.x) {
            return Err(Error::Domain(format!(
                "geodesic left the chart domain at {:?}",
                s.x
            )));
        }
        s = rk4_step(chart, &s, h, h_fd)?;
    }
    Ok(s)
}

/// Sample the geodesic sphere exp_p(r S^2) on a direction grid.
pub fn geodesic_sphere(
    chart: &dyn Chart,
    center: &Point,
    r: f64,
    opts: &GeodesicOptions,
) -> Result<GeodesicSphereSample> {
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    if !chart.domain_contains(center) {
        return Err(Error::Domain("center outside chart domain".into()));
    }
    let frame = orthonormal_frame(chart, center)?;
    let (x_dir, w_dir) = gauss_legendre(opts.n_dir_theta);
    let n_phi = opts.n_dir_phi;
    let phi_dir: Vec<f64> = (0..n_phi)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64)
        .collect();
    let nodes: Vec<(usize, usize)> = (0..opts.n_dir_theta)
        .flat_map(|i| (0..n_phi).map(move |q| (i, q)))
        .collect();
    let ends: Vec<Result<RayState>> = nodes
        .par_iter()
        .map(|&(i, q)| {
            let ct = x_dir[i];
            let st = (1.0 - ct * ct).sqrt();
            let (cp, sp) = (phi_dir[q].cos(), phi_dir[q].sin());
            let v = frame[0] * (st * cp) + frame[1] * (st * sp) + frame[2] * ct;
            let dv_t = frame[0] * (ct * cp) + frame[1] * (ct * sp) - frame[2] * st;
            let dv_p = frame[0] * (-st * sp) + frame[1] * (st * cp);
            shoot(chart, center, &v, &dv_t, &dv_p, r, opts.steps)
        })
        .collect();
    let mut gamma = Vec::with_capacity(nodes.len());
    let mut mean_curvature = Vec::with_capacity(nodes.len());
    let mut min_ratio = f64::INFINITY;
    for (idx, end) in ends.into_iter().enumerate() {
        let s = end?;
        let (i, _) = nodes[idx];
        let g = chart.metric(&s.x);
        let dot = |a: &Point, b: &Point| (a.transpose() * g * b)[(0, 0)];
        let gtt = dot(&s.j[0], &s.j[0]);
        let gtp = dot(&s.j[0], &s.j[1]);
        let gpp = dot(&s.j[1], &s.j[1]);
        let det = gtt * gpp - gtp * gtp;
        let st2 = (1.0 - x_dir[i] * x_dir[i]).max(1e-300);
        let ratio = det / (r.powi(4) * st2);
        min_ratio = min_ratio.min(ratio);
        if det <= 0.0 || ratio < opts.jacobi_floor {
            return Err(Error::RadiusTooLarge(format!(
                "Jacobi determinant ratio {ratio:.3e} at r = {r} (conjugate point)"
            )));
        }
        // H = gamma^{ab} <W_a, J_b>, symmetrized
        let m = Matrix2::new(gtt, gtp, gtp, gpp);
        let minv = m
            .try_inverse()
            .ok_or_else(|| Error::RadiusTooLarge("degenerate induced metric".into()))?;
        let b = Matrix2::new(
            dot(&s.w[0], &s.j[0]),
            0.5 * (dot(&s.w[0], &s.j[1]) + dot(&s.w[1], &s.j[0])),
            0.5 * (dot(&s.w[0], &s.j[1]) + dot(&s.w[1], &s.j[0])),
            dot(&s.w[1], &s.j[1]),
        );
        let h = (minv * b).trace();
        gamma.push([gtt, gtp, gpp]);
        mean_curvature.push(h);
    }
    let (area, total_h) = integrate_sphere(&x_dir, &w_dir, n_phi, &gamma, &mean_curvature);
    Ok(GeodesicSphereSample {
        kind: SphereKind::Geodesic,
        center: *center,
        radius: r,
        x_dir,
        w_dir,
        phi_dir,
        gamma,
        mean_curvature,
        area,
        total_mean_curvature: total_h,
        min_jacobi_ratio: min_ratio,
        beta: None,
    })
}

pub(crate) fn integrate_sphere(
    x_dir: &[f64],
    w_dir: &[f64],
    n_phi: usize,
    gamma: &[[f64; 3]],
    h: &[f64],
) -> (f64, f64) {
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let mut area = 0.0;
    let mut total = 0.0;
    for i in 0..x_dir.len() {
        let st = (1.0 - x_dir[i] * x_dir[i]).max(1e-300).sqrt();
        for q in 0..n_phi {
            let idx = i * n_phi + q;
            let det = (gamma[idx][0] * gamma[idx][2] - gamma[idx][1] * gamma[idx][1]).max(0.0);
            let da = w_dir[i] * dphi * det.sqrt() / st;
            area += da;
            total += h[idx] * da;
        }
    }
    (area, total)
}

impl GeodesicSphereSample {
    /// Axisymmetric reduction (f, h_tilde) of the induced metric for
    /// uniformization; errors when the sample is visibly anisotropic in phi.
    pub fn axisym_profile(&self) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
        let np = self.phi_dir.len();
        let scale = self.radius * self.radius;
        let mut f = Vec::with_capacity(self.x_dir.len());
        let mut h_tilde = Vec::with_capacity(self.x_dir.len());
        for i in 0..self.x_dir.len() {
            let st = (1.0 - self.x_dir[i] * self.x_dir[i]).max(1e-300).sqrt();
            let mut tt = 0.0;
            let mut pp = 0.0;
            let mut worst_cross: f64 = 0.0;
            let mut tt_min = f64::INFINITY;
            let mut tt_max = f64::NEG_INFINITY;
            for q in 0..np {
                let gam = self.gamma[i * np + q];
                tt += gam[0];
                pp += gam[2];
                worst_cross = worst_cross.max(gam[1].abs());
                tt_min = tt_min.min(gam[0]);
                tt_max = tt_max.max(gam[0]);
            }
            tt /= np as f64;
            pp /= np as f64;
            if worst_cross > 1e-7 * scale || (tt_max - tt_min) > 1e-7 * scale {
                return Err(Error::Precondition(format!(
                    "induced metric is not axisymmetric (cross {worst_cross:.2e}, spread {:.2e})",
                    tt_max - tt_min
                )));
            }
            f.push(tt.sqrt());
            h_tilde.push(pp.sqrt() / st);
        }
        Ok((self.x_dir.clone(), f, h_tilde))
    }
}

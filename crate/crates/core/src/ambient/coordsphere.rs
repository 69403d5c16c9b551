//! Coordinate spheres {|x| = r} in asymptotically flat charts: induced
//! metric, mean curvature from the shape operator of the level set, and the
//! area-expansion diagnostic beta(r).

use super::curvature::christoffels_at;
use super::geodesic::{integrate_sphere, GeodesicSphereSample, SphereKind};
use super::{Chart, Point};
use crate::error::{Error, Result};
use crate::numerics::gauss_legendre;

/// Sample the coordinate sphere of radius r on a Gauss-Legendre x uniform
/// angular grid.
pub fn coordinate_sphere(
    chart: &dyn Chart,
    r: f64,
    n_theta: usize,
    n_phi: usize,
) -> Result<GeodesicSphereSample> {
    if !chart.is_asymptotically_flat() {
        return Err(Error::Precondition(
            "coordinate spheres need an asymptotically flat chart".into(),
        ));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    let (x_dir, w_dir) = gauss_legendre(n_theta);
    let phi_dir: Vec<f64> = (0..n_phi)
        .map(|k| 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64)
        .collect();
    let embed = |ct: f64, phi: f64| -> Point {
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        Point::new(r * st * phi.cos(), r * st * phi.sin(), r * ct)
    };
    let mut gamma = Vec::with_capacity(n_theta * n_phi);
    let mut mean = Vec::with_capacity(n_theta * n_phi);
    let mut beta_acc = 0.0;
    let mut have_sigma = true;
    let dphi_w = 2.0 * std::f64::consts::PI / n_phi as f64;
    for i in 0..n_theta {
        let theta = x_dir[i].acos();
        for q in 0..n_phi {
            let phi = phi_dir[q];
            let p = embed(theta.cos(), phi);
            if !chart.domain_contains(&p) {
                return Err(Error::Domain(format!(
                    "coordinate sphere r = {r} leaves the chart domain"
                )));
            }
            let g = chart.metric(&p);
            // angular tangents
            let e_t = Point::new(
                r * theta.cos() * phi.cos(),
                r * theta.cos() * phi.sin(),
                -r * theta.sin(),
            );
            let e_p = Point::new(
                -r * theta.sin() * phi.sin(),
                r * theta.sin() * phi.cos(),
                0.0,
            );
            let dot = |a: &Point, b: &Point| (a.transpose() * g * b)[(0, 0)];
            let gtt = dot(&e_t, &e_t);
            let gtp = dot(&e_t, &e_p);
            let gpp = dot(&e_p, &e_p);
            gamma.push([gtt, gtp, gpp]);
            // outward unit normal of the level set f = |x|
            let h_fd = 1e-3 * (1.0 + r);
            let normal_at = |th: f64, ph: f64| -> Result<Point> {
                let q = embed(th.cos(), ph);
                let gq = chart.metric(&q);
                let ginv = gq
                    .try_inverse()
                    .ok_or_else(|| Error::Numerical("metric not invertible".into()))?;
                let nhat = q / q.norm();
                let up = ginv * nhat;
                let norm = (nhat.transpose() * ginv * nhat)[(0, 0)].sqrt();
                Ok(up / norm)
            };
            let nu = normal_at(theta, phi)?;
            // angular derivatives of nu by 4th-order differences
            let ha = 1e-4;
            let d_nu = |along_theta: bool| -> Result<Point> {
                let f = |s: f64| {
                    if along_theta {
                        normal_at(theta + s, phi)
                    } else {
                        normal_at(theta, phi + s)
                    }
                };
                Ok((8.0 * (f(ha)? - f(-ha)?) - (f(2.0 * ha)? - f(-2.0 * ha)?)) / (12.0 * ha))
            };
            let dnu_t = d_nu(true)?;
            let dnu_p = d_nu(false)?;
            let gam = christoffels_at(chart, &p, h_fd)?;
            let cov = |dnu: &Point, e: &Point| -> Point {
                let mut out = *dnu;
                for k in 0..3 {
                    let mut acc = 0.0;
                    for a in 0..3 {
                        for b in 0..3 {
                            acc += gam[k][a][b] * e[a] * nu[b];
                        }
                    }
                    out[k] += acc;
                }
                out
            };
            let a_tt = dot(&cov(&dnu_t, &e_t), &e_t);
            let a_tp = 0.5 * (dot(&cov(&dnu_t, &e_t), &e_p) + dot(&cov(&dnu_p, &e_p), &e_t));
            let a_pp = dot(&cov(&dnu_p, &e_p), &e_p);
            let det = gtt * gpp - gtp * gtp;
            if det <= 0.0 {
                return Err(Error::Numerical("degenerate induced metric".into()));
            }
            let inv = [gpp / det, -gtp / det, gtt / det];
            let h = inv[0] * a_tt + 2.0 * inv[1] * a_tp + inv[2] * a_pp;
            mean.push(h);
            if let Some(sigma) = chart.sigma(&p) {
                // g_r^{ij} sigma_ij with the inverse induced metric pushed
                // into ambient indices through the embedding tangents
                let mut tr = 0.0;
                let pairs = [
                    (inv[0], &e_t, &e_t),
                    (inv[1], &e_t, &e_p),
                    (inv[1], &e_p, &e_t),
                    (inv[2], &e_p, &e_p),
                ];
                for (c, ea, eb) in pairs {
                    tr += c * (ea.transpose() * sigma * eb)[(0, 0)];
                }
                beta_acc += 0.5 * tr * w_dir[i] * dphi_w * det.sqrt() / theta.sin().max(1e-300);
            } else {
                have_sigma = false;
            }
        }
    }
    let (area, total_h) = integrate_sphere(&x_dir, &w_dir, n_phi, &gamma, &mean);
    Ok(GeodesicSphereSample {
        kind: SphereKind::Coordinate,
        center: Point::zeros(),
        radius: r,
        x_dir,
        w_dir,
        phi_dir,
        gamma,
        mean_curvature: mean,
        area,
        total_mean_curvature: total_h,
        min_jacobi_ratio: f64::INFINITY,
        beta: if have_sigma { Some(beta_acc) } else { None },
    })
}

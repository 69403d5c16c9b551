//! Pointwise curvature invariants from metric derivatives: Christoffel
//! symbols, Riemann and Ricci tensors, scalar curvature, its Laplacian, and
//! the combination L = (9/4) R^2 + 2 |Ric|^2 + 9 Lap R.

use super::{Chart, Mat3, Point};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CurvatureInvariants {
    pub scalar: f64,
    pub ricci: Mat3,
    /// |Ric|^2 = Ric_ij Ric^ij.
    pub ricci_norm2: f64,
    /// |E|^2 with E = Ric - (R/3) g; equals |Ric|^2 - R^2/3.
    pub traceless_ricci_norm2: f64,
    pub laplacian_scalar: f64,
    /// (9/4) R^2 + 2 |Ric|^2 + 9 Lap R.
    pub l_combination: f64,
}

impl CurvatureInvariants {
    pub fn flat() -> Self {
        Self {
            scalar: 0.0,
            ricci: Mat3::zeros(),
            ricci_norm2: 0.0,
            traceless_ricci_norm2: 0.0,
            laplacian_scalar: 0.0,
            l_combination: 0.0,
        }
    }
}

fn l_combination(scalar: f64, ricci_norm2: f64, laplacian_scalar: f64) -> f64 {
    2.25 * scalar * scalar + 2.0 * ricci_norm2 + 9.0 * laplacian_scalar
}

/// Christoffel symbols Gamma^k_{ij} at a point.
pub(crate) fn christoffels(g_inv: &Mat3, dg: &[Mat3; 3]) -> [[[f64; 3]; 3]; 3] {
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for k in 0..3 {
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for l in 0..3 {
                    acc += g_inv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                gamma[k][i][j] = 0.5 * acc;
            }
        }
    }
    gamma
}

struct PointTensors {
    g_inv: Mat3,
    gamma: [[[f64; 3]; 3]; 3],
    /// riemann[l][k][i][j] = R^l_{kij} with
    /// R(e_i, e_j) e_k = R^l_{kij} e_l.
    riemann: [[[[f64; 3]; 3]; 3]; 3],
    ricci: Mat3,
    scalar: f64,
}

fn point_tensors(chart: &dyn Chart, p: &Point, h: f64) -> Result<PointTensors> {
    if !chart.domain_contains(p) {
        return Err(Error::Domain(format!("point {p:?} outside chart domain")));
    }
    let g = chart.metric(p);
    let der = chart.derivatives(p, h);
    tensors_from_parts(&g, &der).ok_or_else(|| Error::Numerical("metric not invertible".into()))
}

/// Scalar curvature from explicit metric components and derivatives; the
/// tensor algebra is chart-agnostic, so curvilinear product metrics can use
/// it directly.
pub fn scalar_from_parts(g: &Mat3, der: &super::MetricDerivatives) -> Option<f64> {
    tensors_from_parts(g, der).map(|t| t.scalar)
}

fn tensors_from_parts(g: &Mat3, der: &super::MetricDerivatives) -> Option<PointTensors> {
    let g_inv = g.try_inverse()?;
    let gamma = christoffels(&g_inv, &der.first);
    // dGamma[m][k][i][j] = d_m Gamma^k_{ij}
    let mut d_gamma = [[[[0.0; 3]; 3]; 3]; 3];
    // d_m g^{kl} = -g^{ka} (d_m g_{ab}) g^{bl}
    let mut d_ginv = [Mat3::zeros(); 3];
    for m in 0..3 {
        d_ginv[m] = -g_inv * der.first[m] * g_inv;
    }
    for m in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = 0.0;
                    for l in 0..3 {
                        acc += d_ginv[m][(k, l)]
                            * (der.first[i][(j, l)] + der.first[j][(i, l)] - der.first[l][(i, j)]);
                        acc += g_inv[(k, l)]
                            * (der.second[m][i][(j, l)] + der.second[m][j][(i, l)]
                                - der.second[m][l][(i, j)]);
                    }
                    d_gamma[m][k][i][j] = 0.5 * acc;
                }
            }
        }
    }
    let mut riemann = [[[[0.0; 3]; 3]; 3]; 3];
    for l in 0..3 {
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut acc = d_gamma[i][l][j][k] - d_gamma[j][l][i][k];
                    for a in 0..3 {
                        acc += gamma[l][i][a] * gamma[a][j][k] - gamma[l][j][a] * gamma[a][i][k];
                    }
                    riemann[l][k][i][j] = acc;
                }
            }
        }
    }
    let mut ricci = Mat3::zeros();
    for k in 0..3 {
        for j in 0..3 {
            let mut acc = 0.0;
            for i in 0..3 {
                acc += riemann[i][k][i][j];
            }
            ricci[(k, j)] = acc;
        }
    }
    let mut scalar = 0.0;
    for k in 0..3 {
        for j in 0..3 {
            scalar += g_inv[(k, j)] * ricci[(k, j)];
        }
    }
    Some(PointTensors {
        g_inv,
        gamma,
        riemann,
        ricci,
        scalar,
    })
}

fn fd_step(p: &Point) -> f64 {
    1e-3 * (1.0 + p.norm())
}

/// Scalar curvature at a point.
pub fn scalar_curvature(chart: &dyn Chart, p: &Point) -> Result<f64> {
    Ok(point_tensors(chart, p, fd_step(p))?.scalar)
}

/// Contraction (R(j_vec, t_vec) t_vec)^l used by the Jacobi equation.
pub(crate) fn jacobi_curvature_term(
    chart: &dyn Chart,
    p: &Point,
    j_vec: &Point,
    t_vec: &Point,
    h: f64,
) -> Result<Point> {
    let t = point_tensors(chart, p, h)?;
    let mut out = Point::zeros();
    for l in 0..3 {
        let mut acc = 0.0;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    acc += t.riemann[l][k][i][j] * t_vec[k] * j_vec[i] * t_vec[j];
                }
            }
        }
        out[l] = acc;
    }
    Ok(out)
}

pub(crate) fn christoffels_at(chart: &dyn Chart, p: &Point, h: f64) -> Result<[[[f64; 3]; 3]; 3]> {
    if !chart.domain_contains(p) {
        return Err(Error::Domain(format!("point {p:?} outside chart domain")));
    }
    let g = chart.metric(p);
    let g_inv = g
        .try_inverse()
        .ok_or_else(|| Error::Numerical("metric not invertible".into()))?;
    let der = chart.derivatives(p, h);
    Ok(christoffels(&g_inv, &der.first))
}

/// All curvature invariants at a point; uses the closed-form path when the
/// chart provides one, otherwise derivative evaluation with a step-size
/// Richardson consistency check.
pub fn curvature_at(chart: &dyn Chart, p: &Point) -> Result<CurvatureInvariants> {
    if let Some(inv) = chart.closed_form_curvature(p) {
        return Ok(inv);
    }
    let h = fd_step(p);
    let fine = invariants_with_step(chart, p, 0.5 * h)?;
    if !chart.has_exact_derivatives() {
        let coarse = invariants_with_step(chart, p, h)?;
        let scale = 1.0 + fine.scalar.abs();
        if (fine.scalar - coarse.scalar).abs() > 1e-4 * scale {
            return Err(Error::Numerical(format!(
                "scalar curvature failed the step-size consistency check: {} vs {}",
                coarse.scalar, fine.scalar
            )));
        }
    }
    Ok(fine)
}

fn invariants_with_step(chart: &dyn Chart, p: &Point, h: f64) -> Result<CurvatureInvariants> {
    let t = point_tensors(chart, p, h)?;
    let mut ricci_norm2 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    ricci_norm2 +=
                        t.ricci[(i, j)] * t.ricci[(k, l)] * t.g_inv[(i, k)] * t.g_inv[(j, l)];
                }
            }
        }
    }
    let traceless = (ricci_norm2 - t.scalar * t.scalar / 3.0).max(0.0);
    // Lap R = g^{ij} (d_i d_j R - Gamma^k_{ij} d_k R), with R by nested
    // derivative evaluation around p
    let r_at = |q: &Point| -> Result<f64> { Ok(point_tensors(chart, q, h)?.scalar) };
    let hr = (20.0 * h).min(0.05 * (1.0 + p.norm()));
    let shift = |k: usize, s: f64| {
        let mut q = *p;
        q[k] += s;
        q
    };
    let mut grad = [0.0; 3];
    let mut hess = Mat3::zeros();
    let r0 = t.scalar;
    for k in 0..3 {
        let rp = r_at(&shift(k, hr))?;
        let rm = r_at(&shift(k, -hr))?;
        let rp2 = r_at(&shift(k, 2.0 * hr))?;
        let rm2 = r_at(&shift(k, -2.0 * hr))?;
        grad[k] = (8.0 * (rp - rm) - (rp2 - rm2)) / (12.0 * hr);
        hess[(k, k)] = (-rp2 + 16.0 * rp - 30.0 * r0 + 16.0 * rm - rm2) / (12.0 * hr * hr);
    }
    for k in 0..3 {
        for l in (k + 1)..3 {
            let at = |sk: f64, sl: f64| -> Result<f64> {
                let mut q = *p;
                q[k] += sk;
                q[l] += sl;
                r_at(&q)
            };
            let v = (at(hr, hr)? - at(hr, -hr)? - at(-hr, hr)? + at(-hr, -hr)?) / (4.0 * hr * hr);
            hess[(k, l)] = v;
            hess[(l, k)] = v;
        }
    }
    let mut lap = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let mut cov = hess[(i, j)];
            for k in 0..3 {
                cov -= t.gamma[k][i][j] * grad[k];
            }
            lap += t.g_inv[(i, j)] * cov;
        }
    }
    Ok(CurvatureInvariants {
        scalar: t.scalar,
        ricci: t.ricci,
        ricci_norm2,
        traceless_ricci_norm2: traceless,
        laplacian_scalar: lap,
        l_combination: l_combination(t.scalar, ricci_norm2, lap),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::charts::{
        EuclideanChart, PerturbedFlatChart, SchwarzschildIsotropicChart, SpaceFormChart,
    };
    use approx::assert_abs_diff_eq;

    #[test]
    fn euclidean_invariants_vanish() {
        let inv = curvature_at(&EuclideanChart, &Point::new(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(inv.scalar, 0.0);
        assert_eq!(inv.l_combination, 0.0);
    }

    #[test]
    fn schwarzschild_is_scalar_flat() {
        let chart = SchwarzschildIsotropicChart::new(1.0);
        for p in [Point::new(3.0, 0.0, 0.0), Point::new(1.0, -2.0, 2.5)] {
            let r = scalar_curvature(&chart, &p).unwrap();
            assert_abs_diff_eq!(r, 0.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn space_form_generic_path_matches_closed_form() {
        for k0 in [1.0, -1.0, 0.5] {
            let chart = SpaceFormChart::new(k0);
            let p = Point::new(0.27, -0.11, 0.19);
            let closed = chart.closed_form_curvature(&p).unwrap();
            // generic tensor path on the same chart
            let generic = invariants_with_step(&chart, &p, 1e-3).unwrap();
            assert_abs_diff_eq!(generic.scalar, closed.scalar, epsilon = 1e-9);
            assert_abs_diff_eq!(generic.ricci_norm2, closed.ricci_norm2, epsilon = 1e-7);
            assert_abs_diff_eq!(generic.traceless_ricci_norm2, 0.0, epsilon = 1e-7);
            assert_abs_diff_eq!(generic.laplacian_scalar, 0.0, epsilon = 1e-5);
            assert_abs_diff_eq!(generic.l_combination, 105.0 * k0 * k0, epsilon = 2e-4);
        }
    }

    #[test]
    fn perturbed_chart_fd_curvature_detects_schwarzschild() {
        // sigma chosen so that g = (1 + m/(2r))^4 delta with m = 0.8
        let text = "tau = 1.0\nmass = 0.8\n\
                    sigma_xx = (1+0.4/r)^4 - 1\n\
                    sigma_yy = (1+0.4/r)^4 - 1\n\
                    sigma_zz = (1+0.4/r)^4 - 1\n";
        let chart = PerturbedFlatChart::from_file_text(text).unwrap();
        let p = Point::new(2.0, 1.0, -1.0);
        let inv = curvature_at(&chart, &p).unwrap();
        assert_abs_diff_eq!(inv.scalar, 0.0, epsilon = 1e-6);
        // cross-check Ricci against the closed-form chart
        let exact_chart = SchwarzschildIsotropicChart::new(0.8);
        let exact = invariants_with_step(&exact_chart, &p, 1e-3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_abs_diff_eq!(inv.ricci[(i, j)], exact.ricci[(i, j)], epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn traceless_identity() {
        let chart = SchwarzschildIsotropicChart::new(1.0);
        let inv = curvature_at(&chart, &Point::new(4.0, 1.0, 0.0)).unwrap();
        assert!(inv.traceless_ricci_norm2 >= 0.0);
        assert_abs_diff_eq!(
            inv.traceless_ricci_norm2,
            inv.ricci_norm2 - inv.scalar * inv.scalar / 3.0,
            epsilon = 1e-12
        );
    }
}

//! Conformally round metrics e^{2u} g_round on the 2-sphere.

use std::sync::Arc;

use super::grid::SphereGrid;
use crate::error::{Error, Result};
use crate::numerics::{gauss_legendre, legendre_p, Barycentric};
use crate::wigner;

const REFERENCE_NODES: usize = 256;

/// Conformal exponent u as an evaluatable field on the sphere.
#[derive(Clone)]
pub enum SphereField {
    /// u(x), x = cos(theta); axisymmetric about the polar axis.
    AxisymFn(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
    /// u(x, phi).
    GeneralFn(Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>),
    /// Nodal samples on a Gauss-Legendre x uniform grid, cos-theta-major.
    Samples(SampledField),
}

#[derive(Clone)]
pub struct SampledField {
    pub x: Vec<f64>,
    pub values: Vec<f64>,
    pub n_phi: usize,
    pub axisymmetric: bool,
    bary: Arc<Barycentric>,
}

impl SampledField {
    pub fn new(x: Vec<f64>, values: Vec<f64>, n_phi: usize, axisymmetric: bool) -> Result<Self> {
        if values.len() != x.len() * n_phi {
            return Err(Error::InvalidArgument(format!(
                "sample count {} does not match grid {} x {}",
                values.len(),
                x.len(),
                n_phi
            )));
        }
        if n_phi % 2 == 0 {
            return Err(Error::InvalidArgument(
                "azimuth sample count must be odd".into(),
            ));
        }
        let bary = Arc::new(Barycentric::new(&x));
        Ok(Self {
            x,
            values,
            n_phi,
            axisymmetric,
            bary,
        })
    }

    fn eval(&self, x: f64, phi: f64) -> f64 {
        let n_theta = self.x.len();
        if self.axisymmetric {
            let col: Vec<f64> = (0..n_theta).map(|i| self.values[i * self.n_phi]).collect();
            return self.bary.eval(&col, x);
        }
        // interpolate in x along each azimuth column, then trigonometric
        // interpolation in phi (odd node count -> Dirichlet kernel)
        let np = self.n_phi;
        let mut by_phi = vec![0.0; np];
        for q in 0..np {
            let col: Vec<f64> = (0..n_theta).map(|i| self.values[i * np + q]).collect();
            by_phi[q] = self.bary.eval(&col, x);
        }
        let n = np as f64;
        let mut acc = 0.0;
        for (q, v) in by_phi.iter().enumerate() {
            let d = phi - 2.0 * std::f64::consts::PI * q as f64 / n;
            let half = 0.5 * d;
            let kernel = if half.sin().abs() < 1e-14 {
                if (n * half).sin().abs() < 1e-10 {
                    1.0
                } else {
                    (n * half).sin() / (n * half.sin().max(1e-300))
                }
            } else {
                (n * half).sin() / (n * half.sin())
            };
            acc += v * kernel;
        }
        acc
    }
}

/// A metric e^{2u} g_round on the 2-sphere.
#[derive(Clone)]
pub struct ConformalSphereMetric {
    field: Arc<SphereField>,
    axisymmetric: bool,
    area: f64,
}

impl std::fmt::Debug for ConformalSphereMetric {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConformalSphereMetric")
            .field("axisymmetric", &self.axisymmetric)
            .field("area", &self.area)
            .finish()
    }
}

impl ConformalSphereMetric {
    pub fn from_axisym_fn<F>(f: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(SphereField::AxisymFn(Arc::new(f)), true)
    }

    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(SphereField::GeneralFn(Arc::new(f)), false)
    }

    pub fn from_samples(field: SampledField) -> Self {
        let axi = field.axisymmetric;
        Self::build(SphereField::Samples(field), axi)
    }

    /// The round sphere of the given radius: u = ln(radius).
    pub fn round(radius: f64) -> Self {
        let u = radius.ln();
        Self::from_axisym_fn(move |_| u)
    }

    /// Axisymmetric Gaussian bump in x = cos(theta):
    /// u = amplitude exp(-width (x - center)^2). Entire in x, so smooth on
    /// the sphere including the poles.
    pub fn bump(amplitude: f64, width: f64, center: f64) -> Self {
        Self::from_axisym_fn(move |x| amplitude * (-width * (x - center) * (x - center)).exp())
    }

    fn build(field: SphereField, axisymmetric: bool) -> Self {
        let mut m = Self {
            field: Arc::new(field),
            axisymmetric,
            area: 0.0,
        };
        m.area = m.compute_area();
        m
    }

    pub fn is_axisymmetric(&self) -> bool {
        self.axisymmetric
    }

    /// Conformal exponent at (x = cos theta, phi).
    pub fn u(&self, x: f64, phi: f64) -> f64 {
        match self.field.as_ref() {
            SphereField::AxisymFn(f) => f(x),
            SphereField::GeneralFn(f) => f(x, phi),
            SphereField::Samples(s) => s.eval(x, phi),
        }
    }

    /// Total area of e^{2u} g_round.
    pub fn area(&self) -> f64 {
        self.area
    }

    fn compute_area(&self) -> f64 {
        if self.axisymmetric {
            let (x, w) = gauss_legendre(REFERENCE_NODES);
            let s: f64 = x
                .iter()
                .zip(&w)
                .map(|(&x, &w)| w * (2.0 * self.u(x, 0.0)).exp())
                .sum();
            2.0 * std::f64::consts::PI * s
        } else {
            let grid = SphereGrid::new(128, 257);
            let samples: Vec<f64> = grid
                .x
                .iter()
                .flat_map(|&x| grid.phi.iter().map(move |&p| (x, p)))
                .map(|(x, p)| (2.0 * self.u(x, p)).exp())
                .collect();
            grid.integrate(&samples)
        }
    }

    /// Pullback of the metric under the rotation by `angle` about the y
    /// axis. Isometric to the original, but not axisymmetric about z.
    pub fn rotated_about_y(&self, angle: f64) -> Self {
        let src = self.clone();
        let (c, s) = (angle.cos(), angle.sin());
        Self::from_fn(move |x: f64, phi: f64| {
            let st = (1.0 - x * x).max(0.0).sqrt();
            let p = [st * phi.cos(), st * phi.sin(), x];
            // inverse rotation about y
            let q = [c * p[0] - s * p[2], p[1], s * p[0] + c * p[2]];
            let phi_src = q[1].atan2(q[0]);
            src.u(q[2].clamp(-1.0, 1.0), phi_src)
        })
    }

    /// Pullback under the Mercator translation t -> t + shift (a conformal
    /// diffeomorphism of the sphere); changes u but not the geometry.
    pub fn mobius_translated(&self, shift: f64) -> Result<Self> {
        if !self.axisymmetric {
            return Err(Error::Precondition(
                "Moebius re-gauging implemented for axisymmetric metrics".into(),
            ));
        }
        let src = self.clone();
        Ok(Self::from_axisym_fn(move |x: f64| {
            let t = -x.clamp(-1.0 + 1e-15, 1.0 - 1e-15).atanh();
            let ts = t + shift;
            let xs = -ts.tanh();
            src.u(xs, 0.0) + (t.cosh() / ts.cosh()).ln()
        }))
    }

    /// Gauss curvature samples K = e^{-2u} (1 - Lap_round u) at the given
    /// Gauss-Legendre nodes (axisymmetric path, Legendre transform).
    pub fn gauss_curvature_axisym(&self, x_out: &[f64]) -> Result<Vec<f64>> {
        if !self.axisymmetric {
            return Err(Error::Precondition(
                "axisymmetric curvature evaluation on a general metric".into(),
            ));
        }
        let n = REFERENCE_NODES;
        let (x, w) = gauss_legendre(n);
        let u: Vec<f64> = x.iter().map(|&x| self.u(x, 0.0)).collect();
        let l_max = n - 2;
        // Legendre coefficients a_l = (2l+1)/2 int u P_l
        let mut coeffs = vec![0.0; l_max + 1];
        for l in 0..=l_max {
            let mut acc = 0.0;
            for i in 0..n {
                acc += w[i] * u[i] * legendre_p(l, x[i]).0;
            }
            coeffs[l] = (2.0 * l as f64 + 1.0) / 2.0 * acc;
        }
        Ok(x_out
            .iter()
            .map(|&xo| {
                let mut lap = 0.0;
                for (l, &a) in coeffs.iter().enumerate() {
                    let lf = l as f64;
                    lap -= lf * (lf + 1.0) * a * legendre_p(l, xo).0;
                }
                let uo = self.u(xo, 0.0);
                (-2.0 * uo).exp() * (1.0 - lap)
            })
            .collect())
    }

    /// | int K dSigma - 4 pi |, the Gauss-Bonnet defect.
    pub fn gauss_bonnet_defect(&self) -> Result<f64> {
        let four_pi = 4.0 * std::f64::consts::PI;
        if self.axisymmetric {
            let (x, w) = gauss_legendre(REFERENCE_NODES);
            let k = self.gauss_curvature_axisym(&x)?;
            let mut acc = 0.0;
            for i in 0..x.len() {
                acc += w[i] * k[i] * (2.0 * self.u(x[i], 0.0)).exp();
            }
            Ok((2.0 * std::f64::consts::PI * acc - four_pi).abs())
        } else {
            let (k, grid) = self.gauss_curvature_general(96, 193)?;
            let weighted: Vec<f64> = (0..grid.n_theta() * grid.n_phi())
                .map(|idx| {
                    let i = idx / grid.n_phi();
                    let q = idx % grid.n_phi();
                    k[idx] * (2.0 * self.u(grid.x[i], grid.phi[q])).exp()
                })
                .collect();
            Ok((grid.integrate(&weighted) - four_pi).abs())
        }
    }

    /// Gauss curvature on a full grid via a scalar spherical-harmonic
    /// transform of u (general metrics).
    pub fn gauss_curvature_general(
        &self,
        n_theta: usize,
        n_phi: usize,
    ) -> Result<(Vec<f64>, SphereGrid)> {
        let grid = SphereGrid::new(n_theta, n_phi);
        let l_max = n_theta.saturating_sub(2);
        let np = n_phi;
        let u: Vec<f64> = grid
            .x
            .iter()
            .flat_map(|&x| grid.phi.iter().map(move |&p| (x, p)))
            .map(|(x, p)| self.u(x, p))
            .collect();
        // azimuthal Fourier analysis per latitude
        let m_max = (np - 1) / 2;
        let mut lap = vec![0.0; n_theta * np];
        for m in 0..=m_max.min(l_max) {
            let mi = m as i32;
            // cos/sin components
            let mut fc = vec![0.0; n_theta];
            let mut fs = vec![0.0; n_theta];
            for i in 0..n_theta {
                let mut ac = 0.0;
                let mut asn = 0.0;
                for q in 0..np {
                    ac += u[i * np + q] * (mi as f64 * grid.phi[q]).cos();
                    asn += u[i * np + q] * (mi as f64 * grid.phi[q]).sin();
                }
                let norm = if m == 0 {
                    1.0 / np as f64
                } else {
                    2.0 / np as f64
                };
                fc[i] = ac * norm;
                fs[i] = asn * norm;
            }
            let cols = wigner::d_column(2 * mi, 0, 2 * l_max as i32, &grid.theta)?;
            let n_l = cols[0].len();
            // project onto normalized latitude profiles and apply -l(l+1)
            for li in 0..n_l {
                let l = m + li;
                let norm2 = (2.0 * l as f64 + 1.0) / 2.0;
                let mut pc = 0.0;
                let mut ps = 0.0;
                for i in 0..n_theta {
                    pc += grid.w[i] * fc[i] * cols[i][li];
                    ps += grid.w[i] * fs[i] * cols[i][li];
                }
                pc *= norm2;
                ps *= norm2;
                let factor = -(l as f64) * (l as f64 + 1.0);
                for i in 0..n_theta {
                    for q in 0..np {
                        lap[i * np + q] += factor
                            * cols[i][li]
                            * (pc * (mi as f64 * grid.phi[q]).cos()
                                + ps * (mi as f64 * grid.phi[q]).sin());
                    }
                }
            }
        }
        let k = (0..n_theta * np)
            .map(|idx| {
                let i = idx / np;
                let q = idx % np;
                (-2.0 * self.u(grid.x[i], grid.phi[q])).exp() * (1.0 - lap[idx])
            })
            .collect();
        Ok((k, grid))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn round_metric_area_and_curvature() {
        let m = ConformalSphereMetric::round(2.0);
        assert_abs_diff_eq!(m.area(), 16.0 * std::f64::consts::PI, epsilon = 1e-10);
        let k = m.gauss_curvature_axisym(&[0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(k[0], 0.25, epsilon = 1e-10);
        assert!(m.gauss_bonnet_defect().unwrap() < 1e-9);
    }

    #[test]
    fn gauss_bonnet_for_bump_metric() {
        let m =
            ConformalSphereMetric::from_axisym_fn(|x| 0.3 * (-2.0 * (x - 0.2) * (x - 0.2)).exp());
        assert!(m.gauss_bonnet_defect().unwrap() < 1e-8);
    }

    #[test]
    fn general_transform_matches_axisym_path() {
        let ax = ConformalSphereMetric::from_axisym_fn(|x| 0.2 * x * x);
        let gen = ConformalSphereMetric::from_fn(|x, _| 0.2 * x * x);
        assert!(gen.gauss_bonnet_defect().unwrap() < 1e-8);
        assert_abs_diff_eq!(ax.area(), gen.area(), epsilon = 1e-9);
    }

    #[test]
    fn sampled_field_interpolates() {
        let n_theta = 48;
        let n_phi = 97;
        let grid = SphereGrid::new(n_theta, n_phi);
        let mut values = vec![0.0; n_theta * n_phi];
        for i in 0..n_theta {
            for q in 0..n_phi {
                values[i * n_phi + q] = 0.1 * grid.x[i] + 0.05 * (grid.phi[q]).sin();
            }
        }
        let f = SampledField::new(grid.x.clone(), values, n_phi, false).unwrap();
        let m = ConformalSphereMetric::from_samples(f);
        assert_abs_diff_eq!(
            m.u(0.3, 1.1),
            0.1 * 0.3 + 0.05 * 1.1f64.sin(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn mobius_preserves_area() {
        let m = ConformalSphereMetric::from_axisym_fn(|x| 0.25 * (-(x + 0.1) * (x + 0.1)).exp());
        let t = m.mobius_translated(0.3).unwrap();
        assert_abs_diff_eq!(m.area(), t.area(), epsilon = 1e-8);
    }
}

//! The chart registry: euclidean, schwarzschild isotropic slices, space
//! forms in the conformal model, and expression-defined perturbations of the
//! flat metric.

use std::collections::BTreeMap;

use super::curvature::CurvatureInvariants;
use super::{Chart, Mat3, MetricDerivatives, Point};
use crate::error::{Error, Result};
use crate::numerics::expr::Expr;

/// Flat chart g = delta.
#[derive(Debug, Default)]
pub struct EuclideanChart;

impl Chart for EuclideanChart {
    fn name(&self) -> &str {
        "euclidean"
    }
    fn metric(&self, _p: &Point) -> Mat3 {
        Mat3::identity()
    }
    fn derivatives(&self, _p: &Point, _h: f64) -> MetricDerivatives {
        MetricDerivatives {
            first: [Mat3::zeros(); 3],
            second: [[Mat3::zeros(); 3]; 3],
        }
    }
    fn has_exact_derivatives(&self) -> bool {
        true
    }
    fn mass(&self) -> Option<f64> {
        Some(0.0)
    }
    fn sigma(&self, _p: &Point) -> Option<Mat3> {
        Some(Mat3::zeros())
    }
    fn is_asymptotically_flat(&self) -> bool {
        true
    }
    fn closed_form_curvature(&self, _p: &Point) -> Option<CurvatureInvariants> {
        Some(CurvatureInvariants::flat())
    }
}

/// Scalar-flat time-symmetric slice g = (1 + m/(2|x|))^4 delta on |x| > m/2.
#[derive(Debug)]
pub struct SchwarzschildIsotropicChart {
    pub mass: f64,
}

impl SchwarzschildIsotropicChart {
    pub fn new(mass: f64) -> Self {
        Self { mass }
    }

    fn phi(&self, p: &Point) -> f64 {
        1.0 + self.mass / (2.0 * p.norm())
    }
}

impl Chart for SchwarzschildIsotropicChart {
    fn name(&self) -> &str {
        "schwarzschild"
    }
    fn metric(&self, p: &Point) -> Mat3 {
        let f = self.phi(p).powi(4);
        Mat3::identity() * f
    }
    fn derivatives(&self, p: &Point, _h: f64) -> MetricDerivatives {
        let rho = p.norm();
        let phi = self.phi(p);
        // phi_k = -(m/2) x_k rho^-3; phi_kl = -(m/2)(delta_kl rho^-3 - 3 x_k x_l rho^-5)
        let mut first = [Mat3::zeros(); 3];
        let mut second = [[Mat3::zeros(); 3]; 3];
        let c = -0.5 * self.mass;
        let phi_d = |k: usize| c * p[k] / rho.powi(3);
        for (k, f) in first.iter_mut().enumerate() {
            *f = Mat3::identity() * (4.0 * phi.powi(3) * phi_d(k));
        }
        for k in 0..3 {
            for l in 0..3 {
                let dd = c
                    * (if k == l { 1.0 } else { 0.0 } / rho.powi(3)
                        - 3.0 * p[k] * p[l] / rho.powi(5));
                let val = 12.0 * phi * phi * phi_d(k) * phi_d(l) + 4.0 * phi.powi(3) * dd;
                second[k][l] = Mat3::identity() * val;
            }
        }
        MetricDerivatives { first, second }
    }
    fn has_exact_derivatives(&self) -> bool {
        true
    }
    fn domain_contains(&self, p: &Point) -> bool {
        p.norm() > 0.5 * self.mass
    }
    fn mass(&self) -> Option<f64> {
        Some(self.mass)
    }
    fn sigma(&self, p: &Point) -> Option<Mat3> {
        Some(self.metric(p) - Mat3::identity())
    }
    fn decay_rate(&self) -> Option<f64> {
        Some(1.0)
    }
    fn is_asymptotically_flat(&self) -> bool {
        true
    }
}

/// Constant sectional curvature k0 in the conformal-to-flat model
/// g = (1 + (k0/4)|x|^2)^{-2} delta.
#[derive(Debug)]
pub struct SpaceFormChart {
    pub k0: f64,
}

impl SpaceFormChart {
    pub fn new(k0: f64) -> Self {
        Self { k0 }
    }

    fn psi(&self, p: &Point) -> f64 {
        1.0 + 0.25 * self.k0 * p.norm_squared()
    }
}

impl Chart for SpaceFormChart {
    fn name(&self) -> &str {
        "spaceform"
    }
    fn metric(&self, p: &Point) -> Mat3 {
        Mat3::identity() / self.psi(p).powi(2)
    }
    fn derivatives(&self, p: &Point, _h: f64) -> MetricDerivatives {
        let psi = self.psi(p);
        let psi_d = |k: usize| 0.5 * self.k0 * p[k];
        let mut first = [Mat3::zeros(); 3];
        let mut second = [[Mat3::zeros(); 3]; 3];
        for (k, f) in first.iter_mut().enumerate() {
            *f = Mat3::identity() * (-2.0 * psi_d(k) / psi.powi(3));
        }
        for k in 0..3 {
            for l in 0..3 {
                let psi_dd = if k == l { 0.5 * self.k0 } else { 0.0 };
                let val = 6.0 * psi_d(k) * psi_d(l) / psi.powi(4) - 2.0 * psi_dd / psi.powi(3);
                second[k][l] = Mat3::identity() * val;
            }
        }
        MetricDerivatives { first, second }
    }
    fn has_exact_derivatives(&self) -> bool {
        true
    }
    fn domain_contains(&self, p: &Point) -> bool {
        self.psi(p) > 1e-10
    }
    fn closed_form_curvature(&self, p: &Point) -> Option<CurvatureInvariants> {
        let g = self.metric(p);
        let k0 = self.k0;
        Some(CurvatureInvariants {
            scalar: 6.0 * k0,
            ricci: g * (2.0 * k0),
            ricci_norm2: 12.0 * k0 * k0,
            traceless_ricci_norm2: 0.0,
            laplacian_scalar: 0.0,
            l_combination: 105.0 * k0 * k0,
        })
    }
}

/// g = delta + sigma with sigma given by expression strings in x, y, z, r.
pub struct PerturbedFlatChart {
    entries: [[Expr; 3]; 3],
    tau: f64,
    declared_mass: Option<f64>,
}

impl PerturbedFlatChart {
    pub fn new(entries: [[Expr; 3]; 3], tau: f64, declared_mass: Option<f64>) -> Result<Self> {
        if !(tau > 0.5) {
            return Err(Error::InvalidArgument(format!(
                "decay rate tau must exceed 1/2, got {tau}"
            )));
        }
        Ok(Self {
            entries,
            tau,
            declared_mass,
        })
    }

    /// Parse the key = value file format: `tau = ...`, optional `mass = ...`,
    /// entries `sigma_xx = <expr>` ... (missing entries are zero).
    pub fn from_file_text(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut kv = line.splitn(2, '=');
            let key = kv.next().unwrap_or("").trim().to_lowercase();
            let val = kv
                .next()
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?
                .trim()
                .to_string();
            map.insert(key, val);
        }
        let tau: f64 = map
            .get("tau")
            .ok_or_else(|| Error::Parse("perturbed chart file needs tau = ...".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad tau value".into()))?;
        let declared_mass = match map.get("mass") {
            Some(v) => Some(
                v.parse::<f64>()
                    .map_err(|_| Error::Parse("bad mass value".into()))?,
            ),
            None => None,
        };
        let comp = |name: &str| -> Result<Expr> {
            match map.get(name) {
                Some(text) => Expr::parse(text),
                None => Ok(Expr::Num(0.0)),
            }
        };
        let xx = comp("sigma_xx")?;
        let xy = comp("sigma_xy")?;
        let xz = comp("sigma_xz")?;
        let yy = comp("sigma_yy")?;
        let yz = comp("sigma_yz")?;
        let zz = comp("sigma_zz")?;
        let entries = [
            [xx, xy.clone(), xz.clone()],
            [xy, yy, yz.clone()],
            [xz, yz, zz],
        ];
        Self::new(entries, tau, declared_mass)
    }

    fn sigma_at(&self, p: &Point) -> Mat3 {
        Mat3::from_fn(|i, j| self.entries[i][j].eval(p[0], p[1], p[2]))
    }
}

impl Chart for PerturbedFlatChart {
    fn name(&self) -> &str {
        "perturbed"
    }
    fn metric(&self, p: &Point) -> Mat3 {
        Mat3::identity() + self.sigma_at(p)
    }
    fn domain_contains(&self, p: &Point) -> bool {
        // metric must stay positive definite
        self.metric(p).cholesky().is_some()
    }
    fn mass(&self) -> Option<f64> {
        self.declared_mass
    }
    fn sigma(&self, p: &Point) -> Option<Mat3> {
        Some(self.sigma_at(p))
    }
    fn decay_rate(&self) -> Option<f64> {
        Some(self.tau)
    }
    fn is_asymptotically_flat(&self) -> bool {
        true
    }
}

pub fn chart_names() -> Vec<&'static str> {
    vec!["euclidean", "schwarzschild", "spaceform", "perturbed"]
}

/// Build a chart from a descriptor: `euclidean`, `schwarzschild:m=1`,
/// `spaceform:k=1`, `perturbed:file=path`.
pub fn parse_chart(descriptor: &str) -> Result<Box<dyn Chart>> {
    let (name, params) = crate::surface::parse_shape_descriptor(descriptor)?;
    let get = |key: &str| -> Result<f64> {
        let raw = params
            .get(key)
            .ok_or_else(|| Error::Parse(format!("chart '{name}' needs parameter '{key}'")))?;
        raw.parse()
            .map_err(|_| Error::Parse(format!("parameter '{key}'='{raw}' is not a number")))
    };
    match name.as_str() {
        "euclidean" => Ok(Box::new(EuclideanChart)),
        "schwarzschild" => Ok(Box::new(SchwarzschildIsotropicChart::new(get("m")?))),
        "spaceform" => Ok(Box::new(SpaceFormChart::new(get("k")?))),
        "perturbed" => {
            let path = params
                .get("file")
                .ok_or_else(|| Error::Parse("perturbed chart needs file=<path>".into()))?;
            let text = std::fs::read_to_string(path)?;
            Ok(Box::new(PerturbedFlatChart::from_file_text(&text)?))
        }
        other => Err(Error::Parse(format!(
            "unknown chart '{other}' (known: {})",
            chart_names().join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn schwarzschild_exact_derivatives_match_fd() {
        let chart = SchwarzschildIsotropicChart::new(1.3);
        let p = Point::new(2.0, -1.0, 0.7);
        let exact = chart.derivatives(&p, 0.0);
        let fd = super::super::fd_derivatives(&|q: &Point| chart.metric(q), &p, 1e-3);
        for k in 0..3 {
            for i in 0..3 {
                assert_abs_diff_eq!(exact.first[k][(i, i)], fd.first[k][(i, i)], epsilon = 1e-10);
                for l in 0..3 {
                    assert_abs_diff_eq!(
                        exact.second[k][l][(i, i)],
                        fd.second[k][l][(i, i)],
                        epsilon = 1e-8
                    );
                }
            }
        }
    }

    #[test]
    fn spaceform_exact_derivatives_match_fd() {
        let chart = SpaceFormChart::new(1.0);
        let p = Point::new(0.3, 0.2, -0.4);
        let exact = chart.derivatives(&p, 0.0);
        let fd = super::super::fd_derivatives(&|q: &Point| chart.metric(q), &p, 1e-3);
        for k in 0..3 {
            assert_abs_diff_eq!(exact.first[k][(0, 0)], fd.first[k][(0, 0)], epsilon = 1e-10);
            for l in 0..3 {
                assert_abs_diff_eq!(
                    exact.second[k][l][(1, 1)],
                    fd.second[k][l][(1, 1)],
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn registry_parses_descriptors() {
        assert!(parse_chart("euclidean").is_ok());
        assert!(parse_chart("schwarzschild:m=1").is_ok());
        assert!(parse_chart("spaceform:k=-1").is_ok());
        assert!(parse_chart("klein").is_err());
        assert!(parse_chart("schwarzschild").is_err());
    }

    #[test]
    fn perturbed_chart_from_text() {
        let text = "tau = 1.0\nmass = 0.25\nsigma_xx = 0.5/r\nsigma_xy = 0.1*x*y/r^3\n";
        let chart = PerturbedFlatChart::from_file_text(text).unwrap();
        let p = Point::new(3.0, 0.0, 0.0);
        let g = chart.metric(&p);
        assert_abs_diff_eq!(g[(0, 0)], 1.0 + 0.5 / 3.0, epsilon = 1e-14);
        assert_eq!(chart.mass(), Some(0.25));
        assert_eq!(chart.decay_rate(), Some(1.0));
    }

    #[test]
    fn perturbed_rejects_slow_decay() {
        let text = "tau = 0.3\nsigma_xx = 1/r\n";
        assert!(PerturbedFlatChart::from_file_text(text).is_err());
    }
}

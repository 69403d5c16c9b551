//! Axisymmetric surfaces embedded in Euclidean 3-space or hyperbolic space
//! H^3(-kappa^2): induced metrics, principal curvatures, curvature
//! integrals, and uniformization over the round sphere.

mod shapes;
mod uniformize;

pub(crate) use shapes::parse_descriptor as parse_shape_descriptor;
pub use shapes::{
    ellipsoid, embed_in_hyperbolic, hyperbolic_geodesic_sphere, make_surface, profile_from_samples,
    radial_graph, shape_names, sphere, ShapeBuilder,
};
pub use uniformize::{
    uniformize_axisymmetric, uniformize_parts, uniformize_with_gauge, UniformizationOptions,
    UniformizationResult,
};

use crate::error::{Error, Result};
use crate::numerics::differentiation_matrix;

/// Ambient space of an embedded surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ambient {
    Euclidean,
    /// Constant sectional curvature -kappa^2.
    Hyperbolic {
        kappa: f64,
    },
}

/// An axisymmetric closed surface, sampled on a Gauss-Legendre grid in
/// x = cos(tau) for the generating parameter tau in (0, pi).
///
/// The induced metric is f(tau)^2 dtau^2 + h(tau)^2 dphi^2; mean curvature
/// is the sum of principal curvatures with respect to the outward normal,
/// so a round sphere of radius r has H0 = 2/r.
#[derive(Debug, Clone)]
pub struct EmbeddedSurface {
    pub ambient: Ambient,
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub theta: Vec<f64>,
    pub f: Vec<f64>,
    pub h: Vec<f64>,
    /// h / sin(tau); smooth and positive up to the poles.
    pub h_tilde: Vec<f64>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
    pub area: f64,
    pub convex: bool,
    /// Geodesic distance from the origin, where the construction provides it.
    pub dist: Option<Vec<f64>>,
    /// Diameter estimate of the surface.
    pub extent: f64,
    pub descriptor: String,
}

impl EmbeddedSurface {
    pub fn n_nodes(&self) -> usize {
        self.x.len()
    }

    /// Mean curvature samples H0 = kappa1 + kappa2.
    pub fn mean_curvature(&self) -> Vec<f64> {
        self.kappa1
            .iter()
            .zip(&self.kappa2)
            .map(|(&a, &b)| a + b)
            .collect()
    }

    /// Integral of a nodal quantity against the area element.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.n_nodes());
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut acc = 0.0;
        for i in 0..self.n_nodes() {
            acc += self.w[i] * values[i] * self.f[i] * self.h_tilde[i];
        }
        two_pi * acc
    }

    /// Total mean curvature int H0 dSigma.
    pub fn total_mean_curvature(&self) -> f64 {
        self.integrate(&self.mean_curvature())
    }

    /// The weighted integrals (int cosh(kappa r) dSigma,
    /// int H0 cosh(kappa r) dSigma) on a hyperbolic surface.
    pub fn weighted_mean_curvature_integrals(&self) -> Result<(f64, f64)> {
        let kappa = match self.ambient {
            Ambient::Hyperbolic { kappa } => kappa,
            Ambient::Euclidean => {
                return Err(Error::Precondition(
                    "weighted integrals need a hyperbolic ambient".into(),
                ))
            }
        };
        let dist = self.dist.as_ref().ok_or_else(|| {
            Error::Precondition("surface carries no distance-to-origin samples".into())
        })?;
        let weight: Vec<f64> = dist.iter().map(|&r| (kappa * r).cosh()).collect();
        let h0 = self.mean_curvature();
        let wh: Vec<f64> = weight.iter().zip(&h0).map(|(&w, &h)| w * h).collect();
        Ok((self.integrate(&weight), self.integrate(&wh)))
    }

    /// Intrinsic Gauss curvature samples via the Gauss equation.
    pub fn intrinsic_gauss_curvature(&self) -> Vec<f64> {
        let amb = match self.ambient {
            Ambient::Euclidean => 0.0,
            Ambient::Hyperbolic { kappa } => -kappa * kappa,
        };
        self.kappa1
            .iter()
            .zip(&self.kappa2)
            .map(|(&a, &b)| a * b + amb)
            .collect()
    }

    /// | int K dSigma - 4 pi |.
    pub fn gauss_bonnet_defect(&self) -> f64 {
        (self.integrate(&self.intrinsic_gauss_curvature()) - 4.0 * std::f64::consts::PI).abs()
    }

    /// Largest deviation of |dh/ds| from 1 at the two cap-most nodes; small
    /// for smoothly closed surfaces.
    ///
    /// dh/dtau = x h_tilde - (1 - x^2) dh_tilde/dx stays regular at the
    /// poles, so the derivative is taken on the smooth profile h_tilde.
    pub fn cap_smoothness_defect(&self) -> f64 {
        let n = self.n_nodes();
        let d = differentiation_matrix(&self.x);
        let mut dht = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                dht[i] += d[(i, j)] * self.h_tilde[j];
            }
        }
        let slopes: Vec<f64> = (0..n)
            .map(|i| {
                let dh_dtau = self.x[i] * self.h_tilde[i] - (1.0 - self.x[i] * self.x[i]) * dht[i];
                dh_dtau / self.f[i]
            })
            .collect();
        // the invariant lives at the poles: extrapolate the smooth slope
        let bary = crate::numerics::Barycentric::new(&self.x);
        let north = bary.eval(&slopes, 1.0).abs();
        let south = bary.eval(&slopes, -1.0).abs();
        (north - 1.0).abs().max((south - 1.0).abs())
    }

    /// Rescale a Euclidean surface by t > 0.
    pub fn scaled(&self, t: f64) -> Result<EmbeddedSurface> {
        if self.ambient != Ambient::Euclidean {
            return Err(Error::Precondition(
                "scaling is a Euclidean-ambient operation".into(),
            ));
        }
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(
                "scale factor must be positive".into(),
            ));
        }
        let mut s = self.clone();
        for v in
            s.f.iter_mut()
                .chain(s.h.iter_mut())
                .chain(s.h_tilde.iter_mut())
        {
            *v *= t;
        }
        for v in s.kappa1.iter_mut().chain(s.kappa2.iter_mut()) {
            *v /= t;
        }
        if let Some(d) = s.dist.as_mut() {
            for v in d.iter_mut() {
                *v *= t;
            }
        }
        s.area *= t * t;
        s.extent *= t;
        s.descriptor = format!("{} scaled by {t}", self.descriptor);
        Ok(s)
    }
}

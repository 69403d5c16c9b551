//! Quadrature grid on the sphere: Gauss-Legendre in cos(theta) times a
//! uniform azimuth.

use crate::numerics::gauss_legendre;

#[derive(Debug, Clone)]
pub struct SphereGrid {
    /// Gauss-Legendre nodes in x = cos(theta), ascending.
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub theta: Vec<f64>,
    /// Uniform azimuth nodes phi_k = 2 pi k / n_phi.
    pub phi: Vec<f64>,
}

impl SphereGrid {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        let (x, w) = gauss_legendre(n_theta);
        let theta = x.iter().map(|&x| x.acos()).collect();
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let phi = (0..n_phi).map(|k| k as f64 * dphi).collect();
        Self { x, w, theta, phi }
    }

    pub fn n_theta(&self) -> usize {
        self.x.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi.len()
    }

    /// Integral over the sphere of a function given by samples (theta-major
    /// layout), using dA = dx dphi.
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        let np = self.n_phi();
        debug_assert_eq!(samples.len(), self.n_theta() * np);
        let dphi = 2.0 * std::f64::consts::PI / np as f64;
        let mut acc = 0.0;
        for i in 0..self.n_theta() {
            let mut row = 0.0;
            for q in 0..np {
                row += samples[i * np + q];
            }
            acc += self.w[i] * row;
        }
        acc * dphi
    }
}

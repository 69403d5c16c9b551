//! Shared numerical kernels: quadrature, interpolation, spectral
//! differentiation, least-squares fitting and a small expression evaluator.

pub mod expr;
pub mod fit;
pub mod interp;
pub mod quadrature;

pub use fit::{fit_powers, richardson_order, PowerFit};
pub use interp::{lagrange_resample, Barycentric};
pub use quadrature::{adaptive_simpson, gauss_legendre, legendre_p};

/// Spectral differentiation matrix on arbitrary distinct nodes, built from
/// barycentric weights. Row i approximates d/dx at node i.
pub fn differentiation_matrix(nodes: &[f64]) -> nalgebra::DMatrix<f64> {
    let n = nodes.len();
    let bary = Barycentric::new(nodes);
    let w = bary.weights();
    let mut d = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (w[j] / w[i]) / (nodes[i] - nodes[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    d
}

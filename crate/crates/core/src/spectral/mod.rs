//! Dirac spectra of conformally round metrics on the 2-sphere.
//!
//! The round-sphere Dirac operator has eigenvalues ±(k+1), k >= 0, each with
//! multiplicity 2(k+1). For a metric e^{2u} g_round the spectrum is that of
//! the generalized pencil D_round phi = lambda e^u phi in the round
//! eigenbasis, which this module assembles from spin-weight 1/2 harmonics
//! and solves by symmetric-definite reduction.

mod assemble;
mod basis;
mod grid;
mod metric;
mod solve;

pub use assemble::{assemble_axisym_block, assemble_multiplication_matrix, azimuthal_coupling_max};
pub use basis::{build_round_basis, build_round_basis_with_grid, Mode, RoundEigenBasis};
pub use grid::SphereGrid;
pub use metric::{ConformalSphereMetric, SampledField, SphereField};
pub use solve::{
    axisymmetric_mode_spectrum, conformal_dirac_spectrum, DiracSpectrumResult, SolveOptions,
};

/// Bar-Hijazi lower bound 2 sqrt(pi / area) for a 2-sphere metric of the
/// given area.
pub fn bar_hijazi_bound(area: f64) -> f64 {
    2.0 * (std::f64::consts::PI / area).sqrt()
}

//! Round-sphere Dirac eigenbasis realised through spin-weight 1/2 harmonics.
//!
//! For j = k + 1/2 and |m| <= j the two spinor components of an eigenmode
//! are the spin-weight +1/2 and -1/2 harmonics of degree j and order m; the
//! mode with eigenvalue sign s is (Y^{+}_{jm}, s Y^{-}_{jm})/sqrt(2). All
//! phase conventions cancel in the Gram/mass matrices, which are the only
//! quantities the solver consumes.

use super::grid::SphereGrid;
use crate::error::{Error, Result};
use crate::wigner;

/// One round eigenmode: band k >= 0, azimuthal order m (stored doubled, odd),
/// and the sign of the round eigenvalue +-(k+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mode {
    pub band: usize,
    pub two_m: i32,
    pub positive: bool,
}

impl Mode {
    pub fn two_j(&self) -> i32 {
        2 * self.band as i32 + 1
    }

    /// Round-sphere Dirac eigenvalue of this mode.
    pub fn eigenvalue(&self) -> f64 {
        let v = (self.band + 1) as f64;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

/// Evaluation tables of one azimuthal block: theta profiles of both spinor
/// components for every degree j = |m| .. L + 1/2.
#[derive(Debug, Clone)]
pub(crate) struct BlockTable {
    pub two_m: i32,
    /// comp_plus[j_idx][i] = N_j d^j_{m,-1/2}(theta_i), the spin +1/2 part.
    pub comp_plus: Vec<Vec<f64>>,
    /// comp_minus[j_idx][i] = N_j d^j_{m,+1/2}(theta_i), the spin -1/2 part.
    pub comp_minus: Vec<Vec<f64>>,
}

impl BlockTable {
    pub fn j_index(&self, two_j: i32) -> usize {
        ((two_j - self.two_m.abs()) / 2) as usize
    }
}

#[derive(Debug, Clone)]
pub struct RoundEigenBasis {
    pub truncation: usize,
    pub grid: SphereGrid,
    /// Block-major ordering: two_m ascending, then band, then sign (+, -).
    pub modes: Vec<Mode>,
    pub(crate) tables: Vec<BlockTable>,
}

impl RoundEigenBasis {
    pub(crate) fn table(&self, two_m: i32) -> &BlockTable {
        let l = self.truncation as i32;
        let idx = ((two_m + 2 * l + 1) / 2) as usize;
        &self.tables[idx]
    }

    /// Modes of one azimuthal block in basis order.
    pub fn block_modes(&self, two_m: i32) -> Vec<Mode> {
        self.modes
            .iter()
            .copied()
            .filter(|md| md.two_m == two_m)
            .collect()
    }

    /// All azimuthal orders present (doubled, odd integers).
    pub fn azimuthal_orders(&self) -> Vec<i32> {
        let l = self.truncation as i32;
        (-(2 * l + 1)..=2 * l + 1).step_by(2).collect()
    }

    /// Number of Galerkin modes: 2 (L+1)(L+2).
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Spinor component profiles of a mode at the quadrature nodes
    /// (spin +1/2 part, spin -1/2 part), without the 1/sqrt(2) and the sign.
    pub(crate) fn profiles(&self, mode: &Mode) -> (&[f64], &[f64]) {
        let t = self.table(mode.two_m);
        let ji = t.j_index(mode.two_j());
        (&t.comp_plus[ji], &t.comp_minus[ji])
    }
}

/// Build the basis with the default quadrature: L+2 Gauss-Legendre nodes in
/// cos(theta) by 2L+3 uniform azimuth nodes, exact for the bilinear products
/// of basis functions through band 2L.
pub fn build_round_basis(l: usize) -> Result<RoundEigenBasis> {
    build_round_basis_with_grid(l, l + 2, 2 * l + 3)
}

/// Build the basis on an oversampled grid (still Gauss-Legendre x uniform).
pub fn build_round_basis_with_grid(
    l: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<RoundEigenBasis> {
    if l < 1 {
        return Err(Error::InvalidArgument(format!(
            "truncation degree must be >= 1, got {l}"
        )));
    }
    if n_theta < l + 2 || n_phi < 2 * l + 3 {
        return Err(Error::Resolution(format!(
            "grid {n_theta} x {n_phi} below the exactness floor {} x {}",
            l + 2,
            2 * l + 3
        )));
    }
    if n_phi % 2 == 0 {
        return Err(Error::InvalidArgument(
            "azimuth node count must be odd".into(),
        ));
    }
    let grid = SphereGrid::new(n_theta, n_phi);
    let li = l as i32;
    let two_j_max = 2 * li + 1;
    let mut tables = Vec::new();
    let mut modes = Vec::new();
    let mut two_m = -(2 * li + 1);
    while two_m <= 2 * li + 1 {
        let cols_plus = wigner::d_column(two_m, -1, two_j_max, &grid.theta)?;
        let cols_minus = wigner::d_column(two_m, 1, two_j_max, &grid.theta)?;
        let n_j = cols_plus[0].len();
        let n_nodes = grid.n_theta();
        let mut comp_plus = vec![vec![0.0; n_nodes]; n_j];
        let mut comp_minus = vec![vec![0.0; n_nodes]; n_j];
        for ji in 0..n_j {
            let two_j = two_m.abs() + 2 * ji as i32;
            let norm = ((two_j as f64 + 1.0) / (4.0 * std::f64::consts::PI)).sqrt();
            for i in 0..n_nodes {
                comp_plus[ji][i] = norm * cols_plus[i][ji];
                comp_minus[ji][i] = norm * cols_minus[i][ji];
            }
        }
        tables.push(BlockTable {
            two_m,
            comp_plus,
            comp_minus,
        });
        let k_min = ((two_m.abs() - 1) / 2) as usize;
        for band in k_min..=l {
            modes.push(Mode {
                band,
                two_m,
                positive: true,
            });
            modes.push(Mode {
                band,
                two_m,
                positive: false,
            });
        }
        two_m += 2;
    }
    Ok(RoundEigenBasis {
        truncation: l,
        grid,
        modes,
        tables,
    })
}

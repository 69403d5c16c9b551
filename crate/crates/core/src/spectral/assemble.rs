//! Galerkin mass matrices <f phi_a, phi_b> in the round eigenbasis.

use nalgebra::{Complex, DMatrix};

use super::basis::{Mode, RoundEigenBasis};
use crate::error::{Error, Result};

type C64 = Complex<f64>;

/// Full Hermitian multiplication matrix of a positive function f on the
/// sphere, M[ab] = <f phi_a, phi_b> under the basis quadrature.
///
/// Block-diagonal in the azimuthal order when f is axisymmetric; Hermitian
/// positive definite whenever f > 0.
pub fn assemble_multiplication_matrix(
    f: &dyn Fn(f64, f64) -> f64,
    basis: &RoundEigenBasis,
) -> Result<DMatrix<C64>> {
    let grid = &basis.grid;
    let nt = grid.n_theta();
    let np = grid.n_phi();
    let mut samples = vec![0.0; nt * np];
    for i in 0..nt {
        for q in 0..np {
            let v = f(grid.x[i], grid.phi[q]);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Definiteness(format!(
                    "f({:.4}, {:.4}) = {v}",
                    grid.x[i], grid.phi[q]
                )));
            }
            samples[i * np + q] = v;
        }
    }
    // azimuthal Fourier coefficients c_q(theta_i), q = 0..=2L+1, from the
    // same uniform grid the quadrature rule uses
    let l = basis.truncation as i32;
    let q_max = (2 * l + 1) as usize;
    let mut four: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); nt]; q_max + 1];
    for (q_idx, row) in four.iter_mut().enumerate() {
        for i in 0..nt {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..np {
                let ang = -(q_idx as f64) * grid.phi[k];
                acc += C64::new(ang.cos(), ang.sin()) * samples[i * np + k];
            }
            row[i] = acc / np as f64;
        }
    }
    let modes = &basis.modes;
    let n = modes.len();
    let mut m = DMatrix::from_element(n, n, C64::new(0.0, 0.0));
    let two_pi = 2.0 * std::f64::consts::PI;
    for a in 0..n {
        let (ua, va) = basis.profiles(&modes[a]);
        let sa = if modes[a].positive { 1.0 } else { -1.0 };
        for b in a..n {
            let (ub, vb) = basis.profiles(&modes[b]);
            let sb = if modes[b].positive { 1.0 } else { -1.0 };
            let dq = (modes[a].two_m - modes[b].two_m) / 2;
            let coeff_row = &four[dq.unsigned_abs() as usize];
            let mut acc = C64::new(0.0, 0.0);
            for i in 0..nt {
                let c = if dq >= 0 {
                    coeff_row[i]
                } else {
                    coeff_row[i].conj()
                };
                let profile = ua[i] * ub[i] + sa * sb * va[i] * vb[i];
                acc += c * (grid.w[i] * profile);
            }
            let val = acc * C64::new(0.5 * two_pi, 0.0);
            m[(a, b)] = val;
            m[(b, a)] = val.conj();
        }
    }
    Ok(m)
}

/// One real symmetric azimuthal block of the multiplication matrix of an
/// axisymmetric f. Returns the block together with its mode list.
pub fn assemble_axisym_block(
    f: &dyn Fn(f64) -> f64,
    basis: &RoundEigenBasis,
    two_m: i32,
) -> Result<(DMatrix<f64>, Vec<Mode>)> {
    let l = basis.truncation as i32;
    if two_m.abs() > 2 * l + 1 || two_m.rem_euclid(2) == 0 {
        return Err(Error::InvalidArgument(format!(
            "azimuthal order 2m={two_m} outside the truncated basis"
        )));
    }
    let grid = &basis.grid;
    let nt = grid.n_theta();
    let mut fv = vec![0.0; nt];
    for i in 0..nt {
        let v = f(grid.x[i]);
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Definiteness(format!("f({:.4}) = {v}", grid.x[i])));
        }
        fv[i] = v;
    }
    let modes = basis.block_modes(two_m);
    let n = modes.len();
    let mut m = DMatrix::zeros(n, n);
    for a in 0..n {
        let (ua, va) = basis.profiles(&modes[a]);
        let sa = if modes[a].positive { 1.0 } else { -1.0 };
        for b in a..n {
            let (ub, vb) = basis.profiles(&modes[b]);
            let sb = if modes[b].positive { 1.0 } else { -1.0 };
            let mut acc = 0.0;
            for i in 0..nt {
                acc += grid.w[i] * fv[i] * (ua[i] * ub[i] + sa * sb * va[i] * vb[i]);
            }
            let val = std::f64::consts::PI * acc;
            m[(a, b)] = val;
            m[(b, a)] = val;
        }
    }
    Ok((m, modes))
}

/// Largest off-block magnitude |M[ab]| over pairs with different azimuthal
/// order; vanishes (to round-off) for axisymmetric f.
pub fn azimuthal_coupling_max(m: &DMatrix<C64>, basis: &RoundEigenBasis) -> f64 {
    let modes = &basis.modes;
    let mut worst = 0.0f64;
    for a in 0..modes.len() {
        for b in 0..modes.len() {
            if modes[a].two_m != modes[b].two_m {
                worst = worst.max(m[(a, b)].norm());
            }
        }
    }
    worst
}

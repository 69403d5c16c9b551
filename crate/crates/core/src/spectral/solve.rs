//! Generalized eigenproblem D_round phi = lambda e^u phi, reduced by a
//! Cholesky factorization of the mass matrix to a dense Hermitian solve.

use nalgebra::{Complex, DMatrix, DVector};

use super::assemble::{assemble_axisym_block, assemble_multiplication_matrix};
use super::basis::{build_round_basis_with_grid, Mode};
use super::metric::ConformalSphereMetric;
use crate::error::{Error, Result};

type C64 = Complex<f64>;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Accept lambda1 when the relative change under truncation refinement
    /// drops below this.
    pub convergence_tol: f64,
    /// Truncation increment used by the refinement probe.
    pub refine_step: usize,
    /// Hard cap on escalation; defaults to L + 4 * refine_step.
    pub max_truncation: Option<usize>,
    /// Grid override (node counts); defaults to (L+2, 2L+3).
    pub n_theta: Option<usize>,
    pub n_phi: Option<usize>,
    /// Eigenvalues below this magnitude are treated as numerical failure
    /// (zero is never in the spectrum on the sphere).
    pub zero_guard: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            convergence_tol: 1e-7,
            refine_step: 8,
            max_truncation: None,
            n_theta: None,
            n_phi: None,
            zero_guard: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiracSpectrumResult {
    /// All generalized eigenvalues of the truncated pencil, ascending.
    pub eigenvalues: Vec<f64>,
    /// First nonnegative eigenvalue, min |lambda|.
    pub lambda1: f64,
    /// Truncation the spectrum was computed at.
    pub truncation: usize,
    /// Relative change of lambda1 under the refinement probe.
    pub convergence_estimate: f64,
}

impl DiracSpectrumResult {
    /// Worst unpaired eigenvalue under lambda -> -lambda.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for &ev in &self.eigenvalues {
            let target = -ev;
            let best = self
                .eigenvalues
                .iter()
                .map(|&o| (o - target).abs())
                .fold(f64::INFINITY, f64::min);
            worst = worst.max(best);
        }
        worst
    }
}

fn grid_for(l: usize, opts: &SolveOptions) -> (usize, usize) {
    let nt = opts.n_theta.unwrap_or(l + 2).max(l + 2);
    let mut np = opts.n_phi.unwrap_or(2 * l + 3).max(2 * l + 3);
    if np % 2 == 0 {
        np += 1;
    }
    (nt, np)
}

fn min_abs(spectrum: &[f64], guard: f64) -> Result<f64> {
    let lam = spectrum
        .iter()
        .map(|v| v.abs())
        .fold(f64::INFINITY, f64::min);
    if !lam.is_finite() {
        return Err(Error::Numerical("empty or non-finite spectrum".into()));
    }
    if lam < guard {
        return Err(Error::Numerical(format!(
            "near-zero Dirac eigenvalue {lam:.3e}; zero is excluded on the sphere"
        )));
    }
    Ok(lam)
}

/// Eigenvalues of the real symmetric-definite pencil (diag(lam), M).
fn solve_block_pencil(lam: &[f64], m: DMatrix<f64>) -> Result<Vec<f64>> {
    let n = lam.len();
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Definiteness("mass-matrix block not positive definite".into()))?;
    let linv = chol
        .l()
        .solve_lower_triangular(&DMatrix::identity(n, n))
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let diag = DMatrix::from_diagonal(&DVector::from_column_slice(lam));
    let mut b = &linv * diag * linv.transpose();
    // symmetrize against round-off before the eigensolve
    b = 0.5 * (&b + b.transpose());
    Ok(b.symmetric_eigen().eigenvalues.iter().copied().collect())
}

/// Eigenvalues of the complex Hermitian-definite pencil (diag(lam), M).
fn solve_dense_pencil(lam: &[f64], m: DMatrix<C64>) -> Result<Vec<f64>> {
    let n = lam.len();
    let chol = m
        .cholesky()
        .ok_or_else(|| Error::Definiteness("mass matrix not positive definite".into()))?;
    let linv = chol
        .l()
        .solve_lower_triangular(&DMatrix::from_diagonal_element(n, n, C64::new(1.0, 0.0)))
        .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?;
    let diag = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        lam.iter().map(|&v| C64::new(v, 0.0)),
    ));
    let mut b = &linv * diag * linv.adjoint();
    let bh = b.adjoint();
    b = (b + bh).map(|z| z * 0.5);
    Ok(b.symmetric_eigen().eigenvalues.iter().copied().collect())
}

/// Full spectrum at a fixed truncation; block path for axisymmetric metrics,
/// dense Hermitian otherwise.
fn spectrum_at_truncation(
    metric: &ConformalSphereMetric,
    l: usize,
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    let (nt, np) = grid_for(l, opts);
    let basis = build_round_basis_with_grid(l, nt, np)?;
    let mut all = Vec::with_capacity(basis.len());
    if metric.is_axisymmetric() {
        let f = |x: f64| metric.u(x, 0.0).exp();
        for two_m in basis.azimuthal_orders() {
            let (m, modes) = assemble_axisym_block(&f, &basis, two_m)?;
            let lam: Vec<f64> = modes.iter().map(Mode::eigenvalue).collect();
            all.extend(solve_block_pencil(&lam, m)?);
        }
    } else {
        let f = |x: f64, phi: f64| metric.u(x, phi).exp();
        let m = assemble_multiplication_matrix(&f, &basis)?;
        let lam: Vec<f64> = basis.modes.iter().map(Mode::eigenvalue).collect();
        all = solve_dense_pencil(&lam, m)?;
    }
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(all)
}

/// Dirac spectrum of e^{2u} g_round by the conformal Galerkin pencil.
///
/// Solves at the requested truncation, probes L + refine_step, and escalates
/// until the relative change of lambda1 passes the convergence gate or the
/// cap is hit.
pub fn conformal_dirac_spectrum(
    metric: &ConformalSphereMetric,
    l: usize,
    opts: &SolveOptions,
) -> Result<DiracSpectrumResult> {
    if l < 1 {
        return Err(Error::InvalidArgument("truncation must be >= 1".into()));
    }
    let max_l = opts.max_truncation.unwrap_or(l + 4 * opts.refine_step);
    let mut l_cur = l;
    let mut spec_cur = spectrum_at_truncation(metric, l_cur, opts)?;
    if opts.convergence_tol.is_infinite() {
        // single fixed-truncation solve, no refinement probe
        let lambda1 = min_abs(&spec_cur, opts.zero_guard)?;
        return Ok(DiracSpectrumResult {
            lambda1,
            eigenvalues: spec_cur,
            truncation: l_cur,
            convergence_estimate: f64::NAN,
        });
    }
    loop {
        let l_next = l_cur + opts.refine_step;
        let spec_next = spectrum_at_truncation(metric, l_next, opts)?;
        let lam_cur = min_abs(&spec_cur, opts.zero_guard)?;
        let lam_next = min_abs(&spec_next, opts.zero_guard)?;
        let est = (lam_next - lam_cur).abs() / lam_next.abs().max(f64::MIN_POSITIVE);
        if est <= opts.convergence_tol {
            return Ok(DiracSpectrumResult {
                lambda1: lam_cur,
                eigenvalues: spec_cur,
                truncation: l_cur,
                convergence_estimate: est,
            });
        }
        if l_next > max_l {
            return Err(Error::Convergence {
                last: lam_next,
                previous: lam_cur,
                rel_change: est,
            });
        }
        l_cur = l_next;
        spec_cur = spec_next;
    }
}

/// Eigenvalues of a single azimuthal block of an axisymmetric metric.
pub fn axisymmetric_mode_spectrum(
    metric: &ConformalSphereMetric,
    two_m: i32,
    l: usize,
    opts: &SolveOptions,
) -> Result<Vec<f64>> {
    if !metric.is_axisymmetric() {
        return Err(Error::Precondition(
            "mode decomposition requires an axisymmetric metric".into(),
        ));
    }
    let (nt, np) = grid_for(l, opts);
    let basis = build_round_basis_with_grid(l, nt, np)?;
    let f = |x: f64| metric.u(x, 0.0).exp();
    let (m, modes) = assemble_axisym_block(&f, &basis, two_m)?;
    let lam: Vec<f64> = modes.iter().map(Mode::eigenvalue).collect();
    let mut out = solve_block_pencil(&lam, m)?;
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

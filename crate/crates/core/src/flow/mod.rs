//! The scalar-flat quasi-spherical construction on the exterior of a convex
//! axisymmetric surface.
//!
//! The exterior region is foliated by parallel surfaces Sigma_rho with
//! principal curvatures kappa_i / (1 + rho kappa_i). Requiring the metric
//! u^2 drho^2 + gamma_rho to be scalar flat reduces, through the
//! Gauss-Codazzi decomposition of the radial foliation, to the parabolic
//! equation
//!
//! ```text
//! H_rho du/drho = u^2 Lap_rho u + K_rho u (1 - u^2)
//! ```
//!
//! marched here by an implicit trapezoidal scheme with spectral derivatives
//! in the polar variable. The quantity Q(rho) = int H_rho (1 - 1/u) is
//! nonincreasing and, scaled by 1/(8 pi), converges to the mass of the end.

mod certificate;
mod residual;

pub use certificate::{theorem1_certificate, Theorem1Certificate};
pub use residual::{pde_residual, trajectory_residual, ResidualOptions};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::numerics::{differentiation_matrix, fit_powers, Barycentric};
use crate::surface::{Ambient, EmbeddedSurface};

/// Parallel-surface foliation of the exterior of a convex base.
#[derive(Debug, Clone)]
pub struct ExteriorFoliation {
    pub x: Vec<f64>,
    pub w: Vec<f64>,
    pub f0: Vec<f64>,
    pub h_tilde0: Vec<f64>,
    pub kappa1: Vec<f64>,
    pub kappa2: Vec<f64>,
    pub extent: f64,
}

impl ExteriorFoliation {
    pub fn new(base: &EmbeddedSurface) -> Result<Self> {
        if base.ambient != Ambient::Euclidean {
            return Err(Error::Precondition(
                "the quasi-spherical foliation lives in Euclidean space".into(),
            ));
        }
        if !base.convex {
            return Err(Error::Precondition(
                "non-convex base: the parallel foliation breaks down at focal points".into(),
            ));
        }
        Ok(Self {
            x: base.x.clone(),
            w: base.w.clone(),
            f0: base.f.clone(),
            h_tilde0: base.h_tilde.clone(),
            kappa1: base.kappa1.clone(),
            kappa2: base.kappa2.clone(),
            extent: base.extent,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.x.len()
    }

    /// Principal curvatures of Sigma_rho.
    pub fn principal_curvatures(&self, rho: f64, i: usize) -> (f64, f64) {
        (
            self.kappa1[i] / (1.0 + rho * self.kappa1[i]),
            self.kappa2[i] / (1.0 + rho * self.kappa2[i]),
        )
    }

    pub fn mean_curvature(&self, rho: f64) -> Vec<f64> {
        (0..self.n_nodes())
            .map(|i| {
                let (k1, k2) = self.principal_curvatures(rho, i);
                k1 + k2
            })
            .collect()
    }

    pub fn gauss_curvature(&self, rho: f64) -> Vec<f64> {
        (0..self.n_nodes())
            .map(|i| {
                let (k1, k2) = self.principal_curvatures(rho, i);
                k1 * k2
            })
            .collect()
    }

    /// Induced-metric profile (f_rho, h_tilde_rho) of Sigma_rho.
    pub fn metric_profile(&self, rho: f64) -> (Vec<f64>, Vec<f64>) {
        let f = (0..self.n_nodes())
            .map(|i| self.f0[i] * (1.0 + rho * self.kappa1[i]))
            .collect();
        let h = (0..self.n_nodes())
            .map(|i| self.h_tilde0[i] * (1.0 + rho * self.kappa2[i]))
            .collect();
        (f, h)
    }

    /// Integral over Sigma_rho of nodal values.
    pub fn integrate(&self, rho: f64, values: &[f64]) -> f64 {
        let (f, h) = self.metric_profile(rho);
        let two_pi = 2.0 * std::f64::consts::PI;
        two_pi
            * (0..self.n_nodes())
                .map(|i| self.w[i] * values[i] * f[i] * h[i])
                .sum::<f64>()
    }

    /// Monotone quantity Q(rho) = int H_rho (1 - 1/u) dSigma_rho.
    pub fn monotone_quantity(&self, rho: f64, u: &[f64]) -> f64 {
        let h = self.mean_curvature(rho);
        let vals: Vec<f64> = (0..self.n_nodes())
            .map(|i| h[i] * (1.0 - 1.0 / u[i]))
            .collect();
        self.integrate(rho, &vals)
    }
}

/// One accepted step of the flow.
#[derive(Debug, Clone)]
pub struct QsFlowState {
    pub rho: f64,
    pub u: Vec<f64>,
    pub q: f64,
}

#[derive(Debug, Clone)]
pub enum InitialData {
    Const(f64),
    /// u0 = H0 / (2 lambda1); stores lambda1.
    MeanCurvatureOverTwoLambda1(f64),
    Samples(Vec<f64>),
}

#[derive(Debug, Clone)]
pub struct FlowOptions {
    /// March until rho_max; defaults to 50 x base extent.
    pub rho_max: Option<f64>,
    pub initial_step: Option<f64>,
    /// Local error target per step (relative).
    pub step_tol: f64,
    pub max_steps: usize,
    /// Allowed upward drift of Q per step before the run is declared
    /// inconsistent.
    pub monotonicity_tol: f64,
    /// Disable adaptivity and march with this step (order studies).
    pub fixed_step: Option<f64>,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            rho_max: None,
            initial_step: None,
            step_tol: 1e-8,
            max_steps: 200_000,
            monotonicity_tol: 1e-8,
            fixed_step: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FlowTrajectory {
    pub states: Vec<QsFlowState>,
    pub initial: InitialData,
    pub rho_max: f64,
    /// Q(0).
    pub q0: f64,
    /// Mass estimate from the tail fit Q = Q_inf + a / rho.
    pub mass: f64,
    /// Largest upward step of Q observed (>= 0 means a violation of that
    /// size was seen; tiny values are round-off).
    pub monotone_defect: f64,
}

impl FlowTrajectory {
    pub fn max_deviation_from_one(&self) -> f64 {
        self.states
            .iter()
            .flat_map(|s| s.u.iter())
            .map(|&v| (v - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// u(rho, x) by local Lagrange interpolation across steps and
    /// barycentric interpolation in x.
    pub fn interpolate(&self, fol: &ExteriorFoliation) -> impl Fn(f64, f64) -> f64 + '_ {
        let bary = Barycentric::new(&fol.x);
        let rhos: Vec<f64> = self.states.iter().map(|s| s.rho).collect();
        move |rho: f64, x: f64| {
            let pos = rhos.partition_point(|&r| r < rho);
            let k = 6usize.min(rhos.len());
            let lo = pos.saturating_sub(k / 2).min(rhos.len() - k);
            let window: Vec<f64> = (lo..lo + k)
                .map(|j| bary.eval(&self.states[j].u, x))
                .collect();
            let mut acc = 0.0;
            for i in 0..k {
                let mut li = 1.0;
                for j in 0..k {
                    if i != j {
                        li *= (rho - rhos[lo + j]) / (rhos[lo + i] - rhos[lo + j]);
                    }
                }
                acc += li * window[i];
            }
            acc
        }
    }
}

/// Laplace-Beltrami matrix of Sigma_rho on axisymmetric samples:
/// diag(1/(f h)) D_x diag((h/f)(1-x^2)) D_x.
fn laplacian_matrix(fol: &ExteriorFoliation, dx: &DMatrix<f64>, rho: f64) -> DMatrix<f64> {
    let n = fol.n_nodes();
    let (f, h) = fol.metric_profile(rho);
    let mut mid = DMatrix::zeros(n, n);
    for i in 0..n {
        let wgt = (h[i] / f[i]) * (1.0 - fol.x[i] * fol.x[i]);
        for j in 0..n {
            mid[(i, j)] = wgt * dx[(i, j)];
        }
    }
    let mut lap = dx * mid;
    for i in 0..n {
        let s = 1.0 / (f[i] * h[i]);
        for j in 0..n {
            lap[(i, j)] *= s;
        }
    }
    lap
}

struct PdeOperator<'a> {
    fol: &'a ExteriorFoliation,
    dx: DMatrix<f64>,
}

impl<'a> PdeOperator<'a> {
    fn new(fol: &'a ExteriorFoliation) -> Self {
        Self {
            fol,
            dx: differentiation_matrix(&fol.x),
        }
    }

    /// d/dx with the row-sum trick: v_i = sum_{j != i} D_ij (u_j - u_i),
    /// which annihilates constants exactly instead of to round-off.
    fn apply_dx(&self, u: &DVector<f64>) -> DVector<f64> {
        let n = u.len();
        DVector::from_fn(n, |i, _| {
            let mut acc = 0.0;
            for j in 0..n {
                if j != i {
                    acc += self.dx[(i, j)] * (u[j] - u[i]);
                }
            }
            acc
        })
    }

    /// Lap_rho u on axisymmetric samples, in divergence form.
    fn lap_apply(&self, rho: f64, u: &DVector<f64>) -> DVector<f64> {
        let (f, h) = self.fol.metric_profile(rho);
        let du = self.apply_dx(u);
        let mid = DVector::from_fn(u.len(), |i, _| {
            (h[i] / f[i]) * (1.0 - self.fol.x[i] * self.fol.x[i]) * du[i]
        });
        let dmid = self.apply_dx(&mid);
        DVector::from_fn(u.len(), |i, _| dmid[i] / (f[i] * h[i]))
    }

    /// F(rho, u) = [u^2 Lap u + K u (1 - u^2)] / H.
    fn rhs(&self, rho: f64, u: &DVector<f64>) -> DVector<f64> {
        let lap_u = self.lap_apply(rho, u);
        let h = self.fol.mean_curvature(rho);
        let k = self.fol.gauss_curvature(rho);
        DVector::from_fn(u.len(), |i, _| {
            (u[i] * u[i] * lap_u[i] + k[i] * u[i] * (1.0 - u[i] * u[i])) / h[i]
        })
    }

    /// Jacobian dF/du.
    fn jacobian(&self, rho: f64, u: &DVector<f64>) -> DMatrix<f64> {
        let lap = laplacian_matrix(self.fol, &self.dx, rho);
        let lap_u = &lap * u;
        let h = self.fol.mean_curvature(rho);
        let k = self.fol.gauss_curvature(rho);
        let n = u.len();
        let mut j = DMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                j[(r, c)] = u[r] * u[r] * lap[(r, c)] / h[r];
            }
            j[(r, r)] += (2.0 * u[r] * lap_u[r] + k[r] * (1.0 - 3.0 * u[r] * u[r])) / h[r];
        }
        j
    }

    /// One implicit trapezoidal step; returns the new u.
    fn trapezoidal_step(&self, rho: f64, u: &DVector<f64>, drho: f64) -> Result<DVector<f64>> {
        let f0 = self.rhs(rho, u);
        let rho1 = rho + drho;
        let mut v = u + &f0 * drho; // explicit Euler predictor
        for _ in 0..30 {
            let f1 = self.rhs(rho1, &v);
            let g = &v - u - (&f0 + &f1) * (0.5 * drho);
            let res = g.amax();
            if res < 1e-13 * (1.0 + v.amax()) {
                return Ok(v);
            }
            let mut jac = self.jacobian(rho1, &v) * (-0.5 * drho);
            for i in 0..v.len() {
                jac[(i, i)] += 1.0;
            }
            let delta = jac
                .lu()
                .solve(&g)
                .ok_or_else(|| Error::FlowFailure("Newton system singular".into()))?;
            v -= delta;
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::FlowFailure("non-finite Newton iterate".into()));
            }
        }
        Err(Error::FlowFailure("Newton did not converge".into()))
    }
}

/// March the quasi-spherical flow from the base surface outward.
pub fn run_flow(
    base: &EmbeddedSurface,
    initial: InitialData,
    opts: &FlowOptions,
) -> Result<FlowTrajectory> {
    let fol = ExteriorFoliation::new(base)?;
    run_flow_on(&fol, initial, opts)
}

pub fn run_flow_on(
    fol: &ExteriorFoliation,
    initial: InitialData,
    opts: &FlowOptions,
) -> Result<FlowTrajectory> {
    let n = fol.n_nodes();
    let u0: Vec<f64> = match &initial {
        InitialData::Const(c) => vec![*c; n],
        InitialData::MeanCurvatureOverTwoLambda1(lambda1) => {
            if !(*lambda1 > 0.0) {
                return Err(Error::Precondition("lambda1 must be positive".into()));
            }
            fol.mean_curvature(0.0)
                .iter()
                .map(|h| h / (2.0 * lambda1))
                .collect()
        }
        InitialData::Samples(v) => {
            if v.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "initial data has {} samples, grid has {n}",
                    v.len()
                )));
            }
            v.clone()
        }
    };
    if u0.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::Precondition("initial data must be positive".into()));
    }
    let op = PdeOperator::new(fol);
    let rho_max = opts.rho_max.unwrap_or(50.0 * fol.extent);
    let mut drho = opts.initial_step.unwrap_or(1e-3 * fol.extent);
    let mut rho = 0.0;
    let mut u = DVector::from_column_slice(&u0);
    let q0 = fol.monotone_quantity(0.0, &u0);
    let mut states = vec![QsFlowState {
        rho: 0.0,
        u: u0.clone(),
        q: q0,
    }];
    let mut q_prev = q0;
    let mut monotone_defect = 0.0f64;
    if let Some(h) = opts.fixed_step {
        drho = h;
    }
    for _ in 0..opts.max_steps {
        if rho >= rho_max {
            break;
        }
        drho = drho.min(rho_max - rho);
        let mut growth = 1.0;
        let next = if opts.fixed_step.is_some() {
            op.trapezoidal_step(rho, &u, drho)?
        } else {
            // step-doubling error control
            let full = op.trapezoidal_step(rho, &u, drho)?;
            let half = op.trapezoidal_step(rho, &u, 0.5 * drho)?;
            let half2 = op.trapezoidal_step(rho + 0.5 * drho, &half, 0.5 * drho)?;
            let err = (&full - &half2).amax() / 3.0;
            let scale = opts.step_tol * (1.0 + half2.amax());
            if err > scale && drho > 1e-12 * fol.extent {
                drho *= (scale / err).powf(1.0 / 3.0).clamp(0.2, 0.9);
                continue;
            }
            growth = (scale / err.max(1e-300)).powf(1.0 / 3.0).clamp(0.5, 2.0);
            half2
        };
        rho += drho;
        u = next;
        if u.iter().any(|&v| !(v > 1e-8) || !v.is_finite()) {
            return Err(Error::FlowFailure(format!(
                "u degenerated at rho = {rho:.4}"
            )));
        }
        let uv: Vec<f64> = u.iter().copied().collect();
        let q = fol.monotone_quantity(rho, &uv);
        if q > q_prev + opts.monotonicity_tol {
            return Err(Error::Consistency(format!(
                "Q increased by {:.3e} at rho = {rho:.4}",
                q - q_prev
            )));
        }
        monotone_defect = monotone_defect.max(q - q_prev);
        q_prev = q;
        states.push(QsFlowState { rho, u: uv, q });
        if opts.fixed_step.is_none() {
            drho = (drho * growth).min(0.05 * (fol.extent + rho));
        }
    }
    if rho < rho_max {
        return Err(Error::FlowFailure(format!(
            "step budget exhausted at rho = {rho:.4} of {rho_max:.4}"
        )));
    }
    // tail fit Q ~ Q_inf + a / rho over the last decade
    let tail: Vec<&QsFlowState> = states.iter().filter(|s| s.rho >= 0.1 * rho_max).collect();
    let mass = if tail.len() >= 3 {
        let radii: Vec<f64> = tail.iter().map(|s| s.rho).collect();
        let qs: Vec<f64> = tail.iter().map(|s| s.q).collect();
        let fit = fit_powers(&radii, &qs, &[0.0, -1.0]);
        fit.coefficient_for(0.0).unwrap_or(q_prev) / (8.0 * std::f64::consts::PI)
    } else {
        q_prev / (8.0 * std::f64::consts::PI)
    };
    Ok(FlowTrajectory {
        states,
        initial,
        rho_max,
        q0,
        mass,
        monotone_defect,
    })
}

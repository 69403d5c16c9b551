//! Shared test oracles, independent of the implementation paths they check.

#![allow(dead_code)]

use diraclab::spectral::ConformalSphereMetric;

/// Independent eigenvalue oracle for one azimuthal block of an axisymmetric
/// conformal sphere metric: a projective shooting solver for the 1D system
/// in the Mercator variable t,
///
///   a' =  m a - lambda E(t) b,
///   b' = -m b + lambda E(t) a,      E(t) = e^{u} sech t,
///
/// whose square-integrable solutions exist exactly at the block eigenvalues.
/// This shares nothing with the Galerkin path except the conformal
/// rescaling of the eigenvalue problem.
pub struct ShootingOracle {
    half_width: f64,
    steps: usize,
}

impl Default for ShootingOracle {
    fn default() -> Self {
        Self {
            half_width: 26.0,
            steps: 26_000,
        }
    }
}

impl ShootingOracle {
    /// Mismatch of the two decaying solutions at t = 0; roots in lambda are
    /// block eigenvalues.
    pub fn matching(&self, metric: &ConformalSphereMetric, two_m: i32, lambda: f64) -> f64 {
        assert!(two_m > 0, "oracle convention: positive block order");
        let m = two_m as f64 / 2.0;
        let envelope = |t: f64, y: [f64; 2]| -> [f64; 2] {
            let x = -t.tanh();
            let e = metric.u(x, 0.0).exp() / t.cosh();
            [m * y[0] - lambda * e * y[1], -m * y[1] + lambda * e * y[0]]
        };
        let t0 = self.half_width;
        let n = self.steps;
        let march = |mut y: [f64; 2], from: f64, to: f64| -> [f64; 2] {
            let h = (to - from) / n as f64;
            let mut t = from;
            for _ in 0..n {
                let k1 = envelope(t, y);
                let y2 = [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]];
                let k2 = envelope(t + 0.5 * h, y2);
                let y3 = [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]];
                let k3 = envelope(t + 0.5 * h, y3);
                let y4 = [y[0] + h * k3[0], y[1] + h * k3[1]];
                let k4 = envelope(t + h, y4);
                y[0] += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
                y[1] += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
                // projective renormalization keeps the direction only
                let norm = (y[0] * y[0] + y[1] * y[1]).sqrt();
                y[0] /= norm;
                y[1] /= norm;
                t += h;
            }
            y
        };
        // recessive directions: (1, 0) decaying toward t -> -inf, (0, 1)
        // decaying toward t -> +inf
        let left = march([1.0, 0.0], -t0, 0.0);
        let right = march([0.0, 1.0], t0, 0.0);
        left[0] * right[1] - left[1] * right[0]
    }

    /// Smallest-magnitude eigenvalue of the block by scanning both signs
    /// over (0, lambda_hi] and bisecting each bracket.
    pub fn block_min_abs_eigenvalue(
        &self,
        metric: &ConformalSphereMetric,
        two_m: i32,
        lambda_hi: f64,
    ) -> Option<f64> {
        let mut best: Option<f64> = None;
        for sign in [1.0, -1.0] {
            if let Some(root) = self.first_root(metric, two_m, sign, lambda_hi) {
                let mag = root.abs();
                if best.map(|b| mag < b).unwrap_or(true) {
                    best = Some(mag);
                }
            }
        }
        best
    }

    fn first_root(
        &self,
        metric: &ConformalSphereMetric,
        two_m: i32,
        sign: f64,
        lambda_hi: f64,
    ) -> Option<f64> {
        let n_scan = 120;
        let lo = 1e-3 * lambda_hi;
        let mut prev_l = sign * lo;
        let mut prev_v = self.matching(metric, two_m, prev_l);
        for i in 1..=n_scan {
            let l = sign * (lo + (lambda_hi - lo) * i as f64 / n_scan as f64);
            let v = self.matching(metric, two_m, l);
            if prev_v == 0.0 {
                return Some(prev_l);
            }
            if v.signum() != prev_v.signum() {
                // bisect
                let (mut a, mut b) = (prev_l, l);
                let mut fa = prev_v;
                for _ in 0..64 {
                    let mid = 0.5 * (a + b);
                    let fm = self.matching(metric, two_m, mid);
                    if fm == 0.0 {
                        return Some(mid);
                    }
                    if fm.signum() == fa.signum() {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                return Some(0.5 * (a + b));
            }
            prev_l = l;
            prev_v = v;
        }
        None
    }
}

/// Total mean curvature of an axisymmetric ellipsoid by adaptive quadrature
/// of the closed-form integrand, independent of the surface grid.
pub fn ellipsoid_total_mean_curvature_oracle(a: f64, c: f64) -> f64 {
    // int H0 dSigma = 2 pi int_0^pi (a^2 c / D^2 + c) sin(tau) dtau,
    // D^2 = a^2 cos^2 + c^2 sin^2
    let f = move |t: f64| {
        let d2 = a * a * t.cos() * t.cos() + c * c * t.sin() * t.sin();
        (a * a * c / d2 + c) * t.sin()
    };
    2.0 * std::f64::consts::PI
        * diraclab::numerics::adaptive_simpson(&f, 0.0, std::f64::consts::PI, 1e-12)
}

pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: got {actual:.12e}, expected {expected:.12e} (|diff| = {:.3e} > {tol:.1e})",
        (actual - expected).abs()
    );
}

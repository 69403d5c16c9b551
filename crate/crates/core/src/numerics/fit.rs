//! Least-squares fits against fixed power ansaetze and Richardson order
//! estimation for convergence tables.

use nalgebra::{DMatrix, DVector};

/// Result of fitting samples(r) ~ sum_j c_j r^{p_j}.
#[derive(Debug, Clone)]
pub struct PowerFit {
    pub powers: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// 1-sigma uncertainties from the residual variance and normal matrix.
    pub uncertainties: Vec<f64>,
    pub residuals: Vec<f64>,
    pub residual_norm: f64,
}

/// Least squares of `samples` against the span of r^{p_j} via SVD.
pub fn fit_powers(radii: &[f64], samples: &[f64], powers: &[f64]) -> PowerFit {
    assert_eq!(radii.len(), samples.len());
    assert!(radii.len() >= powers.len(), "underdetermined power fit");
    let m = radii.len();
    let n = powers.len();
    let a = DMatrix::from_fn(m, n, |i, j| radii[i].powf(powers[j]));
    let b = DVector::from_column_slice(samples);
    let svd = a.clone().svd(true, true);
    let c = svd
        .solve(&b, 1e-14)
        .expect("svd solve cannot fail with computed factors");
    let resid = &a * &c - &b;
    let dof = (m as f64 - n as f64).max(1.0);
    let sigma2 = resid.norm_squared() / dof;
    // covariance = sigma^2 (A^T A)^{-1}
    let ata = a.transpose() * &a;
    let unc = match ata.try_inverse() {
        Some(inv) => (0..n)
            .map(|j| (sigma2 * inv[(j, j)]).max(0.0).sqrt())
            .collect(),
        None => vec![f64::NAN; n],
    };
    PowerFit {
        powers: powers.to_vec(),
        coefficients: c.iter().copied().collect(),
        uncertainties: unc,
        residuals: resid.iter().map(|r| -r).collect(),
        residual_norm: resid.norm(),
    }
}

impl PowerFit {
    pub fn coefficient_for(&self, power: f64) -> Option<f64> {
        self.powers
            .iter()
            .position(|&p| (p - power).abs() < 1e-12)
            .map(|i| self.coefficients[i])
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.powers
            .iter()
            .zip(&self.coefficients)
            .map(|(&p, &c)| c * r.powf(p))
            .sum()
    }
}

/// Empirical order of residual decay: log-log regression slope of |values|
/// against the scale parameter.
pub fn loglog_slope(scales: &[f64], values: &[f64]) -> f64 {
    let pairs: Vec<(f64, f64)> = scales
        .iter()
        .zip(values)
        .filter(|(_, v)| v.abs() > 0.0)
        .map(|(&s, &v)| (s.ln(), v.abs().ln()))
        .collect();
    let n = pairs.len() as f64;
    let sx: f64 = pairs.iter().map(|p| p.0).sum();
    let sy: f64 = pairs.iter().map(|p| p.1).sum();
    let sxx: f64 = pairs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pairs.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Richardson order estimate from a resolution series `(h, value)`.
///
/// Returns `None` when consecutive differences sit below the round-off floor
/// (the series is converged), otherwise the estimated order per triplet
/// averaged over the series tail.
pub fn richardson_order(series: &[(f64, f64)]) -> Option<f64> {
    assert!(series.len() >= 3, "order estimate needs three levels");
    let scale = series
        .iter()
        .map(|(_, v)| v.abs())
        .fold(0.0f64, f64::max)
        .max(1e-300);
    let mut orders = Vec::new();
    for w in series.windows(3) {
        let (h1, v1) = w[0];
        let (h2, v2) = w[1];
        let (h3, v3) = w[2];
        let d1 = v1 - v2;
        let d2 = v2 - v3;
        if d1.abs() < 1e-14 * scale || d2.abs() < 1e-14 * scale {
            continue;
        }
        // v = v* + C h^p  =>  d1/d2 = (h1^p - h2^p)/(h2^p - h3^p); solve for p
        // assuming geometric-ish spacing via the two-ratio formula.
        let r = (d1 / d2).abs();
        let hr = h1 / h2;
        if r > 0.0 && hr > 0.0 && (hr - h2 / h3).abs() < 0.2 * hr {
            orders.push(r.ln() / hr.ln());
        }
    }
    if orders.is_empty() {
        None
    } else {
        Some(orders.iter().sum::<f64>() / orders.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn recovers_power_coefficients() {
        let radii: Vec<f64> = (1..=12).map(|i| 0.05 + 0.02 * i as f64).collect();
        let samples: Vec<f64> = radii
            .iter()
            .map(|&r| 2.0 / r + 0.5 * r - 0.1 * r * r * r)
            .collect();
        let fit = fit_powers(&radii, &samples, &[-1.0, 1.0, 3.0]);
        assert_abs_diff_eq!(fit.coefficient_for(-1.0).unwrap(), 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.coefficient_for(1.0).unwrap(), 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(fit.coefficient_for(3.0).unwrap(), -0.1, epsilon = 1e-9);
    }

    #[test]
    fn richardson_detects_fourth_order() {
        let series: Vec<(f64, f64)> = (0..5)
            .map(|i| {
                let h = 0.1 / 2f64.powi(i);
                (h, 1.0 + 3.0 * h.powi(4))
            })
            .collect();
        let p = richardson_order(&series).unwrap();
        assert_abs_diff_eq!(p, 4.0, epsilon = 1e-6);
    }

    #[test]
    fn richardson_converged_sentinel() {
        let series = vec![(0.1, 1.0), (0.05, 1.0), (0.025, 1.0)];
        assert!(richardson_order(&series).is_none());
    }
}

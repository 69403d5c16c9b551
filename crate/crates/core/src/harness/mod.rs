//! Quantitative verdicts: every inequality and expansion is evaluated into a
//! CheckRecord or ExpansionFit with explicit slacks, tolerances and
//! provenance of both sides.

mod checks;
mod expansions;

pub use checks::{
    all_ok, any_violated, check_bar, check_bar_and_hijazi, check_bar_hijazi_metric,
    check_euclidean_suite, check_hmz_integral_improvement, check_main_upper_bound, check_minkowski,
    hyperbolic_checks, metric_property_records, surface_lambda1, PipelineOptions,
};
pub use expansions::{
    large_sphere_mass_recovery, small_sphere_expansion, LargeSphereOptions, MassRecovery,
    MassSample, SmallSphereExpansion, SmallSphereOptions,
};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Equality,
    Violated,
    Inconclusive,
}

/// One evaluated inequality. Slack is oriented so that slack >= 0 means the
/// statement holds; |slack| <= tolerance is recorded as equality.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub inputs: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub lhs_source: String,
    pub rhs_source: String,
}

impl CheckRecord {
    #[allow(clippy::too_many_arguments)]
    pub fn evaluate(
        id: &str,
        inputs: &str,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        lhs_source: &str,
        rhs_source: &str,
    ) -> Self {
        let slack = rhs - lhs;
        let verdict = if !slack.is_finite() {
            Verdict::Inconclusive
        } else if slack < -tolerance {
            Verdict::Violated
        } else if slack.abs() <= tolerance {
            Verdict::Equality
        } else {
            Verdict::Holds
        };
        Self {
            id: id.to_string(),
            inputs: inputs.to_string(),
            lhs,
            rhs,
            slack,
            tolerance,
            verdict,
            lhs_source: lhs_source.to_string(),
            rhs_source: rhs_source.to_string(),
        }
    }

    pub fn inconclusive(id: &str, inputs: &str, reason: &str) -> Self {
        Self {
            id: id.to_string(),
            inputs: inputs.to_string(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            slack: f64::NAN,
            tolerance: 0.0,
            verdict: Verdict::Inconclusive,
            lhs_source: reason.to_string(),
            rhs_source: reason.to_string(),
        }
    }

    /// True when the verdict is holds or equality.
    pub fn ok(&self) -> bool {
        matches!(self.verdict, Verdict::Holds | Verdict::Equality)
    }
}

/// Target for a fitted coefficient: a value or a bracket, with provenance.
#[derive(Debug, Clone, Serialize)]
pub struct CoefficientTarget {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub provenance: String,
}

impl CoefficientTarget {
    pub fn point(value: f64, provenance: &str) -> Self {
        Self {
            value,
            lo: value,
            hi: value,
            provenance: provenance.to_string(),
        }
    }

    pub fn bracket(lo: f64, hi: f64, provenance: &str) -> Self {
        Self {
            value: 0.5 * (lo + hi),
            lo,
            hi,
            provenance: provenance.to_string(),
        }
    }
}

/// A least-squares fit of an observable against fixed powers of the radius,
/// with per-coefficient targets.
#[derive(Debug, Clone, Serialize)]
pub struct ExpansionFit {
    pub radii: Vec<f64>,
    pub samples: Vec<f64>,
    pub powers: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub uncertainties: Vec<f64>,
    pub targets: Vec<Option<CoefficientTarget>>,
    pub residual_norm: f64,
}

impl ExpansionFit {
    pub fn from_samples(
        radii: &[f64],
        samples: &[f64],
        powers: &[f64],
        targets: Vec<Option<CoefficientTarget>>,
    ) -> Self {
        let fit = crate::numerics::fit_powers(radii, samples, powers);
        Self {
            radii: radii.to_vec(),
            samples: samples.to_vec(),
            powers: powers.to_vec(),
            coefficients: fit.coefficients,
            uncertainties: fit.uncertainties,
            targets,
            residual_norm: fit.residual_norm,
        }
    }

    pub fn coefficient_for(&self, power: f64) -> Option<f64> {
        self.powers
            .iter()
            .position(|&p| (p - power).abs() < 1e-12)
            .map(|i| self.coefficients[i])
    }
}


/// Empirical remainder exponent of an expansion: fit the ansatz on
/// geometrically scaled copies of the base window and regress the residual
/// norm against the scale. For power-law bases the omitted-term residual
/// scales exactly like s^p, so the slope recovers the remainder order.
pub fn remainder_order<F: Fn(f64) -> f64>(
    sampler: F,
    base_radii: &[f64],
    powers: &[f64],
    scales: &[f64],
) -> f64 {
    let norms: Vec<f64> = scales
        .iter()
        .map(|&s| {
            let radii: Vec<f64> = base_radii.iter().map(|&r| s * r).collect();
            let samples: Vec<f64> = radii.iter().map(|&r| sampler(r)).collect();
            crate::numerics::fit_powers(&radii, &samples, powers).residual_norm
        })
        .collect();
    crate::numerics::fit::loglog_slope(scales, &norms)
}

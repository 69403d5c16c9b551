//! Inequality checks over surfaces, metrics and charts.

use super::{CheckRecord, Verdict};
use crate::ambient::{coordinate_sphere, Chart};
use crate::error::{Error, Result};
use crate::spectral::{
    bar_hijazi_bound, conformal_dirac_spectrum, ConformalSphereMetric, DiracSpectrumResult,
    SolveOptions,
};
use crate::surface::{
    uniformize_axisymmetric, Ambient, EmbeddedSurface, UniformizationOptions, UniformizationResult,
};

/// Options threaded through the surface -> metric -> spectrum pipeline.
#[derive(Debug, Clone)]
pub struct PipelineOptions {
    pub truncation: usize,
    pub solve: SolveOptions,
    pub uniformize: UniformizationOptions,
    /// Relative tolerance used for equality detection in records.
    pub equality_tol: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            truncation: 16,
            solve: SolveOptions::default(),
            uniformize: UniformizationOptions::default(),
            equality_tol: 1e-6,
        }
    }
}

/// Intrinsic first Dirac eigenvalue of an embedded axisymmetric surface via
/// uniformization, together with the uniformized metric.
pub fn surface_lambda1(
    surface: &EmbeddedSurface,
    opts: &PipelineOptions,
) -> Result<(DiracSpectrumResult, UniformizationResult)> {
    let uni = uniformize_axisymmetric(surface, &opts.uniformize)?;
    let spec = conformal_dirac_spectrum(&uni.metric, opts.truncation, &opts.solve)?;
    Ok((spec, uni))
}

fn require_euclidean_convex(surface: &EmbeddedSurface) -> Result<()> {
    if surface.ambient != Ambient::Euclidean {
        return Err(Error::Precondition(
            "check needs a Euclidean surface".into(),
        ));
    }
    if !surface.convex {
        return Err(Error::Precondition("check needs a convex surface".into()));
    }
    Ok(())
}

/// lambda1 <= int H0 dSigma / (2 |Sigma|), with equality detection for round
/// spheres. Spectral non-convergence degrades to an inconclusive record.
pub fn check_main_upper_bound(
    surface: &EmbeddedSurface,
    opts: &PipelineOptions,
) -> Result<CheckRecord> {
    require_euclidean_convex(surface)?;
    let rhs = surface.total_mean_curvature() / (2.0 * surface.area);
    match surface_lambda1(surface, opts) {
        Ok((spec, _)) => {
            let tol = opts.equality_tol * spec.lambda1.abs().max(rhs.abs());
            Ok(CheckRecord::evaluate(
                "upper-bound",
                &surface.descriptor,
                spec.lambda1,
                rhs,
                tol,
                "sphere-spectral via uniformization",
                "surface quadrature of H0",
            ))
        }
        Err(Error::Convergence { .. }) => Ok(CheckRecord::inconclusive(
            "upper-bound",
            &surface.descriptor,
            "spectrum did not converge",
        )),
        Err(e) => Err(e),
    }
}

/// lambda1 <= sqrt( int H0^2 dSigma / (4 |Sigma|) ).
pub fn check_bar(
    surface: &EmbeddedSurface,
    lambda1: f64,
    opts: &PipelineOptions,
) -> Result<CheckRecord> {
    require_euclidean_convex(surface)?;
    let h0 = surface.mean_curvature();
    let h2: Vec<f64> = h0.iter().map(|&h| h * h).collect();
    let rhs = (surface.integrate(&h2) / (4.0 * surface.area)).sqrt();
    let tol = opts.equality_tol * lambda1.abs().max(rhs.abs());
    Ok(CheckRecord::evaluate(
        "bar",
        &surface.descriptor,
        lambda1,
        rhs,
        tol,
        "sphere-spectral via uniformization",
        "surface quadrature of H0^2",
    ))
}

/// lambda1 >= 2 sqrt(pi / area) for an abstract conformal metric.
pub fn check_bar_hijazi_metric(
    metric: &ConformalSphereMetric,
    lambda1: f64,
    inputs: &str,
    equality_tol: f64,
) -> CheckRecord {
    let bound = bar_hijazi_bound(metric.area());
    let tol = equality_tol * lambda1.abs().max(bound.abs());
    CheckRecord::evaluate(
        "bar-hijazi",
        inputs,
        bound,
        lambda1,
        tol,
        "2 sqrt(pi/area)",
        "sphere-spectral",
    )
}

/// The pair (Bar, Bar-Hijazi) for an embedded surface.
pub fn check_bar_and_hijazi(
    surface: &EmbeddedSurface,
    opts: &PipelineOptions,
) -> Result<(CheckRecord, CheckRecord)> {
    let (spec, uni) = surface_lambda1(surface, opts)?;
    let bar = check_bar(surface, spec.lambda1, opts)?;
    let bh = check_bar_hijazi_metric(
        &uni.metric,
        spec.lambda1,
        &surface.descriptor,
        opts.equality_tol,
    );
    Ok((bar, bh))
}

/// int H0 dSigma >= 4 sqrt(pi |Sigma|) for convex Euclidean surfaces.
pub fn check_minkowski(surface: &EmbeddedSurface, equality_tol: f64) -> Result<CheckRecord> {
    require_euclidean_convex(surface)?;
    let lhs = 4.0 * (std::f64::consts::PI * surface.area).sqrt();
    let rhs = surface.total_mean_curvature();
    let tol = equality_tol * lhs.abs().max(rhs.abs());
    Ok(CheckRecord::evaluate(
        "minkowski",
        &surface.descriptor,
        lhs,
        rhs,
        tol,
        "4 sqrt(pi area)",
        "surface quadrature of H0",
    ))
}

/// The full Euclidean suite sharing one spectrum solve: upper bound, Bar,
/// Bar-Hijazi, Minkowski.
pub fn check_euclidean_suite(
    surface: &EmbeddedSurface,
    opts: &PipelineOptions,
) -> Result<Vec<CheckRecord>> {
    require_euclidean_convex(surface)?;
    let rhs_main = surface.total_mean_curvature() / (2.0 * surface.area);
    let (spec, uni) = match surface_lambda1(surface, opts) {
        Ok(v) => v,
        Err(Error::Convergence { .. }) => {
            return Ok(vec![CheckRecord::inconclusive(
                "upper-bound",
                &surface.descriptor,
                "spectrum did not converge",
            )])
        }
        Err(e) => return Err(e),
    };
    let tol_main = opts.equality_tol * spec.lambda1.abs().max(rhs_main.abs());
    let main = CheckRecord::evaluate(
        "upper-bound",
        &surface.descriptor,
        spec.lambda1,
        rhs_main,
        tol_main,
        "sphere-spectral via uniformization",
        "surface quadrature of H0",
    );
    let bar = check_bar(surface, spec.lambda1, opts)?;
    let bh = check_bar_hijazi_metric(
        &uni.metric,
        spec.lambda1,
        &surface.descriptor,
        opts.equality_tol,
    );
    let mink = check_minkowski(surface, opts.equality_tol)?;
    Ok(vec![main, bar, bh, mink])
}

/// lambda1(S_r) > int H_r / (2 |S_r|) >= min H_r / 2 on large coordinate
/// spheres of a chart with positive mass. Two records per radius.
pub fn check_hmz_integral_improvement(
    chart: &dyn Chart,
    radii: &[f64],
    n_theta: usize,
    n_phi: usize,
    opts: &PipelineOptions,
) -> Result<Vec<CheckRecord>> {
    let mass = chart
        .mass()
        .ok_or_else(|| Error::Precondition("chart must declare its mass".into()))?;
    if mass < 0.0 {
        return Err(Error::Precondition("mass must be nonnegative".into()));
    }
    let mut out = Vec::new();
    for &r in radii {
        let sphere = coordinate_sphere(chart, r, n_theta, n_phi)?;
        let inputs = format!("{} coordinate sphere r={r}", chart.name());
        let integral_bound = sphere.total_mean_curvature / (2.0 * sphere.area);
        let min_h = sphere
            .mean_curvature
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        let (x, f, h_tilde) = sphere.axisym_profile()?;
        let uni = crate::surface::uniformize_parts(
            &x,
            &f,
            &h_tilde,
            None,
            sphere.area,
            &opts.uniformize,
        )?;
        let record = match conformal_dirac_spectrum(&uni.metric, opts.truncation, &opts.solve) {
            Ok(spec) => {
                let tol = opts.equality_tol * spec.lambda1.abs();
                CheckRecord::evaluate(
                    "hmz-integral",
                    &inputs,
                    integral_bound,
                    spec.lambda1,
                    tol,
                    "total mean curvature / (2 area)",
                    "sphere-spectral on the induced metric",
                )
            }
            Err(Error::Convergence { .. }) => {
                CheckRecord::inconclusive("hmz-integral", &inputs, "spectrum did not converge")
            }
            Err(e) => return Err(e),
        };
        out.push(record);
        let tol = opts.equality_tol * integral_bound.abs();
        out.push(CheckRecord::evaluate(
            "hmz-pointwise",
            &inputs,
            0.5 * min_h,
            integral_bound,
            tol,
            "min H_r / 2",
            "total mean curvature / (2 area)",
        ));
    }
    Ok(out)
}

/// Hyperbolic-ambient checks on an embedded surface in H^3(-kappa^2).
///
/// lambda1 of the modified operators is computed as sqrt(lambda1^2 +
/// kappa^2) from the intrinsic spectrum; the records assert the weighted
/// upper bound, the Minkowski-type bound with weight cosh(kappa r), the
/// Ginoux bound, and the lower-bound form lambda_pm^2 >= lambda1^2 +
/// kappa^2.
pub fn hyperbolic_checks(
    surface: &EmbeddedSurface,
    opts: &PipelineOptions,
) -> Result<Vec<CheckRecord>> {
    let kappa = match surface.ambient {
        Ambient::Hyperbolic { kappa } => kappa,
        Ambient::Euclidean => {
            return Err(Error::Precondition(
                "hyperbolic checks need a hyperbolic-embedded surface".into(),
            ))
        }
    };
    // hypothesis: intrinsic sectional curvature above -kappa^2
    let k_min = surface
        .intrinsic_gauss_curvature()
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    if k_min <= -kappa * kappa {
        return Err(Error::Precondition(format!(
            "sectional curvature {k_min:.4} not above -kappa^2 = {:.4}",
            -kappa * kappa
        )));
    }
    let (spec, _) = surface_lambda1(surface, opts)?;
    let lambda1 = spec.lambda1;
    let lambda_pm = (lambda1 * lambda1 + kappa * kappa).sqrt();
    let (weight_area, weighted_h) = surface.weighted_mean_curvature_integrals()?;
    let inputs = &surface.descriptor;
    let mut out = Vec::new();
    // lower-bound form of the modified-operator spectrum
    {
        let lhs = lambda1 * lambda1 + kappa * kappa;
        let rhs = lambda_pm * lambda_pm;
        out.push(CheckRecord::evaluate(
            "dpm-lower",
            inputs,
            lhs,
            rhs,
            1e-12 * lhs.abs().max(rhs.abs()),
            "lambda1^2 + kappa^2",
            "lambda_pm^2",
        ));
    }
    {
        let lhs = lambda_pm * weight_area;
        let rhs = 0.5 * weighted_h;
        out.push(CheckRecord::evaluate(
            "hyperbolic-upper-bound",
            inputs,
            lhs,
            rhs,
            opts.equality_tol * lhs.abs().max(rhs.abs()),
            "lambda_pm int cosh(kappa r)",
            "int H0 cosh(kappa r) / 2",
        ));
    }
    {
        let lhs =
            4.0 * (std::f64::consts::PI / surface.area + 0.25 * kappa * kappa).sqrt() * weight_area;
        let rhs = weighted_h;
        out.push(CheckRecord::evaluate(
            "hyperbolic-minkowski",
            inputs,
            lhs,
            rhs,
            opts.equality_tol * lhs.abs().max(rhs.abs()),
            "4 sqrt(pi/area + kappa^2/4) int cosh(kappa r)",
            "int H0 cosh(kappa r)",
        ));
    }
    {
        let sup_h = surface
            .mean_curvature()
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        let lhs = lambda1 * lambda1;
        let rhs = 0.25 * (sup_h * sup_h - 4.0 * kappa * kappa);
        out.push(CheckRecord::evaluate(
            "ginoux",
            inputs,
            lhs,
            rhs,
            opts.equality_tol * lhs.abs().max(rhs.abs()),
            "lambda1^2",
            "((sup H0)^2 - 4 kappa^2)/4",
        ));
    }
    Ok(out)
}

/// Property records for one conformal sphere metric: spectral symmetry,
/// Bar-Hijazi, Gauss-Bonnet, rotation invariance at fixed truncation, and
/// Moebius re-gauging invariance. Used by the randomized sweeps.
pub fn metric_property_records(
    metric: &ConformalSphereMetric,
    inputs: &str,
) -> Result<Vec<CheckRecord>> {
    let mut records = Vec::new();
    let opts = SolveOptions::default();
    let res = conformal_dirac_spectrum(metric, 24, &opts)?;
    records.push(CheckRecord::evaluate(
        "spectral-symmetry",
        inputs,
        res.symmetry_defect(),
        1e-8,
        0.0,
        "max unpaired eigenvalue",
        "tolerance",
    ));
    records.push(check_bar_hijazi_metric(metric, res.lambda1, inputs, 1e-8));
    records.push(CheckRecord::evaluate(
        "gauss-bonnet",
        inputs,
        metric.gauss_bonnet_defect()?,
        1e-8,
        0.0,
        "|int K dSigma - 4 pi|",
        "tolerance",
    ));
    // rotation invariance: the truncated span is rotation invariant, so the
    // spectra at one fixed truncation must agree up to quadrature error
    {
        let l = 10;
        let dense = SolveOptions {
            convergence_tol: f64::INFINITY,
            n_theta: Some(2 * l + 16),
            n_phi: Some(4 * l + 17),
            ..Default::default()
        };
        let rotated = metric.rotated_about_y(0.7);
        let a = conformal_dirac_spectrum(metric, l, &dense)?;
        let b = conformal_dirac_spectrum(&rotated, l, &dense)?;
        let worst = a
            .eigenvalues
            .iter()
            .zip(&b.eigenvalues)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        records.push(CheckRecord::evaluate(
            "rotation-invariance",
            inputs,
            worst,
            1e-8,
            0.0,
            "max |spectrum - rotated spectrum| at fixed truncation",
            "tolerance",
        ));
    }
    // Moebius re-gauging: isometric metrics, so the low spectrum agrees once
    // both truncations resolve it
    {
        let translated = metric.mobius_translated(0.3)?;
        let a = conformal_dirac_spectrum(metric, 32, &opts)?;
        let b = conformal_dirac_spectrum(&translated, 32, &opts)?;
        // compare magnitudes: the cutoff may split a +- multiplet, whose
        // members only agree up to sign
        let low = |r: &DiracSpectrumResult| {
            let mut v: Vec<f64> = r.eigenvalues.iter().map(|e| e.abs()).collect();
            v.sort_by(|p, q| p.partial_cmp(q).unwrap());
            v.truncate(6);
            v
        };
        let worst = low(&a)
            .iter()
            .zip(&low(&b))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        records.push(CheckRecord::evaluate(
            "mobius-invariance",
            inputs,
            worst,
            1e-6,
            0.0,
            "max low-spectrum difference after re-gauging",
            "tolerance",
        ));
    }
    Ok(records)
}

/// True when every record holds (or is an equality).
pub fn all_ok(records: &[CheckRecord]) -> bool {
    records.iter().all(CheckRecord::ok)
}

/// True when any record is violated.
pub fn any_violated(records: &[CheckRecord]) -> bool {
    records.iter().any(|r| r.verdict == Verdict::Violated)
}

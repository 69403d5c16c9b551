//! Explicit 3-manifold charts behind a common trait, selected by name at
//! runtime, plus geodesic-sphere and coordinate-sphere sampling and
//! pointwise curvature invariants.

mod charts;
mod coordsphere;
mod curvature;
mod geodesic;

pub use charts::{
    chart_names, parse_chart, EuclideanChart, PerturbedFlatChart, SchwarzschildIsotropicChart,
    SpaceFormChart,
};
pub use coordsphere::coordinate_sphere;
pub use curvature::{curvature_at, scalar_curvature, scalar_from_parts, CurvatureInvariants};
pub use geodesic::{geodesic_sphere, GeodesicOptions, GeodesicSphereSample, SphereKind};

use nalgebra::{Matrix3, Vector3};

pub type Point = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// First and second coordinate derivatives of the metric at a point.
#[derive(Debug, Clone)]
pub struct MetricDerivatives {
    /// first[k] = d g / d x_k
    pub first: [Mat3; 3],
    /// second[k][l] = d^2 g / d x_k d x_l (symmetric in k, l)
    pub second: [[Mat3; 3]; 3],
}

/// A 3-manifold chart: an explicit metric field g_ij(x) with derivative
/// access. Implementations are read-only after construction and safe to
/// share across threads.
pub trait Chart: Send + Sync {
    fn name(&self) -> &str;

    /// Metric components at a point.
    fn metric(&self, p: &Point) -> Mat3;

    /// Metric derivatives; the default takes 4th-order central differences
    /// of `metric` with step `h`. Closed-form charts override and ignore
    /// `h`.
    fn derivatives(&self, p: &Point, h: f64) -> MetricDerivatives {
        fd_derivatives(&|q: &Point| self.metric(q), p, h)
    }

    /// Whether `derivatives` is exact (no Richardson check needed).
    fn has_exact_derivatives(&self) -> bool {
        false
    }

    fn domain_contains(&self, _p: &Point) -> bool {
        true
    }

    /// Declared ADM mass, when the chart has one.
    fn mass(&self) -> Option<f64> {
        None
    }

    /// Deviation from the flat metric, sigma = g - delta, when meaningful.
    fn sigma(&self, _p: &Point) -> Option<Mat3> {
        None
    }

    /// Decay rate tau of sigma = O(|x|^-tau).
    fn decay_rate(&self) -> Option<f64> {
        None
    }

    fn is_asymptotically_flat(&self) -> bool {
        false
    }

    /// Closed-form curvature invariants where the chart kind permits.
    fn closed_form_curvature(&self, _p: &Point) -> Option<CurvatureInvariants> {
        None
    }
}

/// 4th-order central differences of a matrix field.
pub(crate) fn fd_derivatives(g: &dyn Fn(&Point) -> Mat3, p: &Point, h: f64) -> MetricDerivatives {
    let shift = |k: usize, s: f64| {
        let mut q = *p;
        q[k] += s;
        g(&q)
    };
    let mut first = [Mat3::zeros(); 3];
    for (k, f) in first.iter_mut().enumerate() {
        *f = (8.0 * (shift(k, h) - shift(k, -h)) - (shift(k, 2.0 * h) - shift(k, -2.0 * h)))
            / (12.0 * h);
    }
    // second derivatives: 4th-order pure stencil on the diagonal, nested
    // first differences off it
    let mut second = [[Mat3::zeros(); 3]; 3];
    let g0 = g(p);
    for k in 0..3 {
        second[k][k] = (-shift(k, 2.0 * h) + 16.0 * shift(k, h) - 30.0 * g0 + 16.0 * shift(k, -h)
            - shift(k, -2.0 * h))
            / (12.0 * h * h);
    }
    let first_at = |q: &Point, k: usize| {
        let sh = |s: f64| {
            let mut r = *q;
            r[k] += s;
            g(&r)
        };
        (8.0 * (sh(h) - sh(-h)) - (sh(2.0 * h) - sh(-2.0 * h))) / (12.0 * h)
    };
    for k in 0..3 {
        for l in (k + 1)..3 {
            let d = |s: f64| {
                let mut q = *p;
                q[l] += s;
                first_at(&q, k)
            };
            let m = (8.0 * (d(h) - d(-h)) - (d(2.0 * h) - d(-2.0 * h))) / (12.0 * h);
            second[k][l] = m;
            second[l][k] = m;
        }
    }
    MetricDerivatives { first, second }
}

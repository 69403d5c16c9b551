//! Surface constructors and the shape registry backing the descriptor
//! mini-language: `sphere:r=1`, `ellipsoid:a=1,c=1.2`,
//! `hyp-geodesic-sphere:r=0.8,kappa=1`, `profile:file=path`.

use std::collections::BTreeMap;

use super::{Ambient, EmbeddedSurface};
use crate::error::{Error, Result};
use crate::numerics::{differentiation_matrix, gauss_legendre, lagrange_resample, Barycentric};

/// Strategy interface of the shape registry: each named shape builds a fully
/// populated surface from its key=value parameters.
pub trait ShapeBuilder: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(
        &self,
        params: &BTreeMap<String, String>,
        resolution: usize,
    ) -> Result<EmbeddedSurface>;
}

struct SphereShape;
struct EllipsoidShape;
struct HypGeodesicSphereShape;
struct ProfileShape;

fn registry() -> [&'static dyn ShapeBuilder; 4] {
    [
        &SphereShape,
        &EllipsoidShape,
        &HypGeodesicSphereShape,
        &ProfileShape,
    ]
}

pub fn shape_names() -> Vec<&'static str> {
    registry().iter().map(|b| b.name()).collect()
}

/// Build a surface from a descriptor string, e.g. `ellipsoid:a=1,c=1.2`.
pub fn make_surface(descriptor: &str, resolution: usize) -> Result<EmbeddedSurface> {
    let (name, params) = parse_descriptor(descriptor)?;
    for builder in registry() {
        if builder.name() == name {
            return builder.build(&params, resolution);
        }
    }
    Err(Error::Parse(format!(
        "unknown shape '{name}' (known: {})",
        shape_names().join(", ")
    )))
}

pub(crate) fn parse_descriptor(descriptor: &str) -> Result<(String, BTreeMap<String, String>)> {
    let mut split = descriptor.splitn(2, ':');
    let name = split.next().unwrap_or("").trim().to_string();
    if name.is_empty() {
        return Err(Error::Parse("empty descriptor".into()));
    }
    let mut params = BTreeMap::new();
    if let Some(rest) = split.next() {
        for item in rest.split(',') {
            let item = item.trim();
            if item.is_empty() {
                continue;
            }
            let mut kv = item.splitn(2, '=');
            let k = kv.next().unwrap_or("").trim();
            let v = kv
                .next()
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{item}'")))?
                .trim();
            params.insert(k.to_string(), v.to_string());
        }
    }
    Ok((name, params))
}

fn param_f64(params: &BTreeMap<String, String>, key: &str) -> Result<f64> {
    let raw = params
        .get(key)
        .ok_or_else(|| Error::Parse(format!("missing parameter '{key}'")))?;
    raw.parse()
        .map_err(|_| Error::Parse(format!("parameter '{key}'='{raw}' is not a number")))
}

impl ShapeBuilder for SphereShape {
    fn name(&self) -> &'static str {
        "sphere"
    }
    fn build(&self, params: &BTreeMap<String, String>, n: usize) -> Result<EmbeddedSurface> {
        sphere(param_f64(params, "r")?, n)
    }
}

impl ShapeBuilder for EllipsoidShape {
    fn name(&self) -> &'static str {
        "ellipsoid"
    }
    fn build(&self, params: &BTreeMap<String, String>, n: usize) -> Result<EmbeddedSurface> {
        ellipsoid(param_f64(params, "a")?, param_f64(params, "c")?, n)
    }
}

impl ShapeBuilder for HypGeodesicSphereShape {
    fn name(&self) -> &'static str {
        "hyp-geodesic-sphere"
    }
    fn build(&self, params: &BTreeMap<String, String>, n: usize) -> Result<EmbeddedSurface> {
        hyperbolic_geodesic_sphere(param_f64(params, "r")?, param_f64(params, "kappa")?, n)
    }
}

impl ShapeBuilder for ProfileShape {
    fn name(&self) -> &'static str {
        "profile"
    }
    fn build(&self, params: &BTreeMap<String, String>, n: usize) -> Result<EmbeddedSurface> {
        let path = params
            .get("file")
            .ok_or_else(|| Error::Parse("profile shape needs file=<path>".into()))?;
        let text = std::fs::read_to_string(path)?;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() < 2 {
                return Err(Error::Parse(format!(
                    "profile line {} needs two columns (rho z)",
                    lineno + 1
                )));
            }
            let rho: f64 = cols[0]
                .parse()
                .map_err(|_| Error::Parse(format!("bad rho on line {}", lineno + 1)))?;
            let z: f64 = cols[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad z on line {}", lineno + 1)))?;
            points.push((rho, z));
        }
        profile_from_samples(&points, n)
    }
}

struct ProfileFns {
    rho: Box<dyn Fn(f64) -> f64>,
    z: Box<dyn Fn(f64) -> f64>,
    d_rho: Box<dyn Fn(f64) -> f64>,
    d_z: Box<dyn Fn(f64) -> f64>,
    dd_rho: Box<dyn Fn(f64) -> f64>,
    dd_z: Box<dyn Fn(f64) -> f64>,
}

/// Surface of revolution from an analytic generating curve
/// tau -> (rho(tau), z(tau)), tau in [0, pi], north pole at tau = 0.
fn build_parametric(
    ambient: Ambient,
    fns: &ProfileFns,
    n: usize,
    descriptor: &str,
) -> Result<EmbeddedSurface> {
    if !matches!(ambient, Ambient::Euclidean) {
        return Err(Error::Precondition(
            "parametric profiles are Euclidean constructions".into(),
        ));
    }
    let (x, w) = gauss_legendre(n);
    let theta: Vec<f64> = x.iter().map(|&x| x.acos()).collect();
    let mut f = vec![0.0; n];
    let mut h = vec![0.0; n];
    let mut h_tilde = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut dist = vec![0.0; n];
    for i in 0..n {
        let t = theta[i];
        let (rp, zp) = ((fns.d_rho)(t), (fns.d_z)(t));
        let (rpp, zpp) = ((fns.dd_rho)(t), (fns.dd_z)(t));
        let rho = (fns.rho)(t);
        let zz = (fns.z)(t);
        let ff = (rp * rp + zp * zp).sqrt();
        if !(rho > 0.0) {
            return Err(Error::Geometry(format!("profile pinches at tau = {t:.4}")));
        }
        f[i] = ff;
        h[i] = rho;
        h_tilde[i] = rho / t.sin();
        k1[i] = (rpp * zp - rp * zpp) / (ff * ff * ff);
        k2[i] = -zp / (rho * ff);
        dist[i] = (rho * rho + zz * zz).sqrt();
    }
    let convex = k1.iter().chain(k2.iter()).all(|&k| k > 0.0);
    let two_pi = 2.0 * std::f64::consts::PI;
    let area = two_pi
        * x.iter()
            .enumerate()
            .map(|(i, _)| w[i] * f[i] * h_tilde[i])
            .sum::<f64>();
    // extent from a dense sweep of the curve
    let mut zmin = f64::INFINITY;
    let mut zmax = f64::NEG_INFINITY;
    let mut rmax: f64 = 0.0;
    for k in 0..=200 {
        let t = std::f64::consts::PI * k as f64 / 200.0;
        zmin = zmin.min((fns.z)(t));
        zmax = zmax.max((fns.z)(t));
        rmax = rmax.max((fns.rho)(t));
    }
    Ok(EmbeddedSurface {
        ambient,
        x,
        w,
        theta,
        f,
        h,
        h_tilde,
        kappa1: k1,
        kappa2: k2,
        area,
        convex,
        dist: Some(dist),
        extent: (zmax - zmin).max(2.0 * rmax),
        descriptor: descriptor.to_string(),
    })
}

/// Round sphere of radius r in Euclidean space.
pub fn sphere(r: f64, n: usize) -> Result<EmbeddedSurface> {
    if !(r > 0.0) {
        return Err(Error::Geometry(format!(
            "sphere radius must be positive, got {r}"
        )));
    }
    let fns = ProfileFns {
        rho: Box::new(move |t: f64| r * t.sin()),
        z: Box::new(move |t: f64| r * t.cos()),
        d_rho: Box::new(move |t: f64| r * t.cos()),
        d_z: Box::new(move |t: f64| -r * t.sin()),
        dd_rho: Box::new(move |t: f64| -r * t.sin()),
        dd_z: Box::new(move |t: f64| -r * t.cos()),
    };
    build_parametric(Ambient::Euclidean, &fns, n.max(8), &format!("sphere:r={r}"))
}

/// Axisymmetric ellipsoid with semi-axes (a, a, c).
pub fn ellipsoid(a: f64, c: f64, n: usize) -> Result<EmbeddedSurface> {
    if !(a > 0.0 && c > 0.0) {
        return Err(Error::Geometry(format!(
            "ellipsoid axes must be positive, got a={a}, c={c}"
        )));
    }
    let fns = ProfileFns {
        rho: Box::new(move |t: f64| a * t.sin()),
        z: Box::new(move |t: f64| c * t.cos()),
        d_rho: Box::new(move |t: f64| a * t.cos()),
        d_z: Box::new(move |t: f64| -c * t.sin()),
        dd_rho: Box::new(move |t: f64| -a * t.sin()),
        dd_z: Box::new(move |t: f64| -c * t.cos()),
    };
    build_parametric(
        Ambient::Euclidean,
        &fns,
        n.max(8),
        &format!("ellipsoid:a={a},c={c}"),
    )
}

/// Star-shaped surface r = R(cos tau) about the origin of the ambient space
/// form; R is given as a function of x = cos(tau) with spectral derivatives
/// taken internally.
pub fn radial_graph<F>(
    ambient: Ambient,
    r_of_x: F,
    n: usize,
    descriptor: &str,
) -> Result<EmbeddedSurface>
where
    F: Fn(f64) -> f64,
{
    let n = n.max(8);
    let (x, w) = gauss_legendre(n);
    let r_samples: Vec<f64> = x.iter().map(|&x| r_of_x(x)).collect();
    if r_samples.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::Geometry(
            "radial graph must have positive radius".into(),
        ));
    }
    let d = differentiation_matrix(&x);
    let mut rx = vec![0.0; n];
    let mut rxx = vec![0.0; n];
    for i in 0..n {
        for j in 0..n {
            rx[i] += d[(i, j)] * r_samples[j];
        }
    }
    for i in 0..n {
        for j in 0..n {
            rxx[i] += d[(i, j)] * rx[j];
        }
    }
    radial_graph_from_nodal(ambient, &x, &w, &r_samples, &rx, &rxx, descriptor)
}

#[allow(clippy::too_many_arguments)]
fn radial_graph_from_nodal(
    ambient: Ambient,
    x: &[f64],
    w: &[f64],
    r: &[f64],
    rx: &[f64],
    rxx: &[f64],
    descriptor: &str,
) -> Result<EmbeddedSurface> {
    let n = x.len();
    let kappa = match ambient {
        Ambient::Euclidean => 0.0,
        Ambient::Hyperbolic { kappa } => {
            if !(kappa > 0.0) {
                return Err(Error::Geometry("hyperbolic kappa must be positive".into()));
            }
            kappa
        }
    };
    let sn = |rr: f64| {
        if kappa == 0.0 {
            rr
        } else {
            (kappa * rr).sinh() / kappa
        }
    };
    let snp = |rr: f64| {
        if kappa == 0.0 {
            1.0
        } else {
            (kappa * rr).cosh()
        }
    };
    let theta: Vec<f64> = x.iter().map(|&x| x.acos()).collect();
    let mut f = vec![0.0; n];
    let mut h = vec![0.0; n];
    let mut h_tilde = vec![0.0; n];
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    for i in 0..n {
        let sin_t = theta[i].sin();
        let s = sn(r[i]);
        let sp = snp(r[i]);
        // tau derivatives of R from x derivatives
        let r_t = -sin_t * rx[i];
        let r_tt = -x[i] * rx[i] + sin_t * sin_t * rxx[i];
        let ff = (r_t * r_t + s * s).sqrt();
        f[i] = ff;
        h[i] = s * sin_t;
        h_tilde[i] = s;
        k1[i] = (s * s * sp + 2.0 * r_t * r_t * sp - s * r_tt) / (ff * ff * ff);
        // R' cot(tau) = -cos(tau) R_x, regular at the poles
        k2[i] = (sp + x[i] * rx[i] / s) / ff;
    }
    let convex = k1.iter().chain(k2.iter()).all(|&k| k > 0.0);
    let two_pi = 2.0 * std::f64::consts::PI;
    let area = two_pi * (0..n).map(|i| w[i] * f[i] * h_tilde[i]).sum::<f64>();
    let rmax = r.iter().cloned().fold(0.0f64, f64::max);
    Ok(EmbeddedSurface {
        ambient,
        x: x.to_vec(),
        w: w.to_vec(),
        theta,
        f,
        h,
        h_tilde,
        kappa1: k1,
        kappa2: k2,
        area,
        convex,
        dist: Some(r.to_vec()),
        extent: 2.0 * rmax,
        descriptor: descriptor.to_string(),
    })
}

/// Geodesic sphere of radius r centered at the origin of H^3(-kappa^2).
pub fn hyperbolic_geodesic_sphere(r: f64, kappa: f64, n: usize) -> Result<EmbeddedSurface> {
    if !(r > 0.0) {
        return Err(Error::Geometry(format!(
            "geodesic radius must be positive, got {r}"
        )));
    }
    radial_graph(
        Ambient::Hyperbolic { kappa },
        move |_| r,
        n,
        &format!("hyp-geodesic-sphere:r={r},kappa={kappa}"),
    )
}

/// Re-embed a star-shaped Euclidean shape descriptor into H^3(-kappa^2) by
/// reusing its radial graph R(cos tau). Supports `sphere` and `ellipsoid`
/// directly and `hyp-geodesic-sphere` natively.
pub fn embed_in_hyperbolic(descriptor: &str, kappa: f64, n: usize) -> Result<EmbeddedSurface> {
    let (name, params) = parse_descriptor(descriptor)?;
    let amb = Ambient::Hyperbolic { kappa };
    match name.as_str() {
        "sphere" => {
            let r = param_f64(&params, "r")?;
            radial_graph(
                amb,
                move |_| r,
                n,
                &format!("sphere:r={r} in H3(kappa={kappa})"),
            )
        }
        "ellipsoid" => {
            let a = param_f64(&params, "a")?;
            let c = param_f64(&params, "c")?;
            radial_graph(
                amb,
                move |x: f64| 1.0 / ((1.0 - x * x) / (a * a) + x * x / (c * c)).sqrt(),
                n,
                &format!("ellipsoid:a={a},c={c} in H3(kappa={kappa})"),
            )
        }
        "hyp-geodesic-sphere" => {
            let r = param_f64(&params, "r")?;
            let k = param_f64(&params, "kappa").unwrap_or(kappa);
            hyperbolic_geodesic_sphere(r, k, n)
        }
        other => Err(Error::Parse(format!(
            "cannot embed shape '{other}' into hyperbolic space"
        ))),
    }
}

/// Closed axisymmetric surface from generating-curve samples (rho_i, z_i),
/// ordered from the north pole (rho = 0, z max) to the south pole.
///
/// The curve is reparametrized by chord length, resampled to Chebyshev
/// nodes, and differentiated spectrally.
pub fn profile_from_samples(points: &[(f64, f64)], n: usize) -> Result<EmbeddedSurface> {
    if points.len() < 16 {
        return Err(Error::Geometry(format!(
            "profile needs at least 16 samples, got {}",
            points.len()
        )));
    }
    let scale = points
        .iter()
        .map(|p| p.0.abs().max(p.1.abs()))
        .fold(0.0f64, f64::max);
    if !(scale > 0.0) {
        return Err(Error::Geometry("degenerate profile".into()));
    }
    let tol = 1e-6 * scale;
    if points[0].0.abs() > tol || points[points.len() - 1].0.abs() > tol {
        return Err(Error::Geometry(
            "profile does not close: end points must sit on the axis (rho = 0)".into(),
        ));
    }
    if points[1..points.len() - 1].iter().any(|p| p.0 <= 0.0) {
        return Err(Error::Geometry(
            "profile crosses the axis away from the poles".into(),
        ));
    }
    if self_intersects(points) {
        return Err(Error::Geometry("profile is self-intersecting".into()));
    }
    // chord-length parameter scaled onto [0, pi]
    let mut t = vec![0.0; points.len()];
    for i in 1..points.len() {
        let (dr, dz) = (points[i].0 - points[i - 1].0, points[i].1 - points[i - 1].1);
        t[i] = t[i - 1] + (dr * dr + dz * dz).sqrt();
    }
    let total = t[points.len() - 1];
    for v in &mut t {
        *v *= std::f64::consts::PI / total;
    }
    let rho_in: Vec<f64> = points.iter().map(|p| p.0).collect();
    let z_in: Vec<f64> = points.iter().map(|p| p.1).collect();
    // Chebyshev (first-kind) nodes on [0, pi], interior only
    let n_cheb = 128.min(points.len());
    let tau_c: Vec<f64> = (0..n_cheb)
        .map(|j| {
            let xc = (std::f64::consts::PI * (j as f64 + 0.5) / n_cheb as f64).cos();
            std::f64::consts::PI * 0.5 * (1.0 - xc)
        })
        .collect();
    let rho_c = lagrange_resample(&t, &rho_in, &tau_c, 8);
    let z_c = lagrange_resample(&t, &z_in, &tau_c, 8);
    let d = differentiation_matrix(&tau_c);
    let deriv = |v: &[f64]| -> Vec<f64> {
        (0..n_cheb)
            .map(|i| (0..n_cheb).map(|j| d[(i, j)] * v[j]).sum())
            .collect()
    };
    let drho = deriv(&rho_c);
    let dz = deriv(&z_c);
    let ddrho = deriv(&drho);
    let ddz = deriv(&dz);
    let bary = std::sync::Arc::new(Barycentric::new(&tau_c));
    let interp = |vals: Vec<f64>| -> Box<dyn Fn(f64) -> f64> {
        let b = bary.clone();
        Box::new(move |t: f64| b.eval(&vals, t))
    };
    let fns = ProfileFns {
        rho: interp(rho_c),
        z: interp(z_c),
        d_rho: interp(drho),
        d_z: interp(dz),
        dd_rho: interp(ddrho),
        dd_z: interp(ddz),
    };
    build_parametric(Ambient::Euclidean, &fns, n, "profile")
}

fn self_intersects(points: &[(f64, f64)]) -> bool {
    // decimate long inputs; O(n^2) over ~400 segments is cheap
    let step = (points.len() / 400).max(1);
    let pts: Vec<(f64, f64)> = points.iter().step_by(step).copied().collect();
    let seg = |i: usize| (pts[i], pts[i + 1]);
    let n = pts.len() - 1;
    for i in 0..n {
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_cross(a, b, c, d) {
                return true;
            }
        }
    }
    false
}

fn segments_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let cross = |o: (f64, f64), p: (f64, f64), q: (f64, f64)| {
        (p.0 - o.0) * (q.1 - o.1) - (p.1 - o.1) * (q.0 - o.0)
    };
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

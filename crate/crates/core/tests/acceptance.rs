//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured values (run with --nocapture to see them).

mod common;

use std::time::Instant;

use common::{assert_close, ShootingOracle};
use diraclab::ambient::{Point, SchwarzschildIsotropicChart, SpaceFormChart};
use diraclab::flow::{
    run_flow, theorem1_certificate, trajectory_residual, ExteriorFoliation, FlowOptions,
    InitialData, ResidualOptions,
};
use diraclab::harness::{
    check_euclidean_suite, hyperbolic_checks, large_sphere_mass_recovery, metric_property_records,
    small_sphere_expansion, surface_lambda1, LargeSphereOptions, PipelineOptions,
    SmallSphereOptions, Verdict,
};
use diraclab::spectral::{axisymmetric_mode_spectrum, ConformalSphereMetric, SolveOptions};
use diraclab::surface::{ellipsoid, embed_in_hyperbolic, hyperbolic_geodesic_sphere, sphere};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn budget(start: Instant, seconds: f64, what: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < seconds,
        "{what} exceeded its runtime budget: {elapsed:.1}s > {seconds}s"
    );
}

#[test]
fn criterion_1_round_sphere_equality_suite() {
    let start = Instant::now();
    for r in [0.5, 1.0, 3.0] {
        let surface = sphere(r, 96).unwrap();
        let opts = PipelineOptions {
            truncation: 10,
            ..Default::default()
        };
        let (spec, _) = surface_lambda1(&surface, &opts).unwrap();
        assert_close(
            spec.lambda1,
            1.0 / r,
            1e-8,
            &format!("lambda1 of sphere r={r}"),
        );
        let records = check_euclidean_suite(&surface, &opts).unwrap();
        assert_eq!(records.len(), 4);
        for rec in &records {
            assert_eq!(
                rec.verdict,
                Verdict::Equality,
                "sphere r={r}, {}: slack {:.3e}",
                rec.id,
                rec.slack
            );
        }
    }
    budget(start, 10.0, "criterion 1");
    println!(
        "ACCEPTANCE 1 round-sphere equality suite: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_2_ellipsoid_inequality_chain() {
    let start = Instant::now();
    let oracle = ShootingOracle::default();
    for c in [1.05, 1.2, 1.5] {
        let surface = ellipsoid(1.0, c, 160).unwrap();
        let opts = PipelineOptions {
            truncation: 40,
            ..Default::default()
        };
        let records = check_euclidean_suite(&surface, &opts).unwrap();
        // chain: bar-hijazi bound <= lambda1 <= upper bound <= bar bound
        for rec in &records {
            assert_eq!(
                rec.verdict,
                Verdict::Holds,
                "c={c}, {}: slack {:.3e}",
                rec.id,
                rec.slack
            );
            assert!(
                rec.slack > 0.0,
                "c={c}, {}: slack not strictly positive",
                rec.id
            );
        }
        // dual-solver agreement on the lowest block eigenvalue
        let (spec, uni) = surface_lambda1(&surface, &opts).unwrap();
        let galerkin_block: f64 =
            axisymmetric_mode_spectrum(&uni.metric, 1, 40, &SolveOptions::default())
                .unwrap()
                .iter()
                .map(|v| v.abs())
                .fold(f64::INFINITY, f64::min);
        assert_close(
            galerkin_block,
            spec.lambda1,
            1e-8,
            &format!("global lambda1 vs block (c={c})"),
        );
        let shooting = oracle
            .block_min_abs_eigenvalue(&uni.metric, 1, 2.5)
            .expect("oracle found no eigenvalue");
        assert_close(
            spec.lambda1,
            shooting,
            1e-6,
            &format!("dual-solver lambda1 (c={c})"),
        );
        println!(
            "  ellipsoid c={c}: lambda1 = {:.10} (shooting {:.10})",
            spec.lambda1, shooting
        );
    }
    budget(start, 120.0, "criterion 2");
    println!(
        "ACCEPTANCE 2 ellipsoid inequality chain: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_3_small_sphere_expansions() {
    let start = Instant::now();
    let radii: Vec<f64> = (0..12).map(|i| 0.05 + 0.25 * i as f64 / 11.0).collect();
    let opts = SmallSphereOptions {
        pipeline: PipelineOptions {
            truncation: 6,
            ..Default::default()
        },
        ..Default::default()
    };
    for k0 in [1.0f64, -1.0] {
        let chart = SpaceFormChart::new(k0);
        let exp = small_sphere_expansion(&chart, &Point::zeros(), &radii, &opts).unwrap();
        let a1 = exp.lambda_fit.coefficient_for(1.0).unwrap();
        assert_close(a1, k0 / 6.0, 1e-3, &format!("linear coefficient (k={k0})"));
        let a3 = exp.lambda_fit.coefficient_for(3.0).unwrap();
        let target = 7.0 / 360.0;
        assert!(
            (a3 - target).abs() <= 0.02 * target,
            "cubic coefficient (k={k0}): {a3:.6} vs {target:.6}"
        );
        // oracle cross-check: lambda1 = 1/sin r resp. 1/sinh r
        for (i, &r) in radii.iter().enumerate().step_by(4) {
            let exact = if k0 > 0.0 {
                1.0 / r.sin()
            } else {
                1.0 / r.sinh()
            };
            assert_close(
                exp.lambda_fit.samples[i],
                exact,
                1e-7 * exact,
                &format!("lambda1 against the closed form (k={k0}, r={r})"),
            );
        }
        if k0 > 0.0 {
            let d3 = exp.defect_fit.coefficient_for(3.0).unwrap();
            let two_pi = 2.0 * std::f64::consts::PI;
            assert!(
                (d3 - two_pi).abs() <= 0.01 * two_pi,
                "defect cubic coefficient: {d3:.6} vs {two_pi:.6}"
            );
        }
        println!("  spaceform k={k0}: linear {a1:.6}, cubic {a3:.6}");
    }
    budget(start, 300.0, "criterion 3");
    println!(
        "ACCEPTANCE 3 small-sphere expansions: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_4_large_sphere_mass_recovery() {
    let start = Instant::now();
    let chart = SchwarzschildIsotropicChart::new(1.0);
    let opts = LargeSphereOptions {
        pipeline: PipelineOptions {
            truncation: 6,
            ..Default::default()
        },
        ..Default::default()
    };
    let recovery =
        large_sphere_mass_recovery(&chart, &[50.0, 100.0, 200.0, 283.0, 400.0], &opts).unwrap();
    let errs: Vec<f64> = recovery
        .samples
        .iter()
        .map(|s| (s.mass_estimate - 1.0).abs())
        .collect();
    let at_200 = &recovery.samples[2];
    assert!((at_200.radius - 200.0).abs() < 1e-12);
    assert!(
        (at_200.mass_estimate - 1.0).abs() <= 0.05,
        "mass estimate at r=200: {}",
        at_200.mass_estimate
    );
    for w in errs.windows(2) {
        assert!(
            w[1] < w[0],
            "mass error must decrease with radius: {errs:?}"
        );
    }
    let c2 = recovery.lambda_fit.coefficient_for(-2.0).unwrap();
    assert!(
        (c2 + 1.0).abs() <= 0.02,
        "fitted 1/r^2 coefficient {c2:.6} should be -1 within 2%"
    );
    println!(
        "  m_est(200) = {:.6}, fitted 1/r^2 coefficient = {c2:.6}",
        at_200.mass_estimate
    );
    budget(start, 120.0, "criterion 4");
    println!(
        "ACCEPTANCE 4 large-sphere mass recovery: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_5_flow_calibration() {
    let start = Instant::now();
    let base = sphere(2.0, 48).unwrap();
    let traj = run_flow(&base, InitialData::Const(1.25), &FlowOptions::default()).unwrap();
    assert_close(traj.mass, 0.36, 1e-4, "calibration mass");
    for w in traj.states.windows(2) {
        assert!(
            w[1].q <= w[0].q + 1e-8,
            "Q must be nonincreasing: {} -> {} at rho {}",
            w[0].q,
            w[1].q,
            w[1].rho
        );
    }
    // residual at baseline resolution, then halved fixed step: second order
    let fol = ExteriorFoliation::new(&base).unwrap();
    let res_opts = ResidualOptions::default();
    let fixed = |h: f64| {
        let t = run_flow(
            &base,
            InitialData::Const(1.25),
            &FlowOptions {
                rho_max: Some(8.0),
                fixed_step: Some(h),
                ..Default::default()
            },
        )
        .unwrap();
        trajectory_residual(&fol, &t, &res_opts).unwrap()
    };
    let coarse = fixed(0.05);
    let fine = fixed(0.025);
    assert!(
        coarse < 1e-4,
        "baseline residual {coarse:.3e} must be < 1e-4"
    );
    let order = (coarse / fine).log2();
    assert!(
        order > 1.6,
        "residual must fall at the scheme's order: {coarse:.3e} -> {fine:.3e} (order {order:.2})"
    );
    println!(
        "  mass = {:.8}, residual {:.3e} -> {:.3e} under step halving (order {order:.2})",
        traj.mass, coarse, fine
    );
    budget(start, 300.0, "criterion 5");
    println!(
        "ACCEPTANCE 5 flow calibration: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_6_certificate_chain() {
    let start = Instant::now();
    let base = ellipsoid(1.0, 1.2, 48).unwrap();
    let opts = PipelineOptions {
        truncation: 32,
        ..Default::default()
    };
    let (spec, _) = surface_lambda1(&base, &opts).unwrap();
    let traj = run_flow(
        &base,
        InitialData::MeanCurvatureOverTwoLambda1(spec.lambda1),
        &FlowOptions::default(),
    )
    .unwrap();
    let cert = theorem1_certificate(&base, &traj).unwrap();
    // Q(0) agrees with the closed combination
    let q0_expected = base.total_mean_curvature() - 2.0 * spec.lambda1 * base.area;
    assert_close(
        cert.q0,
        q0_expected,
        1e-9 * q0_expected.abs().max(1.0),
        "Q(0) identity",
    );
    let mass_term = 8.0 * std::f64::consts::PI * cert.mass;
    for s in &traj.states {
        assert!(
            s.q <= cert.q0 + 1e-8,
            "Q({}) = {} exceeds Q0 = {}",
            s.rho,
            s.q,
            cert.q0
        );
        assert!(
            s.q >= mass_term - 1e-6,
            "Q({}) = {} dips below 8 pi m = {}",
            s.rho,
            s.q,
            mass_term
        );
    }
    assert!(
        cert.mass >= -1e-6,
        "mass must be nonnegative: {}",
        cert.mass
    );
    assert!(cert.slack > 0.0, "upper-bound slack must be positive");
    println!(
        "  lambda1 = {:.8}, Q0 = {:.8}, mass = {:.8}, slack = {:.3e}",
        cert.lambda1, cert.q0, cert.mass, cert.slack
    );
    budget(start, 600.0, "criterion 6");
    println!(
        "ACCEPTANCE 6 certificate chain: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_7_hyperbolic_suite() {
    let start = Instant::now();
    let opts = PipelineOptions {
        truncation: 12,
        ..Default::default()
    };
    for r in [0.5f64, 1.0, 2.0] {
        let surface = hyperbolic_geodesic_sphere(r, 1.0, 128).unwrap();
        let records = hyperbolic_checks(&surface, &opts).unwrap();
        for rec in &records {
            let scale = rec.lhs.abs().max(rec.rhs.abs()).max(1.0);
            assert!(
                rec.slack.abs() <= 1e-8 * scale,
                "r={r}, {}: slack {:.3e} beyond 1e-8 relative",
                rec.id,
                rec.slack
            );
        }
        // closed forms: lambda_pm = coth r
        let (spec, _) = surface_lambda1(&surface, &opts).unwrap();
        let lambda_pm = (spec.lambda1 * spec.lambda1 + 1.0).sqrt();
        assert_close(
            lambda_pm,
            1.0 / r.tanh(),
            1e-8 / r.tanh(),
            &format!("lambda_pm vs coth (r={r})"),
        );
        assert_close(
            spec.lambda1,
            1.0 / r.sinh(),
            1e-8 / r.sinh(),
            &format!("intrinsic lambda1 vs 1/sinh (r={r})"),
        );
    }
    // kappa -> 0 continuation on a fixed surface recovers the Euclidean
    // records within O(kappa^2)
    let kappa = 1e-3;
    let tol = 100.0 * kappa * kappa;
    let hyp = embed_in_hyperbolic("ellipsoid:a=1,c=1.2", kappa, 160).unwrap();
    let euc = ellipsoid(1.0, 1.2, 160).unwrap();
    let (spec_h, _) = surface_lambda1(&hyp, &opts).unwrap();
    let (spec_e, _) = surface_lambda1(&euc, &opts).unwrap();
    let lambda_pm = (spec_h.lambda1 * spec_h.lambda1 + kappa * kappa).sqrt();
    assert_close(lambda_pm, spec_e.lambda1, tol, "lambda_pm -> lambda1");
    let (w_area, w_h) = hyp.weighted_mean_curvature_integrals().unwrap();
    assert_close(w_area, euc.area, tol * euc.area, "weighted area -> area");
    assert_close(
        w_h,
        euc.total_mean_curvature(),
        tol * euc.total_mean_curvature(),
        "weighted total H -> total H",
    );
    // weighted upper bound degenerates to the Euclidean one, and the
    // hyperbolic Minkowski bound to the classical one
    let hyp_slack = 0.5 * w_h - lambda_pm * w_area;
    let euc_slack = 0.5 * euc.total_mean_curvature() - spec_e.lambda1 * euc.area;
    assert_close(
        hyp_slack,
        euc_slack,
        tol * euc_slack.abs().max(1.0),
        "upper-bound slack",
    );
    let hyp_mink =
        w_h - 4.0 * (std::f64::consts::PI / hyp.area + 0.25 * kappa * kappa).sqrt() * w_area;
    let euc_mink = euc.total_mean_curvature() - 4.0 * (std::f64::consts::PI * euc.area).sqrt();
    assert_close(
        hyp_mink,
        euc_mink,
        tol * euc_mink.abs().max(1.0),
        "minkowski slack",
    );
    println!("  kappa -> 0 continuation at kappa = {kappa}: slacks agree within {tol:.1e}");
    budget(start, 60.0, "criterion 7");
    println!(
        "ACCEPTANCE 7 hyperbolic suite: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn criterion_8_property_sweeps() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut count = 0;
    for k in 0..50 {
        let amp = rng.gen_range(-0.3..0.3);
        let width = rng.gen_range(2.0..8.0);
        let center = rng.gen_range(-0.5..0.5);
        let metric = ConformalSphereMetric::bump(amp, width, center);
        let inputs = format!("bump #{k}: amp={amp:.4}, width={width:.3}, center={center:.4}");
        let records = metric_property_records(&metric, &inputs).unwrap();
        for rec in &records {
            assert!(
                rec.ok(),
                "{inputs}, {}: lhs {:.3e} vs rhs {:.3e}",
                rec.id,
                rec.lhs,
                rec.rhs
            );
        }
        count += records.len();
    }
    println!("  {count} property records over 50 random bump metrics");
    budget(start, 600.0, "criterion 8");
    println!(
        "ACCEPTANCE 8 property sweeps: PASS ({:.2}s)",
        start.elapsed().as_secs_f64()
    );
}

//! Acceptance suite. Each test prints one PASS/FAIL line with the measured
//! quantity and the threshold it is held to, then asserts.

use std::f64::consts::PI;
use std::io::Write;
use std::time::{Duration, Instant};

use nalgebra::Matrix6;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relmotion::frames::{
    cartesian_from_spherical, dimensional_cartesian, dimensional_spherical, nondim_cartesian,
    nondim_spherical, spherical_from_cartesian, StateVector,
};
use relmotion::kepler::{
    elements_to_inertial, inertial_to_elements, propagate_elements, true_to_mean, MU_EARTH,
};
use relmotion::linear::{j_integral, ya_inverse_matrix, ya_matrix, ya_propagate};
use relmotion::oracles::{
    integrate, rhs_th_linear, CurvilinearSystem, ExactCurvilinearSystem, ForcedPerturbationSystem,
    IntegratorSpec, SlightlyEccentricSystem, SlightlyEccentricVariant, Truncation,
};
use relmotion::roe::{propagate_dlambda, roe_from_elements, DriftOrder};
use relmotion::second_order::propagate_circular_qv;
use relmotion::sweep::{
    build_scenario, evaluate_models, sweep_delta_a, sweep_eccentricity, sweep_separation,
    ErrorRecord, ModelId, ScenarioConfig,
};
use relmotion::{
    Anomaly, ChiefSnapshot, ClassicalElements, GravContext, NondimCartesian, NondimSpherical,
    RelStateCartesian, RelStateSpherical, SecondOrderSolution, YaConstants,
};

fn report(id: u32, name: &str, pass: bool, detail: String, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    let ok = pass && elapsed <= budget;
    let line = format!(
        "criterion {id:>2} {name}: {} | {detail} | {:.2?} (budget {budget:?})\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed
    );
    // written past the test harness capture so the summary always shows
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
    assert!(
        elapsed <= budget,
        "criterion {id} ({name}) exceeded its runtime budget: {elapsed:?}"
    );
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Least-squares slope of log(y) against log(x).
fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn error_of(records: &[ErrorRecord], model: ModelId, value: f64) -> f64 {
    records
        .iter()
        .find(|r| r.model == model && r.sweep_value == value)
        .unwrap_or_else(|| panic!("no record for {model} at {value}"))
        .max_err_km
}

fn one_orbit_grid(f0: f64, count: usize) -> Vec<f64> {
    (1..=count)
        .map(|k| f0 + 2.0 * PI * k as f64 / count as f64)
        .collect()
}

fn random_nondim(rng: &mut ChaCha8Rng, scale: f64) -> NondimSpherical {
    NondimSpherical::from_array(std::array::from_fn(|_| rng.gen_range(-scale..scale)))
}

#[test]
fn c01_ya_matrix_times_inverse_is_identity() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0_f64;
    for _ in 0..100 {
        let e = rng.gen_range(0.0..=0.9);
        let f0 = rng.gen_range(-PI..PI);
        let prod = ya_matrix(e, f0, 0.0) * ya_inverse_matrix(e, f0).unwrap();
        worst = worst.max((prod - Matrix6::identity()).abs().max());
    }
    report(
        1,
        "YA consistency",
        worst < 1e-10,
        format!("max |Phi Phi^-1 - I| = {worst:.2e} (< 1e-10)"),
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn c02_ya_solution_satisfies_linear_dynamics() {
    let started = Instant::now();
    let h = 1e-5;
    let mut fd_worst = 0.0_f64;
    let mut rk_worst = 0.0_f64;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for e in [0.0, 0.1, 0.5] {
        let f0 = 0.3;
        let x0 = random_nondim(&mut rng, 1e-2);
        let at = |f: f64| ya_propagate(&x0, e, f0, f).unwrap().to_array();
        for f in one_orbit_grid(f0, 64) {
            let (xm, x, xp) = (at(f - h), at(f), at(f + h));
            let g = rhs_th_linear(&x, f, e);
            for i in 0..6 {
                let fd = (xp[i] - xm[i]) / (2.0 * h);
                fd_worst = fd_worst.max((fd - g[i]).abs());
            }
        }
        let outs = one_orbit_grid(f0, 50);
        let sys = CurvilinearSystem {
            e,
            truncation: Truncation::Linear,
        };
        let spec = IntegratorSpec::with_tolerances(1e-13, 1e-15);
        let traj = integrate(&sys, &x0.to_array(), f0, &outs, &spec).unwrap();
        for (f, y) in traj.iter() {
            rk_worst = rk_worst.max(max_abs_diff(y, &at(f)));
        }
    }
    report(
        2,
        "YA dynamics",
        fd_worst < 1e-6 && rk_worst < 1e-9,
        format!(
            "FD residual {fd_worst:.2e} (< 1e-6), integration mismatch {rk_worst:.2e} (< 1e-9)"
        ),
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn c03_quadratic_part_matches_forced_system() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let spec = IntegratorSpec::with_tolerances(1e-13, 1e-16);
    let mut worst = 0.0_f64;
    let mut worst_draw = (0.0, 0.0);
    for _ in 0..50 {
        let e = rng.gen_range(0.0..=0.7);
        let f0 = rng.gen_range(-PI..PI);
        let k = YaConstants(std::array::from_fn(|_| rng.gen_range(-0.1..0.1)));
        let sol = SecondOrderSolution::from_constants(k, e, f0).unwrap();
        let sys = ForcedPerturbationSystem { e, constants: k };
        let outs = one_orbit_grid(f0, 40);
        let traj = integrate(&sys, &[0.0; 7], f0, &outs, &spec).unwrap();
        for (f, y) in traj.iter() {
            let q = sol.quadratic_part(f, j_integral(e, f0, f)).to_array();
            let d = max_abs_diff(&y[..6], &q);
            if d > worst {
                worst = d;
                worst_draw = (e, f0);
            }
        }
    }
    report(
        3,
        "second-order correctness",
        worst < 1e-9,
        format!(
            "max |closed form - integrated| = {worst:.2e} at e = {:.3}, f0 = {:.3} (< 1e-9)",
            worst_draw.0, worst_draw.1
        ),
        started,
        Duration::from_secs(120),
    );
}

#[test]
fn c04_circular_limit_matches_qv() {
    let started = Instant::now();
    let e = 1e-8;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0_f64;
    for _ in 0..10 {
        let x0 = random_nondim(&mut rng, 1e-2);
        let sol = SecondOrderSolution::new(&x0, e, 0.0).unwrap();
        for f in one_orbit_grid(0.0, 200) {
            let tau = true_to_mean(f, e) - true_to_mean(0.0, e);
            let qv = propagate_circular_qv(&x0, 1.0, tau).unwrap();
            worst = worst.max(max_abs_diff(&sol.evaluate(f).to_array(), &qv.to_array()));
        }
    }
    report(
        4,
        "circular limit",
        worst < 1e-6,
        format!("max |second order - QV| = {worst:.2e} (< 1e-6)"),
        started,
        Duration::from_secs(5),
    );
}

fn table_config(e: f64, a_droe: [f64; 6]) -> ScenarioConfig {
    ScenarioConfig {
        scenario_id: "acceptance".into(),
        e,
        a_droe,
        n_orbits: 10,
        samples_per_orbit: 1000,
        ..ScenarioConfig::default()
    }
}

#[test]
fn c05_eccentricity_sweep_improvement() {
    let started = Instant::now();
    let values = [1e-3, 1e-2, 0.1, 0.5];
    let base = table_config(0.0, [0.0, 0.0, 0.0, 2.0, 0.0, 2.0]);
    let recs =
        sweep_eccentricity(&base, &values, &[ModelId::YaCurv, ModelId::SecondOrderCurv]).unwrap();
    let mut pass = true;
    let mut parts = Vec::new();
    for e in values {
        let ya = error_of(&recs, ModelId::YaCurv, e);
        let so = error_of(&recs, ModelId::SecondOrderCurv, e);
        pass &= so * 100.0 <= ya;
        parts.push(format!("e={e}: {ya:.2e}/{so:.2e}={:.0}x", ya / so));
    }
    report(
        5,
        "eccentricity sweep",
        pass,
        format!("ya_curv/second_order_curv {} (>= 100x)", parts.join(", ")),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn c06_separation_sweep() {
    let started = Instant::now();
    let base = table_config(0.001, [0.0, 0.0, 2.0, 0.0, 2.0, 0.0]);
    let recs = sweep_separation(
        &base,
        &[10.0, 100.0],
        &[ModelId::YaRect, ModelId::SecondOrderCurv],
    )
    .unwrap();
    let far = error_of(&recs, ModelId::SecondOrderCurv, 100.0);
    let so10 = error_of(&recs, ModelId::SecondOrderCurv, 10.0);
    let ya10 = error_of(&recs, ModelId::YaRect, 10.0);
    report(
        6,
        "separation sweep",
        far <= 1e-2 && so10 * 10.0 <= ya10,
        format!(
            "second_order_curv at 100 km = {far:.2e} km (<= 1e-2); at 10 km ya_rect/second_order_curv = {:.0}x (>= 10x)",
            ya10 / so10
        ),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn c07_delta_a_sweep_slopes() {
    let started = Instant::now();
    let values = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let base = table_config(0.1, [0.0; 6]);
    let recs = sweep_delta_a(&base, &values, &[ModelId::RoeOrder1, ModelId::RoeOrder2]).unwrap();
    let e1: Vec<f64> = values
        .iter()
        .map(|&v| error_of(&recs, ModelId::RoeOrder1, v))
        .collect();
    let e2: Vec<f64> = values
        .iter()
        .map(|&v| error_of(&recs, ModelId::RoeOrder2, v))
        .collect();
    let s1 = loglog_slope(&values, &e1);
    let s2 = loglog_slope(&values, &e2);
    // the same fits for error per unit separation
    let r1 = s1 - 1.0;
    let r2 = s2 - 1.0;
    let ordered = values
        .iter()
        .zip(e1.iter().zip(&e2))
        .filter(|(v, _)| **v <= 1.0)
        .all(|(_, (a, b))| b <= a);
    report(
        7,
        "delta-a sweep",
        (s1 - 2.0).abs() <= 0.5 && (s2 - 3.0).abs() <= 0.5 && ordered,
        format!(
            "error slopes roe_order1 {s1:.3} (2 +/- 0.5), roe_order2 {s2:.3} (3 +/- 0.5); \
             per-separation slopes {r1:.3}, {r2:.3}; order2 <= order1 for a*da <= 1 km: {ordered}"
        ),
        started,
        Duration::from_secs(60),
    );
}

#[test]
fn c08_second_order_convergence() {
    let started = Instant::now();
    let scales = [1.0, 0.5, 0.25];
    let base = [0.0, 20.0, 10.0, 0.0, 10.0, 0.0];
    let errs: Vec<f64> = scales
        .iter()
        .map(|&s| {
            let cfg = table_config(0.3, base.map(|v| v * s));
            let sc = build_scenario(&cfg).unwrap();
            evaluate_models(&sc, &[ModelId::SecondOrderCurv], ("scale", s)).unwrap()[0].max_err_km
        })
        .collect();
    let p = loglog_slope(&scales, &errs);
    report(
        8,
        "convergence order",
        (2.6..=3.4).contains(&p),
        format!("errors {errs:?} km, fitted exponent {p:.3} (in [2.6, 3.4])"),
        started,
        Duration::from_secs(30),
    );
}

#[test]
fn c09_theta_invariance() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut shift_err = 0.0_f64;
    let mut other_err = 0.0_f64;
    let mut k_err = 0.0_f64;
    let mut k4_quad = 0.0_f64;
    for _ in 0..20 {
        let e = rng.gen_range(0.0..0.8);
        let f0 = rng.gen_range(-PI..PI);
        let dtheta = rng.gen_range(-0.5..0.5);
        let x0 = random_nondim(&mut rng, 1e-2);
        let shifted = NondimSpherical {
            theta: x0.theta + dtheta,
            ..x0
        };
        let a = SecondOrderSolution::new(&x0, e, f0).unwrap();
        let b = SecondOrderSolution::new(&shifted, e, f0).unwrap();
        for i in [0, 1, 2, 4, 5] {
            k_err = k_err.max((a.constants().0[i] - b.constants().0[i]).abs());
        }
        for f in one_orbit_grid(f0, 30) {
            let (xa, xb) = (a.evaluate(f).to_array(), b.evaluate(f).to_array());
            shift_err = shift_err.max((xb[1] - xa[1] - dtheta).abs());
            for i in [0, 2, 3, 4, 5] {
                other_err = other_err.max((xb[i] - xa[i]).abs());
            }
        }
        let mut only_k4 = YaConstants::default();
        only_k4.0[3] = rng.gen_range(-1.0..1.0);
        let sol = SecondOrderSolution::from_constants(only_k4, e, f0).unwrap();
        for f in one_orbit_grid(f0, 30) {
            let q = sol.quadratic_part(f, j_integral(e, f0, f)).to_array();
            k4_quad = k4_quad.max(q.iter().fold(0.0_f64, |m, v| m.max(v.abs())));
        }
    }
    report(
        9,
        "theta invariance",
        shift_err <= 1e-12 && other_err <= 1e-12 && k_err <= 1e-12 && k4_quad == 0.0,
        format!(
            "theta shift error {shift_err:.2e}, other components {other_err:.2e}, \
             non-K4 constants {k_err:.2e} (<= 1e-12); K4-only quadratic part {k4_quad:e} (== 0)"
        ),
        started,
        Duration::from_secs(1),
    );
}

/// Cartesian position of a curvilinear relative state at chief radius r.
fn curvilinear_position(rho: f64, theta: f64, phi: f64, r: f64) -> [f64; 3] {
    let d = r + rho;
    [
        d * phi.cos() * theta.cos() - r,
        d * phi.cos() * theta.sin(),
        d * phi.sin(),
    ]
}

#[test]
fn c10_corrected_slightly_eccentric_equations() {
    let started = Instant::now();
    let (a, e, mu): (f64, f64, f64) = (7500.0, 0.01, MU_EARTH);
    let n = (mu / a.powi(3)).sqrt();
    let r0 = a * (1.0 - e);
    let p = a * (1.0 - e * e);
    let orbits = 10;
    let samples = 200 * orbits;
    let ms: Vec<f64> = (1..=samples)
        .map(|k| 2.0 * PI * orbits as f64 * k as f64 / samples as f64)
        .collect();
    let ts: Vec<f64> = ms.iter().map(|m| m / n).collect();
    let spec = IntegratorSpec::with_tolerances(1e-13, 1e-15);

    let y0 = [
        2.0,
        0.0,
        0.0,
        0.0,
        0.0,
        0.0,
        r0,
        0.0,
        (mu * p).sqrt() / (r0 * r0),
    ];
    let exact = integrate(&ExactCurvilinearSystem { mu }, &y0, 0.0, &ts, &spec).unwrap();

    let mut errs = Vec::new();
    for variant in [
        SlightlyEccentricVariant::Original,
        SlightlyEccentricVariant::Corrected,
    ] {
        let sys = SlightlyEccentricSystem { e, variant };
        let approx = integrate(&sys, &[2.0 / a, 0.0, 0.0, 0.0, 0.0, 0.0], 0.0, &ms, &spec).unwrap();
        let mut worst = 0.0_f64;
        for (ye, ya) in exact.states.iter().zip(&approx.states) {
            let r = ye[6];
            let pe = curvilinear_position(ye[0], ye[1], ye[2], r);
            let pa = curvilinear_position(ya[0] * a, ya[1], ya[2], r);
            let d = ((pe[0] - pa[0]).powi(2) + (pe[1] - pa[1]).powi(2) + (pe[2] - pa[2]).powi(2))
                .sqrt();
            worst = worst.max(d);
        }
        errs.push(worst);
    }
    report(
        10,
        "corrected slightly-eccentric equations",
        errs[1] < errs[0],
        format!(
            "max position error original {:.4e} km, corrected {:.4e} km (corrected strictly smaller)",
            errs[0], errs[1]
        ),
        started,
        Duration::from_secs(30),
    );
}

/// Spherical state with angles scaled to arc lengths at radius r.
fn lengths(s: &RelStateSpherical, r: f64) -> [f64; 6] {
    [
        s.rho,
        r * s.theta,
        r * s.phi,
        s.rhodot,
        r * s.thetadot,
        r * s.phidot,
    ]
}

#[test]
fn c11_transform_round_trips() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut pos_worst, mut vel_worst) = (0.0_f64, 0.0_f64);
    let mut track = |a: &[f64; 6], b: &[f64; 6], pscale: f64, vscale: f64| {
        pos_worst = pos_worst.max(max_abs_diff(&a[..3], &b[..3]) / pscale);
        vel_worst = vel_worst.max(max_abs_diff(&a[3..], &b[3..]) / vscale);
    };
    for _ in 0..10_000 {
        let e = rng.gen_range(0.0..0.9);
        let p = rng.gen_range(6600.0..40_000.0);
        let f = rng.gen_range(-PI..PI);
        let chief = ChiefSnapshot::new(e, p, f, MU_EARTH).unwrap();
        let r = chief.r();
        let v = (MU_EARTH / r).sqrt();
        let sep = rng.gen_range(0.0..0.3) * r;
        let dir: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let norm = (dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]).sqrt();
        if norm < 1e-3 || sep == 0.0 {
            continue;
        }
        let vel: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-0.1..0.1) * v);
        let vn = (vel[0] * vel[0] + vel[1] * vel[1] + vel[2] * vel[2]).sqrt();
        let cart = RelStateCartesian::from_array([
            dir[0] / norm * sep,
            dir[1] / norm * sep,
            dir[2] / norm * sep,
            vel[0],
            vel[1],
            vel[2],
        ]);

        // Cartesian -> spherical -> Cartesian
        let sph = spherical_from_cartesian(&cart, &chief).unwrap();
        let back = cartesian_from_spherical(&sph, &chief);
        track(&cart.to_array(), &back.to_array(), sep, vn);

        // spherical -> Cartesian -> spherical
        let sph2 = spherical_from_cartesian(&back, &chief).unwrap();
        track(&lengths(&sph, r), &lengths(&sph2, r), sep, vn);

        // spherical <-> normalized spherical
        let nd = nondim_spherical(&sph, &chief);
        let sph3 = dimensional_spherical(&nd, &chief);
        track(&lengths(&sph, r), &lengths(&sph3, r), sep, vn);
        let nd2 = nondim_spherical(&sph3, &chief);
        track(&nd.to_array(), &nd2.to_array(), sep / r, vn / v);

        // Cartesian <-> normalized Cartesian
        let ndc: NondimCartesian = nondim_cartesian(&cart, &chief);
        let cart2 = dimensional_cartesian(&ndc, &chief);
        track(&cart.to_array(), &cart2.to_array(), sep, vn);
        let ndc2 = nondim_cartesian(&cart2, &chief);
        track(&ndc.to_array(), &ndc2.to_array(), sep / r, vn / v);
    }
    report(
        11,
        "transform round trips",
        pos_worst <= 1e-12 && vel_worst <= 1e-10,
        format!(
            "relative position {pos_worst:.2e} (<= 1e-12), velocity {vel_worst:.2e} (<= 1e-10)"
        ),
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn c12_roe_conservation_and_drift() {
    let started = Instant::now();
    let ctx = GravContext::earth();
    let d = PI / 180.0;
    let chief0 = ClassicalElements::new(
        7900.0,
        0.1,
        98.0 * d,
        30.0 * d,
        30.0 * d,
        Anomaly::True(0.0),
    )
    .unwrap();
    let n = chief0.mean_motion(&ctx);
    let span = 10.0 * chief0.period(&ctx);
    let roe0 = relmotion::Roe::from_scaled([0.5, 1.0, 0.3, 2.0, -0.4, 2.0], chief0.a);
    let deputy0 = relmotion::roe::elements_from_roe(&chief0, &roe0).unwrap();
    let via_inertial = |el: &ClassicalElements| {
        inertial_to_elements(&elements_to_inertial(el, &ctx).unwrap(), &ctx).unwrap()
    };
    let mut drift = 0.0_f64;
    let start = roe_from_elements(&via_inertial(&chief0), &via_inertial(&deputy0)).unwrap();
    for k in 1..=200 {
        let t = span * k as f64 / 200.0;
        let c = via_inertial(&propagate_elements(&chief0, t, &ctx).unwrap());
        let dp = via_inertial(&propagate_elements(&deputy0, t, &ctx).unwrap());
        let roe = roe_from_elements(&c, &dp).unwrap();
        for (i, (a, b)) in roe.to_array().iter().zip(start.to_array()).enumerate() {
            if i != 1 {
                drift = drift.max((a - b).abs());
            }
        }
    }

    let das = [1e-4, 2e-4, 4e-4, 8e-4];
    let residuals: Vec<f64> = das
        .iter()
        .map(|&da| {
            let roe = relmotion::Roe {
                da,
                ..Default::default()
            };
            let dep = relmotion::roe::elements_from_roe(&chief0, &roe).unwrap();
            let exact = (dep.mean_motion(&ctx) - n) * span;
            (propagate_dlambda(&roe, n, span, DriftOrder::Second).dlambda - exact).abs()
        })
        .collect();
    let slope = loglog_slope(&das, &residuals);
    report(
        12,
        "ROE conservation",
        drift <= 1e-12 && (slope - 3.0).abs() <= 0.1,
        format!(
            "max change of non-drift ROE {drift:.2e} (<= 1e-12); order-2 drift residual slope {slope:.3} (3 +/- 0.1)"
        ),
        started,
        Duration::from_secs(10),
    );
}

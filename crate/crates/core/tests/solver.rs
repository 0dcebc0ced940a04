use std::f64::consts::TAU;

use ahlfors_core::{
    ahlfors_disk, ahlfors_exterior_disk, koebe_expand, solve_extremal, valence, AhlforsSolution,
    AnalyticFunction, BasePoint, BasisSpec, Circle, Complex64, Domain, MoebiusTransform,
    SolverConfig,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn annulus() -> Domain {
    Domain::circle_domain(
        Circle::new(c(0.0, 0.0), 1.0),
        vec![Circle::new(c(0.0, 0.0), 0.4)],
    )
    .unwrap()
}

fn two_holes() -> Domain {
    Domain::circle_domain(
        Circle::new(c(0.0, 0.0), 1.0),
        vec![
            Circle::new(c(0.4, 0.0), 0.2),
            Circle::new(c(-0.4, 0.1), 0.2),
        ],
    )
    .unwrap()
}

fn solve(domain: &Domain, p: Complex64, spec: &BasisSpec, cfg: &SolverConfig) -> AhlforsSolution {
    solve_extremal(domain, BasePoint::Finite(p), spec, cfg).unwrap()
}

/// 100 interior points of the annulus, away from both circles.
fn annulus_grid() -> Vec<Complex64> {
    (0..10)
        .flat_map(|i| {
            (0..10)
                .map(move |k| Complex64::from_polar(0.47 + 0.045 * i as f64, TAU * k as f64 / 10.0))
        })
        .collect()
}

fn fine_boundary_max(sol: &AhlforsSolution) -> f64 {
    sol.boundary_modulus_profile(4096)
        .unwrap()
        .iter()
        .map(|&(_, _, m)| m)
        .fold(0.0, f64::max)
}

#[test]
fn disk_at_origin_is_the_identity() {
    let sol = solve(
        &Domain::UnitDisk,
        c(0.0, 0.0),
        &BasisSpec::new(8),
        &SolverConfig::default(),
    );
    assert!((sol.gamma - 1.0).abs() < 1e-4);
    assert!((sol.evaluate(c(0.5, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-4);
    for (k, a) in sol.coefficients.iter().enumerate() {
        let expected = if k == 1 { 1.0 } else { 0.0 };
        assert!((a - expected).norm() < 1e-4, "coefficient {k} = {a}");
    }
}

#[test]
fn disk_recovers_the_closed_form() {
    for p in [c(0.3, 0.0), c(0.0, -0.7)] {
        let sol = solve(
            &Domain::UnitDisk,
            p,
            &BasisSpec::new(12),
            &SolverConfig::default(),
        );
        let exact = ahlfors_disk(p).unwrap();
        assert!((sol.gamma - exact.gamma).abs() < 1e-3, "{p}: {}", sol.gamma);
        let worst = (0..10)
            .flat_map(|i| {
                (0..10).map(move |k| {
                    Complex64::from_polar(0.09 * (i + 1) as f64, TAU * k as f64 / 10.0)
                })
            })
            .map(|z| (sol.eval(z) - exact.eval(z)).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-3, "{p}: {worst}");
        let profile = sol.boundary_modulus_profile(512).unwrap();
        assert!(profile
            .iter()
            .all(|&(_, _, m)| (1.0 - 1e-3..=1.0 + 1e-6).contains(&m)));
    }
    let sol = solve(
        &Domain::UnitDisk,
        c(0.3, 0.0),
        &BasisSpec::new(12),
        &SolverConfig::default(),
    );
    // |h(p)| only enters the objective at second order, so it settles at
    // roughly the square root of the objective accuracy (a few 1e-6)
    let v = sol.evaluate(c(0.3, 0.0)).unwrap().norm();
    assert!(v < 1e-4, "{v}");
}

#[test]
fn exterior_disk_with_finite_base_point() {
    let sol = solve(
        &Domain::ExteriorUnitDisk,
        c(2.0, 0.0),
        &BasisSpec::new(10),
        &SolverConfig::default(),
    );
    assert!((sol.gamma - 1.0 / 3.0).abs() < 1e-3);
    let exact = ahlfors_exterior_disk(c(2.0, 0.0)).unwrap();
    assert!((sol.eval(c(0.0, 3.0)) - exact.eval(c(0.0, 3.0))).norm() < 1e-3);
}

#[test]
fn evaluation_outside_the_domain_is_rejected() {
    let sol = solve(
        &annulus(),
        c(0.7, 0.0),
        &BasisSpec::new(4),
        &SolverConfig::default(),
    );
    assert!(sol.evaluate(c(0.1, 0.0)).is_err());
    assert!(sol.evaluate(c(1.5, 0.0)).is_err());
    assert!(sol.evaluate(c(0.4, 0.0)).is_ok());
}

#[test]
fn gamma_grows_with_the_degree() {
    let cfg = SolverConfig {
        zero_refinements: 0,
        ..SolverConfig::default()
    };
    let gammas: Vec<f64> = [4, 6, 8]
        .iter()
        .map(|&d| {
            solve(
                &annulus(),
                c(0.7, 0.0),
                &BasisSpec::new(d).with_reflection_depth(0),
                &cfg,
            )
            .gamma
        })
        .collect();
    for w in gammas.windows(2) {
        assert!(w[0] <= w[1] + 1e-12, "{gammas:?}");
    }
}

#[test]
fn extremal_is_unique_across_angle_cuts() {
    let spec = BasisSpec::default_for(&annulus());
    let a = solve(&annulus(), c(0.7, 0.0), &spec, &SolverConfig::default());
    let b = solve(
        &annulus(),
        c(0.7, 0.0),
        &spec,
        &SolverConfig {
            angle_cuts: 24,
            ..SolverConfig::default()
        },
    );
    let worst = annulus_grid()
        .into_iter()
        .map(|z| (a.eval(z) - b.eval(z)).norm())
        .fold(0.0, f64::max);
    assert!(worst <= 5e-4, "{worst}");
}

#[test]
fn annulus_extremal_properties() {
    let cfg = SolverConfig::default();
    let sol = solve(
        &annulus(),
        c(0.7, 0.0),
        &BasisSpec::default_for(&annulus()),
        &cfg,
    );
    assert!(sol.gamma > 0.0);
    let d = sol.derivative(c(0.7, 0.0));
    assert!(d.im.abs() <= 1e-9 * d.re && d.re > 0.0);
    assert!(
        sol.value_at_base_point() <= 1e-4,
        "{}",
        sol.value_at_base_point()
    );
    assert!(fine_boundary_max(&sol) <= 1.0 + 2.0 * cfg.constraint_tolerance);
    let min = sol
        .boundary_modulus_profile(1024)
        .unwrap()
        .iter()
        .map(|&(_, _, m)| m)
        .fold(1.0, f64::min);
    assert!(min >= 1.0 - 2e-3, "{min}");
    for w in [c(0.0, 0.0), c(0.1, 0.0), c(-0.3, 0.4)] {
        let coarse = valence(&sol, &annulus(), w, 1024).unwrap();
        let fine = valence(&sol, &annulus(), w, 2048).unwrap();
        assert_eq!(coarse.count, 2);
        assert_eq!(fine.count, coarse.count);
    }
}

#[test]
fn two_holes_take_every_value_three_times() {
    let domain = two_holes();
    let sol = solve(
        &domain,
        c(0.0, 0.6),
        &BasisSpec::default_for(&domain),
        &SolverConfig::default(),
    );
    let count = valence(&sol, &domain, c(0.1, 0.0), 2048).unwrap();
    assert_eq!(count.count, 3);
    assert!((count.raw - 3.0).abs() < 0.1);
    assert!(sol.value_at_base_point() <= 1e-4);
}

#[test]
fn valence_of_the_disk_map() {
    let f = ahlfors_disk(c(0.3, 0.0)).unwrap();
    assert_eq!(
        valence(&f, &Domain::UnitDisk, c(0.2, 0.0), 512)
            .unwrap()
            .count,
        1
    );
    assert!(valence(&f, &Domain::UnitDisk, c(0.97, 0.0), 512).is_err());
}

#[test]
fn koebe_expansion_of_non_extremal_maps() {
    // z/2 omits -0.5 on the disk
    let half =
        MoebiusTransform::from_coefficients(c(0.5, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0))
            .unwrap();
    let h = koebe_expand(half, c(-0.5, 0.0), c(0.0, 0.0), &Domain::UnitDisk).unwrap();
    assert!(h.derivative(c(0.0, 0.0)).norm() > 0.5 * (1.0 + 1e-3));

    // 0.85·T(z²), T the automorphism at 0.2: a simple zero at √0.2 and
    // |f| ≤ 0.85, so 0.9 is omitted
    let t = MoebiusTransform::disk_automorphism(c(0.2, 0.0)).unwrap();
    let f = ahlfors_core::function::FnAnalytic::new(
        move |z: Complex64| 0.85 * t.apply(z * z),
        move |z: Complex64| 1.7 * z * t.derivative_at(z * z),
    );
    let p = c(0.2f64.sqrt(), 0.0);
    let before = ahlfors_core::function::finite_difference(&f, p, 1e-5).norm();
    let h = koebe_expand(f, c(0.9, 0.0), p, &Domain::UnitDisk).unwrap();
    assert!(h.eval(p).norm() < 1e-12);
    let after = ahlfors_core::function::finite_difference(&h, p, 1e-5).norm();
    assert!(after > before * (1.0 + 1e-3), "{before} {after}");
}

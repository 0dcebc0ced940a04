use std::f64::consts::{FRAC_PI_2, TAU};

use ahlfors_core::closed_form::QuadratureSpec;
use ahlfors_core::domain::BoundaryCurve;
use ahlfors_core::function::FnAnalytic;
use ahlfors_core::harness::{check_nonseparability, SEPARATION_COUNT};
use ahlfors_core::{
    ahlfors_disk, ahlfors_real_slit, derivative_at_infinity, sqrt_branch, strip_map,
    AnalyticFunction, Circle, Complex64, Domain, MoebiusTransform, RealSlitSet,
};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A point of the open disk of radius `r_max`.
fn disk_point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r_max, 0.0..TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn unit_circle(n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn automorphisms_are_unimodular_on_the_circle(p in disk_point(0.95), a in disk_point(0.95)) {
        for t in [MoebiusTransform::disk_automorphism(p).unwrap(), MoebiusTransform::interchange(a).unwrap()] {
            for z in unit_circle(256) {
                prop_assert!((t.apply(z).norm() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn composition_matches_sequential_evaluation(p in disk_point(0.9), a in disk_point(0.9), theta in 0.0..TAU) {
        let outer = MoebiusTransform::interchange(a).unwrap().compose(&MoebiusTransform::rotation(theta));
        let inner = MoebiusTransform::disk_automorphism(p).unwrap();
        let composed = outer.compose(&inner);
        for j in 0..10 {
            for k in 0..10 {
                let z = Complex64::from_polar(0.095 * (j + 1) as f64, TAU * k as f64 / 10.0);
                prop_assert!((composed.apply(z) - outer.apply(inner.apply(z))).norm() <= 1e-12);
            }
        }
    }

    /// A disk avoiding 0, with the witness at its centre.
    #[test]
    fn sqrt_branch_is_continuous_on_zero_free_disks(centre in disk_point(3.0), frac in 0.05..0.95f64, turns in 1.0..4.0f64) {
        prop_assume!(centre.norm() > 0.1);
        let radius = frac * centre.norm();
        let mut prev = sqrt_branch(centre, centre).unwrap();
        // a spiral through the disk: 1000 points
        for k in 1..=1000 {
            let s = k as f64 / 1000.0;
            let w = centre + Complex64::from_polar(radius * s, TAU * turns * s);
            let r = sqrt_branch(w, centre).unwrap();
            prop_assert!((r * r - w).norm() <= 1e-12 * w.norm().max(1.0));
            prop_assert!((r - prev).norm() < 0.1);
            prev = r;
        }
    }

    #[test]
    fn strip_map_stays_in_the_strip(re in -3.0..4.0f64, im in -2.0..2.0f64) {
        let set = RealSlitSet::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let z = c(re, im);
        prop_assume!(set.distance(z) >= 1e-3);
        let h = strip_map(&set, z, &QuadratureSpec::default()).unwrap();
        prop_assert!(h.im.abs() < FRAC_PI_2, "Im h = {}", h.im);
    }

    #[test]
    fn quadrature_doubling_is_converged(re in -3.0..4.0f64, im in -2.0..2.0f64) {
        let set = RealSlitSet::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
        let z = c(re, im);
        prop_assume!(set.distance(z) >= 0.1);
        let q = QuadratureSpec::default();
        let a = strip_map(&set, z, &q).unwrap();
        let b = strip_map(&set, z, &q.doubled()).unwrap();
        prop_assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn derivative_at_infinity_is_linear(alpha in disk_point(3.0), beta in disk_point(3.0), q in disk_point(0.9)) {
        let f = FnAnalytic::new(move |z: Complex64| 1.0 / (z - q), move |z: Complex64| -1.0 / ((z - q) * (z - q)))
            .with_value_at_infinity(c(0.0, 0.0));
        let g = FnAnalytic::new(|z: Complex64| (z + 2.0) / (z * z - 0.25), |z: Complex64| {
            let d = z * z - 0.25;
            (d - (z + 2.0) * 2.0 * z) / (d * d)
        })
        .with_value_at_infinity(c(0.0, 0.0));
        let (fr, gr) = (&f, &g);
        let h = FnAnalytic::new(move |z| alpha * fr.eval(z) + beta * gr.eval(z), move |z| {
            alpha * fr.derivative(z) + beta * gr.derivative(z)
        })
        .with_value_at_infinity(c(0.0, 0.0));
        let origin = c(0.0, 0.0);
        let lhs = derivative_at_infinity(&h, origin, 2.0).unwrap();
        let rhs = alpha * derivative_at_infinity(&f, origin, 2.0).unwrap()
            + beta * derivative_at_infinity(&g, origin, 2.0).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }
}

fn random_circle_domain() -> impl Strategy<Value = Domain> {
    // up to two holes placed in opposite half-disks so they never meet
    (
        0.1..0.2f64,
        0.2..0.5f64,
        0.0..TAU,
        prop::bool::ANY,
        0.1..0.2f64,
        0.2..0.5f64,
    )
        .prop_filter_map("valid circle domain", |(r1, d1, t, two, r2, d2)| {
            let mut holes = vec![Circle::new(Complex64::from_polar(d1, t), r1)];
            if two {
                holes.push(Circle::new(
                    Complex64::from_polar(d2, t + std::f64::consts::PI),
                    r2,
                ));
            }
            Domain::circle_domain(Circle::new(c(0.0, 0.0), 1.0), holes).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn contour_integral_counts_winding(domain in random_circle_domain(), q in disk_point(1.8)) {
        let inside = domain.contains(q);
        let outside_outer = q.norm() > 1.0;
        let near_boundary = domain
            .boundary_curves()
            .iter()
            .any(|curve| match curve {
                BoundaryCurve::Circle { circle, .. } => ((q - circle.center).norm() - circle.radius).abs() < 0.05,
                _ => false,
            });
        prop_assume!(!near_boundary);
        let integral: Complex64 = domain
            .sample_boundary(512)
            .unwrap()
            .iter()
            .map(|s| s.unit_tangent * s.weight / (s.point - q))
            .sum();
        let expected = if inside { c(0.0, TAU) } else { c(0.0, 0.0) };
        if inside || outside_outer {
            prop_assert!((integral - expected).norm() <= 1e-6, "{integral} vs {expected}");
        } else {
            // inside a hole: the outer circle and that hole cancel
            prop_assert!(integral.norm() <= 1e-6);
        }
    }

    #[test]
    fn sample_weights_are_arc_length(domain in random_circle_domain(), n in 8usize..600) {
        let samples = domain.sample_boundary(n).unwrap();
        for (index, curve) in domain.boundary_curves().iter().enumerate() {
            let BoundaryCurve::Circle { circle, .. } = curve else { unreachable!() };
            let total: f64 = samples.iter().filter(|s| s.component == index).map(|s| s.weight).sum();
            prop_assert!(samples.iter().all(|s| s.weight > 0.0));
            let length = TAU * circle.radius;
            prop_assert!((total - length).abs() <= 1e-10 * length);
        }
    }

    #[test]
    fn separation_is_bounded_by_two(p in disk_point(0.7)) {
        let f = ahlfors_disk(p).unwrap();
        let s: Vec<Complex64> = unit_circle(SEPARATION_COUNT).collect();
        let report = check_nonseparability(&f, &s, &Domain::UnitDisk);
        prop_assert!(report.measured <= 2.0 + 1e-12);
    }
}

#[test]
fn stadium_sup_approaches_one() {
    let set = RealSlitSet::new(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let f = ahlfors_real_slit(&set, QuadratureSpec::default()).unwrap();
    let sup = |eps: f64| -> f64 {
        set.intervals()
            .iter()
            .flat_map(|&(left, right)| {
                BoundaryCurve::Stadium {
                    left,
                    right,
                    offset: eps,
                }
                .samples(0, 2048)
            })
            .map(|s| f.eval(s.point).norm())
            .fold(0.0, f64::max)
    };
    let (coarse, fine) = (sup(1e-2), sup(1e-3));
    assert!(coarse < fine && fine < 1.0, "{coarse} {fine}");
    assert!(1.0 - fine < 1.0 - coarse);
}

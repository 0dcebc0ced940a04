//! Ahlfors functions with explicit formulas: the disk, the exterior of the
//! disk and complements of finite unions of real intervals.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::domain::{BasePoint, Domain, RealSlitSet};
use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use crate::moebius::MoebiusTransform;
use crate::quadrature::GaussLegendre;

/// Gauss–Legendre panels on each slit interval.
///
/// Panels are graded geometrically towards the point of the interval nearest
/// to the evaluation point, so the rule stays accurate down to the
/// near-singularity floor.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    pub nodes_per_interval: usize,
    /// Evaluations closer than `floor_factor · λ(E)` to `E` are rejected.
    pub floor_factor: f64,
    rule: GaussLegendre,
}

impl QuadratureSpec {
    pub fn new(nodes_per_interval: usize) -> Result<Self> {
        if nodes_per_interval < 4 {
            return Err(Error::InvalidParameter(format!(
                "nodes_per_interval must be at least 4, got {nodes_per_interval}"
            )));
        }
        Ok(Self {
            nodes_per_interval,
            floor_factor: 1e-9,
            rule: GaussLegendre::new(nodes_per_interval),
        })
    }

    pub fn with_floor_factor(mut self, floor_factor: f64) -> Self {
        self.floor_factor = floor_factor;
        self
    }

    pub fn doubled(&self) -> Self {
        Self {
            nodes_per_interval: 2 * self.nodes_per_interval,
            floor_factor: self.floor_factor,
            rule: GaussLegendre::new(2 * self.nodes_per_interval),
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(20).expect("default order is valid")
    }
}

/// Panel breakpoints on `[lo, hi]` (offsets from the grading centre, so
/// `lo ≤ 0 ≤ hi`), doubling in length away from `0`.
fn graded_panels(lo: f64, hi: f64, first: f64) -> Vec<f64> {
    let mut right = vec![0.0];
    let mut step = first;
    let mut x = 0.0;
    while x < hi {
        x = (x + step).min(hi);
        right.push(x);
        step *= 2.0;
    }
    let mut left = Vec::new();
    let mut step = first;
    let mut x = 0.0;
    while x > lo {
        x = (x - step).max(lo);
        left.push(x);
        step *= 2.0;
    }
    left.reverse();
    left.extend(right);
    left.dedup();
    left
}

/// `(∫_E dt/(z−t), ∫_E dt/(z−t)²)`.
///
/// Nodes are placed relative to the point of each interval nearest to `z`,
/// so `z − t` keeps full relative precision close to the slit.
fn cauchy_moments(
    set: &RealSlitSet,
    z: Complex64,
    q: &QuadratureSpec,
) -> Result<(Complex64, Complex64)> {
    let floor = q.floor_factor * set.measure();
    if set.distance(z) <= floor {
        return Err(Error::NearSingularity { z, floor });
    }
    let mut m1 = Complex64::new(0.0, 0.0);
    let mut m2 = Complex64::new(0.0, 0.0);
    for &(a, b) in set.intervals() {
        let x0 = z.re.clamp(a, b);
        let rel = Complex64::new(z.re - x0, z.im);
        let d = rel.norm();
        let (lo, hi) = (a - x0, b - x0);
        let breaks = if d >= b - a {
            vec![lo, hi]
        } else {
            graded_panels(lo, hi, d)
        };
        for panel in breaks.windows(2) {
            for (u, w) in q.rule.mapped(panel[0], panel[1]) {
                let k = 1.0 / (rel - u);
                m1 += k * w;
                m2 += k * k * w;
            }
        }
    }
    Ok((m1, m2))
}

/// `h(z) = ½ ∫_E dt / (z − t)`, a map of `Ĉ ∖ E` into the strip
/// `|Im h| < π/2`. `h(∞) = 0`.
pub fn strip_map(set: &RealSlitSet, z: Complex64, q: &QuadratureSpec) -> Result<Complex64> {
    Ok(0.5 * cauchy_moments(set, z, q)?.0)
}

/// `h'(z) = −½ ∫_E dt / (z − t)²`.
pub fn strip_map_derivative(
    set: &RealSlitSet,
    z: Complex64,
    q: &QuadratureSpec,
) -> Result<Complex64> {
    Ok(-0.5 * cauchy_moments(set, z, q)?.1)
}

/// `strip_map` together with the change under node doubling.
pub fn strip_map_with_error(
    set: &RealSlitSet,
    z: Complex64,
    q: &QuadratureSpec,
) -> Result<(Complex64, f64)> {
    let coarse = strip_map(set, z, q)?;
    let fine = strip_map(set, z, &q.doubled())?;
    Ok((fine, (fine - coarse).norm()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormKind {
    DiskMoebius(MoebiusTransform),
    /// Disk automorphism composed with `1/z`, already rotated so that the
    /// derivative at the base point is positive.
    ExteriorDiskRational(MoebiusTransform),
    RealSlit {
        set: RealSlitSet,
        quadrature: QuadratureSpec,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AhlforsClosedForm {
    pub kind: ClosedFormKind,
    pub base_point: BasePoint,
    pub gamma: f64,
}

impl AhlforsClosedForm {
    pub fn try_eval(&self, z: Complex64) -> Result<Complex64> {
        match &self.kind {
            ClosedFormKind::DiskMoebius(t) | ClosedFormKind::ExteriorDiskRational(t) => {
                Ok(t.apply(z))
            }
            ClosedFormKind::RealSlit { set, quadrature } => {
                let e = strip_map(set, z, quadrature)?.exp();
                Ok((e - 1.0) / (e + 1.0))
            }
        }
    }

    pub fn try_derivative(&self, z: Complex64) -> Result<Complex64> {
        match &self.kind {
            ClosedFormKind::DiskMoebius(t) | ClosedFormKind::ExteriorDiskRational(t) => {
                Ok(t.derivative_at(z))
            }
            ClosedFormKind::RealSlit { set, quadrature } => {
                let (m1, m2) = cauchy_moments(set, z, quadrature)?;
                let e = (0.5 * m1).exp();
                let dh = -0.5 * m2;
                Ok(2.0 * e / ((e + 1.0) * (e + 1.0)) * dh)
            }
        }
    }

    pub fn moebius(&self) -> Option<&MoebiusTransform> {
        match &self.kind {
            ClosedFormKind::DiskMoebius(t) | ClosedFormKind::ExteriorDiskRational(t) => Some(t),
            ClosedFormKind::RealSlit { .. } => None,
        }
    }

    /// The closed form matching `domain` and `p`, when one exists.
    pub fn for_domain(domain: &Domain, p: &BasePoint) -> Result<Self> {
        if !domain.contains_point(p) {
            return Err(Error::InvalidParameter(format!(
                "base point {p} is not in the domain"
            )));
        }
        match (domain, p) {
            (Domain::UnitDisk, BasePoint::Finite(z)) => ahlfors_disk(*z),
            (Domain::ExteriorUnitDisk, BasePoint::Finite(z)) => ahlfors_exterior_disk(*z),
            (Domain::ExteriorUnitDisk, BasePoint::Infinity) => Ok(AhlforsClosedForm {
                kind: ClosedFormKind::ExteriorDiskRational(MoebiusTransform::inversion()),
                base_point: BasePoint::Infinity,
                gamma: 1.0,
            }),
            (Domain::RealSlitComplement(set), BasePoint::Infinity) => {
                ahlfors_real_slit(set, QuadratureSpec::default())
            }
            _ => Err(Error::Unsupported(format!(
                "no closed form for this domain at base point {p}"
            ))),
        }
    }
}

impl AnalyticFunction for AhlforsClosedForm {
    /// NaN within the near-singularity floor of a slit.
    fn eval(&self, z: Complex64) -> Complex64 {
        self.try_eval(z)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.try_derivative(z)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn value_at_infinity(&self) -> Option<Complex64> {
        match &self.kind {
            ClosedFormKind::DiskMoebius(_) => None,
            ClosedFormKind::ExteriorDiskRational(t) => t.at_infinity(),
            ClosedFormKind::RealSlit { .. } => Some(Complex64::new(0.0, 0.0)),
        }
    }
}

/// Ahlfors function of the unit disk at `p`: the automorphism `(z−p)/(1−p̄z)`.
pub fn ahlfors_disk(p: Complex64) -> Result<AhlforsClosedForm> {
    let t = MoebiusTransform::disk_automorphism(p)?;
    Ok(AhlforsClosedForm {
        kind: ClosedFormKind::DiskMoebius(t),
        base_point: BasePoint::Finite(p),
        gamma: 1.0 / (1.0 - p.norm_sqr()),
    })
}

/// Ahlfors function of `{|z| > 1} ∪ {∞}` at a finite `p`: the automorphism
/// vanishing at `1/p` composed with `1/z`, rotated so `F'(p) > 0`.
pub fn ahlfors_exterior_disk(p: Complex64) -> Result<AhlforsClosedForm> {
    if !(p.re.is_finite() && p.im.is_finite()) || p.norm() <= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "exterior base point must satisfy |p| > 1, got {p}"
        )));
    }
    let t = MoebiusTransform::disk_automorphism(1.0 / p)?.compose(&MoebiusTransform::inversion());
    let d = t.derivative_at(p);
    let t = MoebiusTransform::rotation(-d.arg()).compose(&t);
    Ok(AhlforsClosedForm {
        kind: ClosedFormKind::ExteriorDiskRational(t),
        base_point: BasePoint::Finite(p),
        gamma: d.norm(),
    })
}

/// `F = (e^h − 1)/(e^h + 1)` on `Ĉ ∖ E`, normalised at `∞`.
pub fn ahlfors_real_slit(
    set: &RealSlitSet,
    quadrature: QuadratureSpec,
) -> Result<AhlforsClosedForm> {
    Ok(AhlforsClosedForm {
        kind: ClosedFormKind::RealSlit {
            set: set.clone(),
            quadrature,
        },
        base_point: BasePoint::Infinity,
        gamma: capacity_real_slit(set),
    })
}

/// Analytic capacity of `E ⊂ ℝ`: `λ(E)/4`.
pub fn capacity_real_slit(set: &RealSlitSet) -> f64 {
    0.25 * set.measure()
}

const INFINITY_NODES: usize = 256;

fn contour_coefficient<F: AnalyticFunction + ?Sized>(
    f: &F,
    center: Complex64,
    radius: f64,
) -> Complex64 {
    // (1/2πi) ∮ f dz on |z − c| = R, trapezoidal rule
    let sum: Complex64 = (0..INFINITY_NODES)
        .map(|k| {
            let e = Complex64::from_polar(1.0, TAU * k as f64 / INFINITY_NODES as f64);
            f.eval(center + radius * e) * e
        })
        .sum();
    sum * (radius / INFINITY_NODES as f64)
}

/// `f'(∞) = lim z (f(z) − f(∞))`, the `1/z` coefficient of `f` at `∞`,
/// computed as `(1/2πi) ∮ f dz` over a circle about `center`.
///
/// The radius starts at `radius` (which must enclose every singularity) and
/// doubles until two successive values agree to `1e-10` relative.
pub fn derivative_at_infinity<F: AnalyticFunction + ?Sized>(
    f: &F,
    center: Complex64,
    radius: f64,
) -> Result<Complex64> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidParameter(format!("contour radius {radius}")));
    }
    let mut r = radius;
    let mut prev = contour_coefficient(f, center, r);
    for _ in 0..10 {
        r *= 2.0;
        let next = contour_coefficient(f, center, r);
        if !(next.re.is_finite() && next.im.is_finite()) {
            break;
        }
        if (next - prev).norm() <= 1e-10 * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NumericalInstability(format!(
        "contour value for f'(∞) did not settle (last radius {r})"
    )))
}

/// Centre and starting radius of a circle enclosing the complement of `domain`.
pub fn infinity_contour(domain: &Domain) -> Option<(Complex64, f64)> {
    match domain {
        Domain::ExteriorUnitDisk => Some((Complex64::new(0.0, 0.0), 2.0)),
        Domain::RealSlitComplement(set) => {
            let (a, b) = set.hull();
            Some((Complex64::new(0.5 * (a + b), 0.0), b - a))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{finite_difference, FnAnalytic};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn slits(v: &[(f64, f64)]) -> RealSlitSet {
        RealSlitSet::new(v.to_vec()).unwrap()
    }

    /// Independent oracle: composite Simpson rule with many panels, only
    /// used for points well away from E.
    fn simpson_strip(set: &RealSlitSet, z: Complex64) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for &(a, b) in set.intervals() {
            let n = 20_000;
            let h = (b - a) / n as f64;
            let f = |t: f64| 1.0 / (z - t);
            let mut s = f(a) + f(b);
            for k in 1..n {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(a + k as f64 * h);
            }
            total += s * (h / 3.0);
        }
        0.5 * total
    }

    #[test]
    fn disk_closed_form() {
        let f = ahlfors_disk(Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(f.gamma, 1.0);
        assert_eq!(f.eval(c(0.4, 0.1)), c(0.4, 0.1));
        let f = ahlfors_disk(c(0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(f.gamma, 4.0 / 3.0, epsilon = 1e-15);
        let fd = finite_difference(&f, c(0.5, 0.0), 1e-5);
        assert_abs_diff_eq!(fd.re, 4.0 / 3.0, epsilon = 1e-8);
        let f = ahlfors_disk(c(0.0, 0.3)).unwrap();
        assert_abs_diff_eq!(f.eval(c(0.0, 0.3)).norm(), 0.0, epsilon = 1e-15);
        assert!(ahlfors_disk(c(0.0, 1.0)).is_err());
    }

    #[test]
    fn exterior_disk_matches_rational_formula() {
        let f = ahlfors_exterior_disk(c(2.0, 0.0)).unwrap();
        let reference = MoebiusTransform::from_coefficients(
            c(1.0, 0.0),
            c(-2.0, 0.0),
            c(2.0, 0.0),
            c(-1.0, 0.0),
        )
        .unwrap();
        assert!(f.moebius().unwrap().coefficient_distance(&reference) <= 1e-12);
        assert_abs_diff_eq!(f.gamma, 1.0 / 3.0, epsilon = 1e-15);
        // F'(z) = 3/(2z−1)² at z = 2, finite differences
        let fd = finite_difference(&f, c(2.0, 0.0), 1e-5);
        assert_abs_diff_eq!(fd.re, 1.0 / 3.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            (f.value_at_infinity().unwrap() - 0.5).norm(),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!((f.eval(c(1e8, 0.0)) - 0.5).norm(), 0.0, epsilon = 1e-7);
        for k in 0..64 {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / 64.0);
            assert_abs_diff_eq!(f.eval(z).norm(), 1.0, epsilon = 1e-12);
        }
        let g = ahlfors_exterior_disk(c(-1.5, 2.0)).unwrap();
        assert_abs_diff_eq!(g.eval(c(-1.5, 2.0)).norm(), 0.0, epsilon = 1e-14);
        let d = g.derivative(c(-1.5, 2.0));
        assert!(d.re > 0.0 && d.im.abs() < 1e-14);
        assert!(ahlfors_exterior_disk(c(0.5, 0.5)).is_err());
    }

    #[test]
    fn strip_map_single_interval() {
        let e = slits(&[(-1.0, 1.0)]);
        let q = QuadratureSpec::default();
        let h = strip_map(&e, c(2.0, 0.0), &q).unwrap();
        assert_abs_diff_eq!(h.re, 0.5 * 3f64.ln(), epsilon = 1e-14);
        assert_abs_diff_eq!(
            (simpson_strip(&e, c(2.0, 0.0)) - h).norm(),
            0.0,
            epsilon = 1e-12
        );
        let far = strip_map(&e, c(0.0, 1e9), &q).unwrap();
        assert!(far.norm() < 1e-8);
        // analytic reference ½ log((z+1)/(z−1)) down to the floor
        for &z in &[
            c(0.3, 1e-7),
            c(1.0 + 1e-6, 0.0),
            c(-0.99, -1e-4),
            c(0.0, 0.5),
        ] {
            let exact = 0.5 * ((z + 1.0) / (z - 1.0)).ln();
            let h = strip_map(&e, z, &q).unwrap();
            assert!((h - exact).norm() < 1e-10, "{z}: {h} vs {exact}");
        }
        assert!(matches!(
            strip_map(&e, c(0.2, 1e-10), &q),
            Err(Error::NearSingularity { .. })
        ));
    }

    #[test]
    fn strip_map_between_slits_is_real() {
        let e = slits(&[(0.0, 1.0), (2.0, 3.0)]);
        let h = strip_map(&e, c(1.5, 0.0), &QuadratureSpec::default()).unwrap();
        assert_eq!(h.im, 0.0);
        assert_abs_diff_eq!(
            (simpson_strip(&e, c(1.5, 0.0)) - h).norm(),
            0.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn strip_map_derivative_matches_differences() {
        let e = slits(&[(0.0, 1.0), (2.0, 3.0)]);
        let q = QuadratureSpec::default();
        let z = c(1.2, 0.4);
        let d = strip_map_derivative(&e, z, &q).unwrap();
        let h = 1e-5;
        let fd =
            (strip_map(&e, z + h, &q).unwrap() - strip_map(&e, z - h, &q).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!((d - fd).norm(), 0.0, epsilon = 1e-8);
        let (_, err) = strip_map_with_error(&e, z, &q).unwrap();
        assert!(err < 1e-12);
    }

    #[test]
    fn real_slit_values() {
        let e = slits(&[(-1.0, 1.0)]);
        let f = ahlfors_real_slit(&e, QuadratureSpec::default()).unwrap();
        assert_eq!(f.gamma, 0.5);
        let v = f.eval(c(2.0, 0.0));
        let oracle = (0.25 * 3f64.ln()).tanh();
        assert_abs_diff_eq!(v.re, oracle, epsilon = 1e-14);
        assert!(v.re > 0.0 && v.re < 1.0 && v.im.abs() < 1e-15);
        assert_eq!(capacity_real_slit(&slits(&[(0.0, 1.0), (2.0, 3.0)])), 0.5);
        assert_abs_diff_eq!(
            capacity_real_slit(&slits(&[(0.0, 1e-9)])),
            2.5e-10,
            epsilon = 1e-24
        );
    }

    /// Richardson extrapolation of z (f(z) − f(∞)) along the positive axis.
    fn richardson<F: AnalyticFunction>(f: &F, r: f64) -> Complex64 {
        let finf = f.value_at_infinity().unwrap();
        let g = |x: f64| c(x, 0.0) * (f.eval(c(x, 0.0)) - finf);
        // g(x) = a1 + a2/x + a3/x² + …; eliminate two correction terms
        let (g1, g2, g4) = (g(r), g(2.0 * r), g(4.0 * r));
        let r1 = 2.0 * g2 - g1;
        let r2 = 2.0 * g4 - g2;
        (4.0 * r2 - r1) / 3.0
    }

    #[test]
    fn derivative_at_infinity_examples() {
        let zero = c(0.0, 0.0);
        let inv = FnAnalytic::new(|z: Complex64| 1.0 / z, |z: Complex64| -1.0 / (z * z))
            .with_value_at_infinity(zero);
        assert_abs_diff_eq!(
            (derivative_at_infinity(&inv, zero, 2.0).unwrap() - 1.0).norm(),
            0.0,
            epsilon = 1e-14
        );
        let cst = FnAnalytic::new(|_| c(3.0, -1.0), |_| zero).with_value_at_infinity(c(3.0, -1.0));
        assert!(derivative_at_infinity(&cst, zero, 1.0).unwrap().norm() < 1e-14);
        let e = slits(&[(-1.0, 1.0)]);
        let f = ahlfors_real_slit(&e, QuadratureSpec::default()).unwrap();
        let d = derivative_at_infinity(&f, zero, 2.0).unwrap();
        assert_abs_diff_eq!((d - 0.5).norm(), 0.0, epsilon = 1e-10);
        let rich = richardson(&f, 200.0);
        assert!((rich - d).norm() <= 1e-8 * d.norm());
    }

    #[test]
    fn derivative_at_infinity_is_linear() {
        let zero = c(0.0, 0.0);
        let f = ahlfors_real_slit(&slits(&[(0.0, 1.0), (2.0, 3.0)]), QuadratureSpec::default())
            .unwrap();
        let g = ahlfors_exterior_disk(c(2.0, 0.0)).unwrap();
        let (alpha, beta) = (c(0.7, -0.2), c(-1.3, 0.5));
        let combo = FnAnalytic::new(
            |z| alpha * f.eval(z) + beta * g.eval(z),
            |z| alpha * f.derivative(z) + beta * g.derivative(z),
        );
        let lhs = derivative_at_infinity(&combo, c(1.5, 0.0), 3.0).unwrap();
        let rhs = alpha * derivative_at_infinity(&f, c(1.5, 0.0), 3.0).unwrap()
            + beta * derivative_at_infinity(&g, zero, 2.0).unwrap();
        assert!((lhs - rhs).norm() <= 1e-10);
    }

    #[test]
    fn quadrature_spec_validation() {
        assert!(QuadratureSpec::new(3).is_err());
        assert_eq!(QuadratureSpec::new(4).unwrap().nodes_per_interval, 4);
    }
}

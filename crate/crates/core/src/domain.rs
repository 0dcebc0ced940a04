//! Planar domains, their boundary curves and boundary discretisation.
//!
//! Every boundary curve is traversed with the domain on its left: the outer
//! circle of a bounded domain counterclockwise, hole circles, the unit circle
//! of the exterior disk and the contours around slits clockwise.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Self { center, radius }
    }

    fn check(&self) -> Result<(), GeometryError> {
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(GeometryError::BadRadius(self.radius));
        }
        Ok(())
    }
}

/// A finite union of pairwise disjoint closed intervals of the real line.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSlitSet {
    intervals: Vec<(f64, f64)>,
}

impl RealSlitSet {
    /// Sorts the intervals by left endpoint and validates them.
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self, GeometryError> {
        if intervals.is_empty() {
            return Err(GeometryError::EmptySlitSet);
        }
        for &(left, right) in &intervals {
            if !(left.is_finite() && right.is_finite()) {
                return Err(GeometryError::NonFinite);
            }
            if left >= right {
                return Err(GeometryError::DegenerateSlit { left, right });
            }
        }
        intervals.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (i, pair) in intervals.windows(2).enumerate() {
            if pair[1].0 <= pair[0].1 {
                return Err(GeometryError::OverlappingSlits {
                    first: i,
                    second: i + 1,
                });
            }
        }
        Ok(Self { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    /// Lebesgue measure λ(E).
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn hull(&self) -> (f64, f64) {
        (
            self.intervals[0].0,
            self.intervals[self.intervals.len() - 1].1,
        )
    }

    /// Euclidean distance from `z` to the set.
    pub fn distance(&self, z: Complex64) -> f64 {
        self.intervals
            .iter()
            .map(|&(a, b)| (z - z.re.clamp(a, b)).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn contains_point(&self, z: Complex64) -> bool {
        z.im == 0.0 && self.intervals.iter().any(|&(a, b)| a <= z.re && z.re <= b)
    }
}

/// A point of the Riemann sphere used as the normalisation point `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasePoint {
    Finite(Complex64),
    Infinity,
}

impl BasePoint {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            BasePoint::Finite(z) => Some(*z),
            BasePoint::Infinity => None,
        }
    }
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePoint::Finite(z) => write!(f, "{},{}", z.re, z.im),
            BasePoint::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for BasePoint {
    type Err = GeometryError;

    /// Accepts `inf` or `re,im` (a bare real number is also accepted).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(BasePoint::Infinity);
        }
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| GeometryError::Malformed(format!("cannot parse point `{s}`")))
        };
        match s.split_once(',') {
            Some((re, im)) => Ok(BasePoint::Finite(Complex64::new(parse(re)?, parse(im)?))),
            None => Ok(BasePoint::Finite(Complex64::new(parse(s)?, 0.0))),
        }
    }
}

/// One discretisation node of ∂Ω.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub component: usize,
    /// Curve parameter in `[0, 2π)`, increasing along the traversal.
    pub parameter: f64,
    pub point: Complex64,
    /// Unit tangent in the traversal direction (domain on the left).
    pub unit_tangent: Complex64,
    /// Arc-length weight of the trapezoidal rule.
    pub weight: f64,
}

/// A closed boundary curve together with its traversal direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryCurve {
    Circle {
        circle: Circle,
        clockwise: bool,
    },
    /// Boundary of the `offset`-neighbourhood of `[left, right]`, traversed
    /// clockwise.
    Stadium {
        left: f64,
        right: f64,
        offset: f64,
    },
}

impl BoundaryCurve {
    pub fn length(&self) -> f64 {
        match *self {
            BoundaryCurve::Circle { circle, .. } => TAU * circle.radius,
            BoundaryCurve::Stadium {
                left,
                right,
                offset,
            } => 2.0 * (right - left) + TAU * offset,
        }
    }

    /// Point and unit tangent at normalised parameter `t ∈ [0, 1)`.
    pub fn frame(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            BoundaryCurve::Circle { circle, clockwise } => {
                let theta = if clockwise { -TAU * t } else { TAU * t };
                let dir = Complex64::from_polar(1.0, theta);
                let tangent = if clockwise { -I * dir } else { I * dir };
                (circle.center + circle.radius * dir, tangent)
            }
            BoundaryCurve::Stadium {
                left,
                right,
                offset,
            } => {
                // counterclockwise arc-length parametrisation, then reversed
                let len = right - left;
                let cap = PI * offset;
                let s = (1.0 - t).rem_euclid(1.0) * self.length();
                let (point, tangent) = if s < len {
                    (Complex64::new(left + s, -offset), Complex64::new(1.0, 0.0))
                } else if s < len + cap {
                    let phi = -PI / 2.0 + (s - len) / offset;
                    let dir = Complex64::from_polar(1.0, phi);
                    (right + offset * dir, I * dir)
                } else if s < 2.0 * len + cap {
                    let u = s - len - cap;
                    (Complex64::new(right - u, offset), Complex64::new(-1.0, 0.0))
                } else {
                    let phi = PI / 2.0 + (s - 2.0 * len - cap) / offset;
                    let dir = Complex64::from_polar(1.0, phi);
                    (left + offset * dir, I * dir)
                };
                (point, -tangent)
            }
        }
    }

    pub fn point(&self, t: f64) -> Complex64 {
        self.frame(t).0
    }

    /// Unit normal pointing into the domain.
    pub fn inward_normal(&self, t: f64) -> Complex64 {
        I * self.frame(t).1
    }

    /// The parallel curve moved a distance `delta` into the domain.
    pub fn offset(&self, delta: f64) -> BoundaryCurve {
        match *self {
            BoundaryCurve::Circle { circle, clockwise } => {
                let radius = if clockwise {
                    circle.radius + delta
                } else {
                    circle.radius - delta
                };
                BoundaryCurve::Circle {
                    circle: Circle::new(circle.center, radius),
                    clockwise,
                }
            }
            BoundaryCurve::Stadium {
                left,
                right,
                offset,
            } => BoundaryCurve::Stadium {
                left,
                right,
                offset: offset + delta,
            },
        }
    }

    /// Equispaced trapezoidal samples.
    pub fn samples(&self, component: usize, n: usize) -> Vec<BoundarySample> {
        let weight = self.length() / n as f64;
        (0..n)
            .map(|k| {
                let t = k as f64 / n as f64;
                let (point, unit_tangent) = self.frame(t);
                BoundarySample {
                    component,
                    parameter: TAU * t,
                    point,
                    unit_tangent,
                    weight,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    UnitDisk,
    /// `{|z| > 1} ∪ {∞}`.
    ExteriorUnitDisk,
    CircleDomain {
        outer: Circle,
        holes: Vec<Circle>,
    },
    /// `Ĉ ∖ E` for a compact real set `E`; contains `∞`.
    RealSlitComplement(RealSlitSet),
}

impl Domain {
    pub fn circle_domain(outer: Circle, holes: Vec<Circle>) -> Result<Self, GeometryError> {
        Domain::CircleDomain { outer, holes }.validated()
    }

    pub fn real_slit(intervals: Vec<(f64, f64)>) -> Result<Self, GeometryError> {
        Ok(Domain::RealSlitComplement(RealSlitSet::new(intervals)?))
    }

    pub fn validated(self) -> Result<Self, GeometryError> {
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        match self {
            Domain::UnitDisk | Domain::ExteriorUnitDisk => Ok(()),
            Domain::CircleDomain { outer, holes } => {
                outer.check()?;
                for (index, hole) in holes.iter().enumerate() {
                    hole.check()?;
                    if (hole.center - outer.center).norm() + hole.radius >= outer.radius {
                        return Err(GeometryError::HoleExceedsOuter { index });
                    }
                }
                for (i, a) in holes.iter().enumerate() {
                    for (j, b) in holes.iter().enumerate().skip(i + 1) {
                        if (a.center - b.center).norm() <= a.radius + b.radius {
                            return Err(GeometryError::OverlappingHoles {
                                first: i,
                                second: j,
                            });
                        }
                    }
                }
                Ok(())
            }
            Domain::RealSlitComplement(set) => RealSlitSet::new(set.intervals.clone()).map(|_| ()),
        }
    }

    pub fn contains_infinity(&self) -> bool {
        matches!(
            self,
            Domain::ExteriorUnitDisk | Domain::RealSlitComplement(_)
        )
    }

    /// Open-set membership for a finite point; boundary points are excluded.
    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return false;
        }
        match self {
            Domain::UnitDisk => z.norm() < 1.0,
            Domain::ExteriorUnitDisk => z.norm() > 1.0,
            Domain::CircleDomain { outer, holes } => {
                (z - outer.center).norm() < outer.radius
                    && holes.iter().all(|h| (z - h.center).norm() > h.radius)
            }
            Domain::RealSlitComplement(set) => !set.contains_point(z),
        }
    }

    pub fn contains_point(&self, p: &BasePoint) -> bool {
        match p {
            BasePoint::Finite(z) => self.contains(*z),
            BasePoint::Infinity => self.contains_infinity(),
        }
    }

    /// Membership in the closure `Ω ∪ ∂Ω` with relative slack `tol`.
    pub fn contains_closure(&self, z: Complex64, tol: f64) -> bool {
        match self {
            Domain::UnitDisk => z.norm() <= 1.0 + tol,
            Domain::ExteriorUnitDisk => z.norm() >= 1.0 - tol,
            Domain::CircleDomain { outer, holes } => {
                (z - outer.center).norm() <= outer.radius * (1.0 + tol)
                    && holes
                        .iter()
                        .all(|h| (z - h.center).norm() >= h.radius * (1.0 - tol))
            }
            Domain::RealSlitComplement(_) => true,
        }
    }

    /// Offset of the slit contours, `1e-3 · λ(E)`.
    pub fn slit_contour_offset(set: &RealSlitSet) -> f64 {
        1e-3 * set.measure()
    }

    /// Boundary components in a fixed order: outer circle first, then holes.
    pub fn boundary_curves(&self) -> Vec<BoundaryCurve> {
        match self {
            Domain::UnitDisk => vec![BoundaryCurve::Circle {
                circle: Circle::new(Complex64::new(0.0, 0.0), 1.0),
                clockwise: false,
            }],
            Domain::ExteriorUnitDisk => vec![BoundaryCurve::Circle {
                circle: Circle::new(Complex64::new(0.0, 0.0), 1.0),
                clockwise: true,
            }],
            Domain::CircleDomain { outer, holes } => std::iter::once(BoundaryCurve::Circle {
                circle: *outer,
                clockwise: false,
            })
            .chain(holes.iter().map(|h| BoundaryCurve::Circle {
                circle: *h,
                clockwise: true,
            }))
            .collect(),
            Domain::RealSlitComplement(set) => {
                let offset = Self::slit_contour_offset(set);
                set.intervals
                    .iter()
                    .map(|&(left, right)| BoundaryCurve::Stadium {
                        left,
                        right,
                        offset,
                    })
                    .collect()
            }
        }
    }

    pub fn component_count(&self) -> usize {
        match self {
            Domain::CircleDomain { holes, .. } => holes.len() + 1,
            Domain::RealSlitComplement(set) => set.intervals.len(),
            _ => 1,
        }
    }

    /// `n_per_component` equispaced samples on every boundary component.
    pub fn sample_boundary(
        &self,
        n_per_component: usize,
    ) -> Result<Vec<BoundarySample>, GeometryError> {
        if n_per_component < 8 {
            return Err(GeometryError::TooFewSamples(n_per_component));
        }
        Ok(self
            .boundary_curves()
            .iter()
            .enumerate()
            .flat_map(|(c, curve)| curve.samples(c, n_per_component))
            .collect())
    }

    /// Largest inward offset for which the parallel curve of component
    /// `index` stays well inside the domain.
    pub fn clearance(&self, index: usize) -> f64 {
        match self {
            Domain::UnitDisk | Domain::ExteriorUnitDisk => 1.0,
            Domain::CircleDomain { outer, holes } => {
                let gap_to_outer =
                    |h: &Circle| outer.radius - (h.center - outer.center).norm() - h.radius;
                if index == 0 {
                    holes.iter().map(gap_to_outer).fold(outer.radius, f64::min)
                } else {
                    let me = &holes[index - 1];
                    holes
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != index - 1)
                        .map(|(_, h)| (h.center - me.center).norm() - h.radius - me.radius)
                        .fold(gap_to_outer(me), f64::min)
                }
            }
            Domain::RealSlitComplement(set) => {
                let (a, b) = set.intervals[index];
                let mut c = b - a;
                if index > 0 {
                    c = c.min(a - set.intervals[index - 1].1);
                }
                if index + 1 < set.intervals.len() {
                    c = c.min(set.intervals[index + 1].0 - b);
                }
                c
            }
        }
    }

    /// Curves parallel to the boundary at geometrically shrinking offsets
    /// `clearance · 2^{-k}`, `k = 1..=levels`, each sampled at `n` points.
    ///
    /// For slit domains the offsets are measured from the slits themselves.
    pub fn refined_mesh(&self, levels: u32, n: usize) -> Vec<Complex64> {
        let mut points = Vec::new();
        for (index, curve) in self.boundary_curves().iter().enumerate() {
            let base = match *curve {
                BoundaryCurve::Stadium { left, right, .. } => BoundaryCurve::Stadium {
                    left,
                    right,
                    offset: 0.0,
                },
                c => c,
            };
            let clearance = self.clearance(index);
            for k in 1..=levels {
                let delta = clearance * 0.5f64.powi(k as i32);
                let c = base.offset(delta);
                points.extend((0..n).map(|j| c.point(j as f64 / n as f64)));
            }
        }
        points.retain(|z| self.contains(*z));
        points
    }

    /// Curves parallel to each component at `layers` evenly spaced offsets,
    /// filling the domain up to half the clearance (the whole disk for a
    /// disk). Indexed as `[layer][component][point]`.
    pub fn layered_grid(&self, layers: usize, per_layer: usize) -> Vec<Vec<Vec<Complex64>>> {
        let curves: Vec<BoundaryCurve> = self
            .boundary_curves()
            .into_iter()
            .map(|curve| match curve {
                BoundaryCurve::Stadium { left, right, .. } => BoundaryCurve::Stadium {
                    left,
                    right,
                    offset: 0.0,
                },
                c => c,
            })
            .collect();
        (1..=layers)
            .map(|j| {
                curves
                    .iter()
                    .enumerate()
                    .map(|(index, base)| {
                        let reach = match self {
                            Domain::UnitDisk => 1.0,
                            Domain::CircleDomain { holes, .. } if holes.is_empty() => {
                                self.clearance(0)
                            }
                            _ => 0.5 * self.clearance(index),
                        };
                        let c = base.offset(reach * j as f64 / (layers + 1) as f64);
                        (0..per_layer)
                            .map(|k| c.point(k as f64 / per_layer as f64))
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Winding number of a closed polygon of nonzero values about the origin,
/// by discrete argument summation.
pub fn winding_number(values: &[Complex64]) -> f64 {
    let n = values.len();
    (0..n)
        .map(|k| (values[(k + 1) % n] / values[k]).arg())
        .sum::<f64>()
        / TAU
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

impl From<CircleSpec> for Circle {
    fn from(c: CircleSpec) -> Self {
        Circle::new(Complex64::new(c.center[0], c.center[1]), c.radius)
    }
}

impl From<Circle> for CircleSpec {
    fn from(c: Circle) -> Self {
        CircleSpec {
            center: [c.center.re, c.center.im],
            radius: c.radius,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainVariant {
    UnitDisk,
    ExteriorUnitDisk,
    CircleDomain,
    RealSlit,
}

/// JSON form of a domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub variant: DomainVariant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<CircleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holes: Option<Vec<CircleSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slits: Option<Vec<[f64; 2]>>,
}

impl DomainSpec {
    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        serde_json::from_str(text).map_err(|e| GeometryError::Malformed(e.to_string()))
    }

    pub fn to_domain(&self) -> Result<Domain, GeometryError> {
        let unexpected = |field: &str| {
            Err(GeometryError::Malformed(format!(
                "field `{field}` is not allowed for variant {:?}",
                self.variant
            )))
        };
        match self.variant {
            DomainVariant::UnitDisk | DomainVariant::ExteriorUnitDisk => {
                if self.outer.is_some() {
                    return unexpected("outer");
                }
                if self.holes.is_some() {
                    return unexpected("holes");
                }
                if self.slits.is_some() {
                    return unexpected("slits");
                }
                Ok(if self.variant == DomainVariant::UnitDisk {
                    Domain::UnitDisk
                } else {
                    Domain::ExteriorUnitDisk
                })
            }
            DomainVariant::CircleDomain => {
                if self.slits.is_some() {
                    return unexpected("slits");
                }
                let outer = self.outer.ok_or_else(|| {
                    GeometryError::Malformed("circle_domain requires `outer`".into())
                })?;
                let holes = self
                    .holes
                    .iter()
                    .flatten()
                    .map(|&h| Circle::from(h))
                    .collect();
                Domain::circle_domain(outer.into(), holes)
            }
            DomainVariant::RealSlit => {
                if self.outer.is_some() {
                    return unexpected("outer");
                }
                if self.holes.is_some() {
                    return unexpected("holes");
                }
                let slits = self
                    .slits
                    .as_ref()
                    .ok_or_else(|| GeometryError::Malformed("real_slit requires `slits`".into()))?;
                Domain::real_slit(slits.iter().map(|s| (s[0], s[1])).collect())
            }
        }
    }
}

impl From<&Domain> for DomainSpec {
    fn from(domain: &Domain) -> Self {
        let empty = DomainSpec {
            variant: DomainVariant::UnitDisk,
            outer: None,
            holes: None,
            slits: None,
        };
        match domain {
            Domain::UnitDisk => empty,
            Domain::ExteriorUnitDisk => DomainSpec {
                variant: DomainVariant::ExteriorUnitDisk,
                ..empty
            },
            Domain::CircleDomain { outer, holes } => DomainSpec {
                variant: DomainVariant::CircleDomain,
                outer: Some((*outer).into()),
                holes: Some(holes.iter().map(|&h| h.into()).collect()),
                ..empty
            },
            Domain::RealSlitComplement(set) => DomainSpec {
                variant: DomainVariant::RealSlit,
                slits: Some(set.intervals.iter().map(|&(a, b)| [a, b]).collect()),
                ..empty
            },
        }
    }
}

impl FromStr for Domain {
    type Err = GeometryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DomainSpec::from_json(s)?.to_domain()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn annulus() -> Domain {
        Domain::circle_domain(
            Circle::new(c(0.0, 0.0), 1.0),
            vec![Circle::new(c(0.0, 0.0), 0.5)],
        )
        .unwrap()
    }

    #[test]
    fn validation_errors() {
        assert!(Domain::UnitDisk.validate().is_ok());
        let err = Domain::circle_domain(
            Circle::new(c(0.0, 0.0), 1.0),
            vec![Circle::new(c(0.5, 0.0), 0.6)],
        )
        .unwrap_err();
        assert_eq!(err, GeometryError::HoleExceedsOuter { index: 0 });
        let err = RealSlitSet::new(vec![(0.0, 1.0), (0.5, 2.0)]).unwrap_err();
        assert!(matches!(err, GeometryError::OverlappingSlits { .. }));
        assert_eq!(
            RealSlitSet::new(vec![]).unwrap_err(),
            GeometryError::EmptySlitSet
        );
        let err = Domain::circle_domain(
            Circle::new(c(0.0, 0.0), 1.0),
            vec![
                Circle::new(c(-0.3, 0.0), 0.2),
                Circle::new(c(0.05, 0.0), 0.2),
            ],
        )
        .unwrap_err();
        assert_eq!(
            err,
            GeometryError::OverlappingHoles {
                first: 0,
                second: 1
            }
        );
        // tangency is not allowed
        let err = Domain::circle_domain(
            Circle::new(c(0.0, 0.0), 1.0),
            vec![Circle::new(c(0.5, 0.0), 0.5)],
        )
        .unwrap_err();
        assert_eq!(err, GeometryError::HoleExceedsOuter { index: 0 });
        assert!(matches!(
            RealSlitSet::new(vec![(1.0, 1.0)]),
            Err(GeometryError::DegenerateSlit { .. })
        ));
    }

    #[test]
    fn membership() {
        assert!(Domain::UnitDisk.contains(c(0.0, 0.0)));
        assert!(!Domain::UnitDisk.contains(c(1.0, 0.0)));
        assert!(Domain::ExteriorUnitDisk.contains_point(&BasePoint::Infinity));
        assert!(!Domain::UnitDisk.contains_point(&BasePoint::Infinity));
        let slit = Domain::real_slit(vec![(-1.0, 1.0)]).unwrap();
        assert!(!slit.contains(c(0.0, 0.0)));
        assert!(slit.contains(c(0.0, 1.0)));
        assert!(!slit.contains(c(1.0, 0.0)));
        let ann = annulus();
        assert!(!ann.contains(c(0.5, 0.0)));
        assert!(ann.contains(c(0.75, 0.0)));
        assert!(!ann.contains(c(0.1, 0.0)));
    }

    #[test]
    fn disk_samples_are_equispaced() {
        let s = Domain::UnitDisk.sample_boundary(8).unwrap();
        let expected = [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)];
        for (k, z) in expected.iter().enumerate() {
            assert_abs_diff_eq!((s[2 * k].point - z).norm(), 0.0, epsilon = 1e-15);
        }
        // four-point case from the contract
        let curve = &Domain::UnitDisk.boundary_curves()[0];
        let four = curve.samples(0, 4);
        for (sample, z) in four.iter().zip(expected.iter()) {
            assert_abs_diff_eq!((sample.point - z).norm(), 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(sample.weight, PI / 2.0, epsilon = 1e-15);
        }
        assert_eq!(
            Domain::UnitDisk.sample_boundary(4),
            Err(GeometryError::TooFewSamples(4))
        );
    }

    /// Signed area enclosed by a sampled polygon.
    fn signed_area(points: &[Complex64]) -> f64 {
        let n = points.len();
        0.5 * (0..n)
            .map(|k| {
                let (a, b) = (points[k], points[(k + 1) % n]);
                a.re * b.im - b.re * a.im
            })
            .sum::<f64>()
    }

    #[test]
    fn hole_orientation_is_clockwise() {
        let s = annulus().sample_boundary(8).unwrap();
        assert_eq!(s.len(), 16);
        let outer: Vec<_> = s
            .iter()
            .filter(|x| x.component == 0)
            .map(|x| x.point)
            .collect();
        let hole: Vec<_> = s
            .iter()
            .filter(|x| x.component == 1)
            .map(|x| x.point)
            .collect();
        assert!(signed_area(&outer) > 0.0);
        assert!(signed_area(&hole) < 0.0);
        for x in &s {
            let radial = x.point.unscale(x.point.norm());
            assert!((radial.conj() * x.unit_tangent).re.abs() < 1e-12);
            assert_abs_diff_eq!(x.unit_tangent.norm(), 1.0, epsilon = 1e-14);
            // domain on the left: inward normal points into the annulus
            let probe = x.point + 1e-3 * I * x.unit_tangent;
            assert!(annulus().contains(probe));
        }
    }

    #[test]
    fn slit_contour_winds_negatively() {
        let d = Domain::real_slit(vec![(-1.0, 1.0)]).unwrap();
        let s = d.sample_boundary(16).unwrap();
        assert_eq!(s.len(), 16);
        let values: Vec<_> = s.iter().map(|x| x.point - 0.3).collect();
        assert_abs_diff_eq!(winding_number(&values), -1.0, epsilon = 1e-12);
        let total: f64 = s.iter().map(|x| x.weight).sum();
        assert_abs_diff_eq!(total, 4.0 + TAU * 2e-3, epsilon = 1e-12);
        for x in &s {
            assert!(d.contains(x.point));
            assert!(d.contains(x.point + 1e-5 * I * x.unit_tangent));
        }
    }

    #[test]
    fn contour_integral_counts_winding() {
        let d = Domain::circle_domain(
            Circle::new(c(0.1, 0.0), 1.2),
            vec![
                Circle::new(c(0.5, 0.2), 0.3),
                Circle::new(c(-0.4, -0.3), 0.25),
            ],
        )
        .unwrap();
        let s = d.sample_boundary(512).unwrap();
        let integral = |q: Complex64| -> Complex64 {
            s.iter()
                .map(|x| x.unit_tangent * x.weight / (x.point - q))
                .sum()
        };
        let two_pi_i = Complex64::new(0.0, TAU);
        assert!((integral(c(-0.5, 0.6)) - two_pi_i).norm() < 1e-6);
        assert!(integral(c(2.0, 1.0)).norm() < 1e-6);
        // inside a hole: outer winds +1, the hole -1
        assert!(integral(c(0.5, 0.2)).norm() < 1e-6);
        for comp in 0..3 {
            let total: f64 = s
                .iter()
                .filter(|x| x.component == comp)
                .map(|x| x.weight)
                .sum();
            let r = [1.2, 0.3, 0.25][comp];
            assert!((total - TAU * r).abs() <= 1e-10 * TAU * r);
        }
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let text = r#"{"variant":"circle_domain","outer":{"center":[0,0],"radius":1},"holes":[{"center":[0,0],"radius":0.4}]}"#;
        let d: Domain = text.parse().unwrap();
        assert_eq!(d.component_count(), 2);
        let back = DomainSpec::from(&d).to_domain().unwrap();
        assert_eq!(back, d);
        assert!(r#"{"variant":"unit_disk","extra":1}"#.parse::<Domain>().is_err());
        assert!(r#"{"variant":"real_slit"}"#.parse::<Domain>().is_err());
        let slit: Domain = r#"{"variant":"real_slit","slits":[[0,1],[2,3]]}"#.parse().unwrap();
        assert_eq!(slit.component_count(), 2);
    }

    #[test]
    fn base_point_parsing() {
        assert_eq!("inf".parse::<BasePoint>().unwrap(), BasePoint::Infinity);
        assert_eq!(
            "0.3,-0.2".parse::<BasePoint>().unwrap(),
            BasePoint::Finite(c(0.3, -0.2))
        );
        assert!("x,1".parse::<BasePoint>().is_err());
    }

    #[test]
    fn refined_mesh_stays_inside() {
        for d in [
            Domain::UnitDisk,
            Domain::ExteriorUnitDisk,
            annulus(),
            Domain::real_slit(vec![(0.0, 1.0), (2.0, 3.0)]).unwrap(),
        ] {
            let mesh = d.refined_mesh(14, 64);
            assert_eq!(mesh.len(), 14 * 64 * d.component_count());
        }
        let mesh = Domain::UnitDisk.refined_mesh(14, 4);
        let min_gap = mesh.iter().map(|z| 1.0 - z.norm()).fold(1.0, f64::min);
        assert_abs_diff_eq!(min_gap, 2f64.powi(-14), epsilon = 1e-15);
    }
}

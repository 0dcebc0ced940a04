//! Finite rational bases spanning truncated Laurent expansions on circle
//! domains.

use std::fmt;

use num_complex::Complex64;

use crate::closed_form::derivative_at_infinity;
use crate::domain::{BasePoint, Circle, Domain};
use crate::error::{Error, Result};
use crate::function::AnalyticFunction;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Truncation orders. `degree` is the polynomial degree about the outer
/// centre for bounded domains and the depth of negative powers for the
/// exterior disk. Holes default to `degree` as well.
///
/// `reflection_depth` adds negative powers centred at the reflection of a
/// finite base point across every boundary circle. The extremal function
/// continues across each circle by reflection and has poles exactly there,
/// so these terms remove the slowest-decaying part of the truncation error.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    pub degree: usize,
    pub hole_depths: Option<Vec<usize>>,
    pub reflection_depth: usize,
    /// Further interior points (typically the other zeros of the extremal
    /// function) whose reflections receive pole terms.
    pub reflected_points: Vec<Complex64>,
}

impl BasisSpec {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            hole_depths: None,
            reflection_depth: 1,
            reflected_points: Vec::new(),
        }
    }

    pub fn with_reflected_points(mut self, points: Vec<Complex64>) -> Self {
        self.reflected_points = points;
        self
    }

    /// Degree used when none is requested: 12 on the disk, 10 outside it and
    /// 16 on circle domains, where the extremal is not rational.
    pub fn default_for(domain: &Domain) -> Self {
        match domain {
            Domain::UnitDisk => Self::new(12),
            Domain::ExteriorUnitDisk => Self::new(10),
            Domain::CircleDomain { holes, .. } if holes.is_empty() => Self::new(12),
            _ => Self::new(16),
        }
    }

    pub fn with_reflection_depth(mut self, depth: usize) -> Self {
        self.reflection_depth = depth;
        self
    }

    pub fn with_hole_depths(mut self, depths: Vec<usize>) -> Self {
        self.hole_depths = Some(depths);
        self
    }
}

/// One basis function. Powers are scaled so each term has modulus one on
/// the circle it is attached to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisTerm {
    Constant,
    /// `((z − c)/s)^k`.
    Power {
        center: Complex64,
        scale: f64,
        k: u32,
    },
    /// `(s/(z − c))^k`.
    InversePower {
        center: Complex64,
        scale: f64,
        k: u32,
    },
}

impl BasisTerm {
    pub fn value(&self, z: Complex64) -> Complex64 {
        match *self {
            BasisTerm::Constant => ONE,
            BasisTerm::Power { center, scale, k } => ((z - center) / scale).powu(k),
            BasisTerm::InversePower { center, scale, k } => (scale / (z - center)).powu(k),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match *self {
            BasisTerm::Constant => ZERO,
            BasisTerm::Power { center, scale, k } => {
                f64::from(k) / scale * ((z - center) / scale).powu(k - 1)
            }
            BasisTerm::InversePower { center, scale, k } => {
                let u = scale / (z - center);
                -f64::from(k) / scale * u.powu(k + 1)
            }
        }
    }
}

impl fmt::Display for BasisTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shifted = |c: Complex64| {
            if c == ZERO {
                "z".to_string()
            } else {
                format!("(z - ({}{:+}i))", c.re, c.im)
            }
        };
        match *self {
            BasisTerm::Constant => f.write_str("1"),
            BasisTerm::Power { center, scale, k } if scale == 1.0 => {
                write!(f, "{}^{k}", shifted(center))
            }
            BasisTerm::Power { center, scale, k } => write!(f, "({}/{scale})^{k}", shifted(center)),
            BasisTerm::InversePower { center, scale, k } if scale == 1.0 => {
                write!(f, "{}^-{k}", shifted(center))
            }
            BasisTerm::InversePower { center, scale, k } => {
                write!(f, "({scale}/{})^{k}", shifted(center))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub domain: Domain,
    pub base_point: BasePoint,
    pub terms: Vec<BasisTerm>,
}

impl Basis {
    pub fn dimension(&self) -> usize {
        self.terms.len()
    }

    pub fn values(&self, z: Complex64) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.value(z)).collect()
    }

    pub fn derivatives(&self, z: Complex64) -> Vec<Complex64> {
        self.terms.iter().map(|t| t.derivative(z)).collect()
    }

    pub fn combine(&self, coefficients: &[Complex64], z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .zip(coefficients)
            .map(|(t, c)| c * t.value(z))
            .sum()
    }

    pub fn combine_derivative(&self, coefficients: &[Complex64], z: Complex64) -> Complex64 {
        self.terms
            .iter()
            .zip(coefficients)
            .map(|(t, c)| c * t.derivative(z))
            .sum()
    }

    /// `h ↦ h'(p)` as the vector of its values on the basis. At `∞` the
    /// derivative is the `1/z` coefficient, read off by a contour integral.
    pub fn derivative_functional(&self) -> Result<Vec<Complex64>> {
        match self.base_point {
            BasePoint::Finite(p) => Ok(self.derivatives(p)),
            BasePoint::Infinity => self
                .terms
                .iter()
                .map(|t| {
                    let (center, radius) = match *t {
                        BasisTerm::InversePower { center, scale, .. } => (center, 2.0 * scale),
                        _ => (ZERO, 2.0),
                    };
                    derivative_at_infinity(&TermFunction(*t), center, radius)
                })
                .collect(),
        }
    }
}

struct TermFunction(BasisTerm);

impl AnalyticFunction for TermFunction {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.0.value(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        self.0.derivative(z)
    }
    fn value_at_infinity(&self) -> Option<Complex64> {
        match self.0 {
            BasisTerm::Constant => Some(ONE),
            BasisTerm::InversePower { .. } => Some(ZERO),
            BasisTerm::Power { .. } => None,
        }
    }
}

/// Reflection of `p` across `circle`, when it lies at a moderate distance.
fn reflection(circle: &Circle, p: Complex64) -> Option<(Complex64, f64)> {
    let d = p - circle.center;
    if d.norm() < 0.1 * circle.radius {
        // the reflected pole is far away and already well resolved by powers
        return None;
    }
    let q = circle.center + circle.radius * circle.radius / d.conj();
    let distance = ((q - circle.center).norm() - circle.radius).abs();
    Some((q, distance))
}

fn reflection_terms(circles: &[Circle], p: BasePoint, depth: usize) -> Vec<BasisTerm> {
    let BasePoint::Finite(p) = p else {
        return Vec::new();
    };
    circles
        .iter()
        .filter_map(|c| reflection(c, p))
        .flat_map(|(q, distance)| {
            (1..=depth as u32).map(move |k| BasisTerm::InversePower {
                center: q,
                scale: distance,
                k,
            })
        })
        .collect()
}

/// Basis for `domain` with base point `p`.
///
/// Bounded domains get powers of `(z − z₀)/R` up to `degree` plus negative
/// powers `(r_j/(z − c_j))^k` for every hole. The exterior disk gets
/// negative powers of `z`, with the constant dropped when `p = ∞` so that
/// `h(∞) = 0`.
pub fn build_basis(domain: &Domain, p: BasePoint, spec: &BasisSpec) -> Result<Basis> {
    let unit = Circle::new(ZERO, 1.0);
    let mut terms: Vec<BasisTerm> = match domain {
        Domain::UnitDisk => std::iter::once(BasisTerm::Constant)
            .chain((1..=spec.degree as u32).map(|k| BasisTerm::Power {
                center: ZERO,
                scale: 1.0,
                k,
            }))
            .collect(),
        Domain::CircleDomain { outer, holes } => {
            let depths = match &spec.hole_depths {
                Some(d) if d.len() == holes.len() => d.clone(),
                Some(d) => {
                    return Err(Error::InvalidParameter(format!(
                        "{} hole depths given for {} holes",
                        d.len(),
                        holes.len()
                    )))
                }
                None => vec![spec.degree; holes.len()],
            };
            let mut terms = vec![BasisTerm::Constant];
            terms.extend((1..=spec.degree as u32).map(|k| BasisTerm::Power {
                center: outer.center,
                scale: outer.radius,
                k,
            }));
            for (hole, &depth) in holes.iter().zip(&depths) {
                terms.extend((1..=depth as u32).map(|k| BasisTerm::InversePower {
                    center: hole.center,
                    scale: hole.radius,
                    k,
                }));
            }
            terms
        }
        Domain::ExteriorUnitDisk => {
            let constant = match p {
                BasePoint::Infinity => None,
                BasePoint::Finite(_) => Some(BasisTerm::Constant),
            };
            constant
                .into_iter()
                .chain((1..=spec.degree as u32).map(|k| BasisTerm::InversePower {
                    center: ZERO,
                    scale: 1.0,
                    k,
                }))
                .collect()
        }
        Domain::RealSlitComplement(_) => {
            return Err(Error::Unsupported(
                "slit complements have a closed-form Ahlfors function; the extremal solver handles circle domains only"
                    .into(),
            ))
        }
    };
    let circles: Vec<Circle> = match domain {
        Domain::CircleDomain { outer, holes } => std::iter::once(*outer)
            .chain(holes.iter().copied())
            .collect(),
        _ => vec![unit],
    };
    // reflection poles refine a truncation; a bare constant stays degenerate
    if spec.degree > 0 {
        terms.extend(reflection_terms(&circles, p, spec.reflection_depth));
        for &a in &spec.reflected_points {
            terms.extend(reflection_terms(
                &circles,
                BasePoint::Finite(a),
                spec.reflection_depth,
            ));
        }
    }
    Ok(Basis {
        domain: domain.clone(),
        base_point: p,
        terms,
    })
}

//! Möbius maps of the disk, a witness-selected square-root branch and the
//! square-root expansion of a bounded function that omits a value.

use std::ops::Mul;

use num_complex::Complex64;

use crate::domain::{winding_number, Domain};
use crate::error::{Error, Result};
use crate::function::AnalyticFunction;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MoebiusKind {
    /// `(z - p) / (1 - p̄ z)`.
    DiskAutomorphism {
        p: Complex64,
    },
    /// `(a - z) / (1 - ā z)`, swaps `0` and `a`.
    Interchange {
        a: Complex64,
    },
    Rotation {
        theta: f64,
    },
    General,
}

/// `z ↦ (αz + β) / (γz + δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusTransform {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
    pub kind: MoebiusKind,
}

fn check_in_disk(w: Complex64, what: &str) -> Result<()> {
    if w.re.is_finite() && w.im.is_finite() && w.norm() < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{what} must lie in the open unit disk, got {w}"
        )))
    }
}

impl MoebiusTransform {
    pub fn from_coefficients(
        alpha: Complex64,
        beta: Complex64,
        gamma: Complex64,
        delta: Complex64,
    ) -> Result<Self> {
        let t = Self {
            alpha,
            beta,
            gamma,
            delta,
            kind: MoebiusKind::General,
        };
        if t.determinant().norm() == 0.0 {
            return Err(Error::InvalidParameter(
                "degenerate Möbius map (αδ − βγ = 0)".into(),
            ));
        }
        Ok(t)
    }

    pub fn identity() -> Self {
        Self::rotation(0.0)
    }

    /// Disk automorphism sending `p` to `0`.
    pub fn disk_automorphism(p: Complex64) -> Result<Self> {
        check_in_disk(p, "p")?;
        Ok(Self {
            alpha: ONE,
            beta: -p,
            gamma: -p.conj(),
            delta: ONE,
            kind: MoebiusKind::DiskAutomorphism { p },
        })
    }

    /// The involutive automorphism exchanging `0` and `a`.
    pub fn interchange(a: Complex64) -> Result<Self> {
        check_in_disk(a, "a")?;
        Ok(Self {
            alpha: -ONE,
            beta: a,
            gamma: -a.conj(),
            delta: ONE,
            kind: MoebiusKind::Interchange { a },
        })
    }

    pub fn rotation(theta: f64) -> Self {
        Self {
            alpha: Complex64::from_polar(1.0, theta),
            beta: ZERO,
            gamma: ZERO,
            delta: ONE,
            kind: MoebiusKind::Rotation { theta },
        }
    }

    /// `z ↦ 1/z`.
    pub fn inversion() -> Self {
        Self {
            alpha: ZERO,
            beta: ONE,
            gamma: ONE,
            delta: ZERO,
            kind: MoebiusKind::General,
        }
    }

    pub fn determinant(&self) -> Complex64 {
        self.alpha * self.delta - self.beta * self.gamma
    }

    pub fn coefficients(&self) -> [Complex64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }

    /// `self ∘ inner`, by matrix multiplication.
    pub fn compose(&self, inner: &MoebiusTransform) -> MoebiusTransform {
        MoebiusTransform {
            alpha: self.alpha * inner.alpha + self.beta * inner.gamma,
            beta: self.alpha * inner.beta + self.beta * inner.delta,
            gamma: self.gamma * inner.alpha + self.delta * inner.gamma,
            delta: self.gamma * inner.beta + self.delta * inner.delta,
            kind: MoebiusKind::General,
        }
    }

    pub fn inverse(&self) -> MoebiusTransform {
        MoebiusTransform {
            alpha: self.delta,
            beta: -self.beta,
            gamma: -self.gamma,
            delta: self.alpha,
            kind: MoebiusKind::General,
        }
    }

    /// Coefficients scaled to unit determinant, with the sign chosen so the
    /// first coefficient of largest modulus has positive real part.
    pub fn normalized(&self) -> MoebiusTransform {
        let k = ONE / self.determinant().sqrt();
        let mut t = *self * k;
        let lead = t.coefficients().into_iter().fold(ZERO, |best, c| {
            if c.norm() > best.norm() + 1e-12 {
                c
            } else {
                best
            }
        });
        if lead.re < 0.0 || (lead.re == 0.0 && lead.im < 0.0) {
            t = t * -ONE;
        }
        t.kind = self.kind;
        t
    }

    /// Maximum coefficient deviation after normalisation.
    pub fn coefficient_distance(&self, other: &MoebiusTransform) -> f64 {
        let (a, b) = (self.normalized(), other.normalized());
        a.coefficients()
            .iter()
            .zip(b.coefficients().iter())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        (self.alpha * z + self.beta) / (self.gamma * z + self.delta)
    }

    pub fn derivative_at(&self, z: Complex64) -> Complex64 {
        let den = self.gamma * z + self.delta;
        self.determinant() / (den * den)
    }

    /// `α/γ`, or `None` when `∞` is fixed.
    pub fn at_infinity(&self) -> Option<Complex64> {
        (self.gamma.norm() != 0.0).then(|| self.alpha / self.gamma)
    }
}

impl Mul<Complex64> for MoebiusTransform {
    type Output = MoebiusTransform;

    fn mul(self, k: Complex64) -> MoebiusTransform {
        MoebiusTransform {
            alpha: self.alpha * k,
            beta: self.beta * k,
            gamma: self.gamma * k,
            delta: self.delta * k,
            kind: self.kind,
        }
    }
}

impl AnalyticFunction for MoebiusTransform {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.apply(z)
    }
    fn derivative(&self, z: Complex64) -> Complex64 {
        self.derivative_at(z)
    }
    fn value_at_infinity(&self) -> Option<Complex64> {
        self.at_infinity()
    }
}

/// Square root on the sheet whose value at `witness` has nonnegative real
/// part. The branch cut is the ray from `0` through `-witness`.
pub fn sqrt_branch(w: Complex64, witness: Complex64) -> Result<Complex64> {
    if w.norm() == 0.0 {
        return Err(Error::BranchPoint);
    }
    if witness.norm() == 0.0 {
        return Err(Error::InvalidParameter(
            "branch witness must be nonzero".into(),
        ));
    }
    let half = Complex64::from_polar(1.0, 0.5 * witness.arg());
    Ok(half * (w * half.conj() * half.conj()).sqrt())
}

/// Default size of the omitted-value grid (64 layers of 64 points).
pub const KOEBE_GRID_LAYERS: usize = 64;
pub const KOEBE_GRID_POINTS: usize = 64;

/// `H = h_{g(a)} ∘ g ∘ h_a ∘ f` with `g` the square root, for `f` vanishing
/// at `p` and omitting `a`. `|H'(p)| > |f'(p)|`.
#[derive(Debug, Clone)]
pub struct KoebeExpansion<F> {
    inner: F,
    swap_a: MoebiusTransform,
    swap_root: MoebiusTransform,
    witness: Complex64,
    base_point: Complex64,
}

impl<F: AnalyticFunction> KoebeExpansion<F> {
    pub fn base_point(&self) -> Complex64 {
        self.base_point
    }

    pub fn inner(&self) -> &F {
        &self.inner
    }

    fn root(&self, u: Complex64) -> Complex64 {
        // the witness is nonzero and u = 0 is excluded by construction
        sqrt_branch(u, self.witness).unwrap_or(ZERO)
    }
}

impl<F: AnalyticFunction> AnalyticFunction for KoebeExpansion<F> {
    fn eval(&self, z: Complex64) -> Complex64 {
        let u = self.swap_a.apply(self.inner.eval(z));
        self.swap_root.apply(self.root(u))
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        let fz = self.inner.eval(z);
        let u = self.swap_a.apply(fz);
        let g = self.root(u);
        self.swap_root.derivative_at(g)
            * (0.5 / g)
            * self.swap_a.derivative_at(fz)
            * self.inner.derivative(z)
    }
}

/// Builds the square-root expansion of `f` about an omitted value `a`.
///
/// The omitted-value condition is checked on a layered grid of `domain`
/// (4096 points): `|f| ≤ 1`, no grid value equals `a`, `f - a` has zero
/// winding on every layer, and the square root does not jump across its cut.
pub fn koebe_expand<F: AnalyticFunction>(
    f: F,
    a: Complex64,
    p: Complex64,
    domain: &Domain,
) -> Result<KoebeExpansion<F>> {
    check_in_disk(a, "omitted value a")?;
    if !domain.contains(p) {
        return Err(Error::PreconditionViolation(format!(
            "base point {p} not in the domain"
        )));
    }
    if f.eval(p).norm() > 1e-9 {
        return Err(Error::PreconditionViolation(format!(
            "f(p) = {} is not zero",
            f.eval(p)
        )));
    }
    let swap_a = MoebiusTransform::interchange(a)?;
    let witness = a;
    let layers = domain.layered_grid(KOEBE_GRID_LAYERS, KOEBE_GRID_POINTS);
    for layer in &layers {
        let mut winding = 0.0;
        for ring in layer {
            let values: Vec<Complex64> = ring.iter().map(|&z| f.eval(z)).collect();
            if let Some(v) = values.iter().find(|v| v.norm() > 1.0 + 1e-9) {
                return Err(Error::PreconditionViolation(format!(
                    "|f| = {} exceeds 1 on the sample grid",
                    v.norm()
                )));
            }
            let shifted: Vec<Complex64> = values.iter().map(|v| v - a).collect();
            if shifted.iter().any(|v| v.norm() < 1e-12) {
                return Err(Error::PreconditionViolation(format!(
                    "f attains a = {a} on the sample grid"
                )));
            }
            winding += winding_number(&shifted);
            let roots: Vec<Complex64> = values
                .iter()
                .map(|&v| sqrt_branch(swap_a.apply(v), witness))
                .collect::<Result<_>>()?;
            let n = roots.len();
            if (0..n).any(|k| (roots[(k + 1) % n] - roots[k]).norm() > 0.5) {
                return Err(Error::PreconditionViolation(
                    "image of h_a ∘ f crosses the square-root cut".into(),
                ));
            }
        }
        if winding.round() != 0.0 {
            return Err(Error::PreconditionViolation(format!(
                "f - a winds {} times on the sample grid, so f attains a = {a}",
                winding.round()
            )));
        }
    }
    let root_a = sqrt_branch(a, witness)?;
    let swap_root = MoebiusTransform::interchange(root_a)?;
    Ok(KoebeExpansion {
        inner: f,
        swap_a,
        swap_root,
        witness,
        base_point: p,
    })
}

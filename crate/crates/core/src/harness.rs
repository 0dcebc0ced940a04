//! Executable checks of the structural properties of Ahlfors functions.
//!
//! Every check returns a [`CheckReport`]; failures are data, not errors.
//! Sup-norms over a domain are estimated on boundary-refined samples
//! (offsets `clearance · 2^{-k}`, `k ≤ 14`), which the maximum modulus
//! principle makes sufficient. [`run_suite`] strings the checks together
//! for one domain and base point in a fixed order.

use std::f64::consts::{PI, TAU};
use std::fmt;

use num_complex::Complex64;
use serde::ser::SerializeTuple;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::closed_form::{
    ahlfors_disk, derivative_at_infinity, infinity_contour, AhlforsClosedForm,
};
use crate::domain::{BasePoint, BoundaryCurve, Domain};
use crate::error::{Error, Result};
use crate::function::{AnalyticFunction, Composed, FnAnalytic, Monomial, SharedFunction};
use crate::moebius::{koebe_expand, MoebiusTransform};
use crate::solver::{solve_extremal, valence, AhlforsSolution, BasisSpec, SolverConfig};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Refinement depth of the sup-norm meshes.
pub const MESH_LEVELS: u32 = 14;
/// Points per parallel curve of the sup-norm meshes.
pub const MESH_POINTS: usize = 512;
pub const NORM_GAP_TOLERANCE: f64 = 2e-2;
pub const SEPARATION_THRESHOLD: f64 = 0.99;
pub const MODULUS_TOLERANCE: f64 = 2e-3;
pub const VANISHING_TOLERANCE: f64 = 1e-4;
pub const RIEMANN_TOLERANCE: f64 = 1e-3;
pub const CAPACITY_TOLERANCE: f64 = 1e-6;
/// Probe values for the valence count.
pub const VALENCE_PROBES: [Complex64; 3] = [
    Complex64::new(0.0, 0.0),
    Complex64::new(0.1, 0.0),
    Complex64::new(-0.3, 0.4),
];
pub const VALENCE_SAMPLES: usize = 2048;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_name: String,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    #[serde(with = "witness_pair")]
    pub witness: Option<Complex64>,
}

impl CheckReport {
    fn at_most(
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
        witness: Option<Complex64>,
    ) -> Self {
        Self {
            check_name: name.into(),
            passed: measured <= threshold,
            measured,
            threshold,
            witness,
        }
    }

    fn at_least(
        name: impl Into<String>,
        measured: f64,
        threshold: f64,
        witness: Option<Complex64>,
    ) -> Self {
        Self {
            check_name: name.into(),
            passed: measured >= threshold,
            measured,
            threshold,
            witness,
        }
    }

    fn failure(name: impl Into<String>, threshold: f64) -> Self {
        Self {
            check_name: name.into(),
            passed: false,
            measured: f64::NAN,
            threshold,
            witness: None,
        }
    }

    /// One JSON object, witness as `[re, im]` (or `null`).
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialise")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} measured={:e} threshold={:e}",
            self.check_name, self.measured, self.threshold
        )?;
        if let Some(w) = self.witness {
            write!(f, " witness=({}, {})", w.re, w.im)?;
        }
        Ok(())
    }
}

mod witness_pair {
    use super::*;

    pub fn serialize<S: Serializer>(
        w: &Option<Complex64>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match w {
            None => s.serialize_none(),
            Some(z) => {
                let mut t = s.serialize_tuple(2)?;
                t.serialize_element(&z.re)?;
                t.serialize_element(&z.im)?;
                t.end()
            }
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<Complex64>, D::Error> {
        let pair: Option<[f64; 2]> = Option::deserialize(d)?;
        Ok(pair.map(|[re, im]| Complex64::new(re, im)))
    }
}

/// Renders reports as JSON lines, each terminated by a newline.
pub fn reports_to_json_lines(reports: &[CheckReport]) -> String {
    reports.iter().map(|r| r.to_json_line() + "\n").collect()
}

// ---------------------------------------------------------------------------
// test functions

/// `f_s(z) = exp((z + s)/(z − s))`, bounded by one on the disk with radial
/// limit zero at `s`.
pub fn separation_family(s: Complex64) -> Result<SharedFunction> {
    if !((s.norm() - 1.0).abs() <= 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "|s| = {} is not 1",
            s.norm()
        )));
    }
    let f = FnAnalytic::new(
        move |z: Complex64| ((z + s) / (z - s)).exp(),
        move |z: Complex64| ((z + s) / (z - s)).exp() * (-2.0 * s) / ((z - s) * (z - s)),
    );
    Ok(std::sync::Arc::new(f))
}

/// A bounded analytic function on the unit disk with its sup-norm.
#[derive(Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub function: SharedFunction,
    pub norm: f64,
}

impl fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("norm", &self.norm)
            .finish()
    }
}

/// The fixed test catalog: `z^1 … z^8`, three Möbius composites and the
/// separation functions `f_1`, `f_{−1}`. All have sup-norm one on the disk.
pub fn catalog() -> Vec<CatalogEntry> {
    let entry = |name: String, function: SharedFunction| CatalogEntry {
        name,
        function,
        norm: 1.0,
    };
    let mut out: Vec<CatalogEntry> = (1..=8)
        .map(|k| entry(format!("z^{k}"), std::sync::Arc::new(Monomial::new(k))))
        .collect();
    let auto = |p: Complex64| MoebiusTransform::disk_automorphism(p).expect("interior point");
    out.push(entry(
        "moebius(0.5)".into(),
        std::sync::Arc::new(auto(Complex64::new(0.5, 0.0))),
    ));
    out.push(entry(
        "moebius(0.3i)∘moebius(-0.6)".into(),
        std::sync::Arc::new(
            auto(Complex64::new(0.0, 0.3)).compose(&auto(Complex64::new(-0.6, 0.0))),
        ),
    ));
    out.push(entry(
        "moebius(0.2-0.4i)∘z^2".into(),
        std::sync::Arc::new(Composed {
            outer: auto(Complex64::new(0.2, -0.4)),
            inner: Monomial::new(2),
        }),
    ));
    for s in [1.0, -1.0] {
        let s = Complex64::new(s, 0.0);
        out.push(entry(
            format!("f_{}", s.re),
            separation_family(s).expect("unimodular"),
        ));
    }
    out
}

/// A map of the closed domain into the closed unit disk used to transplant
/// the catalog: `(z − z₀)/R` for bounded domains, `1/z` outside the unit
/// circle, and the Ahlfors function itself on slit complements.
pub fn disk_chart(domain: &Domain) -> Result<SharedFunction> {
    match domain {
        Domain::UnitDisk => Ok(std::sync::Arc::new(MoebiusTransform::identity())),
        Domain::CircleDomain { outer, .. } => {
            let t = MoebiusTransform::from_coefficients(
                Complex64::new(1.0, 0.0),
                -outer.center,
                ZERO,
                Complex64::new(outer.radius, 0.0),
            )?;
            Ok(std::sync::Arc::new(t))
        }
        Domain::ExteriorUnitDisk => Ok(std::sync::Arc::new(MoebiusTransform::inversion())),
        Domain::RealSlitComplement(_) => Ok(std::sync::Arc::new(AhlforsClosedForm::for_domain(
            domain,
            &BasePoint::Infinity,
        )?)),
    }
}

// ---------------------------------------------------------------------------
// sampling

/// Boundary-refined interior mesh for sup-norm estimates.
pub fn sup_mesh(domain: &Domain) -> Vec<Complex64> {
    domain.refined_mesh(MESH_LEVELS, MESH_POINTS)
}

fn sup_on<F: Fn(Complex64) -> f64>(points: &[Complex64], f: F) -> (f64, Option<Complex64>) {
    let mut best = (f64::NEG_INFINITY, None);
    for &z in points {
        let v = f(z);
        if v > best.0 {
            best = (v, Some(z));
        }
    }
    best
}

/// Boundary components as curves through the slits themselves (offset 0)
/// for slit complements, unchanged otherwise.
fn base_curves(domain: &Domain) -> Vec<BoundaryCurve> {
    domain
        .boundary_curves()
        .into_iter()
        .map(|c| match c {
            BoundaryCurve::Stadium { left, right, .. } => BoundaryCurve::Stadium {
                left,
                right,
                offset: 0.0,
            },
            c => c,
        })
        .collect()
}

/// Relative offset of the curve on which boundary values are read: exactly
/// on circles, just off the slits (which carry two boundary values).
fn trace_offset(domain: &Domain, index: usize) -> f64 {
    match domain {
        Domain::RealSlitComplement(_) => 1e-7 * domain.clearance(index),
        _ => 0.0,
    }
}

const PREIMAGE_SCAN: usize = 4096;
const PREIMAGE_LEVELS: i32 = 30;

/// Parameters on each component where the boundary values of `f` pass
/// through the unimodular `target`, located by sign changes of
/// `arg(f · target̄)` and bisection.
fn boundary_preimages<F: AnalyticFunction + ?Sized>(
    f: &F,
    domain: &Domain,
    target: Complex64,
) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for (index, base) in base_curves(domain).iter().enumerate() {
        let curve = base.offset(trace_offset(domain, index).max(1e-12 * domain.clearance(index)));
        let phase = |t: f64| (f.eval(curve.point(t)) * target.conj()).arg();
        let mut prev = phase(0.0);
        for j in 1..=PREIMAGE_SCAN {
            let t1 = j as f64 / PREIMAGE_SCAN as f64;
            let next = phase(t1);
            let crosses =
                prev.abs() < PI / 2.0 && next.abs() < PI / 2.0 && (prev <= 0.0) != (next <= 0.0);
            if crosses {
                let (mut lo, mut hi) = ((j - 1) as f64 / PREIMAGE_SCAN as f64, t1);
                let lo_sign = prev <= 0.0;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if (phase(mid) <= 0.0) == lo_sign {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push((index, 0.5 * (lo + hi)));
            }
            prev = next;
        }
    }
    out
}

/// Points moving into the domain from the boundary point at parameter `t`
/// of component `index`, at offsets `clearance · 2^{-k}`.
fn inward_probes(domain: &Domain, index: usize, t: f64) -> Vec<Complex64> {
    let base = base_curves(domain)[index];
    let clearance = domain.clearance(index);
    (1..=PREIMAGE_LEVELS)
        .map(|k| base.offset(clearance * 0.5f64.powi(k)).point(t))
        .filter(|z| domain.contains(*z))
        .collect()
}

// ---------------------------------------------------------------------------
// checks

/// `‖F·h‖ = ‖h‖`: relative gap of the sampled sup-norms.
pub fn check_norm_preservation<F, H>(f: &F, h: &H, domain: &Domain, name: &str) -> CheckReport
where
    F: AnalyticFunction + ?Sized,
    H: AnalyticFunction + ?Sized,
{
    let mesh = sup_mesh(domain);
    let (h_norm, _) = sup_on(&mesh, |z| h.eval(z).norm());
    let (fh_norm, witness) = sup_on(&mesh, |z| (f.eval(z) * h.eval(z)).norm());
    let gap = if h_norm > 0.0 {
        (h_norm - fh_norm).abs() / h_norm
    } else {
        fh_norm
    };
    CheckReport::at_most(
        format!("norm_preservation[{name}]"),
        gap,
        NORM_GAP_TOLERANCE,
        witness,
    )
}

/// `‖f ∘ F‖ = ‖f‖` for `f` bounded on the disk with known norm: the sampled
/// sup must lie in `[‖f‖ − 2e−2, ‖f‖ + 1e−9]`. Reports the shortfall
/// `‖f‖ − sup`.
pub fn check_composition_norm<F, G>(
    f_outer: &G,
    norm: f64,
    big_f: &F,
    domain: &Domain,
    name: &str,
) -> CheckReport
where
    F: AnalyticFunction + ?Sized,
    G: AnalyticFunction + ?Sized,
{
    let mesh = sup_mesh(domain);
    let (sup, witness) = sup_on(&mesh, |z| f_outer.eval(big_f.eval(z)).norm());
    let shortfall = norm - sup;
    CheckReport {
        check_name: format!("composition_norm[{name}]"),
        passed: shortfall <= NORM_GAP_TOLERANCE && sup <= norm + 1e-9,
        measured: shortfall,
        threshold: NORM_GAP_TOLERANCE,
        witness,
    }
}

/// The `n` equispaced unimodular points `e^{2πik/n}`.
pub fn equispaced_unimodular(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64))
        .collect()
}

/// `‖f_{s₁}∘F − f_{s₂}∘F‖ ≥ 1` for all pairs. The sup is sought near the
/// boundary preimages of each `s`, where `f_s ∘ F` tends to zero while the
/// partner stays near modulus one. Reports the smallest pairwise sup, which
/// must also respect the trivial bound 2.
pub fn check_nonseparability<F: AnalyticFunction + ?Sized>(
    f: &F,
    s_values: &[Complex64],
    domain: &Domain,
) -> CheckReport {
    let name = "nonseparability";
    let family: Vec<SharedFunction> = match s_values.iter().map(|&s| separation_family(s)).collect()
    {
        Ok(v) => v,
        Err(_) => return CheckReport::failure(name, SEPARATION_THRESHOLD),
    };
    let probes: Vec<Vec<(Complex64, Complex64)>> = s_values
        .iter()
        .map(|&s| {
            boundary_preimages(f, domain, s)
                .into_iter()
                .flat_map(|(index, t)| inward_probes(domain, index, t))
                .map(|z| (z, f.eval(z)))
                .collect()
        })
        .collect();
    let mut worst: Option<(f64, Option<Complex64>)> = None;
    for i in 0..s_values.len() {
        for j in i + 1..s_values.len() {
            let points: Vec<&(Complex64, Complex64)> = probes[i].iter().chain(&probes[j]).collect();
            let mut best = (0.0, None);
            for &&(z, w) in &points {
                let d = (family[i].eval(w) - family[j].eval(w)).norm();
                if d.is_finite() && d > best.0 {
                    best = (d, Some(z));
                }
            }
            if worst.is_none_or(|(v, _)| best.0 < v) {
                worst = Some(best);
            }
        }
    }
    match worst {
        // no pairs: nothing to separate
        None => CheckReport::at_least(name, f64::INFINITY, SEPARATION_THRESHOLD, None),
        Some((value, witness)) => CheckReport {
            check_name: name.into(),
            passed: (SEPARATION_THRESHOLD..=2.0).contains(&value),
            measured: value,
            threshold: SEPARATION_THRESHOLD,
            witness,
        },
    }
}

/// Distance from `w` to the segment `{r e^{it} : r ∈ [r0, 1]}`.
fn distance_to_ray(w: Complex64, t: f64, r0: f64) -> f64 {
    let dir = Complex64::from_polar(1.0, t);
    let r = (w * dir.conj()).re.clamp(r0, 1.0);
    (w - r * dir).norm()
}

/// `F(Ω)` meets the ray segment `{r e^{it} : r ∈ [r0, 1)}`: from a boundary
/// preimage of `e^{it}` move inward until `|F| = (1 + r0)/2`, then polish
/// `F(q) = ((1 + r0)/2) e^{it}` by Newton's method. Falls back to scanning
/// the refined mesh. The witness is `q`; passes within distance `1e−3`.
pub fn check_almost_surjectivity<F: AnalyticFunction + ?Sized>(
    f: &F,
    domain: &Domain,
    t: f64,
    r0: f64,
) -> CheckReport {
    let name = format!("almost_surjectivity[t={t},r0={r0}]");
    const TOLERANCE: f64 = 1e-3;
    if !(r0 > 0.0 && r0 < 1.0) {
        return CheckReport::failure(name, TOLERANCE);
    }
    let radius = 0.5 * (1.0 + r0);
    let target = Complex64::from_polar(radius, t);
    let mut best: (f64, Option<Complex64>) = (f64::INFINITY, None);
    let consider = |best: &mut (f64, Option<Complex64>), z: Complex64| {
        let d = distance_to_ray(f.eval(z), t, r0);
        if d < best.0 {
            *best = (d, Some(z));
        }
    };
    for (index, param) in boundary_preimages(f, domain, Complex64::from_polar(1.0, t)) {
        let base = base_curves(domain)[index];
        let clearance = domain.clearance(index);
        let at = |delta: f64| base.offset(delta).point(param);
        // |F| decreases moving inward; bracket the target modulus
        let (mut lo, mut hi) = (clearance * 0.5f64.powi(PREIMAGE_LEVELS), 0.5 * clearance);
        if f.eval(at(hi)).norm() > radius {
            consider(&mut best, at(hi));
            continue;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if f.eval(at(mid)).norm() > radius {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut q = at(0.5 * (lo + hi));
        for _ in 0..20 {
            let d = f.derivative(q);
            if d.norm() < 1e-12 {
                break;
            }
            let next = q - (f.eval(q) - target) / d;
            if !domain.contains(next) {
                break;
            }
            q = next;
        }
        consider(&mut best, q);
        if best.0 <= 1e-12 {
            break;
        }
    }
    if best.0 > TOLERANCE {
        for z in sup_mesh(domain) {
            consider(&mut best, z);
        }
    }
    CheckReport::at_most(name, best.0, TOLERANCE, best.1)
}

/// Number of radii and of angles in the Schwarz grid (10,000 points).
const SCHWARZ_GRID: usize = 100;

/// Schwarz lemma for `f` on the unit disk with `f(0) = 0`: `|f(z)| ≤ |z|`
/// on a polar grid and `|f'(0)| ≤ 1`, both up to `1e−9`. Reports the larger
/// excess. Errors when the preconditions fail on the grid.
pub fn check_schwarz<F: AnalyticFunction + ?Sized>(f: &F) -> Result<CheckReport> {
    const SLACK: f64 = 1e-9;
    let f0 = f.eval(ZERO);
    if f0.norm() > SLACK {
        return Err(Error::PreconditionViolation(format!(
            "f(0) = {f0} is not zero"
        )));
    }
    let mut excess = (f.derivative(ZERO).norm() - 1.0, Some(ZERO));
    for i in 1..=SCHWARZ_GRID {
        let r = i as f64 / (SCHWARZ_GRID as f64 + 1.0);
        for j in 0..SCHWARZ_GRID {
            let z = Complex64::from_polar(r, TAU * j as f64 / SCHWARZ_GRID as f64);
            let v = f.eval(z).norm();
            if v > 1.0 + SLACK {
                return Err(Error::PreconditionViolation(format!(
                    "|f({z})| = {v} exceeds 1"
                )));
            }
            if v - r > excess.0 {
                excess = (v - r, Some(z));
            }
        }
    }
    Ok(CheckReport::at_most(
        "schwarz_lemma",
        excess.0,
        SLACK,
        excess.1,
    ))
}

/// Strict gain `|H'(q)|/|f'(q)| − 1 > 0` of the square-root expansion.
pub fn check_koebe_expansion<F>(
    f: F,
    a: Complex64,
    q: Complex64,
    domain: &Domain,
    name: &str,
) -> CheckReport
where
    F: AnalyticFunction,
{
    let check_name = format!("koebe_expansion[{name}]");
    let before = f.derivative(q).norm();
    match koebe_expand(f, a, q, domain) {
        Ok(h) => {
            let gain = h.derivative(q).norm() / before - 1.0;
            CheckReport {
                check_name,
                passed: gain > 0.0,
                measured: gain,
                threshold: 0.0,
                witness: Some(q),
            }
        }
        Err(_) => CheckReport::failure(check_name, 0.0),
    }
}

/// Koebe cases built from `F`: `f = σ · m_{F(q)} ∘ F` vanishes at `q`, omits
/// every value of modulus above `σ`, and is expanded about
/// `a = ((1 + σ)/2) e^{iθ}`.
pub fn koebe_cases(
    big_f: SharedFunction,
    q: Complex64,
) -> Vec<(String, SharedFunction, Complex64)> {
    let Ok(m) = MoebiusTransform::disk_automorphism(big_f.eval(q)) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for sigma in [0.5, 0.9] {
        for k in 0..3 {
            let theta = TAU * k as f64 / 3.0;
            let a = Complex64::from_polar(0.5 * (1.0 + sigma), theta);
            let inner = big_f.clone();
            let f = FnAnalytic::new(
                {
                    let inner = inner.clone();
                    move |z: Complex64| sigma * m.apply(inner.eval(z))
                },
                move |z: Complex64| sigma * m.derivative_at(inner.eval(z)) * inner.derivative(z),
            );
            out.push((
                format!("sigma={sigma},theta={k}/3"),
                std::sync::Arc::new(f) as SharedFunction,
                a,
            ));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// suite

/// Number of separation parameters in the suite.
pub const SEPARATION_COUNT: usize = 8;

/// An interior point at which Koebe cases are centred when `p = ∞`.
fn finite_anchor(domain: &Domain, p: &BasePoint) -> Complex64 {
    if let BasePoint::Finite(z) = p {
        return *z;
    }
    match domain {
        Domain::RealSlitComplement(set) => {
            let (a, b) = set.hull();
            Complex64::new(0.5 * (a + b), 0.5 * (b - a))
        }
        _ => Complex64::new(2.0, 0.0),
    }
}

/// Sup of `||F| − 1|` on the boundary traces.
fn boundary_modulus_deviation<F: AnalyticFunction + ?Sized>(
    f: &F,
    domain: &Domain,
) -> (f64, Option<Complex64>) {
    let mut points = Vec::new();
    for (index, base) in base_curves(domain).iter().enumerate() {
        let curve = base.offset(trace_offset(domain, index));
        points
            .extend((0..4 * MESH_POINTS).map(|j| curve.point(j as f64 / (4 * MESH_POINTS) as f64)));
    }
    sup_on(&points, |z| (f.eval(z).norm() - 1.0).abs())
}

fn riemann_grid() -> Vec<Complex64> {
    (1..=10)
        .flat_map(|i| {
            (0..10).map(move |j| Complex64::from_polar(0.09 * i as f64, TAU * j as f64 / 10.0))
        })
        .collect()
}

/// Sup over a 100-point grid of `|F_solver − F_closed|`.
pub fn riemann_distance(
    solution: &AhlforsSolution,
    closed: &AhlforsClosedForm,
) -> (f64, Option<Complex64>) {
    sup_on(&riemann_grid(), |z| {
        (solution.eval(z) - closed.eval(z)).norm()
    })
}

/// The Ahlfors function the suite examines: closed form for slit
/// complements, solver output otherwise.
enum Subject {
    Closed(AhlforsClosedForm),
    Solved(Box<AhlforsSolution>),
}

/// Runs every applicable check on `domain` at `p`, in a fixed order. Solver
/// failure is reported as a failed `solver_convergence` line.
pub fn run_suite(domain: &Domain, p: &BasePoint, cfg: &SolverConfig) -> Vec<CheckReport> {
    run_suite_with_basis(domain, p, &BasisSpec::default_for(domain), cfg)
}

pub fn run_suite_with_basis(
    domain: &Domain,
    p: &BasePoint,
    spec: &BasisSpec,
    cfg: &SolverConfig,
) -> Vec<CheckReport> {
    let mut reports = Vec::new();
    if domain.validate().is_err() || !domain.contains_point(p) {
        reports.push(CheckReport::failure("input_validation", 0.0));
        return reports;
    }

    let subject = match domain {
        Domain::RealSlitComplement(_) => match AhlforsClosedForm::for_domain(domain, p) {
            Ok(f) => Subject::Closed(f),
            Err(_) => {
                reports.push(CheckReport::failure("closed_form", 0.0));
                return reports;
            }
        },
        _ => match solve_extremal(domain, *p, spec, cfg) {
            Ok(sol) => {
                reports.push(CheckReport::at_most(
                    "solver_convergence",
                    sol.diagnostics.max_boundary_modulus - 1.0,
                    cfg.constraint_tolerance,
                    None,
                ));
                Subject::Solved(Box::new(sol))
            }
            Err(e) => {
                let measured = match &e {
                    Error::NonConvergence { best: Some(b), .. } => {
                        b.diagnostics.max_boundary_modulus - 1.0
                    }
                    _ => f64::NAN,
                };
                reports.push(CheckReport {
                    check_name: "solver_convergence".into(),
                    passed: false,
                    measured,
                    threshold: cfg.constraint_tolerance,
                    witness: None,
                });
                return reports;
            }
        },
    };
    let big_f: SharedFunction = match &subject {
        Subject::Closed(f) => std::sync::Arc::new(f.clone()),
        Subject::Solved(s) => std::sync::Arc::new((**s).clone()),
    };

    // capacity / closed-form agreement
    match (&subject, domain, p) {
        (Subject::Closed(f), Domain::RealSlitComplement(set), BasePoint::Infinity) => {
            let (center, radius) = infinity_contour(domain).expect("slit complement contains ∞");
            let measured = derivative_at_infinity(f, center, radius)
                .map(|d| (d.norm() - 0.25 * set.measure()).abs())
                .unwrap_or(f64::NAN);
            reports.push(CheckReport::at_most(
                "capacity_quarter_length",
                measured,
                CAPACITY_TOLERANCE,
                None,
            ));
        }
        (Subject::Solved(sol), Domain::UnitDisk | Domain::ExteriorUnitDisk, _) => {
            if let Ok(closed) = AhlforsClosedForm::for_domain(domain, p) {
                reports.push(CheckReport::at_most(
                    "gamma_closed_form",
                    (sol.gamma - closed.gamma).abs(),
                    RIEMANN_TOLERANCE,
                    None,
                ));
            }
            if let (Domain::UnitDisk, BasePoint::Finite(z)) = (domain, p) {
                if let Ok(closed) = ahlfors_disk(*z) {
                    let (d, w) = riemann_distance(sol, &closed);
                    reports.push(CheckReport::at_most(
                        "riemann_equivalence",
                        d,
                        RIEMANN_TOLERANCE,
                        w,
                    ));
                }
            }
        }
        _ => {}
    }

    // emergent properties
    let vanishing = match (&subject, p) {
        (Subject::Solved(sol), _) => sol.value_at_base_point(),
        (Subject::Closed(f), BasePoint::Infinity) => {
            f.value_at_infinity().map_or(f64::NAN, |v| v.norm())
        }
        (Subject::Closed(f), BasePoint::Finite(z)) => f.eval(*z).norm(),
    };
    reports.push(CheckReport::at_most(
        "vanishing_at_base_point",
        vanishing,
        VANISHING_TOLERANCE,
        p.finite(),
    ));
    let (deviation, at) = boundary_modulus_deviation(&*big_f, domain);
    reports.push(CheckReport::at_most(
        "boundary_modulus",
        deviation,
        MODULUS_TOLERANCE,
        at,
    ));

    let expected = domain.component_count() as i64;
    for w in VALENCE_PROBES {
        let name = format!("valence[w={}{:+}i]", w.re, w.im);
        match valence(&*big_f, domain, w, VALENCE_SAMPLES) {
            Ok(v) => reports.push(CheckReport {
                check_name: name,
                passed: v.count == expected,
                measured: v.raw,
                threshold: expected as f64,
                witness: Some(w),
            }),
            Err(_) => reports.push(CheckReport::failure(name, expected as f64)),
        }
    }

    // norm identities over the catalog
    let chart = match disk_chart(domain) {
        Ok(c) => c,
        Err(_) => {
            reports.push(CheckReport::failure("disk_chart", 0.0));
            return reports;
        }
    };
    let entries = catalog();
    for entry in &entries {
        let h = Composed {
            outer: entry.function.clone(),
            inner: chart.clone(),
        };
        reports.push(check_norm_preservation(&*big_f, &h, domain, &entry.name));
    }
    for entry in &entries {
        reports.push(check_composition_norm(
            &*entry.function,
            entry.norm,
            &*big_f,
            domain,
            &entry.name,
        ));
    }

    reports.push(check_nonseparability(
        &*big_f,
        &equispaced_unimodular(SEPARATION_COUNT),
        domain,
    ));
    reports.push(check_almost_surjectivity(&*big_f, domain, 0.0, 0.8));
    reports.push(check_almost_surjectivity(&*big_f, domain, PI / 2.0, 0.9));

    let q = finite_anchor(domain, p);
    for (name, f, a) in koebe_cases(big_f.clone(), q) {
        reports.push(check_koebe_expansion(f, a, q, domain, &name));
    }

    if let Domain::UnitDisk = domain {
        // Schwarz lemma on an expansion of z/2, which is not a rotation
        let half = FnAnalytic::new(|z: Complex64| 0.5 * z, |_| Complex64::new(0.5, 0.0));
        let report = koebe_expand(half, Complex64::new(-0.5, 0.0), ZERO, domain)
            .map_err(|e| e.to_string())
            .and_then(|h| check_schwarz(&h).map_err(|e| e.to_string()));
        reports.push(report.unwrap_or_else(|_| CheckReport::failure("schwarz_lemma", 1e-9)));
    }
    reports
}

/// Number of failed reports.
pub fn failure_count(reports: &[CheckReport]) -> usize {
    reports.iter().filter(|r| !r.passed).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Circle;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn separation_family_values() {
        let f = separation_family(c(1.0, 0.0)).unwrap();
        assert!((f.eval(ZERO) - (-1.0f64).exp()).norm() < 1e-15);
        // radial limit at s is zero
        assert!(f.eval(c(1.0 - 1e-3, 0.0)).norm() < 1e-100);
        assert!(separation_family(c(0.5, 0.0)).is_err());
        // derivative against central differences
        let z = c(0.2, -0.3);
        let fd = crate::function::finite_difference(&*f, z, 1e-6);
        assert!((f.derivative(z) - fd).norm() < 1e-7);
    }

    #[test]
    fn separation_of_opposite_members_on_the_disk() {
        let f1 = separation_family(c(1.0, 0.0)).unwrap();
        let f2 = separation_family(c(-1.0, 0.0)).unwrap();
        let best = (0..4096)
            .map(|k| Complex64::from_polar(0.9999, TAU * k as f64 / 4096.0))
            .map(|z| (f1.eval(z) - f2.eval(z)).norm())
            .fold(0.0, f64::max);
        assert!(best >= 0.99, "{best}");
    }

    #[test]
    fn catalog_has_thirteen_unit_norm_entries() {
        let entries = catalog();
        assert_eq!(entries.len(), 13);
        for e in &entries {
            let sup = (0..2048)
                .map(|k| {
                    e.function
                        .eval(Complex64::from_polar(
                            1.0 - 1e-9,
                            TAU * (k as f64 + 0.5) / 2048.0,
                        ))
                        .norm()
                })
                .fold(0.0, f64::max);
            assert!(sup <= 1.0 + 1e-9 && sup > 0.98, "{} sup {sup}", e.name);
        }
    }

    #[test]
    fn norm_checks_on_closed_forms() {
        let id = ahlfors_disk(ZERO).unwrap();
        let one = FnAnalytic::new(|_| c(1.0, 0.0), |_| ZERO);
        let r = check_norm_preservation(&id, &one, &Domain::UnitDisk, "1");
        assert!(r.passed && r.measured < 1e-3, "{r}");

        let f = ahlfors_disk(c(0.3, 0.0)).unwrap();
        let r = check_norm_preservation(&f, &Monomial::new(2), &Domain::UnitDisk, "z^2");
        assert!(r.passed, "{r}");

        let r = check_composition_norm(&Monomial::new(5), 1.0, &f, &Domain::UnitDisk, "z^5");
        assert!(r.passed && r.measured <= 0.02, "{r}");

        let constant = FnAnalytic::new(|_| c(0.25, 0.0), |_| ZERO);
        let r = check_composition_norm(&constant, 0.25, &f, &Domain::UnitDisk, "const");
        assert!(r.passed && r.measured == 0.0, "{r}");
    }

    #[test]
    fn nonseparability_on_the_disk() {
        let id = ahlfors_disk(ZERO).unwrap();
        let r = check_nonseparability(&id, &equispaced_unimodular(4), &Domain::UnitDisk);
        assert!(r.passed && r.measured <= 2.0, "{r}");
        let r = check_nonseparability(&id, &[c(1.0, 0.0)], &Domain::UnitDisk);
        assert!(r.passed, "single s is vacuous: {r}");
    }

    #[test]
    fn almost_surjectivity_witnesses() {
        let id = ahlfors_disk(ZERO).unwrap();
        let r = check_almost_surjectivity(&id, &Domain::UnitDisk, 0.7, 0.6);
        assert!(r.passed, "{r}");
        let q = r.witness.unwrap();
        assert!((q - Complex64::from_polar(0.8, 0.7)).norm() < 1e-9, "{q}");

        let f = ahlfors_disk(c(0.3, 0.0)).unwrap();
        let r = check_almost_surjectivity(&f, &Domain::UnitDisk, PI / 2.0, 0.9);
        assert!(r.passed && r.measured < 1e-9, "{r}");
    }

    #[test]
    fn schwarz_checks() {
        let r = check_schwarz(&Monomial::new(1)).unwrap();
        assert!(r.passed && r.measured.abs() < 1e-15, "{r}");
        assert!(check_schwarz(&Monomial::new(2)).unwrap().passed);
        let shifted = FnAnalytic::new(|z: Complex64| z + 0.1, |_| c(1.0, 0.0));
        assert!(matches!(
            check_schwarz(&shifted),
            Err(Error::PreconditionViolation(_))
        ));
        let big = FnAnalytic::new(|z: Complex64| 2.0 * z, |_| c(2.0, 0.0));
        assert!(matches!(
            check_schwarz(&big),
            Err(Error::PreconditionViolation(_))
        ));
        // an expansion of z/2 is strictly inside the Schwarz bound off 0
        let half = FnAnalytic::new(|z: Complex64| 0.5 * z, |_| c(0.5, 0.0));
        let h = koebe_expand(half, c(-0.5, 0.0), ZERO, &Domain::UnitDisk).unwrap();
        let r = check_schwarz(&h).unwrap();
        assert!(r.passed && r.measured < 0.0, "{r}");
    }

    #[test]
    fn report_json_line() {
        let r = CheckReport::at_most("x", 0.5, 1.0, Some(c(1.0, -2.0)));
        let line = r.to_json_line();
        assert_eq!(
            line,
            r#"{"check_name":"x","passed":true,"measured":0.5,"threshold":1.0,"witness":[1.0,-2.0]}"#
        );
        let back: CheckReport = serde_json::from_str(&line).unwrap();
        assert_eq!(back, r);
        let none = CheckReport::at_most("y", 2.0, 1.0, None);
        assert!(none.to_json_line().ends_with(r#""witness":null}"#));
        assert!(!none.passed);
    }

    #[test]
    fn slit_suite_passes() {
        let d = Domain::real_slit(vec![(-1.0, 1.0)]).unwrap();
        let reports = run_suite(&d, &BasePoint::Infinity, &SolverConfig::default());
        for r in &reports {
            assert!(r.passed, "{r}");
        }
        assert!(reports
            .iter()
            .any(|r| r.check_name == "capacity_quarter_length"));
    }

    #[test]
    fn koebe_cases_expand_on_a_hole_domain_chart() {
        let d = Domain::circle_domain(Circle::new(ZERO, 1.0), vec![Circle::new(c(0.0, 0.0), 0.3)])
            .unwrap();
        let chart = disk_chart(&d).unwrap();
        // the chart is the identity here and omits nothing in the hole's image,
        // so the cases are built from a genuine interior point
        for (name, f, a) in koebe_cases(chart, c(0.6, 0.1)) {
            let r = check_koebe_expansion(f, a, c(0.6, 0.1), &d, &name);
            assert!(r.passed, "{r}");
        }
    }
}

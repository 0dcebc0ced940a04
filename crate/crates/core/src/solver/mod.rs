//! Extremal problem `γ = sup{ Re h'(p) : ‖h‖∞ ≤ 1 }` over a finite rational
//! basis, solved as a semi-infinite linear program by constraint exchange.
//!
//! The modulus constraint `|h(ζ)| ≤ 1` is the intersection of the half-planes
//! `Re(e^{−iθ} h(ζ)) ≤ 1` over all angles. The solver starts from
//! `angle_cuts` equispaced angles at every boundary sample, then repeatedly
//! adds the tangent cut `θ = arg h(ζ)` at each local maximum of `|h|` on a
//! four times finer check grid until the largest violation drops below the
//! tolerance.

mod basis;
pub mod lp;

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use basis::{build_basis, Basis, BasisSpec, BasisTerm};

use crate::domain::{BasePoint, Domain};
use crate::error::{Error, Result};
use crate::function::AnalyticFunction;
use lp::CuttingPlaneLp;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub boundary_samples_per_component: usize,
    pub angle_cuts: usize,
    pub max_outer_iterations: usize,
    pub constraint_tolerance: f64,
    pub stall_tolerance: f64,
    /// Re-solves after adding poles at the reflections of the other zeros
    /// of the previous solution (circle domains with holes only).
    pub zero_refinements: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            boundary_samples_per_component: 512,
            angle_cuts: 16,
            max_outer_iterations: 60,
            constraint_tolerance: 1e-6,
            stall_tolerance: 1e-10,
            zero_refinements: 2,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = self.boundary_samples_per_component > 0
            && self.angle_cuts > 0
            && self.max_outer_iterations > 0
            && self.constraint_tolerance > 0.0
            && self.stall_tolerance > 0.0;
        if !positive {
            return Err(Error::InvalidParameter(
                "solver settings must be positive".into(),
            ));
        }
        if self.constraint_tolerance >= 1e-2 {
            return Err(Error::InvalidParameter(format!(
                "constraint_tolerance {} must be below 1e-2",
                self.constraint_tolerance
            )));
        }
        if self.angle_cuts < 3 {
            return Err(Error::InvalidParameter(
                "at least 3 angle cuts are needed to bound |h|".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverDiagnostics {
    pub iterations: usize,
    pub max_boundary_modulus: f64,
    pub cut_count: usize,
    pub lp_pivots: usize,
    /// Change of the objective over the last iteration.
    pub last_objective_change: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AhlforsSolution {
    pub basis: Basis,
    pub coefficients: Vec<Complex64>,
    /// `h'(p)`, real and positive after phase normalisation.
    pub gamma: f64,
    pub base_point: BasePoint,
    pub diagnostics: SolverDiagnostics,
}

impl AhlforsSolution {
    pub fn domain(&self) -> &Domain {
        &self.basis.domain
    }

    /// `h(z)` for `z` in the closed domain.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !self.basis.domain.contains_closure(z, 1e-9) {
            return Err(Error::OutOfDomain(z));
        }
        Ok(self.basis.combine(&self.coefficients, z))
    }

    /// `(component, parameter, |h|)` at `n` points per boundary component.
    pub fn boundary_modulus_profile(&self, n: usize) -> Result<Vec<(usize, f64, f64)>> {
        Ok(self
            .basis
            .domain
            .sample_boundary(n)?
            .iter()
            .map(|s| (s.component, s.parameter, self.eval(s.point).norm()))
            .collect())
    }

    /// `|h(p)|`, which the optimum drives to zero without it being imposed.
    pub fn value_at_base_point(&self) -> f64 {
        match self.base_point {
            BasePoint::Finite(p) => self.eval(p).norm(),
            BasePoint::Infinity => self.value_at_infinity().map_or(f64::NAN, |v| v.norm()),
        }
    }
}

impl AnalyticFunction for AhlforsSolution {
    fn eval(&self, z: Complex64) -> Complex64 {
        self.basis.combine(&self.coefficients, z)
    }

    fn derivative(&self, z: Complex64) -> Complex64 {
        self.basis.combine_derivative(&self.coefficients, z)
    }

    fn value_at_infinity(&self) -> Option<Complex64> {
        if !self.basis.domain.contains_infinity() {
            return None;
        }
        Some(
            self.basis
                .terms
                .iter()
                .zip(&self.coefficients)
                .filter(|(t, _)| matches!(t, BasisTerm::Constant))
                .map(|(_, c)| *c)
                .sum(),
        )
    }
}

/// Real constraint row of `Re(e^{−iθ} Σ c_k v_k) ≤ 1` over `(Re c, Im c)`.
fn cut_row(values: &[Complex64], theta: f64, row: &mut Vec<f64>) {
    let n = values.len();
    row.clear();
    row.resize(2 * n, 0.0);
    let rot = Complex64::from_polar(1.0, -theta);
    for (k, v) in values.iter().enumerate() {
        let w = rot * v;
        row[k] = w.re;
        row[n + k] = -w.im;
    }
}

fn coefficients_from(x: &[f64]) -> Vec<Complex64> {
    let n = x.len() / 2;
    (0..n).map(|k| Complex64::new(x[k], x[n + k])).collect()
}

/// Orthonormal coordinates for the span of the basis on the boundary
/// samples. Rational bases with nearby poles are close to linearly
/// dependent; the program is posed in the well-conditioned coordinates and
/// directions with negligible singular values are dropped.
struct Reduction {
    /// `dim × rank`; columns map reduced to original coefficients.
    transform: DMatrix<Complex64>,
}

impl Reduction {
    const RELATIVE_CUTOFF: f64 = 1e-9;

    fn new(sample_values: &[Vec<Complex64>]) -> Result<Self> {
        let rows = sample_values.len();
        let dim = sample_values[0].len();
        let v = DMatrix::from_fn(rows, dim, |i, k| sample_values[i][k]);
        let svd = v.svd(false, true);
        let v_t = svd
            .v_t
            .ok_or_else(|| Error::Internal("singular value decomposition failed".into()))?;
        let largest = svd.singular_values.max();
        let scale = (rows as f64).sqrt();
        let kept: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&j| svd.singular_values[j] > Self::RELATIVE_CUTOFF * largest)
            .collect();
        let mut order = kept;
        order.sort_by(|&a, &b| {
            svd.singular_values[b]
                .total_cmp(&svd.singular_values[a])
                .then(a.cmp(&b))
        });
        let transform = DMatrix::from_fn(dim, order.len(), |k, j| {
            let col = order[j];
            v_t[(col, k)].conj() * (scale / svd.singular_values[col])
        });
        Ok(Self { transform })
    }

    fn reduce(&self, values: &[Complex64]) -> Vec<Complex64> {
        (0..self.transform.ncols())
            .map(|j| {
                values
                    .iter()
                    .enumerate()
                    .map(|(k, v)| v * self.transform[(k, j)])
                    .sum()
            })
            .collect()
    }

    fn lift(&self, reduced: &[Complex64]) -> Vec<Complex64> {
        (0..self.transform.nrows())
            .map(|k| {
                reduced
                    .iter()
                    .enumerate()
                    .map(|(j, d)| self.transform[(k, j)] * d)
                    .sum()
            })
            .collect()
    }
}

struct CutPool {
    /// Row-major `(sample, angle)` cut rows.
    rows: Vec<Vec<f64>>,
    in_program: Vec<bool>,
    angles: usize,
}

impl CutPool {
    const SEED_SAMPLES: usize = 32;
    const VIOLATION_FLOOR: f64 = 1e-12;

    fn new(sample_values: &[Vec<Complex64>], reduction: &Reduction, angles: usize) -> Self {
        let mut rows = Vec::with_capacity(sample_values.len() * angles);
        for values in sample_values {
            let values = reduction.reduce(values);
            for k in 0..angles {
                let mut row = Vec::new();
                cut_row(&values, TAU * k as f64 / angles as f64, &mut row);
                rows.push(row);
            }
        }
        let in_program = vec![false; rows.len()];
        Self {
            rows,
            in_program,
            angles,
        }
    }

    /// Adds every cut at an evenly spaced subset of the samples on each
    /// component (`per_component` samples per component).
    fn seed(&mut self, lp: &mut CuttingPlaneLp, per_component: usize) {
        let stride = (per_component / Self::SEED_SAMPLES).max(1);
        for sample in
            (0..self.rows.len() / self.angles).filter(|i| (i % per_component).is_multiple_of(stride))
        {
            for j in sample * self.angles..(sample + 1) * self.angles {
                lp.add_constraint(&self.rows[j], 1.0);
                self.in_program[j] = true;
            }
        }
    }

    /// Adds the most violated pool cut of every sample that has one.
    fn add_violated(&mut self, lp: &mut CuttingPlaneLp, x: &[f64]) -> usize {
        let mut added = 0;
        for sample in 0..self.rows.len() / self.angles {
            let mut worst: Option<(usize, f64)> = None;
            for j in sample * self.angles..(sample + 1) * self.angles {
                if self.in_program[j] {
                    continue;
                }
                let excess = self.rows[j].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - 1.0;
                if excess > Self::VIOLATION_FLOOR && worst.is_none_or(|(_, w)| excess > w) {
                    worst = Some((j, excess));
                }
            }
            if let Some((j, _)) = worst {
                lp.add_constraint(&self.rows[j], 1.0);
                self.in_program[j] = true;
                added += 1;
            }
        }
        added
    }
}

struct CheckGrid {
    values: Vec<Vec<Complex64>>,
    per_component: usize,
}

impl CheckGrid {
    fn moduli(&self, coefficients: &[Complex64]) -> Vec<Complex64> {
        self.values
            .iter()
            .map(|v| v.iter().zip(coefficients).map(|(a, c)| a * c).sum())
            .collect()
    }
}

/// Solves the extremal problem on `domain` at `p`.
///
/// On multiply connected domains the extremal function has further zeros,
/// and its reflection across each boundary circle has poles at their
/// mirror images. When `cfg.zero_refinements > 0` those zeros are located
/// on the first solution and the problem is re-solved with matching pole
/// terms, which is what makes the boundary modulus close to one at modest
/// degrees.
///
/// Returns [`Error::NonConvergence`] carrying the least-violating iterate
/// when the iteration budget runs out, or immediately (without an iterate)
/// when no basis function has a nonzero derivative at `p`.
pub fn solve_extremal(
    domain: &Domain,
    p: BasePoint,
    spec: &BasisSpec,
    cfg: &SolverConfig,
) -> Result<AhlforsSolution> {
    cfg.validate()?;
    domain.validate()?;
    if !domain.contains_point(&p) {
        return Err(Error::InvalidParameter(format!(
            "base point {p} is not in the domain"
        )));
    }
    let mut solution = solve_with_spec(domain, p, spec, cfg)?;
    let multiply_connected =
        matches!(domain, Domain::CircleDomain { holes, .. } if !holes.is_empty());
    if !multiply_connected {
        return Ok(solution);
    }
    let mut spec = spec.clone();
    for _ in 0..cfg.zero_refinements {
        let zeros = other_zeros(&solution)?;
        if zeros.is_empty() {
            break;
        }
        spec.reflected_points = zeros;
        solution = solve_with_spec(domain, p, &spec, cfg)?;
    }
    Ok(solution)
}

/// Zeros of a solution in the domain other than its base point, found by
/// Newton's method from the local minima of `|h|` on a square grid and
/// sorted lexicographically.
fn other_zeros(solution: &AhlforsSolution) -> Result<Vec<Complex64>> {
    const GRID: usize = 161;
    let domain = solution.domain();
    let Domain::CircleDomain { outer, .. } = domain else {
        return Ok(Vec::new());
    };
    let step = 2.0 * outer.radius / (GRID - 1) as f64;
    let node = |i: usize, j: usize| {
        outer.center
            + Complex64::new(
                -outer.radius + i as f64 * step,
                -outer.radius + j as f64 * step,
            )
    };
    let modulus: Vec<Option<f64>> = (0..GRID * GRID)
        .map(|k| {
            let z = node(k / GRID, k % GRID);
            domain
                .contains(z)
                .then(|| solution.basis.combine(&solution.coefficients, z).norm())
        })
        .collect();
    let p = solution.base_point.finite();
    let mut zeros: Vec<Complex64> = Vec::new();
    for i in 1..GRID - 1 {
        for j in 1..GRID - 1 {
            let Some(m) = modulus[i * GRID + j] else {
                continue;
            };
            let neighbours = [(i - 1, j), (i + 1, j), (i, j - 1), (i, j + 1)];
            let is_minimum = m < 0.5
                && neighbours
                    .iter()
                    .all(|&(a, b)| modulus[a * GRID + b].is_some_and(|v| m <= v));
            if !is_minimum {
                continue;
            }
            let Some(z) = newton_zero(solution, node(i, j)) else {
                continue;
            };
            let near_base = p.is_some_and(|p| (z - p).norm() < 1e-3);
            if !near_base && zeros.iter().all(|w| (w - z).norm() > 1e-6) {
                zeros.push(z);
            }
        }
    }
    zeros.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(zeros)
}

fn newton_zero(solution: &AhlforsSolution, start: Complex64) -> Option<Complex64> {
    let domain = solution.domain();
    let mut z = start;
    for _ in 0..50 {
        let f = solution.basis.combine(&solution.coefficients, z);
        let d = solution.basis.combine_derivative(&solution.coefficients, z);
        if d.norm() < 1e-12 {
            return None;
        }
        let step = f / d;
        z -= step;
        if !domain.contains(z) {
            return None;
        }
        if step.norm() < 1e-13 {
            return Some(z);
        }
    }
    None
}

fn solve_with_spec(
    domain: &Domain,
    p: BasePoint,
    spec: &BasisSpec,
    cfg: &SolverConfig,
) -> Result<AhlforsSolution> {
    let basis = build_basis(domain, p, spec)?;
    let functional = basis.derivative_functional()?;
    if functional.iter().all(|g| g.norm() < 1e-14) {
        return Err(Error::NonConvergence {
            message: format!(
                "no basis function has a nonzero derivative at {p}; the extremal problem is degenerate for this basis"
            ),
            best: None,
        });
    }

    let n = cfg.boundary_samples_per_component;
    let samples = domain.sample_boundary(n)?;
    let sample_values: Vec<Vec<Complex64>> =
        samples.iter().map(|s| basis.values(s.point)).collect();
    let reduction = Reduction::new(&sample_values)?;
    let check = CheckGrid {
        values: domain
            .sample_boundary(4 * n)?
            .iter()
            .map(|s| reduction.reduce(&basis.values(s.point)))
            .collect(),
        per_component: 4 * n,
    };
    let reduced_functional = reduction.reduce(&functional);
    let rank = reduced_functional.len();
    let mut objective = vec![0.0; 2 * rank];
    for (k, g) in reduced_functional.iter().enumerate() {
        objective[k] = g.re;
        objective[rank + k] = -g.im;
    }

    // The initial cuts form a pool: the program starts from a coarse subset
    // and pool cuts enter only once they are violated, which reaches the
    // optimum over the whole pool with far fewer columns to price.
    let mut pool = CutPool::new(&sample_values, &reduction, cfg.angle_cuts);
    let mut lp = CuttingPlaneLp::new(objective);
    pool.seed(&mut lp, n);
    let mut row = Vec::with_capacity(2 * rank);

    let mut best: Option<(f64, Vec<Complex64>, f64)> = None;
    let mut previous_objective = f64::NAN;
    let mut last_change = f64::INFINITY;
    let mut previous_violation = f64::INFINITY;
    for iteration in 1..=cfg.max_outer_iterations {
        let lp_solution = loop {
            let candidate = lp.solve()?;
            if pool.add_violated(&mut lp, &candidate.x) == 0 {
                break candidate;
            }
        };
        let reduced = coefficients_from(&lp_solution.x);
        let coefficients = reduction.lift(&reduced);
        last_change = (lp_solution.objective - previous_objective).abs();
        previous_objective = lp_solution.objective;

        let values = check.moduli(&reduced);
        let moduli: Vec<f64> = values.iter().map(|v| v.norm()).collect();
        let max_modulus = moduli.iter().copied().fold(0.0, f64::max);
        let violation = max_modulus - 1.0;
        if best.as_ref().is_none_or(|(v, _, _)| violation < *v) {
            best = Some((violation, coefficients.clone(), max_modulus));
        }

        let violation_change = (violation - previous_violation).abs();
        previous_violation = violation;
        let stalled = last_change <= cfg.stall_tolerance && violation_change <= cfg.stall_tolerance;
        if violation <= cfg.constraint_tolerance
            && (stalled || iteration == cfg.max_outer_iterations)
        {
            return Ok(finish(
                basis,
                &functional,
                coefficients,
                p,
                SolverDiagnostics {
                    iterations: iteration,
                    max_boundary_modulus: max_modulus,
                    cut_count: lp.constraint_count(),
                    lp_pivots: lp.pivots(),
                    last_objective_change: last_change,
                },
            ));
        }

        // tangent cuts at the local maxima of the violation on each component;
        // once feasible to tolerance, keep tightening until the objective stalls
        let threshold = if violation > cfg.constraint_tolerance {
            cfg.constraint_tolerance
        } else {
            0.0
        };
        let per = check.per_component;
        let mut added = 0;
        for (i, &m) in moduli.iter().enumerate() {
            if m - 1.0 <= threshold {
                continue;
            }
            let base = (i / per) * per;
            let prev = moduli[base + (i - base + per - 1) % per];
            let next = moduli[base + (i - base + 1) % per];
            if m >= prev && m >= next {
                cut_row(&check.values[i], values[i].arg(), &mut row);
                lp.add_constraint(&row, 1.0);
                added += 1;
            }
        }
        if added == 0 {
            // nothing left to cut: the objective cannot move any more
            return Ok(finish(
                basis,
                &functional,
                coefficients,
                p,
                SolverDiagnostics {
                    iterations: iteration,
                    max_boundary_modulus: max_modulus,
                    cut_count: lp.constraint_count(),
                    lp_pivots: lp.pivots(),
                    last_objective_change: 0.0,
                },
            ));
        }
    }

    let (_, coefficients, max_modulus) = best.expect("at least one iteration ran");
    let solution = finish(
        basis,
        &functional,
        coefficients,
        p,
        SolverDiagnostics {
            iterations: cfg.max_outer_iterations,
            max_boundary_modulus: max_modulus,
            cut_count: lp.constraint_count(),
            lp_pivots: lp.pivots(),
            last_objective_change: last_change,
        },
    );
    Err(Error::NonConvergence {
        message: format!(
            "boundary modulus {max_modulus:.3e} still exceeds 1 + {:e} after {} iterations",
            cfg.constraint_tolerance, cfg.max_outer_iterations
        ),
        best: Some(Box::new(solution)),
    })
}

/// Rotates the coefficients so that `h'(p)` is real and positive.
fn finish(
    basis: Basis,
    functional: &[Complex64],
    coefficients: Vec<Complex64>,
    p: BasePoint,
    diagnostics: SolverDiagnostics,
) -> AhlforsSolution {
    let d: Complex64 = functional
        .iter()
        .zip(&coefficients)
        .map(|(g, c)| g * c)
        .sum();
    let rot = Complex64::from_polar(1.0, -d.arg());
    AhlforsSolution {
        basis,
        coefficients: coefficients.iter().map(|c| c * rot).collect(),
        gamma: d.norm(),
        base_point: p,
        diagnostics,
    }
}

/// Result of an argument-principle count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValenceCount {
    pub count: i64,
    /// The real part of the contour integral before rounding.
    pub raw: f64,
}

pub const DEFAULT_VALENCE_MARGIN: f64 = 0.05;

/// Number of solutions of `F(z) = w` in the domain, counted by
/// `(1/2πi) ∮_{∂Ω} F'/(F − w) dz` with `n` samples per component.
pub fn valence<F: AnalyticFunction + ?Sized>(
    f: &F,
    domain: &Domain,
    w: Complex64,
    n: usize,
) -> Result<ValenceCount> {
    valence_with_margin(f, domain, w, n, DEFAULT_VALENCE_MARGIN)
}

pub fn valence_with_margin<F: AnalyticFunction + ?Sized>(
    f: &F,
    domain: &Domain,
    w: Complex64,
    n: usize,
    margin: f64,
) -> Result<ValenceCount> {
    if w.norm() >= 1.0 - margin {
        return Err(Error::InvalidParameter(format!(
            "|w| = {} is within the margin {margin} of the unit circle",
            w.norm()
        )));
    }
    let integral: Complex64 = domain
        .sample_boundary(n)?
        .iter()
        .map(|s| f.derivative(s.point) / (f.eval(s.point) - w) * s.unit_tangent * s.weight)
        .sum();
    let value = integral / Complex64::new(0.0, TAU);
    let raw = value.re;
    if !raw.is_finite() || (raw - raw.round()).abs() > 0.1 || value.im.abs() > 0.1 {
        return Err(Error::Resolution { raw });
    }
    Ok(ValenceCount {
        count: raw.round() as i64,
        raw,
    })
}

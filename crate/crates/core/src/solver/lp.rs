//! Dense revised simplex for cutting-plane linear programs.
//!
//! The primal problem is
//!
//! ```text
//! maximize cᵀx  subject to  a_jᵀx ≤ b_j  (j = 1..N),  x free,
//! ```
//!
//! with few variables and many constraints. It is solved through its dual
//! `minimize bᵀy  subject to  A y = c, y ≥ 0`, whose optimal simplex
//! multipliers are the primal solution. Adding constraints only adds dual
//! columns, so the previous basis stays feasible and every re-solve is warm.
//!
//! Pricing is Dantzig's rule with ties broken by lowest column index; after
//! a run of degenerate pivots the solver switches to Bland's rule until the
//! objective moves again.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const PRICE_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-11;
const MAX_PIVOTS: usize = 200_000;
const DEGENERATE_RUN: usize = 50;
const REFACTOR_EVERY: usize = 50;
const CANDIDATES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Var {
    Artificial(usize),
    Column(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    One,
    Two,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct CuttingPlaneLp {
    rows: usize,
    objective: Vec<f64>,
    columns: Vec<f64>,
    rhs: Vec<f64>,
    basis: Option<Vec<Var>>,
    pivots: usize,
}

impl CuttingPlaneLp {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            rows: objective.len(),
            objective,
            columns: Vec::new(),
            rhs: Vec::new(),
            basis: None,
            pivots: 0,
        }
    }

    /// Adds the constraint `aᵀx ≤ b`.
    pub fn add_constraint(&mut self, a: &[f64], b: f64) {
        assert_eq!(a.len(), self.rows, "constraint length");
        self.columns.extend_from_slice(a);
        self.rhs.push(b);
    }

    pub fn constraint_count(&self) -> usize {
        self.rhs.len()
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    fn column(&self, j: usize) -> &[f64] {
        &self.columns[j * self.rows..(j + 1) * self.rows]
    }

    fn artificial_sign(&self, i: usize) -> f64 {
        if self.objective[i] >= 0.0 {
            1.0
        } else {
            -1.0
        }
    }

    fn basis_matrix(&self, basis: &[Var]) -> DMatrix<f64> {
        let m = self.rows;
        let mut b = DMatrix::zeros(m, m);
        for (k, var) in basis.iter().enumerate() {
            match *var {
                Var::Artificial(i) => b[(i, k)] = self.artificial_sign(i),
                Var::Column(j) => {
                    for (i, v) in self.column(j).iter().enumerate() {
                        b[(i, k)] = *v;
                    }
                }
            }
        }
        b
    }

    fn cost(&self, var: Var, phase: Phase) -> f64 {
        match (var, phase) {
            (Var::Artificial(_), Phase::One) => 1.0,
            (Var::Artificial(_), Phase::Two) => 0.0,
            (Var::Column(_), Phase::One) => 0.0,
            (Var::Column(j), Phase::Two) => self.rhs[j],
        }
    }

    /// Solves the current program, warm-starting from the last basis.
    pub fn solve(&mut self) -> Result<LpSolution> {
        let mut basis = match self.basis.take() {
            Some(b) => b,
            None => {
                let mut b: Vec<Var> = (0..self.rows).map(Var::Artificial).collect();
                self.iterate(&mut b, Phase::One)?;
                let infeasibility: f64 = self
                    .basic_values(&b)?
                    .iter()
                    .zip(&b)
                    .filter(|(_, v)| matches!(v, Var::Artificial(_)))
                    .map(|(x, _)| x.max(0.0))
                    .sum();
                let scale = 1.0 + self.objective.iter().map(|c| c.abs()).sum::<f64>();
                if infeasibility > 1e-8 * scale {
                    return Err(Error::Internal(
                        "constraints do not bound the objective (dual infeasible)".into(),
                    ));
                }
                self.drive_out_artificials(&mut b)?;
                b
            }
        };
        self.iterate(&mut basis, Phase::Two)?;
        let lu = self.basis_matrix(&basis).transpose().lu();
        let costs =
            DVector::from_iterator(self.rows, basis.iter().map(|&v| self.cost(v, Phase::Two)));
        let pi = lu
            .solve(&costs)
            .ok_or_else(|| Error::Internal("singular basis".into()))?;
        let x: Vec<f64> = pi.iter().copied().collect();
        let objective = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        self.basis = Some(basis);
        Ok(LpSolution { x, objective })
    }

    fn basic_values(&self, basis: &[Var]) -> Result<Vec<f64>> {
        let c = DVector::from_column_slice(&self.objective);
        self.basis_matrix(basis)
            .lu()
            .solve(&c)
            .map(|v| v.iter().copied().collect())
            .ok_or_else(|| Error::Internal("singular basis".into()))
    }

    fn drive_out_artificials(&mut self, basis: &mut [Var]) -> Result<()> {
        for r in 0..basis.len() {
            if !matches!(basis[r], Var::Artificial(_)) {
                continue;
            }
            let inv = self
                .basis_matrix(basis)
                .try_inverse()
                .ok_or_else(|| Error::Internal("singular basis".into()))?;
            let row = inv.row(r);
            let mut best: Option<(usize, f64)> = None;
            for j in 0..self.constraint_count() {
                if basis.contains(&Var::Column(j)) {
                    continue;
                }
                let v: f64 = row.iter().zip(self.column(j)).map(|(a, b)| a * b).sum();
                if v.abs() > 1e-8 && best.is_none_or(|(_, bv)| v.abs() > bv) {
                    best = Some((j, v.abs()));
                }
            }
            match best {
                Some((j, _)) => {
                    basis[r] = Var::Column(j);
                    self.pivots += 1;
                }
                None => {
                    return Err(Error::Internal(
                        "constraint matrix is rank deficient; basis functions are dependent on the samples".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    fn inverse(&self, basis: &[Var]) -> Result<DMatrix<f64>> {
        self.basis_matrix(basis)
            .try_inverse()
            .ok_or_else(|| Error::Internal("singular basis".into()))
    }

    fn reduced_cost(&self, pi: &DVector<f64>, j: usize, phase: Phase) -> f64 {
        let dot: f64 = pi.iter().zip(self.column(j)).map(|(a, b)| a * b).sum();
        self.cost(Var::Column(j), phase) - dot
    }

    /// Primal simplex on the dual program with an explicitly updated basis
    /// inverse (refactored every `REFACTOR_EVERY` pivots) and multiple
    /// pricing: a full pass keeps the `CANDIDATES` most attractive columns,
    /// which are re-priced until none improves.
    fn iterate(&mut self, basis: &mut [Var], phase: Phase) -> Result<()> {
        let m = self.rows;
        let n = self.constraint_count();
        let c = DVector::from_column_slice(&self.objective);
        let mut degenerate = 0usize;
        let mut bland = false;
        let mut in_basis = vec![false; n];
        for v in basis.iter() {
            if let Var::Column(j) = v {
                in_basis[*j] = true;
            }
        }
        let mut binv = self.inverse(basis)?;
        let mut since_refactor = 0usize;
        let mut candidates: Vec<usize> = Vec::new();
        for _ in 0..MAX_PIVOTS {
            if since_refactor >= REFACTOR_EVERY {
                binv = self.inverse(basis)?;
                since_refactor = 0;
            }
            let x_b = &binv * &c;
            let costs = DVector::from_iterator(m, basis.iter().map(|&v| self.cost(v, phase)));
            let pi = binv.tr_mul(&costs);

            let mut entering: Option<(usize, f64)> = None;
            if bland {
                entering = (0..n)
                    .filter(|&j| !in_basis[j])
                    .map(|j| (j, self.reduced_cost(&pi, j, phase)))
                    .find(|&(_, r)| r < -PRICE_TOL);
            } else {
                for &j in &candidates {
                    if in_basis[j] {
                        continue;
                    }
                    let r = self.reduced_cost(&pi, j, phase);
                    if r < -PRICE_TOL
                        && entering.is_none_or(|(bj, br)| r < br || (r == br && j < bj))
                    {
                        entering = Some((j, r));
                    }
                }
                if entering.is_none() {
                    let mut priced: Vec<(f64, usize)> = (0..n)
                        .filter(|&j| !in_basis[j])
                        .map(|j| (self.reduced_cost(&pi, j, phase), j))
                        .filter(|&(r, _)| r < -PRICE_TOL)
                        .collect();
                    priced.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                    priced.truncate(CANDIDATES);
                    candidates = priced.iter().map(|&(_, j)| j).collect();
                    entering = priced.first().map(|&(r, j)| (j, r));
                }
            }
            let Some((q, _)) = entering else {
                return Ok(());
            };

            let a_q = DVector::from_column_slice(self.column(q));
            let u = &binv * a_q;
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..m {
                if u[r] <= PIVOT_TOL {
                    continue;
                }
                let ratio = x_b[r].max(0.0) / u[r];
                let better = match leave {
                    None => true,
                    Some((lr, best)) => {
                        if bland {
                            ratio < best - 1e-14 || (ratio <= best + 1e-14 && basis[r] < basis[lr])
                        } else {
                            ratio < best - 1e-14 || (ratio <= best + 1e-14 && u[r] > u[lr])
                        }
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            let Some((r, step)) = leave else {
                return Err(Error::Internal("dual program unbounded".into()));
            };
            if let Var::Column(j) = basis[r] {
                in_basis[j] = false;
            }
            basis[r] = Var::Column(q);
            in_basis[q] = true;
            self.pivots += 1;
            since_refactor += 1;

            // eta update of the inverse
            let pivot_row = binv.row(r) / u[r];
            for i in 0..m {
                if i != r && u[i] != 0.0 {
                    let scaled = &pivot_row * u[i];
                    let mut row = binv.row_mut(i);
                    row -= scaled;
                }
            }
            binv.set_row(r, &pivot_row);

            if step <= 1e-14 {
                degenerate += 1;
                if degenerate >= DEGENERATE_RUN {
                    bland = true;
                }
            } else {
                degenerate = 0;
                bland = false;
            }
        }
        Err(Error::Internal(format!(
            "simplex exceeded {MAX_PIVOTS} pivots"
        )))
    }
}

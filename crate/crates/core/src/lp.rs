//! Exact LP feasibility with Farkas certificates.
//!
//! The problem `A x (>= | =) b` with per-variable sign constraints is brought to
//! the canonical form `A' x' >= b', x' >= 0` (equalities become two opposite
//! inequalities, free variables are split) and handed to a phase-one simplex
//! using Bland's rule. When the artificial objective stays positive the
//! optimal phase-one duals are mapped back to a Farkas vector for the original
//! rows. Both outcomes are re-checked in exact arithmetic before returning.

use crate::error::{Error, Result};
use crate::numerics::Mat;
use crate::scalar::{dot, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LpFeasibilityProblem<T> {
    a: Mat<T>,
    b: Vec<T>,
    sense: Vec<Relation>,
    nonneg: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Feasible,
    Infeasible,
}

/// Exactly one of `primal` / `dual_certificate` is set, matching `status`.
#[derive(Clone, Debug, PartialEq)]
pub struct LpOutcome<T> {
    pub status: LpStatus,
    pub primal: Option<Vec<T>>,
    pub dual_certificate: Option<Vec<T>>,
}

impl<T: Scalar> LpFeasibilityProblem<T> {
    pub fn new(a: Mat<T>, b: Vec<T>, sense: Vec<Relation>, nonneg: Vec<bool>) -> Result<Self> {
        if b.len() != a.rows() || sense.len() != a.rows() {
            return Err(Error::InvalidProblem(format!(
                "{} rows but {} right-hand sides and {} senses",
                a.rows(),
                b.len(),
                sense.len()
            )));
        }
        if nonneg.len() != a.cols() {
            return Err(Error::InvalidProblem(format!("{} columns but {} sign flags", a.cols(), nonneg.len())));
        }
        Ok(LpFeasibilityProblem { a, b, sense, nonneg })
    }

    /// All rows `>=`, all variables non-negative.
    pub fn nonneg_ge(a: Mat<T>, b: Vec<T>) -> Result<Self> {
        let (rows, cols) = (a.rows(), a.cols());
        Self::new(a, b, vec![Relation::Ge; rows], vec![true; cols])
    }

    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn num_vars(&self) -> usize {
        self.a.cols()
    }

    pub fn satisfied_by(&self, x: &[T]) -> bool {
        if x.len() != self.num_vars() {
            return false;
        }
        if self.nonneg.iter().zip(x).any(|(&nn, v)| nn && v.is_negative()) {
            return false;
        }
        (0..self.num_rows()).all(|i| {
            let lhs = dot(self.a.row(i), x);
            match self.sense[i] {
                Relation::Ge => lhs >= self.b[i],
                Relation::Eq => lhs == self.b[i],
            }
        })
    }

    /// Checks the Farkas alternative: `y >= 0` on `>=` rows, `y^T A <= 0` on
    /// non-negative variables and `= 0` on free ones, and `y . b > 0`.
    pub fn certifies_infeasible(&self, y: &[T]) -> bool {
        if y.len() != self.num_rows() {
            return false;
        }
        if self.sense.iter().zip(y).any(|(&s, v)| s == Relation::Ge && v.is_negative()) {
            return false;
        }
        let ya = self.a.vec_mul(y).expect("dimensions checked at construction");
        let cols_ok = ya.iter().zip(&self.nonneg).all(|(v, &nn)| if nn { !v.is_positive() } else { v.is_zero() });
        cols_ok && dot(y, &self.b).is_positive()
    }
}

/// Decides feasibility exactly; the returned primal or certificate has been re-verified.
pub fn solve_feasibility<T: Scalar>(prob: &LpFeasibilityProblem<T>) -> Result<LpOutcome<T>> {
    // Expanded columns: (original variable, sign).
    let mut columns: Vec<(usize, bool)> = Vec::new();
    for (j, &nn) in prob.nonneg.iter().enumerate() {
        columns.push((j, true));
        if !nn {
            columns.push((j, false));
        }
    }
    // Expanded rows: (original row, sign), all of the form row >= rhs.
    let mut rows: Vec<(usize, bool)> = Vec::new();
    for (i, &s) in prob.sense.iter().enumerate() {
        rows.push((i, true));
        if s == Relation::Eq {
            rows.push((i, false));
        }
    }

    let signed = |v: &T, positive: bool| if positive { v.clone() } else { -v.clone() };
    let nx = columns.len();
    let nr = rows.len();
    let mut canon = Mat::zeros(nr, nx);
    let mut rhs = Vec::with_capacity(nr);
    for (r, &(i, rs)) in rows.iter().enumerate() {
        for (c, &(j, cs)) in columns.iter().enumerate() {
            canon[(r, c)] = signed(&signed(&prob.a[(i, j)], cs), rs);
        }
        rhs.push(signed(&prob.b[i], rs));
    }

    let phase_one = PhaseOne::run(&canon, &rhs);

    if phase_one.feasible() {
        let x_exp = phase_one.structural_values(nx);
        let mut x = vec![T::zero(); prob.num_vars()];
        for (c, &(j, cs)) in columns.iter().enumerate() {
            x[j] = x[j].clone() + signed(&x_exp[c], cs);
        }
        if !prob.satisfied_by(&x) {
            return Err(Error::InvariantViolation("simplex primal failed exact re-check".into()));
        }
        Ok(LpOutcome { status: LpStatus::Feasible, primal: Some(x), dual_certificate: None })
    } else {
        let y_exp = phase_one.farkas_rows();
        let mut y = vec![T::zero(); prob.num_rows()];
        for (r, &(i, rs)) in rows.iter().enumerate() {
            y[i] = y[i].clone() + signed(&y_exp[r], rs);
        }
        if !prob.certifies_infeasible(&y) {
            return Err(Error::InvariantViolation("Farkas certificate failed exact re-check".into()));
        }
        Ok(LpOutcome { status: LpStatus::Infeasible, primal: None, dual_certificate: Some(y) })
    }
}

/// Phase-one tableau for `A' x - s = b'` (rows negated where `b' < 0`) with one
/// artificial per row. Column layout: structural, surplus, artificial.
struct PhaseOne<T> {
    tableau: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    reduced: Vec<T>,
    objective: T,
    row_sign: Vec<bool>,
    nx: usize,
    nr: usize,
}

impl<T: Scalar> PhaseOne<T> {
    fn run(a: &Mat<T>, b: &[T]) -> Self {
        let (nr, nx) = (a.rows(), a.cols());
        let width = nx + 2 * nr;
        let mut tableau = vec![vec![T::zero(); width]; nr];
        let mut rhs = Vec::with_capacity(nr);
        let mut row_sign = Vec::with_capacity(nr);
        for r in 0..nr {
            let positive = !b[r].is_negative();
            let flip = |v: T| if positive { v } else { -v };
            for c in 0..nx {
                tableau[r][c] = flip(a[(r, c)].clone());
            }
            tableau[r][nx + r] = flip(-T::one());
            tableau[r][nx + nr + r] = T::one();
            rhs.push(flip(b[r].clone()));
            row_sign.push(positive);
        }
        let basis: Vec<usize> = (0..nr).map(|r| nx + nr + r).collect();
        // costs: 0 on structural/surplus, 1 on artificials
        let mut reduced = vec![T::zero(); width];
        for (c, red) in reduced.iter_mut().enumerate() {
            let cost = if c >= nx + nr { T::one() } else { T::zero() };
            let col_sum = tableau.iter().fold(T::zero(), |acc, row| acc + row[c].clone());
            *red = cost - col_sum;
        }
        let objective = rhs.iter().fold(T::zero(), |acc, v| acc + v.clone());
        let mut p = PhaseOne { tableau, rhs, basis, reduced, objective, row_sign, nx, nr };
        p.iterate();
        p
    }

    fn iterate(&mut self) {
        // Bland's rule: lowest-index improving column, lowest-index leaving variable on ties.
        while let Some(enter) = self.reduced.iter().position(|d| d.is_negative()) {
            let mut leave: Option<(usize, T)> = None;
            for r in 0..self.nr {
                let coef = &self.tableau[r][enter];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = self.rhs[r].clone() / coef.clone();
                leave = match leave {
                    None => Some((r, ratio)),
                    Some((lr, lratio)) => {
                        if ratio < lratio || (ratio == lratio && self.basis[r] < self.basis[lr]) {
                            Some((r, ratio))
                        } else {
                            Some((lr, lratio))
                        }
                    }
                };
            }
            let (row, _) = leave.expect("phase-one objective is bounded below");
            self.pivot(row, enter);
        }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.tableau[row][col].clone();
        for v in self.tableau[row].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / piv.clone();
            }
        }
        self.rhs[row] = self.rhs[row].clone() / piv;
        let pivot_row = self.tableau[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for r in 0..self.nr {
            if r == row {
                continue;
            }
            let factor = self.tableau[r][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, p) in self.tableau[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
            self.rhs[r] = self.rhs[r].clone() - factor * pivot_rhs.clone();
        }
        let factor = self.reduced[col].clone();
        if !factor.is_zero() {
            for (v, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = v.clone() - factor.clone() * p.clone();
                }
            }
            self.objective = self.objective.clone() + factor * pivot_rhs;
        }
        self.basis[row] = col;
    }

    fn feasible(&self) -> bool {
        self.objective.is_zero()
    }

    fn structural_values(&self, nx: usize) -> Vec<T> {
        let mut x = vec![T::zero(); nx];
        for (r, &var) in self.basis.iter().enumerate() {
            if var < nx {
                x[var] = self.rhs[r].clone();
            }
        }
        x
    }

    /// Optimal phase-one duals `pi_r = 1 - reduced(artificial_r)`, with the row
    /// flips undone so the result is a Farkas vector for `A' x >= b'`.
    fn farkas_rows(&self) -> Vec<T> {
        (0..self.nr)
            .map(|r| {
                let pi = T::one() - self.reduced[self.nx + self.nr + r].clone();
                if self.row_sign[r] {
                    pi
                } else {
                    -pi
                }
            })
            .collect()
    }
}

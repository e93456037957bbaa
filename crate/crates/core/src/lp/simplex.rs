//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Problems are stated as `maximize c^T x` subject to linear rows and
//! `x >= 0`. The same code runs on `f64` (with the backend tolerance) and on
//! exact rationals, where it terminates with exact optima and duals.

use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("constraint references variable {var} but the program has {vars}")]
    VariableOutOfRange { var: usize, vars: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint<S> {
    pub coeffs: Vec<(usize, S)>,
    pub relation: Relation,
    pub rhs: S,
}

#[derive(Clone, Debug)]
pub struct LinearProgram<S> {
    vars: usize,
    objective: Vec<S>,
    constraints: Vec<Constraint<S>>,
}

/// Optimal primal point and one dual value per row.
///
/// Duals follow the maximization convention: `c^T x = b^T y`, `y >= 0` on
/// `<=` rows, `y <= 0` on `>=` rows, free on equalities.
#[derive(Clone, Debug)]
pub struct LpSolution<S> {
    pub objective: S,
    pub primal: Vec<S>,
    pub duals: Vec<S>,
    pub pivots: usize,
}

impl<S: Scalar> LinearProgram<S> {
    pub fn new(vars: usize) -> Self {
        LinearProgram {
            vars,
            objective: vec![S::zero(); vars],
            constraints: Vec::new(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.vars
    }

    pub fn row_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn set_objective(&mut self, var: usize, coeff: S) {
        self.objective[var] = coeff;
    }

    /// Adds a row and returns its index. Repeated variables are summed.
    pub fn add_constraint(&mut self, coeffs: Vec<(usize, S)>, relation: Relation, rhs: S) -> usize {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn constraints(&self) -> &[Constraint<S>] {
        &self.constraints
    }

    pub fn solve(&self) -> Result<LpSolution<S>, LpError> {
        for c in &self.constraints {
            if let Some(&(var, _)) = c.coeffs.iter().find(|(v, _)| *v >= self.vars) {
                return Err(LpError::VariableOutOfRange {
                    var,
                    vars: self.vars,
                });
            }
        }
        Tableau::build(self).solve(self)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Column {
    Structural,
    Slack,
    Artificial,
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    /// Reduced costs `z_j - c_j`; the last entry holds the objective value.
    reduced: Vec<S>,
    basis: Vec<usize>,
    kinds: Vec<Column>,
    /// Column carrying the identity entry of each row, used for duals.
    unit: Vec<usize>,
    negated: Vec<bool>,
    pivots: usize,
}

impl<S: Scalar> Tableau<S> {
    fn build(lp: &LinearProgram<S>) -> Self {
        let m = lp.constraints.len();
        let mut negated = vec![false; m];
        let mut relations = Vec::with_capacity(m);
        for (i, c) in lp.constraints.iter().enumerate() {
            negated[i] = c.rhs.is_negative();
            relations.push(match (c.relation, negated[i]) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            });
        }
        let slacks = relations.iter().filter(|r| **r != Relation::Eq).count();
        let artificials = relations.iter().filter(|r| **r != Relation::Le).count();
        let width = lp.vars + slacks + artificials;
        let mut kinds = vec![Column::Structural; lp.vars];
        kinds.extend(std::iter::repeat_n(Column::Slack, slacks));
        kinds.extend(std::iter::repeat_n(Column::Artificial, artificials));

        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut unit = Vec::with_capacity(m);
        let (mut next_slack, mut next_art) = (lp.vars, lp.vars + slacks);
        for (i, c) in lp.constraints.iter().enumerate() {
            let mut row = vec![S::zero(); width + 1];
            let sign = if negated[i] { -S::one() } else { S::one() };
            for (var, coeff) in &c.coeffs {
                row[*var] = row[*var].clone() + sign.clone() * coeff.clone();
            }
            row[width] = sign * c.rhs.clone();
            match relations[i] {
                Relation::Le => {
                    row[next_slack] = S::one();
                    basis.push(next_slack);
                    unit.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -S::one();
                    next_slack += 1;
                    row[next_art] = S::one();
                    basis.push(next_art);
                    unit.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = S::one();
                    basis.push(next_art);
                    unit.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        Tableau {
            rows,
            reduced: vec![S::zero(); width + 1],
            basis,
            kinds,
            unit,
            negated,
            pivots: 0,
        }
    }

    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn price(&mut self, cost: &[S]) {
        let w = self.width();
        for j in 0..=w {
            let own = if j < w { cost[j].clone() } else { S::zero() };
            let mut z = -own;
            for (row, &b) in self.rows.iter().zip(&self.basis) {
                if !cost[b].is_zero() && !row[j].is_zero() {
                    z = z + cost[b].clone() * row[j].clone();
                }
            }
            self.reduced[j] = z;
        }
    }

    fn run(&mut self, allowed: impl Fn(usize) -> bool) -> Result<(), LpError> {
        let w = self.width();
        loop {
            let Some(col) = (0..w).find(|&j| allowed(j) && self.reduced[j].is_neg()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, S)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[col].is_pos() {
                    continue;
                }
                let ratio = row[w].clone() / row[col].clone();
                let better = match &leave {
                    None => true,
                    Some((r, best)) => {
                        best.exceeds(&ratio)
                            || (!ratio.exceeds(best) && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let (row, _) = leave.ok_or(LpError::Unbounded)?;
            self.pivot(row, col);
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        self.pivots += 1;
        let w = self.width();
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.clone() / p.clone();
            }
        }
        self.rows[r][c] = S::one();
        let support: Vec<usize> = (0..=w).filter(|&k| !self.rows[r][k].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let eliminate = |target: &mut Vec<S>| {
            let f = target[c].clone();
            if f.is_zero() {
                return;
            }
            for &k in &support {
                let mut v = target[k].clone() - f.clone() * pivot_row[k].clone();
                v.snap();
                target[k] = v;
            }
            target[c] = S::zero();
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.reduced);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    fn solve(mut self, lp: &LinearProgram<S>) -> Result<LpSolution<S>, LpError> {
        let w = self.width();
        let kinds = self.kinds.clone();

        if kinds.contains(&Column::Artificial) {
            let phase_one: Vec<S> = kinds
                .iter()
                .map(|k| match k {
                    Column::Artificial => -S::one(),
                    _ => S::zero(),
                })
                .collect();
            self.price(&phase_one);
            self.run(|_| true)?;
            if self.reduced[w].is_neg() {
                return Err(LpError::Infeasible);
            }
            // Pivot remaining (zero-valued) artificials out where possible;
            // rows where that fails are redundant and stay inert.
            for i in 0..self.rows.len() {
                if kinds[self.basis[i]] != Column::Artificial {
                    continue;
                }
                if let Some(j) =
                    (0..w).find(|&j| kinds[j] != Column::Artificial && !self.rows[i][j].near_zero())
                {
                    self.pivot(i, j);
                }
            }
        }

        let mut cost = vec![S::zero(); w];
        cost[..lp.vars].clone_from_slice(&lp.objective);
        self.price(&cost);
        self.run(|j| kinds[j] != Column::Artificial)?;

        let mut primal = vec![S::zero(); lp.vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < lp.vars {
                primal[b] = row[w].clone();
            }
        }
        let duals = self
            .unit
            .iter()
            .zip(&self.negated)
            .map(|(&u, &neg)| {
                let y = self.reduced[u].clone();
                if neg {
                    -y
                } else {
                    y
                }
            })
            .collect();
        Ok(LpSolution {
            objective: self.reduced[w].clone(),
            primal,
            duals,
            pivots: self.pivots,
        })
    }
}

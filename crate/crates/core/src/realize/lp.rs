//! Dense two-phase simplex over exact rationals with Bland's rule.
//!
//! Problems here have at most a few dozen variables and are fed constraint
//! by constraint by the callers, so a plain tableau is enough.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

/// `maximize c·x` subject to the constraints and `x ≥ 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub objective: Vec<BigRational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        x: Vec<BigRational>,
        value: BigRational,
        /// One multiplier per constraint; `value = Σ duals[i]·rhs[i]`.
        duals: Vec<BigRational>,
    },
    /// Farkas multipliers: combining the constraints with these weights
    /// yields `0 ≥ positive` (or `0 = nonzero`).
    Infeasible {
        farkas: Vec<BigRational>,
    },
    Unbounded,
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    n_cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &BigRational {
        &self.rows[i][self.n_cols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    fn reduced_cost(&self, cost: &[BigRational], j: usize) -> BigRational {
        let mut rc = cost[j].clone();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if !cost[b].is_zero() && !row[j].is_zero() {
                rc -= &cost[b] * &row[j];
            }
        }
        rc
    }

    fn objective_value(&self, cost: &[BigRational]) -> BigRational {
        self.basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| !cost[b].is_zero())
            .map(|(i, &b)| &cost[b] * self.rhs(i))
            .sum()
    }

    /// Runs primal simplex iterations; returns false when unbounded.
    fn optimize(&mut self, cost: &[BigRational], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.n_cols).find(|&j| {
                allowed[j] && !self.basis.contains(&j) && self.reduced_cost(cost, j).is_positive()
            });
            let Some(c) = entering else {
                return true;
            };
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    /// `y_i = Σ_k cost[basis_k] · T[k][unit_i]`, the simplex multipliers.
    fn multipliers(&self, cost: &[BigRational], unit_cols: &[usize]) -> Vec<BigRational> {
        unit_cols
            .iter()
            .map(|&u| {
                self.basis
                    .iter()
                    .enumerate()
                    .filter(|(k, &b)| !cost[b].is_zero() && !self.rows[*k][u].is_zero())
                    .map(|(k, &b)| &cost[b] * &self.rows[k][u])
                    .sum()
            })
            .collect()
    }
}

impl LinearProgram {
    pub fn new(n_vars: usize) -> Self {
        LinearProgram {
            objective: vec![BigRational::zero(); n_vars],
            constraints: Vec::new(),
        }
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, relation: Relation, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.n_vars());
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn solve(&self) -> LpOutcome {
        let n = self.n_vars();
        let rows_n = self.constraints.len();
        // column layout: originals | one slack/surplus per inequality | artificials
        let mut sign = Vec::with_capacity(rows_n);
        let mut rels = Vec::with_capacity(rows_n);
        for c in &self.constraints {
            let flip = c.rhs.is_negative();
            sign.push(if flip {
                -BigRational::one()
            } else {
                BigRational::one()
            });
            rels.push(match (c.relation, flip) {
                (Relation::Le, true) => Relation::Ge,
                (Relation::Ge, true) => Relation::Le,
                (r, _) => r,
            });
        }
        let n_slack = rels.iter().filter(|r| **r != Relation::Eq).count();
        let n_art = rels.iter().filter(|r| **r != Relation::Le).count();
        let n_cols = n + n_slack + n_art;

        let mut rows = Vec::with_capacity(rows_n);
        let mut basis = Vec::with_capacity(rows_n);
        let mut unit_cols = Vec::with_capacity(rows_n);
        let mut artificial = vec![false; n_cols];
        let (mut next_slack, mut next_art) = (n, n + n_slack);
        for (i, c) in self.constraints.iter().enumerate() {
            let mut row = vec![BigRational::zero(); n_cols + 1];
            for (j, a) in c.coeffs.iter().enumerate() {
                row[j] = a * &sign[i];
            }
            row[n_cols] = &c.rhs * &sign[i];
            match rels[i] {
                Relation::Le => {
                    row[next_slack] = BigRational::one();
                    basis.push(next_slack);
                    unit_cols.push(next_slack);
                    next_slack += 1;
                }
                Relation::Ge => {
                    row[next_slack] = -BigRational::one();
                    next_slack += 1;
                    row[next_art] = BigRational::one();
                    artificial[next_art] = true;
                    basis.push(next_art);
                    unit_cols.push(next_art);
                    next_art += 1;
                }
                Relation::Eq => {
                    row[next_art] = BigRational::one();
                    artificial[next_art] = true;
                    basis.push(next_art);
                    unit_cols.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(row);
        }
        let mut tab = Tableau {
            rows,
            basis,
            n_cols,
        };

        if n_art > 0 {
            let phase1: Vec<BigRational> = (0..n_cols)
                .map(|j| {
                    if artificial[j] {
                        -BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            let everything = vec![true; n_cols];
            tab.optimize(&phase1, &everything);
            if tab.objective_value(&phase1).is_negative() {
                let farkas = tab
                    .multipliers(&phase1, &unit_cols)
                    .into_iter()
                    .zip(&sign)
                    .map(|(y, s)| y * s)
                    .collect();
                return LpOutcome::Infeasible { farkas };
            }
            // drive zero-level artificials out of the basis where possible
            for r in 0..tab.rows.len() {
                if artificial[tab.basis[r]] {
                    if let Some(c) =
                        (0..n_cols).find(|&j| !artificial[j] && !tab.rows[r][j].is_zero())
                    {
                        tab.pivot(r, c);
                    }
                }
            }
        }

        let mut cost = vec![BigRational::zero(); n_cols];
        cost[..n].clone_from_slice(&self.objective);
        let allowed: Vec<bool> = artificial.iter().map(|a| !a).collect();
        if !tab.optimize(&cost, &allowed) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![BigRational::zero(); n];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < n {
                x[b] = tab.rhs(i).clone();
            }
        }
        let value = tab.objective_value(&cost);
        let duals = tab
            .multipliers(&cost, &unit_cols)
            .into_iter()
            .zip(&sign)
            .map(|(y, s)| y * s)
            .collect();
        LpOutcome::Optimal { x, value, duals }
    }
}

//! Two-phase tableau simplex over exact rationals, for the desk-scale
//! concavification program: maximize `c·α` subject to `A·α = b`, `α ≥ 0`.
//! Bland's least-index rule on entering and leaving variables prevents
//! cycling; all pivoting is exact, so degeneracy is harmless.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { objective: BigRational, solution: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

pub(crate) struct Lp {
    rows: usize,
    cols: usize, // structural variables
    tableau: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
}

impl Lp {
    /// `a` is row-major `rows x cols`, `b` the right-hand side.
    pub fn new(a: Vec<Vec<BigRational>>, b: Vec<BigRational>) -> Lp {
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        // layout: structural cols | artificial cols | rhs
        let width = cols + rows + 1;
        let mut tableau = Vec::with_capacity(rows);
        for (i, mut row) in a.into_iter().enumerate() {
            let mut t = Vec::with_capacity(width);
            let flip = b[i].is_negative();
            if flip {
                for v in &mut row {
                    *v = -v.clone();
                }
            }
            t.extend(row);
            for k in 0..rows {
                t.push(if k == i { BigRational::one() } else { BigRational::zero() });
            }
            t.push(if flip { -b[i].clone() } else { b[i].clone() });
            tableau.push(t);
        }
        let basis = (cols..cols + rows).collect();
        Lp { rows, cols, tableau, basis }
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.tableau[row][col].clone();
        for v in &mut self.tableau[row] {
            *v /= p.clone();
        }
        let pivot_row = self.tableau[row].clone();
        for i in 0..self.rows {
            if i == row {
                continue;
            }
            let factor = self.tableau[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in self.tableau[i].iter_mut().zip(&pivot_row) {
                *v -= factor.clone() * pv;
            }
        }
        self.basis[row] = col;
    }

    /// Runs the simplex on the given objective (maximization), restricted to
    /// variable indices `< limit`. Returns false if unbounded.
    fn optimize(&mut self, obj: &[BigRational], limit: usize) -> bool {
        loop {
            // reduced costs via the basis multipliers: d_j = c_j - y·A_j
            // computed directly from the tableau: d_j = c_j - sum_i c_B(i) * T[i][j]
            let cb: Vec<BigRational> = self
                .basis
                .iter()
                .map(|&b| if b < obj.len() { obj[b].clone() } else { BigRational::zero() })
                .collect();
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = if j < obj.len() { obj[j].clone() } else { BigRational::zero() };
                for i in 0..self.rows {
                    if !self.tableau[i][j].is_zero() && !cb[i].is_zero() {
                        d -= cb[i].clone() * self.tableau[i][j].clone();
                    }
                }
                if d.is_positive() {
                    entering = Some(j); // Bland: first improving index
                    break;
                }
            }
            let Some(col) = entering else { return true };
            // ratio test, Bland tie-break on the leaving basis variable index
            let rhs = self.cols + self.rows;
            let mut leave: Option<(usize, BigRational)> = None;
            for i in 0..self.rows {
                if self.tableau[i][col].is_positive() {
                    let ratio = self.tableau[i][rhs].clone() / self.tableau[i][col].clone();
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
            }
            let Some((row, _)) = leave else { return false };
            self.pivot(row, col);
        }
    }

    pub fn solve_max(mut self, objective: &[BigRational]) -> LpOutcome {
        let rhs = self.cols + self.rows;
        // phase 1: maximize -sum(artificials)
        let mut phase1 = vec![BigRational::zero(); self.cols + self.rows];
        for j in self.cols..self.cols + self.rows {
            phase1[j] = -BigRational::one();
        }
        self.optimize(&phase1, self.cols + self.rows);
        let infeas: BigRational = (0..self.rows)
            .filter(|&i| self.basis[i] >= self.cols)
            .map(|i| self.tableau[i][rhs].clone())
            .sum();
        if !infeas.is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive leftover zero-valued artificials out of the basis where possible
        for i in 0..self.rows {
            if self.basis[i] >= self.cols {
                if let Some(j) = (0..self.cols).find(|&j| !self.tableau[i][j].is_zero()) {
                    self.pivot(i, j);
                }
                // otherwise the row is redundant; the artificial stays at zero
            }
        }
        // phase 2 over structural variables only
        if !self.optimize(objective, self.cols) {
            return LpOutcome::Unbounded;
        }
        let mut solution = vec![BigRational::zero(); self.cols];
        for i in 0..self.rows {
            if self.basis[i] < self.cols {
                solution[self.basis[i]] = self.tableau[i][rhs].clone();
            }
        }
        let objective_value: BigRational =
            solution.iter().zip(objective).map(|(x, c)| x.clone() * c).sum();
        LpOutcome::Optimal { objective: objective_value, solution }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn rr(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn convex_combination_program() {
        // weights on points 0, 1, 2 with mean 3/4; maximize value at point 1
        let a = vec![vec![r(1), r(1), r(1)], vec![r(0), r(1), r(2)]];
        let b = vec![r(1), rr(3, 4)];
        let obj = vec![r(0), r(1), r(0)];
        match Lp::new(a, b).solve_max(&obj) {
            LpOutcome::Optimal { objective, solution } => {
                assert_eq!(objective, rr(3, 4));
                assert_eq!(solution[1], rr(3, 4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible() {
        // x1 + x2 = 1 and x1 + x2 = 2 cannot both hold
        let a = vec![vec![r(1), r(1)], vec![r(1), r(1)]];
        let b = vec![r(1), r(2)];
        assert_eq!(Lp::new(a, b).solve_max(&[r(1), r(1)]), LpOutcome::Infeasible);
    }

    #[test]
    fn tolerates_redundant_rows() {
        let a = vec![vec![r(1), r(1)], vec![r(2), r(2)]];
        let b = vec![r(1), r(2)];
        match Lp::new(a, b).solve_max(&[r(2), r(1)]) {
            LpOutcome::Optimal { objective, .. } => assert_eq!(objective, r(2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_rows_are_normalized() {
        let a = vec![vec![r(-1), r(0)], vec![r(0), r(1)]];
        let b = vec![r(-2), r(3)];
        match Lp::new(a, b).solve_max(&[r(0), r(0)]) {
            LpOutcome::Optimal { solution, .. } => {
                assert_eq!(solution[0], r(2));
                assert_eq!(solution[1], r(3));
            }
            other => panic!("{other:?}"),
        }
    }
}

//! Exact two-phase simplex over the rationals (Bland's rule), for LP relaxations.

use num::rational::BigRational;
use num::{One, Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

/// `min c·x` subject to `rows` and `x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub vars: usize,
    pub objective: Vec<BigRational>,
    pub rows: Vec<(Vec<(usize, BigRational)>, Sense, BigRational)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

impl LinearProgram {
    pub fn new(vars: usize, objective: Vec<BigRational>) -> Self {
        Self { vars, objective, rows: Vec::new() }
    }

    pub fn add_row(&mut self, coefficients: Vec<(usize, BigRational)>, sense: Sense, rhs: BigRational) {
        self.rows.push((coefficients, sense, rhs));
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).run(&self.objective, self.vars)
    }
}

struct Tableau {
    /// Rows `[a_1 … a_total | rhs]`.
    rows: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    total: usize,
    artificial_start: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let m = lp.rows.len();
        let slack_count = lp.rows.iter().filter(|(_, s, _)| *s != Sense::Eq).count();
        let artificial_start = lp.vars + slack_count;
        let total = artificial_start + m;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut slack = lp.vars;
        for (i, (coeffs, sense, rhs)) in lp.rows.iter().enumerate() {
            let mut row = vec![BigRational::zero(); total + 1];
            for (j, a) in coeffs {
                row[*j] += a;
            }
            if *sense != Sense::Eq {
                row[slack] = if *sense == Sense::Le { BigRational::one() } else { -BigRational::one() };
                slack += 1;
            }
            row[total] = rhs.clone();
            if rhs.is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            row[artificial_start + i] = BigRational::one();
            basis.push(artificial_start + i);
            rows.push(row);
        }
        Self { rows, basis, total, artificial_start }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        self.rows[r].iter_mut().for_each(|x| *x /= &p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimizes `cost` over the columns `< limit`; `false` when unbounded.
    fn optimize(&mut self, cost: &[BigRational], limit: usize) -> bool {
        loop {
            let reduced = |j: usize, t: &Self| -> BigRational {
                let mut z = cost.get(j).cloned().unwrap_or_else(BigRational::zero);
                for (row, &b) in t.rows.iter().zip(&t.basis) {
                    if let Some(cb) = cost.get(b) {
                        if !cb.is_zero() && !row[j].is_zero() {
                            z -= cb * &row[j];
                        }
                    }
                }
                z
            };
            let entering = (0..limit).find(|&j| !self.basis.contains(&j) && reduced(j, self).is_negative());
            let Some(c) = entering else { return true };
            let mut leaving: Option<(usize, BigRational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c].is_positive() {
                    let ratio = &row[self.total] / &row[c];
                    let better = match &leaving {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leaving = Some((i, ratio));
                    }
                }
            }
            match leaving {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }

    fn run(mut self, objective: &[BigRational], vars: usize) -> LpOutcome {
        let mut phase1 = vec![BigRational::zero(); self.total];
        for c in phase1.iter_mut().skip(self.artificial_start) {
            *c = BigRational::one();
        }
        self.optimize(&phase1, self.total);
        let infeasibility: BigRational = self
            .basis
            .iter()
            .zip(&self.rows)
            .filter(|(&b, _)| b >= self.artificial_start)
            .map(|(_, row)| row[self.total].clone())
            .sum();
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }
        // drive remaining (zero-level) artificials out of the basis, dropping redundant rows
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.artificial_start {
                match (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero()) {
                    Some(j) => self.pivot(i, j),
                    None => {
                        self.rows.remove(i);
                        self.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        let mut cost = vec![BigRational::zero(); self.artificial_start];
        cost[..vars].clone_from_slice(&objective[..vars]);
        if !self.optimize(&cost, self.artificial_start) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![BigRational::zero(); vars];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < vars {
                x[b] = row[self.total].clone();
            }
        }
        let value = x.iter().zip(objective).map(|(a, c)| a * c).sum();
        LpOutcome::Optimal { value, x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::BigInt;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn frac(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_programs() {
        // min -x - y, x + 2y <= 4, 3x + y <= 6
        let mut lp = LinearProgram::new(2, vec![q(-1), q(-1)]);
        lp.add_row(vec![(0, q(1)), (1, q(2))], Sense::Le, q(4));
        lp.add_row(vec![(0, q(3)), (1, q(1))], Sense::Le, q(6));
        match lp.solve() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, frac(-14, 5));
                assert_eq!(x, vec![frac(8, 5), frac(6, 5)]);
            }
            other => panic!("{other:?}"),
        }

        let mut lp = LinearProgram::new(1, vec![q(1)]);
        lp.add_row(vec![(0, q(1))], Sense::Ge, q(3));
        lp.add_row(vec![(0, q(1))], Sense::Le, q(2));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);

        let mut lp = LinearProgram::new(1, vec![q(-1)]);
        lp.add_row(vec![(0, q(1))], Sense::Ge, q(1));
        assert_eq!(lp.solve(), LpOutcome::Unbounded);

        // |a| relaxation: a = p - q = -3/2 with redundant equality
        let mut lp = LinearProgram::new(2, vec![q(1), q(1)]);
        lp.add_row(vec![(0, q(1)), (1, q(-1))], Sense::Eq, frac(-3, 2));
        lp.add_row(vec![(0, q(2)), (1, q(-2))], Sense::Eq, q(-3));
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, frac(3, 2)),
            other => panic!("{other:?}"),
        }
    }
}

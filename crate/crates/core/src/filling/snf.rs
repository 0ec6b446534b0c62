//! Smith normal form over the integers and exact solving of `A x = b`.

use crate::error::{QlabError, Result};

type Matrix = Vec<Vec<i128>>;

fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

fn checked_axpy(target: &mut [i128], source: &[i128], q: i128) -> Result<()> {
    for (t, s) in target.iter_mut().zip(source) {
        *t = s.checked_mul(q).and_then(|v| t.checked_sub(v)).ok_or(QlabError::Overflow)?;
    }
    Ok(())
}

/// `U A V = D` with `U`, `V` unimodular and `D` diagonal with `d_1 | d_2 | …`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix,
    pub v: Matrix,
    pub diagonal: Vec<i128>,
    pub rows: usize,
    pub cols: usize,
}

impl SmithForm {
    pub fn new(a: &[Vec<i64>], cols: usize) -> Result<Self> {
        let rows = a.len();
        let mut d: Matrix = a.iter().map(|r| r.iter().map(|&x| i128::from(x)).collect()).collect();
        let mut u = identity(rows);
        // V is kept transposed so column operations become row operations.
        let mut vt = identity(cols);
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = min_nonzero(&d, t) else { break };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            vt.swap(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if d[i][t] != 0 {
                        let q = d[i][t].div_euclid(d[t][t]);
                        let (src, dst) = pair(&mut d, t, i);
                        checked_axpy(dst, src, q)?;
                        let (src, dst) = pair(&mut u, t, i);
                        checked_axpy(dst, src, q)?;
                        dirty |= d[i][t] != 0;
                    }
                }
                for j in t + 1..cols {
                    if d[t][j] != 0 {
                        let q = d[t][j].div_euclid(d[t][t]);
                        for row in d.iter_mut() {
                            row[j] = row[t].checked_mul(q).and_then(|v| row[j].checked_sub(v)).ok_or(QlabError::Overflow)?;
                        }
                        let (src, dst) = pair(&mut vt, t, j);
                        checked_axpy(dst, src, q)?;
                        dirty |= d[t][j] != 0;
                    }
                }
                if !dirty {
                    // divisibility: fold a row with a non-multiple into row t and continue
                    let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| d[i][j] % d[t][t] != 0));
                    match bad {
                        None => break,
                        Some(i) => {
                            let (src, dst) = pair(&mut d, i, t);
                            checked_axpy(dst, src, -1)?;
                            let (src, dst) = pair(&mut u, i, t);
                            checked_axpy(dst, src, -1)?;
                        }
                    }
                }
                if let Some((pi, pj)) = min_nonzero_cross(&d, t) {
                    d.swap(t, pi);
                    u.swap(t, pi);
                    swap_cols(&mut d, t, pj);
                    vt.swap(t, pj);
                }
            }
            if d[t][t] < 0 {
                d[t].iter_mut().for_each(|x| *x = -*x);
                u[t].iter_mut().for_each(|x| *x = -*x);
            }
            t += 1;
        }
        let diagonal = (0..t).map(|i| d[i][i]).collect();
        let v = (0..cols).map(|i| (0..cols).map(|j| vt[j][i]).collect()).collect();
        Ok(Self { u, v, diagonal, rows, cols })
    }

    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// A basis of `ker A` over the integers: the last `cols - rank` columns of `V`.
    pub fn kernel_basis(&self) -> Vec<Vec<i128>> {
        (self.rank()..self.cols).map(|j| self.v.iter().map(|row| row[j]).collect()).collect()
    }
}

fn pair(m: &mut Matrix, src: usize, dst: usize) -> (&[i128], &mut [i128]) {
    if src < dst {
        let (a, b) = m.split_at_mut(dst);
        (&a[src], &mut b[0])
    } else {
        let (a, b) = m.split_at_mut(src);
        (&b[0], &mut a[dst])
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

fn min_nonzero(d: &Matrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in d.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.map_or(true, |(bi, bj)| x.abs() < d[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t` if it beats the pivot.
fn min_nonzero_cross(d: &Matrix, t: usize) -> Option<(usize, usize)> {
    let mut best = (t, t);
    let rows = (t + 1..d.len()).map(|i| (i, t));
    let cols = (t + 1..d[t].len()).map(|j| (t, j));
    for (i, j) in rows.chain(cols) {
        if d[i][j] != 0 && d[i][j].abs() < d[best.0][best.1].abs() {
            best = (i, j);
        }
    }
    (best != (t, t)).then_some(best)
}

/// Exact integer solver for `A x = b` built from a Smith form of `A`.
#[derive(Clone, Debug)]
pub struct IntegerSolver {
    smith: SmithForm,
}

impl IntegerSolver {
    pub fn new(a: &[Vec<i64>], cols: usize) -> Result<Self> {
        Ok(Self { smith: SmithForm::new(a, cols)? })
    }

    pub fn smith(&self) -> &SmithForm {
        &self.smith
    }

    pub fn kernel_is_trivial(&self) -> bool {
        self.smith.rank() == self.smith.cols
    }

    /// An integer solution, or `None` when `A x = b` has none over the integers.
    pub fn solve(&self, b: &[i64]) -> Result<Option<Vec<i128>>> {
        let sparse: Vec<(usize, i64)> = b.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, &x)| (i, x)).collect();
        self.solve_sparse(&sparse)
    }

    /// As [`solve`](Self::solve) with `b` given by its nonzero entries.
    pub fn solve_sparse(&self, b: &[(usize, i64)]) -> Result<Option<Vec<i128>>> {
        let s = &self.smith;
        let mut y = vec![0i128; s.cols];
        for (i, row) in s.u.iter().enumerate() {
            let mut c: i128 = 0;
            for &(k, x) in b {
                c = row[k].checked_mul(i128::from(x)).and_then(|v| c.checked_add(v)).ok_or(QlabError::Overflow)?;
            }
            if i < s.rank() {
                if c % s.diagonal[i] != 0 {
                    return Ok(None);
                }
                y[i] = c / s.diagonal[i];
            } else if c != 0 {
                return Ok(None);
            }
        }
        let mut x = vec![0i128; s.cols];
        for (j, &yj) in y.iter().enumerate().filter(|(_, y)| **y != 0) {
            for (i, row) in s.v.iter().enumerate() {
                x[i] = row[j].checked_mul(yj).and_then(|v| x[i].checked_add(v)).ok_or(QlabError::Overflow)?;
            }
        }
        Ok(Some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mul(a: &[Vec<i64>], x: &[i128]) -> Vec<i128> {
        a.iter().map(|r| r.iter().zip(x).map(|(&p, q)| i128::from(p) * q).sum()).collect()
    }

    #[test]
    fn smith_of_small_matrix() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        let s = SmithForm::new(&a, 3).unwrap();
        assert_eq!(s.diagonal, vec![2, 6, 12]);
    }

    #[test]
    fn divisibility_obstruction() {
        let solver = IntegerSolver::new(&[vec![2, 0], vec![0, 3]], 2).unwrap();
        assert_eq!(solver.solve(&[4, 9]).unwrap(), Some(vec![2, 3]));
        assert_eq!(solver.solve(&[1, 0]).unwrap(), None);
        let solver = IntegerSolver::new(&[vec![1, 1]], 2).unwrap();
        assert!(!solver.kernel_is_trivial());
        assert_eq!(solver.smith().kernel_basis().len(), 1);
    }

    proptest! {
        #[test]
        fn factorization_and_solutions(
            a in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 4), 3),
            x in proptest::collection::vec(-5i128..=5, 4),
        ) {
            let s = SmithForm::new(&a, 4).unwrap();
            // U A V = D
            for i in 0..3 {
                for j in 0..4 {
                    let mut e: i128 = 0;
                    for k in 0..3 {
                        for l in 0..4 {
                            e += s.u[i][k] * i128::from(a[k][l]) * s.v[l][j];
                        }
                    }
                    let want = if i == j && i < s.rank() { s.diagonal[i] } else { 0 };
                    prop_assert_eq!(e, want);
                }
            }
            for w in s.diagonal.windows(2) {
                prop_assert_eq!(w[1] % w[0], 0);
            }
            let b: Vec<i64> = mul(&a, &x).into_iter().map(|v| v as i64).collect();
            let solver = IntegerSolver::new(&a, 4).unwrap();
            let sol = solver.solve(&b).unwrap().expect("b is in the image");
            prop_assert_eq!(mul(&a, &sol), b.iter().map(|&v| i128::from(v)).collect::<Vec<_>>());
            for k in s.kernel_basis() {
                prop_assert!(mul(&a, &k).iter().all(|&v| v == 0));
            }
        }
    }
}

//! Minimal integral fillings, Dehn functions of finite complexes and van Kampen area.

pub mod dehn;
pub mod lp;
pub mod simplicial;
pub mod snf;
pub mod vankampen;

use num::rational::BigRational;
use num::{BigInt, One, Signed, ToPrimitive, Zero};

use crate::error::{QlabError, Result};
use lp::{LinearProgram, LpOutcome, Sense};
pub use dehn::{dehn_profile, DehnOptions, DehnProfile, DehnRow};
pub use simplicial::{boundary_chain, ComplexFile, FiniteSimplicialComplex, IntegralChain, Simplex};
use snf::IntegerSolver;
pub use vankampen::{vankampen_area, Presentation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FillingOutcome {
    Filled(IntegralChain),
    /// No integral chain has boundary `b`.
    NotABoundary,
    /// `b` is a boundary, but no filling fits in the coefficient box.
    OutOfBox,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FillingResult {
    pub outcome: FillingOutcome,
    /// Optimum of the linear relaxation at the root.
    pub lp_bound: Option<BigRational>,
    pub nodes: u64,
}

impl FillingResult {
    /// `l_f(b)`: the ℓ¹ size of the minimal filling.
    pub fn length(&self) -> Option<u64> {
        match &self.outcome {
            FillingOutcome::Filled(a) => Some(a.size()),
            _ => None,
        }
    }
}

/// Fills `N`-cycles of one complex; the integer solver for `∂_{N+1}` is built once.
#[derive(Clone, Debug)]
pub struct Filler<'a> {
    complex: &'a FiniteSimplicialComplex,
    order: usize,
    columns: Vec<Vec<(usize, i64)>>,
    solver: IntegerSolver,
}

impl<'a> Filler<'a> {
    pub fn new(complex: &'a FiniteSimplicialComplex, order: usize) -> Result<Self> {
        if complex.dim().map_or(true, |d| d < order + 1) {
            return Err(QlabError::InvalidParameter(format!("complex has no simplices of dimension {}", order + 1)));
        }
        let columns = complex.boundary_columns(order + 1);
        let matrix = complex.boundary_matrix(order + 1);
        let solver = IntegerSolver::new(&matrix, columns.len())?;
        Ok(Self { complex, order, columns, solver })
    }

    pub fn complex(&self) -> &FiniteSimplicialComplex {
        self.complex
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Minimal filling of the cycle `b` with coefficients in `[-bound, bound]`.
    pub fn fill(&self, b: &IntegralChain, bound: i64) -> Result<FillingResult> {
        if b.dim() != self.order {
            return Err(QlabError::DegreeMismatch { expected: self.order, got: b.dim() });
        }
        if self.order > 0 && !boundary_chain(self.complex, b)?.is_zero() {
            return Err(QlabError::NotACycle);
        }
        let mut sparse = Vec::with_capacity(b.coefficients().len());
        for (s, c) in b.coefficients() {
            let i = self.complex.index_of(s).ok_or_else(|| QlabError::UnknownSimplex(s.clone()))?;
            sparse.push((i, *c));
        }
        self.fill_indexed(&sparse, bound)
    }

    /// As [`fill`](Self::fill) for a cycle given by `(simplex index, coefficient)` pairs.
    pub fn fill_indexed(&self, b: &[(usize, i64)], bound: i64) -> Result<FillingResult> {
        if b.is_empty() {
            return Ok(FillingResult {
                outcome: FillingOutcome::Filled(IntegralChain::zero(self.order + 1)),
                lp_bound: Some(BigRational::zero()),
                nodes: 0,
            });
        }
        let Some(x0) = self.solver.solve_sparse(b)? else {
            return Ok(FillingResult { outcome: FillingOutcome::NotABoundary, lp_bound: None, nodes: 0 });
        };
        if self.solver.kernel_is_trivial() {
            let fits = x0.iter().all(|x| x.abs() <= i128::from(bound));
            let size: i128 = x0.iter().map(|x| x.abs()).sum();
            let outcome = if fits { FillingOutcome::Filled(self.chain(&x0)?) } else { FillingOutcome::OutOfBox };
            return Ok(FillingResult { outcome, lp_bound: Some(BigRational::from_integer(BigInt::from(size))), nodes: 1 });
        }
        self.branch_and_bound(b, bound, &x0)
    }

    fn chain(&self, x: &[i128]) -> Result<IntegralChain> {
        let simplices = self.complex.simplices(self.order + 1);
        let mut out = IntegralChain::zero(self.order + 1);
        for (j, &c) in x.iter().enumerate().filter(|(_, c)| **c != 0) {
            out.add_term(simplices[j].clone(), i64::try_from(c).map_err(|_| QlabError::Overflow)?)?;
        }
        Ok(out)
    }

    /// LP over `p, q ∈ [0, bound]` with `∂(p - q) = b`, minimizing `Σ p + q`.
    fn relaxation(&self, b: &[(usize, i64)], bound: i64, branches: &[(usize, Sense, i64)]) -> LpOutcome {
        let n = self.columns.len();
        let int = |v: i64| BigRational::from_integer(BigInt::from(v));
        let mut lp = LinearProgram::new(2 * n, vec![BigRational::one(); 2 * n]);
        let rows = self.complex.simplices(self.order).len();
        let mut equations: Vec<Vec<(usize, BigRational)>> = vec![Vec::new(); rows];
        for (j, col) in self.columns.iter().enumerate() {
            for &(i, s) in col {
                equations[i].push((j, int(s)));
                equations[i].push((n + j, int(-s)));
            }
        }
        let mut rhs = vec![0i64; rows];
        for &(i, c) in b {
            rhs[i] = c;
        }
        for (eq, r) in equations.into_iter().zip(rhs) {
            if !eq.is_empty() || r != 0 {
                lp.add_row(eq, Sense::Eq, int(r));
            }
        }
        for j in 0..2 * n {
            lp.add_row(vec![(j, BigRational::one())], Sense::Le, int(bound));
        }
        for &(j, sense, v) in branches {
            lp.add_row(vec![(j, BigRational::one()), (n + j, -BigRational::one())], sense, int(v));
        }
        lp.solve()
    }

    fn branch_and_bound(&self, b: &[(usize, i64)], bound: i64, x0: &[i128]) -> Result<FillingResult> {
        let n = self.columns.len();
        let mut best: Option<(u64, Vec<i128>)> = None;
        if x0.iter().all(|x| x.abs() <= i128::from(bound)) {
            best = Some((x0.iter().map(|x| x.unsigned_abs() as u64).sum(), x0.to_vec()));
        }
        let mut root_bound = None;
        let mut nodes = 0u64;
        let mut stack: Vec<Vec<(usize, Sense, i64)>> = vec![Vec::new()];
        while let Some(branches) = stack.pop() {
            nodes += 1;
            let LpOutcome::Optimal { value, x } = self.relaxation(b, bound, &branches) else {
                continue;
            };
            if branches.is_empty() {
                root_bound = Some(value.clone());
            }
            let floor_bound = value.ceil().to_integer().to_u64().unwrap_or(u64::MAX);
            if best.as_ref().is_some_and(|(v, _)| floor_bound >= *v) {
                continue;
            }
            let a: Vec<BigRational> = (0..n).map(|j| &x[j] - &x[n + j]).collect();
            match a.iter().position(|v| !v.is_integer()) {
                None => {
                    let xs: Vec<i128> = a.iter().map(|v| v.to_integer().to_i128().expect("bounded")).collect();
                    let size: u64 = xs.iter().map(|v| v.unsigned_abs() as u64).sum();
                    if best.as_ref().map_or(true, |(v, _)| size < *v) {
                        best = Some((size, xs));
                    }
                }
                Some(j) => {
                    let lo = a[j].floor().to_integer().to_i64().ok_or(QlabError::Overflow)?;
                    let mut up = branches.clone();
                    up.push((j, Sense::Ge, lo + 1));
                    let mut down = branches;
                    down.push((j, Sense::Le, lo));
                    stack.push(up);
                    stack.push(down);
                }
            }
        }
        let outcome = match best {
            Some((_, x)) => FillingOutcome::Filled(self.chain(&x)?),
            None => FillingOutcome::OutOfBox,
        };
        Ok(FillingResult { outcome, lp_bound: root_bound, nodes })
    }
}

/// Minimal filling of `b` in `k` with per-simplex coefficients in `[-coeff_bound, coeff_bound]`.
pub fn min_filling(k: &FiniteSimplicialComplex, b: &IntegralChain, coeff_bound: i64) -> Result<FillingResult> {
    if coeff_bound < 1 {
        return Err(QlabError::InvalidParameter("coefficient bound must be >= 1".into()));
    }
    Filler::new(k, b.dim())?.fill(b, coeff_bound)
}

/// `∂` of the `width × height` block of squares with lower-left corner `(x, y)` in `grid(w, _)`.
pub fn block_boundary(grid_width: usize, x: usize, y: usize, width: usize, height: usize) -> IntegralChain {
    let id = |i: usize, j: usize| j * (grid_width + 1) + i;
    let mut loop_ = IntegralChain::zero(1);
    let mut push = |a: usize, b: usize| loop_.add_term(vec![a, b], 1).expect("edge");
    for i in x..x + width {
        push(id(i, y), id(i + 1, y));
        push(id(i + 1, y + height), id(i, y + height));
    }
    for j in y..y + height {
        push(id(x + width, j), id(x + width, j + 1));
        push(id(x, j + 1), id(x, j));
    }
    loop_
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_and_zero() {
        let k = FiniteSimplicialComplex::from_maximal(&[vec![0, 1, 2]]).unwrap();
        let tri = IntegralChain::from_terms(2, [(vec![0, 1, 2], 1)]).unwrap();
        let b = boundary_chain(&k, &tri).unwrap();
        let r = min_filling(&k, &b, 1).unwrap();
        assert_eq!(r.outcome, FillingOutcome::Filled(tri));
        assert_eq!(r.length(), Some(1));
        assert_eq!(min_filling(&k, &IntegralChain::zero(1), 1).unwrap().length(), Some(0));
    }

    #[test]
    fn grid_square_needs_eight() {
        let k = FiniteSimplicialComplex::grid(6, 6);
        let b = block_boundary(6, 2, 2, 2, 2);
        assert_eq!(b.size(), 8);
        let r = min_filling(&k, &b, 8).unwrap();
        assert_eq!(r.length(), Some(8));
        let FillingOutcome::Filled(a) = r.outcome else { panic!() };
        assert_eq!(boundary_chain(&k, &a).unwrap(), b);
        let r = min_filling(&k, &b.add(&b).unwrap(), 1).unwrap();
        assert_eq!(r.outcome, FillingOutcome::OutOfBox);
    }

    #[test]
    fn not_a_cycle_and_not_a_boundary() {
        let k = FiniteSimplicialComplex::grid(2, 2);
        let edge = IntegralChain::from_terms(1, [(vec![0, 1], 1)]).unwrap();
        assert!(matches!(min_filling(&k, &edge, 3), Err(QlabError::NotACycle)));
        // annulus: a 3x3 grid with the centre square removed
        let full = FiniteSimplicialComplex::grid(3, 3);
        let centre = [vec![5, 6, 10], vec![5, 9, 10]];
        let maximal: Vec<Simplex> = full.simplices(2).iter().filter(|s| !centre.contains(s)).cloned().collect();
        let annulus = FiniteSimplicialComplex::from_maximal(&maximal).unwrap();
        let hole = block_boundary(3, 1, 1, 1, 1);
        let r = min_filling(&annulus, &hole, 5).unwrap();
        assert_eq!(r.outcome, FillingOutcome::NotABoundary);
        assert_eq!(min_filling(&full, &hole, 5).unwrap().length(), Some(2));
    }

    #[test]
    fn sphere_uses_branch_and_bound() {
        // boundary of a tetrahedron: every 1-cycle has two fillings
        let faces = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let k = FiniteSimplicialComplex::from_maximal(&faces).unwrap();
        let tri = IntegralChain::from_terms(2, [(vec![0, 1, 2], 1)]).unwrap();
        let b = boundary_chain(&k, &tri).unwrap();
        let r = min_filling(&k, &b, 2).unwrap();
        assert_eq!(r.length(), Some(1));
        let lp = r.lp_bound.unwrap();
        assert!(lp <= BigRational::one());
        // a square around the sphere: two triangles either way
        let sq = IntegralChain::from_terms(2, [(vec![0, 1, 2], 1), (vec![0, 2, 3], 1)]).unwrap();
        let b = boundary_chain(&k, &sq).unwrap();
        let r = min_filling(&k, &b, 2).unwrap();
        assert_eq!(r.length(), Some(2));
        let FillingOutcome::Filled(a) = r.outcome else { panic!() };
        assert_eq!(boundary_chain(&k, &a).unwrap(), b);
    }
}

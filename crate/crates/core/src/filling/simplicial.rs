//! Finite simplicial complexes and integral chains.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{QlabError, Result};

/// Sorted vertex list; the orientation is the one induced by the vertex order.
pub type Simplex = Vec<usize>;

#[derive(Clone, Debug)]
pub struct FiniteSimplicialComplex {
    vertex_count: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl FiniteSimplicialComplex {
    /// The complex generated by `maximal`; all faces are added.
    pub fn from_maximal(maximal: &[Simplex]) -> Result<Self> {
        let mut by_dim: Vec<BTreeSet<Simplex>> = Vec::new();
        for s in maximal {
            let mut s = s.clone();
            s.sort_unstable();
            if s.is_empty() || s.windows(2).any(|w| w[0] == w[1]) {
                return Err(QlabError::Parse(format!("invalid simplex {s:?}")));
            }
            for mask in 1u64..(1u64 << s.len()) {
                let face: Simplex = s.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| *v).collect();
                let d = face.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, BTreeSet::new);
                }
                by_dim[d].insert(face);
            }
        }
        let vertex_count = by_dim.first().and_then(|v| v.iter().last()).map_or(0, |v| v[0] + 1);
        let simplices: Vec<Vec<Simplex>> = by_dim.into_iter().map(|s| s.into_iter().collect()).collect();
        let index = simplices
            .iter()
            .map(|list| list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        Ok(Self { vertex_count, simplices, index })
    }

    /// The standard triangulation of a `width × height` block of unit squares.
    ///
    /// Vertex `(i, j)` has id `j·(width+1) + i`; each square is cut along the diagonal from
    /// `(i, j)` to `(i+1, j+1)`.
    pub fn grid(width: usize, height: usize) -> Self {
        let id = |i: usize, j: usize| j * (width + 1) + i;
        let mut maximal = Vec::new();
        for j in 0..height {
            for i in 0..width {
                maximal.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
                maximal.push(vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
            }
        }
        Self::from_maximal(&maximal).expect("grid simplices are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top dimension; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        self.index.get(d)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    /// Columns of `∂_d`: for each `d`-simplex the list of `(face index, sign)`.
    pub fn boundary_columns(&self, d: usize) -> Vec<Vec<(usize, i64)>> {
        if d == 0 {
            return vec![Vec::new(); self.simplices(0).len()];
        }
        self.simplices(d)
            .iter()
            .map(|s| faces(s).map(|(f, sign)| (self.index_of(&f).expect("faces present"), sign)).collect())
            .collect()
    }

    /// Dense matrix of `∂_d` with rows indexed by `(d-1)`-simplices.
    pub fn boundary_matrix(&self, d: usize) -> Vec<Vec<i64>> {
        let rows = if d == 0 { 0 } else { self.simplices(d - 1).len() };
        let mut m = vec![vec![0i64; self.simplices(d).len()]; rows];
        for (j, col) in self.boundary_columns(d).into_iter().enumerate() {
            for (i, sign) in col {
                m[i][j] += sign;
            }
        }
        m
    }

    /// `d`-simplices having `face` as a codimension-one face, with incidence signs.
    pub fn cofaces(&self, face: &[usize]) -> Vec<(Simplex, i64)> {
        self.simplices(face.len())
            .iter()
            .filter_map(|s| faces(s).find(|(f, _)| f == face).map(|(_, sign)| (s.clone(), sign)))
            .collect()
    }
}

/// `(face, (-1)^i)` for the faces of `s` obtained by deleting vertex `i`.
pub fn faces(s: &[usize]) -> impl Iterator<Item = (Simplex, i64)> + '_ {
    (0..s.len()).filter(move |_| s.len() > 1).map(move |i| {
        let mut f = s.to_vec();
        f.remove(i);
        (f, if i % 2 == 0 { 1 } else { -1 })
    })
}

/// A finite integral chain of one dimension.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegralChain {
    dim: usize,
    coefficients: BTreeMap<Simplex, i64>,
}

impl IntegralChain {
    pub fn zero(dim: usize) -> Self {
        Self { dim, coefficients: BTreeMap::new() }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Simplex, i64)>) -> Result<Self> {
        let mut c = Self::zero(dim);
        for (s, a) in terms {
            c.add_term(s, a)?;
        }
        Ok(c)
    }

    /// Adds `a·s`; an unsorted vertex list contributes with the sign of its sorting permutation.
    pub fn add_term(&mut self, mut s: Simplex, a: i64) -> Result<()> {
        if s.len() != self.dim + 1 {
            return Err(QlabError::DegreeMismatch { expected: self.dim + 1, got: s.len() });
        }
        let mut sign = 1;
        for i in 0..s.len() {
            for j in 0..s.len() - 1 - i {
                if s[j] > s[j + 1] {
                    s.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        if s.windows(2).any(|w| w[0] == w[1]) {
            return Ok(());
        }
        let v = self.coefficients.get(&s).copied().unwrap_or(0) + sign * a;
        if v == 0 {
            self.coefficients.remove(&s);
        } else {
            self.coefficients.insert(s, v);
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coefficients(&self) -> &BTreeMap<Simplex, i64> {
        &self.coefficients
    }

    pub fn coefficient(&self, s: &[usize]) -> i64 {
        self.coefficients.get(s).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `|c| = Σ |coefficients|`.
    pub fn size(&self) -> u64 {
        self.coefficients.values().map(|a| a.unsigned_abs()).sum()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (s, a) in &other.coefficients {
            out.add_term(s.clone(), *a)?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Self { dim: self.dim, coefficients: self.coefficients.iter().map(|(s, a)| (s.clone(), -a)).collect() }
    }
}

/// `∂a`, with every simplex checked against `k`.
pub fn boundary_chain(k: &FiniteSimplicialComplex, a: &IntegralChain) -> Result<IntegralChain> {
    for s in a.coefficients().keys() {
        if !k.contains(s) {
            return Err(QlabError::UnknownSimplex(s.clone()));
        }
    }
    if a.dim() == 0 {
        return Err(QlabError::DegreeZero);
    }
    let mut out = IntegralChain::zero(a.dim() - 1);
    for (s, c) in a.coefficients() {
        for (f, sign) in faces(s) {
            out.add_term(f, sign * c)?;
        }
    }
    Ok(out)
}

/// Complex file: a JSON list of maximal simplices, e.g. `[[0,1,2],[1,2,3]]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexFile(pub Vec<Simplex>);

impl ComplexFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_complex(&self) -> Result<FiniteSimplicialComplex> {
        FiniteSimplicialComplex::from_maximal(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn triangle_boundary() {
        let k = FiniteSimplicialComplex::from_maximal(&[vec![0, 1, 2]]).unwrap();
        let a = IntegralChain::from_terms(2, [(vec![0, 1, 2], 1)]).unwrap();
        let b = boundary_chain(&k, &a).unwrap();
        let expected = IntegralChain::from_terms(1, [(vec![1, 2], 1), (vec![0, 2], -1), (vec![0, 1], 1)]).unwrap();
        assert_eq!(b, expected);
        assert!(boundary_chain(&k, &b).unwrap().is_zero());
    }

    #[test]
    fn square_boundary_loop() {
        let k = FiniteSimplicialComplex::grid(1, 1);
        assert_eq!(k.simplices(2).len(), 2);
        assert_eq!(k.simplices(1).len(), 5);
        // vertices 0=(0,0) 1=(1,0) 2=(0,1) 3=(1,1)
        let a = IntegralChain::from_terms(2, [(vec![0, 1, 3], 1), (vec![0, 3, 2], 1)]).unwrap();
        let b = boundary_chain(&k, &a).unwrap();
        let expected = IntegralChain::from_terms(1, [(vec![0, 1], 1), (vec![1, 3], 1), (vec![3, 2], 1), (vec![2, 0], 1)]).unwrap();
        assert_eq!(b, expected);
        assert_eq!(b.size(), 4);
    }

    #[test]
    fn unknown_simplex() {
        let k = FiniteSimplicialComplex::grid(1, 1);
        let a = IntegralChain::from_terms(2, [(vec![0, 1, 2], 1)]).unwrap();
        assert!(matches!(boundary_chain(&k, &a), Err(QlabError::UnknownSimplex(_))));
    }

    #[test]
    fn complex_file() {
        let k = ComplexFile::parse("[[0,1,2,3]]").unwrap().to_complex().unwrap();
        assert_eq!(k.dim(), Some(3));
        assert_eq!(k.simplices(1).len(), 6);
        assert_eq!(k.cofaces(&[0, 1]).len(), 2);
    }

    proptest! {
        #[test]
        fn boundary_squared_vanishes(terms in proptest::collection::vec((0usize..50, -3i64..=3), 1..8)) {
            let k = FiniteSimplicialComplex::grid(5, 5);
            let tris = k.simplices(2);
            let a = IntegralChain::from_terms(2, terms.iter().map(|(i, c)| (tris[*i].clone(), *c))).unwrap();
            let b = boundary_chain(&k, &a).unwrap();
            prop_assert!(boundary_chain(&k, &b).unwrap().is_zero());
        }
    }
}

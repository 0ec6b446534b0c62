//! Equivariant uniformly finite chains over a marked group, their boundary and the
//! polynomially weighted norms.
//!
//! A `G`-equivariant chain is determined by its values on tuples `(e, g₁, …, g_q)`; those
//! normalized representatives are the keys stored here.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QlabError, Result};
use crate::group::{Ball, GroupElement, MarkedGroup};
use crate::kernel::ensure_same_group;
use crate::random::RandomScalar;
use crate::scalar::Scalar;

pub type Tuple = Vec<GroupElement>;

#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantChain<S> {
    group: MarkedGroup,
    degree: usize,
    terms: BTreeMap<Tuple, S>,
}

impl<S: Scalar> EquivariantChain<S> {
    pub fn zero(group: &MarkedGroup, degree: usize) -> Self {
        Self { group: group.clone(), degree, terms: BTreeMap::new() }
    }

    /// The chain `Σ c · orbit(t)`; tuples are normalized on insertion.
    pub fn from_terms(group: &MarkedGroup, degree: usize, terms: impl IntoIterator<Item = (Tuple, S)>) -> Result<Self> {
        let mut chain = Self::zero(group, degree);
        for (t, c) in terms {
            chain.add_term(t, &c)?;
        }
        Ok(chain)
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Tuple, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, tuple: &[GroupElement]) -> S {
        self.terms.get(&normalize(&self.group, tuple)).cloned().unwrap_or_else(S::zero)
    }

    /// Adds `c · orbit(tuple)`.
    pub fn add_term(&mut self, tuple: Tuple, c: &S) -> Result<()> {
        if tuple.len() != self.degree + 1 {
            return Err(QlabError::DegreeMismatch { expected: self.degree + 1, got: tuple.len() });
        }
        let key = normalize(&self.group, &tuple);
        let sum = self.terms.get(&key).map_or_else(|| c.clone(), |a| a.add(c));
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same_group(&self.group, &other.group)?;
        if self.degree != other.degree {
            return Err(QlabError::DegreeMismatch { expected: self.degree, got: other.degree });
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&S::one().neg()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(t, a)| (t.clone(), a.mul(c)))
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Self { group: self.group.clone(), degree: self.degree, terms }
    }

    /// `∂(g₀, …, g_q) = Σ_j (-1)^j (g₀, …, ĝ_j, …, g_q)`.
    pub fn boundary(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(QlabError::DegreeZero);
        }
        let mut out = Self::zero(&self.group, self.degree - 1);
        let minus = S::one().neg();
        for (t, c) in &self.terms {
            let negated = c.mul(&minus);
            for j in 0..t.len() {
                let mut face = t.clone();
                face.remove(j);
                out.add_term(face, if j % 2 == 0 { c } else { &negated })?;
            }
        }
        Ok(out)
    }

    /// `‖c‖_n = Σ |a_ḡ| diam(ḡ)ⁿ` over normalized tuples, with `0⁰ = 1`.
    pub fn weighted_norm(&self, n: u32) -> f64 {
        self.terms
            .iter()
            .map(|(t, c)| c.modulus() * weight(diam(&self.group, t), n))
            .sum()
    }

    /// `‖c‖_n + ‖∂c‖_n`; degree-0 chains have no boundary term.
    pub fn frechet_seminorm(&self, n: u32) -> f64 {
        let boundary = if self.degree == 0 { 0.0 } else { self.boundary().map(|b| b.weighted_norm(n)).unwrap_or(0.0) };
        self.weighted_norm(n) + boundary
    }
}

fn weight(d: u32, n: u32) -> f64 {
    if n == 0 {
        1.0
    } else {
        f64::from(d).powi(n as i32)
    }
}

/// Left-translates `tuple` so that its first entry is `e`.
pub fn normalize(group: &MarkedGroup, tuple: &[GroupElement]) -> Tuple {
    match tuple.first() {
        None => Vec::new(),
        Some(first) => {
            let shift = group.inverse(first);
            tuple.iter().map(|g| group.multiply(&shift, g)).collect()
        }
    }
}

/// Largest pairwise distance in the tuple.
pub fn diam(group: &MarkedGroup, tuple: &[GroupElement]) -> u32 {
    let mut best = 0;
    for (i, g) in tuple.iter().enumerate() {
        for h in &tuple[i + 1..] {
            best = best.max(group.distance(g, h));
        }
    }
    best
}

/// A chain with up to `max_terms` orbits whose tuple entries are drawn from `pool`.
pub fn random_chain<S: RandomScalar, R: Rng>(
    group: &MarkedGroup,
    pool: &Ball,
    degree: usize,
    max_terms: usize,
    rng: &mut R,
) -> EquivariantChain<S> {
    let elements: Vec<&GroupElement> = pool.elements().iter().map(|(g, _)| g).collect();
    let mut chain = EquivariantChain::zero(group, degree);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let mut tuple = vec![group.identity()];
        tuple.extend((0..degree).map(|_| (*elements.choose(rng).expect("nonempty pool")).clone()));
        chain.add_term(tuple, &S::sample(rng)).expect("degree matches");
    }
    chain
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainTermRecord {
    pub tuple: Vec<String>,
    pub re: f64,
    pub im: f64,
}

/// `{ "group": …, "degree": q, "terms": [ { "tuple": ["", "a", "a b"], "re": 1, "im": 0 } ] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainFile {
    pub group: String,
    pub degree: usize,
    pub terms: Vec<ChainTermRecord>,
}

impl ChainFile {
    pub fn from_chain<S: Scalar>(chain: &EquivariantChain<S>) -> Self {
        let g = chain.group();
        let terms = chain
            .terms()
            .iter()
            .map(|(t, c)| {
                let z = c.to_c64();
                ChainTermRecord { tuple: t.iter().map(|x| g.format_element(x)).collect(), re: z.re, im: z.im }
            })
            .collect();
        Self { group: g.descriptor(), degree: chain.degree(), terms }
    }

    pub fn to_chain<S: Scalar>(&self, group: &MarkedGroup) -> Result<EquivariantChain<S>> {
        let mut chain = EquivariantChain::zero(group, self.degree);
        for term in &self.terms {
            let tuple = term.tuple.iter().map(|w| group.parse_element(w)).collect::<Result<Tuple>>()?;
            if tuple.first() != Some(&group.identity()) {
                return Err(QlabError::Parse("first tuple entry must be the identity".into()));
            }
            chain.add_term(tuple, &S::from_c64(num::complex::Complex64::new(term.re, term.im)))?;
        }
        Ok(chain)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::trial_rng;
    use crate::scalar::GaussianRational as Q;
    use proptest::prelude::*;

    fn z(k: &[i64]) -> GroupElement {
        GroupElement::Abelian(k.to_vec())
    }

    #[test]
    fn orbit_of_edge_is_cycle() {
        let g = MarkedGroup::parse("Z^1").unwrap();
        let c = EquivariantChain::from_terms(&g, 1, [(vec![z(&[0]), z(&[1])], Q::one())]).unwrap();
        assert!(c.boundary().unwrap().is_zero());
        let d = EquivariantChain::from_terms(&g, 1, [(vec![z(&[0]), z(&[0])], Q::one())]).unwrap();
        assert!(d.boundary().unwrap().is_zero());
        assert!(matches!(
            EquivariantChain::<Q>::zero(&g, 0).boundary(),
            Err(QlabError::DegreeZero)
        ));
    }

    #[test]
    fn diam_examples() {
        let z2 = MarkedGroup::parse("Z^2").unwrap();
        assert_eq!(diam(&z2, &vec![z(&[0, 0]); 3]), 0);
        assert_eq!(diam(&z2, &[z(&[0, 0]), z(&[3, 0]), z(&[0, 4])]), 7);
        let f2 = MarkedGroup::parse("F2").unwrap();
        let t: Vec<_> = ["", "a", "a b"].iter().map(|w| f2.parse_element(w).unwrap()).collect();
        assert_eq!(diam(&f2, &t), 2);
    }

    #[test]
    fn weighted_norm_examples() {
        let g = MarkedGroup::parse("Z^1").unwrap();
        assert_eq!(EquivariantChain::<Q>::zero(&g, 2).weighted_norm(3), 0.0);
        let c = EquivariantChain::from_terms(&g, 1, [(vec![z(&[0]), z(&[5])], Q::real(2, 1))]).unwrap();
        assert_eq!(c.weighted_norm(3), 250.0);
        assert_eq!(c.weighted_norm(0), 2.0);
        let deg = EquivariantChain::from_terms(&g, 1, [(vec![z(&[2]), z(&[2])], Q::real(3, 1))]).unwrap();
        assert_eq!(deg.weighted_norm(0), 3.0);
        assert_eq!(deg.weighted_norm(1), 0.0);
    }

    #[test]
    fn normalization_on_insert() {
        let g = MarkedGroup::parse("F2").unwrap();
        let a = g.parse_element("a").unwrap();
        let ab = g.parse_element("a b").unwrap();
        let c = EquivariantChain::from_terms(&g, 1, [(vec![a.clone(), ab], Q::one())]).unwrap();
        let key = vec![g.identity(), g.parse_element("b").unwrap()];
        assert_eq!(c.coefficient(&key), Q::one());
        assert!(c.terms().keys().all(|t| t[0] == g.identity()));
    }

    #[test]
    fn chain_file_round_trip() {
        let g = MarkedGroup::parse("F2").unwrap();
        let pool = g.ball(2).unwrap();
        let c: EquivariantChain<Q> = random_chain(&g, &pool, 2, 5, &mut trial_rng(3, 0));
        let text = ChainFile::from_chain(&c).to_json();
        let back: EquivariantChain<Q> = ChainFile::parse(&text).unwrap().to_chain(&g).unwrap();
        assert_eq!(back, c);
    }

    proptest! {
        #[test]
        fn boundary_squared_vanishes(seed in any::<u64>(), degree in 2usize..=4, free in any::<bool>()) {
            let g = MarkedGroup::parse(if free { "F2" } else { "Z^1" }).unwrap();
            let pool = g.ball(2).unwrap();
            let c: EquivariantChain<Q> = random_chain(&g, &pool, degree, 6, &mut trial_rng(seed, 0));
            prop_assert!(c.boundary().unwrap().boundary().unwrap().is_zero());
        }

        #[test]
        fn norm_axioms(seed in any::<u64>(), n in 0u32..4) {
            let g = MarkedGroup::parse("Z^2").unwrap();
            let pool = g.ball(3).unwrap();
            let mut rng = trial_rng(seed, 1);
            let c: EquivariantChain<Q> = random_chain(&g, &pool, 2, 5, &mut rng);
            let d: EquivariantChain<Q> = random_chain(&g, &pool, 2, 5, &mut rng);
            let sum = c.add(&d).unwrap();
            prop_assert!(sum.weighted_norm(n) <= (c.weighted_norm(n) + d.weighted_norm(n)) * (1.0 + 1e-12));
            let lambda = Q::from_parts(3, -4, 2);
            let scaled = c.scale(&lambda).weighted_norm(n);
            prop_assert!((scaled - 2.5 * c.weighted_norm(n)).abs() <= 1e-9 * scaled.max(1.0));
            let b = c.boundary().unwrap().weighted_norm(n);
            prop_assert!(b <= c.frechet_seminorm(n));
        }

        #[test]
        fn norm_monotone_in_weight(seed in any::<u64>(), n in 1u32..4) {
            let g = MarkedGroup::parse("Z^1").unwrap();
            let pool = g.ball(3).unwrap();
            let c: EquivariantChain<Q> = random_chain(&g, &pool, 2, 5, &mut trial_rng(seed, 2));
            let nondegenerate: EquivariantChain<Q> = EquivariantChain::from_terms(
                &g, 2, c.terms().iter().filter(|(t, _)| diam(&g, t) > 0).map(|(t, a)| (t.clone(), a.clone())),
            ).unwrap();
            prop_assert!(nondegenerate.weighted_norm(n) <= nondegenerate.weighted_norm(n + 1));
        }
    }
}

//! Concrete finitely generated groups with normal forms, word metric and ball enumeration.
//!
//! Four families are supported, each with its standard generators and their inverses as
//! the (symmetric) generating set:
//!
//! | descriptor | group            | generators        | normal form          |
//! |------------|------------------|-------------------|----------------------|
//! | `Z^n`      | free abelian     | `e1 .. en`        | integer vector       |
//! | `Fk`       | free group       | `a, b, c, ..`     | freely reduced word  |
//! | `H3`       | Heisenberg H3(Z) | `x, y`            | triple `(a, b, c)`   |
//! | `Z/m`      | cyclic           | `t`               | residue              |
//!
//! Words are written as space separated symbols, an inverse letter as `a^-1`; `a^k` is
//! accepted as shorthand for `k` copies.
//!
//! The Heisenberg triple `(a, b, c)` stands for the matrix `[[1, a, c], [0, 1, b], [0, 0, 1]]`,
//! so `x = (1, 0, 0)`, `y = (0, 1, 0)` and `[x, y] = (0, 0, 1)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{QlabError, Result};

/// Default cap on the number of elements of an enumerated ball.
pub const DEFAULT_BALL_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    FreeAbelian(usize),
    Free(usize),
    Heisenberg,
    Cyclic(u64),
}

/// Canonical normal form of a group element; equality of elements is equality of forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Abelian(Vec<i64>),
    /// Freely reduced word, letter `±(i + 1)` for generator `i` or its inverse.
    Free(Vec<i32>),
    Heisenberg([i64; 3]),
    Cyclic(u64),
}

/// A letter of the symmetric generating set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Self { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Self { generator: self.generator, inverse: !self.inverse }
    }
}

#[derive(Debug, Default)]
struct HeisenbergMetric {
    dist: HashMap<[i64; 3], u32>,
    frontier: Vec<[i64; 3]>,
    radius: u32,
}

impl HeisenbergMetric {
    fn new() -> Self {
        let mut dist = HashMap::new();
        dist.insert([0, 0, 0], 0);
        Self { dist, frontier: vec![[0, 0, 0]], radius: 0 }
    }

    fn grow(&mut self) {
        let next_radius = self.radius + 1;
        let mut next = Vec::new();
        for g in &self.frontier {
            for s in HEISENBERG_GENERATORS {
                let h = heis_mul(*g, s);
                if !self.dist.contains_key(&h) {
                    self.dist.insert(h, next_radius);
                    next.push(h);
                }
            }
        }
        self.frontier = next;
        self.radius = next_radius;
    }

    fn length(&mut self, g: [i64; 3]) -> u32 {
        loop {
            if let Some(d) = self.dist.get(&g) {
                return *d;
            }
            self.grow();
        }
    }
}

const HEISENBERG_GENERATORS: [[i64; 3]; 4] = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0]];

fn heis_mul(g: [i64; 3], h: [i64; 3]) -> [i64; 3] {
    [g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1]]
}

fn heis_inv(g: [i64; 3]) -> [i64; 3] {
    [-g[0], -g[1], -g[2] + g[0] * g[1]]
}

/// A finitely generated group with a fixed symmetric generating set and its word metric.
///
/// Cloning is cheap; clones share the memoized Heisenberg metric.
#[derive(Clone)]
pub struct MarkedGroup {
    family: Family,
    ball_cap: usize,
    heisenberg: Option<Arc<Mutex<HeisenbergMetric>>>,
}

impl fmt::Debug for MarkedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MarkedGroup({})", self.descriptor())
    }
}

impl PartialEq for MarkedGroup {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family
    }
}

impl Eq for MarkedGroup {}

impl MarkedGroup {
    /// Parses a descriptor `Z^<n>`, `F<k>`, `H3` or `Z/<m>`.
    pub fn parse(spec: &str) -> Result<Self> {
        let s = spec.trim();
        let positive = |digits: &str| -> Result<i64> {
            digits
                .parse::<i64>()
                .map_err(|_| QlabError::InvalidParameter(format!("`{digits}` in `{s}` is not an integer")))
        };
        let family = if let Some(rest) = s.strip_prefix("Z^") {
            let n = positive(rest)?;
            if n < 1 {
                return Err(QlabError::InvalidParameter(format!("rank must be positive in `{s}`")));
            }
            Family::FreeAbelian(n as usize)
        } else if let Some(rest) = s.strip_prefix("Z/") {
            let m = positive(rest)?;
            if m < 1 {
                return Err(QlabError::InvalidParameter(format!("modulus must be at least 1 in `{s}`")));
            }
            Family::Cyclic(m as u64)
        } else if s == "H3" {
            Family::Heisenberg
        } else if let Some(rest) = s.strip_prefix('F') {
            let k = positive(rest)?;
            if k < 1 {
                return Err(QlabError::InvalidParameter(format!("rank must be positive in `{s}`")));
            }
            if k > 26 {
                return Err(QlabError::InvalidParameter(format!("free rank above 26 in `{s}`")));
            }
            Family::Free(k as usize)
        } else {
            return Err(QlabError::UnknownFamily(s.to_string()));
        };
        Ok(Self::from_family(family))
    }

    pub fn from_family(family: Family) -> Self {
        let heisenberg = matches!(family, Family::Heisenberg)
            .then(|| Arc::new(Mutex::new(HeisenbergMetric::new())));
        Self { family, ball_cap: DEFAULT_BALL_CAP, heisenberg }
    }

    pub fn with_ball_cap(mut self, cap: usize) -> Self {
        self.ball_cap = cap;
        self
    }

    pub fn ball_cap(&self) -> usize {
        self.ball_cap
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn descriptor(&self) -> String {
        match &self.family {
            Family::FreeAbelian(n) => format!("Z^{n}"),
            Family::Free(k) => format!("F{k}"),
            Family::Heisenberg => "H3".to_string(),
            Family::Cyclic(m) => format!("Z/{m}"),
        }
    }

    /// Number of standard (non-inverted) generators.
    pub fn generator_count(&self) -> usize {
        match &self.family {
            Family::FreeAbelian(n) => *n,
            Family::Free(k) => *k,
            Family::Heisenberg => 2,
            Family::Cyclic(_) => 1,
        }
    }

    /// All letters of the symmetric generating set, generator then inverse.
    pub fn letters(&self) -> Vec<Letter> {
        (0..self.generator_count())
            .flat_map(|i| [Letter::new(i, false), Letter::new(i, true)])
            .collect()
    }

    pub fn symbol(&self, letter: Letter) -> String {
        let base = match &self.family {
            Family::FreeAbelian(_) => format!("e{}", letter.generator + 1),
            Family::Free(_) => ((b'a' + letter.generator as u8) as char).to_string(),
            Family::Heisenberg => ["x", "y"][letter.generator].to_string(),
            Family::Cyclic(_) => "t".to_string(),
        };
        if letter.inverse {
            format!("{base}^-1")
        } else {
            base
        }
    }

    fn generator_from_symbol(&self, sym: &str) -> Option<usize> {
        (0..self.generator_count()).find(|&i| self.symbol(Letter::new(i, false)) == sym)
    }

    pub fn identity(&self) -> GroupElement {
        match &self.family {
            Family::FreeAbelian(n) => GroupElement::Abelian(vec![0; *n]),
            Family::Free(_) => GroupElement::Free(Vec::new()),
            Family::Heisenberg => GroupElement::Heisenberg([0, 0, 0]),
            Family::Cyclic(_) => GroupElement::Cyclic(0),
        }
    }

    pub fn letter_element(&self, letter: Letter) -> GroupElement {
        let sign: i64 = if letter.inverse { -1 } else { 1 };
        match &self.family {
            Family::FreeAbelian(n) => {
                let mut v = vec![0; *n];
                v[letter.generator] = sign;
                GroupElement::Abelian(v)
            }
            Family::Free(_) => GroupElement::Free(vec![(letter.generator as i32 + 1) * sign as i32]),
            Family::Heisenberg => {
                let mut v = [0; 3];
                v[letter.generator] = sign;
                GroupElement::Heisenberg(v)
            }
            Family::Cyclic(m) => GroupElement::Cyclic((sign.rem_euclid(*m as i64)) as u64),
        }
    }

    /// The symmetric generating set as elements (duplicates possible in small cyclic groups).
    pub fn generators(&self) -> Vec<GroupElement> {
        self.letters().into_iter().map(|l| self.letter_element(l)).collect()
    }

    pub fn multiply(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        match (g, h) {
            (GroupElement::Abelian(a), GroupElement::Abelian(b)) => {
                GroupElement::Abelian(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (GroupElement::Free(a), GroupElement::Free(b)) => {
                let mut out = a.clone();
                for &l in b {
                    if out.last() == Some(&-l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                GroupElement::Free(out)
            }
            (GroupElement::Heisenberg(a), GroupElement::Heisenberg(b)) => GroupElement::Heisenberg(heis_mul(*a, *b)),
            (GroupElement::Cyclic(a), GroupElement::Cyclic(b)) => {
                let m = match self.family {
                    Family::Cyclic(m) => m,
                    _ => unreachable!("cyclic element outside a cyclic group"),
                };
                GroupElement::Cyclic((a + b) % m)
            }
            _ => panic!("elements from different group families"),
        }
    }

    pub fn inverse(&self, g: &GroupElement) -> GroupElement {
        match g {
            GroupElement::Abelian(a) => GroupElement::Abelian(a.iter().map(|x| -x).collect()),
            GroupElement::Free(w) => GroupElement::Free(w.iter().rev().map(|l| -l).collect()),
            GroupElement::Heisenberg(a) => GroupElement::Heisenberg(heis_inv(*a)),
            GroupElement::Cyclic(a) => {
                let m = match self.family {
                    Family::Cyclic(m) => m,
                    _ => unreachable!("cyclic element outside a cyclic group"),
                };
                GroupElement::Cyclic((m - a % m) % m)
            }
        }
    }

    /// `g^-1 h`.
    pub fn left_quotient(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        self.multiply(&self.inverse(g), h)
    }

    pub fn normal_form(&self, word: &[Letter]) -> GroupElement {
        word.iter()
            .fold(self.identity(), |acc, &l| self.multiply(&acc, &self.letter_element(l)))
    }

    /// Parses a word such as `a b^-1 a^2`.
    pub fn parse_word(&self, text: &str) -> Result<Vec<Letter>> {
        let mut out = Vec::new();
        for token in text.split_whitespace() {
            let (sym, power) = match token.split_once('^') {
                Some((s, p)) => {
                    let k = p
                        .parse::<i64>()
                        .map_err(|_| QlabError::Parse(format!("bad exponent in `{token}`")))?;
                    (s, k)
                }
                None => (token, 1),
            };
            let g = self
                .generator_from_symbol(sym)
                .ok_or_else(|| QlabError::UnknownGenerator(sym.to_string()))?;
            let letter = Letter::new(g, power < 0);
            out.extend(std::iter::repeat(letter).take(power.unsigned_abs() as usize));
        }
        Ok(out)
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement> {
        Ok(self.normal_form(&self.parse_word(text)?))
    }

    /// A word representing `g` (geodesic for Z^n, F_k and Z/m).
    pub fn to_word(&self, g: &GroupElement) -> Vec<Letter> {
        let power = |gen: usize, k: i64| std::iter::repeat(Letter::new(gen, k < 0)).take(k.unsigned_abs() as usize);
        match g {
            GroupElement::Abelian(v) => v.iter().enumerate().flat_map(|(i, &k)| power(i, k)).collect(),
            GroupElement::Free(w) => w
                .iter()
                .map(|&l| Letter::new(l.unsigned_abs() as usize - 1, l < 0))
                .collect(),
            GroupElement::Heisenberg([a, b, c]) => {
                // x^a y^b [x,y]^c' where c' corrects the central coordinate of x^a y^b
                let mut w: Vec<Letter> = power(0, *a).chain(power(1, *b)).collect();
                let commutators = c - a * b;
                let x = Letter::new(0, false);
                let y = Letter::new(1, false);
                let comm = if commutators >= 0 {
                    [x, y, x.inv(), y.inv()]
                } else {
                    [y, x, y.inv(), x.inv()]
                };
                for _ in 0..commutators.unsigned_abs() {
                    w.extend_from_slice(&comm);
                }
                w
            }
            GroupElement::Cyclic(r) => {
                let m = match self.family {
                    Family::Cyclic(m) => m,
                    _ => unreachable!(),
                };
                if *r <= m - r {
                    power(0, *r as i64).collect()
                } else {
                    power(0, -((m - r) as i64)).collect()
                }
            }
        }
    }

    pub fn format_word(&self, word: &[Letter]) -> String {
        word.iter().map(|&l| self.symbol(l)).collect::<Vec<_>>().join(" ")
    }

    pub fn format_element(&self, g: &GroupElement) -> String {
        self.format_word(&self.to_word(g))
    }

    /// Word length `|g|`: closed form for Z^n, F_k and Z/m; breadth-first search for H3.
    pub fn word_length(&self, g: &GroupElement) -> u32 {
        match g {
            GroupElement::Abelian(v) => v.iter().map(|x| x.unsigned_abs()).sum::<u64>() as u32,
            GroupElement::Free(w) => w.len() as u32,
            GroupElement::Heisenberg(v) => self
                .heisenberg
                .as_ref()
                .expect("Heisenberg element outside H3")
                .lock()
                .expect("poisoned metric cache")
                .length(*v),
            GroupElement::Cyclic(r) => {
                let m = match self.family {
                    Family::Cyclic(m) => m,
                    _ => unreachable!(),
                };
                (*r).min(m - r) as u32
            }
        }
    }

    /// `d(g, h) = |g^-1 h|`.
    pub fn distance(&self, g: &GroupElement, h: &GroupElement) -> u32 {
        self.word_length(&self.left_quotient(g, h))
    }

    /// All elements at distance at most `radius` from `e`, by breadth-first search.
    pub fn ball(&self, radius: u32) -> Result<Ball> {
        let e = self.identity();
        let mut index = HashMap::new();
        let mut elements = vec![(e.clone(), 0u32)];
        index.insert(e, 0usize);
        let mut queue = VecDeque::from([0usize]);
        let gens = self.generators();
        while let Some(i) = queue.pop_front() {
            let (g, d) = elements[i].clone();
            if d == radius {
                continue;
            }
            for s in &gens {
                let h = self.multiply(&g, s);
                if !index.contains_key(&h) {
                    if elements.len() >= self.ball_cap {
                        return Err(QlabError::BallCapExceeded { radius, cap: self.ball_cap });
                    }
                    index.insert(h.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push((h, d + 1));
                }
            }
        }
        Ok(Ball { center: self.identity(), radius, elements, index })
    }
}

/// An enumerated ball `B_R(e)` with exact distances, in breadth-first order.
#[derive(Clone, Debug)]
pub struct Ball {
    center: GroupElement,
    radius: u32,
    elements: Vec<(GroupElement, u32)>,
    index: HashMap<GroupElement, usize>,
}

impl Ball {
    pub fn center(&self) -> &GroupElement {
        &self.center
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn elements(&self) -> &[(GroupElement, u32)] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.index.contains_key(g)
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn distance_of(&self, g: &GroupElement) -> Option<u32> {
        self.index.get(g).map(|&i| self.elements[i].1)
    }

    /// Elements at exact distance `r`.
    pub fn sphere(&self, r: u32) -> impl Iterator<Item = &GroupElement> {
        self.elements.iter().filter(move |(_, d)| *d == r).map(|(g, _)| g)
    }

    /// `sizes[r] = |S_r|` for `r = 0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.radius as usize + 1];
        for (_, d) in &self.elements {
            sizes[*d as usize] += 1;
        }
        sizes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 3x3 upper unitriangular integer matrices, independent of the triple formula.
    fn matrix_of(word: &[Letter]) -> [[i64; 3]; 3] {
        let mut m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for l in word {
            let mut s = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
            let v = if l.inverse { -1 } else { 1 };
            if l.generator == 0 {
                s[0][1] = v;
            } else {
                s[1][2] = v;
            }
            let mut p = [[0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    p[i][j] = (0..3).map(|k| m[i][k] * s[k][j]).sum();
                }
            }
            m = p;
        }
        m
    }

    #[test]
    fn descriptors() {
        assert_eq!(*MarkedGroup::parse("Z^2").unwrap().family(), Family::FreeAbelian(2));
        assert_eq!(*MarkedGroup::parse("F2").unwrap().family(), Family::Free(2));
        assert_eq!(*MarkedGroup::parse("H3").unwrap().family(), Family::Heisenberg);
        assert_eq!(*MarkedGroup::parse("Z/5").unwrap().family(), Family::Cyclic(5));
        assert!(matches!(MarkedGroup::parse("SL2"), Err(QlabError::UnknownFamily(_))));
        assert!(matches!(MarkedGroup::parse("Z^0"), Err(QlabError::InvalidParameter(_))));
        assert!(matches!(MarkedGroup::parse("F0"), Err(QlabError::InvalidParameter(_))));
        assert!(matches!(MarkedGroup::parse("Z/0"), Err(QlabError::InvalidParameter(_))));
        let h = MarkedGroup::parse("H3").unwrap();
        assert_eq!(h.generators().len(), 4);
        assert_eq!(MarkedGroup::parse("F2").unwrap().format_word(&MarkedGroup::parse("F2").unwrap().letters()), "a a^-1 b b^-1");
    }

    #[test]
    fn normal_form_examples() {
        let f2 = MarkedGroup::parse("F2").unwrap();
        assert_eq!(f2.parse_element("a b b^-1").unwrap(), f2.parse_element("a").unwrap());
        let z2 = MarkedGroup::parse("Z^2").unwrap();
        assert_eq!(z2.parse_element("e1 e2 e1").unwrap(), GroupElement::Abelian(vec![2, 1]));
        let h = MarkedGroup::parse("H3").unwrap();
        let w = h.parse_word("x y x^-1 y^-1").unwrap();
        assert_eq!(h.normal_form(&w), GroupElement::Heisenberg([0, 0, 1]));
        assert_eq!(matrix_of(&w), [[1, 0, 1], [0, 1, 0], [0, 0, 1]]);
        assert_eq!(f2.normal_form(&[]), f2.identity());
        assert!(matches!(f2.parse_word("a z"), Err(QlabError::UnknownGenerator(_))));
    }

    #[test]
    fn heisenberg_triples_match_matrices() {
        let h = MarkedGroup::parse("H3").unwrap();
        let words = ["x x y x^-1 y y", "y^-1 x^3 y^2 x^-1", "x y x y x^-1 y^-1", ""];
        for text in words {
            let w = h.parse_word(text).unwrap();
            let GroupElement::Heisenberg([a, b, c]) = h.normal_form(&w) else { panic!() };
            assert_eq!(matrix_of(&w), [[1, a, c], [0, 1, b], [0, 0, 1]], "{text}");
            // the printed word represents the same element
            let g = h.normal_form(&w);
            assert_eq!(h.normal_form(&h.to_word(&g)), g);
        }
    }

    #[test]
    fn word_length_examples() {
        let z2 = MarkedGroup::parse("Z^2").unwrap();
        assert_eq!(z2.word_length(&GroupElement::Abelian(vec![3, -4])), 7);
        let f2 = MarkedGroup::parse("F2").unwrap();
        assert_eq!(f2.word_length(&f2.parse_element("a b a^-1").unwrap()), 3);
        let h = MarkedGroup::parse("H3").unwrap();
        assert_eq!(h.word_length(&GroupElement::Heisenberg([0, 0, 1])), 4);
        let c = MarkedGroup::parse("Z/5").unwrap();
        assert_eq!(c.word_length(&GroupElement::Cyclic(3)), 2);
    }

    #[test]
    fn ball_examples() {
        let z = MarkedGroup::parse("Z^1").unwrap();
        assert_eq!(z.ball(2).unwrap().len(), 5);
        let f2 = MarkedGroup::parse("F2").unwrap();
        assert_eq!(f2.ball(2).unwrap().len(), 17);
        let c = MarkedGroup::parse("Z/5").unwrap();
        assert_eq!(c.ball(10).unwrap().len(), 5);
        let capped = MarkedGroup::parse("F3").unwrap().with_ball_cap(100);
        assert!(matches!(capped.ball(5), Err(QlabError::BallCapExceeded { .. })));
    }

    #[test]
    fn free_sphere_sizes() {
        let f2 = MarkedGroup::parse("F2").unwrap();
        let sizes = f2.ball(8).unwrap().sphere_sizes();
        for r in 1..=8u32 {
            assert_eq!(sizes[r as usize], 4 * 3usize.pow(r - 1));
        }
    }

    #[test]
    fn bfs_distances_match_closed_forms() {
        for desc in ["Z^1", "Z^2", "Z^3", "F2", "F3", "Z/7"] {
            let g = MarkedGroup::parse(desc).unwrap();
            let ball = g.ball(if desc == "F3" { 5 } else { 8 }).unwrap();
            for (h, d) in ball.elements() {
                assert_eq!(g.word_length(h), *d, "{desc}");
            }
        }
        let h = MarkedGroup::parse("H3").unwrap();
        for (g, d) in h.ball(6).unwrap().elements() {
            assert_eq!(h.word_length(g), *d);
        }
    }

    #[test]
    fn ball_sizes_monotone() {
        let h = MarkedGroup::parse("H3").unwrap();
        let sizes: Vec<usize> = (0..6).map(|r| h.ball(r).unwrap().len()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
    }
}

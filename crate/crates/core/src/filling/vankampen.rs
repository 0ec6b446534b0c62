//! Finite presentations and the van Kampen area of null-homotopic words.
//!
//! Words are `Vec<i32>` with letter `±(i + 1)` for generator `i` and its inverse.
//!
//! Search: take a cyclically reduced word `w`. In a minimal diagram the edge of the first
//! letter either lies on a 2-cell, whose removal leaves a word of area one less, or is a
//! bridge, splitting `w = x α x⁻¹ β` into independent pieces. Iterative deepening over the
//! area budget, with a memo of exact values and lower bounds keyed by canonical cyclic words.

use std::collections::HashMap;

use crate::error::{QlabError, Result};

use super::snf::IntegerSolver;

pub type Word = Vec<i32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

pub fn inverse(w: &[i32]) -> Word {
    w.iter().rev().map(|x| -x).collect()
}

pub fn free_reduce(w: &[i32]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[i32]) -> Word {
    let mut w = free_reduce(w);
    let mut start = 0;
    let mut end = w.len();
    while end - start >= 2 && w[start] == -w[end - 1] {
        start += 1;
        end -= 1;
    }
    w.truncate(end);
    w.drain(..start);
    w
}

/// Lexicographically least rotation of `w` or of `w⁻¹`.
fn canonical(w: &[i32]) -> Word {
    let inv = inverse(w);
    let mut best = w.to_vec();
    for base in [w, inv.as_slice()] {
        for r in 0..base.len() {
            let rot: Word = base[r..].iter().chain(&base[..r]).copied().collect();
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    generators: &'a [String],
}

impl Parser<'_> {
    fn peek(&mut self) -> Option<char> {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace() || *c == '*' || *c == '.') {
            self.pos += 1;
        }
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(QlabError::Parse(format!("expected `{c}` at offset {}", self.pos)))
        }
    }

    fn identifier(&mut self) -> Result<String> {
        let start = self.pos;
        if !self.chars.get(self.pos).is_some_and(|c| c.is_alphabetic()) {
            return Err(QlabError::Parse(format!("expected a generator at offset {start}")));
        }
        self.pos += 1;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit() || *c == '_') {
            self.pos += 1;
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn integer(&mut self) -> Result<i64> {
        self.peek();
        let start = self.pos;
        if matches!(self.chars.get(self.pos), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| QlabError::Parse(format!("bad exponent `{text}`")))
    }

    fn word(&mut self) -> Result<Word> {
        let mut out = Vec::new();
        while let Some(c) = self.peek() {
            if matches!(c, ',' | ']' | ')' | '>' | '|') {
                break;
            }
            let atom = match c {
                '[' => {
                    self.pos += 1;
                    let x = self.word()?;
                    self.expect(',')?;
                    let y = self.word()?;
                    self.expect(']')?;
                    [x.clone(), y.clone(), inverse(&x), inverse(&y)].concat()
                }
                '(' => {
                    self.pos += 1;
                    let x = self.word()?;
                    self.expect(')')?;
                    x
                }
                '1' => {
                    self.pos += 1;
                    Vec::new()
                }
                _ => {
                    let name = self.identifier()?;
                    let i = self
                        .generators
                        .iter()
                        .position(|g| *g == name)
                        .ok_or_else(|| QlabError::UnknownGenerator(name.clone()))?;
                    vec![i as i32 + 1]
                }
            };
            let power = if self.peek() == Some('^') {
                self.pos += 1;
                self.integer()?
            } else {
                1
            };
            let base = if power < 0 { inverse(&atom) } else { atom };
            for _ in 0..power.unsigned_abs() {
                out.extend_from_slice(&base);
            }
        }
        Ok(out)
    }
}

impl Presentation {
    /// Parses `"<a,b|[a,b]>"`; relators are words with `x^k`, `[u,v]` and parentheses.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let inner = text
            .strip_prefix('<')
            .and_then(|t| t.strip_suffix('>'))
            .ok_or_else(|| QlabError::Parse("presentation must look like <gens|relators>".into()))?;
        let (gens, rels) = inner.split_once('|').unwrap_or((inner, ""));
        let generators: Vec<String> = gens.split(',').map(|g| g.trim().to_string()).filter(|g| !g.is_empty()).collect();
        for g in &generators {
            let mut p = Parser { chars: g.chars().collect(), pos: 0, generators: &[] };
            if p.identifier().ok().as_deref() != Some(g.as_str()) {
                return Err(QlabError::Parse(format!("bad generator name `{g}`")));
            }
        }
        let mut parser = Parser { chars: rels.chars().collect(), pos: 0, generators: &generators };
        let mut relators = Vec::new();
        while parser.peek().is_some() {
            let r = cyclic_reduce(&parser.word()?);
            if !r.is_empty() {
                relators.push(r);
            }
            match parser.peek() {
                Some(',') => parser.pos += 1,
                None => break,
                Some(c) => return Err(QlabError::Parse(format!("unexpected `{c}` in relators"))),
            }
        }
        Ok(Self { generators, relators })
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut parser = Parser { chars: text.chars().collect(), pos: 0, generators: &self.generators };
        let w = parser.word()?;
        if let Some(c) = parser.peek() {
            return Err(QlabError::Parse(format!("unexpected `{c}` in word")));
        }
        Ok(w)
    }

    pub fn format_word(&self, w: &[i32]) -> String {
        w.iter()
            .map(|&x| {
                let g = &self.generators[x.unsigned_abs() as usize - 1];
                if x > 0 {
                    g.clone()
                } else {
                    format!("{g}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[derive(Clone, Copy, Debug)]
enum Known {
    Exact(u32),
    AtLeast(u32),
}

struct AreaSearch {
    /// Cyclic conjugates of relators and their inverses, grouped by first letter.
    faces: HashMap<i32, Vec<Word>>,
    abelian: IntegerSolver,
    rank: usize,
    memo: HashMap<Word, Known>,
}

impl AreaSearch {
    fn new(p: &Presentation) -> Result<Self> {
        let mut faces: HashMap<i32, Vec<Word>> = HashMap::new();
        for r in &p.relators {
            for base in [r.clone(), inverse(r)] {
                for i in 0..base.len() {
                    let rot: Word = base[i..].iter().chain(&base[..i]).copied().collect();
                    let list = faces.entry(rot[0]).or_default();
                    if !list.contains(&rot) {
                        list.push(rot);
                    }
                }
            }
        }
        let rank = p.generators.len();
        let mut matrix = vec![vec![0i64; p.relators.len()]; rank];
        for (j, r) in p.relators.iter().enumerate() {
            for &x in r {
                matrix[x.unsigned_abs() as usize - 1][j] += i64::from(x.signum());
            }
        }
        let abelian = IntegerSolver::new(&matrix, p.relators.len())?;
        Ok(Self { faces, abelian, rank, memo: HashMap::new() })
    }

    /// Whether the image of `w` in the abelianization vanishes.
    fn abelian_trivial(&self, w: &[i32]) -> bool {
        let mut v = vec![0i64; self.rank];
        for &x in w {
            v[x.unsigned_abs() as usize - 1] += i64::from(x.signum());
        }
        matches!(self.abelian.solve(&v), Ok(Some(_)))
    }

    /// Least area of `w` if it is at most `budget`.
    fn area(&mut self, w: &[i32], budget: u32) -> Option<u32> {
        let w = cyclic_reduce(w);
        if w.is_empty() {
            return Some(0);
        }
        if budget == 0 {
            return None;
        }
        let key = canonical(&w);
        match self.memo.get(&key) {
            Some(Known::Exact(v)) => return (*v <= budget).then_some(*v),
            Some(Known::AtLeast(b)) if *b > budget => return None,
            _ => {}
        }
        if !self.abelian_trivial(&w) {
            self.memo.insert(key, Known::AtLeast(u32::MAX));
            return None;
        }
        let mut best: Option<u32> = None;
        let mut limit = budget;
        // bridge at the first letter
        for j in 1..w.len() {
            if w[j] != -w[0] {
                continue;
            }
            let (alpha, beta) = (&w[1..j], &w[j + 1..]);
            let Some(a) = self.area(alpha, limit) else { continue };
            let Some(b) = self.area(beta, limit - a) else { continue };
            if best.map_or(true, |v| a + b < v) {
                best = Some(a + b);
                if a + b == 0 {
                    break;
                }
                limit = a + b - 1;
            }
        }
        // 2-cell at the first letter
        if best.map_or(true, |v| v > 1) && limit >= 1 {
            let rest = &w[1..];
            let candidates = self.faces.get(&w[0]).cloned().unwrap_or_default();
            for rho in candidates {
                let mut next = inverse(&rho[1..]);
                next.extend_from_slice(rest);
                if let Some(a) = self.area(&next, limit - 1) {
                    best = Some(a + 1);
                    if a == 0 || limit <= 1 {
                        break;
                    }
                    limit = a;
                }
            }
        }
        let known = match best {
            Some(v) => Known::Exact(v),
            None => Known::AtLeast(budget + 1),
        };
        self.memo.insert(key, known);
        best
    }
}

/// Least number of relator conjugates whose product freely equals `w`, if at most `area_max`.
pub fn vankampen_area(p: &Presentation, w: &[i32], area_max: u32) -> Result<Option<u32>> {
    let reduced = cyclic_reduce(w);
    if reduced.is_empty() {
        return Ok(Some(0));
    }
    if p.relators.is_empty() {
        return Err(QlabError::EmptyRelators);
    }
    if let Some(x) = w.iter().find(|x| x.unsigned_abs() as usize > p.generators.len() || **x == 0) {
        return Err(QlabError::UnknownGenerator(format!("letter {x}")));
    }
    let mut search = AreaSearch::new(p)?;
    for budget in 0..=area_max {
        if let Some(a) = search.area(&reduced, budget) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2() -> Presentation {
        Presentation::parse("<a,b|[a,b]>").unwrap()
    }

    #[test]
    fn parse_presentations() {
        let p = z2();
        assert_eq!(p.generators, vec!["a", "b"]);
        assert_eq!(p.relators, vec![vec![1, 2, -1, -2]]);
        let q = Presentation::parse("< x , y | x^3, (x y)^2 y^-2, [x^2, y] >").unwrap();
        assert_eq!(q.relators[0], vec![1, 1, 1]);
        assert_eq!(q.relators[1], vec![1, 2, 1, -2]);
        assert_eq!(q.relators[2], vec![1, 1, 2, -1, -1, -2]);
        assert_eq!(p.parse_word("a b a^-1 b^-1").unwrap(), vec![1, 2, -1, -2]);
        assert!(matches!(p.parse_word("c"), Err(QlabError::UnknownGenerator(_))));
        assert!(Presentation::parse("a,b|").is_err());
        assert_eq!(p.format_word(&[1, -2]), "a b^-1");
    }

    #[test]
    fn reductions() {
        assert_eq!(free_reduce(&[1, 2, -2, -1, 1]), vec![1]);
        assert_eq!(cyclic_reduce(&[2, 1, 2, -2]), vec![2, 1]);
        assert_eq!(cyclic_reduce(&[2, 1, -2]), vec![1]);
    }

    #[test]
    fn small_areas() {
        let p = z2();
        assert_eq!(vankampen_area(&p, &[], 5).unwrap(), Some(0));
        assert_eq!(vankampen_area(&p, &p.parse_word("[a,b]").unwrap(), 5).unwrap(), Some(1));
        assert_eq!(vankampen_area(&p, &p.parse_word("[a^2,b^2]").unwrap(), 6).unwrap(), Some(4));
        assert_eq!(vankampen_area(&p, &p.parse_word("[a^2,b^2]").unwrap(), 3).unwrap(), None);
        assert_eq!(vankampen_area(&p, &p.parse_word("a b").unwrap(), 4).unwrap(), None);
        let free = Presentation::parse("<a,b|>").unwrap();
        assert!(matches!(vankampen_area(&free, &[1], 3), Err(QlabError::EmptyRelators)));
        assert_eq!(vankampen_area(&free, &[1, -1], 3).unwrap(), Some(0));
    }

    #[test]
    fn bridges_between_discs() {
        // b^5 [a,b] b^-5 [a^-1,b^-1]: two cells joined by a long bridge
        let p = z2();
        let w = p.parse_word("b^5 [a,b] b^-5 [a^-1,b^-1]").unwrap();
        assert_eq!(vankampen_area(&p, &w, 6).unwrap(), Some(2));
    }

    #[test]
    fn subadditive() {
        let p = Presentation::parse("<a,b|a^3, b^2, (a b)^2>").unwrap();
        let words = ["a^3", "b^2", "(a b)^2", "a b a b", "a^3 b^2", "a^-3"];
        for u in words {
            for v in words {
                let (wu, wv) = (p.parse_word(u).unwrap(), p.parse_word(v).unwrap());
                let au = vankampen_area(&p, &wu, 4).unwrap().unwrap();
                let av = vankampen_area(&p, &wv, 4).unwrap().unwrap();
                let auv = vankampen_area(&p, &[wu, wv].concat(), 8).unwrap().unwrap();
                assert!(auv <= au + av, "{u} {v}");
            }
        }
    }
}

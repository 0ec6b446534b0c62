//! `d^N(k) = max { l_f(b) : b an N-boundary with |b| <= k }` by exhaustive enumeration.
//!
//! Values are relative to the given finite complex: on a window of an infinite complex a
//! filling may leave the window, so they only bound the window-free filling length from above.

use std::collections::HashSet;

use super::{FillingOutcome, Filler, FiniteSimplicialComplex};
use crate::error::Result;

#[derive(Clone, Debug)]
pub struct DehnOptions {
    /// Coefficient box of the fillings; `None` uses `|b|` for a boundary `b`.
    pub coeff_bound: Option<i64>,
    /// Maximum number of search states before the table is truncated.
    pub state_cap: usize,
}

impl Default for DehnOptions {
    fn default() -> Self {
        Self { coeff_bound: None, state_cap: 50_000_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnRow {
    pub k: u64,
    pub value: u64,
    /// Boundaries of size exactly `k`, up to sign.
    pub boundaries: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DehnProfile {
    pub order: usize,
    pub rows: Vec<DehnRow>,
    pub truncated: bool,
    /// Boundaries without a filling inside the coefficient box.
    pub out_of_box: u64,
}

impl DehnProfile {
    pub fn value(&self, k: u64) -> Option<u64> {
        self.rows.iter().find(|r| r.k == k).map(|r| r.value)
    }
}

type Sparse = Vec<(usize, i64)>;

fn bump(v: &mut Sparse, key: usize, delta: i64) {
    match v.binary_search_by_key(&key, |e| e.0) {
        Ok(i) => {
            v[i].1 += delta;
            if v[i].1 == 0 {
                v.remove(i);
            }
        }
        Err(i) => v.insert(i, (key, delta)),
    }
}

struct Search<'a> {
    filler: &'a Filler<'a>,
    faces: Vec<Vec<(usize, i64)>>,
    cofaces: Vec<Vec<(usize, i64)>>,
    k_max: u64,
    face_count: u64,
    options: &'a DehnOptions,
    best: Vec<u64>,
    counts: Vec<u64>,
    out_of_box: u64,
    states: usize,
    truncated: bool,
}

impl Search<'_> {
    fn record(&mut self, x: &Sparse, size: u64) -> Result<()> {
        let bound = self.options.coeff_bound.unwrap_or(size as i64).max(1);
        let r = self.filler.fill_indexed(x, bound)?;
        match r.outcome {
            FillingOutcome::Filled(a) => {
                let s = size as usize;
                self.best[s] = self.best[s].max(a.size());
                self.counts[s] += 1;
            }
            FillingOutcome::OutOfBox => self.out_of_box += 1,
            FillingOutcome::NotABoundary => {}
        }
        Ok(())
    }

    fn step(x: &mut Sparse, bd: &mut Sparse, faces: &[(usize, i64)], j: usize, eps: i64) {
        bump(x, j, eps);
        for &(f, s) in faces {
            bump(bd, f, eps * s);
        }
    }

    fn run_from(&mut self, s0: usize) -> Result<()> {
        let mut visited: HashSet<Sparse> = HashSet::new();
        let mut x = vec![(s0, 1)];
        let mut bd: Sparse = Vec::new();
        for &(f, s) in &self.faces[s0] {
            bump(&mut bd, f, s);
        }
        visited.insert(x.clone());
        self.dfs(s0, &mut x, &mut bd, 1, &mut visited)
    }

    fn dfs(&mut self, s0: usize, x: &mut Sparse, bd: &mut Sparse, size: u64, visited: &mut HashSet<Sparse>) -> Result<()> {
        if self.truncated {
            return Ok(());
        }
        self.states += 1;
        if self.states > self.options.state_cap {
            self.truncated = true;
            return Ok(());
        }
        let residual: u64 = bd.iter().map(|e| e.1.unsigned_abs()).sum();
        if residual > self.face_count * (self.k_max - size) {
            return Ok(());
        }
        let moves: Vec<(usize, i64)> = if bd.is_empty() {
            self.record(x, size)?;
            if size == self.k_max {
                return Ok(());
            }
            (s0..self.faces.len())
                .flat_map(|j| [(j, 1), (j, -1)])
                .filter(|&(j, eps)| x.binary_search_by_key(&j, |e| e.0).map_or(j != s0, |i| x[i].1.signum() == eps))
                .collect()
        } else {
            let (f, beta) = bd[0];
            self.cofaces[f]
                .iter()
                .filter(|(j, _)| *j >= s0)
                .map(|&(j, s)| (j, -beta.signum() * s))
                .filter(|&(j, eps)| x.binary_search_by_key(&j, |e| e.0).map_or(true, |i| x[i].1.signum() == eps))
                .collect()
        };
        for (j, eps) in moves {
            let faces = self.faces[j].clone();
            Self::step(x, bd, &faces, j, eps);
            if visited.insert(x.clone()) {
                self.dfs(s0, x, bd, size + 1, visited)?;
            }
            Self::step(x, bd, &faces, j, -eps);
        }
        Ok(())
    }
}

/// Table of `d^N(k)` for `k = 0..=k_max` on a finite complex.
pub fn dehn_profile(k: &FiniteSimplicialComplex, order: usize, k_max: u64, options: &DehnOptions) -> Result<DehnProfile> {
    let filler = Filler::new(k, order)?;
    let simplices = k.simplices(order);
    let faces: Vec<Vec<(usize, i64)>> = k.boundary_columns(order);
    let face_total = if order == 0 { 0 } else { k.simplices(order - 1).len() };
    let mut cofaces = vec![Vec::new(); face_total];
    for (j, fs) in faces.iter().enumerate() {
        for &(f, s) in fs {
            cofaces[f].push((j, s));
        }
    }
    let mut search = Search {
        filler: &filler,
        faces,
        cofaces,
        k_max,
        face_count: order as u64 + 1,
        options,
        best: vec![0; k_max as usize + 1],
        counts: vec![0; k_max as usize + 1],
        out_of_box: 0,
        states: 0,
        truncated: false,
    };
    if k_max > 0 {
        for s0 in 0..simplices.len() {
            search.run_from(s0)?;
            if search.truncated {
                break;
            }
        }
    }
    let mut rows = Vec::new();
    let mut running = 0;
    for kk in 0..=k_max {
        running = running.max(search.best[kk as usize]);
        rows.push(DehnRow { k: kk, value: running, boundaries: search.counts[kk as usize] });
    }
    Ok(DehnProfile { order, rows, truncated: search.truncated, out_of_box: search.out_of_box })
}

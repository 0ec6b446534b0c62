//! Synchronous combings and exhaustive checks of their properties on balls.
//!
//! A path is stored as its positions `σ(g)(0), …, σ(g)(L)`, and `σ(g)(t) = σ(g)(L)` for
//! `t > L`. Every check here is exact on the enumerated ball `B_R`. It is evidence for the
//! global property, not a proof of it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{QlabError, Result};
use crate::estimates::fit_slope;
use crate::group::{Family, GroupElement, MarkedGroup};

/// Grids searched by [`quasi_geodesic_check`] for the smallest passing constants.
pub const LAMBDA_GRID: [f64; 6] = [1.0, 1.25, 1.5, 2.0, 3.0, 4.0];
pub const C_GRID: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// `Z^n`: exhaust generator 1, then generator 2, and so on.
    StraightLine,
    /// `F_k` (and `Z/m`): follow the reduced word.
    Geodesic,
    /// `H3`: follow `x^a y^b [x,y]^c`.
    NaiveNormalForm,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::StraightLine => "straight-line",
            Scheme::Geodesic => "geodesic",
            Scheme::NaiveNormalForm => "naive-normal-form",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = QlabError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "straight-line" | "staircase" => Ok(Scheme::StraightLine),
            "geodesic" => Ok(Scheme::Geodesic),
            "naive-normal-form" | "naive" => Ok(Scheme::NaiveNormalForm),
            other => Err(QlabError::Parse(format!("unknown combing scheme `{other}`"))),
        }
    }
}

type PathFn = dyn Fn(&MarkedGroup, &GroupElement) -> Vec<GroupElement> + Send + Sync;

#[derive(Clone)]
enum Evaluator {
    Word,
    Custom(Arc<PathFn>),
}

#[derive(Clone)]
pub struct Combing {
    group: MarkedGroup,
    name: String,
    evaluator: Evaluator,
}

impl fmt::Debug for Combing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Combing({}, {})", self.group.descriptor(), self.name)
    }
}

impl Combing {
    pub fn new(group: &MarkedGroup, scheme: Scheme) -> Result<Self> {
        let supported = matches!(
            (scheme, group.family()),
            (Scheme::StraightLine, Family::FreeAbelian(_))
                | (Scheme::Geodesic, Family::Free(_) | Family::Cyclic(_))
                | (Scheme::NaiveNormalForm, Family::Heisenberg)
        );
        if !supported {
            return Err(QlabError::UnsupportedScheme { scheme: scheme.to_string(), group: group.descriptor() });
        }
        Ok(Self { group: group.clone(), name: scheme.to_string(), evaluator: Evaluator::Word })
    }

    /// A combing from an arbitrary path function, e.g. test fixtures.
    pub fn custom<F>(group: &MarkedGroup, name: &str, path: F) -> Self
    where
        F: Fn(&MarkedGroup, &GroupElement) -> Vec<GroupElement> + Send + Sync + 'static,
    {
        Self { group: group.clone(), name: name.to_string(), evaluator: Evaluator::Custom(Arc::new(path)) }
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Positions `σ(g)(0..=L)`; never empty.
    pub fn path(&self, g: &GroupElement) -> Vec<GroupElement> {
        let mut path = match &self.evaluator {
            Evaluator::Word => {
                let mut current = self.group.identity();
                let mut out = vec![current.clone()];
                for l in self.group.to_word(g) {
                    current = self.group.multiply(&current, &self.group.letter_element(l));
                    out.push(current.clone());
                }
                out
            }
            Evaluator::Custom(f) => f(&self.group, g),
        };
        if path.is_empty() {
            path.push(self.group.identity());
        }
        path
    }

    /// `σ(g)(t)`.
    pub fn at(&self, g: &GroupElement, t: usize) -> GroupElement {
        let path = self.path(g);
        path[t.min(path.len() - 1)].clone()
    }

    /// Least `L` with `σ(g)(t)` constant for `t >= L`.
    pub fn length(&self, g: &GroupElement) -> usize {
        path_length(&self.path(g))
    }
}

fn path_length(path: &[GroupElement]) -> usize {
    let last = &path[path.len() - 1];
    path.iter().rposition(|x| x != last).map_or(0, |i| i + 1)
}

fn clamp(path: &[GroupElement], t: usize) -> &GroupElement {
    &path[t.min(path.len() - 1)]
}

/// Counts of path invariant failures over `B_R`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantReport {
    pub checked: usize,
    pub bad_start: usize,
    pub bad_end: usize,
    pub speed_violations: usize,
}

impl InvariantReport {
    pub fn holds(&self) -> bool {
        self.bad_start + self.bad_end + self.speed_violations == 0
    }
}

pub fn check_invariants(sigma: &Combing, radius: u32) -> Result<InvariantReport> {
    let group = sigma.group();
    let ball = group.ball(radius)?;
    let e = group.identity();
    let report = ball
        .elements()
        .par_iter()
        .map(|(g, _)| {
            let path = sigma.path(g);
            let speed = path.windows(2).filter(|w| group.distance(&w[0], &w[1]) > 1).count();
            InvariantReport {
                checked: 1,
                bad_start: usize::from(path[0] != e),
                bad_end: usize::from(path[path.len() - 1] != *g),
                speed_violations: speed,
            }
        })
        .reduce(InvariantReport::default, |a, b| InvariantReport {
            checked: a.checked + b.checked,
            bad_start: a.bad_start + b.bad_start,
            bad_end: a.bad_end + b.bad_end,
            speed_violations: a.speed_violations + b.speed_violations,
        });
    Ok(report)
}

/// One row per radius `r <= R`: longest path on `S_r` and fellow-traveler constant on `B_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombingRow {
    pub r: u32,
    pub max_path_length: usize,
    pub ft_constant_so_far: u32,
}

/// Fellow-traveler constants on `B_r` for every `r <= R`, with the longest path on each sphere.
///
/// A pair `g, h` with `d(g, h) <= 1` contributes to every ball containing both.
pub fn combing_table(sigma: &Combing, radius: u32) -> Result<Vec<CombingRow>> {
    let group = sigma.group();
    let ball = group.ball(radius)?;
    let gens = group.generators();
    let paths: Vec<Vec<GroupElement>> = ball.elements().par_iter().map(|(g, _)| sigma.path(g)).collect();
    let per_element: Vec<(u32, usize, u32)> = ball
        .elements()
        .par_iter()
        .enumerate()
        .map(|(i, (g, dg))| {
            let pg = &paths[i];
            let mut worst = 0;
            for s in &gens {
                let h = group.multiply(g, s);
                let Some(j) = ball.position(&h) else { continue };
                // each unordered pair once, attributed to the outer of the two radii
                let dh = ball.elements()[j].1;
                if (dh, j) > (*dg, i) {
                    continue;
                }
                let ph = &paths[j];
                let horizon = pg.len().max(ph.len());
                for t in 0..horizon {
                    worst = worst.max(group.distance(clamp(pg, t), clamp(ph, t)));
                }
            }
            (*dg, path_length(pg), worst)
        })
        .collect();
    let mut rows: Vec<CombingRow> =
        (0..=radius).map(|r| CombingRow { r, max_path_length: 0, ft_constant_so_far: 0 }).collect();
    for (d, len, ft) in per_element {
        let row = &mut rows[d as usize];
        row.max_path_length = row.max_path_length.max(len);
        row.ft_constant_so_far = row.ft_constant_so_far.max(ft);
    }
    for r in 1..rows.len() {
        rows[r].ft_constant_so_far = rows[r].ft_constant_so_far.max(rows[r - 1].ft_constant_so_far);
    }
    Ok(rows)
}

/// Least `k` such that paths to neighbours in `B_R` stay `k`-close at all times (verified on `B_R`).
pub fn fellow_traveler_constant(sigma: &Combing, radius: u32) -> Result<u32> {
    Ok(combing_table(sigma, radius)?.last().map_or(0, |r| r.ft_constant_so_far))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiGeodesicReport {
    pub lambda: f64,
    pub c: f64,
    pub radius: u32,
    pub pass: bool,
    /// Paths that do not end at their target.
    pub bad_endpoints: usize,
    /// Steps longer than one.
    pub speed_violations: usize,
    /// `max (|s - t| / λ - c - d(σ(g)(s), σ(g)(t)))`; the lower bound holds iff this is `<= 0`.
    pub worst_excess: f64,
    /// Smallest `(λ, c)` on [`LAMBDA_GRID`] × [`C_GRID`] that passes, ordered by `λ` then `c`.
    pub smallest: Option<(f64, f64)>,
}

/// Checks `|s - t| / λ - c <= d(σ(g)(s), σ(g)(t)) <= |s - t|` for `g ∈ B_R`, `s, t <= L(g)`.
///
/// Times past the length are excluded since a constant tail is not a quasi-geodesic.
/// A path that misses its endpoint fails every pair of constants.
pub fn quasi_geodesic_check(sigma: &Combing, lambda: f64, c: f64, radius: u32) -> Result<QuasiGeodesicReport> {
    if !(lambda >= 1.0) || !(c >= 0.0) {
        return Err(QlabError::InvalidParameter(format!("need λ >= 1 and c >= 0, got ({lambda}, {c})")));
    }
    let group = sigma.group();
    let ball = group.ball(radius)?;
    // for each λ on the grid (and the requested λ), the largest |s - t| / λ - d
    let lambdas: Vec<f64> = LAMBDA_GRID.iter().copied().chain([lambda]).collect();
    let zero = || (0usize, 0usize, vec![f64::NEG_INFINITY; lambdas.len()]);
    let (bad_endpoints, speed_violations, excess) = ball
        .elements()
        .par_iter()
        .map(|(g, _)| {
            let path = sigma.path(g);
            let len = path_length(&path);
            let mut acc = zero();
            acc.0 = usize::from(path[path.len() - 1] != *g);
            for s in 0..=len {
                for t in s + 1..=len {
                    let d = f64::from(group.distance(&path[s], &path[t]));
                    let gap = (t - s) as f64;
                    if d > gap {
                        acc.1 += 1;
                    }
                    for (x, l) in acc.2.iter_mut().zip(&lambdas) {
                        *x = x.max(gap / l - d);
                    }
                }
            }
            acc
        })
        .reduce(zero, |a, b| {
            (a.0 + b.0, a.1 + b.1, a.2.iter().zip(&b.2).map(|(x, y)| x.max(*y)).collect())
        });
    let clean = bad_endpoints == 0 && speed_violations == 0;
    let worst_excess = excess[lambdas.len() - 1] - c;
    let smallest = if clean {
        LAMBDA_GRID.iter().zip(&excess).find_map(|(&l, &need)| C_GRID.iter().find(|&&cc| need <= cc).map(|&cc| (l, cc)))
    } else {
        None
    };
    Ok(QuasiGeodesicReport {
        lambda,
        c,
        radius,
        pass: clean && worst_excess <= 0.0,
        bad_endpoints,
        speed_violations,
        worst_excess,
        smallest,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LengthGrowth {
    /// `(r, max length over S_r)`.
    pub rows: Vec<(u32, usize)>,
    /// Least-squares slope of `log max length` against `log r`, over `r >= 1` with nonzero length.
    pub exponent: Option<f64>,
}

pub fn length_growth(sigma: &Combing, radius: u32) -> Result<LengthGrowth> {
    let group = sigma.group();
    let ball = group.ball(radius)?;
    let lengths: Vec<(u32, usize)> = ball.elements().par_iter().map(|(g, d)| (*d, sigma.length(g))).collect();
    let mut rows: Vec<(u32, usize)> = (0..=radius).map(|r| (r, 0)).collect();
    for (d, l) in lengths {
        rows[d as usize].1 = rows[d as usize].1.max(l);
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|(r, l)| *r >= 1 && *l > 0)
        .map(|&(r, l)| (f64::from(r).ln(), (l as f64).ln()))
        .unzip();
    Ok(LengthGrowth { exponent: fit_slope(&xs, &ys), rows })
}

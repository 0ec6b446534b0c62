//! Batch campaigns behind the `qlab` command line.
//!
//! Each subcommand produces one [`Table`]. Trials run in parallel, each on its own seeded
//! stream, and rows are sorted on emission, so a fixed seed gives byte-identical reports.
//!
//! Exit status: 0 when every check passed, 1 on an inequality or identity violation,
//! 2 on bad input, 3 when a cap (ball size, search states, area, coefficient box) was hit.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num::complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::combing::{check_invariants, combing_table, length_growth, quasi_geodesic_check, Combing, Scheme};
use crate::cyclic::{check_chain_map, check_rd_bound, check_young_bound, random_tensor, TensorChain, TensorFile};
use crate::error::{QlabError, Result};
use crate::estimates::{
    check_composition_estimate_with, check_kernel_estimates_with, check_power_estimate_with, neumann_invert,
    EstimateReport,
};
use crate::filling::{dehn_profile, vankampen_area, ComplexFile, DehnOptions, FiniteSimplicialComplex, Presentation};
use crate::group::MarkedGroup;
use crate::kernel::{Kernel, KernelFile};
use crate::quasilocal::{dominating_profile, operator_norm, ProfileOptions};
use crate::random::{random_kernel, trial_rng, RNG_ALGORITHM};
use crate::report::{Cell, Format, Table};
use crate::scalar::{GaussianRational, Scalar};
use crate::uf::{random_chain, ChainFile, EquivariantChain};

/// Environment variable overriding the ball cap.
pub const BALL_CAP_VAR: &str = "QLAB_BALL_CAP";

/// Relative slack for `lower <= upper` consistency of enclosures.
const ENCLOSURE_TOL: f64 = 1e-9;

#[derive(Parser, Clone, Debug)]
#[command(name = "qlab", version, about = "Quasi-local operators, uniformly finite chains, fillings and combings")]
pub struct ExperimentConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value = "csv")]
    pub format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Clone, Debug)]
pub struct RandomKernels {
    #[arg(long, default_value = "Z^1")]
    pub group: String,
    #[arg(long, default_value_t = 100)]
    pub trials: u64,
    /// Random kernels are supported in `B_{prop-max}`.
    #[arg(long, default_value_t = 4)]
    pub prop_max: u32,
    #[arg(long, default_value_t = 6)]
    pub max_support: usize,
}

#[derive(Subcommand, Clone, Debug)]
pub enum Command {
    /// Elements of B_R with their word lengths.
    Ball {
        #[arg(long)]
        group: String,
        #[arg(long)]
        radius: u32,
    },
    /// Operator norm enclosures on a window.
    Opnorm {
        #[command(flatten)]
        source: RandomKernels,
        /// JSON kernel file; overrides the random campaign.
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value_t = 4)]
        window: u32,
    },
    /// Dominating-function enclosures per radius.
    Domfun {
        #[command(flatten)]
        source: RandomKernels,
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "2..8")]
        radii: List<f64>,
    },
    /// Composition estimate on random kernel pairs.
    VerifyRoe {
        #[command(flatten)]
        source: RandomKernels,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "2..16")]
        radii: List<f64>,
    },
    /// Power estimate for powers 1..=n.
    VerifyPower {
        #[command(flatten)]
        source: RandomKernels,
        #[arg(long, default_value_t = 4)]
        n: u32,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "2..16")]
        radii: List<f64>,
    },
    /// Neumann-series inverse and its decay.
    Neumann {
        #[arg(long, default_value = "Z^1")]
        group: String,
        /// JSON kernel file; defaults to `id - ε·(mean of generators)`.
        #[arg(long)]
        kernel: Option<PathBuf>,
        #[arg(long, default_value_t = 0.04)]
        epsilon: f64,
        #[arg(long, default_value_t = 40)]
        terms: u32,
    },
    /// Tail-sum and weighted-sum kernel estimates.
    KernelEst {
        #[command(flatten)]
        source: RandomKernels,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, default_value = "1..3")]
        n: List<u32>,
    },
    /// Exact chain-map and descent identities of the character.
    Chi {
        #[arg(long, default_value = "Z^1")]
        group: String,
        #[arg(long, default_value = "2")]
        degree: List<u32>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// JSON tensor file; overrides the random campaign.
        #[arg(long)]
        tensor: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        prop_max: u32,
        #[arg(long, default_value_t = 3)]
        max_support: usize,
        #[arg(long, default_value_t = 2)]
        max_terms: usize,
    },
    /// Young-type continuity bound, optionally with the pointwise operator-norm estimate.
    Young {
        #[arg(long, default_value = "Z^1")]
        group: String,
        #[arg(long, default_value = "1..2")]
        degree: List<u32>,
        #[arg(long, default_value = "1..3")]
        k: List<u32>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        /// Exponent; defaults to (n+1)/n.
        #[arg(long)]
        p: Option<f64>,
        /// Also check the operator-norm estimate on this window radius.
        #[arg(long)]
        rd_window: Option<u32>,
        #[arg(long, default_value_t = 2)]
        prop_max: u32,
        #[arg(long, default_value_t = 3)]
        max_support: usize,
        #[arg(long, default_value_t = 2)]
        max_terms: usize,
    },
    /// Weighted norms of equivariant chains.
    UfNorm {
        #[arg(long, default_value = "Z^1")]
        group: String,
        /// JSON chain file; overrides the random campaign.
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long, default_value = "0..2")]
        n: List<u32>,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 2)]
        degree: u32,
        #[arg(long, default_value_t = 3)]
        prop_max: u32,
        #[arg(long, default_value_t = 4)]
        max_terms: usize,
    },
    /// Dehn profile of a finite complex.
    Dehn {
        /// JSON list of maximal simplices.
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Triangulated grid `WxH`, used when no complex file is given.
        #[arg(long, default_value = "6x6")]
        grid: String,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 8)]
        kmax: u64,
        #[arg(long)]
        coeff_bound: Option<i64>,
        #[arg(long, default_value_t = 50_000_000)]
        state_cap: usize,
    },
    /// Van Kampen area of words in a finite presentation.
    Vankampen {
        #[arg(long)]
        presentation: String,
        #[arg(long, required = true)]
        word: Vec<String>,
        #[arg(long, default_value_t = 10)]
        max_area: u32,
    },
    /// Fellow-traveler, quasi-geodesic and length-growth checks of a combing.
    Combing {
        #[arg(long)]
        group: String,
        #[arg(long)]
        scheme: Scheme,
        #[arg(long, default_value_t = 6)]
        radius: u32,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        c: Option<f64>,
    },
}

/// `"2..16"` (inclusive, integer steps) or `"2,3.5,8"`.
pub fn parse_reals(text: &str) -> std::result::Result<Vec<f64>, String> {
    if let Some((a, b)) = text.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| format!("bad range start in `{text}`"))?;
        let b: i64 = b.trim().parse().map_err(|_| format!("bad range end in `{text}`"))?;
        if a > b {
            return Err(format!("empty range `{text}`"));
        }
        return Ok((a..=b).map(|x| x as f64).collect());
    }
    text.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| format!("bad number `{x}`"))).collect()
}

pub fn parse_naturals(text: &str) -> std::result::Result<Vec<u32>, String> {
    let reals = parse_reals(text)?;
    reals
        .iter()
        .map(|&x| if x >= 0.0 && x.fract() == 0.0 && x <= f64::from(u32::MAX) { Ok(x as u32) } else { Err(format!("`{x}` is not a natural number")) })
        .collect()
}

/// A list flag such as `2..16` or `1,2,3`.
#[derive(Clone, Debug, PartialEq)]
pub struct List<T>(pub Vec<T>);

impl<T> std::ops::Deref for List<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl std::str::FromStr for List<f64> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_reals(s).map(List)
    }
}

impl std::str::FromStr for List<u32> {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_naturals(s).map(List)
    }
}

/// The outcome of a campaign.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub table: Table,
    pub violations: usize,
    pub capped: bool,
}

impl RunOutput {
    pub fn status(&self) -> i32 {
        if self.violations > 0 {
            1
        } else if self.capped {
            3
        } else {
            0
        }
    }
}

/// Exit status for an error raised before or during a campaign.
pub fn error_status(e: &QlabError) -> i32 {
    match e {
        QlabError::BallCapExceeded { .. } | QlabError::CapExceeded(_) => 3,
        _ => 2,
    }
}

/// A group with the ball cap taken from the environment, if set.
pub fn make_group(descriptor: &str) -> Result<MarkedGroup> {
    let group = MarkedGroup::parse(descriptor)?;
    match std::env::var(BALL_CAP_VAR) {
        Ok(v) => {
            let cap = v.trim().parse::<usize>().map_err(|_| QlabError::Parse(format!("{BALL_CAP_VAR}=`{v}` is not a count")))?;
            Ok(group.with_ball_cap(cap))
        }
        Err(_) => Ok(group),
    }
}

fn read(path: &PathBuf) -> Result<String> {
    Ok(std::fs::read_to_string(path)?)
}

fn load_kernel(path: &PathBuf, group: &MarkedGroup) -> Result<Kernel<Complex64>> {
    let file = KernelFile::parse(&read(path)?)?;
    let k: Kernel<Complex64> = file.to_kernel()?;
    if k.group() != group {
        return Err(QlabError::GroupMismatch(file.group, group.descriptor()));
    }
    Ok(k)
}

/// Runs `f` for every trial index in parallel; results come back in trial order.
fn campaign<T: Send>(trials: u64, f: impl Fn(u64) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    (0..trials).into_par_iter().map(f).collect()
}

fn estimate_rows(table: &mut Table, prefix: Vec<Cell>, report: &EstimateReport) -> Result<usize> {
    for row in &report.rows {
        let mut cells = prefix.clone();
        cells.extend([
            row.check.as_str().into(),
            row.radius.into(),
            row.lhs_lower.into(),
            row.rhs_upper.into(),
            row.slack().into(),
            row.pass.into(),
        ]);
        table.push(cells)?;
    }
    Ok(report.violations())
}

fn header(table: &mut Table, command: &str, seed: u64) {
    table.set_meta("command", command);
    table.set_meta("rng", RNG_ALGORITHM);
    table.set_meta("seed", seed);
}

fn kernel_campaign(
    source: &RandomKernels,
    kernel: &Option<PathBuf>,
    seed: u64,
) -> Result<(MarkedGroup, Vec<Kernel<Complex64>>)> {
    let group = make_group(&source.group)?;
    if let Some(path) = kernel {
        return Ok((group.clone(), vec![load_kernel(path, &group)?]));
    }
    let pool = group.ball(source.prop_max)?;
    let kernels = campaign(source.trials, |t| {
        let mut rng = trial_rng(seed, t);
        Ok(random_kernel::<Complex64, _>(&group, &pool, source.max_support, &mut rng))
    })?;
    Ok((group, kernels))
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutput> {
    let seed = config.seed;
    let mut violations = 0;
    let mut capped = false;
    let table = match &config.command {
        Command::Ball { group, radius } => {
            let g = make_group(group)?;
            let ball = g.ball(*radius)?;
            let mut t = Table::new(&["length", "element"], &["length", "element"]);
            header(&mut t, "ball", seed);
            t.set_meta("group", g.descriptor());
            t.set_meta("sphere_sizes", format!("{:?}", ball.sphere_sizes()));
            for (x, d) in ball.elements() {
                t.push(vec![(*d).into(), g.format_element(x).into()])?;
            }
            t
        }
        Command::Opnorm { source, kernel, p, window } => {
            let (g, kernels) = kernel_campaign(source, kernel, seed)?;
            let ball = g.ball(*window)?;
            let bounds = campaign(kernels.len() as u64, |i| operator_norm(&kernels[i as usize], *p, &ball))?;
            let mut t = Table::new(&["trial", "p", "window", "lower", "upper", "pass"], &["trial"]);
            header(&mut t, "opnorm", seed);
            t.set_meta("group", g.descriptor());
            for (i, b) in bounds.iter().enumerate() {
                let pass = b.lower <= b.upper * (1.0 + ENCLOSURE_TOL);
                violations += usize::from(!pass);
                t.push(vec![i.into(), (*p).into(), (*window).into(), b.lower.into(), b.upper.into(), pass.into()])?;
            }
            t
        }
        Command::Domfun { source, kernel, p, radii } => {
            let (g, kernels) = kernel_campaign(source, kernel, seed)?;
            let max_r = radii.iter().fold(0.0f64, |m, r| m.max(*r)).ceil() as u32;
            let prop = kernels.iter().map(Kernel::propagation).max().unwrap_or(0);
            let ball = g.ball(max_r + prop)?;
            let profiles = campaign(kernels.len() as u64, |i| dominating_profile(&kernels[i as usize], *p, &ball, radii))?;
            let mut t = Table::new(&["trial", "R", "lower", "upper", "pass"], &["trial", "R"]);
            header(&mut t, "domfun", seed);
            t.set_meta("group", g.descriptor());
            t.set_meta("p", p);
            for (i, prof) in profiles.iter().enumerate() {
                for (r, b) in prof.radii.iter().zip(&prof.bounds) {
                    let pass = b.lower <= b.upper * (1.0 + ENCLOSURE_TOL);
                    violations += usize::from(!pass);
                    t.push(vec![i.into(), (*r).into(), b.lower.into(), b.upper.into(), pass.into()])?;
                }
            }
            t
        }
        Command::VerifyRoe { source, p, radii } => {
            let g = make_group(&source.group)?;
            let pool = g.ball(source.prop_max)?;
            let tests = ProfileOptions::default().test_vectors(&g)?;
            let reports = campaign(source.trials, |trial| {
                let mut rng = trial_rng(seed, trial);
                let a = random_kernel::<Complex64, _>(&g, &pool, source.max_support, &mut rng);
                let b = random_kernel::<Complex64, _>(&g, &pool, source.max_support, &mut rng);
                check_composition_estimate_with(&a, &b, *p, radii, &tests)
            })?;
            let mut t =
                Table::new(&["trial", "check", "R", "lhs_lower", "rhs_upper", "slack", "pass"], &["trial", "check", "R"]);
            header(&mut t, "verify-roe", seed);
            t.set_meta("group", g.descriptor());
            t.set_meta("p", p);
            for (trial, r) in reports.iter().enumerate() {
                violations += estimate_rows(&mut t, vec![trial.into()], r)?;
            }
            t
        }
        Command::VerifyPower { source, n, p, radii } => {
            let g = make_group(&source.group)?;
            let pool = g.ball(source.prop_max)?;
            let tests = ProfileOptions::default().test_vectors(&g)?;
            let reports = campaign(source.trials, |trial| {
                let mut rng = trial_rng(seed, trial);
                let a = random_kernel::<Complex64, _>(&g, &pool, source.max_support, &mut rng);
                (1..=*n).map(|k| check_power_estimate_with(&a, k, *p, radii, &tests)).collect::<Result<Vec<_>>>()
            })?;
            let mut t = Table::new(
                &["trial", "n", "check", "R", "lhs_lower", "rhs_upper", "slack", "pass"],
                &["trial", "n", "check", "R"],
            );
            header(&mut t, "verify-power", seed);
            t.set_meta("group", g.descriptor());
            t.set_meta("p", p);
            for (trial, per_n) in reports.iter().enumerate() {
                for (k, r) in per_n.iter().enumerate() {
                    violations += estimate_rows(&mut t, vec![trial.into(), (k + 1).into()], r)?;
                }
            }
            t
        }
        Command::Neumann { group, kernel, epsilon, terms } => {
            let g = make_group(group)?;
            let a = match kernel {
                Some(path) => load_kernel(path, &g)?,
                None => {
                    let gens = g.generators();
                    let w = epsilon / gens.len() as f64;
                    let step = Kernel::from_entries(&g, gens.into_iter().map(|s| (s, Complex64::new(w, 0.0))));
                    Kernel::identity(&g).sub(&step)?
                }
            };
            let (_, r) = neumann_invert(&a, *terms)?;
            let mut t = Table::new(&["check", "R", "value", "bound", "pass"], &["check", "R"]);
            header(&mut t, "neumann", seed);
            t.set_meta("group", g.descriptor());
            t.set_meta("epsilon", r.epsilon);
            t.set_meta("terms", r.terms);
            t.set_meta("weight", r.weight);
            t.set_meta("in_regime", r.in_regime);
            t.push(vec!["residual".into(), Cell::Empty, r.residual.into(), r.residual_bound.into(), r.residual_pass.into()])?;
            t.push(vec!["norm".into(), Cell::Empty, r.norm_s.into(), r.norm_bound.into(), r.norm_pass.into()])?;
            t.push(vec!["slope".into(), Cell::Empty, r.slope.into(), r.slope_bound.into(), r.slope_pass.into()])?;
            for (radius, mu) in &r.decay {
                t.push(vec!["decay".into(), (*radius).into(), (*mu).into(), Cell::Empty, Cell::Empty])?;
            }
            violations += [r.residual_pass, r.norm_pass, r.slope_pass].iter().filter(|p| !**p).count();
            t
        }
        Command::KernelEst { source, p, n } => {
            let g = make_group(&source.group)?;
            let pool = g.ball(source.prop_max)?;
            let options = ProfileOptions::default();
            let reports = campaign(source.trials, |trial| {
                let mut rng = trial_rng(seed, trial);
                let a = random_kernel::<Complex64, _>(&g, &pool, source.max_support, &mut rng);
                n.iter().map(|&w| check_kernel_estimates_with(&a, *p, w, &options)).collect::<Result<Vec<_>>>()
            })?;
            let mut t = Table::new(
                &["trial", "n", "check", "R", "lhs_lower", "rhs_upper", "slack", "pass"],
                &["trial", "n", "check", "R"],
            );
            header(&mut t, "kernel-est", seed);
            t.set_meta("group", g.descriptor());
            t.set_meta("p", p);
            for (trial, per_n) in reports.iter().enumerate() {
                for (w, r) in n.iter().zip(per_n) {
                    violations += estimate_rows(&mut t, vec![trial.into(), (*w).into()], r)?;
                }
            }
            t
        }
        Command::Chi { group, degree, trials, tensor, prop_max, max_support, max_terms } => {
            let g = make_group(group)?;
            let cases: Vec<(usize, TensorChain<GaussianRational>)> = match tensor {
                Some(path) => {
                    let omega: TensorChain<GaussianRational> = TensorFile::parse(&read(path)?)?.to_tensor()?;
                    vec![(0, omega)]
                }
                None => {
                    let pool = g.ball(*prop_max)?;
                    campaign(*trials * degree.len() as u64, |idx| {
                        let d = degree[(idx / trials) as usize] as usize;
                        let mut rng = trial_rng(seed, idx);
                        Ok(((idx % trials) as usize, random_tensor(&g, &pool, d, *max_terms, *max_support, &mut rng)))
                    })?
                }
            };
            let reports = campaign(cases.len() as u64, |i| check_chain_map(&cases[i as usize].1))?;
            let mut t = Table::new(
                &["degree", "trial", "chain_map", "descends", "lhs_terms", "rhs_terms", "pass"],
                &["degree", "trial"],
            );
            header(&mut t, "chi", seed);
            t.set_meta("group", g.descriptor());
            t.set_meta("regime", GaussianRational::regime());
            for ((trial, _), r) in cases.iter().zip(&reports) {
                violations += usize::from(!r.holds());
                t.push(vec![
                    r.degree.into(),
                    (*trial).into(),
                    r.chain_map.into(),
                    r.descends.into(),
                    r.lhs_terms.into(),
                    r.rhs_terms.into(),
                    r.holds().into(),
                ])?;
            }
            t
        }
        Command::Young { group, degree, k, trials, p, rd_window, prop_max, max_support, max_terms } => {
            let g = make_group(group)?;
            let pool = g.ball(*prop_max)?;
            let window = rd_window.map(|r| g.ball(r)).transpose()?;
            let rows = campaign(*trials * degree.len() as u64, |idx| {
                let n = degree[(idx / trials) as usize] as usize;
                let trial = idx % trials;
                let mut rng = trial_rng(seed, idx);
                let omega: TensorChain<Complex64> = random_tensor(&g, &pool, n, *max_terms, *max_support, &mut rng);
                let exponent = p.unwrap_or((n as f64 + 1.0) / n as f64);
                let mut out = Vec::new();
                for &kk in k.iter() {
                    let r = check_young_bound(&omega, kk, exponent)?;
                    out.push((n, trial, "young".to_string(), kk, r));
                    if let Some(w) = &window {
                        for (s, r) in check_rd_bound(&omega, kk, w)?.into_iter().enumerate() {
                            out.push((n, trial, format!("rd-{s}"), kk, r));
                        }
                    }
                }
                Ok(out)
            })?;
            let mut t = Table::new(
                &["degree", "trial", "check", "k", "lhs", "rhs", "constant_used", "pass"],
                &["degree", "trial", "check", "k"],
            );
            header(&mut t, "young", seed);
            t.set_meta("group", g.descriptor());
            if let Some(p) = p {
                t.set_meta("p", p);
            }
            for (n, trial, check, kk, r) in rows.into_iter().flatten() {
                violations += usize::from(!r.pass);
                t.push(vec![
                    n.into(),
                    trial.into(),
                    check.into(),
                    kk.into(),
                    r.lhs.into(),
                    r.rhs.into(),
                    r.constant_used.into(),
                    r.pass.into(),
                ])?;
            }
            t
        }
        Command::UfNorm { group, chain, n, trials, degree, prop_max, max_terms } => {
            let g = make_group(group)?;
            let chains: Vec<EquivariantChain<GaussianRational>> = match chain {
                Some(path) => vec![ChainFile::parse(&read(path)?)?.to_chain(&g)?],
                None => {
                    let pool = g.ball(*prop_max)?;
                    campaign(*trials, |trial| {
                        let mut rng = trial_rng(seed, trial);
                        let d = if *degree == 0 { rng.gen_range(1..=3) } else { *degree as usize };
                        Ok(random_chain(&g, &pool, d, *max_terms, &mut rng))
                    })?
                }
            };
            let rows = campaign(chains.len() as u64, |i| {
                let c = &chains[i as usize];
                let squared_zero = c.degree() < 2 || c.boundary()?.boundary()?.is_zero();
                Ok(n.iter().map(|&w| (i, c.degree(), w, c.weighted_norm(w), c.frechet_seminorm(w), squared_zero)).collect::<Vec<_>>())
            })?;
            let mut t = Table::new(
                &["trial", "degree", "n", "weighted_norm", "frechet_seminorm", "boundary_squared_zero"],
                &["trial", "n"],
            );
            header(&mut t, "uf-norm", seed);
            t.set_meta("group", g.descriptor());
            for (i, d, w, norm, frechet, ok) in rows.into_iter().flatten() {
                violations += usize::from(!ok);
                t.push(vec![i.into(), d.into(), w.into(), norm.into(), frechet.into(), ok.into()])?;
            }
            t
        }
        Command::Dehn { complex, grid, order, kmax, coeff_bound, state_cap } => {
            let k = match complex {
                Some(path) => ComplexFile::parse(&read(path)?)?.to_complex()?,
                None => {
                    let (w, h) = grid
                        .split_once('x')
                        .and_then(|(w, h)| Some((w.trim().parse().ok()?, h.trim().parse().ok()?)))
                        .ok_or_else(|| QlabError::Parse(format!("grid must look like 6x6, got `{grid}`")))?;
                    FiniteSimplicialComplex::grid(w, h)
                }
            };
            if let Some(c) = coeff_bound {
                if *c < 1 {
                    return Err(QlabError::InvalidParameter("coefficient bound must be >= 1".into()));
                }
            }
            let options = DehnOptions { coeff_bound: *coeff_bound, state_cap: *state_cap };
            let profile = dehn_profile(&k, *order, *kmax, &options)?;
            let mut t = Table::new(&["k", "value", "boundaries"], &["k"]);
            header(&mut t, "dehn", seed);
            t.set_meta("order", order);
            t.set_meta("truncated", profile.truncated);
            t.set_meta("out_of_box", profile.out_of_box);
            for r in &profile.rows {
                t.push(vec![r.k.into(), r.value.into(), r.boundaries.into()])?;
            }
            capped = profile.truncated || profile.out_of_box > 0;
            t
        }
        Command::Vankampen { presentation, word, max_area } => {
            let pres = Presentation::parse(presentation)?;
            let words: Vec<Vec<i32>> = word.iter().map(|w| pres.parse_word(w)).collect::<Result<_>>()?;
            let areas = campaign(words.len() as u64, |i| vankampen_area(&pres, &words[i as usize], *max_area))?;
            let mut t = Table::new(&["word", "area", "found"], &["word"]);
            header(&mut t, "vankampen", seed);
            t.set_meta("presentation", presentation);
            t.set_meta("max_area", max_area);
            for (w, a) in word.iter().zip(&areas) {
                capped |= a.is_none();
                t.push(vec![w.as_str().into(), (*a).into(), a.is_some().into()])?;
            }
            t
        }
        Command::Combing { group, scheme, radius, lambda, c } => {
            let g = make_group(group)?;
            let sigma = Combing::new(&g, *scheme)?;
            let rows = combing_table(&sigma, *radius)?;
            let invariants = check_invariants(&sigma, *radius)?;
            let growth = length_growth(&sigma, *radius)?;
            let qg = quasi_geodesic_check(&sigma, lambda.unwrap_or(1.0), c.unwrap_or(0.0), *radius)?;
            let mut t = Table::new(&["r", "max_path_length", "ft_constant_so_far"], &["r"]);
            header(&mut t, "combing", seed);
            t.set_meta("group", g.descriptor());
            t.set_meta("scheme", scheme);
            t.set_meta("verified_on", format!("B_{radius}"));
            t.set_meta("invariants", invariants.holds());
            t.set_meta("length_exponent", growth.exponent.map_or("none".to_string(), |x| x.to_string()));
            t.set_meta("quasi_geodesic", format!("lambda={} c={} pass={}", qg.lambda, qg.c, qg.pass));
            t.set_meta("smallest_lambda_c", qg.smallest.map_or("none".to_string(), |(l, c)| format!("{l} {c}")));
            for r in &rows {
                t.push(vec![r.r.into(), r.max_path_length.into(), r.ft_constant_so_far.into()])?;
            }
            violations += usize::from(!invariants.holds());
            if lambda.is_some() || c.is_some() {
                violations += usize::from(!qg.pass);
            }
            t
        }
    };
    let mut table = table;
    table.set_meta("violations", violations);
    Ok(RunOutput { table, violations, capped })
}

/// Parses arguments, runs, writes the report and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match ExperimentConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let output = match run(&config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("qlab: {e}");
            return error_status(&e);
        }
    };
    let emitted = match &config.out {
        Some(path) => output.table.write(path, config.format),
        None => output.table.render(config.format).map(|text| print!("{text}")),
    };
    if let Err(e) = emitted {
        eprintln!("qlab: {e}");
        return 2;
    }
    output.status()
}

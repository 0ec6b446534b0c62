//! Certified enclosures of operator norms, dominating functions and the polynomial
//! quasi-locality norms of group-ring kernels.
//!
//! For a kernel `A` and radius `R`, the smallest dominating function is
//! `μ_A(R) = sup_u ‖Au‖_{G \ B_R(supp u)} / ‖u‖_p`. It is enclosed as follows:
//!
//! * upper: `Σ_{|g| > R} |a_g|`, the ℓ¹ bound of the tail kernel `A_{>R}`. For `x` farther
//!   than `R` from `supp u` only entries with `|h| > R` reach `x`, so `Au = A_{>R} u` there.
//! * lower: the ratio above evaluated on concrete test vectors (always including `δ_e`).
//!
//! `μ` only depends on integer distances, so it is constant on each `[k, k + 1)`.

use num::complex::Complex64;
use rand::Rng;

use crate::error::{QlabError, Result};
use crate::group::{Ball, GroupElement, MarkedGroup};
use crate::kernel::{Kernel, Vector};
use crate::random::{test_vectors, trial_rng};
use crate::scalar::Scalar;

/// Power-iteration tolerance for `p = 2`.
pub const POWER_ITERATION_TOL: f64 = 1e-9;

/// A certified enclosure `lower <= value <= upper`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundInterval {
    pub lower: f64,
    pub upper: f64,
}

impl BoundInterval {
    /// Clamps `lower` into `[0, upper]`; `upper` may be `f64::INFINITY`.
    pub fn new(lower: f64, upper: f64) -> Self {
        let upper = upper.max(0.0);
        Self { lower: lower.max(0.0).min(upper), upper }
    }

    pub fn exact(value: f64) -> Self {
        Self::new(value, value)
    }

    pub fn zero() -> Self {
        Self::exact(0.0)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(QlabError::InvalidExponent(p))
    }
}

/// Sparse compression of `T_A` to `ℓᵖ(window)`, stored by columns.
struct Compression {
    dim: usize,
    columns: Vec<Vec<(usize, Complex64)>>,
}

impl Compression {
    fn new<S: Scalar>(a: &Kernel<S>, window: &Ball) -> Self {
        let group = a.group();
        let shifts: Vec<(GroupElement, Complex64)> =
            a.entries().iter().map(|(h, c)| (group.inverse(h), c.to_c64())).collect();
        let columns = window
            .elements()
            .iter()
            .map(|(y, _)| {
                shifts
                    .iter()
                    .filter_map(|(h_inv, c)| window.position(&group.multiply(y, h_inv)).map(|x| (x, *c)))
                    .collect()
            })
            .collect();
        Self { dim: window.len(), columns }
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (y, col) in self.columns.iter().enumerate() {
            for &(x, c) in col {
                out[x] += c * v[y];
            }
        }
        out
    }

    fn apply_adjoint(&self, w: &[Complex64]) -> Vec<Complex64> {
        self.columns
            .iter()
            .map(|col| col.iter().map(|&(x, c)| c.conj() * w[x]).sum())
            .collect()
    }

    fn max_column_norm(&self, p: f64) -> f64 {
        self.columns
            .iter()
            .map(|col| lp(col.iter().map(|(_, c)| *c), p))
            .fold(0.0, f64::max)
    }
}

fn lp(values: impl Iterator<Item = Complex64>, p: f64) -> f64 {
    if p == 1.0 {
        values.map(|z| z.norm()).sum()
    } else if p == 2.0 {
        values.map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    } else {
        values.map(|z| z.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

fn duality_map(v: &[Complex64], p: f64) -> Vec<Complex64> {
    v.iter()
        .map(|z| {
            let r = z.norm();
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                z / r * r.powf(p - 1.0)
            }
        })
        .collect()
}

fn power_iteration_l2(m: &Compression, start: Vec<Complex64>) -> f64 {
    let mut v = start;
    let mut best: f64 = 0.0;
    let mut previous = f64::NEG_INFINITY;
    for _ in 0..20_000 {
        let nv = lp(v.iter().copied(), 2.0);
        if nv == 0.0 {
            break;
        }
        let w = m.apply(&v);
        let estimate = lp(w.iter().copied(), 2.0) / nv;
        best = best.max(estimate);
        if (estimate - previous).abs() <= POWER_ITERATION_TOL * estimate.max(1.0) {
            break;
        }
        previous = estimate;
        let z = m.apply_adjoint(&w);
        let nz = lp(z.iter().copied(), 2.0);
        if nz == 0.0 {
            break;
        }
        v = z.into_iter().map(|c| c / nz).collect();
    }
    best
}

/// Nonlinear power iteration for `‖M‖_{p -> p}`; every iterate gives a valid lower bound.
fn power_iteration_lp(m: &Compression, start: Vec<Complex64>, p: f64) -> f64 {
    let q = p / (p - 1.0);
    let mut x = start;
    let mut best: f64 = 0.0;
    let mut previous = f64::NEG_INFINITY;
    for _ in 0..2_000 {
        let nx = lp(x.iter().copied(), p);
        if nx == 0.0 {
            break;
        }
        let y = m.apply(&x);
        let estimate = lp(y.iter().copied(), p) / nx;
        best = best.max(estimate);
        if (estimate - previous).abs() <= 1e-12 * estimate.max(1.0) {
            break;
        }
        previous = estimate;
        let z = m.apply_adjoint(&duality_map(&y, p));
        x = duality_map(&z, q);
    }
    best
}

/// Enclosure of `‖T_A‖` on `ℓᵖ(G)`.
///
/// The lower bound is the norm of the compression to `ℓᵖ(window)`: exact column maximum
/// for `p = 1`, power iteration for `p = 2`, nonlinear power iteration from the all-ones
/// vector and seeded random restarts otherwise. The upper bound is `Σ |a_g|`.
pub fn operator_norm<S: Scalar>(a: &Kernel<S>, p: f64, window: &Ball) -> Result<BoundInterval> {
    check_exponent(p)?;
    if window.is_empty() {
        return Err(QlabError::EmptyWindow);
    }
    let upper = a.l1_norm();
    if a.is_zero() {
        return Ok(BoundInterval::zero());
    }
    let m = Compression::new(a, window);
    let ones = vec![Complex64::new(1.0, 0.0); m.dim];
    let lower = if p == 1.0 {
        m.max_column_norm(1.0)
    } else if p == 2.0 {
        power_iteration_l2(&m, ones).max(m.max_column_norm(2.0))
    } else {
        let mut rng = trial_rng(0x0b0e_5eed, window.len() as u64);
        let mut best = m.max_column_norm(p).max(power_iteration_lp(&m, ones, p));
        for _ in 0..4 {
            let start: Vec<Complex64> = (0..m.dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            best = best.max(power_iteration_lp(&m, start, p));
        }
        best
    };
    Ok(BoundInterval::new(lower, upper))
}

/// Upper bound of `μ_A(R)`, valid for every `R >= 0`.
pub fn mu_upper<S: Scalar>(a: &Kernel<S>, radius: f64) -> f64 {
    let group = a.group();
    a.entries()
        .iter()
        .filter(|(g, _)| f64::from(group.word_length(g)) > radius)
        .map(|(_, c)| c.modulus())
        .sum()
}

/// Per test vector: `‖u‖_p^p` and the pairs `(d(x, supp u), |Au(x)|^p)`.
struct Leakage {
    norm_p: f64,
    mass: Vec<(u32, f64)>,
}

fn leakage<S: Scalar>(a: &Kernel<S>, u: &Vector, p: f64) -> Leakage {
    let group = a.group();
    let au = a.apply(u);
    let support: Vec<&GroupElement> = u.keys().collect();
    let mass = au
        .iter()
        .map(|(x, v)| {
            let d = support.iter().map(|y| group.distance(x, y)).min().unwrap_or(0);
            (d, v.norm().powf(p))
        })
        .collect();
    Leakage { norm_p: u.values().map(|z| z.norm().powf(p)).sum(), mass }
}

/// Lower bounds of `μ_A(R)` for each radius, maximized over `tests`.
pub fn mu_lower<S: Scalar>(a: &Kernel<S>, p: f64, radii: &[f64], tests: &[Vector]) -> Vec<f64> {
    let mut best = vec![0.0f64; radii.len()];
    for u in tests {
        let leak = leakage(a, u, p);
        if leak.norm_p == 0.0 {
            continue;
        }
        for (i, &r) in radii.iter().enumerate() {
            let outside: f64 = leak.mass.iter().filter(|(d, _)| f64::from(*d) > r).map(|(_, m)| m).sum();
            best[i] = best[i].max((outside / leak.norm_p).powf(1.0 / p));
        }
    }
    best
}

/// Knobs for the test-vector side of the enclosures.
#[derive(Clone, Debug)]
pub struct ProfileOptions {
    /// Random vectors in addition to `δ_e`.
    pub random_vectors: usize,
    pub max_vector_support: usize,
    /// Radius of the ball random test vectors are supported in.
    pub vector_radius: u32,
    pub seed: u64,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        Self { random_vectors: 6, max_vector_support: 4, vector_radius: 2, seed: 0x5eed }
    }
}

impl ProfileOptions {
    pub fn test_vectors(&self, group: &MarkedGroup) -> Result<Vec<Vector>> {
        let pool = group.ball(self.vector_radius)?;
        let mut rng = trial_rng(self.seed, 0);
        Ok(test_vectors(group, &pool, self.random_vectors, self.max_vector_support, &mut rng))
    }
}

/// Enclosures of `μ_A(R)` on a list of radii.
#[derive(Clone, Debug)]
pub struct DominatingProfile {
    pub p: f64,
    pub radii: Vec<f64>,
    pub bounds: Vec<BoundInterval>,
}

impl DominatingProfile {
    pub fn upper_at(&self, i: usize) -> f64 {
        self.bounds[i].upper
    }
}

pub fn dominating_profile<S: Scalar>(
    a: &Kernel<S>,
    p: f64,
    window: &Ball,
    radii: &[f64],
) -> Result<DominatingProfile> {
    dominating_profile_with(a, p, window, radii, &ProfileOptions::default())
}

pub fn dominating_profile_with<S: Scalar>(
    a: &Kernel<S>,
    p: f64,
    window: &Ball,
    radii: &[f64],
    options: &ProfileOptions,
) -> Result<DominatingProfile> {
    check_exponent(p)?;
    if window.is_empty() {
        return Err(QlabError::EmptyWindow);
    }
    if let Some(bad) = radii.iter().find(|r| !(**r > 1.0)) {
        return Err(QlabError::InvalidParameter(format!("radius {bad} is not > 1")));
    }
    let max_radius = radii.iter().fold(0.0f64, |m, r| m.max(*r)).ceil() as u32;
    let required = max_radius + a.propagation();
    if window.radius() < required {
        return Err(QlabError::WindowTooSmall { window: window.radius(), required });
    }
    let mut radii = radii.to_vec();
    radii.sort_by(f64::total_cmp);
    let mut options = options.clone();
    options.vector_radius = options.vector_radius.min(window.radius());
    let tests = options.test_vectors(a.group())?;
    let lower = mu_lower(a, p, &radii, &tests);
    let bounds = radii
        .iter()
        .zip(lower)
        .map(|(&r, lo)| BoundInterval::new(lo, mu_upper(a, r)))
        .collect();
    Ok(DominatingProfile { p, radii, bounds })
}

/// Enclosures of `‖A‖_{p,μ,n}`.
#[derive(Clone, Debug)]
pub struct PolyNormReport {
    pub n: u32,
    pub p: f64,
    /// `sup_{R > 1} μ_A(R) Rⁿ`. As `μ_A` is constant on `[k, k + 1)`, this is
    /// `max_{1 <= k < prop} μ_A(k) (k + 1)ⁿ` (a supremum, approached from below).
    pub value: BoundInterval,
    /// `max μ_A(R) Rⁿ` over the integers `1 < R < prop` only.
    pub grid: BoundInterval,
}

pub fn poly_mu_norm<S: Scalar>(a: &Kernel<S>, p: f64, n: u32) -> Result<PolyNormReport> {
    poly_mu_norm_with(a, p, n, &ProfileOptions::default())
}

pub fn poly_mu_norm_with<S: Scalar>(a: &Kernel<S>, p: f64, n: u32, options: &ProfileOptions) -> Result<PolyNormReport> {
    check_exponent(p)?;
    let prop = a.propagation();
    if prop <= 1 {
        return Ok(PolyNormReport { n, p, value: BoundInterval::zero(), grid: BoundInterval::zero() });
    }
    let ks: Vec<f64> = (1..prop).map(f64::from).collect();
    let tests = options.test_vectors(a.group())?;
    let lower = mu_lower(a, p, &ks, &tests);
    let mut value = (0.0f64, 0.0f64);
    let mut grid = (0.0f64, 0.0f64);
    for (&k, lo) in ks.iter().zip(lower) {
        let up = mu_upper(a, k);
        let w = (k + 1.0).powi(n as i32);
        value = (value.0.max(lo * w), value.1.max(up * w));
        if k > 1.0 {
            let w = k.powi(n as i32);
            grid = (grid.0.max(lo * w), grid.1.max(up * w));
        }
    }
    Ok(PolyNormReport {
        n,
        p,
        value: BoundInterval::new(value.0, value.1),
        grid: BoundInterval::new(grid.0, grid.1),
    })
}

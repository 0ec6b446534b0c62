//! Checks of the dominating-function inequalities: composition, powers, Neumann series
//! inverses and the kernel (tail-sum) estimates.
//!
//! Every check compares a certified lower bound of the left side with a certified upper
//! bound of the right side, so a reported violation is a real counterexample (or a bug).

use std::f64::consts::PI;

use crate::error::{QlabError, Result};
use crate::kernel::{ensure_same_group, Kernel, Vector};
use crate::quasilocal::{mu_lower, mu_upper, poly_mu_norm_with, ProfileOptions};
use crate::scalar::Scalar;

/// Relative slack granted to `lhs <= rhs` for floating-point rounding.
pub const ESTIMATE_TOL: f64 = 1e-12;

/// Additive tolerance of the Neumann-series norm bound.
pub const NEUMANN_NORM_TOL: f64 = 1e-6;

/// Allowance added to `log(ε) / prop` in the decay-slope check.
pub const NEUMANN_SLOPE_TOL: f64 = 0.1;

/// Relative slack of the residual bound `ε^{N+1} / (1 - ε)`.
pub const NEUMANN_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateRow {
    pub check: String,
    pub radius: Option<f64>,
    pub lhs_lower: f64,
    pub rhs_upper: f64,
    pub pass: bool,
}

impl EstimateRow {
    fn non_strict(check: &str, radius: Option<f64>, lhs: f64, rhs: f64) -> Self {
        let pass = lhs <= rhs + ESTIMATE_TOL * rhs.abs().max(f64::MIN_POSITIVE);
        Self { check: check.to_string(), radius, lhs_lower: lhs, rhs_upper: rhs, pass }
    }

    /// `lhs < rhs`, except that `0 < 0` counts as holding.
    fn strict(check: &str, radius: Option<f64>, lhs: f64, rhs: f64) -> Self {
        let pass = lhs < rhs || (lhs == 0.0 && rhs == 0.0);
        Self { check: check.to_string(), radius, lhs_lower: lhs, rhs_upper: rhs, pass }
    }

    pub fn slack(&self) -> f64 {
        self.rhs_upper - self.lhs_lower
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EstimateReport {
    pub rows: Vec<EstimateRow>,
}

impl EstimateReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.pass).count()
    }
}

fn check_radii(radii: &[f64]) -> Result<()> {
    match radii.iter().find(|r| !(**r > 1.0)) {
        Some(r) => Err(QlabError::InvalidParameter(format!("radius {r} is not > 1"))),
        None => Ok(()),
    }
}

/// `lower(μ_{AB}(R)) <= ‖A‖·2μ_B(R/2) + μ_A(R/2)·(‖B‖ + 2μ_B(R/2))` for each `R`.
pub fn check_composition_estimate<S: Scalar>(a: &Kernel<S>, b: &Kernel<S>, p: f64, radii: &[f64]) -> Result<EstimateReport> {
    let tests = ProfileOptions::default().test_vectors(a.group())?;
    check_composition_estimate_with(a, b, p, radii, &tests)
}

pub fn check_composition_estimate_with<S: Scalar>(
    a: &Kernel<S>,
    b: &Kernel<S>,
    p: f64,
    radii: &[f64],
    tests: &[Vector],
) -> Result<EstimateReport> {
    ensure_same_group(a.group(), b.group())?;
    check_radii(radii)?;
    let ab = a.convolve(b)?;
    let lhs = mu_lower(&ab, p, radii, tests);
    let (na, nb) = (a.l1_norm(), b.l1_norm());
    let rows = radii
        .iter()
        .zip(lhs)
        .map(|(&r, lhs)| {
            let mu_a = mu_upper(a, r / 2.0);
            let mu_b = mu_upper(b, r / 2.0);
            let rhs = na * 2.0 * mu_b + mu_a * (nb + 2.0 * mu_b);
            EstimateRow::non_strict("composition", Some(r), lhs, rhs)
        })
        .collect();
    Ok(EstimateReport { rows })
}

/// `lower(μ_{A^{n+1}}(R)) <= Σ_{k=1}^{n} 5^k ‖A‖^n μ_A(R / 2^k)` for each `R`.
pub fn check_power_estimate<S: Scalar>(a: &Kernel<S>, n: u32, p: f64, radii: &[f64]) -> Result<EstimateReport> {
    let tests = ProfileOptions::default().test_vectors(a.group())?;
    check_power_estimate_with(a, n, p, radii, &tests)
}

pub fn check_power_estimate_with<S: Scalar>(
    a: &Kernel<S>,
    n: u32,
    p: f64,
    radii: &[f64],
    tests: &[Vector],
) -> Result<EstimateReport> {
    if n == 0 {
        return Err(QlabError::InvalidParameter("power n must be >= 1".into()));
    }
    check_radii(radii)?;
    let power = a.to_float().power(n + 1);
    let lhs = mu_lower(&power, p, radii, tests);
    let norm_n = a.l1_norm().powi(n as i32);
    let rows = radii
        .iter()
        .zip(lhs)
        .map(|(&r, lhs)| {
            let rhs: f64 = (1..=n)
                .map(|k| 5f64.powi(k as i32) * norm_n * mu_upper(a, r / 2f64.powi(k as i32)))
                .sum();
            EstimateRow::non_strict("power", Some(r), lhs, rhs)
        })
        .collect();
    Ok(EstimateReport { rows })
}

#[derive(Clone, Debug)]
pub struct NeumannOptions {
    /// Weight `l` of the norm bound.
    pub weight: u32,
    /// Radii of the decay-slope fit.
    pub slope_radii: Vec<f64>,
    pub profile: ProfileOptions,
}

impl Default for NeumannOptions {
    fn default() -> Self {
        Self { weight: 1, slope_radii: (2..=20).map(f64::from).collect(), profile: ProfileOptions::default() }
    }
}

#[derive(Clone, Debug)]
pub struct NeumannReport {
    pub epsilon: f64,
    pub terms: u32,
    pub weight: u32,
    /// `Σ |c_g|` of the residual `id - A S_N`.
    pub residual: f64,
    pub residual_bound: f64,
    pub residual_pass: bool,
    /// `ε < ½ · 1 / (5 · 2^l)`: the regime in which the norm bound is claimed.
    pub in_regime: bool,
    pub norm_s: f64,
    pub norm_a: f64,
    pub norm_bound: f64,
    pub norm_pass: bool,
    /// Least-squares slope of `log upper(μ_{S_N}(R))` against `R`.
    pub slope: f64,
    pub slope_bound: f64,
    pub slope_pass: bool,
    pub decay: Vec<(f64, f64)>,
}

impl NeumannReport {
    pub fn holds(&self) -> bool {
        self.residual_pass && self.norm_pass && self.slope_pass
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// `S_N = Σ_{k=0}^{N} (id - A)^k` together with its decay report.
pub fn neumann_invert<S: Scalar>(a: &Kernel<S>, terms: u32) -> Result<(Kernel<S>, NeumannReport)> {
    neumann_invert_with(a, terms, &NeumannOptions::default())
}

pub fn neumann_invert_with<S: Scalar>(a: &Kernel<S>, terms: u32, options: &NeumannOptions) -> Result<(Kernel<S>, NeumannReport)> {
    let group = a.group();
    let id = Kernel::<S>::identity(group);
    let q = id.sub(a)?;
    let epsilon = q.l1_norm();
    if epsilon >= 1.0 {
        return Err(QlabError::Divergent(epsilon));
    }
    let cap = group.ball_cap();
    let mut sum = id.clone();
    let mut term = id.clone();
    for _ in 0..terms {
        term = term.convolve(&q)?;
        if term.support_len() > cap {
            return Err(QlabError::BallCapExceeded { radius: terms * q.propagation(), cap });
        }
        sum = sum.add(&term)?;
    }
    let residual_kernel = term.convolve(&q)?;
    if S::regime() == "exact" {
        let direct = id.sub(&a.convolve(&sum)?)?;
        if direct != residual_kernel {
            return Err(QlabError::IdentityFailure("id - A S_N differs from (id - A)^(N+1)".into()));
        }
    }
    let residual = residual_kernel.l1_norm();
    let residual_bound = epsilon.powi(terms as i32 + 1) / (1.0 - epsilon);

    let l = options.weight;
    let norm_s = poly_mu_norm_with(&sum, 2.0, l, &options.profile)?.value.upper;
    let norm_a = poly_mu_norm_with(a, 2.0, l, &options.profile)?.value.upper;
    let norm_bound = 2.0 / (1.0 - epsilon) * norm_a;

    let decay: Vec<(f64, f64)> = options.slope_radii.iter().map(|&r| (r, mu_upper(&sum, r))).collect();
    let fit: Vec<(f64, f64)> = decay.iter().filter(|(_, m)| *m > 0.0).map(|&(r, m)| (r, m.ln())).collect();
    let xs: Vec<f64> = fit.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = fit.iter().map(|p| p.1).collect();
    let slope = fit_slope(&xs, &ys).unwrap_or(f64::NEG_INFINITY);
    let prop = a.propagation().max(1);
    let slope_bound = epsilon.ln() / f64::from(prop) + NEUMANN_SLOPE_TOL;

    let report = NeumannReport {
        epsilon,
        terms,
        weight: l,
        residual,
        residual_bound,
        residual_pass: residual <= residual_bound * (1.0 + NEUMANN_RESIDUAL_TOL),
        in_regime: epsilon < 0.5 / (5.0 * 2f64.powi(l as i32)),
        norm_s,
        norm_a,
        norm_bound,
        norm_pass: norm_s <= norm_bound + NEUMANN_NORM_TOL,
        slope,
        slope_bound,
        slope_pass: slope <= slope_bound,
        decay,
    };
    Ok((sum, report))
}

/// Tail-sum lemma and its weighted corollary, for `p = 2` and for the given `p`.
///
/// With `U = upper(‖A‖_{p,μ,n})`:
/// * `tail`: `Σ_{|g|>R} |a_g|² < U² / R^{2n}` for integers `1 < R < prop`;
/// * `corollary`: `Σ_{g≠e} |g|^{2n-2} |a_g|² < U² π²/6`;
/// * `lp-tail`, `lp-corollary`: the same with exponents `pn` and `pn - 2` on `|a_g|^p`.
pub fn check_kernel_estimates<S: Scalar>(a: &Kernel<S>, p: f64, n: u32) -> Result<EstimateReport> {
    check_kernel_estimates_with(a, p, n, &ProfileOptions::default())
}

pub fn check_kernel_estimates_with<S: Scalar>(a: &Kernel<S>, p: f64, n: u32, options: &ProfileOptions) -> Result<EstimateReport> {
    let group = a.group();
    let u2 = poly_mu_norm_with(a, 2.0, n, options)?.value.upper;
    let up = poly_mu_norm_with(a, p, n, options)?.value.upper;
    let entries: Vec<(f64, f64)> =
        a.entries().iter().map(|(g, c)| (f64::from(group.word_length(g)), c.modulus())).collect();
    let zeta2 = PI * PI / 6.0;
    let nf = f64::from(n);
    let mut rows = Vec::new();
    for (label, q, u) in [("tail", 2.0, u2), ("lp-tail", p, up)] {
        for r in 2..a.propagation() {
            let r = f64::from(r);
            let lhs: f64 = entries.iter().filter(|(d, _)| *d > r).map(|(_, m)| m.powf(q)).sum();
            rows.push(EstimateRow::strict(label, Some(r), lhs, u.powf(q) / r.powf(q * nf)));
        }
    }
    for (label, q, u) in [("corollary", 2.0, u2), ("lp-corollary", p, up)] {
        let lhs: f64 = entries
            .iter()
            .filter(|(d, _)| *d > 0.0)
            .map(|(d, m)| d.powf(q * nf - 2.0) * m.powf(q))
            .sum();
        rows.push(EstimateRow::strict(label, None, lhs, u.powf(q) * zeta2));
    }
    Ok(EstimateReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupElement, MarkedGroup};
    use crate::scalar::GaussianRational as Q;
    use num::complex::Complex64;

    fn z1() -> MarkedGroup {
        MarkedGroup::parse("Z^1").unwrap()
    }

    fn int(k: i64) -> GroupElement {
        GroupElement::Abelian(vec![k])
    }

    fn radii() -> Vec<f64> {
        (2..=16).map(f64::from).collect()
    }

    #[test]
    fn identity_composition_is_zero() {
        let g = z1();
        let id = Kernel::<Q>::identity(&g);
        let rep = check_composition_estimate(&id, &id, 2.0, &radii()).unwrap();
        assert!(rep.holds());
        assert!(rep.rows.iter().all(|r| r.lhs_lower == 0.0 && r.rhs_upper == 0.0));
    }

    #[test]
    fn composition_with_identity_reduces_to_monotonicity() {
        let g = z1();
        let a = Kernel::from_entries(&g, [(int(3), Complex64::new(0.5, 0.0)), (int(-1), Complex64::new(0.0, 1.0))]);
        let id = Kernel::identity(&g);
        let rep = check_composition_estimate(&a, &id, 1.5, &radii()).unwrap();
        assert!(rep.holds(), "{rep:?}");
    }

    #[test]
    fn power_identity_and_mismatch() {
        let g = z1();
        let id = Kernel::<Q>::identity(&g);
        assert!(check_power_estimate(&id, 2, 2.0, &[4.0, 8.0]).unwrap().holds());
        let f2 = MarkedGroup::parse("F2").unwrap();
        assert!(matches!(
            check_composition_estimate(&id, &Kernel::identity(&f2), 2.0, &[2.0]),
            Err(QlabError::GroupMismatch(..))
        ));
    }

    #[test]
    fn neumann_identity() {
        let g = z1();
        let (s, rep) = neumann_invert(&Kernel::<Q>::identity(&g), 10).unwrap();
        assert_eq!(s, Kernel::identity(&g));
        assert_eq!(rep.residual, 0.0);
        assert!(rep.decay.iter().all(|(_, m)| *m == 0.0));
        assert!(rep.holds());
    }

    #[test]
    fn neumann_divergent() {
        let g = z1();
        let a = Kernel::delta(&g, int(1), Q::one());
        assert!(matches!(neumann_invert(&a, 5), Err(QlabError::Divergent(_))));
    }

    #[test]
    fn neumann_residual_and_slope() {
        let g = z1();
        let a = Kernel::from_entries(&g, [(int(0), Q::one()), (int(1), Q::real(-1, 50)), (int(-1), Q::real(-1, 50))]);
        let (_, rep) = neumann_invert(&a, 40).unwrap();
        assert!((rep.epsilon - 0.04).abs() < 1e-15);
        assert!(rep.in_regime);
        assert!(rep.residual_pass && rep.slope_pass, "{rep:?}");
    }

    #[test]
    fn kernel_estimates_delta4() {
        let g = z1();
        let a = Kernel::delta(&g, int(4), Q::one());
        let rep = check_kernel_estimates(&a, 2.0, 2).unwrap();
        let cor = rep.rows.iter().find(|r| r.check == "corollary").unwrap();
        assert_eq!(cor.lhs_lower, 16.0);
        assert!(cor.pass);
        assert!(rep.holds());
        let id = Kernel::<Q>::identity(&g);
        let rep = check_kernel_estimates(&id, 1.5, 1).unwrap();
        assert!(rep.rows.iter().all(|r| r.lhs_lower == 0.0) && rep.holds());
    }

    #[test]
    fn fit_slope_line() {
        let xs = [1.0, 2.0, 3.0];
        assert!((fit_slope(&xs, &[1.0, -1.0, -3.0]).unwrap() + 2.0).abs() < 1e-12);
        assert_eq!(fit_slope(&[1.0], &[0.0]), None);
    }
}

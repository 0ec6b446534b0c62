//! Elementary tensors of group-ring kernels, the Hochschild boundary and cyclic operator,
//! and the character map `χ_n` into equivariant uniformly finite chains.

use std::collections::BTreeMap;

use num::complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{QlabError, Result};
use crate::group::{Ball, GroupElement, MarkedGroup};
use crate::kernel::{ensure_same_group, entries_to_records, records_to_kernel, EntryRecord, Kernel};
use crate::quasilocal::operator_norm;
use crate::random::{random_kernel, RandomScalar};
use crate::scalar::Scalar;
use crate::uf::EquivariantChain;

/// Default bound on `(n+1)! · Π |supp A_i|` per elementary tensor.
pub const DEFAULT_CHI_CAP: usize = 10_000_000;

/// Relative slack of `lhs <= rhs` in the continuity checks.
pub const CONTINUITY_TOL: f64 = 1e-12;

/// `Σ c_j · A_0 ⊗ … ⊗ A_n`.
#[derive(Clone, Debug)]
pub struct TensorChain<S> {
    group: MarkedGroup,
    degree: usize,
    terms: Vec<(S, Vec<Kernel<S>>)>,
}

impl<S: Scalar> TensorChain<S> {
    pub fn zero(group: &MarkedGroup, degree: usize) -> Self {
        Self { group: group.clone(), degree, terms: Vec::new() }
    }

    pub fn elementary(factors: Vec<Kernel<S>>) -> Result<Self> {
        let group = factors.first().ok_or(QlabError::DegreeMismatch { expected: 1, got: 0 })?.group().clone();
        let mut out = Self::zero(&group, factors.len() - 1);
        out.push(S::one(), factors)?;
        Ok(out)
    }

    pub fn push(&mut self, c: S, factors: Vec<Kernel<S>>) -> Result<()> {
        if factors.len() != self.degree + 1 {
            return Err(QlabError::DegreeMismatch { expected: self.degree + 1, got: factors.len() });
        }
        for f in &factors {
            ensure_same_group(&self.group, f.group())?;
        }
        if !c.is_zero() {
            self.terms.push((c, factors));
        }
        Ok(())
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &[(S, Vec<Kernel<S>>)] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same_group(&self.group, &other.group)?;
        if self.degree != other.degree {
            return Err(QlabError::DegreeMismatch { expected: self.degree, got: other.degree });
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let terms = self.terms.iter().map(|(a, f)| (a.mul(c), f.clone())).filter(|(a, _)| !a.is_zero()).collect();
        Self { group: self.group.clone(), degree: self.degree, terms }
    }

    /// The multilinear expansion `Σ coefficient · δ_{g_0} ⊗ … ⊗ δ_{g_n}`, zeros dropped.
    pub fn expand(&self) -> BTreeMap<Vec<GroupElement>, S> {
        let mut out: BTreeMap<Vec<GroupElement>, S> = BTreeMap::new();
        for (c, factors) in &self.terms {
            let mut partial: Vec<(Vec<GroupElement>, S)> = vec![(Vec::new(), c.clone())];
            for f in factors {
                partial = partial
                    .into_iter()
                    .flat_map(|(key, a)| {
                        f.entries().iter().map(move |(g, b)| {
                            let mut key = key.clone();
                            key.push(g.clone());
                            (key, a.mul(b))
                        })
                    })
                    .collect();
            }
            for (key, a) in partial {
                let sum = out.get(&key).map_or_else(|| a.clone(), |x| x.add(&a));
                if sum.is_zero() {
                    out.remove(&key);
                } else {
                    out.insert(key, sum);
                }
            }
        }
        out
    }

    /// Equality as elements of `ℂG^{⊗(n+1)}`.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.degree == other.degree && self.expand() == other.expand()
    }

    pub fn is_zero(&self) -> bool {
        self.expand().is_empty()
    }

    /// `b(A_0⊗…⊗A_n) = Σ_{i<n} (-1)^i …⊗A_iA_{i+1}⊗… + (-1)^n A_nA_0⊗A_1⊗…⊗A_{n-1}`.
    pub fn hochschild_boundary(&self) -> Result<Self> {
        let n = self.degree;
        if n == 0 {
            return Err(QlabError::DegreeZero);
        }
        let mut out = Self::zero(&self.group, n - 1);
        for (c, f) in &self.terms {
            for i in 0..n {
                let mut factors = f[..i].to_vec();
                factors.push(f[i].convolve(&f[i + 1])?);
                factors.extend_from_slice(&f[i + 2..]);
                out.push(signed(c, i), factors)?;
            }
            let mut factors = vec![f[n].convolve(&f[0])?];
            factors.extend_from_slice(&f[1..n]);
            out.push(signed(c, n), factors)?;
        }
        Ok(out)
    }

    /// `λ(A_0⊗…⊗A_n) = (-1)^n A_n⊗A_0⊗…⊗A_{n-1}`.
    pub fn cyclic_operator(&self) -> Self {
        let n = self.degree;
        let terms = self
            .terms
            .iter()
            .map(|(c, f)| {
                let mut factors = vec![f[n].clone()];
                factors.extend_from_slice(&f[..n]);
                (signed(c, n), factors)
            })
            .collect();
        Self { group: self.group.clone(), degree: n, terms }
    }

    /// `(1 / (n+1)) Σ_k λ^k`.
    pub fn cyclic_projector(&self) -> Self {
        let mut out = Self::zero(&self.group, self.degree);
        let mut current = self.clone();
        for _ in 0..=self.degree {
            out.terms.extend(current.terms.iter().cloned());
            current = current.cyclic_operator();
        }
        out.scale(&S::ratio(1, self.degree as i64 + 1))
    }

    pub fn to_float(&self) -> TensorChain<Complex64> {
        TensorChain {
            group: self.group.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(c, f)| (c.to_c64(), f.iter().map(Kernel::to_float).collect())).collect(),
        }
    }
}

fn signed<S: Scalar>(c: &S, k: usize) -> S {
    if k % 2 == 0 {
        c.clone()
    } else {
        c.neg()
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All permutations of `0..n` with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, bool)>) {
        let n = used.len();
        if prefix.len() == n {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| prefix[i] > prefix[j]).count();
            out.push((prefix.clone(), inversions % 2 == 1));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// `χ_n` with the default enumeration cap.
pub fn chi<S: Scalar>(omega: &TensorChain<S>) -> Result<EquivariantChain<S>> {
    chi_with_cap(omega, DEFAULT_CHI_CAP)
}

/// `χ_n(A_0⊗…⊗A_n)(g_0,…,g_n) = 1/(n+1)! Σ_σ (-1)^σ A_0(g_{σ(n)}⁻¹g_{σ(0)}) Π_{i≥1} A_i(g_{σ(i-1)}⁻¹g_{σ(i)})`.
///
/// For a fixed `σ` the arguments `h_0, …, h_n` multiply to `e`. Enumerating `h_0, …, h_{n-1}`
/// over the supports and putting `y_j = h_0⋯h_j` (so `y_n = e`), the tuple with
/// `g_{σ(j)} = y_j` is the unique representative of its orbit with `g_{σ(n)} = e`.
pub fn chi_with_cap<S: Scalar>(omega: &TensorChain<S>, cap: usize) -> Result<EquivariantChain<S>> {
    let group = omega.group();
    let n = omega.degree();
    let perms = permutations(n + 1);
    let norm = S::ratio(1, factorial(n + 1) as i64);
    let mut out = EquivariantChain::zero(group, n);
    for (c, factors) in omega.terms() {
        let work = factors[..n].iter().try_fold(perms.len(), |acc, f| acc.checked_mul(f.support_len().max(1)));
        match work {
            Some(w) if w <= cap => {}
            _ => return Err(QlabError::CapExceeded(format!("chi enumeration over {cap} terms"))),
        }
        let c = c.mul(&norm);
        // (prefix products y_0..y_{n-1}, coefficient)
        let mut partial: Vec<(Vec<GroupElement>, S)> = vec![(Vec::new(), c)];
        for f in &factors[..n] {
            let mut next = Vec::with_capacity(partial.len() * f.support_len());
            for (ys, a) in &partial {
                let last = ys.last().cloned().unwrap_or_else(|| group.identity());
                for (h, b) in f.entries() {
                    let mut ys = ys.clone();
                    ys.push(group.multiply(&last, h));
                    next.push((ys, a.mul(b)));
                }
            }
            partial = next;
        }
        for (mut ys, a) in partial {
            let last = ys.last().cloned().unwrap_or_else(|| group.identity());
            let a = a.mul(&factors[n].coefficient(&group.inverse(&last)));
            if a.is_zero() {
                continue;
            }
            ys.push(group.identity());
            for (sigma, odd) in &perms {
                let mut tuple = vec![group.identity(); n + 1];
                for (j, y) in ys.iter().enumerate() {
                    tuple[sigma[j]] = y.clone();
                }
                out.add_term(tuple, &if *odd { a.neg() } else { a.clone() })?;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainMapReport {
    pub degree: usize,
    /// `∂χ_n(ω) = χ_{n-1}(bω)`.
    pub chain_map: bool,
    /// `χ_n(λω) = χ_n(ω)`.
    pub descends: bool,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
}

impl ChainMapReport {
    pub fn holds(&self) -> bool {
        self.chain_map && self.descends
    }
}

/// Exact check of `∂∘χ_n = χ_{n-1}∘b` and `χ_n∘λ = χ_n`.
pub fn check_chain_map<S: Scalar>(omega: &TensorChain<S>) -> Result<ChainMapReport> {
    if omega.degree() == 0 {
        return Err(QlabError::DegreeZero);
    }
    if S::regime() != "exact" {
        return Err(QlabError::InvalidParameter("chain-map check needs exact scalars".into()));
    }
    let c = chi(omega)?;
    let lhs = c.boundary()?;
    let rhs = chi(&omega.hochschild_boundary()?)?;
    let rotated = chi(&omega.cyclic_operator())?;
    Ok(ChainMapReport {
        degree: omega.degree(),
        chain_map: lhs == rhs,
        descends: rotated == c,
        lhs_terms: lhs.terms().len(),
        rhs_terms: rhs.terms().len(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    pub pass: bool,
}

/// `‖χ_n(ω)‖_k <= C_{k,n} Σ_j |c_j| Σ_s Π_{i≠s} ‖|A_i|‖_p · ‖|A_s| d(-,e)^k‖_p` with
/// `C_{k,n} = n^{k-1}` and `p <= (n+1)/n`.
pub fn check_young_bound<S: Scalar>(omega: &TensorChain<S>, k: u32, p: f64) -> Result<BoundReport> {
    let n = omega.degree();
    if n == 0 {
        return Err(QlabError::DegreeZero);
    }
    let p_max = (n as f64 + 1.0) / n as f64;
    if !(p >= 1.0 && p <= p_max) {
        return Err(QlabError::InvalidExponent(p));
    }
    let lhs = chi(omega)?.weighted_norm(k);
    let constant = if k == 0 { 1.0 } else { (n as f64).powi(k as i32 - 1) };
    let mut sum = 0.0;
    for (c, factors) in omega.terms() {
        let plain: Vec<f64> = factors.iter().map(|f| f.lp_norm(p)).collect();
        let weighted: Vec<f64> = factors.iter().map(|f| f.weighted(k).lp_norm(p)).collect();
        let per_term: f64 = (0..=n)
            .map(|s| (0..=n).map(|i| if i == s { weighted[i] } else { plain[i] }).product::<f64>())
            .sum();
        sum += c.modulus() * per_term;
    }
    let rhs = constant * sum;
    Ok(BoundReport { lhs, rhs, constant_used: constant, pass: lhs <= rhs * (1.0 + CONTINUITY_TOL) })
}

/// Pointwise estimate behind the ℓ²-operator-norm continuity: for each term and each
/// `s < n`, `(|A_0| * … * |A_s|d^k * … * |A_n|)(e) <= Π_{i≠s,n} ‖|A_i|‖_op · ‖|A_s|d^k‖_op · ‖A_n‖_2`.
pub fn check_rd_bound<S: Scalar>(omega: &TensorChain<S>, k: u32, window: &Ball) -> Result<Vec<BoundReport>> {
    let n = omega.degree();
    let group = omega.group();
    let mut out = Vec::new();
    for (_, factors) in omega.terms() {
        let moduli: Vec<Kernel<Complex64>> = factors.iter().map(Kernel::modulus).collect();
        let op: Vec<f64> = moduli.iter().map(|f| operator_norm(f, 2.0, window).map(|b| b.upper)).collect::<Result<_>>()?;
        let last = factors[n].lp_norm(2.0);
        for s in 0..n {
            let weighted = factors[s].weighted(k);
            let mut conv = Kernel::identity(group);
            for (i, f) in moduli.iter().enumerate() {
                conv = conv.convolve(if i == s { &weighted } else { f })?;
            }
            let lhs = conv.coefficient(&group.identity()).norm();
            let w_op = operator_norm(&weighted, 2.0, window)?.upper;
            let rhs: f64 = (0..n).map(|i| if i == s { w_op } else { op[i] }).product::<f64>() * last;
            out.push(BoundReport { lhs, rhs, constant_used: 1.0, pass: lhs <= rhs * (1.0 + CONTINUITY_TOL) });
        }
    }
    Ok(out)
}

/// `‖(1 + |·|)^s φ‖_2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RapidDecayNorm {
    pub s: f64,
}

impl RapidDecayNorm {
    pub fn value<S: Scalar>(&self, phi: &Kernel<S>) -> f64 {
        let group = phi.group();
        phi.entries()
            .iter()
            .map(|(g, a)| (1.0 + f64::from(group.word_length(g))).powf(2.0 * self.s) * a.modulus().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// A tensor with up to `max_terms` elementary terms, factors drawn by [`random_kernel`].
pub fn random_tensor<S: RandomScalar, R: Rng>(
    group: &MarkedGroup,
    pool: &Ball,
    degree: usize,
    max_terms: usize,
    max_support: usize,
    rng: &mut R,
) -> TensorChain<S> {
    let mut out = TensorChain::zero(group, degree);
    for _ in 0..rng.gen_range(1..=max_terms.max(1)) {
        let c = S::sample(rng);
        let factors = (0..=degree).map(|_| random_kernel(group, pool, max_support, rng)).collect();
        out.push(c, factors).expect("consistent degree");
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorTermRecord {
    pub re: f64,
    pub im: f64,
    pub factors: Vec<Vec<EntryRecord>>,
}

/// `{ "group": …, "degree": n, "terms": [ { "re", "im", "factors": [[entries], …] } ] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub group: String,
    pub degree: usize,
    pub terms: Vec<TensorTermRecord>,
}

impl TensorFile {
    pub fn from_tensor<S: Scalar>(omega: &TensorChain<S>) -> Self {
        let g = omega.group();
        let terms = omega
            .terms()
            .iter()
            .map(|(c, f)| {
                let z = c.to_c64();
                TensorTermRecord { re: z.re, im: z.im, factors: f.iter().map(|k| entries_to_records(g, k)).collect() }
            })
            .collect();
        Self { group: g.descriptor(), degree: omega.degree(), terms }
    }

    pub fn to_tensor<S: Scalar>(&self) -> Result<TensorChain<S>> {
        let group = MarkedGroup::parse(&self.group)?;
        let mut out = TensorChain::zero(&group, self.degree);
        for t in &self.terms {
            let factors = t.factors.iter().map(|r| records_to_kernel(&group, r)).collect::<Result<Vec<_>>>()?;
            out.push(S::from_c64(Complex64::new(t.re, t.im)), factors)?;
        }
        Ok(out)
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

    fn z1() -> MarkedGroup {
        MarkedGroup::parse("Z^1").unwrap()
    }

    fn int(k: i64) -> GroupElement {
        GroupElement::Abelian(vec![k])
    }

    fn delta(g: &MarkedGroup, k: i64) -> Kernel<Q> {
        Kernel::delta(g, int(k), Q::one())
    }

    fn random(group: &str, seed: u64, degree: usize) -> TensorChain<Q> {
        let g = MarkedGroup::parse(group).unwrap();
        let pool = g.ball(2).unwrap();
        random_tensor(&g, &pool, degree, 2, 3, &mut trial_rng(seed, degree as u64))
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().filter(|(_, odd)| *odd).count(), 3);
        assert_eq!(perms[0], (vec![0, 1, 2], false));
    }

    #[test]
    fn boundary_examples() {
        let g = z1();
        let a0 = Kernel::from_entries(&g, [(int(2), Q::real(1, 3)), (int(-1), Q::one())]);
        let w = TensorChain::elementary(vec![a0, Kernel::identity(&g)]).unwrap();
        assert!(w.hochschild_boundary().unwrap().is_zero());
        let w = TensorChain::elementary(vec![delta(&g, 1), delta(&g, -1)]).unwrap();
        assert!(w.hochschild_boundary().unwrap().is_zero());
        assert!(matches!(TensorChain::elementary(vec![delta(&g, 1)]).unwrap().hochschild_boundary(), Err(QlabError::DegreeZero)));
    }

    #[test]
    fn chi_examples() {
        let g = z1();
        let a = Kernel::from_entries(&g, [(int(0), Q::real(3, 2)), (int(1), Q::one())]);
        let c = chi(&TensorChain::elementary(vec![a]).unwrap()).unwrap();
        assert_eq!(c.terms().len(), 1);
        assert_eq!(c.coefficient(&[int(0)]), Q::real(3, 2));

        let c = chi(&TensorChain::elementary(vec![delta(&g, 1), delta(&g, -1)]).unwrap()).unwrap();
        let expected = EquivariantChain::from_terms(
            &g,
            1,
            [(vec![int(0), int(-1)], Q::real(1, 2)), (vec![int(0), int(1)], Q::real(-1, 2))],
        )
        .unwrap();
        assert_eq!(c, expected);

        let zero = chi(&TensorChain::elementary(vec![delta(&g, 1), Kernel::zero(&g)]).unwrap()).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn chi_cap() {
        let w = random("F2", 1, 3);
        assert!(matches!(chi_with_cap(&w, 10), Err(QlabError::CapExceeded(_))));
    }

    #[test]
    fn young_examples() {
        let g = z1();
        let id = Kernel::<Q>::identity(&g);
        let w = TensorChain::elementary(vec![id.clone(), id]).unwrap();
        let rep = check_young_bound(&w, 1, 2.0).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.pass);
        assert!(matches!(check_young_bound(&w, 1, 2.5), Err(QlabError::InvalidExponent(_))));
    }

    #[test]
    fn rd_examples() {
        let g = z1();
        let id = Kernel::<Q>::identity(&g);
        let w = TensorChain::elementary(vec![id.clone(), id.clone(), id.clone()]).unwrap();
        let window = g.ball(3).unwrap();
        for r in check_rd_bound(&w, 0, &window).unwrap() {
            assert!(r.lhs <= 1.0 && r.rhs == 1.0 && r.pass);
        }
        let a = Kernel::from_entries(&g, [(int(2), Q::from_parts(1, -2, 4)), (int(-1), Q::real(1, 3))]);
        let rd = RapidDecayNorm { s: 1.5 };
        assert!((rd.value(&a) - rd.value(&a.modulus())).abs() < 1e-15);
        assert!(RapidDecayNorm { s: 0.5 }.value(&a) <= rd.value(&a));
    }

    #[test]
    fn tensor_file_round_trip() {
        let w = random("F2", 9, 2);
        let back: TensorChain<Q> = TensorFile::parse(&TensorFile::from_tensor(&w).to_json()).unwrap().to_tensor().unwrap();
        assert!(back.equivalent(&w));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn b_squared_vanishes(seed in any::<u64>(), degree in 2usize..=4) {
            let w = random("Z^1", seed, degree);
            prop_assert!(w.hochschild_boundary().unwrap().hochschild_boundary().unwrap().is_zero());
        }

        #[test]
        fn lambda_has_order_n_plus_one(seed in any::<u64>(), degree in 0usize..=4) {
            let w = random("F2", seed, degree);
            let mut r = w.clone();
            for _ in 0..=degree {
                r = r.cyclic_operator();
            }
            prop_assert!(r.equivalent(&w));
        }

        #[test]
        fn chi_is_multilinear_and_cyclic(seed in any::<u64>(), degree in 1usize..=2) {
            let w = random("Z^1", seed, degree);
            let v = random("Z^1", seed.wrapping_add(1), degree);
            let c = Q::from_parts(2, -1, 3);
            let lhs = chi(&w.add(&v.scale(&c)).unwrap()).unwrap();
            let rhs = chi(&w).unwrap().add(&chi(&v).unwrap().scale(&c)).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(chi(&w.cyclic_projector()).unwrap(), chi(&w).unwrap());
        }

        #[test]
        fn chain_map_identity(seed in any::<u64>(), degree in 1usize..=3) {
            let rep = check_chain_map(&random("Z^1", seed, degree)).unwrap();
            prop_assert!(rep.holds(), "{:?}", rep);
        }
    }
}

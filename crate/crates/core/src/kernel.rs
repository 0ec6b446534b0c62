//! Finitely supported group-ring elements `A = Σ a_g g` acting as convolution operators.
//!
//! A kernel acts on functions `u: G -> C` through the right regular representation,
//! `(A u)(x) = Σ_h a_h u(x h)`. With the left-invariant word metric this operator moves
//! mass by exactly `|h|`, so its propagation is `max |g|` over the support, `A δ_e` is the
//! coefficient function read through `g -> g^-1`, and operator composition matches the
//! ring product: `T_A T_B = T_{AB}`.

use std::collections::BTreeMap;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QlabError, Result};
use crate::group::{GroupElement, MarkedGroup};
use crate::scalar::Scalar;

/// Finitely supported function on a group, used as a test vector.
pub type Vector = BTreeMap<GroupElement, Complex64>;

#[derive(Clone, Debug)]
pub struct Kernel<S> {
    group: MarkedGroup,
    entries: BTreeMap<GroupElement, S>,
    propagation: u32,
}

impl<S: Scalar> PartialEq for Kernel<S> {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.entries == other.entries
    }
}

pub(crate) fn ensure_same_group(a: &MarkedGroup, b: &MarkedGroup) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(QlabError::GroupMismatch(a.descriptor(), b.descriptor()))
    }
}

impl<S: Scalar> Kernel<S> {
    pub fn zero(group: &MarkedGroup) -> Self {
        Self { group: group.clone(), entries: BTreeMap::new(), propagation: 0 }
    }

    /// `δ_e`, the unit of the group ring.
    pub fn identity(group: &MarkedGroup) -> Self {
        Self::delta(group, group.identity(), S::one())
    }

    pub fn delta(group: &MarkedGroup, g: GroupElement, coefficient: S) -> Self {
        Self::from_entries(group, [(g, coefficient)])
    }

    /// Sums repeated elements and drops zero coefficients.
    pub fn from_entries(group: &MarkedGroup, entries: impl IntoIterator<Item = (GroupElement, S)>) -> Self {
        let mut map: BTreeMap<GroupElement, S> = BTreeMap::new();
        for (g, a) in entries {
            accumulate(&mut map, g, &a);
        }
        Self::from_map(group, map)
    }

    fn from_map(group: &MarkedGroup, mut entries: BTreeMap<GroupElement, S>) -> Self {
        entries.retain(|_, a| !a.is_zero());
        let propagation = entries.keys().map(|g| group.word_length(g)).max().unwrap_or(0);
        Self { group: group.clone(), entries, propagation }
    }

    pub fn group(&self) -> &MarkedGroup {
        &self.group
    }

    pub fn entries(&self) -> &BTreeMap<GroupElement, S> {
        &self.entries
    }

    pub fn coefficient(&self, g: &GroupElement) -> S {
        self.entries.get(g).cloned().unwrap_or_else(S::zero)
    }

    /// `max |g|` over the support; 0 for the zero kernel and for multiples of `δ_e`.
    pub fn propagation(&self) -> u32 {
        self.propagation
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Ring product, `(AB)_g = Σ_h a_h b_{h^-1 g}`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        ensure_same_group(&self.group, &other.group)?;
        let mut map = BTreeMap::new();
        for (h, a) in &self.entries {
            for (k, b) in &other.entries {
                accumulate(&mut map, self.group.multiply(h, k), &a.mul(b));
            }
        }
        Ok(Self::from_map(&self.group, map))
    }

    /// `(Σ a_g g)^* = Σ conj(a_g) g^-1`.
    pub fn adjoint(&self) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|(g, a)| (self.group.inverse(g), a.conj()))
            .collect();
        Self { group: self.group.clone(), entries, propagation: self.propagation }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        ensure_same_group(&self.group, &other.group)?;
        let mut map = self.entries.clone();
        for (g, b) in &other.entries {
            accumulate(&mut map, g.clone(), b);
        }
        Ok(Self::from_map(&self.group, map))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&S::one().neg()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let map = self.entries.iter().map(|(g, a)| (g.clone(), a.mul(c))).collect();
        Self::from_map(&self.group, map)
    }

    /// `A^n` with `A^0 = δ_e`.
    pub fn power(&self, n: u32) -> Self {
        let mut out = Self::identity(&self.group);
        for _ in 0..n {
            out = out.convolve(self).expect("same group");
        }
        out
    }

    /// `Σ |a_g|`, the ℓ¹ bound for the operator norm on every ℓᵖ.
    pub fn l1_norm(&self) -> f64 {
        self.entries.values().map(|a| a.modulus()).sum()
    }

    /// `(Σ |a_g|^p)^{1/p}` of the coefficient function.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.entries.values().map(|a| a.modulus().powf(p)).sum::<f64>().powf(1.0 / p)
    }

    /// `A_{>R}`: the entries with `|g| > radius`.
    pub fn tail(&self, radius: f64) -> Self {
        let map = self
            .entries
            .iter()
            .filter(|(g, _)| f64::from(self.group.word_length(g)) > radius)
            .map(|(g, a)| (g.clone(), a.clone()))
            .collect();
        Self::from_map(&self.group, map)
    }

    pub fn to_float(&self) -> Kernel<Complex64> {
        Kernel {
            group: self.group.clone(),
            entries: self.entries.iter().map(|(g, a)| (g.clone(), a.to_c64())).collect(),
            propagation: self.propagation,
        }
    }

    /// `|A| = Σ |a_g| g`.
    pub fn modulus(&self) -> Kernel<Complex64> {
        self.weighted(0)
    }

    /// `|A|·d(-, e)^k`; `k = 0` gives `|A|` (the identity coefficient keeps weight 1).
    pub fn weighted(&self, k: u32) -> Kernel<Complex64> {
        let map = self
            .entries
            .iter()
            .map(|(g, a)| {
                let w = f64::from(self.group.word_length(g)).powi(k as i32);
                (g.clone(), Complex64::new(a.modulus() * w, 0.0))
            })
            .collect();
        Kernel::from_map(&self.group, map)
    }

    /// `(A u)(x) = Σ_h a_h u(x h)`.
    pub fn apply(&self, u: &Vector) -> Vector {
        let mut out = BTreeMap::new();
        let inverses: Vec<(GroupElement, Complex64)> = self
            .entries
            .iter()
            .map(|(h, a)| (self.group.inverse(h), a.to_c64()))
            .collect();
        for (y, uy) in u {
            for (h_inv, a) in &inverses {
                let x = self.group.multiply(y, h_inv);
                *out.entry(x).or_insert(Complex64::new(0.0, 0.0)) += a * uy;
            }
        }
        out.retain(|_, v: &mut Complex64| v.re != 0.0 || v.im != 0.0);
        out
    }
}

fn accumulate<S: Scalar>(map: &mut BTreeMap<GroupElement, S>, g: GroupElement, a: &S) {
    match map.get_mut(&g) {
        Some(v) => {
            *v = v.add(a);
            if v.is_zero() {
                map.remove(&g);
            }
        }
        None => {
            if !a.is_zero() {
                map.insert(g, a.clone());
            }
        }
    }
}

/// One coefficient in the JSON kernel format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub word: String,
    pub re: f64,
    pub im: f64,
}

/// `{ "group": "<descriptor>", "entries": [ { "word": "a b^-1", "re": 0.5, "im": 0.0 } ] }`
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelFile {
    pub group: String,
    pub entries: Vec<EntryRecord>,
}

pub(crate) fn entries_to_records<S: Scalar>(group: &MarkedGroup, kernel: &Kernel<S>) -> Vec<EntryRecord> {
    kernel
        .entries()
        .iter()
        .map(|(g, a)| {
            let z = a.to_c64();
            EntryRecord { word: group.format_element(g), re: z.re, im: z.im }
        })
        .collect()
}

pub(crate) fn records_to_kernel<S: Scalar>(group: &MarkedGroup, records: &[EntryRecord]) -> Result<Kernel<S>> {
    let mut entries = Vec::with_capacity(records.len());
    for r in records {
        entries.push((group.parse_element(&r.word)?, S::from_c64(Complex64::new(r.re, r.im))));
    }
    Ok(Kernel::from_entries(group, entries))
}

impl KernelFile {
    pub fn from_kernel<S: Scalar>(kernel: &Kernel<S>) -> Self {
        Self { group: kernel.group().descriptor(), entries: entries_to_records(kernel.group(), kernel) }
    }

    pub fn to_kernel<S: Scalar>(&self) -> Result<Kernel<S>> {
        let group = MarkedGroup::parse(&self.group)?;
        records_to_kernel(&group, &self.entries)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("kernel file serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::GaussianRational as Q;

    fn z1() -> MarkedGroup {
        MarkedGroup::parse("Z^1").unwrap()
    }

    fn int(k: i64) -> GroupElement {
        GroupElement::Abelian(vec![k])
    }

    #[test]
    fn convolve_examples() {
        let g = z1();
        let b = Kernel::from_entries(&g, [(int(2), Q::real(1, 3)), (int(-1), Q::from_parts(1, 1, 2))]);
        assert_eq!(Kernel::identity(&g).convolve(&b).unwrap(), b);
        let d1 = Kernel::delta(&g, int(1), Q::one());
        assert_eq!(d1.convolve(&d1).unwrap(), Kernel::delta(&g, int(2), Q::one()));

        let f2 = MarkedGroup::parse("F2").unwrap();
        let el = |w: &str| f2.parse_element(w).unwrap();
        let lhs = Kernel::from_entries(&f2, [(el("a"), Q::one()), (el("b"), Q::one())]);
        let rhs = Kernel::from_entries(&f2, [(el("a^-1"), Q::one()), (el("b^-1"), Q::one())]);
        let expected = Kernel::from_entries(
            &f2,
            [(el(""), Q::real(2, 1)), (el("a b^-1"), Q::one()), (el("b a^-1"), Q::one())],
        );
        assert_eq!(lhs.convolve(&rhs).unwrap(), expected);
        assert!(lhs.propagation() + rhs.propagation() >= expected.propagation());
    }

    #[test]
    fn mismatched_groups_rejected() {
        let a = Kernel::<Q>::identity(&z1());
        let b = Kernel::<Q>::identity(&MarkedGroup::parse("F2").unwrap());
        assert!(matches!(a.convolve(&b), Err(QlabError::GroupMismatch(..))));
    }

    #[test]
    fn adjoint_examples() {
        let g = z1();
        assert_eq!(Kernel::<Q>::identity(&g).adjoint(), Kernel::identity(&g));
        let a = Kernel::delta(&g, int(1), Q::from_parts(0, 1, 1));
        assert_eq!(a.adjoint(), Kernel::delta(&g, int(-1), Q::from_parts(0, -1, 1)));
    }

    #[test]
    fn zero_coefficients_are_not_stored() {
        let g = z1();
        let a = Kernel::from_entries(&g, [(int(3), Q::one()), (int(3), Q::real(-1, 1)), (int(1), Q::one())]);
        assert_eq!(a.support_len(), 1);
        assert_eq!(a.propagation(), 1);
        assert_eq!(Kernel::<Q>::identity(&g).propagation(), 0);
    }

    #[test]
    fn apply_matches_product_on_delta() {
        let f2 = MarkedGroup::parse("F2").unwrap();
        let a = Kernel::from_entries(
            &f2,
            [(f2.parse_element("a b").unwrap(), Complex64::new(1.0, 2.0)), (f2.identity(), Complex64::new(0.5, 0.0))],
        );
        let u: Vector = [(f2.identity(), Complex64::new(1.0, 0.0))].into();
        let au = a.apply(&u);
        for (g, v) in a.entries() {
            assert_eq!(au[&f2.inverse(g)], *v);
        }
    }

    #[test]
    fn kernel_file_round_trip() {
        let f2 = MarkedGroup::parse("F2").unwrap();
        let text = r#"{ "group": "F2", "entries": [ { "word": "a b^-1", "re": 0.5, "im": 0.0 }, { "word": "", "re": -1, "im": 2 } ] }"#;
        let k: Kernel<Complex64> = KernelFile::parse(text).unwrap().to_kernel().unwrap();
        assert_eq!(k.coefficient(&f2.parse_element("a b^-1").unwrap()), Complex64::new(0.5, 0.0));
        let again: Kernel<Complex64> = KernelFile::parse(&KernelFile::from_kernel(&k).to_json()).unwrap().to_kernel().unwrap();
        assert_eq!(again, k);
    }
}

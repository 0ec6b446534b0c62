//! Seeded generators for campaign instances.
//!
//! Every trial draws from its own ChaCha8 stream, keyed by `(seed, trial)`, so results do
//! not depend on how trials are scheduled across threads.

use num::complex::Complex64;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::group::{Ball, GroupElement, MarkedGroup};
use crate::kernel::{Kernel, Vector};
use crate::scalar::{GaussianRational, Scalar};

/// Identifier of the generator written into report headers.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.3), stream = trial index";

pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// A coefficient drawn uniformly from `[-1, 1]²`.
pub fn float_coefficient<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
}

/// A Gaussian rational `(p + i q) / 8` with `p, q` uniform in `[-8, 8]`, never zero.
pub fn exact_coefficient<R: Rng>(rng: &mut R) -> GaussianRational {
    loop {
        let (p, q) = (rng.gen_range(-8..=8), rng.gen_range(-8..=8));
        if p != 0 || q != 0 {
            return GaussianRational::from_parts(p, q, 8);
        }
    }
}

/// Coefficient sampler for a scalar regime.
pub trait RandomScalar: Scalar {
    fn sample<R: Rng>(rng: &mut R) -> Self;
}

impl RandomScalar for Complex64 {
    fn sample<R: Rng>(rng: &mut R) -> Self {
        float_coefficient(rng)
    }
}

impl RandomScalar for GaussianRational {
    fn sample<R: Rng>(rng: &mut R) -> Self {
        exact_coefficient(rng)
    }
}

/// A kernel with `1..=max_support` distinct support points drawn uniformly from `pool`.
pub fn random_kernel<S: RandomScalar, R: Rng>(
    group: &MarkedGroup,
    pool: &Ball,
    max_support: usize,
    rng: &mut R,
) -> Kernel<S> {
    let elements: Vec<&GroupElement> = pool.elements().iter().map(|(g, _)| g).collect();
    let size = rng.gen_range(1..=max_support.min(elements.len()).max(1));
    let chosen: Vec<&&GroupElement> = elements.choose_multiple(rng, size).collect();
    Kernel::from_entries(group, chosen.into_iter().map(|g| ((*g).clone(), S::sample(rng))))
}

/// Test vectors for lower bounds: `δ_e` followed by `count` random vectors supported in `pool`.
pub fn test_vectors<R: Rng>(group: &MarkedGroup, pool: &Ball, count: usize, max_support: usize, rng: &mut R) -> Vec<Vector> {
    let mut out = vec![Vector::from([(group.identity(), Complex64::new(1.0, 0.0))])];
    let elements: Vec<&GroupElement> = pool.elements().iter().map(|(g, _)| g).collect();
    for _ in 0..count {
        let size = rng.gen_range(1..=max_support.min(elements.len()).max(1));
        let v: Vector = elements
            .choose_multiple(rng, size)
            .map(|g| ((*g).clone(), float_coefficient(rng)))
            .filter(|(_, z)| z.norm() > 0.0)
            .collect();
        if !v.is_empty() {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(42, 3).gen();
        let b: u64 = trial_rng(42, 3).gen();
        let c: u64 = trial_rng(42, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn random_kernels_respect_pool() {
        let g = MarkedGroup::parse("F2").unwrap();
        let pool = g.ball(3).unwrap();
        let mut rng = trial_rng(1, 0);
        for _ in 0..50 {
            let k: Kernel<GaussianRational> = random_kernel(&g, &pool, 5, &mut rng);
            assert!(k.propagation() <= 3);
            assert!(k.support_len() >= 1 && k.support_len() <= 5);
        }
    }
}

//! The two coefficient regimes: exact Gaussian rationals and double-precision complex numbers.
//!
//! Kernels, chains and tensors are generic over [`Scalar`], so mixing regimes is a type
//! error. Conversion is explicit through [`Scalar::to_c64`] and [`Scalar::from_c64`].

use std::fmt::Debug;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + PartialEq + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// The rational number `num / den` as a scalar.
    fn ratio(num: i64, den: i64) -> Self;
    fn modulus(&self) -> f64;
    fn to_c64(&self) -> Complex64;
    fn from_c64(z: Complex64) -> Self;
    /// Short name used in reports.
    fn regime() -> &'static str;
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn from_c64(z: Complex64) -> Self {
        z
    }
    fn regime() -> &'static str {
        "float"
    }
}

/// An element of Q(i), stored as a pair of arbitrary-precision rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// `(re_num / den) + i (im_num / den)`.
    pub fn from_parts(re_num: i64, im_num: i64, den: i64) -> Self {
        let d = BigInt::from(den);
        Self {
            re: BigRational::new(BigInt::from(re_num), d.clone()),
            im: BigRational::new(BigInt::from(im_num), d),
        }
    }

    pub fn real(num: i64, den: i64) -> Self {
        Self::from_parts(num, 0, den)
    }

    /// Squared modulus, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator beyond f64 range: scale down by the bit lengths
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = n.max(d) - 1000;
        let num = (r.numer() >> shift.max(0) as usize).to_f64().unwrap_or(0.0);
        let den = (r.denom() >> shift.max(0) as usize).to_f64().unwrap_or(f64::INFINITY);
        num / den
    })
}

fn f64_to_rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

impl Scalar for GaussianRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn one() -> Self {
        Self { re: BigRational::one(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        Self { re: &self.re + &other.re, im: &self.im + &other.im }
    }
    fn sub(&self, other: &Self) -> Self {
        Self { re: &self.re - &other.re, im: &self.im - &other.im }
    }
    fn mul(&self, other: &Self) -> Self {
        Self {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }
    fn neg(&self) -> Self {
        Self { re: -&self.re, im: -&self.im }
    }
    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }
    fn ratio(num: i64, den: i64) -> Self {
        Self::real(num, den)
    }
    fn modulus(&self) -> f64 {
        if self.im.is_zero() {
            return rat_to_f64(&self.re.abs());
        }
        if self.re.is_zero() {
            return rat_to_f64(&self.im.abs());
        }
        rat_to_f64(&self.re).hypot(rat_to_f64(&self.im))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn from_c64(z: Complex64) -> Self {
        Self { re: f64_to_rat(z.re), im: f64_to_rat(z.im) }
    }
    fn regime() -> &'static str {
        "exact"
    }
}

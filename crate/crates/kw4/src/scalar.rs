//! The scalar ring the engine is generic over.
//!
//! Every geometric computation runs unchanged over real and complex
//! scalars; the complex case is a pair of reals with textbook arithmetic
//! so the operation order matches the real run exactly when all
//! imaginary parts are zero.

use rand::Rng;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    const NAME: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_re(x: f64) -> Self;
    /// Build from (re, im) components; None when the ring cannot carry a
    /// nonzero imaginary part.
    fn from_parts(re: f64, im: f64) -> Option<Self>;
    /// (real, imaginary) components; imaginary is 0 for real scalars.
    fn parts(self) -> (f64, f64);
    fn magnitude(self) -> f64;
    fn exp(self) -> Self;
    /// Uniform draw from [-1,1] (real) or the square [-1,1]^2 (complex).
    fn sample_uniform<R: Rng>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const NAME: &'static str = "real";

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        (im == 0.0).then_some(re)
    }
    fn parts(self) -> (f64, f64) {
        (self, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sample_uniform<R: Rng>(rng: &mut R) -> Self {
        rng.gen_range(-1.0..=1.0)
    }
}

/// Complex scalar as an explicit pair of reals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const I: C64 = C64::new(0.0, 1.0);

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }
}

impl Add for C64 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for C64 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for C64 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Div for C64 {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        // Real divisor short-circuit keeps the real embedding bit-exact.
        if rhs.im == 0.0 {
            return Self::new(self.re / rhs.re, self.im / rhs.re);
        }
        let den = rhs.re * rhs.re + rhs.im * rhs.im;
        Self::new(
            (self.re * rhs.re + self.im * rhs.im) / den,
            (self.im * rhs.re - self.re * rhs.im) / den,
        )
    }
}

impl Neg for C64 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl Scalar for C64 {
    const NAME: &'static str = "complex";

    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }
    fn one() -> Self {
        Self::new(1.0, 0.0)
    }
    fn from_re(x: f64) -> Self {
        Self::new(x, 0.0)
    }
    fn from_parts(re: f64, im: f64) -> Option<Self> {
        Some(Self::new(re, im))
    }
    fn parts(self) -> (f64, f64) {
        (self.re, self.im)
    }
    fn magnitude(self) -> f64 {
        if self.im == 0.0 {
            self.re.abs()
        } else {
            self.re.hypot(self.im)
        }
    }
    fn exp(self) -> Self {
        let r = self.re.exp();
        Self::new(r * self.im.cos(), r * self.im.sin())
    }
    fn sample_uniform<R: Rng>(rng: &mut R) -> Self {
        Self::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0))
    }
}

//! Scalar abstraction shared by every module.
//!
//! All numerical code is generic over [`Real`], which is implemented for
//! `f32` and `f64`. Complex values use [`num_complex::Complex`] over the same
//! scalar.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Kahan–Babuška (Neumaier) compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated<T> {
    sum: T,
    carry: T,
}

impl<T: Real> Compensated<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            carry: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.carry += (self.sum - t) + value;
        } else {
            self.carry += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum + self.carry
    }
}

/// Componentwise compensated sum of complex values.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedComplex<T> {
    re: Compensated<T>,
    im: Compensated<T>,
}

impl<T: Real> CompensatedComplex<T> {
    pub fn new() -> Self {
        Self {
            re: Compensated::new(),
            im: Compensated::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, z: Complex<T>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// `n!` as a float. Exact table up to 20!, log-gamma beyond.
pub fn factorial<T: Real>(n: usize) -> T {
    if n <= 20 {
        T::from_u64(exact_factorial(n as u32)).expect("factorial representable")
    } else {
        T::lit(ln_factorial(n).exp())
    }
}

/// `ln(n!)` in double precision.
pub fn ln_factorial(n: usize) -> f64 {
    if n <= 20 {
        (exact_factorial(n as u32) as f64).ln()
    } else {
        statrs::function::gamma::ln_gamma(n as f64 + 1.0)
    }
}

/// Exact `n!` for `n <= 20`.
pub fn exact_factorial(n: u32) -> u64 {
    assert!(n <= 20, "{n}! does not fit in u64");
    (1..=n as u64).product()
}

/// Maximum modulus of the difference of two complex values relative to
/// `1 + |b|`; used throughout the checks.
pub fn mixed_error<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    (a - b).norm() / (T::one() + b.norm())
}

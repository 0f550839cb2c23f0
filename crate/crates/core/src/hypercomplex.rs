//! Quaternion arithmetic, imaginary units and slices `C_I = R + I R`.
//!
//! Every non-real quaternion lies on exactly one slice, `q = x + I y` with
//! `y > 0`. Intrinsic functions (power series with real coefficients) are
//! evaluated on that slice with ordinary complex arithmetic and mapped back,
//! which is exact on the slice and avoids quaternionic series altogether.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{require_positive, Error, Result};
use crate::scalar::{Compensated, Real};

/// Element `q0 + q1 i + q2 j + q3 k` of the quaternion algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion<T> {
    pub q0: T,
    pub q1: T,
    pub q2: T,
    pub q3: T,
}

impl<T: Real> Quaternion<T> {
    #[inline]
    pub const fn new(q0: T, q1: T, q2: T, q3: T) -> Self {
        Self { q0, q1, q2, q3 }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::real(T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::real(T::one())
    }

    #[inline]
    pub fn real(r: T) -> Self {
        Self::new(r, T::zero(), T::zero(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    /// The complex number `a + b i` viewed as a quaternion on `C_i`.
    pub fn from_complex(z: Complex<T>) -> Self {
        Self::new(z.re, z.im, T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [T; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    /// Quaternionic conjugate: negates the imaginary components.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    #[inline]
    pub fn norm_sqr(self) -> T {
        self.q0 * self.q0 + self.q1 * self.q1 + self.q2 * self.q2 + self.q3 * self.q3
    }

    #[inline]
    pub fn norm(self) -> T {
        // hypot chain keeps |q| finite when the squares overflow
        self.q0.hypot(self.q1).hypot(self.q2.hypot(self.q3))
    }

    /// Modulus of the imaginary part.
    #[inline]
    pub fn imag_norm(self) -> T {
        self.q1.hypot(self.q2).hypot(self.q3)
    }

    pub fn is_real(self) -> bool {
        self.q1 == T::zero() && self.q2 == T::zero() && self.q3 == T::zero()
    }

    pub fn scale(self, s: T) -> Self {
        Self::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }

    pub fn inverse(self) -> Option<Self> {
        let n = self.norm_sqr();
        (n > T::zero()).then(|| self.conj().scale(n.recip()))
    }

    /// `q^n` by binary powering.
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Largest componentwise distance; used by tests and checks.
    pub fn max_abs_diff(self, other: Self) -> T {
        let d = self - other;
        d.q0.abs()
            .max(d.q1.abs())
            .max(d.q2.abs())
            .max(d.q3.abs())
    }

    pub fn is_finite(self) -> bool {
        self.q0.is_finite() && self.q1.is_finite() && self.q2.is_finite() && self.q3.is_finite()
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn add(self, r: Self) -> Self {
        Self::new(self.q0 + r.q0, self.q1 + r.q1, self.q2 + r.q2, self.q3 + r.q3)
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn sub(self, r: Self) -> Self {
        Self::new(self.q0 - r.q0, self.q1 - r.q1, self.q2 - r.q2, self.q3 - r.q3)
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

/// Hamilton product: `ij = -ji = k`, `jk = -kj = i`, `ki = -ik = j`.
impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, r: Self) -> Self {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (r.q0, r.q1, r.q2, r.q3);
        Self::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

impl<T: Real> Mul<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Real> Div<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.q0 / s, self.q1 / s, self.q2 / s, self.q3 / s)
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    fn add_assign(&mut self, r: Self) {
        *self = *self + r;
    }
}

impl<T: Real> SubAssign for Quaternion<T> {
    fn sub_assign(&mut self, r: Self) {
        *self = *self - r;
    }
}

impl<T: Real> MulAssign for Quaternion<T> {
    fn mul_assign(&mut self, r: Self) {
        *self = *self * r;
    }
}

impl<T: Real> fmt::Display for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.q0, self.q1, self.q2, self.q3)
    }
}

impl<T: Real + Serialize> Serialize for Quaternion<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.q0, self.q1, self.q2, self.q3].serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Quaternion<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let a = <[T; 4]>::deserialize(d)?;
        Ok(Self::from_array(a))
    }
}

/// Componentwise compensated sum of quaternions.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedQuaternion<T> {
    parts: [Compensated<T>; 4],
}

impl<T: Real> CompensatedQuaternion<T> {
    pub fn new() -> Self {
        Self {
            parts: [Compensated::new(); 4],
        }
    }

    #[inline]
    pub fn add(&mut self, q: Quaternion<T>) {
        self.parts[0].add(q.q0);
        self.parts[1].add(q.q1);
        self.parts[2].add(q.q2);
        self.parts[3].add(q.q3);
    }

    pub fn value(&self) -> Quaternion<T> {
        Quaternion::new(
            self.parts[0].value(),
            self.parts[1].value(),
            self.parts[2].value(),
            self.parts[3].value(),
        )
    }
}

/// Unit imaginary quaternion `I`, so that `I² = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryUnit<T>(Quaternion<T>);

impl<T: Real> ImaginaryUnit<T> {
    /// Validates that `q` is purely imaginary with unit modulus.
    pub fn new(q: Quaternion<T>) -> Result<Self> {
        let tol = T::lit(64.0) * T::epsilon();
        let modulus = q.norm();
        if q.q0.abs() > tol || (modulus - T::one()).abs() > tol {
            return Err(Error::InvalidImaginaryUnit {
                real: q.q0.to_f64_lossy(),
                modulus: modulus.to_f64_lossy(),
            });
        }
        Ok(Self(Quaternion::new(T::zero(), q.q1, q.q2, q.q3)))
    }

    /// Normalizes the vector `(a, b, c)` into `(a i + b j + c k)/|.|`.
    pub fn from_vector(a: T, b: T, c: T) -> Result<Self> {
        let n = a.hypot(b).hypot(c);
        if n <= T::zero() || !n.is_finite() {
            return Err(Error::InvalidImaginaryUnit {
                real: 0.0,
                modulus: n.to_f64_lossy(),
            });
        }
        Ok(Self(Quaternion::new(T::zero(), a / n, b / n, c / n)))
    }

    pub fn i() -> Self {
        Self(Quaternion::i())
    }

    pub fn j() -> Self {
        Self(Quaternion::j())
    }

    pub fn k() -> Self {
        Self(Quaternion::k())
    }

    #[inline]
    pub fn quaternion(self) -> Quaternion<T> {
        self.0
    }

    /// Maps `a + b i` in C onto `a + I b` in `C_I`.
    #[inline]
    pub fn embed(self, z: Complex<T>) -> Quaternion<T> {
        Quaternion::new(z.re, self.0.q1 * z.im, self.0.q2 * z.im, self.0.q3 * z.im)
    }

    /// Inverse of [`embed`](Self::embed) for quaternions on `C_I`; the part of
    /// `q` orthogonal to the slice is discarded.
    #[inline]
    pub fn project(self, q: Quaternion<T>) -> Complex<T> {
        let im = q.q1 * self.0.q1 + q.q2 * self.0.q2 + q.q3 * self.0.q3;
        Complex::new(q.q0, im)
    }
}

impl<T: Real + Serialize> Serialize for ImaginaryUnit<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for ImaginaryUnit<T> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let q = Quaternion::<T>::deserialize(d)?;
        ImaginaryUnit::new(q).map_err(D::Error::custom)
    }
}

/// A quaternion presented as `x + I y`. Decomposition yields `y >= 0`;
/// quadrature grids also use negative `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlicePoint<T> {
    pub x: T,
    pub y: T,
    pub unit: ImaginaryUnit<T>,
}

impl<T: Real> SlicePoint<T> {
    pub fn new(x: T, y: T, unit: ImaginaryUnit<T>) -> Self {
        Self { x, y, unit }
    }

    #[inline]
    pub fn to_quaternion(self) -> Quaternion<T> {
        self.unit.embed(Complex::new(self.x, self.y))
    }

    #[inline]
    pub fn to_complex(self) -> Complex<T> {
        Complex::new(self.x, self.y)
    }
}

/// Result of [`slice_decompose`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceDecomposition<T> {
    pub point: SlicePoint<T>,
    /// True for real input: the point lies on every slice and `I = i` was
    /// chosen.
    pub degenerate: bool,
}

/// Writes `q = x + I y` with `y > 0`. Real quaternions get `I = i`, `y = 0`
/// and the degeneracy flag.
pub fn slice_decompose<T: Real>(q: Quaternion<T>) -> SliceDecomposition<T> {
    let y = q.imag_norm();
    if y == T::zero() {
        return SliceDecomposition {
            point: SlicePoint::new(q.q0, T::zero(), ImaginaryUnit::i()),
            degenerate: true,
        };
    }
    let unit = ImaginaryUnit(Quaternion::new(T::zero(), q.q1 / y, q.q2 / y, q.q3 / y));
    SliceDecomposition {
        point: SlicePoint::new(q.q0, y, unit),
        degenerate: false,
    }
}

/// Evaluates an intrinsic function given by its action on C: `q` is mapped to
/// `x + i y` on its slice, `f` is applied, and the result is mapped back.
#[inline]
pub fn apply_intrinsic<T: Real>(q: Quaternion<T>, f: impl FnOnce(Complex<T>) -> Complex<T>) -> Quaternion<T> {
    let p = slice_decompose(q).point;
    p.unit.embed(f(p.to_complex()))
}

/// Sign of an exponent or direction of a multiplication operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Real>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }
}

/// `exp(sign * z² / γ²)` on C.
#[inline]
pub fn complex_exp_sq<T: Real>(gamma: T, z: Complex<T>, sign: Sign) -> Complex<T> {
    (z * z * (sign.value::<T>() / (gamma * gamma))).exp()
}

/// `exp(sign * q² / γ²)`, computed on the slice of `q`.
///
/// The result is intrinsic and commutes with every quaternion on the slice
/// of `q`.
pub fn quat_intrinsic_exp_sq<T: Real>(gamma: T, q: Quaternion<T>, sign: Sign) -> Quaternion<T> {
    apply_intrinsic(q, |z| complex_exp_sq(gamma, z, sign))
}

/// Term cap for [`star_exp`].
pub const STAR_EXP_MAX_TERMS: usize = 512;

/// Star exponential `Σ ν^n q^n p̄^n / n!`.
///
/// The summands keep the order `q^n p̄^n`, which differs from `(q p̄)^n` when
/// `q` and `p` lie on different slices. Summation stops once the bound
/// `ν^n |q|^n |p|^n / n!` on the next term drops below `tol` times the norm
/// of the partial sum.
pub fn star_exp<T: Real>(nu: T, q: Quaternion<T>, p: Quaternion<T>, tol: T) -> Result<Quaternion<T>> {
    require_positive("nu", nu)?;
    require_positive("tol", tol)?;
    let pbar = p.conj();
    let rate = nu * q.norm() * p.norm();
    let mut q_pow = Quaternion::one();
    let mut p_pow = Quaternion::one();
    let mut coef = T::one();
    let mut bound = T::one();
    let mut acc = CompensatedQuaternion::new();
    acc.add(Quaternion::one());
    for n in 1..STAR_EXP_MAX_TERMS {
        let nf = T::from_usize_lossy(n);
        q_pow *= q;
        p_pow *= pbar;
        coef = coef * nu / nf;
        bound = bound * rate / nf;
        acc.add((q_pow * p_pow).scale(coef));
        // next term is bounded by bound * rate / (n + 1)
        let next = bound * rate / (nf + T::one());
        let partial = acc.value().norm();
        if next <= tol * partial || next == T::zero() {
            return Ok(acc.value());
        }
    }
    Err(Error::Truncation {
        terms: STAR_EXP_MAX_TERMS,
        last_term: bound.to_f64_lossy(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    type Q = Quaternion<f64>;

    #[test]
    fn hamilton_rules() {
        assert_eq!(Q::i() * Q::j(), Q::k());
        assert_eq!(Q::j() * Q::i(), -Q::k());
        assert_eq!(Q::j() * Q::k(), Q::i());
        assert_eq!(Q::k() * Q::i(), Q::j());
        assert_eq!(Q::i() * Q::i(), -Q::one());
        assert_eq!(Q::zero() * Q::new(1.0, 2.0, 3.0, 4.0), Q::zero());
        let p = Q::new(1.0, 1.0, 0.0, 0.0);
        let q = Q::new(1.0, 0.0, 1.0, 0.0);
        assert_eq!(p * q, Q::new(1.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn conjugation() {
        assert_eq!(Q::new(1.0, 1.0, 1.0, 1.0).conj(), Q::new(1.0, -1.0, -1.0, -1.0));
        assert_eq!(Q::real(3.5).conj(), Q::real(3.5));
        let q = Q::new(0.3, -1.2, 2.0, 0.7);
        let n = q * q.conj();
        assert_relative_eq!(n.q0, q.norm_sqr(), epsilon = 1e-15);
        assert_eq!(n.q1, 0.0);
        assert!(n.q2.abs() < 1e-15 && n.q3.abs() < 1e-15);
    }

    #[test]
    fn decompose_examples() {
        let d = slice_decompose(Q::new(3.0, 4.0, 0.0, 0.0));
        assert!(!d.degenerate);
        assert_eq!((d.point.x, d.point.y), (3.0, 4.0));
        assert_eq!(d.point.unit, ImaginaryUnit::i());

        let q = Q::new(1.0, 0.0, 1.0, 1.0);
        let d = slice_decompose(q);
        assert_relative_eq!(d.point.y, 2f64.sqrt(), epsilon = 1e-15);
        let s = 1.0 / 2f64.sqrt();
        assert_relative_eq!(d.point.unit.quaternion().q2, s, epsilon = 1e-15);
        assert_relative_eq!(d.point.unit.quaternion().q3, s, epsilon = 1e-15);
        assert!(d.point.to_quaternion().max_abs_diff(q) < 1e-15);

        let d = slice_decompose(Q::real(5.0));
        assert!(d.degenerate);
        assert_eq!((d.point.x, d.point.y), (5.0, 0.0));
        assert_eq!(d.point.unit, ImaginaryUnit::i());
    }

    #[test]
    fn imaginary_unit_validation() {
        assert!(ImaginaryUnit::new(Q::new(0.0, 0.6, 0.8, 0.0)).is_ok());
        assert!(ImaginaryUnit::new(Q::new(0.1, 0.6, 0.8, 0.0)).is_err());
        assert!(ImaginaryUnit::new(Q::new(0.0, 1.0, 1.0, 0.0)).is_err());
        let u: std::result::Result<ImaginaryUnit<f64>, _> = serde_json::from_str("[0, 0, 1, 0]");
        assert_eq!(u.unwrap(), ImaginaryUnit::j());
        let bad: std::result::Result<ImaginaryUnit<f64>, _> = serde_json::from_str("[1, 0, 0, 0]");
        assert!(bad.is_err());
        let u = ImaginaryUnit::from_vector(1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!((u.quaternion() * u.quaternion()).q0, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn quaternion_json_is_a_four_array() {
        let q = Q::new(1.0, -2.0, 0.5, 3.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.0,0.5,3.0]");
        let back: Q = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
    }

    #[test]
    fn intrinsic_exp_examples() {
        let x = 0.7;
        let v = quat_intrinsic_exp_sq(1.0, Q::real(x), Sign::Minus);
        assert_relative_eq!(v.q0, (-x * x).exp(), epsilon = 1e-15);
        assert!(v.imag_norm() == 0.0);

        let v = quat_intrinsic_exp_sq(1.0, Q::i(), Sign::Minus);
        assert_relative_eq!(v.q0, 1f64.exp(), epsilon = 1e-15);
        assert!(v.imag_norm() < 1e-15);

        // (1 + j)² = 2j, so e^{-(1+j)²/4} = cos(1/2) - j sin(1/2)
        let v = quat_intrinsic_exp_sq(2.0, Q::new(1.0, 0.0, 1.0, 0.0), Sign::Minus);
        assert_relative_eq!(v.q0, 0.5f64.cos(), epsilon = 1e-15);
        assert_relative_eq!(v.q2, -(0.5f64.sin()), epsilon = 1e-15);
        assert_eq!((v.q1, v.q3), (0.0, 0.0));
    }

    #[test]
    fn star_exp_examples() {
        let q = Q::new(0.3, -0.2, 0.5, 0.1);
        assert_eq!(star_exp(2.0, q, Q::zero(), 1e-16).unwrap(), Q::one());
        let v = star_exp(1.5, Q::real(0.8), Q::real(-1.1), 1e-17).unwrap();
        assert_relative_eq!(v.q0, (1.5f64 * 0.8 * -1.1).exp(), max_relative = 1e-14);
        let v = star_exp(2.0, q, q, 1e-17).unwrap();
        assert_relative_eq!(v.q0, (2.0 * q.norm_sqr()).exp(), max_relative = 1e-14);
        assert!(v.imag_norm() < 1e-14);
    }

    #[test]
    fn star_exp_reports_truncation() {
        let big = Q::real(40.0);
        assert!(matches!(
            star_exp(1.0, big, big, 1e-16),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn star_exp_order_matters_off_slice() {
        let q = Q::new(0.2, 0.9, 0.0, 0.0);
        let p = Q::new(-0.1, 0.0, 0.8, 0.3);
        let ordered = star_exp(1.0, q, p, 1e-17).unwrap();
        // naive (q p̄)^n series
        let qp = q * p.conj();
        let mut naive = Q::zero();
        let mut term = Q::one();
        for n in 0..60 {
            if n > 0 {
                term = term * qp / n as f64;
            }
            naive += term;
        }
        assert!(ordered.max_abs_diff(naive) > 1e-3);
    }

    #[test]
    fn works_in_single_precision() {
        let p = Quaternion::<f32>::new(1.0, 2.0, -1.0, 0.5);
        let q = Quaternion::<f32>::new(-0.5, 0.25, 3.0, 1.0);
        let lhs = (p * q).norm();
        assert!((lhs - p.norm() * q.norm()).abs() < 1e-5 * lhs);
        assert!((p * q).conj().max_abs_diff(q.conj() * p.conj()) < 1e-5);
    }
}

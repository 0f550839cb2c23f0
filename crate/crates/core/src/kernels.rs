//! Closed-form kernels: complex and `d`-dimensional Gaussian RBF kernels,
//! the Fock kernel, the quaternionic slice RBF kernel and two classical
//! real kernels.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::bases::{rbf_basis_c, rbf_basis_q};
use crate::error::{invalid, require_positive, Error, Result};
use crate::hypercomplex::{quat_intrinsic_exp_sq, star_exp, Quaternion, Sign};
use crate::scalar::{CompensatedComplex, Real};
use crate::series::DEGREE_CAP;

/// Constant convention for the Segal–Bargmann type transforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Prefactor `(ν/π)^{1/4}`: the transform is an isometry.
    #[default]
    Unitary,
    /// Prefactor `(ν/π)^{3/4}` as printed in the source formulas.
    PaperLiteral,
}

/// Width `γ` together with the transform convention. `ν = 2/γ²` is always
/// derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams<T> {
    gamma: T,
    #[serde(default)]
    pub normalization: Normalization,
}

impl<T: Real> KernelParams<T> {
    pub fn new(gamma: T, normalization: Normalization) -> Result<Self> {
        require_positive("gamma", gamma)?;
        Ok(Self { gamma, normalization })
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn nu(&self) -> T {
        T::lit(2.0) / (self.gamma * self.gamma)
    }
}

/// `exp(-(z − w̄)²/γ²)`.
pub fn rbf_kernel_c<T: Real>(gamma: T, z: Complex<T>, w: Complex<T>) -> Complex<T> {
    let d = z - w.conj();
    (-(d * d) / (gamma * gamma)).exp()
}

/// `exp(-Σ_ℓ (z_ℓ − w̄_ℓ)²/γ²)`, assembled as a single exponent.
pub fn rbf_kernel_d<T: Real>(gamma: T, z: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>> {
    check_dims(z.len(), w.len())?;
    let mut acc = CompensatedComplex::new();
    for (&a, &b) in z.iter().zip(w) {
        let d = a - b.conj();
        acc.add(d * d);
    }
    Ok((-acc.value() / (gamma * gamma)).exp())
}

/// Real Gaussian kernel `exp(-‖x − y‖²/γ²)`.
pub fn rbf_kernel_real<T: Real>(gamma: T, x: &[T], y: &[T]) -> Result<T> {
    check_dims(x.len(), y.len())?;
    let s: T = x.iter().zip(y).map(|(&a, &b)| (a - b) * (a - b)).sum();
    Ok((-s / (gamma * gamma)).exp())
}

/// Fock kernel `exp(α Σ_ℓ z_ℓ w̄_ℓ)`.
pub fn fock_kernel_d<T: Real>(alpha: T, z: &[Complex<T>], w: &[Complex<T>]) -> Result<Complex<T>> {
    check_dims(z.len(), w.len())?;
    let mut acc = CompensatedComplex::new();
    for (&a, &b) in z.iter().zip(w) {
        acc.add(a * b.conj());
    }
    Ok((acc.value() * alpha).exp())
}

/// Quaternionic slice RBF kernel
/// `e^{-q²/γ²} · e_*^{2/γ²}(q p̄) · e^{-p̄²/γ²}`, multiplied left to right.
pub fn rbf_kernel_qslice<T: Real>(gamma: T, q: Quaternion<T>, p: Quaternion<T>) -> Result<Quaternion<T>> {
    let nu = T::lit(2.0) / (gamma * gamma);
    let left = quat_intrinsic_exp_sq(gamma, q, Sign::Minus);
    let middle = star_exp(nu, q, p, T::epsilon())?;
    let right = quat_intrinsic_exp_sq(gamma, p.conj(), Sign::Minus);
    Ok(left * middle * right)
}

/// `Σ_{n≤N} e_n^γ(q) e_n^γ(p̄)`.
pub fn kernel_sum_truncated<T: Real>(gamma: T, q: Quaternion<T>, p: Quaternion<T>, n_max: usize) -> Result<Quaternion<T>> {
    check_cap(n_max)?;
    let pc = p.conj();
    let mut acc = crate::hypercomplex::CompensatedQuaternion::new();
    for n in 0..=n_max {
        acc.add(rbf_basis_q(gamma, n, q) * rbf_basis_q(gamma, n, pc));
    }
    Ok(acc.value())
}

/// `Σ_{n≤N} e_n^γ(z) e_n^γ(w̄)` for complex arguments.
pub fn kernel_sum_truncated_c<T: Real>(gamma: T, z: Complex<T>, w: Complex<T>, n_max: usize) -> Result<Complex<T>> {
    check_cap(n_max)?;
    let wc = w.conj();
    let mut acc = CompensatedComplex::new();
    for n in 0..=n_max {
        acc.add(rbf_basis_c(gamma, n, z) * rbf_basis_c(gamma, n, wc));
    }
    Ok(acc.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UtilityKernel {
    /// `(1 + ⟨x, y⟩)^m`
    Polynomial(u32),
    /// `exp(⟨x, y⟩)`
    Exponential,
}

pub fn utility_kernel<T: Real>(kind: UtilityKernel, x: &[T], y: &[T]) -> Result<T> {
    check_dims(x.len(), y.len())?;
    let dot: T = x.iter().zip(y).map(|(&a, &b)| a * b).sum();
    match kind {
        UtilityKernel::Polynomial(0) => Err(invalid("m", "polynomial degree must be at least 1")),
        UtilityKernel::Polynomial(m) => Ok((T::one() + dot).powi(m as i32)),
        UtilityKernel::Exponential => Ok(dot.exp()),
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > DEGREE_CAP {
        Err(Error::DegreeCap {
            degree: n,
            cap: DEGREE_CAP,
        })
    } else {
        Ok(())
    }
}

//! Orthonormal families: weighted Hermite functions on `R` and `R^d`, the
//! RBF bases `e_n^γ`, and normalized Fock monomials.
//!
//! The Hermite functions are taken in the form
//! `h_n^ν(x) = (-1)^n e^{νx²} (dⁿ/dxⁿ) e^{-νx²} = ν^{n/2} H_n(√ν x)`,
//! whose squared norm in `L²(e^{-νx²}dx)` is `2^n ν^n n! (π/ν)^{1/2}`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hypercomplex::{apply_intrinsic, complex_exp_sq, Quaternion, Sign};
use crate::scalar::Real;
use crate::series::MultiIndex;

/// `h_n^ν(x) = ν^{n/2} H_n(√ν x)` by the three-term recurrence
/// `h_{k+1} = 2νx h_k − 2kν h_{k−1}`. Not normalized; grows factorially.
pub fn hermite_h<T: Real>(nu: T, n: usize, x: T) -> T {
    let two = T::lit(2.0);
    let mut prev = T::zero();
    let mut cur = T::one();
    for k in 0..n {
        let next = two * nu * x * cur - two * T::from_usize_lossy(k) * nu * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ψ_0^ν(x), …, ψ_{n_max}^ν(x)`, orthonormal in `L²(R, dx)`.
///
/// Uses the normalized recurrence, so every intermediate value is `O(1)`.
pub fn hermite_psi_all<T: Real>(nu: T, n_max: usize, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n_max + 1);
    let two = T::lit(2.0);
    let t = nu.sqrt() * x;
    let mut prev = T::zero();
    let mut cur = (nu / T::PI()).sqrt().sqrt() * (-t * t / two).exp();
    out.push(cur);
    for k in 0..n_max {
        let kf = T::from_usize_lossy(k);
        let next = (two / (kf + T::one())).sqrt() * t * cur - (kf / (kf + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `ψ_n^ν(x) = h_n^ν(x) e^{-νx²/2} / ‖h_n^ν‖`.
pub fn hermite_psi<T: Real>(nu: T, n: usize, x: T) -> T {
    *hermite_psi_all(nu, n, x).last().expect("non-empty")
}

/// `ψ_n^ν(x) e^{νx²/2}`: the polynomial part of `ψ_n^ν`, for callers that
/// assemble the Gaussian factor themselves.
pub fn hermite_psi_poly<T: Real>(nu: T, n: usize, x: T) -> T {
    let two = T::lit(2.0);
    let t = nu.sqrt() * x;
    let mut prev = T::zero();
    let mut cur = (nu / T::PI()).sqrt().sqrt();
    for k in 0..n {
        let kf = T::from_usize_lossy(k);
        let next = (two / (kf + T::one())).sqrt() * t * cur - (kf / (kf + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ψ_n^ν(x) = Π_ℓ ψ_{n_ℓ}^ν(x_ℓ)` on `R^d`.
pub fn hermite_psi_d<T: Real>(nu: T, n: &MultiIndex, x: &[T]) -> Result<T> {
    check_dim(n.dim(), x.len())?;
    Ok(n.0.iter().zip(x).fold(T::one(), |acc, (&k, &xl)| acc * hermite_psi(nu, k, xl)))
}

/// `√(2^n / (γ^{2n} n!)) zⁿ`, built as a running product so neither the
/// factorial nor the power is formed on its own.
fn scaled_power<T: Real>(gamma: T, n: usize, z: Complex<T>) -> Complex<T> {
    let nu = T::lit(2.0) / (gamma * gamma);
    let mut acc = Complex::new(T::one(), T::zero());
    for k in 1..=n {
        acc = acc * z * (nu / T::from_usize_lossy(k)).sqrt();
    }
    acc
}

/// `e_n^γ(z) = √(2^n/(γ^{2n} n!)) zⁿ e^{-z²/γ²}` for complex `z`.
pub fn rbf_basis_c<T: Real>(gamma: T, n: usize, z: Complex<T>) -> Complex<T> {
    scaled_power(gamma, n, z) * complex_exp_sq(gamma, z, Sign::Minus)
}

/// Quaternionic `e_n^γ(q)`. The function is intrinsic, so it is evaluated
/// on the slice through `q` and embedded back.
pub fn rbf_basis_q<T: Real>(gamma: T, n: usize, q: Quaternion<T>) -> Quaternion<T> {
    apply_intrinsic(q, |z| rbf_basis_c(gamma, n, z))
}

/// `e_n^γ(z) = Π_ℓ e_{n_ℓ}^γ(z_ℓ)` on `C^d`.
pub fn rbf_basis_d<T: Real>(gamma: T, n: &MultiIndex, z: &[Complex<T>]) -> Result<Complex<T>> {
    check_dim(n.dim(), z.len())?;
    Ok(n.0
        .iter()
        .zip(z)
        .fold(Complex::new(T::one(), T::zero()), |acc, (&k, &zl)| acc * rbf_basis_c(gamma, k, zl)))
}

/// Normalized Fock monomial `√(νⁿ/n!) qⁿ`.
pub fn fock_basis_q<T: Real>(nu: T, n: usize, q: Quaternion<T>) -> Quaternion<T> {
    let mut acc = Quaternion::one();
    for k in 1..=n {
        acc = (acc * q).scale((nu / T::from_usize_lossy(k)).sqrt());
    }
    acc
}

/// Normalized Fock monomial `√(α^{|n|}/n!) zⁿ` on `C^d`.
pub fn fock_basis_d<T: Real>(alpha: T, n: &MultiIndex, z: &[Complex<T>]) -> Result<Complex<T>> {
    check_dim(n.dim(), z.len())?;
    let mut acc = Complex::new(T::one(), T::zero());
    for (&k, &zl) in n.0.iter().zip(z) {
        for j in 1..=k {
            acc = acc * zl * (alpha / T::from_usize_lossy(j)).sqrt();
        }
    }
    Ok(acc)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_hermite;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn hermite_h_low_orders() {
        assert_eq!(hermite_h(0.7, 0, 1.3), 1.0);
        assert_relative_eq!(hermite_h(0.7, 1, 1.3), 2.0 * 0.7 * 1.3, max_relative = 1e-15);
        // H_3(t) = 8t³ − 12t
        let (nu, x) = (2.0f64, 0.4);
        let t = nu.sqrt() * x;
        assert_relative_eq!(
            hermite_h(nu, 3, x),
            nu.powf(1.5) * (8.0 * t.powi(3) - 12.0 * t),
            max_relative = 1e-14
        );
    }

    #[test]
    fn hermite_h_norm() {
        let rule = gauss_hermite(20, 1.0f64).unwrap();
        let n2 = rule.integrate(|x| hermite_h(1.0, 2, x).powi(2));
        assert_relative_eq!(n2, 8.0 * PI.sqrt(), max_relative = 1e-13);
        let nu = 0.6f64;
        let rule = gauss_hermite(20, nu).unwrap();
        let n3 = rule.integrate(|x| hermite_h(nu, 3, x).powi(2));
        assert_relative_eq!(n3, 8.0 * nu.powi(3) * 6.0 * (PI / nu).sqrt(), max_relative = 1e-13);
    }

    #[test]
    fn psi_values() {
        assert_relative_eq!(hermite_psi(0.8f64, 0, 0.0), (0.8 / PI).powf(0.25), max_relative = 1e-15);
        assert_relative_eq!(hermite_psi(PI, 0, 0.0), 1.0, max_relative = 1e-15);
        let (nu, x) = (1.7f64, -0.3);
        let direct = hermite_h(nu, 5, x) * (-nu * x * x / 2.0).exp()
            / (32.0 * nu.powi(5) * 120.0 * (PI / nu).sqrt()).sqrt();
        assert_relative_eq!(hermite_psi(nu, 5, x), direct, max_relative = 1e-13);
        assert_relative_eq!(
            hermite_psi_poly(nu, 5, x) * (-nu * x * x / 2.0).exp(),
            direct,
            max_relative = 1e-13
        );
    }

    #[test]
    fn psi_orthonormal() {
        // the product ψ_m ψ_n carries e^{-νx²}, which the rule supplies
        let nu = 1.3f64;
        let rule = gauss_hermite(80, nu).unwrap();
        for m in 0..=12 {
            for n in 0..=12 {
                let g = rule.integrate(|x| hermite_psi_poly(nu, m, x) * hermite_psi_poly(nu, n, x));
                let want = if m == n { 1.0 } else { 0.0 };
                assert!((g - want).abs() < 1e-12, "({m},{n}) {g}");
            }
        }
    }

    #[test]
    fn psi_high_order_is_finite() {
        for x in [-9.0f64, -1.0, 0.0, 3.5, 11.0] {
            let v = hermite_psi(1.0, 64, x);
            assert!(v.is_finite() && v.abs() < 1.0);
        }
    }

    #[test]
    fn rbf_basis_examples() {
        let g = 0.9f64;
        assert_eq!(rbf_basis_q(g, 0, Quaternion::zero()), Quaternion::one());
        let v = rbf_basis_q(2f64.sqrt(), 1, Quaternion::one());
        assert_relative_eq!(v.q0, (-0.5f64).exp(), max_relative = 1e-15);
        let z = [Complex::new(1.0, 0.0), Complex::new(0.0, 0.0)];
        let v = rbf_basis_d(2f64.sqrt(), &MultiIndex(vec![1, 0]), &z).unwrap();
        assert_relative_eq!(v.re, (-0.5f64).exp(), max_relative = 1e-15);
        assert!(rbf_basis_d(1.0f64, &MultiIndex(vec![1]), &z).is_err());
    }

    #[test]
    fn rbf_basis_q_on_slice() {
        let gamma = 1.4f64;
        let q = Quaternion::new(0.3, 0.2, -0.5, 0.1);
        let direct = q.powi(4).scale((16.0 / (gamma.powi(8) * 24.0)).sqrt())
            * crate::hypercomplex::quat_intrinsic_exp_sq(gamma, q, Sign::Minus);
        assert!(rbf_basis_q(gamma, 4, q).max_abs_diff(direct) < 1e-15);
    }

    #[test]
    fn fock_monomials() {
        let q = Quaternion::new(0.5, 0.1, 0.2, 0.3);
        let nu = 1.5f64;
        let want = q.powi(3).scale((nu.powi(3) / 6.0).sqrt());
        assert!(fock_basis_q(nu, 3, q).max_abs_diff(want) < 1e-15);
        let z = [Complex::new(0.5, 0.5), Complex::new(1.0, -1.0)];
        let v = fock_basis_d(nu, &MultiIndex(vec![1, 2]), &z).unwrap();
        let want = z[0] * z[1] * z[1] * (nu.powi(3) / 2.0).sqrt();
        assert!((v - want).norm() < 1e-14);
    }
}

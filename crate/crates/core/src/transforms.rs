//! Segal–Bargmann type transforms from `L²(R)` (or `L²(R^d)`) onto the Fock
//! and RBF spaces.
//!
//! Under [`Normalization::Unitary`] the kernel prefactor is `(ν/π)^{1/4}`,
//! the value produced by the Hermite generating series, and `ψ_n^ν` maps to
//! `ν^{n/2} qⁿ/√n!`. [`Normalization::PaperLiteral`] uses `(ν/π)^{3/4}`, so
//! every image carries an extra factor `√(ν/π)`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::bases::{hermite_psi_all, hermite_psi_d, rbf_basis_d};
use crate::error::{invalid, require_positive, Error, Result};
use crate::hypercomplex::{apply_intrinsic, Quaternion, Sign};
use crate::kernels::Normalization;
use crate::quadrature::{gauss_hermite, integrate_rd, QuadratureRule};
use crate::scalar::{CompensatedComplex, Real};
use crate::series::MultiIndex;

/// Default order of the `x`-rule used by the quadrature path.
pub const TRANSFORM_ORDER: usize = 80;

/// Growth contract for sampled inputs: `φ(x) = p(x) e^{-ν|x|²/2}` with `p`
/// a polynomial of degree at most `degree`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayCertificate<T> {
    pub nu: T,
    pub degree: usize,
}

pub type RealToQuat<T> = Arc<dyn Fn(T) -> Quaternion<T> + Send + Sync>;
pub type RdToComplex<T> = Arc<dyn Fn(&[T]) -> Complex<T> + Send + Sync>;

/// Quaternion-valued function on the real line.
#[derive(Clone)]
pub enum L2Function<T> {
    /// `φ = Σ ψ_n^ν c_n` with right coefficients.
    Hermite { nu: T, coeffs: Vec<Quaternion<T>> },
    Sampled {
        eval: RealToQuat<T>,
        certificate: Option<DecayCertificate<T>>,
    },
}

impl<T: Real> L2Function<T> {
    pub fn hermite(nu: T, coeffs: Vec<Quaternion<T>>) -> Result<Self> {
        require_positive("nu", nu)?;
        Ok(Self::Hermite { nu, coeffs })
    }

    /// `ψ_n^ν` itself.
    pub fn psi(nu: T, n: usize) -> Result<Self> {
        let mut coeffs = vec![Quaternion::zero(); n + 1];
        coeffs[n] = Quaternion::one();
        Self::hermite(nu, coeffs)
    }

    pub fn sampled(
        eval: impl Fn(T) -> Quaternion<T> + Send + Sync + 'static,
        certificate: Option<DecayCertificate<T>>,
    ) -> Self {
        Self::Sampled {
            eval: Arc::new(eval),
            certificate,
        }
    }

    pub fn eval(&self, x: T) -> Quaternion<T> {
        match self {
            Self::Hermite { nu, coeffs } => {
                if coeffs.is_empty() {
                    return Quaternion::zero();
                }
                let psi = hermite_psi_all(*nu, coeffs.len() - 1, x);
                coeffs.iter().zip(psi).fold(Quaternion::zero(), |acc, (&c, p)| acc + c.scale(p))
            }
            Self::Sampled { eval, .. } => eval(x),
        }
    }

    /// `‖φ‖²`, exact for the Hermite form.
    pub fn hermite_norm_sqr(&self) -> Option<T> {
        match self {
            Self::Hermite { coeffs, .. } => Some(coeffs.iter().map(|c| c.norm_sqr()).sum()),
            Self::Sampled { .. } => None,
        }
    }

    fn certificate(&self) -> Result<DecayCertificate<T>> {
        match self {
            Self::Hermite { nu, coeffs } => Ok(DecayCertificate {
                nu: *nu,
                degree: coeffs.len().saturating_sub(1),
            }),
            Self::Sampled {
                certificate: Some(c), ..
            } => Ok(*c),
            Self::Sampled { certificate: None, .. } => Err(Error::WeightIncompatible(
                "sampled input has no decay certificate".into(),
            )),
        }
    }
}

impl<T: Real> std::fmt::Debug for L2Function<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Hermite { nu, coeffs } => f
                .debug_struct("Hermite")
                .field("nu", nu)
                .field("coeffs", coeffs)
                .finish(),
            Self::Sampled { certificate, .. } => f
                .debug_struct("Sampled")
                .field("certificate", certificate)
                .finish_non_exhaustive(),
        }
    }
}

fn prefactor<T: Real>(nu: T, normalization: Normalization) -> T {
    let base = nu / T::PI();
    match normalization {
        Normalization::Unitary => base.sqrt().sqrt(),
        Normalization::PaperLiteral => base.powf(T::lit(0.75)),
    }
}

/// `c(ν) exp(-(ν/2)(q² + x²) + ν√2 q x)`.
pub fn sb_kernel<T: Real>(nu: T, q: Quaternion<T>, x: T, normalization: Normalization) -> Quaternion<T> {
    let c = prefactor(nu, normalization);
    apply_intrinsic(q, |z| sb_exponent(nu, z, x, T::zero()).exp() * c)
}

/// `-(ν/2)(z² + x²) + ν√2 z x + shift·x²`.
fn sb_exponent<T: Real>(nu: T, z: Complex<T>, x: T, shift: T) -> Complex<T> {
    let half = nu / T::lit(2.0);
    -(z * z + x * x) * half + z * (nu * T::SQRT_2() * x) + shift * x * x
}

/// `c exp(-(x − √2 q)²/γ²)`, equal to `e^{-q²/γ²} · sb_kernel(2/γ², q, x)`.
pub fn rbf_sb_kernel<T: Real>(gamma: T, q: Quaternion<T>, x: T, normalization: Normalization) -> Quaternion<T> {
    let c = prefactor(T::lit(2.0) / (gamma * gamma), normalization);
    apply_intrinsic(q, |z| {
        let d = Complex::new(x, T::zero()) - z * T::SQRT_2();
        (-(d * d) / (gamma * gamma)).exp() * c
    })
}

/// Segal–Bargmann transform `B_ν` with a cached `x`-rule.
#[derive(Debug, Clone)]
pub struct SbTransform<T> {
    nu: T,
    normalization: Normalization,
    order: usize,
}

impl<T: Real> SbTransform<T> {
    pub fn new(nu: T, normalization: Normalization) -> Result<Self> {
        require_positive("nu", nu)?;
        Ok(Self {
            nu,
            normalization,
            order: TRANSFORM_ORDER,
        })
    }

    pub fn with_order(mut self, order: usize) -> Result<Self> {
        gauss_hermite::<T>(order, T::one())?;
        self.order = order;
        Ok(self)
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn kernel(&self, q: Quaternion<T>, x: T) -> Quaternion<T> {
        sb_kernel(self.nu, q, x, self.normalization)
    }

    /// `B[ψ_n^ν](q) = s · ν^{n/2} qⁿ/√n!` for `n = 0..=n_max`, with `s = 1`
    /// (unitary) or `√(ν/π)` (paper-literal).
    pub fn psi_images(&self, n_max: usize, q: Quaternion<T>) -> Vec<Quaternion<T>> {
        let s = match self.normalization {
            Normalization::Unitary => T::one(),
            Normalization::PaperLiteral => (self.nu / T::PI()).sqrt(),
        };
        let mut out = Vec::with_capacity(n_max + 1);
        let mut acc = Quaternion::real(s);
        out.push(acc);
        for n in 1..=n_max {
            acc = (q * acc).scale((self.nu / T::from_usize_lossy(n)).sqrt());
            out.push(acc);
        }
        out
    }

    /// `B[φ](q)`. Hermite input with matching `ν` is mapped exactly,
    /// everything else goes through [`Self::apply_quadrature`].
    pub fn apply(&self, phi: &L2Function<T>, q: Quaternion<T>) -> Result<Quaternion<T>> {
        match phi {
            L2Function::Hermite { nu, coeffs } if *nu == self.nu => {
                if coeffs.is_empty() {
                    return Ok(Quaternion::zero());
                }
                let images = self.psi_images(coeffs.len() - 1, q);
                Ok(images
                    .into_iter()
                    .zip(coeffs)
                    .fold(Quaternion::zero(), |acc, (b, &c)| acc + b * c))
            }
            _ => self.apply_quadrature(phi, q),
        }
    }

    /// `∫ A(q,x) φ(x) dx` by Gauss–Hermite quadrature. The rule carries
    /// `e^{-ν_r x²}` with `ν_r = (ν + ν_φ)/2`, the combined Gaussian of kernel
    /// and input; what remains is a polynomial times `e^{ν√2 q x}`.
    pub fn apply_quadrature(&self, phi: &L2Function<T>, q: Quaternion<T>) -> Result<Quaternion<T>> {
        let rule = self.rule_for(phi)?;
        Ok(self.apply_with_rule(&rule, phi, q))
    }

    /// The `x`-rule matching the decay of `φ`; build it once for many `q`.
    pub fn rule_for(&self, phi: &L2Function<T>) -> Result<QuadratureRule<T>> {
        let cert = phi.certificate()?;
        require_positive("certificate nu", cert.nu)?;
        if cert.degree > 2 * self.order - 1 {
            return Err(Error::WeightIncompatible(format!(
                "certified degree {} exceeds the exactness degree of the order-{} rule",
                cert.degree, self.order
            )));
        }
        gauss_hermite(self.order, (self.nu + cert.nu) / T::lit(2.0))
    }

    pub fn apply_with_rule(&self, rule: &QuadratureRule<T>, phi: &L2Function<T>, q: Quaternion<T>) -> Quaternion<T> {
        let c = prefactor(self.nu, self.normalization);
        let shift = rule.nu();
        let dec = crate::hypercomplex::slice_decompose(q);
        let unit = dec.point.unit;
        let z = dec.point.to_complex();
        // accumulate a + b I with quaternion φ(x) on the right
        let mut acc = crate::hypercomplex::CompensatedQuaternion::new();
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            let k = sb_exponent(self.nu, z, x, shift).exp() * (c * w);
            acc.add(unit.embed(k) * phi.eval(x));
        }
        acc.value()
    }
}

/// RBF–Segal–Bargmann transform `M^{-γ²} ∘ B_{2/γ²}`.
#[derive(Debug, Clone)]
pub struct RbfSbTransform<T> {
    gamma: T,
    inner: SbTransform<T>,
}

impl<T: Real> RbfSbTransform<T> {
    pub fn new(gamma: T, normalization: Normalization) -> Result<Self> {
        require_positive("gamma", gamma)?;
        Ok(Self {
            gamma,
            inner: SbTransform::new(T::lit(2.0) / (gamma * gamma), normalization)?,
        })
    }

    pub fn with_order(mut self, order: usize) -> Result<Self> {
        self.inner = self.inner.with_order(order)?;
        Ok(self)
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn nu(&self) -> T {
        self.inner.nu
    }

    pub fn kernel(&self, q: Quaternion<T>, x: T) -> Quaternion<T> {
        rbf_sb_kernel(self.gamma, q, x, self.inner.normalization)
    }

    fn damp(&self, q: Quaternion<T>, v: Quaternion<T>) -> Quaternion<T> {
        crate::hypercomplex::quat_intrinsic_exp_sq(self.gamma, q, Sign::Minus) * v
    }

    pub fn apply(&self, phi: &L2Function<T>, q: Quaternion<T>) -> Result<Quaternion<T>> {
        Ok(self.damp(q, self.inner.apply(phi, q)?))
    }

    pub fn apply_quadrature(&self, phi: &L2Function<T>, q: Quaternion<T>) -> Result<Quaternion<T>> {
        Ok(self.damp(q, self.inner.apply_quadrature(phi, q)?))
    }

    pub fn rule_for(&self, phi: &L2Function<T>) -> Result<QuadratureRule<T>> {
        self.inner.rule_for(phi)
    }

    pub fn apply_with_rule(&self, rule: &QuadratureRule<T>, phi: &L2Function<T>, q: Quaternion<T>) -> Quaternion<T> {
        self.damp(q, self.inner.apply_with_rule(rule, phi, q))
    }
}

pub fn sb_transform<T: Real>(nu: T, phi: &L2Function<T>, q: Quaternion<T>, normalization: Normalization) -> Result<Quaternion<T>> {
    SbTransform::new(nu, normalization)?.apply(phi, q)
}

pub fn rbf_sb_transform<T: Real>(
    gamma: T,
    phi: &L2Function<T>,
    q: Quaternion<T>,
    normalization: Normalization,
) -> Result<Quaternion<T>> {
    RbfSbTransform::new(gamma, normalization)?.apply(phi, q)
}

/// Complex-valued function on `R^d`.
#[derive(Clone)]
pub enum L2FunctionD<T> {
    /// `φ = Σ_n c_n ψ_n^ν`, `ψ_n^ν(x) = Π ψ_{n_ℓ}^ν(x_ℓ)`.
    Hermite {
        nu: T,
        dim: usize,
        coeffs: Vec<(MultiIndex, Complex<T>)>,
    },
    Sampled {
        dim: usize,
        eval: RdToComplex<T>,
        certificate: Option<DecayCertificate<T>>,
    },
}

impl<T: Real> L2FunctionD<T> {
    pub fn psi(nu: T, n: MultiIndex) -> Result<Self> {
        require_positive("nu", nu)?;
        Ok(Self::Hermite {
            nu,
            dim: n.dim(),
            coeffs: vec![(n, Complex::new(T::one(), T::zero()))],
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Hermite { dim, .. } | Self::Sampled { dim, .. } => *dim,
        }
    }

    pub fn eval(&self, x: &[T]) -> Result<Complex<T>> {
        match self {
            Self::Hermite { nu, coeffs, .. } => {
                let mut acc = CompensatedComplex::new();
                for (n, c) in coeffs {
                    acc.add(*c * hermite_psi_d(*nu, n, x)?);
                }
                Ok(acc.value())
            }
            Self::Sampled { eval, .. } => Ok(eval(x)),
        }
    }

    fn certificate(&self) -> Result<DecayCertificate<T>> {
        match self {
            Self::Hermite { nu, coeffs, .. } => Ok(DecayCertificate {
                nu: *nu,
                degree: coeffs.iter().map(|(n, _)| n.abs()).max().unwrap_or(0),
            }),
            Self::Sampled {
                certificate: Some(c), ..
            } => Ok(*c),
            Self::Sampled { certificate: None, .. } => Err(Error::WeightIncompatible(
                "sampled input has no decay certificate".into(),
            )),
        }
    }
}

/// `d`-dimensional RBF–Segal–Bargmann transform with kernel
/// `(2/πγ²)^{d/4} exp(-Σ(√2 z_ℓ − x_ℓ)²/γ²)`.
#[derive(Debug, Clone)]
pub struct RbfSbTransformD<T> {
    gamma: T,
    dim: usize,
    order: usize,
}

impl<T: Real> RbfSbTransformD<T> {
    pub fn new(gamma: T, dim: usize) -> Result<Self> {
        require_positive("gamma", gamma)?;
        if dim == 0 {
            return Err(invalid("dim", "must be at least 1"));
        }
        Ok(Self {
            gamma,
            dim,
            order: TRANSFORM_ORDER,
        })
    }

    pub fn with_order(mut self, order: usize) -> Result<Self> {
        gauss_hermite::<T>(order, T::one())?;
        crate::quadrature::check_node_budget(order, self.dim)?;
        self.order = order;
        Ok(self)
    }

    pub fn nu(&self) -> T {
        T::lit(2.0) / (self.gamma * self.gamma)
    }

    pub fn kernel(&self, z: &[Complex<T>], x: &[T]) -> Result<Complex<T>> {
        self.check(z.len())?;
        self.check(x.len())?;
        Ok(self.kernel_shifted(z, x, T::zero()))
    }

    fn kernel_shifted(&self, z: &[Complex<T>], x: &[T], shift: T) -> Complex<T> {
        let g2 = self.gamma * self.gamma;
        let mut e = CompensatedComplex::new();
        for (&zl, &xl) in z.iter().zip(x) {
            let d = zl * T::SQRT_2() - xl;
            e.add(-(d * d) / g2 + shift * xl * xl);
        }
        let c = (self.nu() / T::PI()).powf(T::from_usize_lossy(self.dim) / T::lit(4.0));
        e.value().exp() * c
    }

    fn check(&self, found: usize) -> Result<()> {
        if found == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            })
        }
    }

    /// Hermite input with `ν = 2/γ²` maps exactly to `Σ c_n e_n^γ(z)`.
    pub fn apply(&self, phi: &L2FunctionD<T>, z: &[Complex<T>]) -> Result<Complex<T>> {
        self.check(phi.dim())?;
        self.check(z.len())?;
        match phi {
            L2FunctionD::Hermite { nu, coeffs, .. } if *nu == self.nu() => {
                let mut acc = CompensatedComplex::new();
                for (n, c) in coeffs {
                    acc.add(rbf_basis_d(self.gamma, n, z)? * *c);
                }
                Ok(acc.value())
            }
            _ => {
                let rule = self.rule_for(phi)?;
                self.apply_with_rule(&rule, phi, z)
            }
        }
    }

    pub fn apply_quadrature(&self, phi: &L2FunctionD<T>, z: &[Complex<T>]) -> Result<Complex<T>> {
        let rule = self.rule_for(phi)?;
        self.apply_with_rule(&rule, phi, z)
    }

    pub fn rule_for(&self, phi: &L2FunctionD<T>) -> Result<QuadratureRule<T>> {
        self.check(phi.dim())?;
        let cert = phi.certificate()?;
        require_positive("certificate nu", cert.nu)?;
        if cert.degree > 2 * self.order - 1 {
            return Err(Error::WeightIncompatible(format!(
                "certified degree {} exceeds the exactness degree of the order-{} rule",
                cert.degree, self.order
            )));
        }
        crate::quadrature::check_node_budget(self.order, self.dim)?;
        gauss_hermite(self.order, (self.nu() + cert.nu) / T::lit(2.0))
    }

    pub fn apply_with_rule(&self, rule: &QuadratureRule<T>, phi: &L2FunctionD<T>, z: &[Complex<T>]) -> Result<Complex<T>> {
        self.check(z.len())?;
        let shift = rule.nu();
        let mut failure = None;
        let v = integrate_rd(rule, self.dim, |x| match phi.eval(x) {
            Ok(p) => self.kernel_shifted(z, x, shift) * p,
            Err(e) => {
                failure.get_or_insert(e);
                Complex::new(T::zero(), T::zero())
            }
        })?;
        match failure {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

pub fn rbf_sb_transform_d<T: Real>(gamma: T, phi: &L2FunctionD<T>, z: &[Complex<T>]) -> Result<Complex<T>> {
    RbfSbTransformD::new(gamma, z.len())?.apply(phi, z)
}

/// Least-squares fit of samples `(x_i, φ(x_i))` onto `ψ_0^ν..ψ_D^ν`,
/// componentwise for quaternion values. Returns the Hermite form and the
/// relative residual `‖Ac − φ‖/‖φ‖`.
pub fn fit_hermite(nu: f64, degree: usize, xs: &[f64], values: &[Quaternion<f64>]) -> Result<(L2Function<f64>, f64)> {
    require_positive("nu", nu)?;
    if xs.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: values.len(),
        });
    }
    if xs.len() <= degree {
        return Err(invalid("samples", format!("need more than {degree} samples for degree {degree}")));
    }
    let a = DMatrix::from_fn(xs.len(), degree + 1, |i, n| hermite_psi_all(nu, degree, xs[i])[n]);
    let svd = a.clone().svd(true, true);
    let mut coeffs = vec![Quaternion::zero(); degree + 1];
    let (mut res, mut total) = (0.0, 0.0);
    for comp in 0..4 {
        let b = DVector::from_iterator(values.len(), values.iter().map(|v| v.to_array()[comp]));
        let c = svd.solve(&b, 1e-13).map_err(|e| invalid("samples", e.to_string()))?;
        res += (&a * &c - &b).norm_squared();
        total += b.norm_squared();
        for (n, q) in coeffs.iter_mut().enumerate() {
            let mut arr = q.to_array();
            arr[comp] = c[n];
            *q = Quaternion::from_array(arr);
        }
    }
    let rel = if total > 0.0 { (res / total).sqrt() } else { 0.0 };
    Ok((L2Function::hermite(nu, coeffs)?, rel))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{hermite_psi, rbf_basis_q};
    use crate::hypercomplex::ImaginaryUnit;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    type Q = Quaternion<f64>;

    #[test]
    fn kernel_matches_generating_series() {
        let nu = 1.3;
        let q = Q::new(0.7, 0.5, -0.6, 0.4);
        for x in [-1.2, 0.0, 0.4, 2.1] {
            let mut acc = Q::zero();
            let mut qn = Q::one();
            for n in 0..=40usize {
                if n > 0 {
                    qn = (q * qn).scale((nu / n as f64).sqrt());
                }
                acc += qn.scale(hermite_psi(nu, n, x));
            }
            let k = sb_kernel(nu, q, x, Normalization::Unitary);
            assert!(acc.max_abs_diff(k) < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn kernel_special_points() {
        let nu = 0.9f64;
        let x = 0.8;
        let k = sb_kernel(nu, Q::zero(), x, Normalization::PaperLiteral);
        assert_relative_eq!(k.q0, (nu / PI).powf(0.75) * (-nu * x * x / 2.0).exp(), max_relative = 1e-15);
        let k = sb_kernel(nu, Q::real(x / 2f64.sqrt()), x, Normalization::Unitary);
        assert_relative_eq!(k.q0, (nu / PI).powf(0.25) * (nu * x * x / 4.0).exp(), max_relative = 1e-14);
    }

    #[test]
    fn rbf_kernel_factorization() {
        let g = 0.75;
        let q = Q::new(0.3, -0.2, 0.6, 0.1);
        for norm in [Normalization::Unitary, Normalization::PaperLiteral] {
            for x in [-0.9, 0.2, 1.7] {
                let lhs = rbf_sb_kernel(g, q, x, norm);
                let rhs = crate::hypercomplex::quat_intrinsic_exp_sq(g, q, Sign::Minus) * sb_kernel(2.0 / (g * g), q, x, norm);
                assert!(lhs.max_abs_diff(rhs) < 1e-13 * (1.0 + rhs.norm()));
            }
        }
        let peak = rbf_sb_kernel(g, Q::real(0.5), 0.5 * 2f64.sqrt(), Normalization::Unitary);
        assert_relative_eq!(peak.q0, (2.0 / (PI * g * g)).powf(0.25), max_relative = 1e-15);
    }

    #[test]
    fn psi_maps_to_basis() {
        let g = 1.2;
        let t = RbfSbTransform::new(g, Normalization::Unitary).unwrap();
        let q = Q::new(0.4, 0.1, 0.3, -0.2);
        for n in 0..8 {
            let phi = L2Function::psi(t.nu(), n).unwrap();
            let exact = t.apply(&phi, q).unwrap();
            assert!(exact.max_abs_diff(rbf_basis_q(g, n, q)) < 1e-14);
            let quad = t.apply_quadrature(&phi, q).unwrap();
            assert!(quad.max_abs_diff(exact) < 1e-12, "n = {n}");
        }
        let lit = RbfSbTransform::new(g, Normalization::PaperLiteral).unwrap();
        let phi = L2Function::psi(t.nu(), 3).unwrap();
        let ratio = lit.apply(&phi, Q::real(0.3)).unwrap().q0 / t.apply(&phi, Q::real(0.3)).unwrap().q0;
        assert_relative_eq!(ratio, (t.nu() / PI).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn right_linearity_and_zero() {
        let nu = 1.0;
        let t = SbTransform::new(nu, Normalization::Unitary).unwrap();
        let q = ImaginaryUnit::j().embed(Complex::new(0.2, 0.5));
        let c = vec![Q::new(0.1, 0.2, 0.3, 0.4), Q::new(-0.5, 0.0, 0.2, 0.1)];
        let lambda = Q::new(0.3, -0.7, 0.1, 0.2);
        let phi = L2Function::hermite(nu, c.clone()).unwrap();
        let scaled = L2Function::hermite(nu, c.iter().map(|&a| a * lambda).collect()).unwrap();
        let lhs = t.apply(&scaled, q).unwrap();
        let rhs = t.apply(&phi, q).unwrap() * lambda;
        assert!(lhs.max_abs_diff(rhs) < 1e-15);
        let zero = L2Function::hermite(nu, vec![]).unwrap();
        assert_eq!(t.apply(&zero, q).unwrap(), Q::zero());
    }

    #[test]
    fn sampled_input_needs_certificate() {
        let t = SbTransform::new(1.0, Normalization::Unitary).unwrap();
        let bare = L2Function::sampled(|x: f64| Q::real((-x * x / 2.0).exp()), None);
        assert!(matches!(t.apply(&bare, Q::one()), Err(Error::WeightIncompatible(_))));
        // different Gaussian scale: combined rule
        let nu_phi = 2.5;
        let phi = L2Function::sampled(
            move |x: f64| Q::real(hermite_psi(nu_phi, 2, x)),
            Some(DecayCertificate { nu: nu_phi, degree: 2 }),
        );
        let hermite = L2Function::psi(nu_phi, 2).unwrap();
        let q = Q::new(0.3, 0.2, 0.0, 0.0);
        let a = t.apply(&phi, q).unwrap();
        let b = t.apply(&hermite, q).unwrap();
        assert!(a.max_abs_diff(b) < 1e-13);
    }

    #[test]
    fn d_dimensional_transform() {
        let g = 0.9;
        let t = RbfSbTransformD::new(g, 2).unwrap().with_order(30).unwrap();
        let z = [Complex::new(0.3, -0.2), Complex::new(-0.1, 0.4)];
        let n = MultiIndex(vec![2, 1]);
        let phi = L2FunctionD::psi(t.nu(), n.clone()).unwrap();
        let exact = t.apply(&phi, &z).unwrap();
        assert!((exact - rbf_basis_d(g, &n, &z).unwrap()).norm() < 1e-15);
        let quad = t.apply_quadrature(&phi, &z).unwrap();
        assert!((quad - exact).norm() < 1e-12);

        let t1 = RbfSbTransformD::new(g, 1).unwrap();
        let q = ImaginaryUnit::i().embed(z[0]);
        let k1 = t1.kernel(&z[..1], &[0.4]).unwrap();
        let kq = rbf_sb_kernel(g, q, 0.4, Normalization::Unitary);
        assert!((Q::from_complex(k1) - kq).norm() < 1e-15);
    }

    #[test]
    fn least_squares_fit_recovers_coefficients() {
        let nu = 1.5;
        let c = vec![Q::new(0.2, 0.0, 0.1, 0.0), Q::zero(), Q::new(0.0, -0.3, 0.0, 0.5)];
        let phi = L2Function::hermite(nu, c.clone()).unwrap();
        let xs: Vec<f64> = (0..41).map(|i| -4.0 + 0.2 * i as f64).collect();
        let vals: Vec<Q> = xs.iter().map(|&x| phi.eval(x)).collect();
        let (fit, res) = fit_hermite(nu, 4, &xs, &vals).unwrap();
        assert!(res < 1e-12);
        let L2Function::Hermite { coeffs, .. } = fit else { panic!() };
        for (n, got) in coeffs.iter().enumerate() {
            let want = c.get(n).copied().unwrap_or(Q::zero());
            assert!(got.max_abs_diff(want) < 1e-12);
        }
    }
}

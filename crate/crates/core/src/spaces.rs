//! Inner products, norms and reproducing properties of the slice Fock space,
//! the quaternionic RBF space and their `d`-dimensional complex analogues.
//!
//! RBF integrals are never taken against the RBF weight directly: every
//! function is mapped by `M^{γ²}` (multiplication by `e^{q²/γ²}`) to the Fock
//! side, where the weight `e^{-ν|q|²}` is carried exactly by a Gauss–Hermite
//! rule. Functions given as closures must state the polynomial degree of
//! that Fock-side image; otherwise they are refused.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{invalid, require_positive, Error, Result};
use crate::hypercomplex::{
    quat_intrinsic_exp_sq, CompensatedQuaternion, ImaginaryUnit, Quaternion, Sign, SlicePoint,
};
use crate::quadrature::{check_node_budget, gauss_hermite, QuadratureRule, DEFAULT_ORDER};
use crate::scalar::{CompensatedComplex, Real};
use crate::series::{beta_coeffs, gaussian_mul_coeffs, CPowerSeries, MultiIndex, QPowerSeries, DEGREE_CAP};

pub type QuatFn<T> = Arc<dyn Fn(Quaternion<T>) -> Quaternion<T> + Send + Sync>;
pub type MultiFn<T> = Arc<dyn Fn(&[Complex<T>]) -> Complex<T> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound(serialize = "T: Real + Serialize"))]
pub enum SpaceTag<T> {
    FockSlice { nu: T, unit: Quaternion<T> },
    RbfSlice { gamma: T, unit: Quaternion<T> },
    FockC { alpha: T, dim: usize },
    RbfC { gamma: T, dim: usize },
}

/// A slice function on `H`.
#[derive(Clone)]
pub enum SliceFunction<T> {
    /// `Σ qⁿ aₙ`, the function itself.
    Series(QPowerSeries<T>),
    /// `e^{-q²/γ²} · Σ qⁿ bₙ`; the series is the Fock-side image.
    GaussianSeries { gamma: T, fock: QPowerSeries<T> },
    /// Closure evaluating the function. `degree` bounds the polynomial
    /// degree of its Fock-side image; `None` means no certificate.
    Handle { eval: QuatFn<T>, degree: Option<usize> },
}

impl<T: Real> SliceFunction<T> {
    pub fn handle(eval: impl Fn(Quaternion<T>) -> Quaternion<T> + Send + Sync + 'static, degree: Option<usize>) -> Self {
        Self::Handle {
            eval: Arc::new(eval),
            degree,
        }
    }

    pub fn eval(&self, q: Quaternion<T>) -> Quaternion<T> {
        match self {
            Self::Series(s) => s.eval(q),
            Self::GaussianSeries { gamma, fock } => quat_intrinsic_exp_sq(*gamma, q, Sign::Minus) * fock.eval(q),
            Self::Handle { eval, .. } => eval(q),
        }
    }
}

impl<T: Real> fmt::Debug for SliceFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Series(s) => f.debug_tuple("Series").field(s).finish(),
            Self::GaussianSeries { gamma, fock } => f
                .debug_struct("GaussianSeries")
                .field("gamma", gamma)
                .field("fock", fock)
                .finish(),
            Self::Handle { degree, .. } => f.debug_struct("Handle").field("degree", degree).finish_non_exhaustive(),
        }
    }
}

/// A function on `C^d`.
#[derive(Clone)]
pub enum MultiFunction<T> {
    Series(CPowerSeries<T>),
    GaussianSeries { gamma: T, fock: CPowerSeries<T> },
    Handle { eval: MultiFn<T>, degree: Option<usize> },
}

impl<T: Real> MultiFunction<T> {
    pub fn handle(eval: impl Fn(&[Complex<T>]) -> Complex<T> + Send + Sync + 'static, degree: Option<usize>) -> Self {
        Self::Handle {
            eval: Arc::new(eval),
            degree,
        }
    }

    pub fn eval(&self, z: &[Complex<T>]) -> Result<Complex<T>> {
        match self {
            Self::Series(s) => s.eval(z),
            Self::GaussianSeries { gamma, fock } => Ok(gaussian_d(*gamma, z, Sign::Minus) * fock.eval(z)?),
            Self::Handle { eval, .. } => Ok(eval(z)),
        }
    }
}

impl<T: Real> fmt::Debug for MultiFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Series(s) => f.debug_tuple("Series").field(s).finish(),
            Self::GaussianSeries { gamma, fock } => f
                .debug_struct("GaussianSeries")
                .field("gamma", gamma)
                .field("fock", fock)
                .finish(),
            Self::Handle { degree, .. } => f.debug_struct("Handle").field("degree", degree).finish_non_exhaustive(),
        }
    }
}

/// `e^{sign Σ z_ℓ²/γ²}`.
fn gaussian_d<T: Real>(gamma: T, z: &[Complex<T>], sign: Sign) -> Complex<T> {
    let s: Complex<T> = z.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &a| acc + a * a);
    (s * (sign.value::<T>() / (gamma * gamma))).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Kind<T> {
    Fock { nu: T },
    Rbf { gamma: T },
}

/// Quaternionic slice space with its quadrature grid on `C_I`.
#[derive(Debug, Clone)]
pub struct SliceSpace<T> {
    kind: Kind<T>,
    unit: ImaginaryUnit<T>,
    rule: QuadratureRule<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(bound(serialize = "T: Real + Serialize"))]
pub struct BoundReport<T> {
    pub max_ratio: T,
    pub worst_point: Quaternion<T>,
    pub norm: T,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SliceIndependenceReport<T> {
    pub norm_i: T,
    pub norm_j: T,
    pub relative_difference: T,
    pub pass: bool,
}

impl<T: Real> SliceSpace<T> {
    /// Slice Fock space `F^ν_Slice(H)` integrated on `C_I`.
    pub fn fock(nu: T, unit: ImaginaryUnit<T>, order: usize) -> Result<Self> {
        require_positive("nu", nu)?;
        Ok(Self {
            kind: Kind::Fock { nu },
            unit,
            rule: gauss_hermite(order, nu)?,
        })
    }

    /// Slice RBF space `H_{γ,S}(H)`; integrals run on the Fock side with
    /// `ν = 2/γ²`.
    pub fn rbf(gamma: T, unit: ImaginaryUnit<T>, order: usize) -> Result<Self> {
        require_positive("gamma", gamma)?;
        Ok(Self {
            kind: Kind::Rbf { gamma },
            unit,
            rule: gauss_hermite(order, T::lit(2.0) / (gamma * gamma))?,
        })
    }

    pub fn with_default_order(self) -> Result<Self> {
        match self.kind {
            Kind::Fock { nu } => Self::fock(nu, self.unit, DEFAULT_ORDER),
            Kind::Rbf { gamma } => Self::rbf(gamma, self.unit, DEFAULT_ORDER),
        }
    }

    pub fn tag(&self) -> SpaceTag<T> {
        let unit = self.unit.quaternion();
        match self.kind {
            Kind::Fock { nu } => SpaceTag::FockSlice { nu, unit },
            Kind::Rbf { gamma } => SpaceTag::RbfSlice { gamma, unit },
        }
    }

    pub fn nu(&self) -> T {
        self.rule.nu()
    }

    pub fn gamma(&self) -> Option<T> {
        match self.kind {
            Kind::Rbf { gamma } => Some(gamma),
            Kind::Fock { .. } => None,
        }
    }

    pub fn unit(&self) -> ImaginaryUnit<T> {
        self.unit
    }

    pub fn rule(&self) -> &QuadratureRule<T> {
        &self.rule
    }

    /// Polynomial degree of the Fock-side image, or a refusal.
    fn image_degree(&self, f: &SliceFunction<T>) -> Result<usize> {
        match (f, self.kind) {
            (SliceFunction::Series(s), _) => Ok(s.degree()),
            (SliceFunction::GaussianSeries { .. }, Kind::Fock { .. }) => Err(Error::WeightIncompatible(
                "a Gaussian-times-series function is not square integrable on the Fock side".into(),
            )),
            (SliceFunction::GaussianSeries { gamma, fock }, Kind::Rbf { gamma: g }) => {
                if *gamma != g {
                    return Err(Error::WeightIncompatible(format!(
                        "Gaussian factor width {gamma} differs from the space width {g}"
                    )));
                }
                Ok(fock.degree())
            }
            (SliceFunction::Handle { degree: Some(d), .. }, _) => Ok(*d),
            (SliceFunction::Handle { degree: None, .. }, _) => Err(Error::WeightIncompatible(
                "function handle has no decay certificate (polynomial degree of its Fock-side image)".into(),
            )),
        }
    }

    /// Values of the Fock-side image on the grid, `x` outer and `y` inner.
    fn image_samples(&self, f: &SliceFunction<T>) -> Result<Vec<Quaternion<T>>> {
        self.image_degree(f)?;
        let image: Box<dyn Fn(Quaternion<T>) -> Quaternion<T> + '_> = match (f, self.kind) {
            (SliceFunction::Series(s), Kind::Fock { .. }) => Box::new(move |q| s.eval(q)),
            (SliceFunction::Series(s), Kind::Rbf { gamma }) => {
                let beta = QPowerSeries::new(beta_coeffs(gamma, s.coeffs(), s.degree())?)?;
                Box::new(move |q| beta.eval(q))
            }
            (SliceFunction::GaussianSeries { fock, .. }, _) => Box::new(move |q| fock.eval(q)),
            (SliceFunction::Handle { eval, .. }, Kind::Fock { .. }) => Box::new(move |q| eval(q)),
            (SliceFunction::Handle { eval, .. }, Kind::Rbf { gamma }) => {
                Box::new(move |q| quat_intrinsic_exp_sq(gamma, q, Sign::Plus) * eval(q))
            }
        };
        let nodes = self.rule.nodes();
        let mut out = Vec::with_capacity(nodes.len() * nodes.len());
        for &x in nodes {
            for &y in nodes {
                out.push(image(SlicePoint::new(x, y, self.unit).to_quaternion()));
            }
        }
        Ok(out)
    }

    fn check_pair(&self, df: usize, dg: usize) -> Result<()> {
        let exact = 2 * self.rule.order() - 1;
        if df + dg > exact {
            return Err(Error::WeightIncompatible(format!(
                "integrand degree {} exceeds the exactness degree {exact} of the order-{} rule",
                df + dg,
                self.rule.order()
            )));
        }
        Ok(())
    }

    /// `(ν/π) Σ w conj(g) f` over the grid.
    fn pair_sum(&self, f: &[Quaternion<T>], g: &[Quaternion<T>]) -> Quaternion<T> {
        let w = self.rule.weights();
        let m = w.len();
        let mut acc = CompensatedQuaternion::new();
        for a in 0..m {
            for b in 0..m {
                let i = a * m + b;
                acc.add((g[i].conj() * f[i]).scale(w[a] * w[b]));
            }
        }
        acc.value().scale(self.nu() / T::PI())
    }

    /// `⟨f, g⟩ = (ν/π) ∫_{C_I} conj(g) f e^{-ν|q|²} dλ_I` on the Fock side.
    pub fn inner_product(&self, f: &SliceFunction<T>, g: &SliceFunction<T>) -> Result<Quaternion<T>> {
        self.check_pair(self.image_degree(f)?, self.image_degree(g)?)?;
        Ok(self.pair_sum(&self.image_samples(f)?, &self.image_samples(g)?))
    }

    pub fn norm(&self, f: &SliceFunction<T>) -> Result<T> {
        Ok(self.inner_product(f, f)?.q0.max(T::zero()).sqrt())
    }

    /// `G[i][j] = ⟨f_i, f_j⟩`, sampling each function once.
    pub fn gram(&self, fs: &[SliceFunction<T>]) -> Result<Vec<Vec<Quaternion<T>>>> {
        let degrees = fs.iter().map(|f| self.image_degree(f)).collect::<Result<Vec<_>>>()?;
        let top = degrees.iter().copied().max().unwrap_or(0);
        self.check_pair(top, top)?;
        let samples = fs.iter().map(|f| self.image_samples(f)).collect::<Result<Vec<_>>>()?;
        Ok(samples
            .iter()
            .map(|fi| samples.iter().map(|fj| self.pair_sum(fi, fj)).collect())
            .collect())
    }

    /// Kernel section `q ↦ K(q, w)` as a truncated series.
    ///
    /// Fock: `Σ qⁿ νⁿ w̄ⁿ/n!`. RBF: `e^{-q²/γ²} Σ qⁿ νⁿ w̄ⁿ e^{-w̄²/γ²}/n!`.
    pub fn kernel_section(&self, w: Quaternion<T>, degree: usize) -> Result<SliceFunction<T>> {
        let nu = self.nu();
        let wc = w.conj();
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut term = Quaternion::one();
        for n in 0..=degree {
            if n > 0 {
                term = (term * wc).scale(nu / T::from_usize_lossy(n));
            }
            coeffs.push(term);
        }
        match self.kind {
            Kind::Fock { .. } => Ok(SliceFunction::Series(QPowerSeries::new(coeffs)?)),
            Kind::Rbf { gamma } => {
                let tail = quat_intrinsic_exp_sq(gamma, wc, Sign::Minus);
                let coeffs = coeffs.into_iter().map(|c| c * tail).collect();
                Ok(SliceFunction::GaussianSeries {
                    gamma,
                    fock: QPowerSeries::new(coeffs)?,
                })
            }
        }
    }

    /// `⟨f, K_w⟩` by quadrature; equals `f(w)` for `f` in the space.
    ///
    /// The kernel section is truncated at the largest degree the rule still
    /// integrates exactly against `f`; terms above `deg f` are orthogonal to
    /// `f`, so the truncation loses nothing.
    pub fn reproduce(&self, f: &SliceFunction<T>, w: Quaternion<T>) -> Result<Quaternion<T>> {
        let df = self.image_degree(f)?;
        let exact = 2 * self.rule.order() - 1;
        if df > exact.saturating_sub(df) || df > DEGREE_CAP {
            return Err(Error::WeightIncompatible(format!(
                "degree {df} too high for reproduction with an order-{} rule",
                self.rule.order()
            )));
        }
        let n = DEGREE_CAP.min(exact - df);
        let section = self.kernel_section(w, n)?;
        self.inner_product(f, &section)
    }

    /// `M^{±γ²}`: multiplication by `e^{±q²/γ²}`.
    ///
    /// Series are mapped coefficientwise and truncated at `degree`; a
    /// Gaussian-times-series with the same width maps to its series under the
    /// `+` direction; closures are wrapped pointwise with the factor on the left.
    pub fn m_operator(gamma: T, sign: Sign, f: &SliceFunction<T>, degree: usize) -> Result<SliceFunction<T>> {
        require_positive("gamma", gamma)?;
        match f {
            SliceFunction::Series(s) => Ok(SliceFunction::Series(QPowerSeries::new(gaussian_mul_coeffs(
                gamma,
                sign,
                s.coeffs(),
                degree,
            ))?)),
            SliceFunction::GaussianSeries { gamma: g, fock } if *g == gamma && sign == Sign::Plus => {
                Ok(SliceFunction::Series(fock.clone()))
            }
            SliceFunction::GaussianSeries { gamma: g, fock } => {
                // expand e^{-q²/g²} first, then apply the requested factor
                let own = gaussian_mul_coeffs(*g, Sign::Minus, fock.coeffs(), degree);
                Ok(SliceFunction::Series(QPowerSeries::new(gaussian_mul_coeffs(
                    gamma, sign, &own, degree,
                ))?))
            }
            SliceFunction::Handle { eval, degree: d } => {
                let eval = Arc::clone(eval);
                Ok(SliceFunction::handle(
                    move |q| quat_intrinsic_exp_sq(gamma, q, sign) * eval(q),
                    *d,
                ))
            }
        }
    }

    /// Checks `|f(q)| ≤ e^{2y²/γ²} ‖f‖` at every grid point and reports the
    /// largest ratio.
    pub fn pointwise_bound_check(&self, f: &SliceFunction<T>, grid: &[Quaternion<T>], tol: T) -> Result<BoundReport<T>> {
        let Kind::Rbf { gamma } = self.kind else {
            return Err(invalid("space", "pointwise bound applies to the RBF space"));
        };
        let norm = self.norm(f)?;
        let mut max_ratio = T::zero();
        let mut worst_point = Quaternion::zero();
        for &q in grid {
            let y = q.imag_norm();
            let bound = (T::lit(2.0) * y * y / (gamma * gamma)).exp() * norm;
            let value = f.eval(q).norm();
            let ratio = if bound > T::zero() {
                value / bound
            } else if value == T::zero() {
                T::zero()
            } else {
                T::infinity()
            };
            if ratio > max_ratio {
                max_ratio = ratio;
                worst_point = q;
            }
        }
        Ok(BoundReport {
            max_ratio,
            worst_point,
            norm,
            pass: max_ratio <= T::one() + tol,
        })
    }

    /// Compares `‖f‖` computed on `C_I` and on `C_J`.
    pub fn slice_independence_check(
        &self,
        f: &SliceFunction<T>,
        i: ImaginaryUnit<T>,
        j: ImaginaryUnit<T>,
        tol: T,
    ) -> Result<SliceIndependenceReport<T>> {
        let on = |unit| -> Result<T> {
            let space = Self {
                kind: self.kind,
                unit,
                rule: self.rule.clone(),
            };
            space.norm(f)
        };
        let (norm_i, norm_j) = (on(i)?, on(j)?);
        let relative_difference = (norm_i - norm_j).abs() / norm_i.abs().max(norm_j.abs()).max(T::min_positive_value());
        Ok(SliceIndependenceReport {
            norm_i,
            norm_j,
            relative_difference,
            pass: relative_difference <= tol,
        })
    }
}

/// Fock space `F_α(C^d)` or RBF space `H_{γ,d}`, integrated by the `2d`-fold
/// tensor rule.
#[derive(Debug, Clone)]
pub struct MultiSpace<T> {
    kind: Kind<T>,
    dim: usize,
    rule: QuadratureRule<T>,
}

impl<T: Real> MultiSpace<T> {
    pub fn fock(alpha: T, dim: usize, order: usize) -> Result<Self> {
        require_positive("alpha", alpha)?;
        Self::build(Kind::Fock { nu: alpha }, alpha, dim, order)
    }

    pub fn rbf(gamma: T, dim: usize, order: usize) -> Result<Self> {
        require_positive("gamma", gamma)?;
        Self::build(Kind::Rbf { gamma }, T::lit(2.0) / (gamma * gamma), dim, order)
    }

    fn build(kind: Kind<T>, nu: T, dim: usize, order: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim", "must be at least 1"));
        }
        check_node_budget(order, 2 * dim)?;
        Ok(Self {
            kind,
            dim,
            rule: gauss_hermite(order, nu)?,
        })
    }

    pub fn tag(&self) -> SpaceTag<T> {
        match self.kind {
            Kind::Fock { nu } => SpaceTag::FockC {
                alpha: nu,
                dim: self.dim,
            },
            Kind::Rbf { gamma } => SpaceTag::RbfC { gamma, dim: self.dim },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nu(&self) -> T {
        self.rule.nu()
    }

    fn image_degree(&self, f: &MultiFunction<T>) -> Result<usize> {
        match (f, self.kind) {
            (MultiFunction::Series(s), _) => {
                self.check_dim(s.dim())?;
                Ok(s.total_degree())
            }
            (MultiFunction::GaussianSeries { .. }, Kind::Fock { .. }) => Err(Error::WeightIncompatible(
                "a Gaussian-times-series function is not square integrable on the Fock side".into(),
            )),
            (MultiFunction::GaussianSeries { gamma, fock }, Kind::Rbf { gamma: g }) => {
                self.check_dim(fock.dim())?;
                if *gamma != g {
                    return Err(Error::WeightIncompatible(format!(
                        "Gaussian factor width {gamma} differs from the space width {g}"
                    )));
                }
                Ok(fock.total_degree())
            }
            (MultiFunction::Handle { degree: Some(d), .. }, _) => Ok(*d),
            (MultiFunction::Handle { degree: None, .. }, _) => Err(Error::WeightIncompatible(
                "function handle has no decay certificate (polynomial degree of its Fock-side image)".into(),
            )),
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                found,
            })
        }
    }

    fn check_pair(&self, df: usize, dg: usize) -> Result<()> {
        let exact = 2 * self.rule.order() - 1;
        if df + dg > exact {
            return Err(Error::WeightIncompatible(format!(
                "integrand degree {} exceeds the exactness degree {exact} of the order-{} rule",
                df + dg,
                self.rule.order()
            )));
        }
        Ok(())
    }

    /// Visits the grid in the fixed tensor order with the point in `C^d`
    /// and the product weight.
    fn for_each_node(&self, mut visit: impl FnMut(&[Complex<T>], T)) -> Result<()> {
        let mut z = vec![Complex::new(T::zero(), T::zero()); self.dim];
        crate::quadrature::for_each_tensor_node(&self.rule, 2 * self.dim, |x, w| {
            for (l, zl) in z.iter_mut().enumerate() {
                *zl = Complex::new(x[2 * l], x[2 * l + 1]);
            }
            visit(&z, w);
        })
    }

    fn image_samples(&self, f: &MultiFunction<T>) -> Result<Vec<Complex<T>>> {
        self.image_degree(f)?;
        let mut out = Vec::new();
        let mut failure = None;
        let mut push = |v: Result<Complex<T>>| match v {
            Ok(v) => out.push(v),
            Err(e) => {
                failure.get_or_insert(e);
            }
        };
        match (f, self.kind) {
            (MultiFunction::Series(s), Kind::Fock { .. }) => self.for_each_node(|z, _| push(s.eval(z)))?,
            (MultiFunction::Series(s), Kind::Rbf { gamma }) => {
                let image = s.mul_exp_sq(gamma, Sign::Plus, s.total_degree())?;
                self.for_each_node(|z, _| push(image.eval(z)))?
            }
            (MultiFunction::GaussianSeries { fock, .. }, _) => self.for_each_node(|z, _| push(fock.eval(z)))?,
            (MultiFunction::Handle { eval, .. }, Kind::Fock { .. }) => self.for_each_node(|z, _| push(Ok(eval(z))))?,
            (MultiFunction::Handle { eval, .. }, Kind::Rbf { gamma }) => {
                self.for_each_node(|z, _| push(Ok(gaussian_d(gamma, z, Sign::Plus) * eval(z))))?
            }
        }
        match failure {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    fn weights(&self) -> Result<Vec<T>> {
        let mut w = Vec::new();
        self.for_each_node(|_, wt| w.push(wt))?;
        Ok(w)
    }

    fn pair_sum(&self, weights: &[T], f: &[Complex<T>], g: &[Complex<T>]) -> Complex<T> {
        let mut acc = CompensatedComplex::new();
        for ((&w, &a), &b) in weights.iter().zip(f).zip(g) {
            acc.add(a * b.conj() * w);
        }
        acc.value() * (self.nu() / T::PI()).powi(self.dim as i32)
    }

    /// `⟨f, g⟩ = (ν/π)^d ∫_{C^d} f conj(g) e^{-ν|z|²} dλ` on the Fock side.
    pub fn inner_product(&self, f: &MultiFunction<T>, g: &MultiFunction<T>) -> Result<Complex<T>> {
        self.check_pair(self.image_degree(f)?, self.image_degree(g)?)?;
        let w = self.weights()?;
        Ok(self.pair_sum(&w, &self.image_samples(f)?, &self.image_samples(g)?))
    }

    pub fn norm(&self, f: &MultiFunction<T>) -> Result<T> {
        Ok(self.inner_product(f, f)?.re.max(T::zero()).sqrt())
    }

    pub fn gram(&self, fs: &[MultiFunction<T>]) -> Result<Vec<Vec<Complex<T>>>> {
        let degrees = fs.iter().map(|f| self.image_degree(f)).collect::<Result<Vec<_>>>()?;
        let top = degrees.iter().copied().max().unwrap_or(0);
        self.check_pair(top, top)?;
        let w = self.weights()?;
        let samples = fs.iter().map(|f| self.image_samples(f)).collect::<Result<Vec<_>>>()?;
        Ok(samples
            .iter()
            .map(|fi| samples.iter().map(|fj| self.pair_sum(&w, fi, fj)).collect())
            .collect())
    }

    /// `⟨f, K_w⟩` by quadrature. The Fock-side kernel section
    /// `e^{ν z·w̄}` (times `e^{-w̄²/γ²}` for the RBF space) is evaluated in
    /// closed form; its terms beyond the exactness degree are damped by
    /// `1/n!` and alias only at round-off level for moderate `|w|`.
    pub fn reproduce(&self, f: &MultiFunction<T>, w: &[Complex<T>]) -> Result<Complex<T>> {
        self.check_dim(w.len())?;
        let df = self.image_degree(f)?;
        self.check_pair(df, df)?;
        let nu = self.nu();
        let tail = match self.kind {
            Kind::Fock { .. } => Complex::new(T::one(), T::zero()),
            Kind::Rbf { gamma } => {
                let wc: Vec<_> = w.iter().map(|a| a.conj()).collect();
                gaussian_d(gamma, &wc, Sign::Minus)
            }
        };
        let mut section = Vec::new();
        self.for_each_node(|z, _| {
            let s = z.iter().zip(w).fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b.conj());
            section.push((s * nu).exp() * tail);
        })?;
        let weights = self.weights()?;
        Ok(self.pair_sum(&weights, &self.image_samples(f)?, &section))
    }

    /// Multi-index version of `M^{±γ²}` on series, truncated at total degree
    /// `degree`.
    pub fn m_operator(gamma: T, sign: Sign, f: &CPowerSeries<T>, degree: usize) -> Result<CPowerSeries<T>> {
        f.mul_exp_sq(gamma, sign, degree)
    }
}

/// Normalized complex RBF basis in `d` variables, as closures certified by
/// the degree `|n|` of their Fock-side image.
pub fn rbf_basis_handles<T: Real>(gamma: T, indices: &[MultiIndex]) -> Vec<MultiFunction<T>> {
    indices
        .iter()
        .map(|n| {
            let n = n.clone();
            let degree = n.abs();
            MultiFunction::handle(
                move |z| crate::bases::rbf_basis_d(gamma, &n, z).unwrap_or(Complex::new(T::nan(), T::nan())),
                Some(degree),
            )
        })
        .collect()
}

/// Slice function `e_n^γ` as a certified closure.
pub fn rbf_basis_slice_handle<T: Real>(gamma: T, n: usize) -> SliceFunction<T> {
    SliceFunction::handle(move |q| crate::bases::rbf_basis_q(gamma, n, q), Some(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::fock_basis_q;
    use crate::kernels::rbf_kernel_qslice;

    type Q = Quaternion<f64>;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn fock_monomials_orthogonal() {
        let nu = 2.0;
        let space = SliceSpace::fock(nu, ImaginaryUnit::i(), 40).unwrap();
        let mono = |n| SliceFunction::Series(QPowerSeries::monomial(n, Q::one()).unwrap());
        let g = space.gram(&[mono(0), mono(1), mono(3)]).unwrap();
        assert!((g[2][2].q0 - 6.0 / 8.0).abs() < 1e-13);
        assert!((g[1][1].q0 - 0.5).abs() < 1e-14);
        assert!(g[0][1].norm() < 1e-15);
        assert!(g[1][2].norm() < 1e-14);
    }

    #[test]
    fn rbf_basis_orthonormal() {
        let space = SliceSpace::rbf(0.7, ImaginaryUnit::from_vector(1.0, 1.0, 1.0).unwrap(), 40).unwrap();
        let fs: Vec<_> = (0..6).map(|n| rbf_basis_slice_handle(0.7, n)).collect();
        let g = space.gram(&fs).unwrap();
        for (m, row) in g.iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                let want = if m == n { Q::one() } else { Q::zero() };
                assert!(v.max_abs_diff(want) < 1e-12, "({m},{n}) {v}");
            }
        }
    }

    #[test]
    fn refusals() {
        let fock = SliceSpace::fock(1.0, ImaginaryUnit::i(), 10).unwrap();
        let rbf = SliceSpace::rbf(1.0, ImaginaryUnit::i(), 10).unwrap();
        let gs = SliceFunction::GaussianSeries {
            gamma: 1.0,
            fock: QPowerSeries::constant(Q::one()),
        };
        assert!(matches!(fock.norm(&gs), Err(Error::WeightIncompatible(_))));
        let bare = SliceFunction::handle(|q| q, None);
        assert!(matches!(rbf.norm(&bare), Err(Error::WeightIncompatible(_))));
        let high = SliceFunction::Series(QPowerSeries::monomial(12, Q::one()).unwrap());
        assert!(matches!(fock.norm(&high), Err(Error::WeightIncompatible(_))));
        let other = SliceFunction::GaussianSeries {
            gamma: 2.0,
            fock: QPowerSeries::constant(Q::one()),
        };
        assert!(matches!(rbf.norm(&other), Err(Error::WeightIncompatible(_))));
    }

    #[test]
    fn reproduce_in_fock_and_rbf() {
        let a = vec![Q::new(0.3, -0.1, 0.2, 0.5), Q::new(-0.4, 0.6, 0.1, 0.0), Q::new(0.2, 0.2, -0.7, 0.3)];
        let f = SliceFunction::Series(QPowerSeries::new(a).unwrap());
        let w = Q::new(0.3, 0.0, 0.5, 0.0);
        let fock = SliceSpace::fock(1.5, ImaginaryUnit::i(), 40).unwrap();
        let got = fock.reproduce(&f, w).unwrap();
        assert!(got.max_abs_diff(f.eval(w)) < 1e-12);

        let rbf = SliceSpace::rbf(1.0, ImaginaryUnit::k(), 60).unwrap();
        let e3 = rbf_basis_slice_handle(1.0, 3);
        let w = Q::new(0.4, 0.2, 0.0, 0.0);
        let got = rbf.reproduce(&e3, w).unwrap();
        assert!(got.max_abs_diff(e3.eval(w)) < 1e-12);
    }

    #[test]
    fn kernel_section_inner_products() {
        let g = 1.1;
        let rbf = SliceSpace::rbf(g, ImaginaryUnit::j(), 80).unwrap();
        let p = Q::new(0.2, 0.3, -0.1, 0.4);
        let q = Q::new(-0.5, 0.1, 0.2, 0.2);
        let kq = rbf.kernel_section(q, 64).unwrap();
        let kp = rbf.kernel_section(p, 64).unwrap();
        let ip = rbf.inner_product(&kq, &kp).unwrap();
        assert!(ip.max_abs_diff(rbf_kernel_qslice(g, p, q).unwrap()) < 1e-12);
    }

    #[test]
    fn m_operator_maps_basis() {
        let g = 0.8;
        let nu = 2.0 / (g * g);
        let e2 = SliceFunction::Series(QPowerSeries::new(
            crate::series::gaussian_mul_coeffs(g, Sign::Minus, &[Q::zero(), Q::zero(), Q::real((nu * nu / 2.0f64).sqrt())], 20),
        ).unwrap());
        let SliceFunction::Series(image) = SliceSpace::m_operator(g, Sign::Plus, &e2, 20).unwrap() else {
            panic!("series expected")
        };
        let q = Q::new(0.3, 0.1, 0.0, -0.2);
        assert!(image.eval(q).max_abs_diff(fock_basis_q(nu, 2, q)) < 1e-12);
        let SliceFunction::Series(e0) =
            SliceSpace::m_operator(g, Sign::Minus, &SliceFunction::Series(QPowerSeries::constant(Q::one())), 40).unwrap()
        else {
            panic!("series expected")
        };
        assert!(e0.eval(q).max_abs_diff(crate::bases::rbf_basis_q(g, 0, q)) < 1e-14);
    }

    #[test]
    fn bound_and_independence() {
        let g = 1.0;
        let rbf = SliceSpace::rbf(g, ImaginaryUnit::i(), 80).unwrap();
        let p = ImaginaryUnit::i().embed(c(0.4, 0.9));
        let kp = rbf.kernel_section(p, 64).unwrap();
        let rep = rbf.pointwise_bound_check(&kp, &[p, Q::real(0.3)], 1e-9).unwrap();
        assert!(rep.pass);
        assert!((rep.max_ratio - 1.0).abs() < 1e-10);

        let f = SliceFunction::GaussianSeries {
            gamma: g,
            fock: QPowerSeries::new(vec![Q::new(0.1, 0.5, -0.3, 0.2), Q::new(0.0, 0.4, 0.9, -0.1)]).unwrap(),
        };
        let diag = ImaginaryUnit::from_vector(1.0, 1.0, 0.0).unwrap();
        let rep = rbf.slice_independence_check(&f, ImaginaryUnit::i(), diag, 1e-12).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn multi_spaces() {
        let space = MultiSpace::rbf(1.0, 2, 10).unwrap();
        let idx = MultiIndex::graded(2, 2);
        let g = space.gram(&rbf_basis_handles(1.0, &idx)).unwrap();
        for (a, row) in g.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((v - c(want, 0.0)).norm() < 1e-12);
            }
        }
        let fock = MultiSpace::fock(1.5, 1, 40).unwrap();
        let constant = MultiFunction::Series(CPowerSeries::from_terms(1, [(MultiIndex(vec![0]), c(2.0, -1.0))]).unwrap());
        let got = fock.reproduce(&constant, &[c(0.3, 0.4)]).unwrap();
        assert!((got - c(2.0, -1.0)).norm() < 1e-12);

        let space = MultiSpace::rbf(1.0, 2, 20).unwrap();
        let f = rbf_basis_handles(1.0, &[MultiIndex(vec![2, 1])]).pop().unwrap();
        let w = [c(0.4, 0.2), c(-0.3, 0.1)];
        let got = space.reproduce(&f, &w).unwrap();
        assert!((got - f.eval(&w).unwrap()).norm() < 1e-10);
        assert!(MultiSpace::<f64>::rbf(1.0, 2, 60).is_err());
    }
}

//! Truncated power series.
//!
//! [`QPowerSeries`] holds right quaternionic coefficients of a left slice
//! hyperholomorphic function `f(q) = Σ q^n a_n`. [`CPowerSeries`] holds
//! complex coefficients over multi-indices for functions on `C^d`.
//!
//! Multiplication by the Gaussian `e^{±q²/γ²}` is the operation everything
//! else is built on: on coefficients it is the lower-triangular map
//! `β_k = Σ_{j ≤ k/2} (±1)^j a_{k-2j} / (γ^{2j} j!)`.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};
use crate::hypercomplex::{Quaternion, Sign};
use crate::scalar::{exact_factorial, factorial, ln_factorial, Compensated, CompensatedComplex, Real};

/// Highest degree a dense series may carry.
pub const DEGREE_CAP: usize = 64;

/// `Σ_{n ≤ N} q^n a_n` with powers to the left of the coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct QPowerSeries<T> {
    coeffs: Vec<Quaternion<T>>,
}

impl<T: Real> QPowerSeries<T> {
    pub fn new(coeffs: Vec<Quaternion<T>>) -> Result<Self> {
        if coeffs.len() > DEGREE_CAP + 1 {
            return Err(Error::DegreeCap {
                degree: coeffs.len() - 1,
                cap: DEGREE_CAP,
            });
        }
        let coeffs = if coeffs.is_empty() {
            vec![Quaternion::zero()]
        } else {
            coeffs
        };
        Ok(Self { coeffs })
    }

    /// Real-coefficient series.
    pub fn from_real(coeffs: &[T]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Quaternion::real(c)).collect())
    }

    pub fn constant(c: Quaternion<T>) -> Self {
        Self { coeffs: vec![c] }
    }

    /// `q^n c`.
    pub fn monomial(n: usize, c: Quaternion<T>) -> Result<Self> {
        let mut coeffs = vec![Quaternion::zero(); n + 1];
        coeffs[n] = c;
        Self::new(coeffs)
    }

    /// Taylor coefficients of `e^{sign q²/γ²}` up to `degree`.
    pub fn exp_sq(gamma: T, sign: Sign, degree: usize) -> Result<Self> {
        require_positive("gamma", gamma)?;
        let s = gaussian_factors(gamma, sign, degree / 2);
        let mut coeffs = vec![Quaternion::zero(); degree + 1];
        for (m, sm) in s.into_iter().enumerate() {
            coeffs[2 * m] = Quaternion::real(sm);
        }
        Self::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Quaternion<T>] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Quaternion<T> {
        self.coeffs.get(n).copied().unwrap_or_else(Quaternion::zero)
    }

    /// Whether every coefficient is real, i.e. the series is intrinsic.
    pub fn is_intrinsic(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    pub fn truncate(&self, degree: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(degree + 1);
        Self { coeffs }
    }

    /// Horner evaluation `a_0 + q(a_1 + q(a_2 + ...))`.
    pub fn eval(&self, q: Quaternion<T>) -> Quaternion<T> {
        let mut acc = Quaternion::zero();
        for &a in self.coeffs.iter().rev() {
            acc = q * acc + a;
        }
        acc
    }

    /// Cauchy product `f · g` for intrinsic `f`: `c_k = Σ_j s_j a_{k-j}`.
    ///
    /// The product of two general slice series is not the coefficientwise
    /// Cauchy product, so a left factor with non-real coefficients is
    /// rejected. The result keeps every coefficient up to
    /// `min(deg f + deg g, DEGREE_CAP)`.
    pub fn cauchy_mul(&self, g: &Self) -> Result<Self> {
        if let Some(index) = self.coeffs.iter().position(|c| !c.is_real()) {
            return Err(Error::NonIntrinsicFactor { index });
        }
        let degree = (self.degree() + g.degree()).min(DEGREE_CAP);
        let coeffs = (0..=degree)
            .map(|k| {
                let mut acc = [Compensated::new(); 4];
                for j in 0..=k.min(self.degree()) {
                    if k - j > g.degree() {
                        continue;
                    }
                    let term = g.coeffs[k - j].scale(self.coeffs[j].q0);
                    for (a, v) in acc.iter_mut().zip(term.to_array()) {
                        a.add(v);
                    }
                }
                Quaternion::new(acc[0].value(), acc[1].value(), acc[2].value(), acc[3].value())
            })
            .collect();
        Self::new(coeffs)
    }
}

/// Real factors `(±1)^j / (γ^{2j} j!)` for `j = 0..=count`, built by the
/// running product so no factorial is formed.
pub fn gaussian_factors<T: Real>(gamma: T, sign: Sign, count: usize) -> Vec<T> {
    let step = sign.value::<T>() / (gamma * gamma);
    let mut out = Vec::with_capacity(count + 1);
    let mut s = T::one();
    out.push(s);
    for j in 1..=count {
        s = s * step / T::from_usize_lossy(j);
        out.push(s);
    }
    out
}

/// Coefficients of `e^{sign q²/γ²} f` for `f = Σ q^n a_n`, indices `0..=max_index`.
/// Missing entries of `a` count as zero.
pub fn gaussian_mul_coeffs<T: Real>(
    gamma: T,
    sign: Sign,
    a: &[Quaternion<T>],
    max_index: usize,
) -> Vec<Quaternion<T>> {
    let s = gaussian_factors(gamma, sign, max_index / 2);
    (0..=max_index)
        .map(|k| {
            let mut acc = [Compensated::new(); 4];
            for (j, &sj) in s.iter().enumerate().take(k / 2 + 1) {
                if let Some(&ak) = a.get(k - 2 * j) {
                    for (c, v) in acc.iter_mut().zip(ak.scale(sj).to_array()) {
                        c.add(v);
                    }
                }
            }
            Quaternion::new(acc[0].value(), acc[1].value(), acc[2].value(), acc[3].value())
        })
        .collect()
}

/// Fock-side coefficients `β_0..β_K` of `e^{q²/γ²} f`.
pub fn beta_coeffs<T: Real>(gamma: T, a: &[Quaternion<T>], k_max: usize) -> Result<Vec<Quaternion<T>>> {
    require_positive("gamma", gamma)?;
    Ok(gaussian_mul_coeffs(gamma, Sign::Plus, a, k_max))
}

/// Partial sum `Σ_{k ≤ K} (k! γ^{2k} / 2^k) |β_k|²`, the squared RBF-space
/// norm of `f = Σ q^n a_n` read off on the Fock side.
///
/// Weights past `k = 30` are formed in log space together with `|β_k|²`.
pub fn sequential_norm<T: Real>(gamma: T, a: &[Quaternion<T>], k_max: usize) -> Result<T> {
    let beta = beta_coeffs(gamma, a, k_max)?;
    let log_ratio = (gamma * gamma / T::lit(2.0)).ln().to_f64_lossy();
    let mut acc = Compensated::new();
    for (k, b) in beta.iter().enumerate() {
        let nb = b.norm_sqr();
        if nb == T::zero() {
            continue;
        }
        let term = if k <= 30 {
            factorial::<T>(k) * (gamma * gamma / T::lit(2.0)).powi(k as i32) * nb
        } else {
            let ln = ln_factorial(k) + k as f64 * log_ratio + nb.to_f64_lossy().ln();
            T::lit(ln.exp())
        };
        acc.add(term);
    }
    Ok(acc.value())
}

/// JSON form `{"gamma": g, "coeffs": [[q0,q1,q2,q3], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub gamma: f64,
    pub coeffs: Vec<Quaternion<f64>>,
}

impl SeriesDocument {
    pub fn series(&self) -> Result<QPowerSeries<f64>> {
        require_positive("gamma", self.gamma)?;
        QPowerSeries::new(self.coeffs.clone())
    }
}

/// Multi-index `n = (n_1, ..., n_d)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn zero(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|n| = Σ n_ℓ`.
    pub fn abs(&self) -> usize {
        self.0.iter().sum()
    }

    /// `n! = Π n_ℓ!`, exact for `|n| ≤ 20`.
    pub fn factorial_exact(&self) -> Option<u64> {
        (self.abs() <= 20).then(|| self.0.iter().map(|&k| exact_factorial(k as u32)).product())
    }

    pub fn factorial<T: Real>(&self) -> T {
        self.0.iter().map(|&k| factorial::<T>(k)).fold(T::one(), |a, b| a * b)
    }

    /// `z^n = Π z_ℓ^{n_ℓ}`.
    pub fn monomial<T: Real>(&self, z: &[Complex<T>]) -> Complex<T> {
        self.0
            .iter()
            .zip(z)
            .fold(Complex::new(T::one(), T::zero()), |acc, (&k, &zl)| acc * zl.powu(k as u32))
    }

    /// Every multi-index of dimension `dim` with `|n| ≤ max_abs`, ordered by
    /// `|n|` and then lexicographically descending (`(1,0)` before `(0,1)`).
    pub fn graded(dim: usize, max_abs: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for total in 0..=max_abs {
            let mut current = vec![0; dim];
            compositions(total, 0, &mut current, &mut out);
        }
        out
    }
}

fn compositions(rest: usize, pos: usize, current: &mut Vec<usize>, out: &mut Vec<MultiIndex>) {
    if pos + 1 == current.len() {
        current[pos] = rest;
        out.push(MultiIndex(current.clone()));
        return;
    }
    if current.is_empty() {
        return;
    }
    for k in (0..=rest).rev() {
        current[pos] = k;
        compositions(rest - k, pos + 1, current, out);
    }
}

/// `Σ_n c_n z^n` over multi-indices of a fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct CPowerSeries<T> {
    dim: usize,
    coeffs: BTreeMap<MultiIndex, Complex<T>>,
}

impl<T: Real> CPowerSeries<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, Complex<T>)>) -> Result<Self> {
        let mut s = Self::new(dim);
        for (n, c) in terms {
            s.insert(n, c)?;
        }
        Ok(s)
    }

    pub fn insert(&mut self, n: MultiIndex, c: Complex<T>) -> Result<()> {
        if n.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n.dim(),
            });
        }
        if n.abs() > DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree: n.abs(),
                cap: DEGREE_CAP,
            });
        }
        let slot = self.coeffs.entry(n).or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *slot = *slot + c;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex<T>)> {
        self.coeffs.iter()
    }

    /// Largest `|n|` among stored terms.
    pub fn total_degree(&self) -> usize {
        self.coeffs.keys().map(MultiIndex::abs).max().unwrap_or(0)
    }

    /// Largest single exponent among stored terms.
    pub fn max_partial_degree(&self) -> usize {
        self.coeffs
            .keys()
            .flat_map(|n| n.0.iter().copied())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, z: &[Complex<T>]) -> Result<Complex<T>> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: z.len(),
            });
        }
        let top = self.max_partial_degree();
        let powers: Vec<Vec<Complex<T>>> = z
            .iter()
            .map(|&zl| {
                let mut p = Vec::with_capacity(top + 1);
                let mut acc = Complex::new(T::one(), T::zero());
                for _ in 0..=top {
                    p.push(acc);
                    acc = acc * zl;
                }
                p
            })
            .collect();
        let mut sum = CompensatedComplex::new();
        for (n, &c) in &self.coeffs {
            let mono = n
                .0
                .iter()
                .enumerate()
                .fold(Complex::new(T::one(), T::zero()), |acc, (l, &k)| acc * powers[l][k]);
            sum.add(mono * c);
        }
        Ok(sum.value())
    }

    /// Coefficients of `e^{sign z²/γ²} f` (with `z² = Σ z_ℓ²`), keeping
    /// terms of total degree at most `max_degree`.
    pub fn mul_exp_sq(&self, gamma: T, sign: Sign, max_degree: usize) -> Result<Self> {
        require_positive("gamma", gamma)?;
        let s = gaussian_factors(gamma, sign, max_degree / 2);
        let mut out = Self::new(self.dim);
        for (n, &c) in &self.coeffs {
            if n.abs() > max_degree {
                continue;
            }
            let budget = (max_degree - n.abs()) / 2;
            // distribute 2j_ℓ extra powers over the coordinates
            for shift in MultiIndex::graded(self.dim, budget) {
                let factor = shift.0.iter().fold(T::one(), |acc, &j| acc * s[j]);
                let target = MultiIndex(n.0.iter().zip(&shift.0).map(|(&a, &j)| a + 2 * j).collect());
                out.insert(target, c * factor)?;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypercomplex::quat_intrinsic_exp_sq;

    type Q = Quaternion<f64>;

    #[test]
    fn eval_examples() {
        let a0 = Q::new(0.5, -1.0, 2.0, 0.25);
        let f = QPowerSeries::constant(a0);
        assert_eq!(f.eval(Q::new(3.0, 1.0, 4.0, 1.0)), a0);
        let f = QPowerSeries::new(vec![Q::zero(), Q::j()]).unwrap();
        assert_eq!(f.eval(Q::i()), Q::k());
    }

    #[test]
    fn eval_respects_left_powers() {
        let q = Q::new(0.2, 0.4, -0.3, 0.9);
        let a = [Q::new(1.0, 0.0, 0.5, 0.0), Q::new(0.0, 1.0, 0.0, 2.0), Q::j()];
        let f = QPowerSeries::new(a.to_vec()).unwrap();
        let direct = a[0] + q * a[1] + q * q * a[2];
        assert!(f.eval(q).max_abs_diff(direct) < 1e-15);
    }

    #[test]
    fn truncated_gaussian_matches_slice_exponential() {
        let q = Q::new(0.3, 0.4, 0.0, 0.0);
        let f = QPowerSeries::exp_sq(1.0, Sign::Minus, 8).unwrap();
        let exact = quat_intrinsic_exp_sq(1.0, q, Sign::Minus);
        // remainder bounded by |q|^10 / 5! / (1 - |q|^2)
        let bound = q.norm().powi(10) / 120.0 / (1.0 - q.norm_sqr());
        assert!(f.eval(q).max_abs_diff(exact) <= bound);
    }

    #[test]
    fn trailing_zeros_do_not_change_value() {
        let q = Q::new(-0.7, 0.1, 0.2, 0.3);
        let f = QPowerSeries::new(vec![Q::one(), Q::k()]).unwrap();
        let g = QPowerSeries::new(vec![Q::one(), Q::k(), Q::zero(), Q::zero()]).unwrap();
        assert_eq!(f.eval(q), g.eval(q));
    }

    #[test]
    fn cauchy_examples() {
        let g = QPowerSeries::new(vec![Q::new(1.0, 2.0, 0.0, -1.0), Q::j()]).unwrap();
        let one = QPowerSeries::constant(Q::one());
        assert_eq!(one.cauchy_mul(&g).unwrap(), g);

        let s = QPowerSeries::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let a = QPowerSeries::from_real(&[0.0, 1.0]).unwrap();
        let c = s.cauchy_mul(&a).unwrap();
        let expect: Vec<Q> = [0.0, 1.0, 0.0, 1.0].iter().map(|&x| Q::real(x)).collect();
        assert_eq!(c.coeffs(), expect.as_slice());

        let bad = QPowerSeries::new(vec![Q::one(), Q::i()]).unwrap();
        assert_eq!(bad.cauchy_mul(&g), Err(Error::NonIntrinsicFactor { index: 1 }));
    }

    #[test]
    fn opposite_gaussians_cancel_up_to_truncation() {
        let up = QPowerSeries::exp_sq(0.8f64, Sign::Plus, 20).unwrap();
        let down = QPowerSeries::exp_sq(0.8, Sign::Minus, 20).unwrap();
        let prod = up.cauchy_mul(&down).unwrap();
        assert!((prod.coeff(0).q0 - 1.0).abs() < 1e-15);
        for k in 1..=20 {
            assert!(prod.coeff(k).norm() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn beta_examples() {
        let gamma = 1.3f64;
        let g2 = gamma * gamma;
        let down = QPowerSeries::exp_sq(gamma, Sign::Minus, 30).unwrap();
        let beta = beta_coeffs(gamma, down.coeffs(), 30).unwrap();
        assert!((beta[0].q0 - 1.0).abs() < 1e-15);
        for b in &beta[1..] {
            assert!(b.norm() < 1e-14);
        }

        let beta = beta_coeffs(gamma, &[Q::one()], 10).unwrap();
        let mut fact = 1.0;
        for m in 0..=5 {
            if m > 0 {
                fact *= m as f64;
            }
            assert!((beta[2 * m].q0 - 1.0 / (g2.powi(m as i32) * fact)).abs() < 1e-15);
            if 2 * m < 10 {
                assert_eq!(beta[2 * m + 1], Q::zero());
            }
        }

        let beta = beta_coeffs(gamma, &[Q::zero(), Q::one()], 9).unwrap();
        let mut fact = 1.0;
        for m in 0..=4 {
            if m > 0 {
                fact *= m as f64;
            }
            assert!((beta[2 * m + 1].q0 - 1.0 / (g2.powi(m as i32) * fact)).abs() < 1e-15);
            assert_eq!(beta[2 * m], Q::zero());
        }
    }

    #[test]
    fn sequential_norm_examples() {
        let gamma = 0.9f64;
        let down = QPowerSeries::exp_sq(gamma, Sign::Minus, 40).unwrap();
        let n = sequential_norm(gamma, down.coeffs(), 20).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
        assert_eq!(sequential_norm(gamma, &[Q::zero(); 5], 10).unwrap(), 0.0);

        // e_1 = sqrt(2/γ²) q e^{-q²/γ²}
        let c1 = (2.0 / (gamma * gamma)).sqrt();
        let mut a = vec![Q::zero()];
        a.extend(down.coeffs().iter().map(|c| c.scale(c1)));
        let n = sequential_norm(gamma, &a, 20).unwrap();
        assert!((n - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sequential_norm_log_branch_is_continuous() {
        // a single β_k: the term equals k! γ^{2k}/2^k exactly
        let gamma = 1.1f64;
        for k in [29usize, 30, 31, 32, 40] {
            let mut fock = vec![Q::zero(); k + 1];
            fock[k] = Q::one();
            let a = gaussian_mul_coeffs(gamma, Sign::Minus, &fock, k);
            let got = sequential_norm(gamma, &a, k).unwrap();
            let expect = (ln_factorial(k) + k as f64 * (gamma * gamma / 2.0).ln()).exp();
            assert!((got / expect - 1.0).abs() < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn degree_cap_enforced() {
        assert!(QPowerSeries::new(vec![Q::one(); DEGREE_CAP + 1]).is_ok());
        assert!(matches!(
            QPowerSeries::new(vec![Q::one(); DEGREE_CAP + 2]),
            Err(Error::DegreeCap { .. })
        ));
    }

    #[test]
    fn series_document_json() {
        let doc: SeriesDocument = serde_json::from_str(r#"{"gamma": 1.5, "coeffs": [[1,0,0,0],[0,0,1,0]]}"#).unwrap();
        let f = doc.series().unwrap();
        assert_eq!(f.degree(), 1);
        assert_eq!(f.coeff(1), Q::j());
        let bad: SeriesDocument = serde_json::from_str(r#"{"gamma": -1, "coeffs": []}"#).unwrap();
        assert!(bad.series().is_err());
    }

    #[test]
    fn multi_index_basics() {
        let n = MultiIndex(vec![3, 0, 2]);
        assert_eq!(n.abs(), 5);
        assert_eq!(n.factorial_exact(), Some(12));
        assert_eq!(n.factorial::<f64>(), 12.0);
        assert_eq!(MultiIndex(vec![15, 6]).factorial_exact(), None);
        let all = MultiIndex::graded(2, 2);
        let want: Vec<Vec<usize>> = vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]];
        assert_eq!(all.into_iter().map(|m| m.0).collect::<Vec<_>>(), want);
        assert_eq!(MultiIndex::graded(3, 4).len(), 35);
    }

    #[test]
    fn cseries_eval_and_gaussian() {
        let c = |re, im| Complex::new(re, im);
        let f = CPowerSeries::from_terms(
            2,
            [(MultiIndex(vec![1, 0]), c(2.0, 0.0)), (MultiIndex(vec![0, 2]), c(0.0, 1.0))],
        )
        .unwrap();
        let z = [c(0.5, 0.5), c(-1.0, 0.25)];
        let direct = z[0] * 2.0 + z[1] * z[1] * c(0.0, 1.0);
        assert!((f.eval(&z).unwrap() - direct).norm() < 1e-15);
        assert!(f.eval(&z[..1]).is_err());

        let gamma = 1.2;
        let g = f.mul_exp_sq(gamma, Sign::Minus, 40).unwrap();
        let zz = z[0] * z[0] + z[1] * z[1];
        let expect = (-zz / (gamma * gamma)).exp() * direct;
        assert!((g.eval(&z).unwrap() - expect).norm() < 1e-12);
        let back = g.mul_exp_sq(gamma, Sign::Plus, 40).unwrap();
        assert!((back.eval(&z).unwrap() - direct).norm() < 1e-12);
    }
}

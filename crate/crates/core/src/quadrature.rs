//! Gauss–Hermite rules for the weight `e^{-ν x²}` and their tensor products.
//!
//! The Gaussian weight always lives in the rule: integrands passed to
//! [`integrate_slice`] and [`integrate_rd`] must not include it.
//!
//! Nodes come from the eigenvalues of the symmetric tridiagonal Jacobi
//! matrix (implicit QL), polished by Newton steps on the normalized Hermite
//! functions. Weights use the Christoffel form `e^{-t²} / (M φ_{M-1}(t)²)`,
//! which stays accurate in relative terms far into the tails, where the
//! eigenvector route loses everything below `ε·√π`.
//! For orders above roughly 350 the outermost weights underflow to zero.

use num_complex::Complex;

use crate::error::{invalid, require_positive, Error, Result};
use crate::hypercomplex::{CompensatedQuaternion, ImaginaryUnit, Quaternion, SlicePoint};
use crate::scalar::{Compensated, CompensatedComplex, Real};

pub const MAX_ORDER: usize = 512;
/// Default order for 2-D slice integrals.
pub const DEFAULT_ORDER: usize = 80;
/// Cap on `d · M^d` for tensor rules.
pub const NODE_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
    nu: T,
}

impl<T: Real> QuadratureRule<T> {
    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Scale `ν` of the weight `e^{-ν x²}`.
    pub fn nu(&self) -> T {
        self.nu
    }

    /// `∫ f(x) e^{-ν x²} dx`.
    pub fn integrate<F: FnMut(T) -> T>(&self, mut f: F) -> T {
        let mut acc = Compensated::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(x));
        }
        acc.value()
    }

    pub fn integrate_quaternion<F: FnMut(T) -> Quaternion<T>>(&self, mut f: F) -> Quaternion<T> {
        let mut acc = CompensatedQuaternion::new();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(f(x).scale(w));
        }
        acc.value()
    }
}

/// Gauss–Hermite rule of order `M` for the weight `e^{-ν x²}`.
pub fn gauss_hermite<T: Real>(order: usize, nu: T) -> Result<QuadratureRule<T>> {
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(invalid("order", format!("must lie in 1..={MAX_ORDER}, got {order}")));
    }
    require_positive("nu", nu)?;

    // Jacobi matrix of the weight e^{-t²}: zero diagonal, off-diagonal sqrt(k/2)
    let mut diag = vec![T::zero(); order];
    let mut off: Vec<T> = (0..order)
        .map(|i| {
            if i + 1 < order {
                (T::from_usize_lossy(i + 1) / T::lit(2.0)).sqrt()
            } else {
                T::zero()
            }
        })
        .collect();
    tridiagonal_eigenvalues(&mut diag, &mut off).map_err(|_| Error::EigenSolver { order })?;
    diag.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let m = T::from_usize_lossy(order);
    let mut nodes = diag;
    for t in nodes.iter_mut() {
        for _ in 0..4 {
            let (top, below) = hermite_function_pair(order, *t);
            if below == T::zero() {
                break;
            }
            let step = top / ((T::lit(2.0) * m).sqrt() * below);
            *t -= step;
            if step.abs() <= T::epsilon() * t.abs().max(T::one()) {
                break;
            }
        }
    }
    // exact mirror symmetry about 0
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let s = (nodes[j] - nodes[i]) / T::lit(2.0);
        nodes[i] = -s;
        nodes[j] = s;
    }
    if order % 2 == 1 {
        nodes[order / 2] = T::zero();
    }

    let scale = nu.sqrt();
    let mut weights: Vec<T> = nodes
        .iter()
        .map(|&t| {
            let (_, below) = hermite_function_pair(order, t);
            (-t * t).exp() / (m * below * below) / scale
        })
        .collect();
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let w = (weights[i] + weights[j]) / T::lit(2.0);
        weights[i] = w;
        weights[j] = w;
    }
    let nodes = nodes.into_iter().map(|t| t / scale).collect();
    Ok(QuadratureRule { nodes, weights, nu })
}

/// Normalized Hermite functions `(φ_M(t), φ_{M-1}(t))`, orthonormal in
/// `L²(R, dt)`.
fn hermite_function_pair<T: Real>(order: usize, t: T) -> (T, T) {
    let two = T::lit(2.0);
    let mut prev = T::zero();
    let mut cur = (T::one() / T::PI().sqrt()).sqrt() * (-t * t / two).exp();
    for k in 0..order {
        let kf = T::from_usize_lossy(k);
        let next = (two / (kf + T::one())).sqrt() * t * cur - (kf / (kf + T::one())).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson
/// shifts. `off[i]` couples rows `i` and `i + 1`; the last entry is ignored.
/// Eigenvalues overwrite `diag`.
pub(crate) fn tridiagonal_eigenvalues<T: Real>(diag: &mut [T], off: &mut [T]) -> std::result::Result<(), ()> {
    let n = diag.len();
    if n == 0 {
        return Ok(());
    }
    off[n - 1] = T::zero();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if off[m].abs() + dd == dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(());
            }
            let mut g = (diag[l + 1] - diag[l]) / (T::lit(2.0) * off[l]);
            let mut r = g.hypot(T::one());
            g = diag[m] - diag[l] + off[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == T::zero() {
                    diag[i + 1] -= p;
                    off[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[m] = T::zero();
        }
    }
    Ok(())
}

/// `Σ_a Σ_b w_a w_b F(x_a + I y_b)`, i.e. `∫_{C_I} F(q) e^{-ν|q|²} dλ_I`
/// with the weight supplied by the rule. Summation runs over `x` in the
/// outer loop and `y` in the inner loop, always in node order.
pub fn integrate_slice<T: Real, F>(rule: &QuadratureRule<T>, mut integrand: F, unit: ImaginaryUnit<T>) -> Quaternion<T>
where
    F: FnMut(SlicePoint<T>) -> Quaternion<T>,
{
    let mut acc = CompensatedQuaternion::new();
    for (&x, &wx) in rule.nodes.iter().zip(&rule.weights) {
        for (&y, &wy) in rule.nodes.iter().zip(&rule.weights) {
            acc.add(integrand(SlicePoint::new(x, y, unit)).scale(wx * wy));
        }
    }
    acc.value()
}

/// Checks `d · M^d` against [`NODE_BUDGET`].
pub fn check_node_budget(order: usize, dim: usize) -> Result<()> {
    let nodes = (order as u128)
        .checked_pow(dim as u32)
        .and_then(|n| n.checked_mul(dim as u128))
        .unwrap_or(u128::MAX);
    if nodes > NODE_BUDGET {
        Err(Error::NodeBudget {
            nodes,
            cap: NODE_BUDGET,
        })
    } else {
        Ok(())
    }
}

/// Tensor-product node grid of dimension `dim`, visited in odometer order
/// with the last coordinate varying fastest. `visit` receives the point and
/// the product weight.
pub fn for_each_tensor_node<T: Real, F>(rule: &QuadratureRule<T>, dim: usize, mut visit: F) -> Result<()>
where
    F: FnMut(&[T], T),
{
    check_node_budget(rule.order(), dim)?;
    let m = rule.order();
    let mut idx = vec![0usize; dim];
    let mut point: Vec<T> = vec![rule.nodes[0]; dim];
    loop {
        let mut w = T::one();
        for (l, &i) in idx.iter().enumerate() {
            point[l] = rule.nodes[i];
            w *= rule.weights[i];
        }
        visit(&point, w);
        let mut l = dim;
        loop {
            if l == 0 {
                return Ok(());
            }
            l -= 1;
            idx[l] += 1;
            if idx[l] < m {
                break;
            }
            idx[l] = 0;
        }
    }
}

/// `∫_{R^d} F(x) e^{-ν|x|²} dx` by the `d`-fold tensor rule.
pub fn integrate_rd<T: Real, F>(rule: &QuadratureRule<T>, dim: usize, mut integrand: F) -> Result<Complex<T>>
where
    F: FnMut(&[T]) -> Complex<T>,
{
    if dim == 0 {
        return Err(invalid("dim", "must be at least 1"));
    }
    let mut acc = CompensatedComplex::new();
    for_each_tensor_node(rule, dim, |x, w| acc.add(integrand(x) * w))?;
    Ok(acc.value())
}

//! Gram matrices over finite point sets and their positive-semidefiniteness
//! check. Quaternionic matrices are certified through the complex adjoint
//! representation `χ(a + b j) = [[a, b], [-b̄, ā]]`, `a, b ∈ C_i`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypercomplex::Quaternion;
use crate::kernels::{
    kernel_sum_truncated, kernel_sum_truncated_c, rbf_kernel_d, rbf_kernel_qslice, rbf_kernel_real, utility_kernel,
    UtilityKernel,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelId {
    /// `exp(-‖x − y‖²/γ²)` on real points.
    RealRbf,
    /// `exp(-Σ(z_ℓ − w̄_ℓ)²/γ²)` on complex points.
    ComplexRbf,
    /// Slice RBF kernel on quaternions.
    QuaternionRbf,
    /// `(1 + ⟨x, y⟩)^m` on real points.
    Polynomial(u32),
    /// `exp(⟨x, y⟩)` on real points.
    Exponential,
    /// `Σ_{n≤N} e_n^γ(p) e_n^γ(q̄)` on one-dimensional complex or quaternion points.
    TruncatedRbf(usize),
}

impl KernelId {
    pub fn name(&self) -> String {
        match self {
            Self::RealRbf => "real-rbf".into(),
            Self::ComplexRbf => "complex-rbf".into(),
            Self::QuaternionRbf => "quaternion-rbf".into(),
            Self::Polynomial(m) => format!("polynomial({m})"),
            Self::Exponential => "exponential".into(),
            Self::TruncatedRbf(n) => format!("truncated-rbf({n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointSet<T> {
    Real(Vec<Vec<T>>),
    Complex(Vec<Vec<Complex<T>>>),
    Quaternion(Vec<Quaternion<T>>),
}

impl<T: Real> PointSet<T> {
    pub fn len(&self) -> usize {
        match self {
            Self::Real(p) => p.len(),
            Self::Complex(p) => p.len(),
            Self::Quaternion(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn kind(&self) -> &'static str {
        match self {
            Self::Real(_) => "real",
            Self::Complex(_) => "complex",
            Self::Quaternion(_) => "quaternion",
        }
    }

    /// FNV-1a over the coordinate bit patterns, for provenance of a matrix.
    pub fn fingerprint(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        let mut feed = |v: f64| {
            for byte in v.to_bits().to_le_bytes() {
                h ^= byte as u64;
                h = h.wrapping_mul(0x0100_0000_01b3);
            }
        };
        match self {
            Self::Real(ps) => ps.iter().flatten().for_each(|v| feed(v.to_f64_lossy())),
            Self::Complex(ps) => ps.iter().flatten().for_each(|z| {
                feed(z.re.to_f64_lossy());
                feed(z.im.to_f64_lossy());
            }),
            Self::Quaternion(ps) => ps
                .iter()
                .flat_map(|q| q.to_array())
                .for_each(|v| feed(v.to_f64_lossy())),
        }
        h
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GramEntries<T> {
    Complex(Vec<Complex<T>>),
    Quaternion(Vec<Quaternion<T>>),
}

/// Row-major `N × N` kernel matrix with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    pub n: usize,
    pub entries: GramEntries<T>,
    pub kernel: Option<KernelId>,
    pub gamma: Option<T>,
    pub point_hash: Option<u64>,
    /// Whether every point is real, so that the kernel is known to be positive
    /// definite on this set.
    pub real_points: bool,
}

impl<T: Real> GramMatrix<T> {
    pub fn from_complex(n: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        check_len(n, entries.len())?;
        Ok(Self {
            n,
            entries: GramEntries::Complex(entries),
            kernel: None,
            gamma: None,
            point_hash: None,
            real_points: false,
        })
    }

    pub fn from_quaternion(n: usize, entries: Vec<Quaternion<T>>) -> Result<Self> {
        check_len(n, entries.len())?;
        Ok(Self {
            n,
            entries: GramEntries::Quaternion(entries),
            kernel: None,
            gamma: None,
            point_hash: None,
            real_points: false,
        })
    }

    pub fn complex_entry(&self, a: usize, b: usize) -> Option<Complex<T>> {
        match &self.entries {
            GramEntries::Complex(e) => Some(e[a * self.n + b]),
            GramEntries::Quaternion(_) => None,
        }
    }

    pub fn quaternion_entry(&self, a: usize, b: usize) -> Quaternion<T> {
        match &self.entries {
            GramEntries::Complex(e) => Quaternion::from_complex(e[a * self.n + b]),
            GramEntries::Quaternion(e) => e[a * self.n + b],
        }
    }

    /// `max |G[a][b] − conj(G[b][a])|`.
    pub fn hermitian_defect(&self) -> T {
        let mut worst = T::zero();
        for a in 0..self.n {
            for b in 0..self.n {
                let d = self.quaternion_entry(a, b) - self.quaternion_entry(b, a).conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

fn check_len(n: usize, found: usize) -> Result<()> {
    if n * n == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: n * n, found })
    }
}

fn point_type_error<T: Real>(kernel: KernelId, points: &PointSet<T>) -> Error {
    Error::PointType {
        kernel: kernel.name(),
        points: points.kind(),
    }
}

/// `G[a][b] = k(p_a, p_b)`. The upper triangle is evaluated and mirrored
/// with conjugation; diagonal entries are stored with their real part only.
pub fn build_gram<T: Real>(kernel: KernelId, gamma: T, points: &PointSet<T>) -> Result<GramMatrix<T>> {
    crate::error::require_positive("gamma", gamma)?;
    let n = points.len();
    let zero = Complex::new(T::zero(), T::zero());
    let entries = match (kernel, points) {
        (KernelId::RealRbf | KernelId::Polynomial(_) | KernelId::Exponential, PointSet::Real(ps)) => {
            let mut e = vec![zero; n * n];
            for a in 0..n {
                for b in a..n {
                    let v = match kernel {
                        KernelId::RealRbf => rbf_kernel_real(gamma, &ps[a], &ps[b])?,
                        KernelId::Polynomial(m) => utility_kernel(UtilityKernel::Polynomial(m), &ps[a], &ps[b])?,
                        _ => utility_kernel(UtilityKernel::Exponential, &ps[a], &ps[b])?,
                    };
                    e[a * n + b] = Complex::new(v, T::zero());
                    e[b * n + a] = Complex::new(v, T::zero());
                }
            }
            GramEntries::Complex(e)
        }
        (KernelId::ComplexRbf, PointSet::Complex(ps)) => {
            let mut e = vec![zero; n * n];
            for a in 0..n {
                for b in a..n {
                    let v = rbf_kernel_d(gamma, &ps[a], &ps[b])?;
                    e[a * n + b] = v;
                    e[b * n + a] = v.conj();
                }
                e[a * n + a].im = T::zero();
            }
            GramEntries::Complex(e)
        }
        (KernelId::TruncatedRbf(terms), PointSet::Complex(ps)) => {
            let mut e = vec![zero; n * n];
            for a in 0..n {
                for b in a..n {
                    let (za, zb) = (one_dim(kernel, &ps[a])?, one_dim(kernel, &ps[b])?);
                    let v = kernel_sum_truncated_c(gamma, za, zb, terms)?;
                    e[a * n + b] = v;
                    e[b * n + a] = v.conj();
                }
                e[a * n + a].im = T::zero();
            }
            GramEntries::Complex(e)
        }
        (KernelId::QuaternionRbf | KernelId::TruncatedRbf(_), PointSet::Quaternion(ps)) => {
            let mut e = vec![Quaternion::zero(); n * n];
            for a in 0..n {
                for b in a..n {
                    let v = match kernel {
                        KernelId::TruncatedRbf(terms) => kernel_sum_truncated(gamma, ps[a], ps[b], terms)?,
                        _ => rbf_kernel_qslice(gamma, ps[a], ps[b])?,
                    };
                    e[a * n + b] = v;
                    e[b * n + a] = v.conj();
                }
                e[a * n + a] = Quaternion::real(e[a * n + a].q0);
            }
            GramEntries::Quaternion(e)
        }
        _ => return Err(point_type_error(kernel, points)),
    };
    let real_points = match points {
        PointSet::Real(_) => true,
        PointSet::Complex(ps) => ps.iter().flatten().all(|z| z.im == T::zero()),
        PointSet::Quaternion(ps) => ps.iter().all(|q| q.is_real()),
    };
    Ok(GramMatrix {
        n,
        entries,
        kernel: Some(kernel),
        gamma: Some(gamma),
        point_hash: Some(points.fingerprint()),
        real_points,
    })
}

fn one_dim<T: Real>(kernel: KernelId, z: &[Complex<T>]) -> Result<Complex<T>> {
    match z {
        [v] => Ok(*v),
        _ => Err(Error::PointType {
            kernel: kernel.name(),
            points: "multi-dimensional complex",
        }),
    }
}

/// Complex adjoint representation of a row-major `N × N` quaternion matrix.
pub fn quat_matrix_to_complex<T: Real>(n: usize, q: &[Quaternion<T>]) -> Result<DMatrix<Complex<T>>> {
    check_len(n, q.len())?;
    let mut out = DMatrix::from_element(2 * n, 2 * n, Complex::new(T::zero(), T::zero()));
    for r in 0..n {
        for c in 0..n {
            let e = q[r * n + c];
            let a = Complex::new(e.q0, e.q1);
            let b = Complex::new(e.q2, e.q3);
            out[(2 * r, 2 * c)] = a;
            out[(2 * r, 2 * c + 1)] = b;
            out[(2 * r + 1, 2 * c)] = -b.conj();
            out[(2 * r + 1, 2 * c + 1)] = a.conj();
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdReport {
    pub n: usize,
    pub min_eig: f64,
    pub max_eig: f64,
    pub tol: f64,
    pub psd: bool,
    pub hermitian_defect: f64,
    /// `true` when positive semidefiniteness is not a known property of the
    /// kernel on this point set; the result is then reported, not asserted.
    pub informational: bool,
}

/// Smallest eigenvalue test `λ_min ≥ −tol`.
///
/// Eigenvalues are computed in double precision. Quaternionic matrices are
/// mapped through `χ`, whose eigenvalues are those of the quaternionic
/// matrix, each repeated twice. The default tolerance is `N·ε·‖G‖_F`.
pub fn psd_check<T: Real>(g: &GramMatrix<T>, tol: Option<f64>) -> Result<PsdReport> {
    let n = g.n;
    let m: DMatrix<Complex<f64>> = match &g.entries {
        GramEntries::Complex(e) => DMatrix::from_fn(n, n, |r, c| {
            let v = e[r * n + c];
            Complex::new(v.re.to_f64_lossy(), v.im.to_f64_lossy())
        }),
        GramEntries::Quaternion(e) => {
            let e64: Vec<Quaternion<f64>> = e
                .iter()
                .map(|q| Quaternion::from_array(q.to_array().map(|v| v.to_f64_lossy())))
                .collect();
            quat_matrix_to_complex(n, &e64)?
        }
    };
    let scale = m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let defect = g.hermitian_defect().to_f64_lossy();
    let herm_tol = 1e-12 * scale.max(1.0);
    if defect > herm_tol {
        return Err(Error::NotHermitian {
            defect,
            tol: herm_tol,
        });
    }
    let dim = m.nrows();
    let tol = tol.unwrap_or(dim.max(1) as f64 * f64::EPSILON * scale.max(f64::MIN_POSITIVE));
    let (min_eig, max_eig) = if dim == 0 {
        (0.0, 0.0)
    } else {
        let herm = (&m + m.adjoint()) * Complex::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm).eigenvalues;
        (eig.min(), eig.max())
    };
    let informational = match g.kernel {
        Some(KernelId::RealRbf | KernelId::Polynomial(_) | KernelId::Exponential | KernelId::TruncatedRbf(_)) => false,
        Some(KernelId::ComplexRbf | KernelId::QuaternionRbf) => !g.real_points,
        None => true,
    };
    Ok(PsdReport {
        n,
        min_eig,
        max_eig,
        tol,
        psd: min_eig >= -tol,
        hermitian_defect: defect,
        informational,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::rbf_basis_c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = Quaternion<f64>;

    #[test]
    fn single_real_point() {
        let g = build_gram(KernelId::RealRbf, 1.0, &PointSet::Real(vec![vec![0.3, -1.0]])).unwrap();
        assert_eq!(g.complex_entry(0, 0), Some(Complex::new(1.0, 0.0)));
        let r = psd_check(&g, None).unwrap();
        assert!((r.min_eig - 1.0).abs() < 1e-15 && r.psd && !r.informational);
    }

    #[test]
    fn complex_diagonal() {
        let z = Complex::new(0.4, 0.7);
        let g = build_gram(KernelId::ComplexRbf, 1.3, &PointSet::Complex(vec![vec![z], vec![z]])).unwrap();
        let want = (4.0 * 0.49 / 1.69f64).exp();
        for a in 0..2 {
            for b in 0..2 {
                assert!((g.complex_entry(a, b).unwrap().re - want).abs() < 1e-13 * want);
            }
        }
        assert!(psd_check(&g, None).unwrap().informational);
    }

    #[test]
    fn real_gram_matches_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let xs: Vec<f64> = (0..8).map(|_| rng.random_range(-2.0..2.0)).collect();
        let g = build_gram(KernelId::RealRbf, 1.0, &PointSet::Real(xs.iter().map(|&x| vec![x]).collect())).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let want = (-(xs[a] - xs[b]).powi(2)).exp();
                assert!((g.complex_entry(a, b).unwrap().re - want).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn point_type_mismatch() {
        let err = build_gram(KernelId::QuaternionRbf, 1.0, &PointSet::Real(vec![vec![0.0]])).unwrap_err();
        assert!(matches!(err, Error::PointType { .. }));
        let err = build_gram(
            KernelId::TruncatedRbf(4),
            1.0,
            &PointSet::Complex(vec![vec![Complex::new(0.0, 0.0); 2]]),
        )
        .unwrap_err();
        assert!(matches!(err, Error::PointType { .. }));
    }

    #[test]
    fn chi_examples_and_homomorphism() {
        let one = quat_matrix_to_complex(1, &[Q::one()]).unwrap();
        assert_eq!(one, DMatrix::identity(2, 2));
        let j = quat_matrix_to_complex(1, &[Q::j()]).unwrap();
        let c = |re| Complex::new(re, 0.0);
        assert_eq!(j, DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(0.0)]));

        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut rq = || Q::new(rng.random(), rng.random(), rng.random(), rng.random());
        let p: Vec<Q> = (0..4).map(|_| rq()).collect();
        let q: Vec<Q> = (0..4).map(|_| rq()).collect();
        let mut pq = vec![Q::zero(); 4];
        for r in 0..2 {
            for s in 0..2 {
                pq[r * 2 + s] = p[r * 2] * q[s] + p[r * 2 + 1] * q[2 + s];
            }
        }
        let lhs = quat_matrix_to_complex(2, &pq).unwrap();
        let rhs = quat_matrix_to_complex(2, &p).unwrap() * quat_matrix_to_complex(2, &q).unwrap();
        assert!((lhs - rhs).iter().all(|v| v.norm() < 1e-13));
    }

    #[test]
    fn truncated_feature_gram_is_factorized() {
        let zs = [Complex::new(0.3, 0.2), Complex::new(-0.5, 0.1), Complex::new(0.8, -0.4)];
        let (gamma, terms) = (1.1, 10);
        let g = build_gram(
            KernelId::TruncatedRbf(terms),
            gamma,
            &PointSet::Complex(zs.iter().map(|&z| vec![z]).collect()),
        )
        .unwrap();
        let v = DMatrix::from_fn(3, terms + 1, |a, n| rbf_basis_c(gamma, n, zs[a]));
        let vvh = &v * v.adjoint();
        for a in 0..3 {
            for b in 0..3 {
                assert!((g.complex_entry(a, b).unwrap() - vvh[(a, b)]).norm() < 1e-13);
            }
        }
        let r = psd_check(&g, None).unwrap();
        assert!(r.psd && !r.informational, "{r:?}");
    }

    #[test]
    fn rejects_non_hermitian() {
        let c = |re, im| Complex::new(re, im);
        let g = GramMatrix::from_complex(2, vec![c(1.0, 0.0), c(0.5, 0.0), c(0.2, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(psd_check(&g, None), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn quaternion_gram_via_chi() {
        let ps = vec![Q::new(0.1, 0.2, 0.0, 0.3), Q::new(-0.4, 0.0, 0.5, 0.1), Q::real(0.7)];
        let g = build_gram(KernelId::QuaternionRbf, 1.0, &PointSet::Quaternion(ps)).unwrap();
        assert!(g.hermitian_defect() == 0.0);
        let r = psd_check(&g, None).unwrap();
        assert!(r.informational);
        assert!(r.min_eig.is_finite());
    }
}

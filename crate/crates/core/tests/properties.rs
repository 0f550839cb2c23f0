use num_complex::Complex;
use proptest::prelude::*;

use rbf_fock::bases::{rbf_basis_c, rbf_basis_d};
use rbf_fock::gram::{build_gram, psd_check, quat_matrix_to_complex, KernelId, PointSet};
use rbf_fock::hypercomplex::quat_intrinsic_exp_sq;
use rbf_fock::kernels::{rbf_kernel_c, rbf_kernel_d, rbf_kernel_qslice, Normalization};
use rbf_fock::series::{beta_coeffs, sequential_norm};
use rbf_fock::spaces::{SliceFunction, SliceSpace};
use rbf_fock::transforms::{sb_transform, L2Function, RbfSbTransform};
use rbf_fock::{
    gauss_hermite, integrate_slice, slice_decompose, star_exp, ImaginaryUnit, MultiIndex, QPowerSeries, Quaternion,
    Sign, SlicePoint,
};

type Q = Quaternion<f64>;
type C = Complex<f64>;

fn quat(r: f64) -> impl Strategy<Value = Q> {
    prop::array::uniform4(-r..r).prop_map(Q::from_array)
}

fn complex(r: f64) -> impl Strategy<Value = C> {
    (-r..r, -r..r).prop_map(|(a, b)| C::new(a, b))
}

fn unit() -> impl Strategy<Value = ImaginaryUnit<f64>> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("non-degenerate", |v| v.iter().map(|a| a * a).sum::<f64>() > 0.01)
        .prop_map(|v| ImaginaryUnit::from_vector(v[0], v[1], v[2]).unwrap())
}

fn gamma() -> impl Strategy<Value = f64> {
    prop::sample::select(vec![0.5, 1.0, 2.0])
}

fn series(max_degree: usize) -> impl Strategy<Value = QPowerSeries<f64>> {
    prop::collection::vec(quat(1.0), 1..=max_degree + 1).prop_map(|c| QPowerSeries::new(c).unwrap())
}

proptest! {
    #[test]
    fn quaternion_norm_is_multiplicative(p in quat(10.0), q in quat(10.0)) {
        let lhs = (p * q).norm();
        let rhs = p.norm() * q.norm();
        prop_assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn decompose_inverts_embedding(x in -5.0..5.0f64, y in 0.01..5.0f64, u in unit()) {
        let q = SlicePoint::new(x, y, u).to_quaternion();
        let d = slice_decompose(q);
        prop_assert!(!d.degenerate);
        prop_assert!(d.point.to_quaternion().max_abs_diff(q) <= 4.0 * f64::EPSILON * q.norm());
    }

    #[test]
    fn star_exp_on_a_slice_is_complex_exp(z in complex(1.5), w in complex(1.5), u in unit(), nu in 0.5..4.0f64) {
        let got = star_exp(nu, u.embed(z), u.embed(w), f64::EPSILON).unwrap();
        let want = u.embed((z * w.conj() * nu).exp());
        // scale of the alternating term sum
        let size = (nu * z.norm() * w.norm()).exp();
        prop_assert!(got.max_abs_diff(want) <= 1e-12 * size);
    }

    #[test]
    fn intrinsic_exponential_commutes_on_slice(z in complex(2.0), w in complex(2.0), u in unit(), g in gamma()) {
        let e = quat_intrinsic_exp_sq(g, u.embed(z), Sign::Minus);
        let p = u.embed(w);
        prop_assert!((e * p).max_abs_diff(p * e) <= 1e-13 * (1.0 + e.norm() * p.norm()));
    }

    #[test]
    fn beta_matches_cauchy_product(a in series(24), g in gamma()) {
        let k = a.degree();
        let up = QPowerSeries::exp_sq(g, Sign::Plus, k).unwrap();
        let want = up.cauchy_mul(&a).unwrap();
        let got = beta_coeffs(g, a.coeffs(), k).unwrap();
        for (n, b) in got.iter().enumerate() {
            let scale: f64 = (0..=n).step_by(2).map(|i| up.coeff(i).norm() * a.coeff(n - i).norm()).sum();
            prop_assert!(b.max_abs_diff(want.coeff(n)) <= 1e-13 * scale.max(1.0));
        }
    }

    #[test]
    fn sequential_norm_is_monotone(a in series(20), g in gamma()) {
        let mut last = 0.0;
        for k in 0..=a.degree() {
            let s = sequential_norm(g, a.coeffs(), k).unwrap();
            prop_assert!(s >= last);
            last = s;
        }
    }

    #[test]
    fn basis_d_is_the_product_of_one_dimensional_factors(
        g in gamma(),
        n in prop::collection::vec(0usize..8, 1..=3),
        z in prop::collection::vec(complex(1.5), 3),
    ) {
        let z = &z[..n.len()];
        let got = rbf_basis_d(g, &MultiIndex(n.clone()), z).unwrap();
        let want = n.iter().zip(z).fold(C::new(1.0, 0.0), |acc, (&k, &w)| acc * rbf_basis_c(g, k, w));
        prop_assert_eq!(got, want);
    }

    #[test]
    fn d_kernel_is_hermitian(g in gamma(), z in prop::collection::vec(complex(1.0), 3), w in prop::collection::vec(complex(1.0), 3)) {
        let a = rbf_kernel_d(g, &z, &w).unwrap();
        let b = rbf_kernel_d(g, &w, &z).unwrap().conj();
        prop_assert!((a - b).norm() <= 1e-14 * (1.0 + a.norm()));
    }

    #[test]
    fn quaternion_kernel_reduces_on_a_slice(g in gamma(), z in complex(1.0), w in complex(1.0), u in unit()) {
        // points of unit size in the natural variable z/γ
        let (z, w) = (z * g, w * g);
        let got = rbf_kernel_qslice(g, u.embed(z), u.embed(w)).unwrap();
        let want = u.embed(rbf_kernel_c(g, z, w));
        prop_assert!(got.max_abs_diff(want) <= 1e-12 * (1.0 + want.norm()), "{:e}", got.max_abs_diff(want) / (1.0 + want.norm()));
    }

    #[test]
    fn real_gaussian_gram_is_psd(
        g in gamma(),
        pts in prop::collection::vec(prop::collection::vec(-2.0..2.0f64, 3), 1..24),
    ) {
        let n = pts.len() as f64;
        let gram = build_gram(KernelId::RealRbf, g, &PointSet::Real(pts)).unwrap();
        let r = psd_check(&gram, None).unwrap();
        prop_assert!(r.min_eig >= -1e-10 * n);
    }

    #[test]
    fn chi_is_hermitian_exactly_when_the_matrix_is(entries in prop::collection::vec(quat(1.0), 9), make_hermitian in any::<bool>()) {
        let n = 3;
        let mut m = entries;
        if make_hermitian {
            for a in 0..n {
                m[a * n + a] = Q::real(m[a * n + a].q0);
                for b in 0..a {
                    m[a * n + b] = m[b * n + a].conj();
                }
            }
        }
        let c = quat_matrix_to_complex(n, &m).unwrap();
        let herm_c = (c.adjoint() - &c).iter().all(|v| v.norm() == 0.0);
        let herm_q = (0..n).all(|a| (0..n).all(|b| m[a * n + b] == m[b * n + a].conj()));
        prop_assert_eq!(herm_c, herm_q);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn slice_integrals_of_radial_monomials_do_not_depend_on_the_unit(m in 0u32..10, n in 0u32..10, nu in 0.5..4.0f64) {
        let rule = gauss_hermite(40, nu).unwrap();
        let f = |p: SlicePoint<f64>| {
            let q = p.to_quaternion();
            q.conj().powi(m) * q.powi(n)
        };
        let a = integrate_slice(&rule, f, ImaginaryUnit::i());
        let b = integrate_slice(&rule, f, ImaginaryUnit::from_vector(1.0, 1.0, 1.0).unwrap());
        let size = integrate_slice(&rule, |p: SlicePoint<f64>| Q::real(p.to_quaternion().norm().powi((m + n) as i32)), ImaginaryUnit::i()).q0;
        // the value is real, so it must not depend on which slice carried it
        prop_assert!((a.q0 - b.q0).abs() <= 1e-12 * size);
        prop_assert!(a.imag_norm() <= 1e-12 * size);
    }

    #[test]
    fn kernel_sections_reproduce_the_kernel(g in gamma(), z in complex(0.5), w in complex(0.5), u in unit()) {
        let space = SliceSpace::rbf(g, u, 80).unwrap();
        let (q, p) = (u.embed(z * g), u.embed(w * g));
        let kq = space.kernel_section(q, 40).unwrap();
        let kp = space.kernel_section(p, 40).unwrap();
        let ip = space.inner_product(&kp, &kq).unwrap();
        let k = rbf_kernel_qslice(g, q, p).unwrap();
        prop_assert!(ip.max_abs_diff(k) <= 1e-8 * (1.0 + k.norm()), "{:?} vs {:?}", ip, k);
    }

    #[test]
    fn rbf_transform_is_gaussian_times_sb_transform(
        g in gamma(),
        coeffs in prop::collection::vec(quat(1.0), 1..8),
        q in quat(1.0),
    ) {
        let nu = 2.0 / (g * g);
        let phi = L2Function::hermite(nu, coeffs).unwrap();
        let t = RbfSbTransform::new(g, Normalization::Unitary).unwrap();
        let q = q.scale(g);
        let got = t.apply_quadrature(&phi, q).unwrap();
        let want = quat_intrinsic_exp_sq(g, q, Sign::Minus) * sb_transform(nu, &phi, q, Normalization::Unitary).unwrap();
        prop_assert!(got.max_abs_diff(want) <= 1e-10 * (1.0 + want.norm()));
    }

    #[test]
    fn doubling_the_order_keeps_norms(g in gamma(), f in series(12), u in unit()) {
        let f = SliceFunction::GaussianSeries { gamma: g, fock: f };
        let a = SliceSpace::rbf(g, u, 40).unwrap().norm(&f).unwrap();
        let b = SliceSpace::rbf(g, u, 80).unwrap().norm(&f).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * b);
    }
}

#[test]
fn moments_are_exact_up_to_degree_2m_minus_1() {
    use statrs::function::gamma::ln_gamma;
    for nu in [0.5f64, 2.0] {
        for m in 1..=64usize {
            let rule = gauss_hermite(m, nu).unwrap();
            for k in 0..m {
                // ∫ t^{2k} e^{-νt²} dt = Γ(k + 1/2) / ν^{k + 1/2}
                let want = (ln_gamma(k as f64 + 0.5) - (k as f64 + 0.5) * nu.ln()).exp();
                let got = rule.integrate(|t| t.powi(2 * k as i32));
                assert!((got - want).abs() <= 1e-12 * want, "nu={nu} m={m} k={k}: {got} vs {want}");
                let odd = rule.integrate(|t| t.powi(2 * k as i32 + 1));
                assert!(odd.abs() <= 1e-12 * want.max(1.0));
            }
        }
    }
}

//! The acceptance suite: twelve numerical checks of the identities the
//! library implements, each against an independent oracle.
//!
//! Every check is deterministic for a given [`VerifyConfig`]; randomness
//! comes from a ChaCha stream seeded by the configured seed and the check
//! number.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bases::{hermite_psi, rbf_basis_q};
use crate::error::Result;
use crate::gram::{build_gram, psd_check, quat_matrix_to_complex, KernelId, PointSet};
use crate::hypercomplex::{quat_intrinsic_exp_sq, ImaginaryUnit, Quaternion, Sign};
use crate::kernels::{fock_kernel_d, kernel_sum_truncated, rbf_kernel_c, rbf_kernel_d, rbf_kernel_qslice, Normalization};
use crate::quadrature::{gauss_hermite, DEFAULT_ORDER};
use crate::scalar::{factorial, Compensated};
use crate::series::{beta_coeffs, sequential_norm, CPowerSeries, MultiIndex, QPowerSeries};
use crate::spaces::{rbf_basis_handles, rbf_basis_slice_handle, MultiFunction, MultiSpace, SliceFunction, SliceSpace};
use crate::transforms::{rbf_sb_kernel, sb_kernel, L2Function, L2FunctionD, RbfSbTransform, RbfSbTransformD};

type Q = Quaternion<f64>;
type C = Complex<f64>;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone, Serialize)]
pub struct VerifyConfig {
    pub gamma: f64,
    pub quad_order: usize,
    pub normalization: Normalization,
    pub seed: u64,
    /// Replaces every pinned bound when set.
    pub tolerance: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            gamma: 1.0,
            quad_order: DEFAULT_ORDER,
            normalization: Normalization::Unitary,
            seed: DEFAULT_SEED,
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub id: usize,
    pub name: String,
    pub paper_anchor: String,
    pub params: Value,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
    pub details: Vec<SubCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn summary_line(&self) -> String {
        format!(
            "[{}] C{:<2} {:<34} value={:.3e} bound={:.1e}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.value,
            self.bound
        )
    }
}

struct Builder<'a> {
    cfg: &'a VerifyConfig,
    subs: Vec<SubCheck>,
}

impl<'a> Builder<'a> {
    fn new(cfg: &'a VerifyConfig) -> Self {
        Self { cfg, subs: Vec::new() }
    }

    /// Records `value ≤ bound` (the bound is replaced by the override).
    fn at_most(&mut self, name: &str, value: f64, bound: f64) {
        let bound = self.cfg.tolerance.unwrap_or(bound);
        self.subs.push(SubCheck {
            name: name.into(),
            value,
            bound,
            pass: value <= bound,
        });
    }

    /// Records `value ≥ -bound`.
    fn at_least_neg(&mut self, name: &str, value: f64, bound: f64) {
        let bound = self.cfg.tolerance.unwrap_or(bound);
        self.subs.push(SubCheck {
            name: name.into(),
            value,
            bound: -bound,
            pass: value >= -bound,
        });
    }

    fn finish(self, id: usize, name: &str, anchor: &str, params: Value) -> CheckReport {
        let first = self.subs.first().cloned().unwrap_or(SubCheck {
            name: String::new(),
            value: f64::NAN,
            bound: f64::NAN,
            pass: false,
        });
        // headline: the sub-check with the largest value/bound ratio
        let headline = self
            .subs
            .iter()
            .filter(|s| s.bound > 0.0)
            .max_by(|a, b| (a.value / a.bound).total_cmp(&(b.value / b.bound)))
            .cloned()
            .unwrap_or(first);
        CheckReport {
            id,
            name: name.into(),
            paper_anchor: anchor.into(),
            params,
            value: headline.value,
            bound: headline.bound,
            pass: !self.subs.is_empty() && self.subs.iter().all(|s| s.pass && s.value.is_finite()),
            details: self.subs,
            error: None,
        }
    }
}

fn rng(cfg: &VerifyConfig, id: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ (id as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn rand_q(rng: &mut ChaCha8Rng, scale: f64) -> Q {
    Q::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

fn rand_c(rng: &mut ChaCha8Rng, scale: f64) -> C {
    C::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))
}

fn rand_unit(rng: &mut ChaCha8Rng) -> ImaginaryUnit<f64> {
    loop {
        let v: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 0.1 {
            if let Ok(u) = ImaginaryUnit::from_vector(v[0], v[1], v[2]) {
                return u;
            }
        }
    }
}

fn rand_series(rng: &mut ChaCha8Rng, max_degree: usize) -> Result<QPowerSeries<f64>> {
    let degree = rng.random_range(0..=max_degree);
    QPowerSeries::new((0..=degree).map(|_| rand_q(rng, 1.0)).collect())
}

fn rand_cseries(rng: &mut ChaCha8Rng, dim: usize, max_degree: usize) -> Result<CPowerSeries<f64>> {
    let idx = MultiIndex::graded(dim, max_degree);
    let mut terms = Vec::new();
    for n in idx {
        if rng.random_bool(0.6) {
            terms.push((n, rand_c(rng, 1.0)));
        }
    }
    CPowerSeries::from_terms(dim, terms)
}

type CheckFn = fn(&VerifyConfig) -> Result<CheckReport>;

/// Runs all twelve checks; a check that errors is reported as failed.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CheckReport> {
    let checks: [(usize, &str, &str, CheckFn); 12] = [
        (1, "fock-monomial-orthogonality", "monomial orthogonality in the slice Fock space", check_fock_orthogonality),
        (2, "rbf-basis-orthonormality", "orthonormal basis of the RBF spaces", check_rbf_orthonormality),
        (3, "m-operator-isometry", "isometry of the multiplication operator", check_isometry),
        (4, "reproducing-property", "reproducing kernel property", check_reproducing),
        (5, "kernel-sum-identity", "kernel as a sum over the orthonormal basis", check_kernel_sum),
        (6, "diagonal-and-pointwise-bound", "kernel diagonal and pointwise evaluation bound", check_diagonal_bound),
        (7, "sequential-characterization", "sequential characterization of the RBF norm", check_sequential),
        (8, "product-fock-factorization", "product and Fock-kernel factorizations", check_factorizations),
        (9, "segal-bargmann-unitarity", "isometry of the Segal-Bargmann type transforms", check_unitarity),
        (10, "kernel-match", "RBF Segal-Bargmann kernel closed form", check_kernel_match),
        (11, "slice-independence", "independence of the imaginary unit", check_slice_independence),
        (12, "psd-certification", "positive definiteness and adjoint representation", check_psd),
    ];
    checks
        .iter()
        .map(|&(id, name, anchor, f)| {
            f(cfg).unwrap_or_else(|e| CheckReport {
                id,
                name: name.into(),
                paper_anchor: anchor.into(),
                params: Value::Null,
                value: f64::NAN,
                bound: f64::NAN,
                pass: false,
                details: Vec::new(),
                error: Some(e.to_string()),
            })
        })
        .collect()
}

pub fn check_fock_orthogonality(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let unit = ImaginaryUnit::from_vector(1.0, 1.0, 1.0)?;
    let monomials: Vec<_> = (0..=12)
        .map(|n| QPowerSeries::monomial(n, Q::one()).map(SliceFunction::Series))
        .collect::<Result<_>>()?;
    for nu in [0.5, 2.0, 8.0] {
        let space = SliceSpace::fock(nu, unit, cfg.quad_order)?;
        let g = space.gram(&monomials)?;
        let mut worst = 0.0f64;
        for (m, row) in g.iter().enumerate() {
            for (n, v) in row.iter().enumerate() {
                let want = if m == n { factorial::<f64>(m) / nu.powi(m as i32) } else { 0.0 };
                let scale = (factorial::<f64>(m) * factorial::<f64>(n) / nu.powi((m + n) as i32)).sqrt();
                worst = worst.max((*v - Q::real(want)).norm() / scale);
            }
        }
        b.at_most(&format!("nu={nu}"), worst, 1e-10);
    }
    Ok(b.finish(
        1,
        "fock-monomial-orthogonality",
        "monomial orthogonality in the slice Fock space",
        json!({"nu": [0.5, 2.0, 8.0], "max_degree": 12, "quad_order": cfg.quad_order}),
    ))
}

fn identity_defect_q(g: &[Vec<Q>], diag: f64) -> f64 {
    let mut worst = 0.0f64;
    for (m, row) in g.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let want = if m == n { Q::real(diag) } else { Q::zero() };
            worst = worst.max((*v - want).norm());
        }
    }
    worst
}

fn identity_defect_c(g: &[Vec<C>], diag: f64) -> f64 {
    let mut worst = 0.0f64;
    for (m, row) in g.iter().enumerate() {
        for (n, v) in row.iter().enumerate() {
            let want = if m == n { diag } else { 0.0 };
            worst = worst.max((*v - C::new(want, 0.0)).norm());
        }
    }
    worst
}

const MULTI_ORDER_D2: usize = 16;

pub fn check_rbf_orthonormality(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let slices = [ImaginaryUnit::i(), ImaginaryUnit::from_vector(1.0, -2.0, 2.0)?];
    let idx1: Vec<_> = (0..=12).map(|n| MultiIndex(vec![n])).collect();
    let idx2: Vec<_> = MultiIndex::graded(2, 4).into_iter().take(13).collect();
    for gamma in [0.5, 1.0, 2.0] {
        let fs: Vec<_> = (0..=12).map(|n| rbf_basis_slice_handle(gamma, n)).collect();
        for (s, unit) in slices.iter().enumerate() {
            let g = SliceSpace::rbf(gamma, *unit, cfg.quad_order)?.gram(&fs)?;
            b.at_most(&format!("quaternion gamma={gamma} slice={s}"), identity_defect_q(&g, 1.0), 1e-8);
        }
        let g = MultiSpace::rbf(gamma, 1, cfg.quad_order)?.gram(&rbf_basis_handles(gamma, &idx1))?;
        b.at_most(&format!("complex d=1 gamma={gamma}"), identity_defect_c(&g, 1.0), 1e-8);
        let g = MultiSpace::rbf(gamma, 2, MULTI_ORDER_D2)?.gram(&rbf_basis_handles(gamma, &idx2))?;
        b.at_most(&format!("complex d=2 gamma={gamma}"), identity_defect_c(&g, 1.0), 1e-8);
    }
    Ok(b.finish(
        2,
        "rbf-basis-orthonormality",
        "orthonormal basis of the RBF spaces",
        json!({"gamma": [0.5, 1.0, 2.0], "size": 13, "quad_order": cfg.quad_order, "quad_order_d2": MULTI_ORDER_D2}),
    ))
}

/// `‖f‖²` against the RBF weight `e^{-4y²/γ²}`, integrating `|f|²` pointwise.
/// The rule carries `e^{-ν(x²+y²)}`; the integrand is `|f|² e^{ν(x² − y²)}`.
fn rbf_norm_direct(gamma: f64, f: &SliceFunction<f64>, unit: ImaginaryUnit<f64>, order: usize) -> Result<f64> {
    let nu = 2.0 / (gamma * gamma);
    let rule = gauss_hermite(order, nu)?;
    let mut acc = Compensated::new();
    for (&x, &wx) in rule.nodes().iter().zip(rule.weights()) {
        for (&y, &wy) in rule.nodes().iter().zip(rule.weights()) {
            let q = unit.embed(C::new(x, y));
            let weight_ratio = (nu * (x * x - y * y)).exp();
            acc.add(wx * wy * f.eval(q).norm_sqr() * weight_ratio);
        }
    }
    Ok(acc.value() * nu / std::f64::consts::PI)
}

pub fn check_isometry(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 3);
    let gamma = cfg.gamma;
    let nu = 2.0 / (gamma * gamma);
    let unit = rand_unit(&mut r);
    let rbf = SliceSpace::rbf(gamma, unit, cfg.quad_order)?;
    let fock = SliceSpace::fock(nu, unit, cfg.quad_order)?;
    let (mut lib_vs_fock, mut direct, mut analytic) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let g = rand_series(&mut r, 24)?;
        let f = SliceFunction::GaussianSeries { gamma, fock: g.clone() };
        let rbf_norm = rbf.inner_product(&f, &f)?.q0;
        let image = SliceSpace::m_operator(gamma, Sign::Plus, &f, g.degree())?;
        let fock_norm = fock.inner_product(&image, &image)?.q0;
        let oracle = rbf_norm_direct(gamma, &f, unit, cfg.quad_order)?;
        let exact: f64 = g
            .coeffs()
            .iter()
            .enumerate()
            .map(|(n, c)| factorial::<f64>(n) / nu.powi(n as i32) * c.norm_sqr())
            .sum();
        lib_vs_fock = lib_vs_fock.max((rbf_norm - fock_norm).abs() / fock_norm);
        direct = direct.max((rbf_norm - oracle).abs() / oracle);
        analytic = analytic.max((fock_norm - exact).abs() / exact);
    }
    b.at_most("rbf norm vs fock norm of image", lib_vs_fock, 1e-10);
    b.at_most("rbf norm vs direct rbf-weight integral", direct, 1e-10);
    b.at_most("fock norm vs coefficient formula", analytic, 1e-10);
    Ok(b.finish(
        3,
        "m-operator-isometry",
        "isometry of the multiplication operator",
        json!({"gamma": gamma, "series": 100, "max_degree": 24, "quad_order": cfg.quad_order}),
    ))
}

const MULTI_ORDER_REPRO: usize = 20;

pub fn check_reproducing(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 4);
    let gamma = cfg.gamma;
    let nu = 2.0 / (gamma * gamma);
    // evaluation points of unit size in the natural variable √ν·w
    let wscale = 0.5 * (2.0 / nu).sqrt();

    let unit = rand_unit(&mut r);
    let fock = SliceSpace::fock(nu, unit, cfg.quad_order)?;
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let f = SliceFunction::Series(rand_series(&mut r, 8)?);
        let w = rand_q(&mut r, wscale);
        let got = fock.reproduce(&f, w)?;
        let want = f.eval(w);
        worst = worst.max((got - want).norm() / (1.0 + want.norm()));
    }
    b.at_most("slice fock", worst, 1e-7);

    let rbf = SliceSpace::rbf(gamma, unit, cfg.quad_order)?;
    let mut worst = 0.0f64;
    for k in 0..20 {
        let g = rand_series(&mut r, 8)?;
        let f = if k % 2 == 0 {
            SliceFunction::GaussianSeries { gamma, fock: g }
        } else {
            // Σ e_n^γ(q) c_n through the basis functions themselves
            let coeffs = g.coeffs().to_vec();
            let degree = coeffs.len() - 1;
            SliceFunction::handle(
                move |q| {
                    coeffs
                        .iter()
                        .enumerate()
                        .fold(Q::zero(), |acc, (n, &c)| acc + rbf_basis_q(gamma, n, q) * c)
                },
                Some(degree),
            )
        };
        let w = rand_q(&mut r, wscale);
        let got = rbf.reproduce(&f, w)?;
        let want = f.eval(w);
        worst = worst.max((got - want).norm() / (1.0 + want.norm()));
    }
    b.at_most("slice rbf", worst, 1e-7);

    for dim in [1usize, 2] {
        let order = if dim == 1 { cfg.quad_order } else { MULTI_ORDER_REPRO };
        let fock = MultiSpace::fock(nu, dim, order)?;
        let rbf = MultiSpace::rbf(gamma, dim, order)?;
        let (mut wf, mut wr) = (0.0f64, 0.0f64);
        for _ in 0..20 {
            let w: Vec<C> = (0..dim).map(|_| rand_c(&mut r, wscale)).collect();
            let f = MultiFunction::Series(rand_cseries(&mut r, dim, 6)?);
            let got = fock.reproduce(&f, &w)?;
            let want = f.eval(&w)?;
            wf = wf.max((got - want).norm() / (1.0 + want.norm()));

            let f = MultiFunction::GaussianSeries {
                gamma,
                fock: rand_cseries(&mut r, dim, 6)?,
            };
            let got = rbf.reproduce(&f, &w)?;
            let want = f.eval(&w)?;
            wr = wr.max((got - want).norm() / (1.0 + want.norm()));
        }
        b.at_most(&format!("complex fock d={dim}"), wf, 1e-7);
        b.at_most(&format!("complex rbf d={dim}"), wr, 1e-7);
    }
    Ok(b.finish(
        4,
        "reproducing-property",
        "reproducing kernel property",
        json!({"gamma": gamma, "pairs_per_space": 20, "quad_order": cfg.quad_order, "quad_order_d2": MULTI_ORDER_REPRO}),
    ))
}

pub fn check_kernel_sum(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 5);
    let (gamma, n_terms) = (1.0, 40usize);
    let nu = 2.0 / (gamma * gamma);
    let (mut worst, mut worst_excess) = (0.0f64, f64::NEG_INFINITY);
    for _ in 0..200 {
        let q = in_ball(&mut r, 1.5);
        let p = in_ball(&mut r, 1.5);
        let s = kernel_sum_truncated(gamma, q, p, n_terms)?;
        let k = rbf_kernel_qslice(gamma, q, p)?;
        let err = (s - k).norm();
        let outer = quat_intrinsic_exp_sq(gamma, q, Sign::Minus).norm()
            * quat_intrinsic_exp_sq(gamma, p.conj(), Sign::Minus).norm();
        let x = nu * q.norm() * p.norm();
        // Σ_{n>N} xⁿ/n! and Σ_{n≤N} xⁿ/n!
        let (mut term, mut head, mut tail) = (1.0f64, 0.0f64, 0.0f64);
        for n in 0..=(n_terms + 200) {
            if n > 0 {
                term *= x / n as f64;
            }
            if n <= n_terms {
                head += term;
            } else {
                tail += term;
            }
        }
        let allowance = 64.0 * f64::EPSILON * outer * head;
        worst = worst.max(err);
        worst_excess = worst_excess.max(err - (outer * tail + allowance));
    }
    b.at_most("absolute error at N=40", worst, 1e-10);
    b.at_most("error minus analytic tail bound", worst_excess.max(0.0), 0.0);
    Ok(b.finish(
        5,
        "kernel-sum-identity",
        "kernel as a sum over the orthonormal basis",
        json!({"gamma": gamma, "terms": n_terms, "radius": 1.5, "samples": 200}),
    ))
}

fn in_ball(r: &mut ChaCha8Rng, radius: f64) -> Q {
    loop {
        let q = rand_q(r, radius);
        if q.norm() <= radius {
            return q;
        }
    }
}

pub fn check_diagonal_bound(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 6);
    let gamma = cfg.gamma;
    let unit = rand_unit(&mut r);
    let grid: Vec<Q> = (0..=20)
        .flat_map(|a| (0..=20).map(move |c| (-2.0 + 0.2 * a as f64, -2.0 + 0.2 * c as f64)))
        .map(|(x, y)| unit.embed(C::new(x, y)))
        .collect();

    let mut diag = 0.0f64;
    for &q in &grid {
        let y = q.imag_norm();
        let want = (4.0 * y * y / (gamma * gamma)).exp();
        let k = rbf_kernel_qslice(gamma, q, q)?;
        diag = diag.max((k - Q::real(want)).norm() / want);
    }
    b.at_most("K(q,q) vs exp(4y^2/gamma^2), relative", diag, 1e-12);

    let space = SliceSpace::rbf(gamma, unit, cfg.quad_order)?;
    let mut ratio = 0.0f64;
    let mut tight = 0.0f64;
    for k in 0..10 {
        let p = grid[r.random_range(0..grid.len())];
        let section = space.kernel_section(p, 64)?;
        let rep = space.pointwise_bound_check(&section, &grid, 1e-9)?;
        ratio = ratio.max(rep.max_ratio);
        if k < 5 {
            // ratio at q = p is attained
            let at_p = space.pointwise_bound_check(&section, &[p], 1e-9)?;
            tight = tight.max((at_p.max_ratio - 1.0).abs());
        }
    }
    for _ in 0..10 {
        let f = SliceFunction::GaussianSeries {
            gamma,
            fock: QPowerSeries::new((0..=6).map(|_| rand_q(&mut r, 1.0)).collect())?,
        };
        ratio = ratio.max(space.pointwise_bound_check(&f, &grid, 1e-9)?.max_ratio);
    }
    let e0 = rbf_basis_slice_handle(gamma, 0);
    let reals: Vec<Q> = (0..=20).map(|a| Q::real(-2.0 + 0.2 * a as f64)).collect();
    ratio = ratio.max(space.pointwise_bound_check(&e0, &reals, 1e-9)?.max_ratio);
    b.at_most("max |f(q)| / (exp(2y^2/gamma^2) ||f||) - 1", (ratio - 1.0).max(0.0), 1e-9);
    b.at_most("kernel section attains the bound at q = p", tight, 1e-9);
    Ok(b.finish(
        6,
        "diagonal-and-pointwise-bound",
        "kernel diagonal and pointwise evaluation bound",
        json!({"gamma": gamma, "grid": "|x|,|y| <= 2 step 0.2", "quad_order": cfg.quad_order}),
    ))
}

pub fn check_sequential(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 7);
    let gamma = cfg.gamma;
    let k_max = 24usize;
    let unit = rand_unit(&mut r);
    let space = SliceSpace::rbf(gamma, unit, cfg.quad_order)?;
    let down = QPowerSeries::exp_sq(gamma, Sign::Minus, k_max)?;
    let (mut norm_err, mut beta_err) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let g = rand_series(&mut r, 12)?;
        // Taylor coefficients of e^{-q²/γ²} g up to degree K
        let a = down.cauchy_mul(&g)?.truncate(k_max);
        let seq = sequential_norm(gamma, a.coeffs(), k_max)?;
        let gc = g.clone();
        let f = SliceFunction::handle(
            move |q| quat_intrinsic_exp_sq(gamma, q, Sign::Minus) * gc.eval(q),
            Some(g.degree()),
        );
        let quad = space.inner_product(&f, &f)?.q0;
        norm_err = norm_err.max((seq - quad).abs() / quad);

        let beta = beta_coeffs(gamma, a.coeffs(), k_max)?;
        for (k, bk) in beta.iter().enumerate() {
            // e^{q²/γ²} has coefficient 1/(γ^{2j} j!) at q^{2j}
            let mut brute = Q::zero();
            let mut size = 0.0;
            for i in 0..=k {
                if i % 2 == 1 {
                    continue;
                }
                let j = i / 2;
                let s = 1.0 / (gamma.powi(2 * j as i32) * factorial::<f64>(j));
                let ak = a.coeff(k - i);
                brute += ak.scale(s);
                size += s * ak.norm();
            }
            beta_err = beta_err.max((*bk - brute).norm() / size.max(f64::MIN_POSITIVE));
        }
    }
    b.at_most("sequential norm vs quadrature norm, relative", norm_err, 1e-6);
    b.at_most("beta_k vs direct Cauchy product", beta_err, 1e-13);
    Ok(b.finish(
        7,
        "sequential-characterization",
        "sequential characterization of the RBF norm",
        json!({"gamma": gamma, "series": 50, "max_degree": 12, "K": k_max, "quad_order": cfg.quad_order}),
    ))
}

pub fn check_factorizations(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 8);
    let gamma = cfg.gamma;
    let nu = 2.0 / (gamma * gamma);
    let (mut prod, mut fock, mut real) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let z: Vec<C> = (0..3).map(|_| rand_c(&mut r, 0.5 * gamma)).collect();
        let w: Vec<C> = (0..3).map(|_| rand_c(&mut r, 0.5 * gamma)).collect();
        let k = rbf_kernel_d(gamma, &z, &w)?;
        let p = z.iter().zip(&w).fold(C::new(1.0, 0.0), |acc, (&a, &c)| acc * rbf_kernel_c(gamma, a, c));
        prod = prod.max((k - p).norm() / p.norm());
        let sq = |v: &[C]| v.iter().map(|&a| a * a).sum::<C>();
        let wbar: Vec<C> = w.iter().map(|a| a.conj()).collect();
        let via = (-(sq(&z) + sq(&wbar)) / (gamma * gamma)).exp() * fock_kernel_d(nu, &z, &w)?;
        fock = fock.max((k - via).norm() / via.norm());
        let x: Vec<C> = z.iter().map(|a| C::new(a.re, 0.0)).collect();
        let y: Vec<C> = w.iter().map(|a| C::new(a.re, 0.0)).collect();
        let d2: f64 = x.iter().zip(&y).map(|(a, c)| (a.re - c.re).powi(2)).sum();
        let kr = rbf_kernel_d(gamma, &x, &y)?;
        let want = (-d2 / (gamma * gamma)).exp();
        real = real.max((kr - C::new(want, 0.0)).norm() / want);
    }
    b.at_most("d-kernel vs product of 1-D kernels", prod, 1e-14);
    b.at_most("d-kernel vs Gaussian factors times Fock kernel", fock, 1e-14);
    b.at_most("real restriction vs exp(-|x-y|^2/gamma^2)", real, 1e-14);
    Ok(b.finish(
        8,
        "product-fock-factorization",
        "product and Fock-kernel factorizations",
        json!({"gamma": gamma, "dim": 3, "samples": 100}),
    ))
}

const SB_SLICE_ORDER: usize = 24;
const SB_X_ORDER_D2: usize = 24;
const SB_Z_ORDER_D2: usize = 8;

pub fn check_unitarity(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let gamma = cfg.gamma;
    let nu = 2.0 / (gamma * gamma);
    let t = RbfSbTransform::new(gamma, cfg.normalization)?;
    let unit = ImaginaryUnit::from_vector(0.0, 1.0, 1.0)?;
    let space = SliceSpace::rbf(gamma, unit, SB_SLICE_ORDER)?;
    let mut images = Vec::new();
    for n in 0..=10 {
        let phi = L2Function::psi(nu, n)?;
        let rule = t.rule_for(&phi)?;
        let t = t.clone();
        images.push(SliceFunction::handle(move |q| t.apply_with_rule(&rule, &phi, q), Some(n)));
    }
    let g = space.gram(&images)?;
    let offset = match cfg.normalization {
        Normalization::Unitary => 1.0,
        Normalization::PaperLiteral => nu / std::f64::consts::PI,
    };
    b.at_most("d=1 Gram of images vs offset * identity", identity_defect_q(&g, offset) / offset, 1e-8);
    if cfg.normalization == Normalization::PaperLiteral {
        let measured = g[0][0].q0.sqrt();
        b.at_most(
            "d=1 measured norm offset vs sqrt(nu/pi)",
            (measured - offset.sqrt()).abs() / offset.sqrt(),
            1e-8,
        );
    }

    let t2 = RbfSbTransformD::new(gamma, 2)?.with_order(SB_X_ORDER_D2)?;
    let space2 = MultiSpace::rbf(gamma, 2, SB_Z_ORDER_D2)?;
    let mut images = Vec::new();
    for n in MultiIndex::graded(2, 4) {
        let degree = n.abs();
        let phi = L2FunctionD::psi(nu, n)?;
        let rule = t2.rule_for(&phi)?;
        let t2 = t2.clone();
        images.push(MultiFunction::handle(
            move |z| t2.apply_with_rule(&rule, &phi, z).unwrap_or(C::new(f64::NAN, f64::NAN)),
            Some(degree),
        ));
    }
    let g = space2.gram(&images)?;
    b.at_most("d=2 Gram of images vs identity", identity_defect_c(&g, 1.0), 1e-8);
    Ok(b.finish(
        9,
        "segal-bargmann-unitarity",
        "isometry of the Segal-Bargmann type transforms",
        json!({
            "gamma": gamma,
            "normalization": cfg.normalization,
            "expected_offset": offset.sqrt(),
            "d1": {"max_n": 10, "x_order": crate::transforms::TRANSFORM_ORDER, "slice_order": SB_SLICE_ORDER},
            "d2": {"max_abs_n": 4, "x_order": SB_X_ORDER_D2, "z_order": SB_Z_ORDER_D2},
        }),
    ))
}

pub fn check_kernel_match(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 10);
    let gamma = cfg.gamma;
    let nu = 2.0 / (gamma * gamma);
    let (mut matched, mut series) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let q = in_ball(&mut r, 1.5 * gamma);
        let x = r.random_range(-2.0..2.0) * gamma;
        for norm in [Normalization::Unitary, Normalization::PaperLiteral] {
            let closed = rbf_sb_kernel(gamma, q, x, norm);
            let via = quat_intrinsic_exp_sq(gamma, q, Sign::Minus) * sb_kernel(nu, q, x, norm);
            matched = matched.max((closed - via).norm() / (1.0 + via.norm()));
        }
        let closed = rbf_sb_kernel(gamma, q, x, Normalization::Unitary);
        let mut acc = Q::zero();
        for n in 0..=40 {
            acc += rbf_basis_q(gamma, n, q).scale(hermite_psi(nu, n, x));
        }
        series = series.max((closed - acc).norm() / (1.0 + closed.norm()));
    }
    b.at_most("closed form vs exp(-q^2/gamma^2) * SB kernel", matched, 1e-13);
    b.at_most("closed form vs generating series, N=40", series, 1e-9);
    Ok(b.finish(
        10,
        "kernel-match",
        "RBF Segal-Bargmann kernel closed form",
        json!({"gamma": gamma, "samples": 100, "terms": 40, "q_radius": 1.5 * gamma, "x_range": 2.0 * gamma}),
    ))
}

pub fn check_slice_independence(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 11);
    let gamma = cfg.gamma;
    let i = ImaginaryUnit::i();
    let j = ImaginaryUnit::from_vector(1.0, 1.0, 0.0)?;
    let rbf = SliceSpace::rbf(gamma, i, cfg.quad_order)?;
    let fock = SliceSpace::fock(2.0 / (gamma * gamma), i, cfg.quad_order)?;
    let (mut worst_rbf, mut worst_fock) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let g = rand_series(&mut r, 16)?;
        let f = SliceFunction::GaussianSeries { gamma, fock: g.clone() };
        worst_rbf = worst_rbf.max(rbf.slice_independence_check(&f, i, j, 1e-10)?.relative_difference);
        let f = SliceFunction::Series(g);
        worst_fock = worst_fock.max(fock.slice_independence_check(&f, i, j, 1e-10)?.relative_difference);
    }
    b.at_most("rbf norm on C_i vs C_(i+j)/sqrt2", worst_rbf, 1e-10);
    b.at_most("fock norm on C_i vs C_(i+j)/sqrt2", worst_fock, 1e-10);
    Ok(b.finish(
        11,
        "slice-independence",
        "independence of the imaginary unit",
        json!({"gamma": gamma, "series": 20, "max_degree": 16, "quad_order": cfg.quad_order}),
    ))
}

pub fn check_psd(cfg: &VerifyConfig) -> Result<CheckReport> {
    let mut b = Builder::new(cfg);
    let mut r = rng(cfg, 12);
    let gamma = cfg.gamma;
    let points: Vec<Vec<f64>> = (0..16)
        .map(|_| (0..3).map(|_| r.random_range(-1.0..1.0)).collect())
        .collect();
    let g = build_gram(KernelId::RealRbf, gamma, &PointSet::Real(points))?;
    let report = psd_check(&g, None)?;
    b.at_least_neg("min eigenvalue of real Gaussian Gram (N=16, R^3)", report.min_eig, 1e-10);

    let mut hom = 0.0f64;
    for n in [1usize, 2, 3] {
        for _ in 0..10 {
            let p: Vec<Q> = (0..n * n).map(|_| rand_q(&mut r, 1.0)).collect();
            let q: Vec<Q> = (0..n * n).map(|_| rand_q(&mut r, 1.0)).collect();
            let mut pq = vec![Q::zero(); n * n];
            for a in 0..n {
                for c in 0..n {
                    pq[a * n + c] = (0..n).fold(Q::zero(), |acc, k| acc + p[a * n + k] * q[k * n + c]);
                }
            }
            let lhs = quat_matrix_to_complex(n, &pq)?;
            let rhs = quat_matrix_to_complex(n, &p)? * quat_matrix_to_complex(n, &q)?;
            hom = hom.max((lhs - rhs).iter().map(|v| v.norm()).fold(0.0, f64::max));
        }
    }
    b.at_most("chi(PQ) - chi(P) chi(Q)", hom, 1e-13);
    Ok(b.finish(
        12,
        "psd-certification",
        "positive definiteness and adjoint representation",
        json!({"gamma": gamma, "points": 16, "dim": 3, "min_eig": report.min_eig, "max_eig": report.max_eig}),
    ))
}

mod input;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rbf_fock::bases::{hermite_psi_all, rbf_basis_c};
use rbf_fock::gram::{build_gram, psd_check, GramEntries, KernelId, PointSet};
use rbf_fock::kernels::{
    fock_kernel_d, kernel_sum_truncated, kernel_sum_truncated_c, rbf_kernel_d, rbf_kernel_qslice, rbf_kernel_real,
    utility_kernel, Normalization, UtilityKernel,
};
use rbf_fock::transforms::{fit_hermite, L2Function, L2FunctionD, RbfSbTransform, RbfSbTransformD, SbTransform};
use rbf_fock::verify::{run_all, VerifyConfig, DEFAULT_SEED};
use rbf_fock::{Error, ImaginaryUnit, MultiIndex};
use serde_json::{json, Value};

use input::{KernelChoice, C, Q};
use output::{complex_cells, complex_header, emit, emit_json, fmt, quaternion_cells, quaternion_header, Table};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input or parameters: exit status 2.
    Schema(String),
    /// A numerical check failed: exit status 1.
    Check(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::DimensionMismatch { .. }
            | Error::PointType { .. }
            | Error::WeightIncompatible(_)
            | Error::InvalidImaginaryUnit { .. }
            | Error::DegreeCap { .. }
            | Error::NodeBudget { .. } => CliError::Schema(e.to_string()),
            _ => CliError::Check(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "rbf-fock", version, about = "Gaussian RBF kernels, Fock spaces and Segal-Bargmann transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NormFlag {
    Unitary,
    #[value(alias = "paper-literal")]
    Paper,
}

impl From<NormFlag> for Normalization {
    fn from(n: NormFlag) -> Self {
        match n {
            NormFlag::Unitary => Normalization::Unitary,
            NormFlag::Paper => Normalization::PaperLiteral,
        }
    }
}

#[derive(Args, Clone)]
struct Common {
    /// Kernel width γ > 0.
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Dimension d for the several-variable transform.
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Gauss-Hermite order, 8 to 512.
    #[arg(long, default_value_t = 80)]
    quad_order: usize,
    #[arg(long, value_enum, default_value_t = NormFlag::Unitary)]
    normalization: NormFlag,
    /// Tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    input: Option<PathBuf>,
    /// CSV output (stdout when absent).
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
}

impl Common {
    fn validate(&self) -> Result<(), CliError> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(CliError::Schema(format!("--gamma: must be positive, got {}", self.gamma)));
        }
        if !(8..=512).contains(&self.quad_order) {
            return Err(CliError::Schema(format!(
                "--quad-order: must lie in [8, 512], got {}",
                self.quad_order
            )));
        }
        if !(1..=3).contains(&self.dim) {
            return Err(CliError::Schema(format!("--dim: must lie in [1, 3], got {}", self.dim)));
        }
        if let Some(t) = self.tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(CliError::Schema(format!("--tol: must be non-negative, got {t}")));
            }
        }
        Ok(())
    }

    fn input(&self) -> Result<&Path, CliError> {
        self.input
            .as_deref()
            .ok_or_else(|| CliError::Schema("--input: required for this command".into()))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a kernel on point pairs.
    Kernel {
        /// Optional action word; `eval` is the only action.
        #[arg(value_parser = ["eval"])]
        action: Option<String>,
        /// Kernel: real-rbf, complex-rbf, quaternion-rbf, fock, exponential,
        /// polynomial:M or truncated-rbf:N.
        #[arg(long)]
        kernel: Option<String>,
        /// Complex point `re,im;re,im;...`.
        #[arg(long, requires = "w")]
        z: Option<String>,
        #[arg(long, requires = "z")]
        w: Option<String>,
        /// Quaternion point `w,x,y,z`.
        #[arg(long, requires = "p", conflicts_with = "z")]
        q: Option<String>,
        #[arg(long, requires = "q")]
        p: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Assemble a Gram matrix and check positive semidefiniteness.
    Gram {
        #[command(flatten)]
        common: Common,
    },
    /// Apply a Segal-Bargmann type transform on a grid.
    Transform {
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate basis functions on a grid.
    Basis {
        #[arg(long, value_enum, default_value_t = Family::Rbf)]
        family: Family,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// `min,max` of the real part.
        #[arg(long, default_value = "-3,3", allow_hyphen_values = true)]
        x_range: String,
        #[arg(long, default_value_t = 61)]
        x_steps: usize,
        /// `min,max` of the imaginary part (rbf family only).
        #[arg(long, default_value = "0,0", allow_hyphen_values = true)]
        y_range: String,
        #[arg(long, default_value_t = 1)]
        y_steps: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance suite.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// `e_n^γ` on complex points.
    Rbf,
    /// `ψ_n^ν` on the real line, `ν = 2/γ²`.
    Hermite,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Schema(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Kernel {
            kernel,
            z,
            w,
            q,
            p,
            common,
            ..
        } => {
            common.validate()?;
            kernel_cmd(&common, kernel.as_deref(), z.zip(w), q.zip(p))
        }
        Command::Gram { common } => {
            common.validate()?;
            gram_cmd(&common)
        }
        Command::Transform { common } => {
            common.validate()?;
            transform_cmd(&common)
        }
        Command::Basis {
            family,
            n_max,
            x_range,
            x_steps,
            y_range,
            y_steps,
            common,
        } => {
            common.validate()?;
            let xs = input::parse_range(&x_range, "--x-range")?;
            let ys = input::parse_range(&y_range, "--y-range")?;
            basis_cmd(&common, family, n_max, (xs, x_steps), (ys, y_steps))
        }
        Command::Verify { common } => {
            common.validate()?;
            verify_cmd(&common)
        }
    }
}

enum Pairs {
    Real(Vec<(Vec<f64>, Vec<f64>)>),
    Complex(Vec<(Vec<C>, Vec<C>)>),
    Quaternion(Vec<(Q, Q)>),
}

fn kernel_cmd(
    common: &Common,
    kernel: Option<&str>,
    inline_c: Option<(String, String)>,
    inline_q: Option<(String, String)>,
) -> Result<(), CliError> {
    let flag_kernel = kernel.map(KernelChoice::from_flag).transpose()?;
    let mut gamma = common.gamma;
    let (choice, pairs) = if let Some((z, w)) = inline_c {
        let z = input::parse_complex_flag(&z, "--z")?;
        let w = input::parse_complex_flag(&w, "--w")?;
        let choice = flag_kernel.unwrap_or(KernelChoice::Id(KernelId::ComplexRbf));
        let pairs = if matches!(choice, KernelChoice::Id(KernelId::RealRbf | KernelId::Polynomial(_) | KernelId::Exponential)) {
            let re = |v: &[C]| v.iter().map(|c| c.re).collect::<Vec<_>>();
            Pairs::Real(vec![(re(&z), re(&w))])
        } else {
            Pairs::Complex(vec![(z, w)])
        };
        (choice, pairs)
    } else if let Some((q, p)) = inline_q {
        let q = input::parse_quaternion_flag(&q, "--q")?;
        let p = input::parse_quaternion_flag(&p, "--p")?;
        let choice = flag_kernel.unwrap_or(KernelChoice::Id(KernelId::QuaternionRbf));
        (choice, Pairs::Quaternion(vec![(q, p)]))
    } else {
        let doc = input::read_json(common.input()?)?;
        input::reject_unknown(&doc, &["kernel", "gamma", "pairs"], "$")?;
        let choice = match flag_kernel {
            Some(k) => k,
            None => KernelChoice::from_json(input::field(&doc, "kernel", "$")?, "$.kernel")?,
        };
        if let Some(g) = doc.get("gamma") {
            gamma = input::real(g, "$.gamma")?;
        }
        let raw = input::array(input::field(&doc, "pairs", "$")?, "$.pairs")?;
        let mut real = Vec::new();
        let mut cplx = Vec::new();
        let mut quat = Vec::new();
        for (k, pair) in raw.iter().enumerate() {
            let path = format!("$.pairs[{k}]");
            let [a, b] = input::array(pair, &path)?.as_slice() else {
                return Err(CliError::Schema(format!("{path}: expected [point, point]")));
            };
            let (pa, pb) = (format!("{path}[0]"), format!("{path}[1]"));
            match point_kind(choice) {
                PointKind::Real => real.push((input::real_point(a, &pa)?, input::real_point(b, &pb)?)),
                PointKind::Complex => cplx.push((input::complex_point(a, &pa)?, input::complex_point(b, &pb)?)),
                PointKind::Quaternion => quat.push((input::quaternion(a, &pa)?, input::quaternion(b, &pb)?)),
            }
        }
        let pairs = match point_kind(choice) {
            PointKind::Real => Pairs::Real(real),
            PointKind::Complex => Pairs::Complex(cplx),
            PointKind::Quaternion => Pairs::Quaternion(quat),
        };
        (choice, pairs)
    };
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(CliError::Schema(format!("gamma: must be positive, got {gamma}")));
    }
    let nu = 2.0 / (gamma * gamma);

    let table = match pairs {
        Pairs::Real(ps) => {
            let mut t = Table::new(vec!["pair".into(), "value".into()]);
            for (k, (x, y)) in ps.iter().enumerate() {
                let v = match choice {
                    KernelChoice::Id(KernelId::RealRbf) => rbf_kernel_real(gamma, x, y)?,
                    KernelChoice::Id(KernelId::Polynomial(m)) => utility_kernel(UtilityKernel::Polynomial(m), x, y)?,
                    KernelChoice::Id(KernelId::Exponential) => utility_kernel(UtilityKernel::Exponential, x, y)?,
                    _ => unreachable!("real pairs only for real kernels"),
                };
                t.push(vec![k.to_string(), fmt(v)]);
            }
            t
        }
        Pairs::Complex(ps) => {
            let mut t = Table::new(vec!["pair".into()]);
            t.header.extend(complex_header("value"));
            for (k, (z, w)) in ps.iter().enumerate() {
                let v = match choice {
                    KernelChoice::Id(KernelId::ComplexRbf) => rbf_kernel_d(gamma, z, w)?,
                    KernelChoice::Fock => fock_kernel_d(nu, z, w)?,
                    KernelChoice::Id(KernelId::TruncatedRbf(n)) => match (z.as_slice(), w.as_slice()) {
                        ([a], [b]) => kernel_sum_truncated_c(gamma, *a, *b, n)?,
                        _ => return Err(CliError::Schema("truncated-rbf: points must be one-dimensional".into())),
                    },
                    other => {
                        return Err(CliError::Schema(format!("kernel {}: expects other point types", other.name())))
                    }
                };
                let mut row = vec![k.to_string()];
                row.extend(complex_cells(v));
                t.push(row);
            }
            t
        }
        Pairs::Quaternion(ps) => {
            let mut t = Table::new(vec!["pair".into()]);
            t.header.extend(quaternion_header("value"));
            for (k, (q, p)) in ps.iter().enumerate() {
                let v = match choice {
                    KernelChoice::Id(KernelId::QuaternionRbf) => rbf_kernel_qslice(gamma, *q, *p)?,
                    KernelChoice::Id(KernelId::TruncatedRbf(n)) => kernel_sum_truncated(gamma, *q, *p, n)?,
                    other => {
                        return Err(CliError::Schema(format!(
                            "kernel {}: does not take quaternion points",
                            other.name()
                        )))
                    }
                };
                let mut row = vec![k.to_string()];
                row.extend(quaternion_cells(v));
                t.push(row);
            }
            t
        }
    };
    emit(&table.to_bytes()?, common.output.as_deref())
}

#[derive(Clone, Copy)]
enum PointKind {
    Real,
    Complex,
    Quaternion,
}

fn point_kind(choice: KernelChoice) -> PointKind {
    match choice {
        KernelChoice::Id(KernelId::RealRbf | KernelId::Polynomial(_) | KernelId::Exponential) => PointKind::Real,
        KernelChoice::Id(KernelId::ComplexRbf) | KernelChoice::Fock => PointKind::Complex,
        KernelChoice::Id(KernelId::QuaternionRbf | KernelId::TruncatedRbf(_)) => PointKind::Quaternion,
    }
}

fn gram_cmd(common: &Common) -> Result<(), CliError> {
    let doc = input::read_json(common.input()?)?;
    input::reject_unknown(&doc, &["kernel", "gamma", "points"], "$")?;
    let kernel = match KernelChoice::from_json(input::field(&doc, "kernel", "$")?, "$.kernel")? {
        KernelChoice::Id(id) => id,
        KernelChoice::Fock => return Err(CliError::Schema("$.kernel: fock is not available for gram".into())),
    };
    let gamma = match doc.get("gamma") {
        Some(g) => input::real(g, "$.gamma")?,
        None => common.gamma,
    };
    let raw = input::array(input::field(&doc, "points", "$")?, "$.points")?;
    let path = |k: usize| format!("$.points[{k}]");
    let points = match point_kind(KernelChoice::Id(kernel)) {
        PointKind::Real => PointSet::Real(
            raw.iter()
                .enumerate()
                .map(|(k, v)| input::real_point(v, &path(k)))
                .collect::<Result<_, _>>()?,
        ),
        PointKind::Complex => PointSet::Complex(
            raw.iter()
                .enumerate()
                .map(|(k, v)| input::complex_point(v, &path(k)))
                .collect::<Result<_, _>>()?,
        ),
        PointKind::Quaternion => PointSet::Quaternion(
            raw.iter()
                .enumerate()
                .map(|(k, v)| input::quaternion(v, &path(k)))
                .collect::<Result<_, _>>()?,
        ),
    };
    let g = build_gram(kernel, gamma, &points)?;
    let report = psd_check(&g, common.tol)?;

    let n = g.n;
    let real_valued = matches!(kernel, KernelId::RealRbf | KernelId::Polynomial(_) | KernelId::Exponential);
    let mut header = Vec::new();
    for c in 0..n {
        let name = format!("c{c}");
        match &g.entries {
            GramEntries::Complex(_) if real_valued => header.push(name),
            GramEntries::Complex(_) => header.extend(complex_header(&name)),
            GramEntries::Quaternion(_) => header.extend(quaternion_header(&name)),
        }
    }
    let mut table = Table::new(header);
    for r in 0..n {
        let mut row = Vec::new();
        for c in 0..n {
            match &g.entries {
                GramEntries::Complex(e) if real_valued => row.push(fmt(e[r * n + c].re)),
                GramEntries::Complex(e) => row.extend(complex_cells(e[r * n + c])),
                GramEntries::Quaternion(e) => row.extend(quaternion_cells(e[r * n + c])),
            }
        }
        table.push(row);
    }
    emit(&table.to_bytes()?, common.output.as_deref())?;

    let doc = json!({
        "kernel": kernel,
        "gamma": gamma,
        "n": n,
        "point_hash": format!("{:016x}", points.fingerprint()),
        "min_eig": report.min_eig,
        "max_eig": report.max_eig,
        "tol": report.tol,
        "psd": report.psd,
        "hermitian_defect": report.hermitian_defect,
        "informational": report.informational,
    });
    match &common.report {
        Some(p) => emit_json(&doc, Some(p))?,
        None => eprintln!("{}", serde_json::to_string(&doc).unwrap_or_default()),
    }
    if !report.psd && !report.informational {
        return Err(CliError::Check(format!(
            "minimum eigenvalue {:.3e} below -{:.3e}",
            report.min_eig, report.tol
        )));
    }
    Ok(())
}

/// Transform input:
///
/// ```json
/// {"transform": "rbf-sb" | "sb",
///  "hermite": {"nu": 2.0, "coeffs": [1.0, [0, 1, 0, 0]]}
///    or "sampled": {"csv": "phi.csv", "certificate": {"nu": 2.0, "degree": 6}},
///  "grid": {"points": [...]} or {"x": {...}, "y": {...}, "unit": [1, 0, 0]}}
/// ```
fn transform_cmd(common: &Common) -> Result<(), CliError> {
    let path = common.input()?;
    let doc = input::read_json(path)?;
    input::reject_unknown(&doc, &["transform", "hermite", "sampled", "grid"], "$")?;
    if common.dim > 1 {
        return transform_d(common, &doc);
    }
    let gamma = common.gamma;
    let nu = 2.0 / (gamma * gamma);
    let norm: Normalization = common.normalization.into();
    let kind = match doc.get("transform").map(|v| v.as_str()) {
        None | Some(Some("rbf-sb")) => "rbf-sb",
        Some(Some("sb")) => "sb",
        _ => return Err(CliError::Schema("$.transform: expected \"rbf-sb\" or \"sb\"".into())),
    };

    let mut report = json!({"transform": kind, "gamma": gamma, "nu": nu, "normalization": norm});
    let phi = match (doc.get("hermite"), doc.get("sampled")) {
        (Some(h), None) => {
            input::reject_unknown(h, &["nu", "coeffs"], "$.hermite")?;
            let hnu = input::real(input::field(h, "nu", "$.hermite")?, "$.hermite.nu")?;
            let coeffs = input::array(input::field(h, "coeffs", "$.hermite")?, "$.hermite.coeffs")?
                .iter()
                .enumerate()
                .map(|(k, v)| input::quaternion(v, &format!("$.hermite.coeffs[{k}]")))
                .collect::<Result<Vec<_>, _>>()?;
            L2Function::hermite(hnu, coeffs)?
        }
        (None, Some(s)) => {
            input::reject_unknown(s, &["csv", "certificate"], "$.sampled")?;
            let Some(cert) = s.get("certificate") else {
                return Err(CliError::Schema(
                    "$.sampled: a decay certificate {\"nu\", \"degree\"} is required for sampled input".into(),
                ));
            };
            input::reject_unknown(cert, &["nu", "degree"], "$.sampled.certificate")?;
            let cnu = input::real(input::field(cert, "nu", "$.sampled.certificate")?, "$.sampled.certificate.nu")?;
            let degree = input::usize_value(
                input::field(cert, "degree", "$.sampled.certificate")?,
                "$.sampled.certificate.degree",
            )?;
            let csv_path = input::field(s, "csv", "$.sampled")?
                .as_str()
                .ok_or_else(|| CliError::Schema("$.sampled.csv: expected a path".into()))?;
            let csv_path = path.parent().unwrap_or(Path::new(".")).join(csv_path);
            let (xs, values) = read_samples(&csv_path)?;
            let (fit, residual) = fit_hermite(cnu, degree, &xs, &values)?;
            report["fit_residual"] = json!(residual);
            report["certificate"] = json!({"nu": cnu, "degree": degree});
            fit
        }
        _ => {
            return Err(CliError::Schema(
                "$: exactly one of `hermite` or `sampled` is required".into(),
            ))
        }
    };

    let grid = slice_grid(input::field(&doc, "grid", "$")?)?;
    let mut table = Table::new(Vec::new());
    table.header.extend(quaternion_header("q"));
    table.header.extend(quaternion_header("value"));
    let order = common.quad_order;
    for q in grid {
        let v = match kind {
            "sb" => SbTransform::new(nu, norm)?.with_order(order)?.apply(&phi, q)?,
            _ => RbfSbTransform::new(gamma, norm)?.with_order(order)?.apply(&phi, q)?,
        };
        let mut row = quaternion_cells(q).to_vec();
        row.extend(quaternion_cells(v));
        table.push(row);
    }
    emit(&table.to_bytes()?, common.output.as_deref())?;
    if let Some(p) = &common.report {
        emit_json(&report, Some(p))?;
    }
    Ok(())
}

fn transform_d(common: &Common, doc: &Value) -> Result<(), CliError> {
    let dim = common.dim;
    let gamma = common.gamma;
    if doc.get("sampled").is_some() {
        return Err(CliError::Schema(
            "$.sampled: sampled input is only supported for --dim 1".into(),
        ));
    }
    if doc.get("transform").and_then(Value::as_str).is_some_and(|s| s != "rbf-sb") {
        return Err(CliError::Schema("$.transform: only \"rbf-sb\" exists for --dim > 1".into()));
    }
    let h = input::field(doc, "hermite", "$")?;
    input::reject_unknown(h, &["nu", "coeffs"], "$.hermite")?;
    let nu = input::real(input::field(h, "nu", "$.hermite")?, "$.hermite.nu")?;
    let mut coeffs = Vec::new();
    for (k, term) in input::array(input::field(h, "coeffs", "$.hermite")?, "$.hermite.coeffs")?
        .iter()
        .enumerate()
    {
        let path = format!("$.hermite.coeffs[{k}]");
        input::reject_unknown(term, &["n", "c"], &path)?;
        let n = input::array(input::field(term, "n", &path)?, &format!("{path}.n"))?
            .iter()
            .enumerate()
            .map(|(l, v)| input::usize_value(v, &format!("{path}.n[{l}]")))
            .collect::<Result<Vec<_>, _>>()?;
        if n.len() != dim {
            return Err(CliError::Schema(format!("{path}.n: expected {dim} entries")));
        }
        let c = input::complex(input::field(term, "c", &path)?, &format!("{path}.c"))?;
        coeffs.push((MultiIndex(n), c));
    }
    let phi = L2FunctionD::Hermite { nu, dim, coeffs };
    let grid = input::field(doc, "grid", "$")?;
    input::reject_unknown(grid, &["points"], "$.grid")?;
    let points = input::array(input::field(grid, "points", "$.grid")?, "$.grid.points")?;
    let t = RbfSbTransformD::new(gamma, dim)?.with_order(common.quad_order.min(32))?;

    let mut table = Table::new(Vec::new());
    for l in 0..dim {
        table.header.extend(complex_header(&format!("z{l}")));
    }
    table.header.extend(complex_header("value"));
    for (k, p) in points.iter().enumerate() {
        let path = format!("$.grid.points[{k}]");
        let z = input::complex_point(p, &path)?;
        if z.len() != dim {
            return Err(CliError::Schema(format!("{path}: expected {dim} coordinates")));
        }
        let v = t.apply(&phi, &z)?;
        let mut row: Vec<String> = z.iter().flat_map(|c| complex_cells(*c)).collect();
        row.extend(complex_cells(v));
        table.push(row);
    }
    emit(&table.to_bytes()?, common.output.as_deref())?;
    if let Some(p) = &common.report {
        emit_json(&json!({"transform": "rbf-sb", "gamma": gamma, "dim": dim}), Some(p))?;
    }
    Ok(())
}

fn slice_grid(grid: &Value) -> Result<Vec<Q>, CliError> {
    if let Some(points) = grid.get("points") {
        input::reject_unknown(grid, &["points"], "$.grid")?;
        return input::array(points, "$.grid.points")?
            .iter()
            .enumerate()
            .map(|(k, v)| input::quaternion(v, &format!("$.grid.points[{k}]")))
            .collect();
    }
    input::reject_unknown(grid, &["x", "y", "unit"], "$.grid")?;
    let xs = input::linspace_json(input::field(grid, "x", "$.grid")?, "$.grid.x")?;
    let ys = match grid.get("y") {
        Some(y) => input::linspace_json(y, "$.grid.y")?,
        None => vec![0.0],
    };
    let unit = match grid.get("unit") {
        Some(u) => {
            let v = input::real_point(u, "$.grid.unit")?;
            let [a, b, c] = v.as_slice() else {
                return Err(CliError::Schema("$.grid.unit: expected [a, b, c]".into()));
            };
            ImaginaryUnit::from_vector(*a, *b, *c).map_err(|e| CliError::Schema(format!("$.grid.unit: {e}")))?
        }
        None => ImaginaryUnit::i(),
    };
    Ok(xs
        .iter()
        .flat_map(|&x| ys.iter().map(move |&y| unit.embed(C::new(x, y))))
        .collect())
}

/// Columns `x,value` or `x,value.w,value.x,value.y,value.z`.
fn read_samples(path: &Path) -> Result<(Vec<f64>, Vec<Q>), CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let header = rdr
        .headers()
        .map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?
        .clone();
    let width = header.len();
    if width != 2 && width != 5 {
        return Err(CliError::Schema(format!(
            "{}: expected columns x,value or x,value.w,value.x,value.y,value.z",
            path.display()
        )));
    }
    let (mut xs, mut vs) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
        let num = |k: usize| -> Result<f64, CliError> {
            rec.get(k).and_then(|s| s.trim().parse().ok()).ok_or_else(|| {
                CliError::Schema(format!("{}: line {}: column {}: expected a number", path.display(), line + 2, k + 1))
            })
        };
        xs.push(num(0)?);
        vs.push(if width == 2 {
            Q::real(num(1)?)
        } else {
            Q::new(num(1)?, num(2)?, num(3)?, num(4)?)
        });
    }
    Ok((xs, vs))
}

fn basis_cmd(
    common: &Common,
    family: Family,
    n_max: usize,
    x: ((f64, f64), usize),
    y: ((f64, f64), usize),
) -> Result<(), CliError> {
    if n_max > 64 {
        return Err(CliError::Schema(format!("--n-max: at most 64, got {n_max}")));
    }
    let gamma = common.gamma;
    let nu = 2.0 / (gamma * gamma);
    let xs = input::linspace(x.0 .0, x.0 .1, x.1.max(1));
    let mut table;
    match family {
        Family::Hermite => {
            table = Table::new(vec!["x".into()]);
            table.header.extend((0..=n_max).map(|n| format!("psi{n}")));
            for &x in &xs {
                let mut row = vec![fmt(x)];
                row.extend(hermite_psi_all(nu, n_max, x).into_iter().map(fmt));
                table.push(row);
            }
        }
        Family::Rbf => {
            let ys = input::linspace(y.0 .0, y.0 .1, y.1.max(1));
            table = Table::new(vec!["x".into(), "y".into()]);
            for n in 0..=n_max {
                table.header.extend(complex_header(&format!("e{n}")));
            }
            for &x in &xs {
                for &y in &ys {
                    let mut row = vec![fmt(x), fmt(y)];
                    for n in 0..=n_max {
                        row.extend(complex_cells(rbf_basis_c(gamma, n, C::new(x, y))));
                    }
                    table.push(row);
                }
            }
        }
    }
    emit(&table.to_bytes()?, common.output.as_deref())
}

fn verify_cmd(common: &Common) -> Result<(), CliError> {
    let cfg = VerifyConfig {
        gamma: common.gamma,
        quad_order: common.quad_order,
        normalization: common.normalization.into(),
        seed: common.seed,
        tolerance: common.tol,
    };
    let reports = run_all(&cfg);
    for r in &reports {
        eprintln!("{}", r.summary_line());
    }
    let all = reports.iter().all(|r| r.pass);
    let checks: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "check": format!("C{}", r.id),
                "name": r.name,
                "paper_anchor": r.paper_anchor,
                "params": r.params,
                "value": r.value,
                "tolerance": r.bound,
                "bound": r.bound,
                "pass": r.pass,
                "details": r.details,
                "error": r.error,
            })
        })
        .collect();
    let doc = json!({"config": cfg, "pass": all, "checks": checks});
    emit_json(&doc, common.report.as_deref().or(common.output.as_deref()))?;
    if all {
        Ok(())
    } else {
        let failed: Vec<_> = reports.iter().filter(|r| !r.pass).map(|r| format!("C{}", r.id)).collect();
        Err(CliError::Check(format!("failed: {}", failed.join(", "))))
    }
}

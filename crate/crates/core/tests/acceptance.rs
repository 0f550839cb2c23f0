use std::io::Write;
use std::time::Instant;

use rbf_fock::kernels::Normalization;
use rbf_fock::verify::{run_all, VerifyConfig};

#[test]
fn acceptance_suite() {
    let start = Instant::now();
    let reports = run_all(&VerifyConfig::default());
    // written to the handle directly so that the lines survive output capture
    let mut out = std::io::stdout().lock();
    writeln!(out).unwrap();
    for r in &reports {
        writeln!(out, "{}", r.summary_line()).unwrap();
        for d in &r.details {
            writeln!(
                out,
                "        {} {:<52} value={:.3e} bound={:.1e}",
                if d.pass { "ok  " } else { "FAIL" },
                d.name,
                d.value,
                d.bound
            )
            .unwrap();
        }
        if let Some(e) = &r.error {
            writeln!(out, "        error: {e}").unwrap();
        }
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    writeln!(out, "{passed}/{} criteria passed in {:.1?}", reports.len(), start.elapsed()).unwrap();
    drop(out);
    assert_eq!(reports.len(), 12);
    assert!(reports.iter().all(|r| r.pass), "acceptance criteria failed");
}

#[test]
fn paper_literal_offset() {
    let cfg = VerifyConfig {
        normalization: Normalization::PaperLiteral,
        ..VerifyConfig::default()
    };
    let r = rbf_fock::verify::check_unitarity(&cfg).unwrap();
    println!("{}", r.summary_line());
    assert!(r.pass, "{:?}", r.details);
}

#[test]
fn reports_are_deterministic() {
    let cfg = VerifyConfig::default();
    let a = serde_json::to_string(&rbf_fock::verify::check_isometry(&cfg).unwrap()).unwrap();
    let b = serde_json::to_string(&rbf_fock::verify::check_isometry(&cfg).unwrap()).unwrap();
    assert_eq!(a, b);
}

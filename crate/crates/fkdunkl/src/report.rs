//! Serializable verdict types shared between the verification suites and the
//! command-line front end.
//!
//! The core crate stays `no_std`; everything here only derives
//! [`serde::Serialize`] so the companion binary can emit JSON without the
//! suites knowing anything about files or formats.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dunkl::AlgCheck;
use crate::oprep::IdentityReport;

/// Aggregate verdict for one verification suite.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// How many of the rows are deliberately broken variants (which pass by
    /// being rejected).
    pub negative_controls: usize,
    /// True iff every row passed.
    pub pass: bool,
}

impl SuiteSummary {
    fn from_counts(suite: &str, total: usize, passed: usize, controls: usize) -> Self {
        SuiteSummary {
            suite: String::from(suite),
            total,
            passed,
            failed: total - passed,
            negative_controls: controls,
            pass: passed == total,
        }
    }
}

/// Summarize algebraic check rows.
pub fn summarize_checks(suite: &str, rows: &[AlgCheck]) -> SuiteSummary {
    let passed = rows.iter().filter(|r| r.pass).count();
    let controls = rows.iter().filter(|r| r.negative_control).count();
    SuiteSummary::from_counts(suite, rows.len(), passed, controls)
}

/// Summarize operator identity reports.
pub fn summarize_identities(suite: &str, rows: &[IdentityReport]) -> SuiteSummary {
    let passed = rows.iter().filter(|r| r.pass).count();
    let controls = rows.iter().filter(|r| r.negative_control).count();
    SuiteSummary::from_counts(suite, rows.len(), passed, controls)
}

/// One human-readable line per row, "PASS"/"FAIL" first, suitable for both
/// terminal output and log capture.
pub fn check_lines(rows: &[AlgCheck]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            let extra = match r.residual {
                Some(res) => alloc::format!(" residual={res:.3e}"),
                None => String::new(),
            };
            let control = if r.negative_control { " [control]" } else { "" };
            alloc::format!(
                "{verdict} [{}] n={} {}{}{} ({})",
                r.backend,
                r.n,
                r.identity,
                control,
                extra,
                r.method
            )
        })
        .collect()
}

/// One line per operator identity report.
pub fn identity_lines(rows: &[IdentityReport]) -> Vec<String> {
    rows.iter()
        .map(|r| {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            let control = if r.negative_control { " [control]" } else { "" };
            alloc::format!(
                "{verdict} [{}] {}{} residual={:.3e} tol={:.1e}",
                r.family,
                r.name,
                control,
                r.max_residual,
                r.tol
            )
        })
        .collect()
}

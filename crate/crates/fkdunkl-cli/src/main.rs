//! Command-line verification driver.
//!
//! Runs the algebraic and operator verification suites of the `fkdunkl`
//! engine, prints a human-readable summary to stdout, and writes a single
//! JSON report per run (atomically: temp file + rename).
//!
//! Exit codes: 0 all verdicts pass · 1 at least one verdict failed ·
//! 2 configuration error · 3 backend error (pole exhaustion, basis budget
//! exceeded, invalid family data).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use num_complex::Complex64 as C64;

use fkdunkl::dunkl::{
    commutativity_suite, cyclic_suite, degenerate_cyclic_suite, degeneration_check,
    equivariant_suite, multiparam_suite, pieri_suite_with, weighted_suite, AlgCheck,
    DegenerationReport, PhiConvention,
};
use fkdunkl::nichols::{
    a2_quadratic_relations, b2_quadratic_relations, b2_quartic_relations, hilbert_series,
    pad_kernel, sym_rank_certified, Tensor,
};
use fkdunkl::oprep::{functional_equation_suite, operator_suite_with_tau, IdentityReport};
use fkdunkl::report::{summarize_checks, summarize_identities, SuiteSummary};
use fkdunkl::roots::{RootKind, RootSystem};

const DEFAULT_SEED: u64 = 2024;
const DEFAULT_TOL: f64 = 1e-8;
/// The degeneration bridge compares an O(δ²)-accurate elliptic model at
/// δ = 1e-3 against the rational limit, so its agreement tolerance is
/// coarser than the residual tolerance of the exact-identity suites.
const DEFAULT_DEGENERATION_TOL: f64 = 1e-4;
const SCHEMA_VERSION: u32 = 1;
const SEED_ENV: &str = "FKDUNKL_SEED";

// ---------------------------------------------------------------------------
// Flags
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "fkdunkl",
    version,
    about = "Verification driver for the deformed Fomin-Kirillov algebra engine"
)]
struct Cli {
    /// Global RNG seed (flag > FKDUNKL_SEED env > config file > 2024).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Numeric tolerance for residual verdicts.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Report output path (JSON). Written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Optional JSON config file mirroring the flags (flags take precedence).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for independent verification jobs. Report ordering is
    /// deterministic regardless of this value.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        what: VerifyCmd,
    },
    /// Ranks of the braided-symmetrizer images (Nichols-algebra Hilbert
    /// series) for a root-system type.
    Hilbert {
        /// Root-system type: B2 or A2.
        #[arg(long = "type")]
        root_type: String,
        /// Highest degree to report.
        #[arg(long)]
        max_degree: usize,
        /// Highest degree computed by exact symmetrizer rank (higher degrees
        /// are inferred from the closed-form series).
        #[arg(long)]
        exact_cap: Option<usize>,
    },
    /// Degenerations: the elliptic-to-rational multiparameter bridge at a
    /// small scale δ, plus the ψ = 0 cyclic identities.
    Degenerate {
        /// Number of strands.
        #[arg(long)]
        n: Option<usize>,
        /// Symmetric-function degree for the bridge check.
        #[arg(long)]
        k: Option<usize>,
        /// Index set for the bridge check, 1-based comma-separated
        /// (default: 1,..,k).
        #[arg(long)]
        iset: Option<String>,
        /// Degeneration scale δ.
        #[arg(long)]
        delta: Option<f64>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Dunkl-element identities: commutativity, cyclic sums, weighted
    /// cyclic sums (with their ψ = 0 degenerations).
    Identities {
        /// Number of strands (>= 3).
        #[arg(long)]
        n: Option<usize>,
        /// Restrict numeric rows to one coefficient family
        /// (elliptic | trigonometric | rational).
        #[arg(long)]
        family: Option<String>,
    },
    /// Quantum-deformed Pieri rules: elliptic, equivariant, and
    /// multiparameter expansions over all index sets.
    Pieri {
        /// Largest number of strands.
        #[arg(long)]
        n_max: Option<usize>,
        /// Largest symmetric-function degree.
        #[arg(long)]
        k_max: Option<usize>,
        /// Pair-coefficient convention: auto (adjudicated) | x | lambda.
        #[arg(long)]
        convention: Option<String>,
    },
    /// Operator representations: square identities, bracket relations,
    /// conjugation, the G2 chain identity, truncated Dunkl operators.
    Operators {
        /// Restrict rows to one family label (e.g. cm-elliptic, b2-sn).
        #[arg(long)]
        family: Option<String>,
        /// Strand count accepted for interface compatibility; the operator
        /// suites fix their own dimensions (A3, A2, B2, G2).
        #[arg(long)]
        n: Option<usize>,
        /// Modular parameter for the elliptic strand family as "re,im"
        /// (requires im > 0).
        #[arg(long)]
        tau: Option<String>,
    },
    /// Scalar functional equations for the coefficient families.
    Funceq {},
}

// ---------------------------------------------------------------------------
// Config plumbing
// ---------------------------------------------------------------------------

/// Optional JSON config file; every field mirrors a flag and flags win.
#[derive(Debug, Default, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
struct FileConfig {
    seed: Option<u64>,
    tol: Option<f64>,
    out: Option<String>,
    jobs: Option<usize>,
    n: Option<usize>,
    k: Option<usize>,
    n_max: Option<usize>,
    k_max: Option<usize>,
    family: Option<String>,
    convention: Option<String>,
    tau: Option<String>,
    iset: Option<String>,
    delta: Option<f64>,
    max_degree: Option<usize>,
    exact_cap: Option<usize>,
    root_type: Option<String>,
}

/// Fully resolved run configuration, serialized verbatim into the report.
#[derive(Clone, Debug, serde::Serialize)]
struct RunConfig {
    subcommand: String,
    seed: u64,
    tol: f64,
    jobs: usize,
    out: String,
    /// Floating-point precision of the numeric backends.
    precision: &'static str,
    /// Word-length bound used by membership searches: suites bound each
    /// identity by its own word length plus one.
    degree_bound_policy: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k_max: Option<usize>,
    /// 1-based strand labels, matching the bracket notation in identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    index_set: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    convention: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tau: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_degree: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    root_type: Option<String>,
}

#[derive(serde::Serialize)]
struct DegreeRank {
    d: usize,
    rank: u64,
    /// "exact" (certified symmetrizer rank) or "inferred" (closed-form
    /// series coefficient).
    method: &'static str,
}

#[derive(serde::Serialize)]
struct HilbertOut {
    root_type: String,
    degrees: Vec<DegreeRank>,
}

/// The one report schema shared by every subcommand.
#[derive(serde::Serialize)]
struct Report {
    version: &'static str,
    schema: u32,
    /// Seconds since the Unix epoch; the only field allowed to differ
    /// between identical runs.
    timestamp_unix: u64,
    config: RunConfig,
    summaries: Vec<SuiteSummary>,
    checks: Vec<AlgCheck>,
    operator_reports: Vec<IdentityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degeneration: Option<DegenerationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hilbert: Option<HilbertOut>,
    pass: bool,
}

/// Configuration rejected before any computation (exit 2).
struct ConfigError(String);
/// Backend failure during computation (exit 3).
struct BackendError(String);

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, ConfigError> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| ConfigError(format!("cannot read config {}: {e}", p.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| ConfigError(format!("invalid config {}: {e}", p.display())))
        }
    }
}

fn resolve_seed(flag: Option<u64>, file: &FileConfig) -> Result<u64, ConfigError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(v) = std::env::var(SEED_ENV) {
        return v
            .parse::<u64>()
            .map_err(|_| ConfigError(format!("{SEED_ENV} must be an unsigned integer, got {v:?}")));
    }
    Ok(file.seed.unwrap_or(DEFAULT_SEED))
}

fn parse_tau(s: &str) -> Result<C64, ConfigError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(ConfigError(format!("tau must be \"re,im\", got {s:?}")));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("invalid tau real part {:?}", parts[0])))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| ConfigError(format!("invalid tau imaginary part {:?}", parts[1])))?;
    if im <= 0.0 {
        return Err(ConfigError(format!(
            "tau must have positive imaginary part, got {s:?}"
        )));
    }
    Ok(C64::new(re, im))
}

/// Parse a 1-based comma-separated strand list into 0-based indices.
fn parse_iset(s: &str, n: usize) -> Result<Vec<usize>, ConfigError> {
    let mut out = Vec::new();
    for part in s.split(',') {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| ConfigError(format!("invalid index {:?} in iset", part)))?;
        if v < 1 || v > n {
            return Err(ConfigError(format!(
                "index {v} out of range 1..={n} in iset"
            )));
        }
        let z = v - 1;
        if out.contains(&z) {
            return Err(ConfigError(format!("duplicate index {v} in iset")));
        }
        out.push(z);
    }
    out.sort_unstable();
    Ok(out)
}

// ---------------------------------------------------------------------------
// Deterministic job runner
// ---------------------------------------------------------------------------

type Job<T> = Box<dyn FnOnce() -> Result<T, String> + Send>;

/// Run independent jobs on up to `workers` threads; results come back in
/// job order no matter how the scheduler interleaves them.
fn run_jobs<T: Send>(jobs: Vec<Job<T>>, workers: usize) -> Result<Vec<T>, BackendError> {
    let total = jobs.len();
    let workers = workers.clamp(1, total.max(1));
    let slots: Vec<Mutex<Option<Result<T, String>>>> =
        (0..total).map(|_| Mutex::new(None)).collect();
    let queue: Vec<Mutex<Option<Job<T>>>> = jobs.into_iter().map(|j| Mutex::new(Some(j))).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= total {
                    break;
                }
                let job = queue[idx].lock().unwrap().take().expect("job taken once");
                let result = job();
                *slots[idx].lock().unwrap() = Some(result);
            });
        }
    });
    let mut out = Vec::with_capacity(total);
    for slot in slots {
        match slot.into_inner().unwrap().expect("every job ran") {
            Ok(v) => out.push(v),
            Err(e) => return Err(BackendError(e)),
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Subcommand drivers
// ---------------------------------------------------------------------------

struct SuiteOutput {
    summaries: Vec<SuiteSummary>,
    checks: Vec<AlgCheck>,
    operator_reports: Vec<IdentityReport>,
    degeneration: Option<DegenerationReport>,
    hilbert: Option<HilbertOut>,
}

fn family_row_matches(backend: &str, family: &str) -> bool {
    backend.contains(family)
}

fn run_identities(
    n: usize,
    family: Option<&str>,
    seed: u64,
    tol: f64,
    jobs: usize,
) -> Result<SuiteOutput, BackendError> {
    let labeled: Vec<(&'static str, Job<Vec<AlgCheck>>)> = vec![
        (
            "commutativity",
            Box::new(move || commutativity_suite(n, seed, tol)),
        ),
        ("cyclic", Box::new(move || cyclic_suite(n, seed, tol))),
        (
            "weighted-cyclic",
            Box::new(move || weighted_suite(n, seed, tol)),
        ),
        (
            "degenerate-cyclic",
            Box::new(move || Ok(degenerate_cyclic_suite(n, seed))),
        ),
    ];
    let (names, work): (Vec<_>, Vec<_>) = labeled.into_iter().unzip();
    let results = run_jobs(work, jobs)?;
    let mut summaries = Vec::new();
    let mut checks = Vec::new();
    for (name, mut rows) in names.into_iter().zip(results) {
        if let Some(f) = family {
            // Keep exact rows; restrict numeric/operator rows to the family.
            rows.retain(|r| {
                !(r.backend.starts_with("numeric-") || r.backend.starts_with("operator-"))
                    || family_row_matches(&r.backend, f)
            });
        }
        summaries.push(summarize_checks(name, &rows));
        checks.extend(rows);
    }
    Ok(SuiteOutput {
        summaries,
        checks,
        operator_reports: Vec::new(),
        degeneration: None,
        hilbert: None,
    })
}

fn run_pieri(
    n_max: usize,
    k_max: usize,
    convention: Option<PhiConvention>,
    seed: u64,
    tol: f64,
    jobs: usize,
) -> Result<SuiteOutput, BackendError> {
    enum Out {
        Pieri((&'static str, Vec<AlgCheck>)),
        Rows(Vec<AlgCheck>),
    }
    let work: Vec<Job<Out>> = vec![
        Box::new(move || pieri_suite_with(n_max, k_max, seed, tol, convention).map(Out::Pieri)),
        Box::new(move || Ok(Out::Rows(equivariant_suite(n_max, k_max)))),
        Box::new(move || Ok(Out::Rows(multiparam_suite(n_max, k_max, seed)))),
    ];
    let results = run_jobs(work, jobs)?;
    let mut summaries = Vec::new();
    let mut checks = Vec::new();
    let names = ["pieri", "equivariant-pieri", "multiparameter-pieri"];
    for (name, out) in names.into_iter().zip(results) {
        let rows = match out {
            Out::Pieri((winner, rows)) => {
                println!("adjudicated phi convention: {winner}");
                rows
            }
            Out::Rows(rows) => rows,
        };
        summaries.push(summarize_checks(name, &rows));
        checks.extend(rows);
    }
    Ok(SuiteOutput {
        summaries,
        checks,
        operator_reports: Vec::new(),
        degeneration: None,
        hilbert: None,
    })
}

fn run_operators(
    family: Option<&str>,
    tau: Option<C64>,
    seed: u64,
    tol: f64,
) -> Result<SuiteOutput, BackendError> {
    let mut rows = operator_suite_with_tau(seed, tol, tau).map_err(BackendError)?;
    if let Some(f) = family {
        rows.retain(|r| r.family.contains(f));
        if rows.is_empty() {
            return Err(BackendError(format!("no operator rows match family {f:?}")));
        }
    }
    Ok(SuiteOutput {
        summaries: vec![summarize_identities("operators", &rows)],
        checks: Vec::new(),
        operator_reports: rows,
        degeneration: None,
        hilbert: None,
    })
}

fn run_funceq(seed: u64, tol: f64) -> Result<SuiteOutput, BackendError> {
    let rows = functional_equation_suite(seed, tol).map_err(BackendError)?;
    Ok(SuiteOutput {
        summaries: vec![summarize_identities("functional-equations", &rows)],
        checks: Vec::new(),
        operator_reports: rows,
        degeneration: None,
        hilbert: None,
    })
}

fn run_degenerate(
    n: usize,
    k: usize,
    iset: &[usize],
    delta: f64,
    seed: u64,
    tol: f64,
    jobs: usize,
) -> Result<SuiteOutput, BackendError> {
    let iset_owned = iset.to_vec();
    enum Out {
        Bridge(DegenerationReport),
        Rows(Vec<AlgCheck>),
    }
    let work: Vec<Job<Out>> = vec![
        Box::new(move || {
            degeneration_check(n, &iset_owned, k, delta, seed, tol).map(Out::Bridge)
        }),
        Box::new(move || Ok(Out::Rows(degenerate_cyclic_suite(n, seed)))),
    ];
    let results = run_jobs(work, jobs)?;
    let mut degeneration = None;
    let mut checks = Vec::new();
    let mut summaries = Vec::new();
    for out in results {
        match out {
            Out::Bridge(rep) => {
                summaries.push(SuiteSummary {
                    suite: "degeneration-bridge".to_string(),
                    total: 1,
                    passed: usize::from(rep.pass),
                    failed: usize::from(!rep.pass),
                    negative_controls: 0,
                    pass: rep.pass,
                });
                degeneration = Some(rep);
            }
            Out::Rows(rows) => {
                summaries.push(summarize_checks("degenerate-cyclic", &rows));
                checks.extend(rows);
            }
        }
    }
    Ok(SuiteOutput {
        summaries,
        checks,
        operator_reports: Vec::new(),
        degeneration,
        hilbert: None,
    })
}

fn run_hilbert(
    root_type: &str,
    max_degree: usize,
    exact_cap: usize,
) -> Result<SuiteOutput, BackendError> {
    let (kind, label, gens_of): (RootKind, &str, fn(&RootSystem, usize) -> Vec<Tensor>) =
        match root_type.to_ascii_uppercase().as_str() {
            "B2" => (RootKind::B2, "B2", |rs, d| {
                let quad: Vec<Tensor> = b2_quadratic_relations().into_iter().map(|x| x.1).collect();
                let quart: Vec<Tensor> =
                    b2_quartic_relations().into_iter().map(|x| x.1).collect();
                let mut gens = pad_kernel(rs, &quad, 2, d);
                gens.extend(pad_kernel(rs, &quart, 4, d));
                gens
            }),
            "A2" => (RootKind::A(3), "A2", |rs, d| {
                let quad: Vec<Tensor> = a2_quadratic_relations().into_iter().map(|x| x.1).collect();
                pad_kernel(rs, &quad, 2, d)
            }),
            other => {
                // Validated in main before any computation; kept as a guard.
                return Err(BackendError(format!("unsupported root type {other:?}")));
            }
        };
    let rs = match kind {
        RootKind::B2 => RootSystem::b2(),
        RootKind::A(m) => RootSystem::a_type(m),
        RootKind::G2 => RootSystem::g2(),
    };
    let closed = hilbert_series(kind, max_degree)
        .ok_or_else(|| BackendError(format!("no closed-form series for {label}")))?;
    let mut degrees = Vec::new();
    let mut all_consistent = true;
    for d in 0..=max_degree {
        if d <= exact_cap {
            let rank =
                sym_rank_certified(&rs, d, &gens_of(&rs, d)).map_err(BackendError)? as u64;
            if rank != closed[d] {
                all_consistent = false;
            }
            degrees.push(DegreeRank {
                d,
                rank,
                method: "exact",
            });
        } else {
            degrees.push(DegreeRank {
                d,
                rank: closed[d],
                method: "inferred",
            });
        }
    }
    let summary = SuiteSummary {
        suite: "hilbert".to_string(),
        total: degrees.len(),
        passed: if all_consistent { degrees.len() } else { 0 },
        failed: if all_consistent { 0 } else { degrees.len() },
        negative_controls: 0,
        pass: all_consistent,
    };
    Ok(SuiteOutput {
        summaries: vec![summary],
        checks: Vec::new(),
        operator_reports: Vec::new(),
        degeneration: None,
        hilbert: Some(HilbertOut {
            root_type: label.to_string(),
            degrees,
        }),
    })
}

// ---------------------------------------------------------------------------
// Report output
// ---------------------------------------------------------------------------

fn write_report_atomic(path: &Path, report: &Report) -> Result<(), BackendError> {
    let json = serde_json::to_string_pretty(report)
        .map_err(|e| BackendError(format!("serialization failed: {e}")))?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, json.as_bytes())
        .map_err(|e| BackendError(format!("cannot write {}: {e}", tmp.display())))?;
    fs::rename(&tmp, path)
        .map_err(|e| BackendError(format!("cannot rename {} -> {}: {e}", tmp.display(), path.display())))?;
    Ok(())
}

fn print_summary(out: &SuiteOutput) {
    for s in &out.summaries {
        println!(
            "suite {:<22} {:>4}/{:<4} passed ({} negative controls): {}",
            s.suite,
            s.passed,
            s.total,
            s.negative_controls,
            if s.pass { "PASS" } else { "FAIL" }
        );
    }
    for r in &out.checks {
        if !r.pass {
            println!(
                "FAIL [{}] n={} {} residual={:?} ({})",
                r.backend, r.n, r.identity, r.residual, r.method
            );
        }
    }
    for r in &out.operator_reports {
        if !r.pass {
            println!(
                "FAIL [{}] {} residual={:.3e} tol={:.1e}{}",
                r.family,
                r.name,
                r.max_residual,
                r.tol,
                if r.negative_control { " [control]" } else { "" }
            );
        }
    }
    if let Some(d) = &out.degeneration {
        println!(
            "bridge n={} k={} delta={:.1e}: coeff errs {:.3e}/{:.3e} (Richardson {:.3e}), residuals {:.3e}/{:.3e}, exact member {}: {}",
            d.n,
            d.k,
            d.delta,
            d.p_rel_err_delta,
            d.p_rel_err_half,
            d.p_rel_err_richardson,
            d.pieri_residual_delta,
            d.pieri_residual_half,
            d.exact_member,
            if d.pass { "PASS" } else { "FAIL" }
        );
    }
    if let Some(h) = &out.hilbert {
        let ranks: Vec<String> = h.degrees.iter().map(|d| d.rank.to_string()).collect();
        println!("hilbert {}: {}", h.root_type, ranks.join(","));
    }
}

// ---------------------------------------------------------------------------
// Main
// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<(RunConfig, SuiteOutput), (u8, String)> {
    let file = load_file_config(cli.config.as_deref()).map_err(|e| (2u8, e.0))?;
    let seed = resolve_seed(cli.seed, &file).map_err(|e| (2u8, e.0))?;
    let tol_opt = cli.tol.or(file.tol);
    let tol = tol_opt.unwrap_or(DEFAULT_TOL);
    if !(tol.is_finite() && tol > 0.0) {
        return Err((2, format!("tol must be positive and finite, got {tol}")));
    }
    let jobs = cli.jobs.or(file.jobs).unwrap_or(1);
    if jobs == 0 {
        return Err((2, "jobs must be at least 1".to_string()));
    }

    let mut config = RunConfig {
        subcommand: String::new(),
        seed,
        tol,
        jobs,
        out: String::new(),
        precision: "complex f64",
        degree_bound_policy: "word length + 1",
        n: None,
        k: None,
        n_max: None,
        k_max: None,
        index_set: None,
        family: None,
        convention: None,
        tau: None,
        delta: None,
        max_degree: None,
        exact_cap: None,
        root_type: None,
    };

    let default_out;
    let output = match &cli.cmd {
        Cmd::Verify { what } => {
            match what {
                VerifyCmd::Identities { n, family } => {
                    let n = n.or(file.n).unwrap_or(4);
                    if n < 3 {
                        return Err((2, format!("identities need n >= 3, got {n}")));
                    }
                    if n > 6 {
                        return Err((2, format!("identities capped at n = 6, got {n}")));
                    }
                    let family = family.clone().or_else(|| file.family.clone());
                    if let Some(f) = &family {
                        let known = ["elliptic", "trigonometric", "rational"];
                        if !known.contains(&f.as_str()) {
                            return Err((
                                2,
                                format!("unknown family {f:?}; choose one of {known:?}"),
                            ));
                        }
                    }
                    config.subcommand = "verify identities".to_string();
                    config.n = Some(n);
                    config.family = family.clone();
                    default_out = "identities-report.json";
                    run_identities(n, family.as_deref(), seed, tol, jobs)
                        .map_err(|e| (3u8, e.0))?
                }
                VerifyCmd::Pieri {
                    n_max,
                    k_max,
                    convention,
                } => {
                    let n_max = n_max.or(file.n_max).unwrap_or(5);
                    let k_max = k_max.or(file.k_max).unwrap_or(3);
                    if n_max < 2 || n_max > 6 {
                        return Err((2, format!("pieri needs 2 <= n-max <= 6, got {n_max}")));
                    }
                    if k_max < 1 || k_max > n_max {
                        return Err((
                            2,
                            format!("pieri needs 1 <= k-max <= n-max, got {k_max}"),
                        ));
                    }
                    let conv_str = convention
                        .clone()
                        .or_else(|| file.convention.clone())
                        .unwrap_or_else(|| "auto".to_string());
                    let forced = match conv_str.as_str() {
                        "auto" => None,
                        "x" => Some(PhiConvention::XDifferences),
                        "lambda" => Some(PhiConvention::LambdaDifferences),
                        other => {
                            return Err((
                                2,
                                format!("convention must be auto|x|lambda, got {other:?}"),
                            ))
                        }
                    };
                    config.subcommand = "verify pieri".to_string();
                    config.n_max = Some(n_max);
                    config.k_max = Some(k_max);
                    config.convention = Some(conv_str);
                    default_out = "pieri-report.json";
                    run_pieri(n_max, k_max, forced, seed, tol, jobs).map_err(|e| (3u8, e.0))?
                }
                VerifyCmd::Operators { family, n, tau } => {
                    if let Some(v) = n.or(file.n) {
                        if v < 2 {
                            return Err((2, format!("operators need n >= 2, got {v}")));
                        }
                    }
                    let tau_str = tau.clone().or_else(|| file.tau.clone());
                    let tau_c = match &tau_str {
                        Some(s) => Some(parse_tau(s).map_err(|e| (2u8, e.0))?),
                        None => None,
                    };
                    let family = family.clone().or_else(|| file.family.clone());
                    config.subcommand = "verify operators".to_string();
                    config.n = n.or(file.n);
                    config.family = family.clone();
                    config.tau = tau_c.map(|t| [t.re, t.im]);
                    default_out = "operators-report.json";
                    run_operators(family.as_deref(), tau_c, seed, tol).map_err(|e| (3u8, e.0))?
                }
                VerifyCmd::Funceq {} => {
                    config.subcommand = "verify funceq".to_string();
                    default_out = "funceq-report.json";
                    run_funceq(seed, tol).map_err(|e| (3u8, e.0))?
                }
            }
        }
        Cmd::Hilbert {
            root_type,
            max_degree,
            exact_cap,
        } => {
            let known = ["B2", "A2"];
            let canon = root_type.to_ascii_uppercase();
            if !known.contains(&canon.as_str()) {
                return Err((
                    2,
                    format!("type must be one of {known:?}, got {root_type:?}"),
                ));
            }
            let max_degree = *max_degree;
            if max_degree > 12 {
                return Err((2, format!("max-degree capped at 12, got {max_degree}")));
            }
            let cap = exact_cap.or(file.exact_cap).unwrap_or(5);
            config.subcommand = "hilbert".to_string();
            config.root_type = Some(canon.clone());
            config.max_degree = Some(max_degree);
            config.exact_cap = Some(cap);
            default_out = "hilbert-report.json";
            run_hilbert(&canon, max_degree, cap).map_err(|e| (3u8, e.0))?
        }
        Cmd::Degenerate { n, k, iset, delta } => {
            let n = n.or(file.n).unwrap_or(5);
            if !(2..=6).contains(&n) {
                return Err((2, format!("degenerate needs 2 <= n <= 6, got {n}")));
            }
            let k = k.or(file.k).unwrap_or(3.min(n - 1));
            if k < 1 || k >= n {
                return Err((2, format!("degenerate needs 1 <= k < n, got k={k}")));
            }
            let iset_str = iset.clone().or_else(|| file.iset.clone());
            let iset = match &iset_str {
                Some(s) => parse_iset(s, n).map_err(|e| (2u8, e.0))?,
                None => (0..k).collect(),
            };
            if iset.len() < k {
                return Err((
                    2,
                    format!("iset must have at least k = {k} indices, got {}", iset.len()),
                ));
            }
            let delta = delta.or(file.delta).unwrap_or(1e-3);
            if !(delta.is_finite() && delta > 0.0 && delta < 0.1) {
                return Err((
                    2,
                    format!("delta must lie in (0, 0.1) for the scale separation, got {delta}"),
                ));
            }
            let tol = tol_opt.unwrap_or(DEFAULT_DEGENERATION_TOL);
            config.subcommand = "degenerate".to_string();
            config.tol = tol;
            config.n = Some(n);
            config.k = Some(k);
            config.index_set = Some(iset.iter().map(|i| i + 1).collect());
            config.delta = Some(delta);
            default_out = "degenerate-report.json";
            run_degenerate(n, k, &iset, delta, seed, tol, jobs).map_err(|e| (3u8, e.0))?
        }
    };

    let out_path = cli
        .out
        .clone()
        .or_else(|| file.out.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(default_out));
    config.out = out_path.display().to_string();
    Ok((config, output))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (config, output) = match run(cli) {
        Ok(v) => v,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(code);
        }
    };

    let pass = output.summaries.iter().all(|s| s.pass);
    let timestamp_unix = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let report = Report {
        version: fkdunkl::VERSION,
        schema: SCHEMA_VERSION,
        timestamp_unix,
        config: config.clone(),
        summaries: output.summaries.clone(),
        checks: output.checks.clone(),
        operator_reports: output.operator_reports.clone(),
        degeneration: output.degeneration.clone(),
        hilbert: output.hilbert.as_ref().map(|h| HilbertOut {
            root_type: h.root_type.clone(),
            degrees: h
                .degrees
                .iter()
                .map(|d| DegreeRank {
                    d: d.d,
                    rank: d.rank,
                    method: d.method,
                })
                .collect(),
        }),
        pass,
    };
    let out_path = PathBuf::from(&config.out);
    if let Err(e) = write_report_atomic(&out_path, &report) {
        eprintln!("error: {}", e.0);
        return ExitCode::from(3);
    }

    print_summary(&output);
    println!(
        "overall: {} (report: {})",
        if pass { "PASS" } else { "FAIL" },
        out_path.display()
    );
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

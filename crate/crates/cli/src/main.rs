use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use pencil_core::basechange::{
    isotriviality_invariants, semistable_slope, stabilizing_invariants, BaseChangeSpec, FibrationLedger,
};
use pencil_core::checks::{canonical_class_checks, fiber_checks, slope_checks, CheckReport};
use pencil_core::curvealg::{embedded_resolution, parse_germ, LocalInvariants};
use pencil_core::fiber::{analyze_at_degree, FiberAnalysis, FiberConfig};
use pencil_core::quotsing::resolve_cyclic;
use pencil_core::sstable::{verify_c2, verify_remark_beta};
use pencil_core::{Error, Rational};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "pencil", version, about = "Exact invariants of singular fibers and base changes")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Treat warnings as errors.
    #[arg(long, global = true)]
    strict: bool,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Local invariants and embedded resolution of a plane curve germ.
    Germ { expr: String },
    /// Resolution of the cyclic quotient singularity z^D = x^A y^B.
    Hj { d: u64, a: u64, b: u64 },
    /// Invariants and checks of a fiber configuration.
    Fiber {
        file: PathBuf,
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Pullback and semistable dual graphs of a fiber.
    Sstable {
        file: PathBuf,
        #[arg(long)]
        degree: Option<u64>,
    },
    /// Invariants of a base change of a fibration.
    Basechange { ledger: PathBuf, spec: PathBuf },
    /// Isotriviality invariants and slope checks of a fibration ledger.
    Ledger { file: PathBuf },
    /// Full certificate for fiber configurations and ledgers.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Evaluate every fiber configuration (*.json, *.fib) in a directory.
    Corpus { dir: PathBuf },
}

/// Outcome of one command.
struct Report {
    text: String,
    data: Value,
    failed: bool,
    warnings: Vec<String>,
}

enum CliError {
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn in_file<T>(path: &Path, r: pencil_core::Result<T>) -> CliResult<T> {
    r.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn decimal(r: &Option<Rational>) -> String {
    r.as_ref().map_or_else(|| "undefined".to_string(), |v| format!("{v} (~{})", v.to_decimal(6)))
}

fn germ(expr: &str) -> CliResult<Report> {
    let g = parse_germ(expr)?;
    let report = embedded_resolution(&g)?;
    let inv = LocalInvariants::from_report(&g, &report)?;
    let mut text = String::new();
    let _ = writeln!(text, "germ: {g}");
    let _ = writeln!(
        text,
        "alpha={} mu={} delta={} k={} beta={} nu={}",
        inv.alpha, inv.mu, inv.delta, inv.k, inv.beta, inv.nu
    );
    let _ = writeln!(text, "blow-ups: {}", report.steps.len());
    for (i, s) in report.steps.iter().enumerate() {
        let _ = writeln!(
            text,
            "  E{i}: center ({}, {}) chart {} m={} m*={}",
            s.center.0, s.center.1, s.chart, s.m, s.m_star
        );
    }
    let nodes: Vec<String> = report.nodes.iter().map(|n| format!("({},{})", n.a, n.b)).collect();
    let _ = writeln!(text, "nodes: {}", nodes.join(" "));
    Ok(Report {
        text,
        data: json!({ "germ": g.to_string(), "invariants": to_value(&inv), "resolution": to_value(&report) }),
        failed: false,
        warnings: g.warnings(),
    })
}

fn hj(d: u64, a: u64, b: u64) -> CliResult<Report> {
    let c = resolve_cyclic(d, a, b)?;
    let mut text = String::new();
    let _ = writeln!(text, "z^{d} = x^{a} y^{b}");
    let _ = writeln!(
        text,
        "points: {}  reduced: ({}, {}, {})",
        c.copies, c.reduced.0, c.reduced.1, c.reduced.2
    );
    if let Some((q, qp)) = c.q {
        let _ = writeln!(text, "q = {q}  q' = {qp}");
    }
    for (i, chain) in c.chains.iter().enumerate() {
        let kind = if chain.is_empty() {
            "smooth".to_string()
        } else if chain.iter().all(|&s| s == -2) {
            format!("A{}", chain.len())
        } else {
            "non-RDP".to_string()
        };
        let _ = writeln!(text, "chain {i}: {chain:?} ({kind})");
    }
    let _ = writeln!(text, "K^2 = {}", c.k2);
    Ok(Report {
        text,
        data: to_value(&c),
        failed: false,
        warnings: Vec::new(),
    })
}

fn load_fiber(path: &Path) -> CliResult<FiberConfig> {
    in_file(path, FiberConfig::from_json(&read(path)?))
}

fn fiber_text(a: &FiberAnalysis) -> String {
    let i = &a.invariants;
    let mut t = String::new();
    let _ = writeln!(t, "c1^2 = {}", i.c1sq);
    let _ = writeln!(t, "c2 = {}", i.c2);
    let _ = writeln!(t, "chi = {}", i.chi);
    let _ = writeln!(t, "lambda = {}", decimal(&i.lambda));
    let _ = writeln!(t, "c_-1 = {}", i.c_minus1);
    let _ = writeln!(
        t,
        "g = {}  N = {}  e = {}  mu = {}  F_red^2 = {}  p_a(F_red) = {}  M = {}",
        i.genus, i.n, i.e, i.mu_total, i.fred_sq, i.pa_red, i.m
    );
    let _ = writeln!(t, "sum alpha = {}  sum beta = {}  semistable = {}", i.alpha_total, i.beta_total, i.semistable);
    t
}

fn fiber(path: &Path, degree: Option<u64>) -> CliResult<Report> {
    let cfg = load_fiber(path)?;
    let a = in_file(path, analyze_at_degree(&cfg, degree))?;
    let checks = fiber_checks(&a);
    let text = format!("{}\nchecks:\n{}", fiber_text(&a), checks);
    Ok(Report {
        text,
        data: json!({ "invariants": to_value(&a.invariants), "checks": to_value(&checks) }),
        failed: checks.failed(),
        warnings: a.resolved.warnings.clone(),
    })
}

fn sstable(path: &Path, degree: Option<u64>) -> CliResult<Report> {
    let cfg = load_fiber(path)?;
    let a = in_file(path, analyze_at_degree(&cfg, degree))?;
    let m = &a.model;
    let c2 = verify_c2(m, &a.basics);
    let beta = verify_remark_beta(&a.resolved, m);
    let mut text = String::new();
    let _ = writeln!(text, "degree {}", m.degree);
    let _ = writeln!(text, "# pullback graph\n{}", m.cover);
    let _ = writeln!(text, "# semistable model\n{}", m.graph);
    let _ = writeln!(text, "contracted (-1)-curves: {}", m.contractions);
    let _ = writeln!(text, "c_-1 = {}", m.c_minus1);
    let _ = writeln!(text, "nodes of the semistable fiber: {}", m.e_count);
    let _ = writeln!(text, "c2 from the pullback = {}", c2);
    if let Some(b) = &beta {
        let _ = writeln!(text, "beta over contracted nodes = {b}");
    }
    let failed = c2 != a.invariants.c2 || beta.as_ref().is_some_and(|b| *b != m.c_minus1);
    Ok(Report {
        text,
        data: json!({
            "degree": m.degree,
            "cover": { "graph": m.cover.to_text(), "vertices": to_value(&m.cover.vertices), "edges": to_value(&m.cover.edges) },
            "model": { "graph": m.graph.to_text(), "vertices": to_value(&m.graph.vertices), "edges": to_value(&m.graph.edges) },
            "contractions": m.contractions,
            "c_minus1": to_value(&m.c_minus1),
            "e_count": m.e_count,
            "c2_from_pullback": to_value(&c2),
            "beta_contracted": to_value(&beta),
        }),
        failed,
        warnings: a.resolved.warnings.clone(),
    })
}

fn load_ledger(path: &Path) -> CliResult<FibrationLedger> {
    in_file(path, FibrationLedger::from_json(&read(path)?))
}

fn basechange(ledger: &Path, spec: &Path) -> CliResult<Report> {
    let l = load_ledger(ledger)?;
    let s = in_file(spec, BaseChangeSpec::from_json(&read(spec)?))?;
    let bc = in_file(spec, stabilizing_invariants(&l, &s))?;
    let mut text = String::new();
    let _ = writeln!(text, "degree = {}", bc.degree);
    let _ = writeln!(text, "K^2_pi = {}", bc.k2_pi);
    let _ = writeln!(text, "e_pi = {}", bc.e_pi);
    let _ = writeln!(text, "chi_pi = {}", bc.chi_pi);
    let _ = writeln!(text, "lambda_pi = {}", decimal(&bc.lambda_pi));
    let _ = writeln!(text, "stabilizing = {}  invariant = {}", bc.stabilizing, bc.invariant);
    Ok(Report {
        text,
        data: to_value(&bc),
        failed: false,
        warnings: Vec::new(),
    })
}

fn ledger(path: &Path) -> CliResult<Report> {
    let l = load_ledger(path)?;
    let iso = in_file(path, isotriviality_invariants(&l))?;
    let slope = semistable_slope(&l).ok();
    let checks = slope_checks(&l);
    let mut text = String::new();
    let _ = writeln!(text, "I_K = {}", iso.i_k);
    let _ = writeln!(text, "I_chi = {}", iso.i_chi);
    let _ = writeln!(text, "I_e = {}", iso.i_e);
    let _ = writeln!(text, "isotrivial = {}", iso.isotrivial);
    let _ = writeln!(text, "lambda_f = {}", decimal(&l.lambda()));
    let _ = writeln!(text, "semistable slope = {}", decimal(&slope));
    let _ = write!(text, "\nchecks:\n{checks}");
    Ok(Report {
        text,
        data: json!({
            "isotriviality": to_value(&iso),
            "lambda_f": to_value(&l.lambda()),
            "semistable_slope": to_value(&slope),
            "checks": to_value(&checks),
        }),
        failed: checks.failed(),
        warnings: Vec::new(),
    })
}

fn is_ledger(text: &str) -> bool {
    serde_json::from_str::<Value>(text).is_ok_and(|v| v.get("K2_f").is_some())
}

fn check(files: &[PathBuf]) -> CliResult<Report> {
    let mut text = String::new();
    let mut items = Vec::new();
    let mut failed = false;
    let mut warnings = Vec::new();
    for path in files {
        let content = read(path)?;
        let (kind, checks) = if is_ledger(&content) {
            let l = in_file(path, FibrationLedger::from_json(&content))?;
            let mut rep = slope_checks(&l);
            rep.extend(canonical_class_checks(&l));
            ("ledger", rep)
        } else {
            let cfg = in_file(path, FiberConfig::from_json(&content))?;
            let a = in_file(path, analyze_at_degree(&cfg, None))?;
            warnings.extend(a.resolved.warnings.iter().cloned());
            ("fiber", fiber_checks(&a))
        };
        failed |= checks.failed();
        let verdict = if checks.failed() { "FAIL" } else { "ok" };
        let _ = writeln!(text, "== {} ({kind}): {verdict}\n{checks}", path.display());
        items.push(json!({ "file": path.display().to_string(), "kind": kind, "checks": to_value(&checks) }));
    }
    Ok(Report {
        text,
        data: json!({ "certificates": items }),
        failed,
        warnings,
    })
}

struct CorpusRow {
    path: String,
    outcome: std::result::Result<(FiberAnalysis, CheckReport), String>,
}

fn corpus(dir: &Path) -> CliResult<(Report, bool)> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| matches!(p.extension().and_then(|e| e.to_str()), Some("json" | "fib")))
        .collect();
    paths.sort();
    let rows: Vec<CorpusRow> = paths
        .par_iter()
        .map(|p| {
            let outcome = fs::read_to_string(p)
                .map_err(|e| e.to_string())
                .and_then(|s| FiberConfig::from_json(&s).map_err(|e| e.to_string()))
                .and_then(|cfg| analyze_at_degree(&cfg, None).map_err(|e| e.to_string()))
                .map(|a| {
                    let c = fiber_checks(&a);
                    (a, c)
                });
            CorpusRow {
                path: p.display().to_string(),
                outcome,
            }
        })
        .collect();
    let mut text = format!("{:<48} {:>3} {:>10} {:>10} {:>10} {:>10}  status\n", "file", "g", "c1^2", "c2", "chi", "c_-1");
    let mut items = Vec::new();
    let (mut failed, mut input_error) = (false, false);
    let (mut ok_count, mut fail_count, mut err_count) = (0, 0, 0);
    for row in &rows {
        match &row.outcome {
            Ok((a, c)) => {
                let i = &a.invariants;
                let status = if c.failed() {
                    fail_count += 1;
                    failed = true;
                    "FAIL"
                } else {
                    ok_count += 1;
                    "ok"
                };
                let _ = writeln!(
                    text,
                    "{:<48} {:>3} {:>10} {:>10} {:>10} {:>10}  {status}",
                    row.path,
                    i.genus,
                    i.c1sq.to_string(),
                    i.c2.to_string(),
                    i.chi.to_string(),
                    i.c_minus1.to_string()
                );
                items.push(json!({ "file": row.path, "invariants": to_value(i), "checks": to_value(c) }));
            }
            Err(e) => {
                err_count += 1;
                input_error = true;
                let _ = writeln!(text, "{:<48} error: {e}", row.path);
                items.push(json!({ "file": row.path, "error": e }));
            }
        }
    }
    let _ = writeln!(text, "\n{} files: {ok_count} ok, {fail_count} failed checks, {err_count} errors", rows.len());
    Ok((
        Report {
            text,
            data: json!({ "files": items, "summary": { "ok": ok_count, "failed": fail_count, "errors": err_count } }),
            failed,
            warnings: Vec::new(),
        },
        input_error,
    ))
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Germ { .. } => "germ",
        Command::Hj { .. } => "hj",
        Command::Fiber { .. } => "fiber",
        Command::Sstable { .. } => "sstable",
        Command::Basechange { .. } => "basechange",
        Command::Ledger { .. } => "ledger",
        Command::Check { .. } => "check",
        Command::Corpus { .. } => "corpus",
    }
}

fn run(cli: &Cli) -> CliResult<(Report, bool)> {
    let report = match &cli.command {
        Command::Germ { expr } => germ(expr)?,
        Command::Hj { d, a, b } => hj(*d, *a, *b)?,
        Command::Fiber { file, degree } => fiber(file, *degree)?,
        Command::Sstable { file, degree } => sstable(file, *degree)?,
        Command::Basechange { ledger: l, spec } => basechange(l, spec)?,
        Command::Ledger { file } => ledger(file)?,
        Command::Check { files } => check(files)?,
        Command::Corpus { dir } => return corpus(dir),
    };
    Ok((report, false))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, input_error) = match run(&cli) {
        Ok(r) => r,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if cli.strict && !report.warnings.is_empty() {
        eprintln!("error: warnings are errors under --strict");
        return ExitCode::from(2);
    }
    let body = match cli.format {
        Format::Text => report.text.clone(),
        Format::Structured => {
            let v = json!({
                "version": SCHEMA_VERSION,
                "command": command_name(&cli.command),
                "result": report.data,
                "failed": report.failed,
                "warnings": report.warnings,
            });
            serde_json::to_string_pretty(&v).expect("json") + "\n"
        }
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = fs::write(p, &body) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    if input_error {
        ExitCode::from(2)
    } else if report.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

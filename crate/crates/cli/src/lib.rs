//! Argument parsing and dispatch for the `ramanujan` binary. `run` is the
//! whole program minus process exit, so tests can drive it in-process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ramanujan::conjectures::{builtin_registry, find, parse_registry, verify_conjecture};
use ramanujan::constants::{reference_constant, Constant, MAX_REFERENCE_DIGITS};
use ramanujan::contfrac::{eval_cf, simple_cf_decimal, CfSpec, Poly, Terms};
use ramanujan::fir::{estimate_periods, fir_decompose, Signal};
use ramanujan::graph::{is_connected, Graph};
use ramanujan::lps::build_lps;
use ramanujan::pi::{compute, correct_digits, digits_per_term, pi_chudnovsky, PiMethod};
use ramanujan::selftest::{Level, Selftest};
use ramanujan::spectral::spectral_report;
use ramanujan::sums::{rf_partial_sum, rf_target, sum_table, RfFunction};
use ramanujan::tau::{check_tau_bound, tau_coefficients};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ramanujan", version, about = "Pi series, Ramanujan graphs, continued fractions and Ramanujan sums")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute π by one of four series.
    Pi(PiArgs),
    /// Build or check LPS Ramanujan graphs.
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Continued fractions and the conjecture registry.
    #[command(subcommand)]
    Cf(CfCommand),
    /// Ramanujan sums, Ramanujan-Fourier series and the τ-function.
    #[command(subcommand)]
    Sums(SumsCommand),
    /// Ramanujan FIR decomposition of periodic signals.
    #[command(subcommand)]
    Signal(SignalCommand),
    /// Run the built-in checks of the paper's worked examples.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Madhava,
    Machin,
    Ramanujan,
    Chudnovsky,
}

impl From<MethodArg> for PiMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Madhava => PiMethod::Madhava,
            MethodArg::Machin => PiMethod::Machin,
            MethodArg::Ramanujan => PiMethod::Ramanujan,
            MethodArg::Chudnovsky => PiMethod::Chudnovsky,
        }
    }
}

#[derive(Args, Debug)]
struct PiArgs {
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long)]
    digits: u32,
    /// Number of series terms (required to pin Madhava's partial sum).
    #[arg(long)]
    terms: Option<usize>,
    /// Also report correct digits and digits per term.
    #[arg(long)]
    report_convergence: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum GraphCommand {
    /// Construct X^{p,q} and verify its spectrum.
    Build {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Write the edge list here and the metadata to FILE.json.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify an edge-list file.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CfCommand {
    /// Evaluate a0 + b1/(a1 + b2/(a2 + ...)) with polynomial terms.
    Eval {
        /// a_n coefficients, highest power first.
        #[arg(long, allow_hyphen_values = true)]
        a_poly: String,
        /// b_n coefficients, highest power first.
        #[arg(long, allow_hyphen_values = true)]
        b_poly: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        a0: i64,
        #[arg(long)]
        digits: u32,
        #[arg(long, default_value_t = 1000)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Simple continued fraction of a named constant.
    Expand {
        #[arg(long)]
        constant: String,
        #[arg(long)]
        terms: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check a registry conjecture against the constant it names.
    Verify {
        #[arg(long)]
        name: String,
        #[arg(long)]
        digits: u32,
        #[arg(long)]
        json: bool,
        /// Registry file to use instead of the built-in one.
        #[arg(long)]
        registry: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum SumsCommand {
    /// c_q(0), ..., c_q(n - 1).
    Table {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// τ(1), ..., τ(max).
    Tau {
        #[arg(long)]
        max: usize,
        /// Check |τ(p)| ≤ 2 p^(11/2) for the primes in range.
        #[arg(long)]
        check_bound: bool,
        #[arg(long)]
        json: bool,
    },
    /// Partial sum of the Ramanujan-Fourier series of d(n) or σ(n).
    Rf {
        #[arg(long)]
        func: String,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 10_000)]
        terms: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand, Debug)]
enum SignalCommand {
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    Periods {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        top: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
    level: LevelArg,
    #[arg(long)]
    json: bool,
    /// Corrupt an input table to exercise the harness (`table-c6`).
    #[arg(long, hide = true)]
    inject_fault: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

/// Failure of a single invocation.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(String),
    /// Output already written; only the exit code is left to report.
    Checks,
}

impl From<ramanujan::Error> for Failure {
    fn from(e: ramanujan::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parse `argv` (program name first), execute, and return the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Checks) => EXIT_DOMAIN,
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Pi(args) => pi(args, out),
        Command::Graph(cmd) => graph(cmd, out),
        Command::Cf(cmd) => cf(cmd, out),
        Command::Sums(cmd) => sums(cmd, out),
        Command::Signal(cmd) => signal(cmd, out),
        Command::Selftest(args) => selftest(args, out),
    }
}

fn emit(out: &mut dyn Write, text: impl std::fmt::Display) -> Outcome {
    writeln!(out, "{text}").map_err(|e| Failure::Domain(format!("cannot write output: {e}")))
}

fn emit_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Domain(e.to_string()))?;
    emit(out, text)
}

fn read_file(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

fn pi(args: PiArgs, out: &mut dyn Write) -> Outcome {
    let method = PiMethod::from(args.method);
    let result = compute(method, args.digits, args.terms)?;
    let mut report = json!({
        "method": method,
        "digits": args.digits,
        "terms_used": result.terms_used,
        "value": result.value.to_string(),
    });
    if args.report_convergence {
        let reference = pi_chudnovsky(args.digits + 10)?;
        let correct = correct_digits(&result.value, &reference).min(args.digits as f64);
        report["correct_digits"] = json!(round3(correct));
        // measured on the unrounded partial sum; Machin's formula has no single series
        report["digits_per_term"] = match digits_per_term(method, result.terms_used) {
            Ok(d) if method != PiMethod::Machin => json!(round3(d)),
            _ => Value::Null,
        };
    }
    if args.json {
        emit_json(out, &report)
    } else {
        emit(out, &result.value)
    }
}

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

fn graph(cmd: GraphCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        GraphCommand::Build { p, q, out: path } => {
            let lps = build_lps(p, q)?;
            let sidecar = lps.sidecar();
            if let Some(path) = path {
                write_file(&path, &lps.graph.to_edge_list())?;
                let mut meta = path.clone().into_os_string();
                meta.push(".json");
                let text = serde_json::to_string_pretty(&sidecar).map_err(|e| Failure::Domain(e.to_string()))?;
                write_file(Path::new(&meta), &format!("{text}\n"))?;
            }
            emit_json(out, &sidecar)
        }
        GraphCommand::Check { input, degree } => {
            let graph = Graph::parse_edge_list(&read_file(&input)?)?;
            let regular = graph.regular_degree() == Some(degree);
            let connected = is_connected(&graph)?;
            let mut report = json!({
                "vertices": graph.num_vertices(),
                "degree": degree,
                "regular": regular,
                "connected": connected,
            });
            let mut ok = regular && connected;
            if regular {
                let spectrum = spectral_report(&graph, degree)?;
                ok &= spectrum.is_ramanujan;
                report["lambda"] = json!(spectrum.lambda);
                report["lambda_nontrivial"] = json!(spectrum.lambda_nontrivial);
                report["bound"] = json!(spectrum.bound);
                report["bipartite"] = json!(spectrum.bipartite);
                report["is_ramanujan"] = json!(spectrum.is_ramanujan);
            }
            report["passed"] = json!(ok);
            emit_json(out, &report)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Checks)
            }
        }
    }
}

fn cf(cmd: CfCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        CfCommand::Eval { a_poly, b_poly, a0, digits, depth, json } => {
            let a = Poly::parse(&a_poly).map_err(|e| Failure::Usage(format!("--a-poly: {e}")))?;
            let b = Poly::parse(&b_poly).map_err(|e| Failure::Usage(format!("--b-poly: {e}")))?;
            let spec = CfSpec::new(a0, Terms::poly(a), Terms::poly(b), depth)?;
            let v = eval_cf(&spec, digits)?;
            if json {
                emit_json(
                    out,
                    &json!({
                        "value": v.value.to_string(),
                        "digits": digits,
                        "depth": v.depth,
                        "error_estimate": v.error_estimate.to_scientific(3),
                    }),
                )
            } else {
                emit(out, &v.value)
            }
        }
        CfCommand::Expand { constant, terms, json } => {
            let c: Constant = constant.parse()?;
            // a term costs about one digit on average; keep a wide margin
            let digits = (2 * terms as u32 + 30).min(MAX_REFERENCE_DIGITS);
            let x = reference_constant(c, digits)?;
            let expansion = simple_cf_decimal(&x, terms);
            let list: Vec<String> = expansion.terms.iter().map(|t| t.to_string()).collect();
            if json {
                emit_json(
                    out,
                    &json!({
                        "constant": c,
                        "terms": list.iter().map(|t| serde_json::from_str(t).unwrap()).collect::<Vec<serde_json::Value>>(),
                        "truncated": expansion.truncated,
                    }),
                )
            } else {
                emit(out, list.join(","))
            }
        }
        CfCommand::Verify { name, digits, json, registry } => {
            let records = match registry {
                Some(path) => parse_registry(&read_file(&path)?)?,
                None => builtin_registry(),
            };
            let record = find(&records, &name)?;
            let v = verify_conjecture(record, digits)?;
            if json {
                emit_json(out, &v)
            } else {
                emit(
                    out,
                    format!(
                        "{} match={} abs_error={} depth_used={} method={}",
                        v.name,
                        v.matched,
                        v.abs_error.to_scientific(3),
                        v.depth_used,
                        format!("{:?}", v.method).to_lowercase(),
                    ),
                )
            }
        }
    }
}

fn sums(cmd: SumsCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        SumsCommand::Table { q, n, json } => {
            let values = sum_table(q, n)?;
            if json {
                emit_json(out, &json!({ "q": q, "values": values }))
            } else {
                let list: Vec<String> = values.iter().map(|v| v.to_string()).collect();
                emit(out, list.join(" "))
            }
        }
        SumsCommand::Tau { max, check_bound, json } => {
            let tau = tau_coefficients(max)?;
            let bound = if check_bound { Some(check_tau_bound(max as u64)?) } else { None };
            if json {
                let values: Vec<String> = tau.iter().map(|t| t.to_string()).collect();
                emit_json(out, &json!({ "max": max, "tau": values, "bound": bound }))?;
            } else {
                for (i, t) in tau.iter().enumerate() {
                    emit(out, format!("{} {t}", i + 1))?;
                }
                if let Some(b) = &bound {
                    emit(
                        out,
                        format!(
                            "bound holds={} primes={} max_ratio={:.6} at p={}",
                            b.holds, b.primes_checked, b.max_ratio, b.max_ratio_prime
                        ),
                    )?;
                }
            }
            match bound {
                Some(b) if !b.holds => Err(Failure::Checks),
                _ => Ok(()),
            }
        }
        SumsCommand::Rf { func, n, terms, json } => {
            let f: RfFunction = func.parse().map_err(|e: ramanujan::Error| Failure::Usage(e.to_string()))?;
            let value = rf_partial_sum(f, n, terms)?;
            if json {
                emit_json(
                    out,
                    &json!({ "func": f, "n": n, "terms": terms, "value": value, "target": rf_target(f, n)? }),
                )
            } else {
                emit(out, value)
            }
        }
    }
}

#[derive(Serialize)]
struct ComponentOut {
    q: u64,
    energy_fraction: f64,
    samples: Vec<serde_json::Value>,
}

fn signal(cmd: SignalCommand, out: &mut dyn Write) -> Outcome {
    match cmd {
        SignalCommand::Decompose { input, json } => {
            let x: Signal = read_file(&input)?.parse()?;
            let d = fir_decompose(&x)?;
            let total = x.energy();
            let fraction = |e: f64| if total > 0.0 { e / total } else { 0.0 };
            if json {
                let real = x.is_real();
                let components: Vec<ComponentOut> = d
                    .components
                    .iter()
                    .map(|c| ComponentOut {
                        q: c.q,
                        energy_fraction: fraction(c.energy),
                        samples: c
                            .samples
                            .iter()
                            .map(|s| if real { json!(s.re) } else { json!([s.re, s.im]) })
                            .collect(),
                    })
                    .collect();
                emit_json(out, &json!({ "N": d.n, "components": components, "residual": d.residual_norm }))
            } else {
                for c in &d.components {
                    emit(out, format!("{} {:.6}", c.q, fraction(c.energy)))?;
                }
                Ok(())
            }
        }
        SignalCommand::Periods { input, top, json } => {
            let x: Signal = read_file(&input)?.parse()?;
            let ranked = estimate_periods(&x, top)?;
            if json {
                let periods: Vec<_> =
                    ranked.iter().map(|&(q, f)| json!({ "q": q, "energy_fraction": f })).collect();
                emit_json(out, &json!({ "N": x.len(), "periods": periods }))
            } else {
                for (q, f) in ranked {
                    emit(out, format!("{q} {f:.6}"))?;
                }
                Ok(())
            }
        }
    }
}

fn corrupted_table(q: u64, len: usize) -> ramanujan::Result<Vec<i64>> {
    let mut t = sum_table(q, len)?;
    if let Some(v) = t.get_mut(3) {
        *v += 1;
    }
    Ok(t)
}

fn selftest(args: SelftestArgs, out: &mut dyn Write) -> Outcome {
    let level = match args.level {
        LevelArg::Quick => Level::Quick,
        LevelArg::Full => Level::Full,
    };
    let mut harness = Selftest::new(level);
    match args.inject_fault.as_deref() {
        None => {}
        Some("table-c6") => harness = harness.with_sum_table(corrupted_table),
        Some(other) => return Err(Failure::Usage(format!("unknown fault `{other}`"))),
    }
    let report = harness.run();
    if args.json {
        emit_json(out, &report)?;
    } else {
        emit(out, &report)?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

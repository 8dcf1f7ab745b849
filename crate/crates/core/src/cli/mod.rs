//! The `cramer` command line.
//!
//! Exit codes: 0 success, 1 a check failed or methods disagreed, 2 bad input
//! or arguments, 3 singular system, 4 size guard exceeded, 5 output file
//! could not be written.

mod document;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub use document::{InputDocument, Mode, ParsedSystem};

use crate::algebra::{Polynomial, Scalar};
use crate::cramer::{big_x, leibniz_det, solve, verify_identity_all, LinearSystem};
use crate::error::Error;
use crate::involution::{build_certificate, check_fact1, check_fact2};
use crate::oracle::{bareiss_det, bareiss_solve, cofactor_det, COFACTOR_MAX_N};
use crate::perm::DEFAULT_MAX_N;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_GUARD: i32 = 4;
pub const EXIT_WRITE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "cramer",
    version,
    about = "Exact Cramer's rule by signed permutation sums"
)]
struct Cli {
    /// Largest system size any command will enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_N)]
    max_n: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a system given as a JSON document.
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check Σ_j a[i,j] X_j = b[i] X_0 for the generic system of size N.
    VerifyIdentity {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Check both facts and the pairing involution for one i.
    CheckInvolution {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        i: usize,
        #[arg(long, value_name = "FILE")]
        emit_certificate: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Determinant of the coefficient matrix of a JSON document.
    Det {
        #[arg(long)]
        input: PathBuf,
        /// Run only this method; by default every applicable one runs and must agree.
        #[arg(long, value_enum)]
        method: Option<Method>,
        #[arg(long)]
        json: bool,
    },
    /// Time the permutation sums against elimination on a random integer system.
    Bench {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Leibniz,
    Cofactor,
    Bareiss,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Leibniz => "leibniz",
            Method::Cofactor => "cofactor",
            Method::Bareiss => "bareiss",
        }
    }
}

/// A failure carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularSystem => EXIT_SINGULAR,
            Error::SizeGuard { .. } => EXIT_GUARD,
            _ => EXIT_PARSE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let max_n = cli.max_n;
    let result = match cli.command {
        Command::Solve { input, json } => cmd_solve(&input, json, max_n, out),
        Command::VerifyIdentity { n, i, json } => cmd_verify_identity(n, i, json, max_n, out),
        Command::CheckInvolution {
            n,
            i,
            emit_certificate,
            json,
        } => cmd_check_involution(n, i, emit_certificate.as_deref(), json, max_n, out),
        Command::Det {
            input,
            method,
            json,
        } => cmd_det(&input, method, json, max_n, out),
        Command::Bench {
            n,
            seed,
            reps,
            json,
        } => cmd_bench(n, seed, reps, json, max_n, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.code
        }
    }
}

fn guard(n: usize, max_n: usize) -> std::result::Result<(), Failure> {
    if n == 0 || n > max_n {
        return Err(Error::SizeGuard { n, max_n }.into());
    }
    Ok(())
}

fn load(path: &Path, max_n: usize) -> std::result::Result<ParsedSystem, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| fail(EXIT_PARSE, format!("cannot read {}: {e}", path.display())))?;
    let doc = InputDocument::from_json(&text)?;
    if doc.n > max_n {
        return Err(Error::SizeGuard { n: doc.n, max_n }.into());
    }
    Ok(doc.to_system()?)
}

fn emit(out: &mut dyn Write, text: &str) -> std::result::Result<(), Failure> {
    writeln!(out, "{text}").map_err(|e| fail(EXIT_WRITE, format!("cannot write output: {e}")))
}

fn emit_json(out: &mut dyn Write, v: &Value) -> std::result::Result<(), Failure> {
    emit(
        out,
        &serde_json::to_string_pretty(v).expect("json values serialize"),
    )
}

fn cmd_solve(input: &Path, json: bool, max_n: usize, out: &mut dyn Write) -> Outcome {
    match load(input, max_n)? {
        ParsedSystem::Rational(sys) => {
            let sol = solve(&sys)?;
            if json {
                emit_json(
                    out,
                    &json!({
                        "mode": "rational",
                        "n": sys.n(),
                        "X0": sol.denominator.to_string(),
                        "X": strings(&sol.numerators),
                        "x": strings(&sol.quotients),
                    }),
                )?;
            } else {
                let parts: Vec<String> = sol
                    .quotients
                    .iter()
                    .enumerate()
                    .map(|(k, x)| format!("x{} = {x}", k + 1))
                    .collect();
                emit(out, &parts.join(", "))?;
            }
        }
        ParsedSystem::Symbolic(sys) => {
            let sol = solve(&sys)?;
            if json {
                let x: Vec<Value> = sol
                    .quotients
                    .iter()
                    .map(|(num, den)| json!({"numerator": num.to_string(), "denominator": den.to_string()}))
                    .collect();
                emit_json(
                    out,
                    &json!({
                        "mode": "symbolic",
                        "n": sys.n(),
                        "X0": sol.denominator.to_string(),
                        "X": strings(&sol.numerators),
                        "x": x,
                    }),
                )?;
            } else {
                emit(out, &format!("X0 = {}", sol.denominator))?;
                for (k, (num, den)) in sol.quotients.iter().enumerate() {
                    emit(out, &format!("x{} = ({num}) / ({den})", k + 1))?;
                }
            }
        }
    }
    Ok(EXIT_OK)
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_verify_identity(
    n: usize,
    i: Option<usize>,
    json: bool,
    max_n: usize,
    out: &mut dyn Write,
) -> Outcome {
    guard(n, max_n)?;
    if let Some(i) = i {
        if i == 0 || i > n {
            return Err(fail(
                EXIT_PARSE,
                format!("--i must lie in 1..={n}, got {i}"),
            ));
        }
    }
    let sys = LinearSystem::generic(n)?;
    let reports: Vec<_> = verify_identity_all(&sys)
        .into_iter()
        .filter(|r| i.is_none_or(|want| r.i == want))
        .collect();
    let all = reports.iter().all(|r| r.holds);
    if json {
        let results: Vec<Value> = reports
            .iter()
            .map(|r| {
                json!({
                    "i": r.i,
                    "holds": r.holds,
                    "terms": r.rhs.len(),
                    "lhs": r.lhs.to_string(),
                    "rhs": r.rhs.to_string(),
                })
            })
            .collect();
        emit_json(out, &json!({"n": n, "all_pass": all, "results": results}))?;
    } else {
        for r in &reports {
            emit(
                out,
                &format!(
                    "i={}: {} ({} terms per side)",
                    r.i,
                    pass(r.holds),
                    r.rhs.len()
                ),
            )?;
        }
    }
    Ok(if all { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cmd_check_involution(
    n: usize,
    i: usize,
    certificate: Option<&Path>,
    json: bool,
    max_n: usize,
    out: &mut dyn Write,
) -> Outcome {
    guard(n, max_n)?;
    if i == 0 || i > n {
        return Err(fail(
            EXIT_PARSE,
            format!("--i must lie in 1..={n}, got {i}"),
        ));
    }
    let sys = LinearSystem::generic(n)?;
    let f1 = check_fact1(&sys, i)?;
    let f2 = check_fact2(&sys, i)?;
    let mut cert_summary = None;
    let mut cert_ok = true;
    if let Some(path) = certificate {
        let cert = build_certificate(&sys, i)?;
        let check = cert.validate();
        cert_ok = check.is_ok();
        let body = serde_json::to_string_pretty(&cert).expect("certificate serializes");
        fs::write(path, body + "\n")
            .map_err(|e| fail(EXIT_WRITE, format!("cannot write {}: {e}", path.display())))?;
        cert_summary = Some((cert.good.len(), cert.bad_pairs.len(), check.err()));
    }
    let all = f1.holds && f2.holds && cert_ok;
    if json {
        let mut v = json!({
            "n": n,
            "i": i,
            "fact1": {
                "holds": f1.holds,
                "good": f1.good_count,
                "elementwise_failures": f1.elementwise_failures.len(),
            },
            "fact2": {
                "holds": f2.holds,
                "bad": f2.bad_count,
                "pairs": f2.bad_count / 2,
                "fixed_points": f2.fixed_points.len(),
                "image_not_bad": f2.image_not_bad.len(),
                "not_involutive": f2.not_involutive.len(),
                "even_parity": f2.even_parity.len(),
                "not_canceling": f2.not_canceling.len(),
                "sum_is_zero": f2.sum.is_zero(),
            },
            "all_pass": all,
        });
        if let (Some((good, pairs, problem)), Some(path)) = (&cert_summary, certificate) {
            v["certificate"] = json!({
                "path": path.display().to_string(),
                "good": good,
                "pairs": pairs,
                "valid": problem.is_none(),
            });
        }
        emit_json(out, &v)?;
    } else {
        emit(
            out,
            &format!(
                "fact 1: {} (good = {}, elementwise failures = {})",
                pass(f1.holds),
                f1.good_count,
                f1.elementwise_failures.len()
            ),
        )?;
        emit(
            out,
            &format!(
                "fact 2: {} (bad = {}, pairs = {}, fixed points = {}, image not bad = {}, not involutive = {}, even parity = {}, not canceling = {}, sum zero = {})",
                pass(f2.holds),
                f2.bad_count,
                f2.bad_count / 2,
                f2.fixed_points.len(),
                f2.image_not_bad.len(),
                f2.not_involutive.len(),
                f2.even_parity.len(),
                f2.not_canceling.len(),
                f2.sum.is_zero()
            ),
        )?;
        if let (Some((good, pairs, problem)), Some(path)) = (&cert_summary, certificate) {
            emit(
                out,
                &format!(
                    "certificate: {} ({good} good, {pairs} pairs) -> {}",
                    pass(problem.is_none()),
                    path.display()
                ),
            )?;
            if let Some(p) = problem {
                emit(out, &format!("  {p}"))?;
            }
        }
        emit(out, pass(all))?;
    }
    Ok(if all { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn det_results<S: Scalar>(
    m: &[Vec<S>],
    sys: &LinearSystem<S>,
    methods: &[Method],
    bareiss: impl Fn() -> S,
) -> std::result::Result<Vec<(Method, S)>, Failure> {
    methods
        .iter()
        .map(|&method| {
            let value = match method {
                Method::Leibniz => leibniz_det(m),
                Method::Cofactor => cofactor_det(sys)?,
                Method::Bareiss => bareiss(),
            };
            Ok((method, value))
        })
        .collect()
}

fn cmd_det(
    input: &Path,
    method: Option<Method>,
    json: bool,
    max_n: usize,
    out: &mut dyn Write,
) -> Outcome {
    let parsed = load(input, max_n)?;
    let n = parsed.n();
    let numeric = matches!(parsed, ParsedSystem::Rational(_));
    let methods: Vec<Method> = match method {
        Some(Method::Bareiss) if !numeric => {
            return Err(fail(EXIT_PARSE, "bareiss needs a rational-mode document"));
        }
        Some(m) => vec![m],
        None => [Method::Leibniz, Method::Cofactor, Method::Bareiss]
            .into_iter()
            .filter(|&m| match m {
                Method::Leibniz => true,
                Method::Cofactor => n <= COFACTOR_MAX_N,
                Method::Bareiss => numeric,
            })
            .collect(),
    };
    let rendered: Vec<(Method, String)> = match &parsed {
        ParsedSystem::Rational(sys) => {
            det_results(sys.entries(), sys, &methods, || bareiss_det(sys.entries()))?
                .into_iter()
                .map(|(m, v)| (m, v.to_string()))
                .collect()
        }
        ParsedSystem::Symbolic(sys) => det_results(sys.entries(), sys, &methods, Polynomial::zero)?
            .into_iter()
            .map(|(m, v)| (m, v.to_string()))
            .collect(),
    };
    let agree = rendered.windows(2).all(|w| w[0].1 == w[1].1);
    if json {
        let values: serde_json::Map<String, Value> = rendered
            .iter()
            .map(|(m, v)| (m.name().to_string(), Value::String(v.clone())))
            .collect();
        emit_json(out, &json!({"n": n, "determinant": values, "agree": agree}))?;
    } else {
        for (m, v) in &rendered {
            emit(out, &format!("{}: {v}", m.name()))?;
        }
        if rendered.len() > 1 {
            emit(out, &format!("agree: {}", if agree { "yes" } else { "no" }))?;
        }
    }
    Ok(if agree { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn time_ms<T>(reps: usize, mut f: impl FnMut() -> T) -> (f64, T) {
    let start = Instant::now();
    let mut last = f();
    for _ in 1..reps {
        last = f();
    }
    (start.elapsed().as_secs_f64() * 1e3 / reps as f64, last)
}

fn cmd_bench(
    n: usize,
    seed: u64,
    reps: usize,
    json: bool,
    max_n: usize,
    out: &mut dyn Write,
) -> Outcome {
    guard(n, max_n)?;
    let reps = reps.max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sys = loop {
        let candidate = LinearSystem::random_integer(n, 9, &mut rng)?;
        if !bareiss_det(candidate.entries()).is_zero() {
            break candidate;
        }
    };
    let (leibniz_ms, x0) = time_ms(reps, || big_x(&sys, 0).expect("j = 0 is valid"));
    let (solve_ms, sol) = time_ms(reps, || solve(&sys));
    let (bareiss_ms, oracle) = time_ms(reps, || bareiss_solve(&sys));
    let (bareiss_det_ms, det) = time_ms(reps, || bareiss_det(sys.entries()));
    let cofactor =
        (n <= COFACTOR_MAX_N).then(|| time_ms(reps, || cofactor_det(&sys).expect("guarded")));
    let sol = sol?;
    let agree =
        sol.quotients == oracle? && x0 == det && cofactor.as_ref().is_none_or(|(_, c)| *c == det);
    let cofactor_ms = cofactor.as_ref().map(|(ms, _)| *ms);
    if json {
        emit_json(
            out,
            &json!({
                "n": n,
                "seed": seed,
                "reps": reps,
                "determinant": x0.to_string(),
                "ms": {
                    "leibniz_det": leibniz_ms,
                    "cofactor_det": cofactor_ms,
                    "bareiss_det": bareiss_det_ms,
                    "cramer_solve": solve_ms,
                    "bareiss_solve": bareiss_ms,
                },
                "agree": agree,
            }),
        )?;
    } else {
        emit(
            out,
            &format!("n = {n}, seed = {seed}, reps = {reps}, det = {x0}"),
        )?;
        emit(out, &format!("leibniz det    {leibniz_ms:>12.3} ms"))?;
        if let Some(ms) = cofactor_ms {
            emit(out, &format!("cofactor det   {ms:>12.3} ms"))?;
        }
        emit(out, &format!("bareiss det    {bareiss_det_ms:>12.3} ms"))?;
        emit(out, &format!("cramer solve   {solve_ms:>12.3} ms"))?;
        emit(out, &format!("bareiss solve  {bareiss_ms:>12.3} ms"))?;
        emit(out, &format!("agree: {}", if agree { "yes" } else { "no" }))?;
    }
    Ok(if agree { EXIT_OK } else { EXIT_CHECK_FAILED })
}

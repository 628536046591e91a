//! Command-line surface for the spectree library.
//!
//! Subcommands cover the full pipeline: `validate` and `bfd` for degree
//! sequences and their extremal trees, `eig` for the largest Laplacian
//! eigenvalue, `improve` and `chain` for the rearrangement machinery,
//! `verify` for the brute-force checks of the headline claims, and
//! `bench` for timing the builder and the iterative solver.
//!
//! Exit codes are part of the contract: 0 on success or a passed
//! verification, 1 on a verification failure (a witness is printed),
//! 2 on usage or input errors, 3 when a budget or convergence limit is
//! hit.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use spectree::{
    build_bfd_tree, dense_eigenpair, enumerate_tree_sequences, local_search, majorization_chain,
    max_laplacian_eigenpair, parse_degree_sequence, verify_corollary3, verify_corollary4,
    verify_theorem1, verify_theorem2, DegreeSequence, Error, Method, RearrangeStep, StepKind, Tree,
    VerificationReport,
};
use std::hint::black_box;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

#[derive(Parser)]
#[command(
    name = "spectree",
    version,
    about = "Extremal trees for degree sequences: construction, spectra, verification"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    #[command(subcommand)]
    command: Command,
}

/// Knobs shared by every subcommand.
#[derive(Args, Debug)]
struct ConfigArgs {
    /// Eigensolver convergence tolerance.
    #[arg(long, global = true, default_value = "1e-10")]
    tolerance: f64,

    /// Largest instance the dense eigensolver accepts.
    #[arg(long, global = true, default_value_t = 500)]
    dense_cap: usize,

    /// Most labeled trees a brute-force class enumeration may visit.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    enum_budget: u64,

    /// Worker threads for verification sweeps. Defaults to the available
    /// parallelism; the SPECTREE_THREADS variable overrides the default.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Result format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    output: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Emit {
    Edges,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a sequence is a tree degree sequence; print it
    /// normalized.
    Validate {
        /// Degree sequence, e.g. "3,2,2,1,1,1" or "4^2,3^4,2^3,1^10".
        seq: String,
    },

    /// Build the eigenvalue-maximizing tree of a degree class.
    Bfd {
        /// Degree sequence, e.g. "3,2,2,1,1,1" or "4^2,3^4,2^3,1^10".
        seq: String,

        /// Tree output form.
        #[arg(long, value_enum, default_value_t = Emit::Edges)]
        emit: Emit,
    },

    /// Compute the largest Laplacian eigenvalue of a tree.
    Eig {
        #[command(flatten)]
        input: TreeInput,

        /// Use the dense solver unconditionally (subject to --dense-cap).
        #[arg(long)]
        dense: bool,
    },

    /// Rearrange a tree into the maximizer of its degree class by
    /// eigenvector-guided moves.
    Improve {
        /// Edge-list file: one "u v" pair per line, 0-based, '#' comments.
        #[arg(long)]
        edges: PathBuf,

        /// Write the accepted moves to this file as a JSON array.
        #[arg(long)]
        log: Option<PathBuf>,
    },

    /// Build a strictly eigenvalue-increasing chain between two
    /// majorization-comparable sequences.
    Chain {
        /// Source sequence (majorized by the target).
        seq: String,
        /// Target sequence.
        seq_prime: String,
    },

    /// Check the headline claims on concrete instances.
    #[command(subcommand)]
    Verify(VerifyCommand),

    /// Time the builder or the solver on synthetic inputs.
    #[command(subcommand)]
    Bench(BenchCommand),
}

/// Tree input, either as a degree sequence (the class maximizer is
/// built) or as an edge-list file.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct TreeInput {
    /// Degree sequence; the tree is the class maximizer.
    #[arg(long)]
    seq: Option<String>,

    /// Edge-list file: one "u v" pair per line, 0-based, '#' comments.
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Brute-force a whole degree class and check the built tree is its
    /// unique maximizer.
    Thm1 { seq: String },

    /// Check strict eigenvalue growth between comparable sequences,
    /// including a step-by-step chain.
    Thm2 { seq: String, seq_prime: String },

    /// Check that the star maximizes over all degree classes on n
    /// vertices.
    Cor3 { n: usize },

    /// Check that the balanced spider maximizes among trees with k
    /// leaves on n vertices.
    Cor4 { n: usize, k: usize },

    /// Run the thm1 check on every tree sequence with at most max-n
    /// entries.
    Sweep {
        #[arg(long)]
        max_n: usize,
    },
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Time the linear-time builder on a length-n sequence.
    Bfd {
        #[arg(long)]
        n: usize,

        #[arg(long, default_value_t = 5)]
        reps: usize,
    },

    /// Time the iterative eigensolver on the length-n class maximizer.
    Eig {
        #[arg(long)]
        n: usize,

        #[arg(long, default_value_t = 3)]
        reps: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(message) = configure(&cli.config) {
        eprintln!("error: {message}");
        return ExitCode::from(2);
    }
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// Validates the shared knobs and pins the worker pool size. The pool
/// serves only the verification sweeps; everything else runs
/// single-threaded.
fn configure(config: &ConfigArgs) -> Result<(), String> {
    if !(config.tolerance.is_finite() && config.tolerance > 0.0) {
        return Err(format!(
            "--tolerance must be positive and finite, got {}",
            config.tolerance
        ));
    }
    if config.dense_cap == 0 {
        return Err("--dense-cap must be positive".into());
    }
    if config.enum_budget == 0 {
        return Err("--enum-budget must be positive".into());
    }
    let threads = match config.threads {
        Some(t) => Some(t),
        None => match std::env::var("SPECTREE_THREADS") {
            Ok(raw) => Some(raw.trim().parse::<usize>().map_err(|_| {
                format!("SPECTREE_THREADS must be a positive integer, got {raw:?}")
            })?),
            Err(_) => None,
        },
    };
    if let Some(threads) = threads {
        if threads == 0 {
            return Err("thread count must be positive".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| format!("worker pool: {e}"))?;
    }
    Ok(())
}

/// Maps library errors onto the documented exit statuses: input-class
/// problems are 2, resource and convergence limits are 3, and an
/// internal invariant violation counts as a verification failure.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parse(_)
        | Error::InvalidInput(_)
        | Error::NotTreeSequence(_)
        | Error::NotATree(_)
        | Error::EdgeAbsent(..)
        | Error::InvalidSwitch(_)
        | Error::InvalidShift(_)
        | Error::LengthMismatch { .. }
        | Error::ZeroFunction
        | Error::NotComparable(_) => 2,
        Error::NonConvergence { .. }
        | Error::DenseCapExceeded { .. }
        | Error::BudgetExceeded { .. }
        | Error::StepBudgetExhausted { .. } => 3,
        Error::Anomaly(_) => 1,
    }
}

fn dispatch(cli: &Cli) -> spectree::Result<bool> {
    let config = &cli.config;
    match &cli.command {
        Command::Validate { seq } => cmd_validate(config, seq),
        Command::Bfd { seq, emit } => cmd_bfd(config, seq, *emit),
        Command::Eig { input, dense } => cmd_eig(config, input, *dense),
        Command::Improve { edges, log } => cmd_improve(config, edges, log.as_deref()),
        Command::Chain { seq, seq_prime } => cmd_chain(config, seq, seq_prime),
        Command::Verify(check) => cmd_verify(config, check),
        Command::Bench(task) => cmd_bench(config, task),
    }
}

fn cmd_validate(config: &ConfigArgs, seq: &str) -> spectree::Result<bool> {
    let pi = parse_degree_sequence(seq)?;
    let valid = pi.is_tree_sequence();
    match config.output {
        Format::Text => println!("{pi}"),
        Format::Json => print_json(&json!({
            "sequence": pi.to_string(),
            "degrees": pi.degrees(),
            "n": pi.n(),
            "sum": pi.sum(),
            "tree_sequence": valid,
        })),
    }
    if valid {
        Ok(true)
    } else {
        Err(Error::NotTreeSequence(format!(
            "{pi} has degree sum {}, a tree on {} vertices needs {}",
            pi.sum(),
            pi.n(),
            2 * (pi.n() - 1)
        )))
    }
}

fn cmd_bfd(config: &ConfigArgs, seq: &str, emit: Emit) -> spectree::Result<bool> {
    let pi = parse_degree_sequence(seq)?;
    let tree = build_bfd_tree(&pi)?;
    match config.output {
        Format::Text => match emit {
            Emit::Edges => print!("{}", tree.to_edge_list()),
            Emit::Dot => print!("{}", tree.to_dot()),
        },
        Format::Json => {
            let mut value = json!({
                "n": tree.n(),
                "sequence": pi.to_string(),
                "edges": tree.edges(),
            });
            if emit == Emit::Dot {
                value["dot"] = json!(tree.to_dot());
            }
            print_json(&value);
        }
    }
    Ok(true)
}

fn cmd_eig(config: &ConfigArgs, input: &TreeInput, dense: bool) -> spectree::Result<bool> {
    let tree = load_tree(input)?;
    let result = if dense {
        if tree.n() > config.dense_cap {
            return Err(Error::DenseCapExceeded {
                n: tree.n(),
                cap: config.dense_cap,
            });
        }
        dense_eigenpair(&tree, config.tolerance)?
    } else {
        max_laplacian_eigenpair(&tree, config.tolerance)?
    };
    match config.output {
        Format::Text => {
            println!("lambda: {}", result.lambda);
            println!("residual: {:e}", result.residual);
            println!("iterations: {}", result.iterations);
            println!("method: {}", method_name(result.method));
        }
        Format::Json => {
            let mut value = serde_json::to_value(&result).expect("result serializes");
            value["n"] = json!(tree.n());
            print_json(&value);
        }
    }
    Ok(true)
}

fn cmd_improve(config: &ConfigArgs, edges: &Path, log: Option<&Path>) -> spectree::Result<bool> {
    let tree = read_tree_file(edges)?;
    let (fixpoint, steps) = local_search(&tree)?;
    let initial = match steps.first() {
        Some(step) => step.lambda_before,
        None => max_laplacian_eigenpair(&tree, config.tolerance)?.lambda,
    };
    let final_lambda = steps.last().map_or(initial, |step| step.lambda_after);
    if let Some(path) = log {
        let body = to_json_17(&steps) + "\n";
        std::fs::write(path, body)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    match config.output {
        Format::Text => {
            println!("initial lambda: {initial}");
            for (i, step) in steps.iter().enumerate() {
                println!("step {}: {}", i + 1, describe_step(step));
            }
            println!("final lambda: {final_lambda}");
            println!("steps: {}", steps.len());
            println!("edges:");
            print!("{}", fixpoint.to_edge_list());
        }
        Format::Json => print_json(&json!({
            "initial_lambda": initial,
            "final_lambda": final_lambda,
            "step_count": steps.len(),
            "steps": steps,
            "edges": fixpoint.edges(),
        })),
    }
    Ok(true)
}

fn cmd_chain(config: &ConfigArgs, seq: &str, seq_prime: &str) -> spectree::Result<bool> {
    let pi = parse_degree_sequence(seq)?;
    let pi_prime = parse_degree_sequence(seq_prime)?;
    let chain = majorization_chain(&pi, &pi_prime)?;
    let steps: Vec<&RearrangeStep> = chain.iter().map(|(_, step)| step).collect();
    let initial = match steps.first() {
        Some(step) => step.lambda_before,
        None => return Err(Error::Anomaly("empty chain for a strict relation".into())),
    };
    let final_lambda = steps.last().expect("nonempty").lambda_after;
    match config.output {
        Format::Text => {
            println!("source: {pi} (lambda {initial})");
            println!("target: {pi_prime} (lambda {final_lambda})");
            println!("steps: {}", steps.len());
            for (i, step) in steps.iter().enumerate() {
                println!("step {}: {}", i + 1, describe_step(step));
            }
        }
        Format::Json => print_json(&json!({
            "source": pi.to_string(),
            "target": pi_prime.to_string(),
            "initial_lambda": initial,
            "final_lambda": final_lambda,
            "step_count": steps.len(),
            "steps": steps,
        })),
    }
    Ok(true)
}

fn cmd_verify(config: &ConfigArgs, check: &VerifyCommand) -> spectree::Result<bool> {
    match check {
        VerifyCommand::Thm1 { seq } => {
            let pi = parse_degree_sequence(seq)?;
            let report = verify_theorem1(&pi, config.tolerance, config.enum_budget)?;
            emit_report(config, &report, None, &[])
        }
        VerifyCommand::Thm2 { seq, seq_prime } => {
            let pi = parse_degree_sequence(seq)?;
            let pi_prime = parse_degree_sequence(seq_prime)?;
            let report = verify_theorem2(&pi, &pi_prime, config.tolerance)?;
            let lambda = max_laplacian_eigenpair(&build_bfd_tree(&pi)?, config.tolerance)?.lambda;
            let lambda_prime =
                max_laplacian_eigenpair(&build_bfd_tree(&pi_prime)?, config.tolerance)?.lambda;
            let relation = if report.passed { "<" } else { "vs" };
            let annotation = format!("{lambda} {relation} {lambda_prime}");
            emit_report(
                config,
                &report,
                Some(&annotation),
                &[("lambda", lambda), ("lambda_prime", lambda_prime)],
            )
        }
        VerifyCommand::Cor3 { n } => {
            let report = verify_corollary3(*n, config.tolerance)?;
            emit_report(config, &report, None, &[])
        }
        VerifyCommand::Cor4 { n, k } => {
            let report = verify_corollary4(*n, *k, config.tolerance, config.enum_budget)?;
            emit_report(config, &report, None, &[])
        }
        VerifyCommand::Sweep { max_n } => cmd_sweep(config, *max_n),
    }
}

/// Runs the maximizer check on every tree sequence with 2..=max_n
/// entries. This is the only command that fans out over the worker
/// pool; classes are reported in deterministic enumeration order.
fn cmd_sweep(config: &ConfigArgs, max_n: usize) -> spectree::Result<bool> {
    if max_n < 2 {
        return Err(Error::InvalidInput(format!(
            "sweep needs --max-n at least 2, got {max_n}"
        )));
    }
    let mut sequences = Vec::new();
    for n in 2..=max_n {
        sequences.extend(enumerate_tree_sequences(n)?);
    }
    let reports = sequences
        .par_iter()
        .map(|pi| verify_theorem1(pi, config.tolerance, config.enum_budget))
        .collect::<spectree::Result<Vec<_>>>()?;
    let failed = reports.iter().filter(|report| !report.passed).count();
    match config.output {
        Format::Text => {
            for report in &reports {
                println!("{}", render_report(report, None));
            }
            println!("classes: {} failed: {failed}", reports.len());
        }
        Format::Json => print_json(&json!({
            "classes": reports.len(),
            "failed": failed,
            "reports": reports,
        })),
    }
    Ok(failed == 0)
}

fn cmd_bench(config: &ConfigArgs, task: &BenchCommand) -> spectree::Result<bool> {
    match task {
        BenchCommand::Bfd { n, reps } => {
            let reps = positive_reps(*reps)?;
            let pi = bench_sequence(*n)?;
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps {
                let start = Instant::now();
                let tree = black_box(build_bfd_tree(&pi)?);
                times.push(start.elapsed().as_secs_f64());
                drop(tree);
            }
            let (min, median) = summarize(&mut times);
            match config.output {
                Format::Text => {
                    println!("task: bfd");
                    println!("n: {n}");
                    println!("reps: {reps}");
                    println!("min_seconds: {min}");
                    println!("median_seconds: {median}");
                }
                Format::Json => print_json(&json!({
                    "task": "bfd",
                    "n": n,
                    "reps": reps,
                    "min_seconds": min,
                    "median_seconds": median,
                })),
            }
        }
        BenchCommand::Eig { n, reps } => {
            let reps = positive_reps(*reps)?;
            let tree = build_bfd_tree(&bench_sequence(*n)?)?;
            let mut times = Vec::with_capacity(reps);
            let mut last = None;
            for _ in 0..reps {
                let start = Instant::now();
                let result = black_box(max_laplacian_eigenpair(&tree, config.tolerance)?);
                times.push(start.elapsed().as_secs_f64());
                last = Some(result);
            }
            let result = last.expect("at least one rep");
            let (min, median) = summarize(&mut times);
            match config.output {
                Format::Text => {
                    println!("task: eig");
                    println!("n: {n}");
                    println!("reps: {reps}");
                    println!("min_seconds: {min}");
                    println!("median_seconds: {median}");
                    println!("lambda: {}", result.lambda);
                    println!("residual: {:e}", result.residual);
                    println!("iterations: {}", result.iterations);
                    println!("method: {}", method_name(result.method));
                }
                Format::Json => print_json(&json!({
                    "task": "eig",
                    "n": n,
                    "reps": reps,
                    "min_seconds": min,
                    "median_seconds": median,
                    "lambda": result.lambda,
                    "residual": result.residual,
                    "iterations": result.iterations,
                    "method": method_name(result.method),
                })),
            }
        }
    }
    Ok(true)
}

/// Benchmark input: the near-balanced spider with about sqrt(n) legs.
/// Valid for every n of interest and exercises both the high-degree
/// head and the long degree-2 runs of the builder.
fn bench_sequence(n: usize) -> spectree::Result<DegreeSequence> {
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "bench needs --n at least 3, got {n}"
        )));
    }
    let k = (n as f64).sqrt() as usize;
    DegreeSequence::spider(n, k.clamp(2, n - 1))
}

fn positive_reps(reps: usize) -> spectree::Result<usize> {
    if reps == 0 {
        return Err(Error::InvalidInput("--reps must be positive".into()));
    }
    Ok(reps)
}

fn summarize(times: &mut [f64]) -> (f64, f64) {
    times.sort_by(|a, b| a.partial_cmp(b).expect("finite timings"));
    (times[0], times[times.len() / 2])
}

fn load_tree(input: &TreeInput) -> spectree::Result<Tree> {
    match (&input.seq, &input.edges) {
        (Some(seq), None) => build_bfd_tree(&parse_degree_sequence(seq)?),
        (None, Some(path)) => read_tree_file(path),
        _ => unreachable!("the argument group admits exactly one input"),
    }
}

fn read_tree_file(path: &Path) -> spectree::Result<Tree> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Tree::parse_edge_list(&text)
}

fn render_report(report: &VerificationReport, annotation: Option<&str>) -> String {
    let verdict = if report.passed { "pass" } else { "FAIL" };
    let mut line = format!(
        "{} {}: {verdict} (tolerance {:e})",
        report.theorem, report.instance, report.tolerance
    );
    if let Some(note) = annotation {
        line.push_str(", ");
        line.push_str(note);
    }
    if let Some(witness) = &report.witness {
        line.push_str(&format!("\nwitness: {witness}"));
    }
    line
}

fn emit_report(
    config: &ConfigArgs,
    report: &VerificationReport,
    annotation: Option<&str>,
    extra_fields: &[(&str, f64)],
) -> spectree::Result<bool> {
    match config.output {
        Format::Text => println!("{}", render_report(report, annotation)),
        Format::Json => {
            let mut value = serde_json::to_value(report).expect("report serializes");
            for (name, number) in extra_fields {
                value[*name] = json!(number);
            }
            print_json(&value);
        }
    }
    Ok(report.passed)
}

fn describe_step(step: &RearrangeStep) -> String {
    let kind = match step.kind {
        StepKind::Switch => "switch",
        StepKind::Shift => "shift",
        StepKind::AddPendant => "add-pendant",
    };
    let mut parts = vec![kind.to_string()];
    if !step.removed.is_empty() {
        parts.push(format!("removed {}", edge_set(&step.removed)));
    }
    if !step.added.is_empty() {
        parts.push(format!("added {}", edge_set(&step.added)));
    }
    parts.push(format!(
        "lambda {} -> {}",
        step.lambda_before, step.lambda_after
    ));
    parts.join(" ")
}

fn edge_set(edges: &[(usize, usize)]) -> String {
    edges
        .iter()
        .map(|(u, v)| format!("({u},{v})"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Iterative => "iterative",
        Method::Dense => "dense",
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!("{}", to_json_17(value));
}

fn to_json_17<T: Serialize>(value: &T) -> String {
    let mut buffer = Vec::new();
    let mut serializer = serde_json::Serializer::with_formatter(&mut buffer, SignificantDigits);
    value
        .serialize(&mut serializer)
        .expect("value serializes to JSON");
    String::from_utf8(buffer).expect("serializer emits UTF-8")
}

/// JSON formatter that prints every double with 17 significant digits,
/// so printed numbers round-trip to the exact bits that were computed.
#[derive(Clone, Copy)]
struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

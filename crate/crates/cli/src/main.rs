//! `ricci`: exact curvature classification and identity verification for
//! metrics with rational-function components. Reads a metric definition
//! file, runs the requested verification sections, and prints a flat
//! key/value report. Exit code 0 on success, 1 when a check that must hold
//! fails, 2 on input errors.

mod input;
mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use ricci::Rat;

#[derive(Parser)]
#[command(name = "ricci", version, about = "Exact curvature classification for rational metrics")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Subcommand)]
enum Cmd {
    /// Symmetry hierarchy, curvature operator, parallel null field
    Classify(CommonArgs),
    /// Curvature identity suite with precondition tracking
    Identities(CommonArgs),
    /// Scalar invariants, constancy, quadratic vanishing list
    Invariants(CommonArgs),
    /// Superenergy tensors and causal dominance sampling
    Superenergy(CommonArgs),
    /// Pointwise Segre types of the metric, Ricci, and null square
    Segre(CommonArgs),
    /// Every section in order
    Full(CommonArgs),
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Metric definition file
    file: PathBuf,
    /// Derivative ladder depth for the symmetry chain
    #[arg(long)]
    kmax: Option<u32>,
    /// Evaluation point: comma-separated rationals, one per coordinate
    #[arg(long)]
    probe: Option<String>,
    /// Seed for dominance sampling
    #[arg(long)]
    seed: Option<u64>,
    /// Number of causal sample vectors
    #[arg(long)]
    samples: Option<u32>,
    /// Append a prose summary as # comment lines
    #[arg(long)]
    human: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (sub, args) = match cli.cmd {
        Cmd::Classify(a) => (run::Subcommand::Classify, a),
        Cmd::Identities(a) => (run::Subcommand::Identities, a),
        Cmd::Invariants(a) => (run::Subcommand::Invariants, a),
        Cmd::Superenergy(a) => (run::Subcommand::Superenergy, a),
        Cmd::Segre(a) => (run::Subcommand::Segre, a),
        Cmd::Full(a) => (run::Subcommand::Full, a),
    };
    match exec(sub, &args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn exec(sub: run::Subcommand, args: &CommonArgs) -> Result<ExitCode, String> {
    let start = Instant::now();
    let text = std::fs::read_to_string(&args.file)
        .map_err(|e| format!("{}: {e}", args.file.display()))?;
    let loaded = input::load(&text).map_err(|e| e.to_string())?;
    let dim = loaded.metric.dim();

    let probe = match &args.probe {
        Some(src) => parse_probe(src, dim)?,
        None => loaded
            .options
            .probe
            .clone()
            .unwrap_or(loaded.default_probe),
    };
    let kmax = args.kmax.or(loaded.options.kmax).unwrap_or(4);
    let samples = args.samples.or(loaded.options.samples).unwrap_or(200);
    if kmax < 1 {
        return Err("kmax must be at least 1".to_string());
    }
    if samples < 1 {
        return Err("samples must be at least 1".to_string());
    }
    let task = run::Task {
        metric: loaded.metric,
        kmax,
        probe,
        seed: args.seed.or(loaded.options.seed).unwrap_or(0),
        samples,
    };

    let report = run::run(sub, &task).map_err(|e| e.0)?;
    print!("{}", report.render(args.human));
    eprintln!("elapsed_ms={}", start.elapsed().as_millis());
    Ok(ExitCode::from(if report.failed() { 1 } else { 0 }))
}

fn parse_probe(src: &str, dim: usize) -> Result<Vec<Rat>, String> {
    let parts: Vec<&str> = src.split(',').collect();
    if parts.len() != dim {
        return Err(format!(
            "probe has {} components for a {dim}-dimensional chart",
            parts.len()
        ));
    }
    parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<Rat>()
                .map_err(|e| format!("bad probe component `{}`: {e}", p.trim()))
        })
        .collect()
}

//! `hitchin`: command-line front end to the exact and numerical checks.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use hitchin::connection::LambdaPreset;
use hitchin::spectra::TrivalentGraph;

use commands::{LoopKind, Params};
use report::{Check, Report};

const DEFAULT_SEED: u64 = 20_240_611;
const MAX_GENUS: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "hitchin", version, about = "Exact and numerical checks of the genus-two projectively flat connection")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Genus.
    #[arg(long, global = true, default_value_t = 2)]
    g: usize,
    /// Level.
    #[arg(long, global = true, default_value_t = 2)]
    k: u32,
    /// Normalization of the connection form.
    #[arg(long, global = true, value_enum, default_value_t = LambdaArg::Hitchin)]
    lambda: LambdaArg,
    /// Seed for sampled configurations.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// RK4 steps per unit of path parameter.
    #[arg(long, global = true, default_value_t = 512)]
    steps: usize,
    /// Tolerance for numerical comparisons.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tolerance: f64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = GraphArg::Theta)]
    graph: GraphArg,
    #[arg(long = "loop", global = true, value_enum, default_value_t = LoopKind::Braid)]
    loop_kind: LoopKind,
    /// Include wall-clock timings (makes output non-deterministic).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Spin representation: squares and bracket relations.
    VerifySpin,
    /// Infinitesimal braid relations among the M_ij.
    VerifyBraid,
    /// Invariance under the finite Heisenberg group.
    VerifyInvariance,
    /// Kummer quartic as a flat section at sampled points.
    VerifyKummer,
    /// Monodromy spectrum around a non-separating curve.
    SpectrumNonseparating,
    /// Monodromy spectrum around a separating curve.
    SpectrumSeparating,
    /// Scalar identity for the product R_123.
    VerifyR123,
    /// Count admissible labelings of a trivalent graph.
    Verlinde,
    /// Dehn twist phases against monodromy spectra.
    CompareSpectra,
    /// Numerical monodromy along a loop.
    Holonomy,
    /// Numerical transport around a small rectangle.
    Flatness,
    /// Every check that applies to the given genus and level.
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum LambdaArg {
    Kummer,
    Hitchin,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GraphArg {
    Theta,
    Dumbbell,
}

impl Cli {
    fn params(&self) -> Params {
        Params {
            g: self.g,
            k: self.k,
            lambda: match self.lambda {
                LambdaArg::Kummer => LambdaPreset::KummerFlat,
                LambdaArg::Hitchin => LambdaPreset::Hitchin,
            },
            seed: self.seed,
            steps: self.steps,
            tolerance: self.tolerance,
            graph: match self.graph {
                GraphArg::Theta => TrivalentGraph::Theta,
                GraphArg::Dumbbell => TrivalentGraph::Dumbbell,
            },
            loop_kind: self.loop_kind,
        }
    }

    fn config(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("g".into(), json!(self.g));
        m.insert("k".into(), json!(self.k));
        m.insert("lambda".into(), json!(format!("{:?}", self.lambda).to_lowercase()));
        m.insert("seed".into(), json!(self.seed));
        m.insert("generator".into(), json!("ChaCha8Rng seed_from_u64"));
        m.insert("steps".into(), json!(self.steps));
        m.insert("tolerance".into(), json!(self.tolerance));
        m.insert("graph".into(), json!(format!("{:?}", self.graph).to_lowercase()));
        m.insert("loop".into(), json!(self.loop_kind.to_possible_value().map(|v| v.get_name().to_string())));
        m
    }
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::VerifySpin => "verify-spin",
            Command::VerifyBraid => "verify-braid",
            Command::VerifyInvariance => "verify-invariance",
            Command::VerifyKummer => "verify-kummer",
            Command::SpectrumNonseparating => "spectrum-nonseparating",
            Command::SpectrumSeparating => "spectrum-separating",
            Command::VerifyR123 => "verify-r123",
            Command::Verlinde => "verlinde",
            Command::CompareSpectra => "compare-spectra",
            Command::Holonomy => "holonomy",
            Command::Flatness => "flatness",
            Command::All => "all",
        }
    }
}

fn dispatch(cmd: Command, p: &Params) -> hitchin::Result<Vec<Check>> {
    if !(1..=MAX_GENUS).contains(&p.g) {
        return Err(hitchin::Error::Invalid(format!("genus must lie in 1..={MAX_GENUS}, got {}", p.g)));
    }
    if !(p.tolerance.is_finite() && p.tolerance > 0.0) {
        return Err(hitchin::Error::Invalid("tolerance must be positive".into()));
    }
    match cmd {
        Command::VerifySpin => commands::verify_spin(p),
        Command::VerifyBraid => commands::verify_braid(p),
        Command::VerifyInvariance => commands::verify_invariance(p),
        Command::VerifyKummer => commands::verify_kummer(p),
        Command::SpectrumNonseparating => commands::spectrum_nonseparating(p),
        Command::SpectrumSeparating => commands::spectrum_separating(p),
        Command::VerifyR123 => commands::verify_r123_cmd(p),
        Command::Verlinde => commands::verlinde(p),
        Command::CompareSpectra => commands::compare_spectra(p),
        Command::Holonomy => commands::holonomy(p),
        Command::Flatness => commands::flatness(p),
        Command::All => commands::all(p),
    }
}

fn threads() -> Option<usize> {
    std::env::var("HITCHIN_THREADS").ok()?.parse().ok().filter(|&n| n > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let params = cli.params();
    let run = || dispatch(cli.command, &params);
    let checks = match threads() {
        Some(n) => hitchin::par::with_threads(n, run),
        None => run(),
    };
    let checks = match checks {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = Report {
        command: cli.command.name().to_string(),
        config: cli.config(),
        checks,
    };
    let text = serde_json::to_string_pretty(&report.to_json(cli.timings)).expect("report serializes") + "\n";
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

//! `ym2d`: exact, asymptotic, Monte Carlo and perturbative Wilson loops in 2D Yang-Mills.

mod commands;
mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{Report, SCHEMA};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Parser, Debug)]
#[command(name = "ym2d", version, about = "Wilson loop expectations in two-dimensional Yang-Mills theory")]
pub struct Cli {
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for every stochastic engine.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct GroupArgs {
    /// U1 or SU2.
    #[arg(long, default_value = "SU2")]
    group: String,
    /// Scale c^2 of the invariant metric c^2 (-tr XY).
    #[arg(long, default_value_t = 1.0)]
    metric_scale: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List irreps up to a Casimir cutoff.
    Irreps {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        cutoff: f64,
    },
    /// Heat kernel K_t at a torus element, by character and geodesic sums.
    HeatKernel {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        /// auto, casimir:<cutoff> or winding:<count>.
        #[arg(long, default_value = "auto")]
        truncation: String,
    },
    /// Partition function of a closed surface.
    Partition {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long)]
        lambda: f64,
    },
    /// Wilson loop expectations.
    Wilson {
        #[command(subcommand)]
        engine: WilsonCommand,
    },
    /// Decompactification versus small-coupling series for chi_m on SU(2).
    CompareLimits {
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 3)]
        order: usize,
    },
    /// Exponentially small gap between exact and Gaussian asymptotics.
    InstantonGap {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 2)]
        irrep: i64,
        #[arg(long)]
        lambda: f64,
        /// Use regions in ratio 1:3 instead of equal areas.
        #[arg(long)]
        unequal_areas: bool,
    },
    /// Gaussian (Wick) expectation of a graded polynomial described in JSON.
    WickDemo {
        /// Path to the JSON description; `-` reads standard input.
        #[arg(long, conflicts_with = "json")]
        input: Option<PathBuf>,
        /// Inline JSON description.
        #[arg(long)]
        json: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum WilsonCommand {
    /// Exact simple loop on the sphere.
    Exact {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        irrep: i64,
        /// Dimensionless coupling lambda0 |S^2|.
        #[arg(long)]
        lambda: f64,
        #[arg(long, value_delimiter = ',', default_values_t = [0.5, 0.5])]
        areas: Vec<f64>,
    },
    /// Exact simple loop on the plane.
    R2 {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        irrep: i64,
        #[arg(long)]
        lambda0: f64,
        #[arg(long)]
        area: f64,
    },
    /// Monte Carlo on a surface map.
    Mc {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        irrep: i64,
        #[arg(long)]
        lambda0: f64,
        /// Surface map JSON; defaults to the one-edge sphere with --areas.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', default_values = ["1/2", "1/2"])]
        areas: Vec<String>,
        /// Name of the loop in the map.
        #[arg(long = "loop", default_value = "gamma")]
        loop_name: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Gaussian Lie-algebra asymptotics and their series.
    Asymptotic {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        irrep: i64,
        /// Variance parameter; alternatively give --lambda and --areas.
        #[arg(long, conflicts_with = "lambda")]
        rho: Option<f64>,
        #[arg(long, requires = "areas")]
        lambda: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        areas: Option<Vec<f64>>,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Perturbative coefficients in holomorphic gauge on the plane.
    Pert {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        irrep: i64,
        #[arg(long = "loop", value_enum, default_value_t = LoopKind::Circle)]
        loop_kind: LoopKind,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, value_delimiter = ',')]
        semi_axes: Option<Vec<f64>>,
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Quadrature points per coefficient (overrides YM2D_QUAD_BUDGET).
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LoopKind {
    Circle,
    Ellipse,
}

/// Failure of a command, split by exit status.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Compute { kind: String, message: String },
}

impl From<ym2d_core::Error> for Failure {
    fn from(e: ym2d_core::Error) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Compute {
                kind: e.kind().into(),
                message: e.to_string(),
            }
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Compute {
            kind: "io".into(),
            message: e.to_string(),
        }
    }
}

fn write_report(cli: &Cli, report: &Report) -> io::Result<()> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    };
    match cli.format {
        Format::Json => report.write_json(&mut out)?,
        Format::Csv => report.write_csv(&mut out)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::execute(&cli.command, cli.seed).and_then(|r| {
        write_report(&cli, &r)?;
        Ok(r)
    });
    match result {
        Ok(report) if report.passed => ExitCode::SUCCESS,
        Ok(_) => {
            eprintln!("one or more asserted comparisons failed");
            ExitCode::from(1)
        }
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Compute { kind, message }) => {
            let doc = serde_json::json!({
                "schema": SCHEMA,
                "error": { "kind": kind, "message": message },
            });
            eprintln!("{doc}");
            ExitCode::from(1)
        }
    }
}

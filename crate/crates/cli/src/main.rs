mod commands;
mod document;
mod error;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rtbp::catalog::SUN_JUPITER_MU;
use rtbp::dynamics::RotatingState;

use crate::commands::{LiftOutputs, SimulateArgs, Source, VerifyOutputs};
use crate::error::CliError;

/// Periodic orbits of the planar circular restricted three-body problem and
/// the identity relating their period to an integral over the enclosed region.
///
/// Exit codes: 0 success, 1 input or other error, 2 not periodic, 3
/// unclassifiable, 4 enclosed region leaves the Hill region, 5 area quadrature
/// failure.
#[derive(Debug, Parser)]
#[command(name = "rtbp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reproduce one of the four Sun-Jupiter reference orbits and write its
    /// orbit file, report, CSV trajectory and SVG plot.
    Example {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        id: u8,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Detect the period, classify the orbit and check the identity.
    Verify {
        #[command(flatten)]
        source: SourceArgs,
        /// Report JSON output.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Orbit JSON output.
        #[arg(long)]
        orbit_out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        numerics: Numerics,
    },
    /// Propagate an initial condition and dump the trajectory.
    Simulate {
        #[command(flatten)]
        ic: IcArgs,
        /// Reference example whose initial condition to use instead of --ic.
        #[arg(long, conflicts_with = "ic")]
        example: Option<u8>,
        /// Integration time (negative runs backwards).
        #[arg(long, allow_hyphen_values = true)]
        tmax: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Uniform samples written to the CSV.
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Sign of the Laplacian of ln f near L4 and L5.
    L4 {
        #[arg(long, default_value_t = SUN_JUPITER_MU)]
        mu: f64,
        #[arg(long, allow_hyphen_values = true)]
        jacobi: f64,
        /// Comma-separated disk radii.
        #[arg(long, value_delimiter = ',')]
        radii: Option<Vec<f64>>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Lift an n-simple orbit through the n-th power map.
    Lift {
        #[command(flatten)]
        source: SourceArgs,
        /// Center x,y of the power map; defaults to the enclosed primary.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        center: Option<Vec<f64>>,
        /// Lifted vertices as x,y rows.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Orbit and lifting side by side.
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct IcArgs {
    /// Initial state y1,y2,v1,v2 in the rotating frame.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    ic: Option<Vec<f64>>,
    #[arg(long)]
    mu: Option<f64>,
    /// Initial time.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
}

#[derive(Debug, Args)]
struct SourceArgs {
    /// Orbit JSON file; its stored period is reused.
    file: Option<PathBuf>,
    #[arg(long)]
    example: Option<u8>,
    #[command(flatten)]
    ic: IcArgs,
    /// Window a,b searched for the first return.
    #[arg(long, value_delimiter = ',')]
    period_hint: Option<Vec<f64>>,
}

impl SourceArgs {
    fn into_source(self) -> Result<Source, CliError> {
        Source::from_args(self.file, self.example, self.ic.ic, self.ic.mu, self.ic.t0, self.period_hint)
    }
}

#[derive(Debug, Args)]
struct Numerics {
    /// Integrator tolerance.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    /// Absolute tolerance of the area quadrature.
    #[arg(long)]
    cell_tolerance: Option<f64>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Example { id, out_dir, numerics } => {
            commands::example(id, &out_dir, numerics.tol, numerics.cell_tolerance)
        }
        Command::Verify { source, json, orbit_out, svg, numerics } => commands::verify(
            source.into_source()?,
            numerics.tol,
            numerics.cell_tolerance,
            VerifyOutputs { json, orbit: orbit_out, svg },
        ),
        Command::Simulate { ic, example, tmax, tol, samples, csv, svg } => {
            let (state, mu) = match (example, ic.ic) {
                (Some(id), _) => {
                    let r = rtbp::catalog::reference_orbit(id)
                        .ok_or_else(|| CliError::Other(anyhow::anyhow!("no example {id}; choose 1 to 4")))?;
                    (r.initial, r.mu().value())
                }
                (None, Some(v)) => {
                    let [y1, y2, v1, v2] = v[..] else {
                        return Err(CliError::Other(anyhow::anyhow!("--ic takes four numbers y1,y2,v1,v2")));
                    };
                    (RotatingState::new(y1, y2, v1, v2, ic.t0), ic.mu.unwrap_or(SUN_JUPITER_MU))
                }
                (None, None) => return Err(CliError::Other(anyhow::anyhow!("give --ic or --example"))),
            };
            commands::simulate(SimulateArgs { state, mu, tmax, tol, samples, csv, svg })
        }
        Command::L4 { mu, jacobi, radii, json } => commands::l4(mu, jacobi, radii, json),
        Command::Lift { source, center, csv, svg, tol } => {
            commands::lift(source.into_source()?, center, tol, LiftOutputs { csv, svg })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

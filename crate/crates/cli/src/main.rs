mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use cat0_core::io::{canonical, canonical_exact};

#[derive(Parser, Debug)]
#[command(name = "cat0", version, about = "Exact computation on finite 2D CAT(0) polyhedral complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Complex or bundle JSON; stdin when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Extra point list JSON.
    #[arg(long, global = true)]
    pub points: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Convergence tolerance of the iterative hull oracle.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub eps: f64,
    /// Round limit for the iterative oracle and for peeling.
    #[arg(long, global = true, default_value_t = 1000)]
    pub max_rounds: usize,
    /// Region budget for shortest path maps.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub region_cap: usize,
    /// Hull arithmetic; rational by default on right-angled complexes.
    #[arg(long, global = true, value_enum)]
    pub arith: Option<ArithArg>,
    /// Write an SVG of the unfolded path(s).
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ArithArg {
    Float,
    Rational,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the link condition and simple connectivity.
    Validate,
    /// Link graph of a vertex, and the link distance between two point directions.
    Link {
        /// Vertex of a triangulated complex (cone complexes use the apex).
        #[arg(long)]
        vertex: Option<String>,
        /// Point name or inline point JSON; give two for a distance.
        #[arg(long = "point")]
        point: Vec<String>,
    },
    /// Geodesic between two points.
    Geodesic {
        #[arg(long = "point")]
        point: Vec<String>,
    },
    /// Convex hull of the point set of a cone complex.
    Hull {
        /// Also run the iterative closure oracle.
        #[arg(long)]
        oracle: bool,
    },
    /// Convex hull peeling layers.
    Peel,
    /// Whether a point lies in the hull of the point set.
    Member {
        #[arg(long)]
        point: String,
    },
    /// Shortest path map summary and last-step map.
    Spm {
        #[arg(long)]
        source: Option<String>,
    },
    /// Shortest paths from the source to each target.
    Query {
        #[arg(long)]
        source: Option<String>,
        /// Targets; defaults to every named point.
        #[arg(long = "point")]
        point: Vec<String>,
    },
    /// Emit a fixture bundle: t5, fig3, fig4, book3, exponential:<n>, incoming-cycle.
    Gen { name: String },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let filter = env_logger::Env::new().filter_or("CAT0_LOG", "error");
    env_logger::Builder::from_env(filter).format_timestamp(None).init();
    if !(cli.eps > 0.0 && cli.eps.is_finite()) {
        return usage("--eps must be a positive number");
    }
    if cli.region_cap == 0 {
        return usage("--region-cap must be positive");
    }
    match commands::run(&cli) {
        Ok(out) => {
            let text = if matches!(cli.command, Command::Gen { .. }) { canonical_exact(&out) } else { canonical(&out) };
            let written = match &cli.output {
                Some(p) => std::fs::write(p, text).map_err(|e| commands::fail("Io", e)),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => report(e),
            }
        }
        Err(e) => report(e),
    }
}

fn usage(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn report(e: commands::Failure) -> ExitCode {
    eprint!("{}", canonical(&json!({ "error": { "kind": e.kind, "message": e.message } })));
    ExitCode::from(if e.kind == "Usage" { 2 } else { 1 })
}

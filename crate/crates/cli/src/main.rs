//! `qbs`: classify class-Q block operators from model files.
//!
//! Exit codes: 0 verdict true (or success), 1 verdict false or the operation
//! is impossible for this model, 2 usage, parse or I/O error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "qbs", version, about = "Spectral classification of Brownian-type block operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Tolerance {
    /// Membership tolerance. Falls back to the model file's `eps`, then 1e-9.
    #[arg(long, env = "QBS_EPS")]
    eps: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a region (or `brownian` / `quasi-brownian`) for a model.
    Classify {
        /// Model JSON file.
        #[arg(long, required_unless_present = "points", conflicts_with = "points")]
        input: Option<PathBuf>,
        /// Inline spectrum `s,t;s,t;...` instead of a model file.
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        region: String,
        /// Also write the report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Build a class-Q embedding with a prescribed spectrum.
    Realize {
        #[arg(long)]
        points: String,
        /// Truncation depth of the shift part.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        /// Model JSON output; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Spectrum CSV output.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Cauchy dual of a model.
    Dual {
        #[arg(long)]
        input: PathBuf,
        /// Dual model JSON output.
        #[arg(long)]
        out: PathBuf,
        /// Dual spectrum CSV output.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Truncation depth used when the input is not an embedding.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Subnormality interval of the E- or Q-pencil, optionally with a grid scan.
    Pencil {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// Scan grid `start:stop:step`.
        #[arg(long)]
        grid: Option<String>,
        /// Scan CSV output.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Hankel moment oracle on a spectrum point or a raw sequence.
    Oracle {
        /// Point `s,t`; tests φ_0..φ_{2K+1}.
        #[arg(long, conflicts_with = "sequence", required_unless_present = "sequence")]
        point: Option<String>,
        /// Comma or newline separated values, or a path to a file holding them.
        #[arg(long)]
        sequence: Option<String>,
        /// Truncation order K. Defaults to 3 for points and to the largest
        /// order the sequence supports.
        #[arg(long)]
        hankel_order: Option<usize>,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// SVG picture of one or more regions with a spectrum overlaid.
    Plot {
        /// Region tokens, comma separated or repeated.
        #[arg(long, value_delimiter = ',', required = true)]
        region: Vec<String>,
        /// Spectrum CSV (`s,t[,r][,mult]`).
        #[arg(long, conflicts_with = "points")]
        input: Option<PathBuf>,
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    E,
    Q,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Classify {
            input,
            points,
            region,
            out,
            tol,
        } => commands::classify(input.as_deref(), points.as_deref(), &region, out.as_deref(), tol.eps),
        Command::Realize {
            points,
            levels,
            out,
            csv,
            tol,
        } => commands::realize(&points, levels, out.as_deref(), csv.as_deref(), tol.eps),
        Command::Dual {
            input,
            out,
            csv,
            levels,
            tol,
        } => commands::dual(&input, &out, csv.as_deref(), levels, tol.eps),
        Command::Pencil {
            input,
            which,
            grid,
            out,
            tol,
        } => {
            let which = match which {
                Which::E => qbs::pencils::Pencil::E,
                Which::Q => qbs::pencils::Pencil::Q,
            };
            commands::pencil(&input, which, grid.as_deref(), out.as_deref(), tol.eps)
        }
        Command::Oracle {
            point,
            sequence,
            hankel_order,
            tol,
        } => commands::oracle(point.as_deref(), sequence.as_deref(), hankel_order, tol.eps),
        Command::Plot {
            region,
            input,
            points,
            out,
        } => commands::plot(&region, input.as_deref(), points.as_deref(), &out),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("qbs: {}", failure.message());
            failure.exit_code()
        }
    }
}

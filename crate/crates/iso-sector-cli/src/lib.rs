//! `iso-sector`: batch front end for the `isosector` library.
//!
//! Exit codes: 0 success, 1 domain or I/O failure, 2 usage error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
mod commands;
pub mod grid;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use grid::Grid;
pub use report::Format;

/// Environment variable capping the worker thread count.
pub const THREADS_VAR: &str = "ISO_SECTOR_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Domain(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Io(m) => m,
        }
    }
}

pub(crate) fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "iso-sector",
    version,
    about = "Isoperimetric candidates in sectors with density r^p, the disk density, and radial densities in R^n"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank arc, semicircle and equilibrium undulary at one (p, θ₀).
    Classify {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Classify every cell of a (p, θ₀) grid.
    Phase {
        #[arg(long)]
        p_grid: Grid,
        #[arg(long)]
        theta_grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Half period T(r₁) over a grid of maximum radii.
    Period {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long)]
        r1_grid: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Sample one undulary half wave, given r₁ or the sector angle it fills.
    Undulary {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, conflicts_with = "r1", required_unless_present = "r1")]
        theta: Option<f64>,
        #[arg(long)]
        r1: Option<f64>,
        #[arg(long, default_value_t = 1024)]
        nodes: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded random trials of the rescaled-sector inequality.
    Inequality {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        /// Sector angle; π/(p+1) when omitted.
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Positive floor added to every trial function.
        #[arg(long, default_value_t = 0.05)]
        floor: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Disk-density candidates at given areas, or the transition thresholds.
    Disk {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, conflicts_with_all = ["area_grid", "thresholds"])]
        area: Option<f64>,
        #[arg(long, conflicts_with = "thresholds")]
        area_grid: Option<Grid>,
        #[arg(long)]
        thresholds: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Small-area and near-full-area transition curves over a grid of a.
    DiskCurves {
        #[arg(long)]
        a_grid: Grid,
        /// Area deficit aθ₀/2 − A at which the near-full tie is located.
        #[arg(long, default_value_t = 1e-3)]
        deficit: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Convexity verdict and averaging trials for a radial profile in Rⁿ.
    RnCheck {
        #[arg(long)]
        n: usize,
        /// r, sqrt, const, 1+r, r^k or 1+r^k.
        #[arg(long)]
        profile: String,
        #[arg(long, default_value_t = 401)]
        grid_size: usize,
        /// Averaging trials; only n = 2 and n = 3 support them.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0.3)]
        amplitude: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Balls of fixed weighted volume whose boundary area tends to zero.
    RnDemo {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        volume: f64,
        #[arg(long, default_value = "2:256:log:8")]
        radii: Grid,
        #[command(flatten)]
        output: Output,
    },
    /// Multi-start discrete minimization, compared with the classifier.
    Oracle {
        #[arg(long, allow_negative_numbers = true)]
        p: f64,
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 1.0)]
        area: f64,
        #[arg(long, default_value_t = 3)]
        starts: usize,
        #[arg(long, default_value_t = 256)]
        nodes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Run the acceptance suite and write its report.
    Validate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got '{raw}'")))?;
    // A pool may already exist when `run` is called more than once in-process.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match configure_threads().and_then(|()| commands::execute(cli.command)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(run(["iso-sector", "classify", "--p", "1"]), 2);
        assert_eq!(run(["iso-sector", "period", "--p", "2", "--r1-grid", "5:1:log:3"]), 2);
        assert_eq!(run(["iso-sector", "bogus"]), 2);
        assert_eq!(run(["iso-sector", "period", "--p", "2", "--r1-grid", "2", "--format", "svg"]), 2);
    }

    #[test]
    fn domain_errors_exit_with_one() {
        assert_eq!(run(["iso-sector", "classify", "--p", "-1", "--theta", "1", "--out", "/dev/null"]), 1);
    }
}

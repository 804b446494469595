//! The `frt` command-line tool.

mod commands;
pub mod spec;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use frt_core::FrtError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] FrtError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

/// Fractal regular tetrahedra: clouds, imaginary-cube tests, hulls, symmetry and connectedness.
#[derive(Debug, Parser)]
#[command(name = "frt", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Contraction ratio: `p/q` keeps exact arithmetic, a decimal switches to float mode.
    #[arg(long)]
    pub c: String,
    /// Rotation: a name (E, z90, diag120:v1, diag60:v1, ...), `axis=x,y,z;angle=r`, or nine entries.
    #[arg(long, default_value = "E")]
    pub p: String,
    /// Force float mode.
    #[arg(long)]
    pub float: bool,
    /// Float-mode tolerance.
    #[arg(long, default_value_t = frt_core::geom::DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CloudFormat {
    Ply,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProjectSource {
    /// Disks of radius cell_diameter/2 about the depth-n cloud.
    Cloud,
    /// The projected cubes of the depth-n cube cover.
    Cover,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Expectation {
    Ic,
    NotIc,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 24)]
    pub max_depth: u32,
    #[arg(long, default_value_t = 24)]
    pub max_period: u32,
    #[arg(long, default_value_t = 200_000)]
    pub max_nodes: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameters, rotation class, dimension bound, separation margin and the IC predicate.
    Info {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Export the depth-n point cloud as PLY or CSV.
    Cloud {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to the output extension, then PLY.
        #[arg(long, value_enum)]
        format: Option<CloudFormat>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Rasterize the three face projections to PGM files and report coverage.
    Project {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        #[arg(long, default_value_t = frt_core::cube::DEFAULT_RESOLUTION)]
        resolution: u32,
        #[arg(long)]
        out_dir: PathBuf,
        #[arg(long, value_enum, default_value_t = ProjectSource::Cloud)]
        source: ProjectSource,
        /// Write binary P5 instead of plain P2.
        #[arg(long)]
        binary: bool,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Test whether the attractor is an imaginary cube.
    CheckIc {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        /// Use rasters even when an exact cube cover exists.
        #[arg(long)]
        raster: bool,
        #[arg(long, default_value_t = frt_core::cube::DEFAULT_RESOLUTION)]
        resolution: u32,
        /// Exit 1 unless the evidence supports this claim.
        #[arg(long, value_enum)]
        expect: Option<Expectation>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Convex hull of the depth-n cloud, compared with the analytic hull.
    Hull {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 6)]
        depth: u32,
        /// OBJ mesh of the cloud hull.
        #[arg(long)]
        out: Option<PathBuf>,
        /// OBJ mesh of the analytic hull.
        #[arg(long)]
        analytic_out: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Check rotations of the cube (or one given rotation) as symmetries.
    Sym {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 5)]
        depth: u32,
        /// A single rotation to test; exit 1 if it is refuted.
        #[arg(long)]
        q: Option<String>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Decide which pieces meet and whether the attractor is connected.
    Connect {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        search: SearchArgs,
        /// DOT file of the piece graph.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Verify an address pair, or search one piece pair for a certificate.
    Certify {
        #[command(flatten)]
        params: ParamArgs,
        /// First address, `prefix|period`.
        #[arg(long, requires = "second", conflicts_with = "pair")]
        first: Option<String>,
        #[arg(long, requires = "first")]
        second: Option<String>,
        /// Piece pair `i,j` to search.
        #[arg(long)]
        pair: Option<String>,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
}

/// Runs the tool on `argv` (including the program name) and returns the exit code:
/// 0 on success, 1 when a checked claim is refuted, 2 on usage or input errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                0
            } else {
                let _ = write!(err, "{}", e.render());
                2
            };
        }
    };
    if let Some(n) = std::env::var("FRT_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0) {
        // the global pool can be configured once per process; later calls keep it
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = commands::execute(cli.command, out, err);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

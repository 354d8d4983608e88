//! `currentlab` command-line front end.

mod commands;
mod input;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "currentlab", version, about = "Integral currents on simplicial complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct InputArg {
    /// Chain JSON (or an .off mesh).
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct BallArgs {
    /// Center vertex of the ball.
    #[arg(long, default_value_t = 0)]
    pub center: usize,
    #[arg(long)]
    pub radius: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Mass of a chain and of its boundary.
    Mass(InputArg),
    /// Boundary chain.
    Boundary(InputArg),
    /// T(f dpi_1 ... dpi_k) for PL fields.
    Evaluate {
        #[command(flatten)]
        input: InputArg,
        /// Integrand field (x<i>, dist:<vertex>, dist:<x,y,..> or const:<c>).
        #[arg(long, default_value = "const:1")]
        field: String,
        /// One field per dimension of the chain.
        #[arg(long = "pi")]
        pis: Vec<String>,
    },
    /// Slice <T, f, s>.
    Slice {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        field: String,
        #[arg(long)]
        level: f64,
    },
    /// Ball S(p, r) = T restricted to rho_p < r.
    Ball {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Sphere <T, rho_p, r>.
    Sphere {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        ball: BallArgs,
    },
    /// Integral of slice masses against Lip(f) M(T).
    Coarea {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        field: String,
        /// Number of sample levels.
        #[arg(long, default_value_t = 64)]
        grid: usize,
    },
    /// Flat norm of a chain, or flat distance to a second chain.
    Flatnorm {
        #[command(flatten)]
        input: InputArg,
        /// Second chain on the same complex.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Filling volume of a cycle.
    Fillvol(InputArg),
    /// Filling volume of a signed weighted point set.
    Fillvol0(InputArg),
    /// Sliced filling volume SF(p, r, F).
    Sf {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        ball: BallArgs,
        /// Slicing fields; without any, distance functions to --witness.
        #[arg(long)]
        field: Vec<String>,
        /// Witness vertices for distance functions.
        #[arg(long)]
        witness: Vec<usize>,
        #[arg(long, default_value_t = 32)]
        grid: usize,
    },
    /// SF_k(p, r), maximized over witness tuples on the sphere.
    Sfk {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 8)]
        candidates: usize,
        #[arg(long, default_value_t = 16)]
        grid: usize,
    },
    /// Tetrahedral property check.
    Tetra {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long = "C")]
        c: f64,
        #[arg(long, default_value_t = 0.5)]
        beta: f64,
        /// Levels per axis.
        #[arg(long, default_value_t = 5)]
        grid: usize,
        #[arg(long, default_value_t = 4)]
        candidates: usize,
    },
    /// T x I_eps.
    Product {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        layers: usize,
    },
    /// Interval filling volume IFV_eps.
    Ifv {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        layers: usize,
    },
    /// Sliced interval filling volume.
    Sif {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        field: Vec<String>,
        #[arg(long, default_value_t = 16)]
        grid: usize,
    },
    /// Gromov-Hausdorff bounds between two finite metric spaces.
    Gh {
        /// Distance matrix CSV, point CSV or point-set JSON.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        against: PathBuf,
        #[arg(long, default_value_t = 8)]
        exact_limit: usize,
    },
    /// Packing number N(X, r).
    Pack {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        radius: f64,
        /// Use exact branch and bound up to this many points.
        #[arg(long, default_value_t = 0)]
        exact_limit: usize,
    },
    /// Convergence experiments on sequence families.
    Lab {
        #[command(subcommand)]
        action: LabAction,
    },
}

#[derive(Subcommand, Debug)]
pub enum LabAction {
    /// Run one quantity along a family.
    Run(LabRun),
}

#[derive(Args, Debug, Clone)]
pub struct LabRun {
    /// refined_disk, refined_sphere, thin_torus or sphere_splines.
    #[arg(long)]
    pub family: String,
    /// fillvol, sf, sfk, ifv, sif, or mass (semicontinuity).
    #[arg(long)]
    pub quantity: String,
    /// Comma-separated schedule.
    #[arg(long, value_delimiter = ',', required = true)]
    pub schedule: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.5)]
    pub radius: f64,
    #[arg(long, default_value_t = 16)]
    pub grid: usize,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 8)]
    pub candidates: usize,
}

/// Exit statuses.
pub const EXIT_ASSERTION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CURRENTLAB_LOG", "warn")).init();
    if cli.threads == 0 {
        eprintln!("error: --threads must be at least 1");
        return ExitCode::from(EXIT_INPUT);
    }
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build_global() {
        log::warn!("thread pool already initialized: {e}");
    }
    match commands::dispatch(&cli.command) {
        Ok(out) => {
            if let Err(e) = report::emit(&out.report, cli.format, cli.output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INPUT);
            }
            for w in &out.failures {
                eprintln!("assertion failed: {w}");
            }
            if out.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_ASSERTION)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}

//! `nodal-atlas`: curvature and spectral experiments on nodal sets of planar
//! harmonic functions.

mod commands;
mod failure;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use failure::Failure;

#[derive(Parser)]
#[command(name = "nodal-atlas", version, about)]
struct Cli {
    /// Directory for reports and artifacts; relative artifact paths land here.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the extremal curvature at the origin and trace its nodal set.
    Extremal(ExtremalArgs),
    /// Trace the nodal set of a function read from JSON.
    Trace(TraceArgs),
    /// Run a verification suite over a range of vanishing orders.
    Verify(VerifyArgs),
    /// Frequency, doubling index and tail radius of a function read from JSON.
    Spectrum(SpectrumArgs),
    /// Areas of the positive and negative sets in a disk.
    Area(AreaArgs),
    /// Curvature bound at an interior point and the transported extremizer.
    Mobius(MobiusArgs),
    /// Convergence table of the mollified comb construction.
    Sharpness(SharpnessArgs),
}

#[derive(Args)]
struct ExtremalSelect {
    /// JSON file `{"n": .., "phi0_index": .., "K": ..}`; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    phi0_index: Option<usize>,
    /// Series truncation order K.
    #[arg(long = "truncation")]
    truncation: Option<usize>,
}

#[derive(Args)]
struct CurveOutput {
    #[arg(long)]
    emit_svg: Option<PathBuf>,
    /// Write one `<prefix>_curve_<i>.csv` per traced curve.
    #[arg(long)]
    emit_csv: bool,
    #[arg(long, default_value_t = 0.98)]
    stop_radius: f64,
    /// Side of the sign-change grid used to find curves away from the origin; 0 disables it.
    #[arg(long, default_value_t = 64)]
    seed_grid: usize,
}

#[derive(Args)]
struct ExtremalArgs {
    #[command(flatten)]
    select: ExtremalSelect,
    #[command(flatten)]
    curves: CurveOutput,
}

#[derive(Args)]
struct TraceArgs {
    /// `PowerSeries` or boundary-data JSON.
    #[arg(long)]
    input: PathBuf,
    /// Coefficients kept when extending boundary data.
    #[arg(long, default_value_t = 64)]
    truncation: usize,
    #[command(flatten)]
    curves: CurveOutput,
}

#[derive(Args)]
struct VerifyArgs {
    /// 1: bound on random admissible functions; 2: extremal attainment;
    /// 3: uniform curvature near the origin; 4: frequency and area chain.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    theorem: u8,
    /// Orders to check, e.g. `2` or `1..3` (inclusive).
    #[arg(long, value_parser = input::parse_range)]
    n: std::ops::RangeInclusive<usize>,
    #[arg(long, default_value_t = 500)]
    samples: usize,
    /// Required by the randomized suites (1, 3, 4).
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 64)]
    truncation: usize,
    /// Disk radius for the uniform scan of suite 3.
    #[arg(long, default_value_t = 0.5)]
    radius: f64,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 64)]
    truncation: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75")]
    radii: Vec<f64>,
    /// Number of nodal domains N; defaults to twice the vanishing order.
    #[arg(long)]
    domains: Option<usize>,
}

#[derive(Args)]
struct AreaArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 64)]
    truncation: usize,
    /// Disk radius; defaults to the tail radius for `--domains`.
    #[arg(long)]
    r0: Option<f64>,
    #[arg(long)]
    domains: Option<usize>,
    #[arg(long, default_value_t = 256)]
    resolution: usize,
}

#[derive(Args)]
struct MobiusArgs {
    #[command(flatten)]
    select: ExtremalSelect,
    /// Interior point as `re,im`.
    #[arg(long, value_parser = input::parse_complex)]
    p: num_complex::Complex64,
}

#[derive(Args)]
struct SharpnessArgs {
    #[arg(long)]
    n: usize,
    /// Comb spacing; defaults to 1/(4n).
    #[arg(long)]
    eps0: Option<f64>,
    /// Mollifier widths are eps0 divided by each entry.
    #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
    divisors: Vec<f64>,
    #[arg(long, default_value_t = 1e-4)]
    lambda: f64,
    #[arg(long, default_value_t = 64)]
    truncation: usize,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("NODAL_ATLAS_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| Failure::Config(format!("NODAL_ATLAS_THREADS={value:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads()?;
    let out = output::Output::new(cli.out_dir)?;
    match cli.command {
        Command::Extremal(a) => commands::extremal(&out, a),
        Command::Trace(a) => commands::trace(&out, a),
        Command::Verify(a) => commands::verify(&out, a),
        Command::Spectrum(a) => commands::spectrum(&out, a),
        Command::Area(a) => commands::area(&out, a),
        Command::Mobius(a) => commands::mobius(&out, a),
        Command::Sharpness(a) => commands::sharpness(&out, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}

mod pipeline;
mod ranges;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use multicover::bifiltration::Model;
use multicover::io::{GeneratorKind, GeneratorSpec};

use pipeline::{Outputs, Settings, Source};
use ranges::{parse_hom_dims, parse_k_range, parse_radius_grid, RadiusGrid};

/// Multicover bifiltrations of point clouds: rhomboid tilings, grade-wise
/// homology, barcodes, Hilbert functions and FIREP export.
#[derive(Parser)]
#[command(name = "multicover", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Point file: one point per line, decimals separated by commas or
    /// whitespace.
    #[arg(long, global = true, conflicts_with = "generator")]
    input: Option<PathBuf>,
    /// Draw the sites from a generator instead of reading a file
    /// (uniform-square, uniform-cube, disk, annulus, noisy-annulus).
    #[arg(long, global = true)]
    generator: Option<GeneratorKind>,
    /// Number of generated sites.
    #[arg(long, global = true, default_value_t = 100)]
    n: usize,
    /// Percentage of uniform noise in a noisy annulus.
    #[arg(long, global = true, default_value_t = 0.0)]
    noise: f64,
    /// Per-coordinate perturbation bound of annulus samples.
    #[arg(long, global = true, default_value_t = 0.05)]
    err: f64,
    /// Circle or disk radius of generated samples.
    #[arg(long, global = true, default_value_t = 0.25)]
    radius: f64,
    /// Move every coordinate by a seeded uniform offset of at most this size.
    #[arg(long, global = true)]
    jitter: Option<f64>,
    /// Dimension of the input points (checked when reading a file).
    #[arg(long, global = true, value_parser = clap::value_parser!(u8).range(1..=3))]
    dim: Option<u8>,
    /// Largest depth to analyse; defaults to the number of sites.
    #[arg(long = "max-k", global = true)]
    max_k: Option<usize>,
    /// Radius grid size for FIREP export; 0 keeps exact radii.
    #[arg(long, global = true, default_value_t = 100)]
    snap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// rhomb, srhomb, sdel or cech-oracle.
    #[arg(long, global = true, default_value = "rhomb")]
    model: Model,
    /// Homology degrees, comma separated.
    #[arg(long = "hom-dim", global = true, default_value = "0,1", value_parser = parse_hom_dims)]
    hom_dim: std::vec::Vec<usize>,
    /// Radii `from:to:count`.
    #[arg(long = "r-grid", global = true, value_parser = parse_radius_grid)]
    r_grid: Option<RadiusGrid>,
    /// Depths `from:to`.
    #[arg(long = "k-range", global = true, value_parser = parse_k_range)]
    k_range: Option<(usize, usize)>,
    /// Output directory.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Write the sites to points.txt.
    Generate,
    /// Write the rhomboid tiling to tiling.json.
    Tiling,
    /// Betti numbers at one radius for every depth, to betti.csv.
    Betti {
        /// The radius (not squared).
        #[arg(long = "at")]
        at: String,
    },
    /// Barcodes along the radius at each fixed depth, to barcode_k<k>.txt.
    Barcode,
    /// Hilbert function on the radius grid, to hilbert.csv and one PGM image
    /// per degree.
    Hilbert {
        /// Ranks at or above this value are drawn black; defaults to the
        /// largest rank.
        #[arg(long)]
        saturate: Option<usize>,
    },
    /// FIREP documents, one per degree, to firep_h<i>.txt.
    Firep,
    /// Cell counts as JSON, to stats.json and standard output.
    Stats,
    /// Compare all models against the brute-force oracle, to validate.txt.
    Validate,
}

fn settings(g: &Global) -> Result<Settings> {
    let source = match (&g.input, g.generator) {
        (Some(path), _) => Source::File {
            path: path.clone(),
            dim: g.dim.map(usize::from),
        },
        (None, Some(kind)) => Source::Generated(GeneratorSpec {
            radius: g.radius,
            noise_percent: g.noise,
            err: g.err,
            ..GeneratorSpec::new(kind, g.n, g.seed)
        }),
        (None, None) => bail!("give the sites with --input FILE or --generator KIND"),
    };
    Ok(Settings {
        source,
        jitter: g.jitter.map(|m| (m, g.seed)),
        max_k: g.max_k,
        model: g.model,
        hom_dims: g.hom_dim.clone(),
        r_grid: g.r_grid.clone(),
        k_range: g.k_range,
        snap: g.snap,
    })
}

fn run(cli: Cli) -> Result<bool> {
    let s = settings(&cli.global)?;
    if s.snap == 1 {
        bail!("--snap needs at least 2 grid points, or 0 to disable snapping");
    }
    let mut out = Outputs::default();
    let mut ok = true;
    match &cli.command {
        Command::Generate => pipeline::run_generate(&s, &mut out)?,
        Command::Tiling => pipeline::run_tiling(&s, &mut out)?,
        Command::Betti { at } => {
            let grid = parse_radius_grid(&format!("{at}:{at}:1"))?;
            pipeline::run_betti(&s, &grid, &mut out)?
        }
        Command::Barcode => pipeline::run_barcode(&s, &mut out)?,
        Command::Hilbert { saturate } => pipeline::run_hilbert(&s, *saturate, &mut out)?,
        Command::Firep => pipeline::run_firep(&s, &mut out)?,
        Command::Stats => print!("{}", pipeline::run_stats(&s, &mut out)?),
        Command::Validate => {
            ok = pipeline::run_validate(&s, &mut out)?;
        }
    }
    for path in out.commit(&cli.global.out)? {
        info!("wrote {}", path.display());
    }
    if matches!(cli.command, Command::Validate) {
        for name in out.names() {
            let text = std::fs::read_to_string(cli.global.out.join(name))?;
            print!("{text}");
        }
    }
    Ok(ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

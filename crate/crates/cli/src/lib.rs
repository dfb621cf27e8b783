//! Command-line front end for the `nsdwt` transforms.

pub mod bench;
pub mod io;
pub mod plot;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use nsdwt::lifting::{count_operations, format_count_table};
use nsdwt::{
    build_scheme, CountConvention, Engine, EngineError, Precision, Sample, SchemeError, SchemeKind,
    TileConfig, Wavelet,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Verification(_) => EXIT_VERIFY_FAILED,
        }
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SchemeError> for CliError {
    fn from(e: SchemeError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn write_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("cannot write output: {e}"))
}

/// `WxH` or a single number for square tiles.
pub fn parse_tile(s: &str) -> Result<(usize, usize), String> {
    let parse = |v: &str| {
        v.trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| format!("invalid tile `{s}`: expected WxH with positive integers, e.g. 32x32"))
    };
    match s.split_once(['x', 'X']) {
        Some((w, h)) => Ok((parse(w)?, parse(h)?)),
        None => parse(s).map(|n| (n, n)),
    }
}

/// Comma-separated image sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

pub fn parse_sizes(s: &str) -> Result<Sizes, String> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<usize>()
                .map_err(|_| format!("invalid size `{v}` in `{s}`: expected comma-separated integers"))
        })
        .collect::<Result<_, _>>()
        .map(Sizes)
}

fn parse_wavelet(s: &str) -> Result<Wavelet, String> {
    s.parse().map_err(|e: SchemeError| format!("{e} (expected cdf53 or cdf97)"))
}

fn parse_scheme(s: &str) -> Result<SchemeKind, String> {
    s.parse()
        .map_err(|e: SchemeError| format!("{e} (expected conv, sep-lift, ns-lift or ns-lift-split)"))
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    s.parse()
}

fn parse_convention(s: &str) -> Result<CountConvention, String> {
    s.parse().map_err(|e: SchemeError| format!("{e} (expected mac, mac-no-scale or mac-scaled)"))
}

#[derive(Debug, Parser)]
#[command(name = "nsdwt", version, about = "Single-level 2-D wavelet transforms with separable and non-separable lifting")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Forward transform of a PGM or raw image into four subband files.
    Transform(TransformArgs),
    /// Rebuild an image from subband files.
    Inverse(InverseArgs),
    /// Check cross-scheme agreement, reconstruction and fusion identities on seeded random images.
    Verify(VerifyArgs),
    /// Print steps and operations per quadruple for every scheme.
    Count(CountArgs),
    /// Measure forward-transform throughput over a size sweep.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ExecArgs {
    /// Tile size in quadruples (2×2 pixel blocks), WxH.
    #[arg(long, default_value = "64x64", value_parser = parse_tile)]
    pub tile: (usize, usize),
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
    /// Synchronize after every pass instead of only at scheme barriers.
    #[arg(long)]
    pub unfused: bool,
}

impl ExecArgs {
    pub fn tile_config(&self) -> TileConfig {
        TileConfig::new(self.tile.0, self.tile.1, self.threads as usize).with_fused(!self.unfused)
    }
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Output prefix: writes PREFIX.{ll,hl,lh,hh}.raw, or PREFIX.raw with --interleaved.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "cdf53", value_parser = parse_wavelet)]
    pub wavelet: Wavelet,
    #[arg(long, default_value = "ns-lift", value_parser = parse_scheme)]
    pub scheme: SchemeKind,
    #[arg(long, default_value = "double", value_parser = parse_precision)]
    pub precision: Precision,
    /// Write one image-sized file with the subbands in their pixel positions.
    #[arg(long)]
    pub interleaved: bool,
    #[command(flatten)]
    pub exec: ExecArgs,
}

#[derive(Debug, Clone, Args)]
pub struct InverseArgs {
    /// Prefix the subband files were written with.
    #[arg(long)]
    pub input: PathBuf,
    /// Output image; `.pgm` writes 8-bit PGM, anything else raw.
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value = "cdf53", value_parser = parse_wavelet)]
    pub wavelet: Wavelet,
    #[arg(long, default_value = "ns-lift", value_parser = parse_scheme)]
    pub scheme: SchemeKind,
    #[arg(long, default_value = "double", value_parser = parse_precision)]
    pub precision: Precision,
    #[arg(long)]
    pub interleaved: bool,
    #[command(flatten)]
    pub exec: ExecArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Restrict to one wavelet (default: both).
    #[arg(long, value_parser = parse_wavelet)]
    pub wavelet: Option<Wavelet>,
    #[arg(long, default_value = "double", value_parser = parse_precision)]
    pub precision: Precision,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of random images.
    #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
    pub images: u32,
    /// Largest image side; the first image is this size square.
    #[arg(long, default_value_t = 256, value_parser = clap::value_parser!(u32).range(2..))]
    pub max_size: u32,
    /// Corrupt one coefficient of the non-separable scheme (negative control).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
    #[command(flatten)]
    pub exec: ExecArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CountArgs {
    /// Restrict to one wavelet (default: both).
    #[arg(long, value_parser = parse_wavelet)]
    pub wavelet: Option<Wavelet>,
    /// Also print the per-pass breakdown under this convention.
    #[arg(long, value_parser = parse_convention)]
    pub convention: Option<CountConvention>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[arg(long, default_value = "cdf53", value_parser = parse_wavelet)]
    pub wavelet: Wavelet,
    /// Schemes to time; repeatable (default: all four).
    #[arg(long = "scheme", value_parser = parse_scheme)]
    pub schemes: Vec<SchemeKind>,
    /// Square image sides, comma-separated (default 64,128,...,8192).
    #[arg(long, value_parser = parse_sizes, conflicts_with = "up_to")]
    pub sizes: Option<Sizes>,
    /// Default power-of-two sweep truncated at this side.
    #[arg(long)]
    pub up_to: Option<usize>,
    #[arg(long, default_value = "single", value_parser = parse_precision)]
    pub precision: Precision,
    /// Timed repetitions per point; the median is reported.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(5..))]
    pub reps: u32,
    /// Untimed runs before the timed ones.
    #[arg(long, default_value_t = 1)]
    pub warmup: u32,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// CSV destination (default: stdout).
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// SVG plot destination.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    pub exec: ExecArgs,
}

fn transform_typed<T: Sample>(args: &TransformArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let image = io::read_image::<T>(&args.input)?;
    let scheme = build_scheme(args.scheme, &args.wavelet.plan())?;
    let quad = Engine::new(args.exec.tile_config())?.forward(&image, &scheme)?;
    for path in io::write_quad(&quad, &args.output, args.interleaved)? {
        writeln!(out, "wrote {} ({}x{} subbands)", path.display(), quad.width(), quad.height())
            .map_err(write_err)?;
    }
    Ok(())
}

fn inverse_typed<T: Sample>(args: &InverseArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let quad = io::read_quad::<T>(&args.input, args.interleaved)?;
    let scheme = build_scheme(args.scheme, &args.wavelet.plan())?;
    let image = Engine::new(args.exec.tile_config())?.inverse(&quad, &scheme)?;
    io::write_image(&image, &args.output)?;
    writeln!(out, "wrote {} ({}x{})", args.output.display(), image.width(), image.height())
        .map_err(write_err)
}

pub fn cmd_transform(args: &TransformArgs, out: &mut dyn Write) -> Result<(), CliError> {
    match args.precision {
        Precision::Single => transform_typed::<f32>(args, out),
        Precision::Double => transform_typed::<f64>(args, out),
    }
}

pub fn cmd_inverse(args: &InverseArgs, out: &mut dyn Write) -> Result<(), CliError> {
    match args.precision {
        Precision::Single => inverse_typed::<f32>(args, out),
        Precision::Double => inverse_typed::<f64>(args, out),
    }
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = verify::VerifyConfig {
        wavelets: args.wavelet.map_or_else(|| Wavelet::ALL.to_vec(), |w| vec![w]),
        precision: args.precision,
        seed: args.seed,
        images: args.images as usize,
        max_size: args.max_size as usize,
        tile: args.exec.tile_config(),
        inject_fault: args.inject_fault,
    };
    let report = verify::run_verify(&cfg)?;
    write!(out, "{report}").map_err(write_err)?;
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
        Err(CliError::Verification(names.join("; ")))
    }
}

pub fn cmd_count(args: &CountArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let wavelets = args.wavelet.map_or_else(|| Wavelet::ALL.to_vec(), |w| vec![w]);
    for (i, wavelet) in wavelets.into_iter().enumerate() {
        if i > 0 {
            writeln!(out).map_err(write_err)?;
        }
        let plan = wavelet.plan();
        let schemes = SchemeKind::ALL
            .iter()
            .map(|&k| build_scheme(k, &plan))
            .collect::<Result<Vec<_>, _>>()?;
        write!(out, "{}", format_count_table(wavelet.title(), &schemes)).map_err(write_err)?;
        if let Some(convention) = args.convention {
            for s in &schemes {
                write!(out, "{}", count_operations(s, convention)).map_err(write_err)?;
            }
        }
    }
    Ok(())
}

pub fn cmd_bench(args: &BenchArgs, out: &mut dyn Write, log: &mut dyn Write) -> Result<(), CliError> {
    let sizes = match (&args.sizes, args.up_to) {
        (Some(sizes), _) => sizes.0.clone(),
        (None, Some(limit)) => bench::DEFAULT_SIZES.iter().copied().filter(|&s| s <= limit).collect(),
        (None, None) => bench::DEFAULT_SIZES.to_vec(),
    };
    if sizes.is_empty() {
        return Err(CliError::Usage("no image sizes selected".into()));
    }
    let cfg = bench::BenchConfig {
        wavelet: args.wavelet,
        schemes: if args.schemes.is_empty() { SchemeKind::ALL.to_vec() } else { args.schemes.clone() },
        sizes,
        precision: args.precision,
        tile: args.exec.tile_config(),
        reps: args.reps as usize,
        warmup: args.warmup as usize,
        seed: args.seed,
    };
    let records = bench::run_bench(&cfg, &mut |r| {
        let _ = writeln!(log, "{:>14} {:>5}x{:<5} {:.6} s  {:.3} GB/s", r.scheme, r.width, r.height, r.median_seconds, r.gbps);
    })?;
    let csv = bench::to_csv(&records);
    match &args.csv {
        Some(path) => io::write_file(path, csv.as_bytes())?,
        None => out.write_all(csv.as_bytes()).map_err(write_err)?,
    }
    if let Some(path) = &args.plot {
        let title = format!("{} forward transform, {} precision", args.wavelet.title(), args.precision);
        io::write_file(path, plot::render_svg(&title, &records).as_bytes())?;
    }
    Ok(())
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Transform(a) => cmd_transform(a, out),
        Command::Inverse(a) => cmd_inverse(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Count(a) => cmd_count(a, out),
        Command::Bench(a) => cmd_bench(a, out, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tile_parsing() {
        assert_eq!(parse_tile("32x16"), Ok((32, 16)));
        assert_eq!(parse_tile("8"), Ok((8, 8)));
        assert!(parse_tile("0x4").is_err());
        assert!(parse_tile("axb").is_err());
    }

    #[test]
    fn sizes_parsing() {
        assert_eq!(parse_sizes("64, 128"), Ok(Sizes(vec![64, 128])));
        assert!(parse_sizes("64,x").is_err());
    }

    #[test]
    fn conflicting_size_options_are_rejected() {
        let e = Cli::try_parse_from(["nsdwt", "bench", "--sizes", "64", "--up-to", "128"]).unwrap_err();
        assert_eq!(e.kind(), clap::error::ErrorKind::ArgumentConflict);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

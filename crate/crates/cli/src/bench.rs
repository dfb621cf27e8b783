//! Forward-transform throughput over a size sweep.

use std::fmt::Write as _;
use std::time::Instant;

use nsdwt::{build_scheme, Engine, Precision, Sample, SchemeKind, TileConfig, Wavelet};

use crate::verify::random_image;
use crate::CliError;

pub const CSV_HEADER: &str =
    "wavelet,scheme,width,height,precision,threads,tile,reps,median_seconds,gbps";

/// Square sizes 2⁶ … 2¹³.
pub const DEFAULT_SIZES: [usize; 8] = [64, 128, 256, 512, 1024, 2048, 4096, 8192];
pub const MIN_REPS: usize = 5;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub wavelet: Wavelet,
    pub schemes: Vec<SchemeKind>,
    pub sizes: Vec<usize>,
    pub precision: Precision,
    pub tile: TileConfig,
    pub reps: usize,
    pub warmup: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            wavelet: Wavelet::Cdf53,
            schemes: SchemeKind::ALL.to_vec(),
            sizes: DEFAULT_SIZES.to_vec(),
            precision: Precision::Single,
            tile: TileConfig::default(),
            reps: MIN_REPS,
            warmup: 1,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub wavelet: String,
    pub scheme: String,
    pub width: usize,
    pub height: usize,
    pub precision: Precision,
    pub threads: usize,
    pub tile: String,
    pub reps: usize,
    pub median_seconds: f64,
    pub gbps: f64,
}

impl BenchRecord {
    /// Input bytes of one forward transform.
    pub fn bytes(&self) -> usize {
        self.width * self.height * self.precision.bytes()
    }

    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.9},{:.6}",
            self.wavelet,
            self.scheme,
            self.width,
            self.height,
            self.precision,
            self.threads,
            self.tile,
            self.reps,
            self.median_seconds,
            self.gbps
        )
    }
}

pub fn median(samples: &mut [f64]) -> f64 {
    assert!(!samples.is_empty(), "median of nothing");
    samples.sort_by(f64::total_cmp);
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid]
    } else {
        0.5 * (samples[mid - 1] + samples[mid])
    }
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(out, "{}", r.csv_line());
    }
    out
}

fn run_typed<T: Sample>(
    cfg: &BenchConfig,
    progress: &mut dyn FnMut(&BenchRecord),
) -> Result<Vec<BenchRecord>, CliError> {
    let engine = Engine::new(cfg.tile)?;
    let plan = cfg.wavelet.plan();
    let tile = format!("{}x{}", cfg.tile.tile_width, cfg.tile.tile_height);
    let mut records = Vec::new();
    for &size in &cfg.sizes {
        let image = random_image::<T>(size, size, cfg.seed.wrapping_add(size as u64));
        for &kind in &cfg.schemes {
            let scheme = build_scheme(kind, &plan)?;
            for _ in 0..cfg.warmup {
                engine.forward(&image, &scheme)?;
            }
            let mut times = Vec::with_capacity(cfg.reps);
            for _ in 0..cfg.reps {
                let start = Instant::now();
                let quad = engine.forward(&image, &scheme)?;
                times.push(start.elapsed().as_secs_f64());
                drop(quad);
            }
            // Guard against a zero reading from a coarse clock.
            let median_seconds = median(&mut times).max(1e-9);
            let record = BenchRecord {
                wavelet: cfg.wavelet.name().to_string(),
                scheme: kind.short_name().to_string(),
                width: size,
                height: size,
                precision: cfg.precision,
                threads: cfg.tile.threads,
                tile: tile.clone(),
                reps: cfg.reps,
                median_seconds,
                gbps: 0.0,
            };
            let gbps = record.bytes() as f64 / median_seconds / 1e9;
            let record = BenchRecord { gbps, ..record };
            progress(&record);
            records.push(record);
        }
    }
    Ok(records)
}

pub fn run_bench(
    cfg: &BenchConfig,
    progress: &mut dyn FnMut(&BenchRecord),
) -> Result<Vec<BenchRecord>, CliError> {
    if cfg.reps < MIN_REPS {
        return Err(CliError::Usage(format!("at least {MIN_REPS} repetitions are required")));
    }
    if let Some(bad) = cfg.sizes.iter().find(|&&s| s == 0 || s % 2 != 0) {
        return Err(CliError::Usage(format!("dimensions must be even, got {bad}x{bad}")));
    }
    match cfg.precision {
        Precision::Single => run_typed::<f32>(cfg, progress),
        Precision::Double => run_typed::<f64>(cfg, progress),
    }
}

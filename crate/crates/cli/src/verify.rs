//! Seeded self-check of the transform invariants.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nsdwt::lifting::{build_nonseparable_step_matrices, build_separable_step_matrices, fuse, Scheme};
use nsdwt::{
    build_scheme, Engine, Image2D, Mode, Precision, Sample, SchemeKind, StepMatrix, SubbandQuad,
    TileConfig, Wavelet,
};

use crate::CliError;

/// Per-coefficient tolerance of the float fusion identities.
pub const FUSION_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub wavelets: Vec<Wavelet>,
    pub precision: Precision,
    pub seed: u64,
    pub images: usize,
    pub max_size: usize,
    pub tile: TileConfig,
    /// Negates one predict coefficient of the non-separable scheme.
    pub inject_fault: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            wavelets: Wavelet::ALL.to_vec(),
            precision: Precision::Double,
            seed: 1,
            images: 20,
            max_size: 256,
            tile: TileConfig::new(32, 32, 1),
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {}: {:.3e} (tol {:.0e})", self.name, self.value, self.tolerance)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        writeln!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

/// Random even dimensions, the first image being `max_size` square.
pub fn corpus_dimensions(seed: u64, images: usize, max_size: usize) -> Vec<(usize, usize)> {
    let half = (max_size / 2).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..images)
        .map(|i| {
            if i == 0 {
                (2 * half, 2 * half)
            } else {
                (2 * rng.gen_range(1..=half), 2 * rng.gen_range(1..=half))
            }
        })
        .collect()
}

pub fn random_image<T: Sample>(width: usize, height: usize, seed: u64) -> Image2D<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Image2D::from_fn(width, height, |_, _| T::from_f64(rng.gen_range(0.0..1.0)))
        .expect("positive dimensions")
}

fn cross_tolerance(precision: Precision) -> f64 {
    match precision {
        Precision::Double => 1e-9,
        Precision::Single => 1e-3,
    }
}

/// Reconstruction tolerance per wavelet and precision.
pub fn reconstruction_tolerance(wavelet: Wavelet, precision: Precision) -> f64 {
    match (precision, wavelet) {
        (Precision::Single, _) => 1e-3,
        (Precision::Double, Wavelet::Cdf53) => 1e-12,
        (Precision::Double, Wavelet::Cdf97) => 1e-9,
    }
}

fn fusion_checks(wavelet: Wavelet) -> Result<Vec<Check>, CliError> {
    let plan = wavelet.plan();
    let tolerance = match plan.mode {
        Mode::Exact => 0.0,
        Mode::Float => FUSION_TOLERANCE,
    };
    let mut checks = Vec::new();
    for (k, pair) in plan.pairs.iter().enumerate() {
        let sep = build_separable_step_matrices(pair);
        let (t, s) = build_nonseparable_step_matrices(pair).map_err(internal)?;
        let dt = fuse(&sep.predict_v, &sep.predict_h).map_err(internal)?.max_coefficient_diff(&t);
        let ds = fuse(&sep.update_v, &sep.update_h).map_err(internal)?.max_coefficient_diff(&s);
        checks.push(Check {
            name: format!("fusion {wavelet} pair {} T[P]", k + 1),
            value: dt,
            tolerance,
        });
        checks.push(Check {
            name: format!("fusion {wavelet} pair {} S[U]", k + 1),
            value: ds,
            tolerance,
        });
    }
    Ok(checks)
}

fn internal(e: impl fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Flips the sign of the first off-diagonal entry of the first pass.
pub fn corrupt(scheme: &mut Scheme) {
    let m = &scheme.passes[0].matrix;
    let mut entries = m.entries().clone();
    let (r, c) = (0..4)
        .flat_map(|r| (0..4).map(move |c| (r, c)))
        .find(|&(r, c)| r != c && !entries[r][c].is_zero())
        .expect("first pass has an off-diagonal entry");
    entries[r][c] = entries[r][c].neg();
    scheme.passes[0].matrix = StepMatrix::from_entries(m.label.clone(), entries).expect("same mode");
}

fn run_typed<T: Sample>(cfg: &VerifyConfig) -> Result<VerifyReport, CliError> {
    let engine = Engine::new(cfg.tile)?;
    let mut report = VerifyReport::default();
    let dims = corpus_dimensions(cfg.seed, cfg.images, cfg.max_size);
    for &wavelet in &cfg.wavelets {
        report.checks.extend(fusion_checks(wavelet)?);
        let plan = wavelet.plan();
        let mut schemes = Vec::new();
        for kind in SchemeKind::ALL {
            let mut s = build_scheme(kind, &plan)?;
            if cfg.inject_fault && kind == SchemeKind::NonSeparableLifting {
                corrupt(&mut s);
            }
            schemes.push(s);
        }
        let n = schemes.len();
        let mut cross = vec![vec![0.0f64; n]; n];
        let mut recon = vec![0.0f64; n];
        for (i, &(w, h)) in dims.iter().enumerate() {
            let img = random_image::<T>(w, h, cfg.seed.wrapping_add(i as u64));
            let quads: Vec<SubbandQuad<T>> = schemes
                .iter()
                .map(|s| engine.forward(&img, s))
                .collect::<Result<_, _>>()?;
            for a in 0..n {
                for b in a + 1..n {
                    cross[a][b] = cross[a][b].max(quads[a].max_abs_diff(&quads[b]));
                }
                let back = engine.inverse(&quads[a], &schemes[a])?;
                recon[a] = recon[a].max(back.max_abs_diff(&img));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                report.checks.push(Check {
                    name: format!("cross-scheme {wavelet} {} vs {}", schemes[a].kind, schemes[b].kind),
                    value: cross[a][b],
                    tolerance: cross_tolerance(cfg.precision),
                });
            }
        }
        for a in 0..n {
            report.checks.push(Check {
                name: format!("reconstruction {wavelet} {}", schemes[a].kind),
                value: recon[a],
                tolerance: reconstruction_tolerance(wavelet, cfg.precision),
            });
        }
    }
    Ok(report)
}

pub fn run_verify(cfg: &VerifyConfig) -> Result<VerifyReport, CliError> {
    match cfg.precision {
        Precision::Single => run_typed::<f32>(cfg),
        Precision::Double => run_typed::<f64>(cfg),
    }
}

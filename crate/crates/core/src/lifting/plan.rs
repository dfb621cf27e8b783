use std::fmt;
use std::str::FromStr;

use crate::engine::boundary::reflect_phase;
use crate::error::SchemeError;
use crate::laurent::{Coefficient, LaurentPoly1, Mode};

/// One predict/update pair of the lifting factorization.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftingPair {
    pub predict: LaurentPoly1,
    pub update: LaurentPoly1,
}

impl LiftingPair {
    pub fn new(predict: LaurentPoly1, update: LaurentPoly1) -> Self {
        LiftingPair { predict, update }
    }
}

/// Analysis filters of a wavelet.
///
/// Filter taps `g_n` weight the input sample `x[2i + 1 - n]` for the `i`-th
/// output, so `polyphase_split(g)` yields the (odd-sample, even-sample)
/// entries of the polyphase row in its `even`/`odd` fields respectively.
#[derive(Clone, Debug, PartialEq)]
pub struct FilterPair {
    pub low: LaurentPoly1,
    pub high: LaurentPoly1,
}

/// A wavelet given as a sequence of lifting steps and optional gains.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftingPlan {
    pub name: String,
    pub mode: Mode,
    pub pairs: Vec<LiftingPair>,
    /// `(low_gain, high_gain)` applied after the last update.
    pub scale: Option<(Coefficient, Coefficient)>,
    /// Reference filters checked against the lifting product, if known.
    pub filters: Option<FilterPair>,
}

impl LiftingPlan {
    pub fn new(
        name: impl Into<String>,
        pairs: Vec<LiftingPair>,
        scale: Option<(Coefficient, Coefficient)>,
    ) -> Result<Self, SchemeError> {
        let name = name.into();
        let Some(first) = pairs.first() else {
            return Err(SchemeError::EmptyPlan(name));
        };
        let mode = first.predict.mode();
        let mut modes = pairs
            .iter()
            .flat_map(|p| [p.predict.mode(), p.update.mode()])
            .chain(scale.iter().flat_map(|(l, h)| [l.mode(), h.mode()]));
        if let Some(bad) = modes.find(|m| *m != mode) {
            return Err(crate::error::AlgebraError::ModeMismatch {
                left: mode,
                right: bad,
            }
            .into());
        }
        Ok(LiftingPlan {
            name,
            mode,
            pairs,
            scale,
            filters: None,
        })
    }

    pub fn with_filters(mut self, low: LaurentPoly1, high: LaurentPoly1) -> Self {
        self.filters = Some(FilterPair { low, high });
        self
    }

    /// Promotes every polynomial and gain to float mode.
    pub fn to_float(&self) -> Self {
        LiftingPlan {
            name: self.name.clone(),
            mode: Mode::Float,
            pairs: self
                .pairs
                .iter()
                .map(|p| LiftingPair::new(p.predict.to_float(), p.update.to_float()))
                .collect(),
            scale: self
                .scale
                .as_ref()
                .map(|(l, h)| (l.to_float(), h.to_float())),
            filters: self.filters.as_ref().map(|f| FilterPair {
                low: f.low.to_float(),
                high: f.high.to_float(),
            }),
        }
    }

    /// Plan with a single `P = 0`, `U = 0` pair.
    pub fn trivial(mode: Mode) -> Self {
        LiftingPlan::new(
            "trivial",
            vec![LiftingPair::new(LaurentPoly1::zero(mode), LaurentPoly1::zero(mode))],
            None,
        )
        .expect("one pair")
    }

    /// Single-level 1-D forward transform of an even-length signal with
    /// whole-sample symmetric extension. Returns `(low, high)`.
    pub fn forward_1d(&self, signal: &[f64]) -> (Vec<f64>, Vec<f64>) {
        assert!(
            signal.len() >= 2 && signal.len().is_multiple_of(2),
            "signal length must be even and non-zero"
        );
        let mut even: Vec<f64> = signal.iter().step_by(2).copied().collect();
        let mut odd: Vec<f64> = signal.iter().skip(1).step_by(2).copied().collect();
        for pair in &self.pairs {
            lift(&mut odd, &even, 0, &pair.predict, 1.0);
            lift(&mut even, &odd, 1, &pair.update, 1.0);
        }
        if let Some((low, high)) = &self.scale {
            even.iter_mut().for_each(|x| *x *= low.to_f64());
            odd.iter_mut().for_each(|x| *x *= high.to_f64());
        }
        (even, odd)
    }

    pub fn inverse_1d(&self, low: &[f64], high: &[f64]) -> Vec<f64> {
        assert_eq!(low.len(), high.len());
        let mut even = low.to_vec();
        let mut odd = high.to_vec();
        if let Some((lg, hg)) = &self.scale {
            even.iter_mut().for_each(|x| *x /= lg.to_f64());
            odd.iter_mut().for_each(|x| *x /= hg.to_f64());
        }
        for pair in self.pairs.iter().rev() {
            lift(&mut even, &odd, 1, &pair.update, -1.0);
            lift(&mut odd, &even, 0, &pair.predict, -1.0);
        }
        even.iter().zip(&odd).flat_map(|(&e, &o)| [e, o]).collect()
    }
}

/// `target[i] += sign · Σ_k c_k · source[i - k]`, reading `source` with
/// symmetric extension. `source_parity` is 0 for even samples.
fn lift(target: &mut [f64], source: &[f64], source_parity: usize, filter: &LaurentPoly1, sign: f64) {
    let taps: Vec<(i64, f64)> = filter
        .terms()
        .map(|(&k, c)| (-(k as i64), sign * c.to_f64()))
        .collect();
    let snapshot = source.to_vec();
    for (i, t) in target.iter_mut().enumerate() {
        for &(offset, c) in &taps {
            let j = reflect_phase(i as i64 + offset, source_parity, snapshot.len());
            *t += c * snapshot[j];
        }
    }
}

/// The two built-in wavelets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wavelet {
    Cdf53,
    Cdf97,
}

impl Wavelet {
    pub const ALL: [Wavelet; 2] = [Wavelet::Cdf53, Wavelet::Cdf97];

    pub fn name(self) -> &'static str {
        match self {
            Wavelet::Cdf53 => "cdf53",
            Wavelet::Cdf97 => "cdf97",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Wavelet::Cdf53 => "CDF 5/3",
            Wavelet::Cdf97 => "CDF 9/7",
        }
    }

    pub fn plan(self) -> LiftingPlan {
        match self {
            Wavelet::Cdf53 => cdf53(),
            Wavelet::Cdf97 => cdf97(),
        }
    }
}

impl fmt::Display for Wavelet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Wavelet {
    type Err = SchemeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cdf53" | "5/3" | "cdf5/3" => Ok(Wavelet::Cdf53),
            "cdf97" | "9/7" | "cdf9/7" => Ok(Wavelet::Cdf97),
            _ => Err(SchemeError::UnknownWavelet(s.to_string())),
        }
    }
}

fn exact(terms: &[(i32, i64, i64)]) -> LaurentPoly1 {
    LaurentPoly1::from_terms(
        Mode::Exact,
        terms.iter().map(|&(k, n, d)| (k, Coefficient::rational(n, d))),
    )
    .expect("exact terms")
}

fn float(terms: &[(i32, f64)]) -> LaurentPoly1 {
    LaurentPoly1::from_terms(Mode::Float, terms.iter().map(|&(k, c)| (k, Coefficient::float(c))))
        .expect("float terms")
}

/// CDF 5/3: `P = -(1/2)(1 + z)`, `U = (1/4)(1 + z⁻¹)`, no gains.
pub fn cdf53() -> LiftingPlan {
    let predict = exact(&[(0, -1, 2), (-1, -1, 2)]);
    let update = exact(&[(0, 1, 4), (1, 1, 4)]);
    LiftingPlan::new("cdf53", vec![LiftingPair::new(predict, update)], None)
        .expect("valid plan")
        .with_filters(
            exact(&[(-1, -1, 8), (0, 1, 4), (1, 3, 4), (2, 1, 4), (3, -1, 8)]),
            exact(&[(-1, -1, 2), (0, 1, 1), (1, -1, 2)]),
        )
}

pub const CDF97_ALPHA: f64 = -1.586_134_342_059_924;
pub const CDF97_BETA: f64 = -0.052_980_118_572_961;
pub const CDF97_GAMMA: f64 = 0.882_911_075_530_934;
pub const CDF97_DELTA: f64 = 0.443_506_852_043_971;
/// Low band is divided by this gain, high band multiplied by it.
pub const CDF97_K: f64 = 1.230_174_104_914_001;

/// CDF 9/7 with the usual four lifting constants and JPEG 2000 style gains
/// (`1/K` on the low band, `K` on the high band).
#[allow(clippy::excessive_precision)] // published taps, kept digit for digit
pub fn cdf97() -> LiftingPlan {
    let step = |c: f64, k: i32| float(&[(0, c), (k, c)]);
    let pairs = vec![
        LiftingPair::new(step(CDF97_ALPHA, -1), step(CDF97_BETA, 1)),
        LiftingPair::new(step(CDF97_GAMMA, -1), step(CDF97_DELTA, 1)),
    ];
    let low = [
        0.026_748_757_410_810,
        -0.016_864_118_442_875,
        -0.078_223_266_528_990,
        0.266_864_118_442_875,
        0.602_949_018_236_360,
    ];
    let high = [
        0.091_271_763_114_250,
        -0.057_543_526_228_500,
        -0.591_271_763_114_250,
        1.115_087_052_457,
    ];
    // Low is centred on x[2i] (n = 1), high on x[2i+1] (n = 0).
    let low_filter: Vec<(i32, f64)> = (-4i32..=4).map(|d| (1 - d, low[4 - d.unsigned_abs() as usize])).collect();
    let high_filter: Vec<(i32, f64)> = (-3i32..=3).map(|d| (-d, high[3 - d.unsigned_abs() as usize])).collect();
    LiftingPlan::new(
        "cdf97",
        pairs,
        Some((Coefficient::float(1.0 / CDF97_K), Coefficient::float(CDF97_K))),
    )
    .expect("valid plan")
    .with_filters(float(&low_filter), float(&high_filter))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn empty_plan_is_rejected() {
        assert!(matches!(
            LiftingPlan::new("none", vec![], None),
            Err(SchemeError::EmptyPlan(_))
        ));
    }

    #[test]
    fn mixed_mode_plan_is_rejected() {
        let p = LiftingPair::new(LaurentPoly1::one(Mode::Exact), LaurentPoly1::one(Mode::Float));
        assert!(LiftingPlan::new("mixed", vec![p], None).is_err());
    }

    #[test]
    fn one_dimensional_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for wavelet in Wavelet::ALL {
            let plan = wavelet.plan();
            for len in [2usize, 4, 6, 32, 66] {
                let x: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let (low, high) = plan.forward_1d(&x);
                let y = plan.inverse_1d(&low, &high);
                assert!(max_abs_diff(&x, &y) <= 1e-10 * 1.0, "{wavelet} len {len}");
            }
        }
    }

    #[test]
    fn cdf53_annihilates_linear_ramps() {
        let x: Vec<f64> = (0..16).map(|i| 3.0 + 0.5 * i as f64).collect();
        let (_, high) = cdf53().forward_1d(&x);
        // Interior samples only; the right edge reflects.
        assert!(high[..7].iter().all(|h| h.abs() < 1e-12), "{high:?}");
    }

    #[test]
    fn wavelet_names_parse() {
        assert_eq!("cdf53".parse::<Wavelet>().unwrap(), Wavelet::Cdf53);
        assert_eq!("CDF97".parse::<Wavelet>().unwrap(), Wavelet::Cdf97);
        assert!("haar".parse::<Wavelet>().is_err());
    }
}

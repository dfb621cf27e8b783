use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use crate::error::EngineError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    Single,
    Double,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Single => "single",
            Precision::Double => "double",
        }
    }

    pub fn bytes(self) -> usize {
        match self {
            Precision::Single => 4,
            Precision::Double => 8,
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "single" | "f32" => Ok(Precision::Single),
            "double" | "f64" => Ok(Precision::Double),
            _ => Err(format!("unknown precision `{s}` (expected single or double)")),
        }
    }
}

/// Real sample type the engine runs on.
pub trait Sample:
    Copy + Default + PartialEq + PartialOrd + fmt::Debug + Send + Sync + 'static
    + Add<Output = Self> + Mul<Output = Self>
{
    const PRECISION: Precision;
    fn from_f64(v: f64) -> Self;
    fn to_f64(self) -> f64;
}

impl Sample for f32 {
    const PRECISION: Precision = Precision::Single;
    fn from_f64(v: f64) -> Self {
        v as f32
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

impl Sample for f64 {
    const PRECISION: Precision = Precision::Double;
    fn from_f64(v: f64) -> Self {
        v
    }
    fn to_f64(self) -> f64 {
        self
    }
}

/// Row-major image. Dimensions need only be positive here; the transforms
/// themselves require them to be even.
#[derive(Clone, Debug, PartialEq)]
pub struct Image2D<T> {
    width: usize,
    height: usize,
    samples: Vec<T>,
}

impl<T: Sample> Image2D<T> {
    pub fn new(width: usize, height: usize, samples: Vec<T>) -> Result<Self, EngineError> {
        if width == 0 || height == 0 {
            return Err(EngineError::EmptyImage);
        }
        if samples.len() != width * height {
            return Err(EngineError::SampleCount {
                expected: width * height,
                actual: samples.len(),
            });
        }
        Ok(Image2D {
            width,
            height,
            samples,
        })
    }

    pub fn zeros(width: usize, height: usize) -> Result<Self, EngineError> {
        Self::new(width, height, vec![T::default(); width * height])
    }

    /// `f(x, y)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Result<Self, EngineError> {
        let samples = (0..height)
            .flat_map(|y| (0..width).map(move |x| (x, y)))
            .map(|(x, y)| f(x, y))
            .collect();
        Self::new(width, height, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [T] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    pub fn get(&self, x: usize, y: usize) -> T {
        self.samples[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: T) {
        self.samples[y * self.width + x] = v;
    }

    pub fn convert<U: Sample>(&self) -> Image2D<U> {
        Image2D {
            width: self.width,
            height: self.height,
            samples: self.samples.iter().map(|v| U::from_f64(v.to_f64())).collect(),
        }
    }

    pub fn require_even(&self) -> Result<(), EngineError> {
        if !self.width.is_multiple_of(2) || !self.height.is_multiple_of(2) {
            return Err(EngineError::OddDimensions {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }

    /// Largest absolute sample difference; infinite on a size mismatch.
    pub fn max_abs_diff(&self, other: &Image2D<T>) -> f64 {
        if (self.width, self.height) != (other.width, other.height) {
            return f64::INFINITY;
        }
        self.samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a.to_f64() - b.to_f64()).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|v| v.to_f64().abs()).fold(0.0, f64::max)
    }
}

/// The four subbands of a single-level transform. `hl` holds the odd
/// columns (horizontal detail), `lh` the odd rows.
#[derive(Clone, Debug, PartialEq)]
pub struct SubbandQuad<T> {
    pub ll: Image2D<T>,
    pub hl: Image2D<T>,
    pub lh: Image2D<T>,
    pub hh: Image2D<T>,
}

impl<T: Sample> SubbandQuad<T> {
    pub fn new(
        ll: Image2D<T>,
        hl: Image2D<T>,
        lh: Image2D<T>,
        hh: Image2D<T>,
    ) -> Result<Self, EngineError> {
        let dims = (ll.width, ll.height);
        if [&hl, &lh, &hh].iter().any(|b| (b.width, b.height) != dims) {
            return Err(EngineError::MismatchedSubbands);
        }
        Ok(SubbandQuad { ll, hl, lh, hh })
    }

    /// Splits an even-sized image into its four polyphase components.
    pub fn deinterleave(image: &Image2D<T>) -> Result<Self, EngineError> {
        image.require_even()?;
        let (w, h) = (image.width / 2, image.height / 2);
        let band = |px: usize, py: usize| {
            Image2D::from_fn(w, h, |x, y| image.get(2 * x + px, 2 * y + py))
        };
        Ok(SubbandQuad {
            ll: band(0, 0)?,
            hl: band(1, 0)?,
            lh: band(0, 1)?,
            hh: band(1, 1)?,
        })
    }

    /// Inverse of [`SubbandQuad::deinterleave`].
    pub fn interleave(&self) -> Image2D<T> {
        let (w, h) = (self.ll.width * 2, self.ll.height * 2);
        let bands = self.bands();
        Image2D::from_fn(w, h, |x, y| bands[(y % 2) * 2 + x % 2].get(x / 2, y / 2))
            .expect("non-empty bands")
    }

    /// Subband width (half the image width).
    pub fn width(&self) -> usize {
        self.ll.width
    }

    pub fn height(&self) -> usize {
        self.ll.height
    }

    /// `[ll, hl, lh, hh]`, i.e. quadruple components 0..4.
    pub fn bands(&self) -> [&Image2D<T>; 4] {
        [&self.ll, &self.hl, &self.lh, &self.hh]
    }

    pub fn into_bands(self) -> [Image2D<T>; 4] {
        [self.ll, self.hl, self.lh, self.hh]
    }

    pub fn from_bands(bands: [Image2D<T>; 4]) -> Result<Self, EngineError> {
        let [ll, hl, lh, hh] = bands;
        Self::new(ll, hl, lh, hh)
    }

    pub fn max_abs_diff(&self, other: &SubbandQuad<T>) -> f64 {
        self.bands()
            .iter()
            .zip(other.bands())
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

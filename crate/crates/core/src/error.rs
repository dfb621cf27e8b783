use thiserror::Error;

use crate::laurent::Mode;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("coefficient mode mismatch: {left} vs {right}")]
    ModeMismatch { left: Mode, right: Mode },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("lifting plan `{0}` has no predict/update pair")]
    EmptyPlan(String),
    #[error("pass `{0}` is not invertible over Laurent polynomials")]
    NotInvertible(String),
    #[error("lifting product disagrees with the supplied filters (max deviation {deviation:e})")]
    FilterMismatch { deviation: f64 },
    #[error("unknown counting convention `{0}`")]
    UnknownConvention(String),
    #[error("unknown wavelet `{0}`")]
    UnknownWavelet(String),
    #[error("unknown scheme `{0}`")]
    UnknownScheme(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("dimensions must be even, got {width}x{height}")]
    OddDimensions { width: usize, height: usize },
    #[error("image dimensions must be positive")]
    EmptyImage,
    #[error("expected {expected} samples, got {actual}")]
    SampleCount { expected: usize, actual: usize },
    #[error("subbands must share dimensions")]
    MismatchedSubbands,
    #[error("tile {tile_width}x{tile_height} is smaller than the halo {halo}")]
    TileSmallerThanHalo {
        tile_width: usize,
        tile_height: usize,
        halo: usize,
    },
    #[error("invalid tile configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
}

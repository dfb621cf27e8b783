//! Single-level 2-D discrete wavelet transforms built from lifting steps.
//!
//! A wavelet is described by a [`LiftingPlan`]. From it the crate builds
//! four equivalent [`Scheme`]s — separable convolution, separable lifting,
//! non-separable lifting and the constant-split non-separable variant — as
//! sequences of 4×4 Laurent-polynomial matrices acting on the polyphase
//! quadruple of each 2×2 pixel block. Schemes are checked symbolically,
//! counted, and executed on images by the tiled [`engine`].
//!
//! ```
//! use nsdwt::{build_scheme, cdf53, forward, Image2D, SchemeKind, TileConfig};
//!
//! let plan = cdf53();
//! let scheme = build_scheme(SchemeKind::NonSeparableLifting, &plan).unwrap();
//! let image = Image2D::<f64>::from_fn(8, 8, |x, y| (x + y) as f64).unwrap();
//! let quad = forward(&image, &scheme, &TileConfig::default()).unwrap();
//! assert_eq!((quad.ll.width(), quad.ll.height()), (4, 4));
//! ```

pub mod engine;
pub mod error;
pub mod laurent;
pub mod lifting;

pub use engine::{
    compile, forward, forward_reference, inverse, run_reference, run_tiled, Engine, Image2D,
    Precision, Sample, StencilProgram, SubbandQuad, TileConfig,
};
pub use error::{AlgebraError, EngineError, SchemeError};
pub use laurent::{Coefficient, LaurentPoly1, LaurentPoly2, Mode};
pub use lifting::{
    build_scheme, cdf53, cdf97, count_operations, invert_scheme, CountConvention, LiftingPair,
    LiftingPlan, Scheme, SchemeKind, StepMatrix, Wavelet,
};

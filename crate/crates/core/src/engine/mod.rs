//! Execution of schemes on images: stencil compilation, the untiled
//! reference executor and the tiled multi-threaded executor.

pub mod boundary;
mod exec;
mod image;
mod stencil;

pub use boundary::extend;
pub use exec::{
    forward, forward_reference, inverse, run_reference, run_tiled, run_unsynchronized, Engine,
    TileConfig,
};
pub use image::{Image2D, Precision, Sample, SubbandQuad};
pub use stencil::{compile, CompiledPass, ComponentUpdate, StencilProgram, Term};

//! Lifting plans, 4×4 step matrices over the polyphase quadruple, the four
//! scheme sequences built from them, and operation counting.

mod count;
mod matrix;
mod plan;
mod scheme;

pub use count::{
    count_operations, count_operations_named, format_count_table, CountConvention, OpCountReport,
    PassCount,
};
pub use matrix::{fuse, StepMatrix};
pub use plan::{
    cdf53, cdf97, FilterPair, LiftingPair, LiftingPlan, Wavelet, CDF97_ALPHA, CDF97_BETA,
    CDF97_DELTA, CDF97_GAMMA, CDF97_K,
};
pub use scheme::{
    build_convolution_matrix, build_nonseparable_step_matrices, build_scheme,
    build_separable_step_matrices, build_split_scheme, invert_scheme, split_constants,
    transfer_matrix, ConvolutionMatrices, Direction, Pass, PassRole, PolyphaseMatrix, Scheme,
    SchemeKind, SeparableSteps, SplitPolynomials, FILTER_TOLERANCE,
};

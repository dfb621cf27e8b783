//! Exact and floating-point Laurent polynomial algebra in one and two
//! variables.

mod coefficient;
mod poly;
mod polyphase;

pub use coefficient::{Coefficient, Mode};
pub use poly::{Exponent, LaurentPoly, LaurentPoly1, LaurentPoly2};
pub use polyphase::{embed_horizontal, embed_vertical, interleave, polyphase_split, PolyphaseComponents};

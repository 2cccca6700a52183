//! Skew polynomial operators in σ or d_q over ℚ(q̃)(x), and their action on series.

pub mod operator;
pub mod annihilator;
pub mod convert;
pub mod parse;
pub mod series;

pub use operator::{compose, Form, SkewOp, SkewRing, Var};
pub use annihilator::{annihilator_search, Annihilator};
pub use convert::{convert, invert_q, rescale_power, shift_constant_annihilator, DqPowerExpansion};
pub use parse::{detect_form, parse_operator, parse_ratfun};
pub use series::{apply, CoeffGen, Direction, FnGen, ListGen, Series};

//! The set-algebra of finite unions of half-open intervals in `[0, 1)`.
//!
//! Level sets of functions need not belong to the algebra, so increasing
//! setfunctions are extended to arbitrary finite unions of intervals from
//! above (`φ^ui`, infimum over covering members) and from below (`φ^ls`,
//! supremum over contained members). Both extensions are computed in closed
//! form per family.

mod functions;
mod sets;

pub use functions::{
    ae_gap, choquet_interval, choquet_interval_with, AeGap, ExceptionalLevel, Extension, IntervalKind,
    IntervalSetFunction, StepFunction,
};
pub use sets::{GeneralSet, GeneralSetJson, IntervalSet, Piece};

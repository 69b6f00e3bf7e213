//! MIMO LTI models evaluated on the imaginary axis.

mod file;
mod grid;
mod matrix;
mod model;
mod poly;
mod response;

pub use file::{load_model, parse_model_json, ModelDocument, RationalEntry, SampleEntry};
pub use grid::{FrequencyGrid, Spacing};
pub use matrix::{invert_at, ComplexMatrix, MAX_CONDITION};
pub use model::{
    Membership, Rational, RationalMatrix, SampledResponse, StabilityCheck, StateSpace, TransferMatrixModel,
    TOL_STAB,
};
pub use poly::Poly;
pub use response::{BlockDiagonal, Constant, FrequencyResponse, Inverted, Negated};

//! Frequency-wise stability certification of converter–grid interconnections
//! with scaled relative graphs (SRGs).
//!
//! The pipeline evaluates MIMO admittance models on a frequency grid, computes
//! the exact SRG of each evaluated matrix through its joint numerical range,
//! bounds constant power loads by a disk, and checks that the grid SRG stays
//! away from the τ-swept, negated converter SRG. Classical criteria
//! (generalized Nyquist, small gain, small phase, passivity) are provided for
//! comparison.

// `!(x >= 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cpl;
pub mod criteria;
pub mod error;
pub mod geom;
pub mod grid;
pub mod io;
pub mod lti;
pub mod numrange;
pub mod srg;

pub use criteria::{CertificationReport, CertifyOptions, Verdict};
pub use error::{Error, Result};
pub use lti::{ComplexMatrix, FrequencyGrid, FrequencyResponse, TransferMatrixModel};
pub use srg::{Disk, SrgRegion};

//! Scaled relative graphs of matrices and the planar set operations used to
//! separate them.

mod compute;
mod oracle;
mod ops;
mod region;
mod sweep;

pub use compute::{srg_of_matrix, srg_of_matrix_with, SrgOptions};
pub use oracle::srg_sample_oracle;
pub use ops::{minkowski_sum_disk, mobius_invert, INVERSION_GUARD};
pub use region::{
    boundary_hausdorff, directed_hausdorff, region_distance, region_separation, Disk, PointLocator, Separation, SrgRegion,
};
pub use sweep::{
    default_tau_grid, min_distance_on_tau_grid, min_distance_over_tau, tau_swept_region, validate_tau_grid,
    TauDistance, TauSweep,
};

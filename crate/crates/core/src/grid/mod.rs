//! Grid-side building blocks: frame rotation, SCR, RL lines, admittance sums,
//! network reduction and measured-data ingestion.

mod blocks;
mod data;
mod network;

pub use blocks::{
    rl_grid_model, rotate_admittance, rotation_matrix, scr_value, sum_admittances, AdmittanceSum, RlGridParams,
    Rotated,
};
pub use data::{load_frequency_data, save_frequency_data, FrequencyDataSet, FREQUENCY_DATA_HEADER};
pub use network::{kron_reduce, load_network, Branch, Element, NetworkCase, ReducedGrid, Shunt};

//! Network-level comparisons built on the engine: optimal cluster dimension,
//! trees versus clusters, entanglement thresholds and slope tables.

mod dimension;
mod tables;
mod threshold;

pub use dimension::{
    avg_inner_kd, avg_measurements_kd, dimension_table, optimal_dimension, tree_avg_binary,
    tree_avg_wide, tree_vs_cluster, DimensionRow, TreeVsClusterRow,
};
pub use tables::{bell_slope_table, ghz3_slope_table, x_vs_y, RowStatus, SlopeRow, XvsYRow};
pub use threshold::{
    loglog_slope, solve_threshold, threshold_grid, threshold_row, threshold_sweep, worst_case_bell,
    ThresholdFamily, ThresholdRow, WorstCase,
};

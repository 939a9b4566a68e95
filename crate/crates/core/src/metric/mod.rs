//! Metric operators `Λ`, their symmetries and the naturally reductive shape.

mod blocks;
mod isometry;
mod operator;

pub use blocks::{emit_block_spec, layout_block_spec, metric_from_blocks, parse_block_spec, BlockSpec, CenterBlock, ScalarBlock};
pub use isometry::{
    bi_invariance_check, dazi_structure_check, is_simple, isometry_subalgebra, DaZiReport, DECOMPOSITION_SEED,
};
pub use operator::{equivariance_check, EquivarianceReport, EquivarianceWitness, MetricOperator};

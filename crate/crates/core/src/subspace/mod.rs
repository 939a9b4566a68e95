//! Subspaces of a fixed algebra and the subalgebra calculus built on them.

mod ideals;
mod ops;
mod space;

pub use ideals::{ideal_decomposition, DecomposedSubalgebra};
pub use ops::{
    centralizer_in, has_maximal_rank, is_regular, normalizer, normalizer_decomposition, rank_estimate,
    CartanWitness, NormalizerDecomposition, RegularityReport, RANK_RETRIES,
};
pub use space::{emit_subspace, parse_subspace, Subspace};

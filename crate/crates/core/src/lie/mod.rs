//! Structure-constant Lie algebras, classical families, Killing form and
//! block embeddings.

mod algebra;
pub mod classical;
mod embed;
mod killing;
mod structure;
mod table;

pub use algebra::Algebra;
pub use classical::{build_classical, from_realization, so_index, so_pair, Family};
pub use embed::{embed_so_partition, su_torus_layout, EmbeddingLayout};
pub use killing::{ad_invariance_violation, killing_form, KillingForm};
pub use structure::{direct_sum, StructureAlgebra};
pub use table::{emit_structure_table, ingest_structure_table, parse_structure_table};

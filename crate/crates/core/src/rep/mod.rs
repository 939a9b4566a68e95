//! Restricted adjoint actions, intertwiners, isotypic decomposition and weak
//! regularity.

mod hom;
mod isotypic;
mod restriction;
mod weak;

pub use hom::{hom_space, intertwiner_space, modules_disjoint, IntertwinerSpace};
pub use isotypic::{isotypic_decomposition, IsotypicComponent, IsotypicDecomposition};
pub use restriction::AdRestriction;
pub use weak::{criterion_weak_regularity, is_weakly_regular, WeakRegularityReport};

//! Word sets and commutator laws on finite groups, measured exactly by
//! normalized counting.
//!
//! Measures are exact rationals ([`Measure`]). The translate-average `psi` and
//! its Lipschitz bound are generic over a floating [`Scalar`]; [`GroupFunction64`]
//! and [`GroupFunction32`] are the concrete instantiations.

pub mod automorphism;
pub mod catalog;
pub mod engel;
pub mod error;
pub mod group;
pub mod haar;
pub mod scalar;
pub mod subgroup;
pub mod subset;
pub mod tower;
pub mod words;

pub use automorphism::{semidirect_c3, Automorphism, SemidirectExtension};
pub use error::{Error, Result};
pub use group::{Backend, FiniteGroup, GroupElement};
pub use haar::{GroupFunction, LargenessCertificate};
pub use scalar::Scalar;
pub use subgroup::{generate_subgroup, normal_core, Subgroup};
pub use subset::Subset;
pub use tower::Tower;
pub use words::{WordKind, WordSet};

/// Exact normalized counting measure.
pub type Measure = num_rational::Ratio<u64>;

pub type GroupFunction64<'g> = GroupFunction<'g, f64>;
pub type GroupFunction32<'g> = GroupFunction<'g, f32>;

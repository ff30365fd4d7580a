//! Finite-model laboratory for set-valued relations and Mahavier products.
//!
//! - [`relation`]: packed binary relations, their algebra and predicates.
//! - [`witness`]: constructive Condition Γ search.
//! - [`enumerate`]: exhaustive sweeps over all relations on small carriers.
//! - [`preorder`]: finite preordered index sets.
//! - [`mahavier`]: bonding systems, exactness, product enumeration, chain embedding.
//! - [`grid`]: V-relation families on discretized unit intervals.
//! - [`io`]: relation and system file formats.

pub mod enumerate;
pub mod grid;
pub mod io;
pub mod mahavier;
pub mod preorder;
pub mod relation;
pub mod witness;

pub use mahavier::{BondingSystem, ProductResult, Thread};
pub use preorder::FinitePreorder;
pub use relation::{BinaryRelation, ElementSet, EndoRelation, GammaWitness, PropertyReport};

//! Weisfeiler-Leman refinement on Cayley graphs of finite abelian groups.
//!
//! Pair partitions of a Cayley graph that are invariant under translation
//! correspond to partitions of the group itself (S-modules), and one round
//! of 2-WL on the graph becomes a computation in the integer group ring.
//! The crate provides both the generic 2-WL engine and the group-ring path,
//! color refinement, the spectral description of prime-order circulants,
//! individualization-refinement in Tinhofer's style and a sweep driver.

pub mod counterexample;
pub mod cr;
pub mod error;
pub mod graph;
pub mod group;
pub mod iso;
pub mod par;
pub mod partition;
pub mod ring;
pub mod spectral;
pub mod sweep;
pub mod tinhofer;
pub mod wl;

pub use error::{Error, Result};
pub use graph::{build_cayley, CayleyGraph, DiGraph};
pub use group::{GroupElement, GroupSpec};
pub use par::Execution;
pub use partition::OrderedPartition;
pub use ring::GroupRingElement;

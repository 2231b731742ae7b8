//! Fock-space models of (finite group, infinite Lie algebra) dualities.

pub mod bilinears;
pub mod duality;
pub mod error;
pub mod fock;
pub mod hwv;
pub mod linalg;
pub mod pairs;
pub mod rational;
pub mod reciprocity;
pub mod weights;

pub use error::{Error, Result};
pub use pairs::{DualPairKind, PairFamily};

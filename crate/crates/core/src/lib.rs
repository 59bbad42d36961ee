//! Fast-decodability analysis and decoding for linear space-time block codes.

pub mod cli;
pub mod construct;
pub mod decoder;
pub mod error;
pub mod exec;
pub mod lattice;
pub mod matcore;
pub mod mograph;
pub mod rng;
pub mod stbc;

pub use error::{Error, Result};
pub use exec::Execution;
pub use matcore::{CMatrix, RVector};
pub use mograph::{ConflictGraph, GroupPartition};
pub use stbc::{CodeBasis, Constellation};

//! Exact computation with t-intersecting families of subspaces of V(n, q).
//!
//! The crate is layered bottom-up: [`field`] and [`qspace`] give canonical
//! subspace arithmetic, [`qcalc`] evaluates Gaussian-coefficient expressions
//! exactly, [`family`] and [`spread`] implement the family calculus, [`peel`]
//! runs the peeling-simplification procedure, [`construct`] builds the named
//! extremal families, and [`verify`] checks bounds against brute force.

pub mod budget;
pub mod construct;
pub mod error;
pub mod family;
pub mod field;
pub mod qcalc;
pub mod peel;
pub mod qspace;
pub mod spread;
pub mod verify;

pub use budget::Budget;
pub use error::{Error, Result};
pub use family::SubspaceFamily;
pub use qspace::{Ambient, Subspace};

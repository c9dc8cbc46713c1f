//! Exact parameter-plane regions, conic duality and dense operator checks for
//! maps covariant under the compact symplectic group and the matching
//! invariant bipartite states.
//!
//! The crate is `no_std` with `alloc`. File formats, JSON reports and the
//! command-line front end live in the `sympent` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

mod error;
pub mod geometry;
pub mod matrix;
pub mod operators;
mod polygon;
pub mod rational;
pub mod regions;
pub mod sampling;
pub mod verify;

pub use error::Error;
pub use matrix::{c64, ComplexMatrix};
pub use rational::{Dimension, KIndex, Q, RationalPoint2};

pub type Result<T> = core::result::Result<T, Error>;

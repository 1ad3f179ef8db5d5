//! Exact tools for list packing and correspondence packing of small graphs.
//!
//! The crate is organised bottom-up: [`graph`] holds the base graphs and their
//! structural invariants, [`cover`] the correspondence-cover model, [`packing`]
//! the packing searches, [`derange`] the permanent and derangement machinery,
//! [`frac`] exact fractional packings, [`constructions`] the explicit instances
//! and [`verify`] the exhaustive case checks.

pub mod canon;
pub mod constructions;
pub mod cover;
pub mod derange;
pub mod frac;
pub mod graph;
pub mod packing;
pub mod perm;
pub mod ratser;
pub mod verify;

pub use num_rational::BigRational as Rational;

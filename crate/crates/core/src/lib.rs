//! Purely magnetic tunneling between two boundary curvature wells of a
//! symmetric planar domain.
//!
//! The crate computes the model constants of the de Gennes operator, the
//! boundary geometry, the effective one-dimensional potential with its Agmon
//! actions and prefactors, and evaluates the splitting formulas. Two direct
//! eigensolvers (the effective flux operator on the boundary circle and the
//! rescaled two-dimensional boundary operator) serve as independent oracles.

pub mod boundary2d;
pub mod config;
pub mod degennes;
pub mod effective;
pub mod error;
pub mod geometry;
pub mod splitting;
pub mod validate;
pub mod linalg;
pub mod pipeline;

pub use error::{Error, Result};

//! Integral Chow rings of toric Deligne-Mumford stacks.
//!
//! A stacky fan is a triple `(N, Sigma, beta)` of a finitely generated
//! abelian group, a simplicial fan in the rational vector space of `N`,
//! and a lattice map with finite cokernel whose columns lift the rays.
//! This crate computes, with exact integer arithmetic throughout:
//!
//! * Gale duals, Picard groups and the gerbe decomposition of the stack
//!   over its underlying toric orbifold ([`stacky`]),
//! * the integral Chow ring as a graded Stanley-Reisner presentation
//!   ([`chowring`]),
//! * box elements, inertia components, the orbifold product and the
//!   integral orbifold Chow ring ([`orbifold`]),
//! * a graded-piece engine that reduces each degree to a Smith normal
//!   form computation and certifies ring comparisons degree by degree
//!   ([`chowring::engine`]).
//!
//! File formats read and written by the companion command-line tool live
//! in [`io`].

pub mod fancomb;
pub mod fgab;
pub mod intlin;
pub mod io;
pub mod orbifold;
pub mod stacky;

pub mod chowring;

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("validation failed: {}", .0.join("; "))]
    Diagnostics(Vec<String>),
    #[error("not a face: {0}")]
    NotAFace(String),
    #[error("hypothesis not satisfied: {0}")]
    HypothesisNotSatisfied(String),
    #[error("unsupported case: {0}")]
    Unsupported(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("integrity violation: {0}")]
    Integrity(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

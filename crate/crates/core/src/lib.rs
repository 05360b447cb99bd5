//! Square-of-white-noise operators on a truncated Fock space, the Jacobi
//! field of the Meixner-class noises on a discrete extended Fock space, and
//! the machinery to check that the two agree.
//!
//! The continuum base space is replaced by a finite set of atoms
//! ([`basespace::GridSpace`]); every identity checked here is exact under
//! that substitution.

pub mod basespace;
pub mod cli;
pub mod config;
pub mod crosscheck;
pub mod cumulants;
pub mod error;
pub mod extfock;
pub mod fock;
pub mod jacobi;
pub mod meixner;
pub mod quadrature;
pub mod relations;
pub mod report;
pub mod special;
pub mod swn;
pub mod tables;
pub mod wick;

pub use error::{Error, Result};

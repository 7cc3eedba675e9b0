//! Weight spectral sequences of normal-crossing divisors on triangulated
//! models.
//!
//! A model is a closed oriented triangulated manifold `X` of real dimension
//! `2n` together with an ordered list of full subcomplexes `Y_i` meeting like
//! a normal-crossing divisor. From it the crate builds the weight double
//! complexes of the pairs `(Y,∅)`, `(X,Y)`, `(X,X−Y)`, `(X−Y,∅)` and
//! `(∂U,∅)`, computes their spectral sequences over ℚ, the induced weight
//! filtrations on homology, and explicit cycle representatives per weight.

pub mod error;
pub mod linalg;
pub mod simplicial;
pub mod homology;
pub mod triangulations;
pub mod ncd;
pub mod plumbing;
pub mod duality;
pub mod double_complex;
pub mod spectral;
pub mod io;
pub mod models;
pub mod report;
pub mod cli;

pub use error::{Error, Result};

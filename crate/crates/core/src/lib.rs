//! Nonnegative cosine polynomials for Landau's extremal problem, and an
//! explicit constant for the classical zero-free region of ζ(s).

// `!(x > 0.0)` style checks are kept on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anneal;
pub mod bundled;
pub mod cli;
pub mod error;
pub mod iterate;
pub mod kadiri;
pub mod polyfile;
pub mod quadrature;
pub mod trigpoly;
pub mod zetazeros;

pub use error::{Error, Result};

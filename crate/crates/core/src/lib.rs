//! Smooth words over two-letter integer alphabets `{a, b}`.
//!
//! The crate covers the run-length operator and closure, the derivative `D`
//! and its closure-composed variant `rho`, smoothness testing, the middle-word
//! tables for derivatives of concatenations and powers, and an exhaustive
//! census of smooth powers.

pub mod census;
pub mod concat;
pub mod error;
pub mod smooth;
pub mod word;

pub use error::{Error, Result};
pub use smooth::{
    derivative, derivative_pow, is_differentiable, is_smooth, rho, rho_by_formula, smooth_chain,
    ChainFailure, DerivativeChain, FailureReason, SmoothTester, Verdict,
};
pub use word::{
    closure, complement, delta, delta_inv, mirror, runs, Alphabet, Letter, Run, RunDecomposition,
    Word,
};

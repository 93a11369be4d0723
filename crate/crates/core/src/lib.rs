//! Exact verification of dominated positive contractions on finite-dimensional
//! weighted ℓ1 spaces.
//!
//! For positive contractions `T ≤ S` the separation sequence
//! `d(n) = ‖Sⁿ − Tⁿ‖` never returns to one once it has dropped strictly below
//! one. This crate computes `d(n)` in exact rational arithmetic, checks the
//! structural facts the statement rests on, runs seeded random campaigns
//! against it, reproduces a two-dimensional parametric family, and explores
//! the ℓp analogue in floating point with certified norm brackets.

pub mod error;
pub mod example;
pub mod io;
pub mod lp;
pub mod norm;
pub mod operator;
pub mod scalar;
pub mod space;
pub mod verifier;

pub use error::{Error, ExampleConstraint, Result};
pub use norm::{
    dominated_separation_sequence, lemma32_identity, operator_norm_1, positive_norm_witness, power,
    separation_sequence, NormWitness, SeparationSequence,
};
pub use operator::{dominates, is_positive_op, DominatedPair, Operator};
pub use scalar::Scalar;
pub use space::{is_positive_vec, jordan_decompose, norm1, trace, Space, Vec1};

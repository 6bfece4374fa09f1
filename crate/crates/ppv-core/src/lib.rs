//! Exact computation of parameterized Picard-Vessiot groups for
//! second-order linear differential equations.
//!
//! Given an equation
//!
//! ```text
//! Dx^2 Y + a1 Dx Y + a0 Y = 0,      a1, a0 in Q(t1,...,tm)(x),
//! ```
//!
//! with parametric derivations d/dt1, ..., d/dtm, this crate computes a
//! machine-readable description of the differential Galois group of the
//! equation over Q(t1,...,tm)(x): the case tag of the associated
//! unimodular equation, the multiplicative and additive subgroup data,
//! the determinant group, the coupling relations tying them together,
//! and verification witnesses for every emitted relation.
//!
//! All arithmetic is exact; no floating point is used anywhere.

pub mod algebra;
pub mod calculus;
pub mod engine;
pub mod groups;
pub mod io;
pub mod riccati;
pub mod selfcheck;

pub use algebra::{AlgebraError, Derivation, DiffOperator, MPoly, ParamScalar, RatFunc, XPoly};
pub use engine::{run_pipeline, PipelineOptions, PpvReport};

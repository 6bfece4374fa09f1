//! Exact arithmetic kernel: parameters, rational functions, derivations,
//! differential operators and linear algebra.

pub mod linalg;
pub mod mpoly;
pub mod operator;
pub mod ratfunc;
pub mod scalar;
pub mod xpoly;

pub use mpoly::{MPoly, Monomial};
pub use operator::DiffOperator;
pub use ratfunc::{AlgebraError, Derivation, RatFunc};
pub use scalar::ParamScalar;
pub use xpoly::XPoly;

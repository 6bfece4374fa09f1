//! The case classifier for dx^2 Y = q Y: rational Riccati solutions,
//! quadratic solutions, finite primitive degrees, and the isoconstancy
//! directions used in the remaining case.

pub mod classify;
pub mod isoconstancy;
pub mod kovacic;

pub use classify::{classify_case, CaseError, CaseTag};
pub use isoconstancy::{isoconstancy_directions, IsoconstancyBasis};
pub use kovacic::{
    riccati_case3_search, riccati_quadratic_search, riccati_rational_solutions,
    verify_algebraic_riccati, verify_riccati,
};

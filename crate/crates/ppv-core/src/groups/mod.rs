//! Linear differential polynomials and Cassidy-style subgroup
//! descriptions, with the coupling-relation solvers.

pub mod additive;
pub mod coupling;
pub mod lindiff;
pub mod multiplicative;

pub use additive::AddGroupDesc;
pub use coupling::{
    canonicalize_basis, coupling_relations, coupling_relations_additive, lindiff_from_terms,
    CouplingError, CouplingPair,
};
pub use lindiff::{LinDiffPoly, ThetaMonomial};
pub use multiplicative::{compute_mult_group, MultGroupDesc, MultGroupOptions};

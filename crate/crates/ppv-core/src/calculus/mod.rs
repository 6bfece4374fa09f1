//! Integration-theoretic decision procedures over K = Q(t1,...,tm)(x):
//! Hermite reduction, Rothstein-Trager residues, exactness and
//! log-derivative membership with witnesses, the integer lattice of joint
//! log-derivative relations, the exactness relation space, and rational
//! solutions of linear differential equations.

pub mod exactness;
pub mod hermite;
pub mod lattice;
pub mod logder;
pub mod ratsol;
pub mod residue;

pub use exactness::{exactness_relation_space, ExactnessRelationSpace};
pub use hermite::{hermite_reduce, HermiteResult};
pub use lattice::{log_derivative_lattice, LogDerLattice};
pub use logder::{is_exact, is_log_derivative, minimal_log_multiple};
pub use ratsol::{rational_solutions, solve_joint, JointSolution, RationalSolutions};
pub use residue::{integer_roots, rational_roots, residue_data, ResidueError};

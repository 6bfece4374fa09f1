//! Descriptions of differential algebraic subgroups of the additive group.

use crate::algebra::ratfunc::RatFunc;

use super::lindiff::LinDiffPoly;

/// Subgroup B of the additive group, per Cassidy's classification: the
/// zero group, everything, or the common zero set of finitely many linear
/// differential polynomials. `Unresolved` records what is known when the
/// effective criteria do not settle the group.
#[derive(Clone, Debug)]
pub enum AddGroupDesc {
    Zero,
    Full,
    /// Defining relations with exactness witnesses.
    Relations(Vec<(LinDiffPoly, RatFunc)>),
    Unresolved { known_facts: Vec<String> },
}

impl AddGroupDesc {
    pub fn is_known_nonzero(&self) -> bool {
        matches!(self, AddGroupDesc::Full | AddGroupDesc::Relations(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            AddGroupDesc::Zero => "zero",
            AddGroupDesc::Full => "full",
            AddGroupDesc::Relations(_) => "relations",
            AddGroupDesc::Unresolved { .. } => "unresolved",
        }
    }
}

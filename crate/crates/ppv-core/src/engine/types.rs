//! Report data model: the unimodular group data, the determinant group,
//! the coupling between them, and the assembled group description.

use std::fmt;

use num_bigint::BigInt;

use crate::algebra::ratfunc::RatFunc;
use crate::groups::additive::AddGroupDesc;
use crate::groups::coupling::CouplingPair;
use crate::groups::multiplicative::MultGroupDesc;
use crate::riccati::classify::CaseTag;
use crate::riccati::isoconstancy::IsoconstancyBasis;

/// The finite primitive groups of case III, by algebraic degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiniteGroupKind {
    A4,
    S4,
    A5,
}

impl FiniteGroupKind {
    pub fn from_degree(deg: u32) -> Option<Self> {
        match deg {
            4 => Some(FiniteGroupKind::A4),
            6 => Some(FiniteGroupKind::S4),
            12 => Some(FiniteGroupKind::A5),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FiniteGroupKind::A4 => "A4^SL2",
            FiniteGroupKind::S4 => "S4^SL2",
            FiniteGroupKind::A5 => "A5^SL2",
        }
    }
}

/// Description of the unimodular group H.
#[derive(Clone, Debug)]
pub struct HDesc {
    pub case: CaseTag,
    /// Case I: the group of dx Y = u Y. Case II: the multiplicative data of
    /// w = u - conj(u), i.e. the group of dx Y = v Y.
    pub a_group: Option<MultGroupDesc>,
    /// Case I only.
    pub b_group: Option<AddGroupDesc>,
    /// Case III only.
    pub finite_group: Option<FiniteGroupKind>,
    /// Case IV only: basis of commuting directions fixing the group.
    pub pi_prime: Option<IsoconstancyBasis>,
}

/// Which coupling fired, with its data and witnesses.
#[derive(Clone, Debug)]
pub enum CouplingDesc {
    PowerCoupling {
        k1: BigInt,
        k2: BigInt,
        witness: RatFunc,
    },
    MultMultCoupling {
        basis: Vec<CouplingPair>,
    },
    AddMultCoupling {
        basis: Vec<CouplingPair>,
    },
    DihedralCoupling {
        k: u32,
        witness: RatFunc,
    },
    FiniteCoupling {
        chi: String,
        k1: u32,
        k2: u32,
        witness: RatFunc,
    },
    TrivialLambda,
}

impl CouplingDesc {
    pub fn kind(&self) -> &'static str {
        match self {
            CouplingDesc::PowerCoupling { .. } => "power",
            CouplingDesc::MultMultCoupling { .. } => "mult-mult",
            CouplingDesc::AddMultCoupling { .. } => "add-mult",
            CouplingDesc::DihedralCoupling { .. } => "dihedral",
            CouplingDesc::FiniteCoupling { .. } => "finite",
            CouplingDesc::TrivialLambda => "trivial",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupShape {
    /// { (e a, e b; 0, e a^{-1}) }
    BorelUpper,
    /// diagonal/antidiagonal pair scaled by determinant data
    DihedralPair,
    /// finite primitive group paired with the determinant group
    FiniteProduct,
    /// { e M : M in SL2 of the Pi'-constants, e in D }
    ScaledSl2,
}

impl GroupShape {
    pub fn label(&self) -> &'static str {
        match self {
            GroupShape::BorelUpper => "borel-upper",
            GroupShape::DihedralPair => "dihedral-pair",
            GroupShape::FiniteProduct => "finite-product",
            GroupShape::ScaledSl2 => "scaled-sl2",
        }
    }
}

/// Assembled description of the full group: a matrix shape, membership
/// constraints for each symbol, and the coupling equations.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupDescription {
    pub shape: GroupShape,
    pub shape_display: String,
    pub membership: Vec<(String, String)>,
    pub relations: Vec<String>,
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shape: {}", self.shape_display)?;
        for (sym, cond) in &self.membership {
            writeln!(f, "  {sym}: {cond}")?;
        }
        for r in &self.relations {
            writeln!(f, "  relation: {r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    Partial(Vec<String>),
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        matches!(self, Completeness::Complete)
    }
}

/// Search/truncation settings echoed into the report.
#[derive(Clone, Debug)]
pub struct TruncationReport {
    pub max_theta_order: u32,
    pub finite_order_bound: u32,
    pub lattice_search_bound: i64,
    /// Relation-space dimensions per order for A and D, when infinite.
    pub a_dims_per_order: Option<Vec<usize>>,
    pub d_dims_per_order: Option<Vec<usize>>,
    pub a_stabilized: Option<bool>,
    pub d_stabilized: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct PpvReport {
    pub a1: RatFunc,
    pub a0: RatFunc,
    pub r1: RatFunc,
    pub r0: RatFunc,
    pub q: RatFunc,
    pub h: HDesc,
    pub d_group: MultGroupDesc,
    pub coupling: CouplingDesc,
    pub group: GroupDescription,
    pub assumptions: Vec<String>,
    pub completeness: Completeness,
    pub truncation: TruncationReport,
}

/// A user-supplied semi-invariant datum for case III coupling.
#[derive(Clone, Debug)]
pub struct SemiInvariant {
    pub label: String,
    pub order: u32,
    pub v_chi: RatFunc,
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub nparams: usize,
    pub max_theta_order: u32,
    pub finite_order_bound: u32,
    pub lattice_search_bound: i64,
    pub assume: Vec<String>,
    pub semi_invariants: Vec<SemiInvariant>,
}

impl PipelineOptions {
    pub fn new(nparams: usize) -> Self {
        PipelineOptions {
            nparams,
            max_theta_order: 3,
            finite_order_bound: 64,
            lattice_search_bound: 25,
            assume: Vec::new(),
            semi_invariants: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    ZeroQ(&'static str),
    InconsistentCoupling {
        case: &'static str,
        coupling: &'static str,
    },
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::ZeroQ(what) => write!(f, "q = 0: {what}"),
            EngineError::InconsistentCoupling { case, coupling } => {
                write!(f, "coupling kind '{coupling}' is inconsistent with case {case}")
            }
        }
    }
}

impl std::error::Error for EngineError {}

//! Pipeline orchestration and the report data model.

pub mod pipeline;
pub mod types;

pub use pipeline::{
    assemble_g, compute_b, compute_d, compute_unimodular_group, describe_h,
    lambda_coupling_case1, lambda_coupling_case2, lambda_coupling_case3, normalize_equation,
    run_pipeline, third_order_operator,
};
pub use types::{
    Completeness, CouplingDesc, EngineError, FiniteGroupKind, GroupDescription, GroupShape,
    HDesc, PipelineOptions, PpvReport, SemiInvariant, TruncationReport,
};

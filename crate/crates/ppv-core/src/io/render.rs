//! Rendering of reports: the pinned JSON schema and a plain-text view.
//! Rational functions render as exact expressions that re-parse to the
//! same canonical value; no decimals appear anywhere.

use serde_json::{json, Map, Value};

use crate::algebra::ratfunc::RatFunc;
use crate::engine::types::{Completeness, CouplingDesc, HDesc, PpvReport};
use crate::groups::additive::AddGroupDesc;
use crate::groups::coupling::CouplingPair;
use crate::groups::multiplicative::MultGroupDesc;
use crate::riccati::classify::CaseTag;

pub const SCHEMA_VERSION: &str = "1";

pub fn render_ratfunc(f: &RatFunc) -> String {
    format!("{f}")
}

fn mult_group_json(g: &MultGroupDesc) -> Value {
    match g {
        MultGroupDesc::Finite { order, witness } => json!({
            "kind": "finite",
            "order": order,
            "witness": render_ratfunc(witness),
        }),
        MultGroupDesc::Infinite {
            relations,
            generators,
            truncation_order,
            stabilized,
            dims_per_order,
        } => json!({
            "kind": "infinite",
            "generators": generators.iter().map(|p| format!("{p}")).collect::<Vec<_>>(),
            "relations": relations
                .iter()
                .map(|(p, w)| json!({"poly": format!("{p}"), "witness": render_ratfunc(w)}))
                .collect::<Vec<_>>(),
            "truncation_order": truncation_order,
            "stabilized": stabilized,
            "dims_per_order": dims_per_order,
        }),
    }
}

fn add_group_json(g: &AddGroupDesc) -> Value {
    match g {
        AddGroupDesc::Zero => json!({"kind": "zero"}),
        AddGroupDesc::Full => json!({"kind": "full"}),
        AddGroupDesc::Relations(rels) => json!({
            "kind": "relations",
            "relations": rels
                .iter()
                .map(|(p, w)| json!({"poly": format!("{p}"), "witness": render_ratfunc(w)}))
                .collect::<Vec<_>>(),
        }),
        AddGroupDesc::Unresolved { known_facts } => json!({
            "kind": "unresolved",
            "known_facts": known_facts,
        }),
    }
}

fn h_json(h: &HDesc) -> Value {
    let mut m = Map::new();
    m.insert("case".to_string(), json!(h.case.label()));
    match &h.case {
        CaseTag::CaseI { u, all_solutions } => {
            m.insert("u".to_string(), json!(render_ratfunc(u)));
            m.insert(
                "all_riccati_solutions".to_string(),
                json!(all_solutions
                    .iter()
                    .map(render_ratfunc)
                    .collect::<Vec<_>>()),
            );
        }
        CaseTag::CaseII { w2, v } => {
            m.insert("w2".to_string(), json!(render_ratfunc(w2)));
            m.insert("v".to_string(), json!(render_ratfunc(v)));
        }
        CaseTag::CaseIII { degree, .. } => {
            m.insert("degree".to_string(), json!(degree));
        }
        CaseTag::CaseIV => {}
    }
    if let Some(a) = &h.a_group {
        m.insert("A".to_string(), mult_group_json(a));
    }
    if let Some(b) = &h.b_group {
        m.insert("B".to_string(), add_group_json(b));
    }
    if let Some(k) = &h.finite_group {
        m.insert("finite_group".to_string(), json!(k.label()));
    }
    if let Some(p) = &h.pi_prime {
        m.insert(
            "pi_prime".to_string(),
            json!({
                "directions": p
                    .directions
                    .iter()
                    .map(|d| d.iter().map(|c| format!("{c}")).collect::<Vec<_>>())
                    .collect::<Vec<_>>(),
                "witnesses": p.witnesses.iter().map(render_ratfunc).collect::<Vec<_>>(),
            }),
        );
    }
    Value::Object(m)
}

fn pairs_json(basis: &[CouplingPair]) -> Value {
    json!(basis
        .iter()
        .map(|c| json!({
            "p": format!("{}", c.p),
            "q": format!("{}", c.q),
            "f": render_ratfunc(&c.witness),
        }))
        .collect::<Vec<_>>())
}

fn coupling_json(c: &CouplingDesc) -> Value {
    let (data, witnesses) = match c {
        CouplingDesc::PowerCoupling { k1, k2, witness } => (
            json!({"k1": k1.to_string(), "k2": k2.to_string()}),
            json!([render_ratfunc(witness)]),
        ),
        CouplingDesc::MultMultCoupling { basis } | CouplingDesc::AddMultCoupling { basis } => (
            json!({"basis": pairs_json(basis)}),
            json!(basis
                .iter()
                .map(|p| render_ratfunc(&p.witness))
                .collect::<Vec<_>>()),
        ),
        CouplingDesc::DihedralCoupling { k, witness } => (
            json!({"k": k}),
            json!([render_ratfunc(witness)]),
        ),
        CouplingDesc::FiniteCoupling {
            chi,
            k1,
            k2,
            witness,
        } => (
            json!({"chi": chi, "k1": k1, "k2": k2}),
            json!([render_ratfunc(witness)]),
        ),
        CouplingDesc::TrivialLambda => (json!({}), json!([])),
    };
    json!({
        "kind": c.kind(),
        "data": data,
        "witnesses": witnesses,
    })
}

/// The pinned JSON output document.
pub fn report_to_json(report: &PpvReport) -> Value {
    let (completeness, reasons) = match &report.completeness {
        Completeness::Complete => ("complete", Vec::new()),
        Completeness::Partial(r) => ("partial", r.clone()),
    };
    json!({
        "schema_version": SCHEMA_VERSION,
        "normalized": {
            "r1": render_ratfunc(&report.r1),
            "r0": render_ratfunc(&report.r0),
            "q": render_ratfunc(&report.q),
        },
        "case": report.h.case.label(),
        "H": h_json(&report.h),
        "D": mult_group_json(&report.d_group),
        "coupling": coupling_json(&report.coupling),
        "G": {
            "shape": report.group.shape.label(),
            "display": report.group.shape_display,
            "membership": report
                .group
                .membership
                .iter()
                .map(|(sym, cond)| json!({"symbol": sym, "constraint": cond}))
                .collect::<Vec<_>>(),
            "relations": report.group.relations,
        },
        "assumptions": report.assumptions,
        "completeness": completeness,
        "partial_reasons": reasons,
        "truncation": {
            "max_theta_order": report.truncation.max_theta_order,
            "finite_order_bound": report.truncation.finite_order_bound,
            "lattice_search_bound": report.truncation.lattice_search_bound,
            "a_dims_per_order": report.truncation.a_dims_per_order,
            "d_dims_per_order": report.truncation.d_dims_per_order,
            "a_stabilized": report.truncation.a_stabilized,
            "d_stabilized": report.truncation.d_stabilized,
        },
    })
}

/// Plain-text rendering of the report.
pub fn report_to_text(report: &PpvReport) -> String {
    let mut out = String::new();
    let push = |out: &mut String, s: String| {
        out.push_str(&s);
        out.push('\n');
    };
    push(&mut out, format!("case: {}", report.h.case.label()));
    push(&mut out, format!("r1 = {}", report.r1));
    push(&mut out, format!("q  = {}", report.q));
    match &report.h.case {
        CaseTag::CaseI { u, .. } => push(&mut out, format!("u  = {u}")),
        CaseTag::CaseII { w2, v } => {
            push(&mut out, format!("w^2 = {w2}"));
            push(&mut out, format!("v   = {v}"));
        }
        CaseTag::CaseIII { degree, .. } => push(&mut out, format!("degree = {degree}")),
        CaseTag::CaseIV => {}
    }
    push(&mut out, format!("coupling: {}", report.coupling.kind()));
    push(&mut out, format!("group:\n{}", report.group));
    if !report.assumptions.is_empty() {
        push(&mut out, "assumptions:".to_string());
        for a in &report.assumptions {
            push(&mut out, format!("  - {a}"));
        }
    }
    match &report.completeness {
        Completeness::Complete => push(&mut out, "completeness: complete".to_string()),
        Completeness::Partial(reasons) => {
            push(&mut out, "completeness: partial".to_string());
            for r in reasons {
                push(&mut out, format!("  - {r}"));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::parse_ratfunc;

    #[test]
    fn ratfunc_round_trip() {
        let params = vec!["t1".to_string(), "t2".to_string()];
        let f = parse_ratfunc("(t1*x^2 + 1/2)/(x^3 - t2*x + 1)", &params).unwrap();
        let text = render_ratfunc(&f);
        let back = parse_ratfunc(&text, &params).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn zero_renders_as_zero() {
        assert_eq!(render_ratfunc(&RatFunc::zero()), "0");
    }

    #[test]
    fn report_json_has_pinned_fields() {
        let opts = crate::engine::types::PipelineOptions::new(1);
        let report =
            crate::engine::pipeline::run_pipeline(&RatFunc::zero(), &(-&RatFunc::x()), &opts)
                .unwrap();
        let v = report_to_json(&report);
        for key in [
            "schema_version",
            "normalized",
            "case",
            "H",
            "D",
            "coupling",
            "G",
            "assumptions",
            "completeness",
            "truncation",
        ] {
            assert!(v.get(key).is_some(), "missing key {key}");
        }
        assert_eq!(v["case"], "IV");
        assert_eq!(v["completeness"], "complete");
    }
}

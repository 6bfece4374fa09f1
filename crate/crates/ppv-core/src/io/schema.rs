//! Input document handling.
//!
//! ```json
//! {
//!   "parameters": ["t1", "t2"],
//!   "equation": { "a1": "<expr>", "a0": "<expr>" },
//!   "options": {
//!     "max_theta_order": 3,
//!     "finite_order_bound": 64,
//!     "lattice_search_bound": 25
//!   },
//!   "semi_invariants": [ {"label": "chi", "order": 2, "v_chi": "<expr>"} ]
//! }
//! ```

use serde_json::Value;

use crate::algebra::ratfunc::RatFunc;
use crate::engine::types::{PipelineOptions, SemiInvariant};

use super::parse::parse_ratfunc;

#[derive(Clone, Debug)]
pub struct InputDocument {
    pub parameters: Vec<String>,
    pub a1: RatFunc,
    pub a0: RatFunc,
    pub options: PipelineOptions,
}

pub fn parse_input_document(text: &str) -> Result<InputDocument, String> {
    let v: Value = serde_json::from_str(text).map_err(|e| format!("invalid JSON: {e}"))?;
    let parameters: Vec<String> = v
        .get("parameters")
        .and_then(|p| p.as_array())
        .map(|a| {
            a.iter()
                .map(|s| s.as_str().map(|s| s.to_string()))
                .collect::<Option<Vec<_>>>()
        })
        .unwrap_or(Some(Vec::new()))
        .ok_or("parameters must be strings")?;
    let eq = v
        .get("equation")
        .ok_or("missing field 'equation'")?;
    let a1_text = eq
        .get("a1")
        .and_then(|s| s.as_str())
        .ok_or("missing expression 'equation.a1'")?;
    let a0_text = eq
        .get("a0")
        .and_then(|s| s.as_str())
        .ok_or("missing expression 'equation.a0'")?;
    let a1 = parse_ratfunc(a1_text, &parameters).map_err(|e| format!("a1: {e}"))?;
    let a0 = parse_ratfunc(a0_text, &parameters).map_err(|e| format!("a0: {e}"))?;
    let mut options = PipelineOptions::new(parameters.len());
    if let Some(opts) = v.get("options") {
        if let Some(n) = opts.get("max_theta_order").and_then(|n| n.as_u64()) {
            options.max_theta_order = n as u32;
        }
        if let Some(n) = opts.get("finite_order_bound").and_then(|n| n.as_u64()) {
            options.finite_order_bound = n as u32;
        }
        if let Some(n) = opts.get("lattice_search_bound").and_then(|n| n.as_i64()) {
            options.lattice_search_bound = n;
        }
    }
    if let Some(semis) = v.get("semi_invariants").and_then(|s| s.as_array()) {
        for s in semis {
            let label = s
                .get("label")
                .and_then(|l| l.as_str())
                .ok_or("semi_invariants entries need a 'label'")?
                .to_string();
            let order = s
                .get("order")
                .and_then(|o| o.as_u64())
                .ok_or("semi_invariants entries need an 'order'")? as u32;
            let v_chi_text = s
                .get("v_chi")
                .and_then(|t| t.as_str())
                .ok_or("semi_invariants entries need 'v_chi'")?;
            let v_chi =
                parse_ratfunc(v_chi_text, &parameters).map_err(|e| format!("v_chi: {e}"))?;
            options.semi_invariants.push(SemiInvariant {
                label,
                order,
                v_chi,
            });
        }
    }
    Ok(InputDocument {
        parameters,
        a1,
        a0,
        options,
    })
}

/// The built-in worked example: a two-parameter equation whose group
/// couples the borel block to the determinant group through derivative
/// relations.
pub fn sample_input_document() -> String {
    serde_json::to_string_pretty(&serde_json::json!({
        "parameters": ["t1", "t2"],
        "equation": {
            "a1": "-2*((t1 - t2)/x + t2/(x - 1))",
            "a0": "((t2 - 2*t1)*(t2 - 1) + 2*(t1 - t2)^2*x)/x^2 + (t1*(2*t2 - t1 + 1) - 2*(t1 - t2)^2*(x - 1))/(x - 1)^2",
        },
        "options": {
            "max_theta_order": 3,
            "finite_order_bound": 64,
            "lattice_search_bound": 25,
        },
    }))
    .expect("static document serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_document_parses() {
        let doc = parse_input_document(&sample_input_document()).unwrap();
        assert_eq!(doc.parameters, vec!["t1", "t2"]);
        assert_eq!(doc.options.max_theta_order, 3);
    }

    #[test]
    fn missing_equation_is_an_error() {
        let err = parse_input_document(r#"{"parameters": []}"#).unwrap_err();
        assert!(err.contains("equation"));
    }

    #[test]
    fn bad_expression_reports_position() {
        let err = parse_input_document(
            r#"{"parameters": ["t1"], "equation": {"a1": "x^t1", "a0": "0"}}"#,
        )
        .unwrap_err();
        assert!(err.contains("non-integer exponent"));
    }

    #[test]
    fn semi_invariants_parse() {
        let doc = parse_input_document(
            r#"{
                "parameters": [],
                "equation": {"a1": "0", "a0": "x"},
                "semi_invariants": [{"label": "chi", "order": 2, "v_chi": "1/(2*x)"}]
            }"#,
        )
        .unwrap();
        assert_eq!(doc.options.semi_invariants.len(), 1);
        assert_eq!(doc.options.semi_invariants[0].order, 2);
    }
}

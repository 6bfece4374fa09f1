//! The end-to-end pipeline: normalization, unimodular group, determinant
//! group, coupling analysis and assembly of the full group description.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::operator::DiffOperator;
use crate::algebra::ratfunc::{Derivation, RatFunc};
use crate::algebra::scalar::ParamScalar;
use crate::calculus::exactness::exactness_relation_space;
use crate::calculus::lattice::{combine_integer, log_derivative_lattice};
use crate::calculus::logder::is_log_derivative;
use crate::groups::additive::AddGroupDesc;
use crate::groups::coupling::{coupling_relations, coupling_relations_additive};
use crate::groups::lindiff::LinDiffPoly;
use crate::groups::multiplicative::{
    compute_mult_group, from_vector, keys_up_to, MultGroupDesc, MultGroupOptions,
};
use crate::riccati::classify::{classify_case, CaseTag};
use crate::riccati::isoconstancy::isoconstancy_directions;

use super::types::{
    Completeness, CouplingDesc, EngineError, FiniteGroupKind, GroupDescription, GroupShape,
    HDesc, PipelineOptions, PpvReport, SemiInvariant, TruncationReport,
};

/// r1 = -a1/2, r0 = a0, q = r1^2 - dx(r1) - r0.
pub fn normalize_equation(a1: &RatFunc, a0: &RatFunc) -> (RatFunc, RatFunc, RatFunc) {
    let half = ParamScalar::from_rational(BigRational::new(BigInt::from(-1), BigInt::from(2)));
    let r1 = a1.scale(&half);
    let r0 = a0.clone();
    let q = &(&(&r1 * &r1) - &r1.dx()) - &r0;
    (r1, r0, q)
}

fn mult_opts(opts: &PipelineOptions) -> MultGroupOptions {
    MultGroupOptions {
        max_theta_order: opts.max_theta_order,
        finite_order_bound: opts.finite_order_bound,
    }
}

/// The unipotent part B for case I. Zero when the equation has two
/// exponential solutions; otherwise B' is the full additive group and the
/// parameterized group is settled by the effective criteria below, with an
/// explicit Unresolved outcome when they do not apply.
pub fn compute_b(
    u: &RatFunc,
    all_solutions: &[RatFunc],
    a_group: &MultGroupDesc,
    opts: &PipelineOptions,
    notes: &mut Vec<String>,
) -> AddGroupDesc {
    if all_solutions.len() >= 2 {
        // diagonalizable non-parameterized group forces B' = B = 0
        return AddGroupDesc::Zero;
    }
    let nparams = opts.nparams;
    let a_small = matches!(a_group.finite_order(), Some(1) | Some(2));
    if a_small {
        // eta^2 is rational: B is cut out by the polynomials p with
        // p(eta^{-2}) exact
        let two_u = u.scale(&ParamScalar::from_int(2));
        let f = is_log_derivative(&two_u)
            .expect("A inside {±1} forces 2u to be a logarithmic derivative");
        let eta2inv = &RatFunc::one() / &f;
        let keys = keys_up_to(1, nparams, opts.max_theta_order);
        let family: Vec<RatFunc> = keys
            .iter()
            .map(|(theta, _)| theta.apply(&eta2inv))
            .collect();
        let space = exactness_relation_space(&family);
        if space.basis.is_empty() {
            return AddGroupDesc::Full;
        }
        let relations: Vec<(LinDiffPoly, RatFunc)> = space
            .basis
            .iter()
            .zip(&space.witnesses)
            .map(|(v, w)| (from_vector(v, &keys, 1), w.clone()))
            .collect();
        return AddGroupDesc::Relations(relations);
    }
    // sufficient criterion: no parametric direction makes u exact
    let du: Vec<RatFunc> = (0..nparams)
        .map(|j| u.derive(&Derivation::Param(j)))
        .collect();
    let space = exactness_relation_space(&du);
    if space.basis.is_empty() {
        return AddGroupDesc::Full;
    }
    let mut facts = vec![
        "the non-parameterized unipotent radical is the full additive group".to_string(),
    ];
    for v in &space.basis {
        let dir = v
            .iter()
            .enumerate()
            .map(|(j, c)| format!("({c})*D{}", j + 1))
            .collect::<Vec<_>>()
            .join(" + ");
        facts.push(format!("direction {dir} maps u into exact derivatives"));
    }
    facts.push(format!(
        "A is {}parametrically constant",
        if a_group.is_pi_constant(nparams) { "" } else { "not " }
    ));
    let _ = notes;
    AddGroupDesc::Unresolved { known_facts: facts }
}

/// The determinant group: the group of dx Y = r1 Y.
pub fn compute_d(r1: &RatFunc, opts: &PipelineOptions) -> MultGroupDesc {
    compute_mult_group(r1, opts.nparams, &mult_opts(opts))
}

/// Case tag plus the case-specific group data.
pub fn compute_unimodular_group(
    q: &RatFunc,
    opts: &PipelineOptions,
) -> (HDesc, Vec<String>, Vec<String>) {
    let mut notes = Vec::new();
    let (case, class_notes) = classify_case(q);
    let mut assumptions = class_notes;
    let h = match &case {
        CaseTag::CaseI { u, all_solutions } => {
            let a_group = compute_mult_group(u, opts.nparams, &mult_opts(opts));
            let b_group = compute_b(u, all_solutions, &a_group, opts, &mut notes);
            HDesc {
                case: case.clone(),
                a_group: Some(a_group),
                b_group: Some(b_group),
                finite_group: None,
                pi_prime: None,
            }
        }
        CaseTag::CaseII { v, .. } => {
            let a_group = compute_mult_group(v, opts.nparams, &mult_opts(opts));
            assumptions.push(
                "case II: the reported A is the multiplicative datum of w = u - conj(u)"
                    .to_string(),
            );
            HDesc {
                case: case.clone(),
                a_group: Some(a_group),
                b_group: None,
                finite_group: None,
                pi_prime: None,
            }
        }
        CaseTag::CaseIII { degree, .. } => HDesc {
            case: case.clone(),
            a_group: None,
            b_group: None,
            finite_group: FiniteGroupKind::from_degree(*degree),
            pi_prime: None,
        },
        CaseTag::CaseIV => {
            let pi_prime = isoconstancy_directions(q, opts.nparams);
            HDesc {
                case: case.clone(),
                a_group: None,
                b_group: None,
                finite_group: None,
                pi_prime: Some(pi_prime),
            }
        }
    };
    (h, assumptions, notes)
}

fn relations_of(g: &MultGroupDesc) -> Vec<(LinDiffPoly, RatFunc)> {
    match g {
        MultGroupDesc::Infinite { relations, .. } => relations.clone(),
        MultGroupDesc::Finite { .. } => Vec::new(),
    }
}

/// Does { a^{k1} : a in A } differ from {1}?
fn power_image_nontrivial(a_group: &MultGroupDesc, k1: &BigInt) -> bool {
    match a_group.finite_order() {
        Some(ell) => !(k1 % BigInt::from(ell)).is_zero(),
        None => !k1.is_zero(),
    }
}

/// The case-I coupling decision tree.
#[allow(clippy::too_many_arguments)]
pub fn lambda_coupling_case1(
    u: &RatFunc,
    a_group: &MultGroupDesc,
    b_group: &AddGroupDesc,
    r1: &RatFunc,
    d_group: &MultGroupDesc,
    opts: &PipelineOptions,
    assumptions: &mut Vec<String>,
    partial_reasons: &mut Vec<String>,
) -> CouplingDesc {
    // (i) a power coupling k1 u - k2 r1 = dx(f)/f with a nontrivial image
    let lattice = log_derivative_lattice(&[u.clone(), -r1]);
    if !lattice.complete {
        partial_reasons.push("log-derivative lattice computation was not provably complete".to_string());
    }
    for n in &lattice.notes {
        assumptions.push(format!("lattice: {n}"));
    }
    let gens = &lattice.generators;
    if !gens.is_empty() {
        // existence of a valid k1: the k1-components form d*Z
        let d_gcd = gens
            .iter()
            .fold(BigInt::zero(), |acc, g| acc.gcd(&g[0]));
        let exists = match a_group.finite_order() {
            Some(ell) => !(&d_gcd % BigInt::from(ell)).is_zero() && !d_gcd.is_zero(),
            None => !d_gcd.is_zero(),
        };
        if exists {
            // bounded search for the smallest gcd(k1, k2)
            let bound = opts.lattice_search_bound;
            let rank = gens.len();
            let mut best: Option<(BigInt, BigInt, BigInt)> = None;
            let mut coeffs = vec![-bound; rank];
            loop {
                let mut k = vec![BigInt::zero(); 2];
                for (c, g) in coeffs.iter().zip(gens) {
                    k[0] += BigInt::from(*c) * &g[0];
                    k[1] += BigInt::from(*c) * &g[1];
                }
                if power_image_nontrivial(a_group, &k[0]) {
                    let g = k[0].gcd(&k[1]);
                    let cand = (g.clone(), k[0].clone(), k[1].clone());
                    best = match best {
                        None => Some(cand),
                        Some(cur) => {
                            if (cand.0.clone(), cand.1.clone(), cand.2.clone())
                                < (cur.0.clone(), cur.1.clone(), cur.2.clone())
                            {
                                Some(cand)
                            } else {
                                Some(cur)
                            }
                        }
                    };
                }
                let mut i = 0;
                loop {
                    if i == rank {
                        break;
                    }
                    coeffs[i] += 1;
                    if coeffs[i] <= bound {
                        break;
                    }
                    coeffs[i] = -bound;
                    i += 1;
                }
                if i == rank {
                    break;
                }
            }
            if let Some((_, k1, k2)) = best {
                assumptions.push(format!(
                    "power-coupling minimal gcd searched over lattice multipliers bounded by {}",
                    opts.lattice_search_bound
                ));
                let combined = combine_integer(&[u.clone(), -r1], &[k1.clone(), k2.clone()]);
                let witness = is_log_derivative(&combined)
                    .expect("lattice member is a logarithmic derivative");
                // consistency: A and D both finite or they coincide
                assert_eq!(
                    a_group.is_finite(),
                    d_group.is_finite(),
                    "power coupling forces A and D to be finite together"
                );
                if !a_group.is_finite() {
                    assert!(
                        a_group.coincides_with(d_group, opts.nparams),
                        "power coupling with infinite groups forces A = D"
                    );
                }
                return CouplingDesc::PowerCoupling { k1, k2, witness };
            }
        }
    }
    let a_small = matches!(a_group.finite_order(), Some(1) | Some(2));
    if a_small {
        // (iii) additive-multiplicative coupling
        if matches!(b_group, AddGroupDesc::Zero) {
            return CouplingDesc::TrivialLambda;
        }
        if matches!(b_group, AddGroupDesc::Unresolved { .. }) {
            partial_reasons
                .push("additive coupling untested: B is unresolved".to_string());
            return CouplingDesc::TrivialLambda;
        }
        if d_group.is_pi_constant(opts.nparams) {
            // the coupling needs a non-constant determinant group
            return CouplingDesc::TrivialLambda;
        }
        let two_u = u.scale(&ParamScalar::from_int(2));
        let f = is_log_derivative(&two_u)
            .expect("A inside {±1} forces 2u to be a logarithmic derivative");
        let eta2inv = &RatFunc::one() / &f;
        let basis = coupling_relations_additive(
            &eta2inv,
            r1,
            b_group,
            opts.nparams,
            opts.max_theta_order,
            &relations_of(d_group),
        )
        .expect("B was checked nonzero");
        if !basis.is_empty() {
            // consistency checks for the fired branch
            assert!(b_group.is_known_nonzero());
            assert!(!d_group.is_pi_constant(opts.nparams));
            return CouplingDesc::AddMultCoupling { basis };
        }
        return CouplingDesc::TrivialLambda;
    }
    // (ii) multiplicative-multiplicative coupling
    if a_group.is_pi_constant(opts.nparams) || d_group.is_pi_constant(opts.nparams) {
        assumptions.push(
            "coupling case (ii) skipped: a parametrically constant factor admits none"
                .to_string(),
        );
        return CouplingDesc::TrivialLambda;
    }
    let basis = coupling_relations(
        u,
        r1,
        opts.nparams,
        opts.max_theta_order,
        &relations_of(a_group),
        &relations_of(d_group),
    );
    if !basis.is_empty() {
        assert!(!a_group.is_pi_constant(opts.nparams));
        assert!(!d_group.is_pi_constant(opts.nparams));
        return CouplingDesc::MultMultCoupling { basis };
    }
    CouplingDesc::TrivialLambda
}

/// The case-II coupling: a dihedral identification with an even-order
/// determinant group, or nothing.
pub fn lambda_coupling_case2(
    v: &RatFunc,
    r1: &RatFunc,
    d_group: &MultGroupDesc,
) -> CouplingDesc {
    let Some(order) = d_group.finite_order() else {
        // infinite determinant group is connected; its only finite quotient
        // is trivial
        return CouplingDesc::TrivialLambda;
    };
    if order % 2 != 0 {
        return CouplingDesc::TrivialLambda;
    }
    let k = order / 2;
    let shifted = &v.scale(&ParamScalar::from_int(1))
        - &r1.scale(&ParamScalar::from_int(k as i64));
    match is_log_derivative(&shifted) {
        Some(witness) => CouplingDesc::DihedralCoupling { k, witness },
        None => CouplingDesc::TrivialLambda,
    }
}

/// The case-III coupling: scan user-supplied semi-invariants for a
/// character identification with the determinant group.
pub fn lambda_coupling_case3(
    d_group: &MultGroupDesc,
    r1: &RatFunc,
    semi_invariants: &[SemiInvariant],
    partial_reasons: &mut Vec<String>,
) -> CouplingDesc {
    let Some(s) = d_group.finite_order() else {
        return CouplingDesc::TrivialLambda;
    };
    if semi_invariants.is_empty() {
        if s > 1 {
            partial_reasons.push(
                "case III with a finite determinant group needs user-supplied semi-invariants; none were given"
                    .to_string(),
            );
        }
        return CouplingDesc::TrivialLambda;
    }
    for semi in semi_invariants {
        let ell = semi.order.max(1);
        if s % ell != 0 {
            continue;
        }
        let upper = s / ell;
        for k1 in 1..ell {
            for k2 in 1..upper {
                let combined = &semi.v_chi.scale(&ParamScalar::from_int(k1 as i64))
                    - &r1.scale(&ParamScalar::from_int(k2 as i64));
                if let Some(witness) = is_log_derivative(&combined) {
                    return CouplingDesc::FiniteCoupling {
                        chi: semi.label.clone(),
                        k1,
                        k2,
                        witness,
                    };
                }
            }
        }
    }
    CouplingDesc::TrivialLambda
}

/// The third-order operator annihilating all products of solutions with
/// the determinant datum; self-checked against the factored form.
pub fn third_order_operator(
    r1: &RatFunc,
    r0: &RatFunc,
    q: &RatFunc,
) -> Result<DiffOperator, EngineError> {
    if q.is_zero() {
        return Err(EngineError::ZeroQ("the logarithmic factor dx(q)/q is undefined"));
    }
    let dlq = &q.dx() / q;
    let two = ParamScalar::from_int(2);
    let three = ParamScalar::from_int(3);
    let c2 = -&(&r1.scale(&three) + &dlq);
    let r1sq = (r1 * r1).scale(&two);
    let c1 = &(&(&r1sq - &r1.dx().scale(&two)) + r0) + &(r1 * &dlq).scale(&two);
    let c0 = &(&r0.dx() - &(r1 * r0)) - &(r0 * &dlq);
    let op = DiffOperator::from_coeffs(vec![c0, c1, c2, RatFunc::one()]);
    // self-test: (dx - r1 - dx(q)/q) . (dx^2 - 2 r1 dx + r0)
    let left = DiffOperator::from_coeffs(vec![-&(r1 + &dlq), RatFunc::one()]);
    let right = DiffOperator::from_coeffs(vec![r0.clone(), -&r1.scale(&two), RatFunc::one()]);
    assert_eq!(op, left.compose(&right), "third-order factorization identity");
    Ok(op)
}

fn describe_mult_group(g: &MultGroupDesc, symbol: &str) -> String {
    match g {
        MultGroupDesc::Finite { order, .. } => format!("{symbol}^{order} = 1"),
        MultGroupDesc::Infinite { generators, .. } => {
            let rels: Vec<String> = generators
                .iter()
                .map(|p| {
                    format!(
                        "{} = 0",
                        p.render_with(|j| format!("D{}({symbol})/{symbol}", j + 1))
                    )
                })
                .collect();
            if rels.is_empty() {
                format!("{symbol} in Gm")
            } else {
                rels.join("; ")
            }
        }
    }
}

fn describe_add_group(g: &AddGroupDesc) -> String {
    match g {
        AddGroupDesc::Zero => "b = 0".to_string(),
        AddGroupDesc::Full => "b in Ga".to_string(),
        AddGroupDesc::Relations(rels) => rels
            .iter()
            .map(|(p, _)| format!("{} = 0", p.render_with(|_| "b".to_string())))
            .collect::<Vec<_>>()
            .join("; "),
        AddGroupDesc::Unresolved { .. } => "b in B (unresolved)".to_string(),
    }
}

/// Group description of H alone (no determinant scaling).
pub fn describe_h(h: &HDesc) -> GroupDescription {
    match &h.case {
        CaseTag::CaseI { .. } => {
            let a = h.a_group.as_ref().expect("case I carries A");
            let b = h.b_group.as_ref().expect("case I carries B");
            GroupDescription {
                shape: GroupShape::BorelUpper,
                shape_display: "{ (a, b; 0, a^-1) }".to_string(),
                membership: vec![
                    ("a".to_string(), describe_mult_group(a, "a")),
                    ("b".to_string(), describe_add_group(b)),
                ],
                relations: Vec::new(),
            }
        }
        CaseTag::CaseII { .. } => {
            let a = h.a_group.as_ref().expect("case II carries A");
            GroupDescription {
                shape: GroupShape::DihedralPair,
                shape_display: "{ (a, 0; 0, a^-1) } u { (0, -a; a^-1, 0) }".to_string(),
                membership: vec![("a".to_string(), describe_mult_group(a, "a"))],
                relations: Vec::new(),
            }
        }
        CaseTag::CaseIII { .. } => {
            let k = h.finite_group.expect("case III carries the group kind");
            GroupDescription {
                shape: GroupShape::FiniteProduct,
                shape_display: format!("{} in SL2", k.label()),
                membership: vec![("s".to_string(), format!("s in {}", k.label()))],
                relations: Vec::new(),
            }
        }
        CaseTag::CaseIV => {
            let dirs = h
                .pi_prime
                .as_ref()
                .map(|b| b.directions.len())
                .unwrap_or(0);
            GroupDescription {
                shape: GroupShape::ScaledSl2,
                shape_display: format!("SL2 over the constants of a {dirs}-dimensional space of directions"),
                membership: vec![("M".to_string(), "M in SL2(F^Pi')".to_string())],
                relations: Vec::new(),
            }
        }
    }
}

/// Assembles the description of the full group from H, D and the coupling.
pub fn assemble_g(
    h: &HDesc,
    d_group: &MultGroupDesc,
    coupling: &CouplingDesc,
) -> Result<GroupDescription, EngineError> {
    let case_label = h.case.label();
    // trivial determinant group: the full group prints as H itself
    if d_group.finite_order() == Some(1)
        && matches!(coupling, CouplingDesc::TrivialLambda)
    {
        return Ok(describe_h(h));
    }
    match &h.case {
        CaseTag::CaseI { .. } => {
            let a = h.a_group.as_ref().expect("case I carries A");
            let b = h.b_group.as_ref().expect("case I carries B");
            let membership = vec![
                ("a".to_string(), describe_mult_group(a, "a")),
                ("b".to_string(), describe_add_group(b)),
                ("e".to_string(), describe_mult_group(d_group, "e")),
            ];
            let relations = match coupling {
                CouplingDesc::PowerCoupling { k1, k2, .. } => {
                    vec![format!("a^{k1} = e^{k2}")]
                }
                CouplingDesc::MultMultCoupling { basis } => basis
                    .iter()
                    .map(|pair| {
                        format!(
                            "{} = {}",
                            pair.p.render_with(|j| format!("D{}(a)/a", j + 1)),
                            pair.q.render_with(|j| format!("D{}(e)/e", j + 1))
                        )
                    })
                    .collect(),
                CouplingDesc::AddMultCoupling { basis } => basis
                    .iter()
                    .map(|pair| {
                        format!(
                            "{} = {}",
                            pair.p.render_with(|_| "b".to_string()),
                            pair.q.render_with(|j| format!("D{}(e)/e", j + 1))
                        )
                    })
                    .collect(),
                CouplingDesc::TrivialLambda => Vec::new(),
                other => {
                    return Err(EngineError::InconsistentCoupling {
                        case: case_label,
                        coupling: other.kind(),
                    })
                }
            };
            Ok(GroupDescription {
                shape: GroupShape::BorelUpper,
                shape_display: "{ (e*a, e*b; 0, e*a^-1) }".to_string(),
                membership,
                relations,
            })
        }
        CaseTag::CaseII { .. } => {
            let a = h.a_group.as_ref().expect("case II carries A");
            let membership = vec![
                ("a".to_string(), describe_mult_group(a, "a")),
                ("e1".to_string(), describe_mult_group(d_group, "e1")),
                ("e2".to_string(), describe_mult_group(d_group, "e2")),
            ];
            let relations = match coupling {
                CouplingDesc::DihedralCoupling { k, .. } => {
                    vec![format!("e1^{k} = 1"), format!("e2^{k} = -1")]
                }
                CouplingDesc::TrivialLambda => Vec::new(),
                other => {
                    return Err(EngineError::InconsistentCoupling {
                        case: case_label,
                        coupling: other.kind(),
                    })
                }
            };
            Ok(GroupDescription {
                shape: GroupShape::DihedralPair,
                shape_display:
                    "{ (e1*a, 0; 0, e1*a^-1) } u { (0, -e2*a; e2*a^-1, 0) }".to_string(),
                membership,
                relations,
            })
        }
        CaseTag::CaseIII { .. } => {
            let kind = h.finite_group.expect("case III carries the group kind");
            let membership = vec![
                ("s".to_string(), format!("s in {}", kind.label())),
                ("e".to_string(), describe_mult_group(d_group, "e")),
            ];
            let relations = match coupling {
                CouplingDesc::FiniteCoupling { chi, k1, k2, .. } => {
                    vec![format!("{chi}(s)^{k1} = e^{k2}")]
                }
                CouplingDesc::TrivialLambda => Vec::new(),
                other => {
                    return Err(EngineError::InconsistentCoupling {
                        case: case_label,
                        coupling: other.kind(),
                    })
                }
            };
            Ok(GroupDescription {
                shape: GroupShape::FiniteProduct,
                shape_display: "{ e*s : s in H, e in D }".to_string(),
                membership,
                relations,
            })
        }
        CaseTag::CaseIV => {
            if !matches!(coupling, CouplingDesc::TrivialLambda) {
                return Err(EngineError::InconsistentCoupling {
                    case: case_label,
                    coupling: coupling.kind(),
                });
            }
            let dirs = h
                .pi_prime
                .as_ref()
                .map(|b| b.directions.len())
                .unwrap_or(0);
            Ok(GroupDescription {
                shape: GroupShape::ScaledSl2,
                shape_display: "{ e*M : M in SL2(F^Pi'), e in D }".to_string(),
                membership: vec![
                    (
                        "M".to_string(),
                        format!("M in SL2 of the constants of {dirs} commuting directions"),
                    ),
                    ("e".to_string(), describe_mult_group(d_group, "e")),
                ],
                relations: Vec::new(),
            })
        }
    }
}

/// Runs the whole computation.
pub fn run_pipeline(
    a1: &RatFunc,
    a0: &RatFunc,
    opts: &PipelineOptions,
) -> Result<PpvReport, EngineError> {
    let (r1, r0, q) = normalize_equation(a1, a0);
    let mut assumptions: Vec<String> = opts.assume.clone();
    let mut partial_reasons: Vec<String> = Vec::new();
    let (h, class_assumptions, b_notes) = compute_unimodular_group(&q, opts);
    assumptions.extend(class_assumptions);
    partial_reasons.extend(b_notes);
    let d_group = compute_d(&r1, opts);
    let coupling = match &h.case {
        CaseTag::CaseI { u, .. } => lambda_coupling_case1(
            u,
            h.a_group.as_ref().unwrap(),
            h.b_group.as_ref().unwrap(),
            &r1,
            &d_group,
            opts,
            &mut assumptions,
            &mut partial_reasons,
        ),
        CaseTag::CaseII { v, .. } => lambda_coupling_case2(v, &r1, &d_group),
        CaseTag::CaseIII { .. } => {
            lambda_coupling_case3(&d_group, &r1, &opts.semi_invariants, &mut partial_reasons)
        }
        CaseTag::CaseIV => CouplingDesc::TrivialLambda,
    };
    let group = assemble_g(&h, &d_group, &coupling)?;
    // truncation bookkeeping and stabilization-driven completeness
    let mut a_dims = None;
    let mut a_stab = None;
    if let Some(MultGroupDesc::Infinite {
        dims_per_order,
        stabilized,
        ..
    }) = &h.a_group
    {
        a_dims = Some(dims_per_order.clone());
        a_stab = Some(*stabilized);
        if !stabilized {
            partial_reasons.push(format!(
                "relation basis for A truncated at derivative order {} without provable stabilization",
                opts.max_theta_order
            ));
        }
    }
    let mut d_dims = None;
    let mut d_stab = None;
    if let MultGroupDesc::Infinite {
        dims_per_order,
        stabilized,
        ..
    } = &d_group
    {
        d_dims = Some(dims_per_order.clone());
        d_stab = Some(*stabilized);
        if !stabilized {
            partial_reasons.push(format!(
                "relation basis for D truncated at derivative order {} without provable stabilization",
                opts.max_theta_order
            ));
        }
    }
    if let Some(AddGroupDesc::Unresolved { .. }) = &h.b_group {
        partial_reasons.push("B is unresolved".to_string());
    }
    partial_reasons.sort();
    partial_reasons.dedup();
    let completeness = if partial_reasons.is_empty() {
        Completeness::Complete
    } else {
        Completeness::Partial(partial_reasons)
    };
    assumptions.sort();
    assumptions.dedup();
    Ok(PpvReport {
        a1: a1.clone(),
        a0: a0.clone(),
        r1,
        r0,
        q,
        h,
        d_group,
        coupling,
        group,
        assumptions,
        completeness,
        truncation: TruncationReport {
            max_theta_order: opts.max_theta_order,
            finite_order_bound: opts.finite_order_bound,
            lattice_search_bound: opts.lattice_search_bound,
            a_dims_per_order: a_dims,
            d_dims_per_order: d_dims,
            a_stabilized: a_stab,
            d_stabilized: d_stab,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;
    use crate::algebra::xpoly::XPoly;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(num), xpoly_int(den)).unwrap()
    }

    pub(crate) fn worked_r1() -> RatFunc {
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        &(&(&t1 - &t2) / &x) + &(&t2 / &(&x - &one))
    }

    pub(crate) fn worked_u() -> RatFunc {
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        &(&t1 / &x) + &(&(&t1 - &t2) / &(&x - &one))
    }

    /// The worked two-parameter input with r0 chosen so that
    /// q = r1^2 - r1' - r0 equals u' + u^2.
    pub(crate) fn worked_input() -> (RatFunc, RatFunc) {
        let r1 = worked_r1();
        let u = worked_u();
        let q = &u.dx() + &(&u * &u);
        let a1 = r1.scale(&ParamScalar::from_int(-2));
        let r0 = &(&(&r1 * &r1) - &r1.dx()) - &q;
        (a1, r0)
    }

    #[test]
    fn normalization_matches_worked_example() {
        let (a1, a0) = worked_input();
        let (r1, _r0, q) = normalize_equation(&a1, &a0);
        assert_eq!(r1, worked_r1());
        // q = (t1(t1-1) - 2 t1 (t1-t2) x)/x^2
        //     + (t1-t2)(2 t1 x - t1 - t2 - 1)/(x-1)^2
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        let n1 = &(&t1 * &(&t1 - &one))
            - &(&(&t1.scale(&ParamScalar::from_int(2)) * &(&t1 - &t2)) * &x);
        let piece1 = &n1 / &(&x * &x);
        let inner = &(&(&t1.scale(&ParamScalar::from_int(2)) * &x) - &t1) - &(&t2 + &one);
        let n2 = &(&t1 - &t2) * &inner;
        let xm1 = &x - &one;
        let piece2 = &n2 / &(&xm1 * &xm1);
        let expect = &piece1 + &piece2;
        assert_eq!(q, expect);
    }

    #[test]
    fn unimodular_input_normalizes_trivially() {
        let q0 = rf(&[1, 2], &[0, 0, 1]);
        let (r1, r0, q) = normalize_equation(&RatFunc::zero(), &(-&q0));
        assert!(r1.is_zero());
        assert_eq!(r0, -&q0);
        assert_eq!(q, q0);
    }

    #[test]
    fn worked_example_full_pipeline() {
        let (a1, a0) = worked_input();
        let opts = PipelineOptions::new(2);
        let report = run_pipeline(&a1, &a0, &opts).unwrap();
        match &report.h.case {
            CaseTag::CaseI { u, .. } => assert_eq!(u, &worked_u()),
            other => panic!("expected case I, got {}", other.label()),
        }
        assert!(matches!(
            report.h.b_group,
            Some(AddGroupDesc::Full)
        ));
        match &report.coupling {
            CouplingDesc::MultMultCoupling { basis } => assert_eq!(basis.len(), 2),
            other => panic!("expected mult-mult coupling, got {}", other.kind()),
        }
        // final relations as displayed
        assert_eq!(
            report.group.relations,
            vec![
                "D1(a)/a + D2(a)/a = D1(e)/e".to_string(),
                "D2(a)/a = -D1(e)/e - D2(e)/e".to_string(),
            ]
        );
        assert!(report.completeness.is_complete());
    }

    #[test]
    fn airy_pipeline_is_scaled_sl2() {
        // a1 = 0, a0 = -x
        let opts = PipelineOptions::new(1);
        let report = run_pipeline(&RatFunc::zero(), &(-&RatFunc::x()), &opts).unwrap();
        assert_eq!(report.h.case.label(), "IV");
        assert_eq!(report.d_group.finite_order(), Some(1));
        assert!(matches!(report.coupling, CouplingDesc::TrivialLambda));
        assert_eq!(report.group.shape, GroupShape::ScaledSl2);
        assert!(report.completeness.is_complete());
    }

    #[test]
    fn power_coupling_when_r1_equals_u() {
        // u = 1/x (q = 0), r1 = u: k1 = k2 = 1 with witness constant
        let u = rf(&[1], &[0, 1]);
        let a1 = u.scale(&ParamScalar::from_int(-2));
        let q = RatFunc::zero();
        let r0 = &(&(&u * &u) - &u.dx()) - &q;
        let opts = PipelineOptions::new(1);
        let report = run_pipeline(&a1, &r0, &opts).unwrap();
        assert_eq!(report.h.case.label(), "I");
        match &report.coupling {
            CouplingDesc::PowerCoupling { k1, k2, witness } => {
                assert_eq!((k1.clone(), k2.clone()), (BigInt::from(1), BigInt::from(1)));
                assert!(witness.is_scalar());
            }
            other => panic!("expected power coupling, got {}", other.kind()),
        }
        assert!(report
            .group
            .relations
            .contains(&"a^1 = e^1".to_string()));
    }

    #[test]
    fn two_solutions_give_zero_b() {
        // q = 2/x^2 has the two solutions 2/x and -1/x
        let q = rf(&[2], &[0, 0, 1]);
        let opts = PipelineOptions::new(1);
        let report = run_pipeline(&RatFunc::zero(), &(-&q), &opts).unwrap();
        assert!(matches!(report.h.b_group, Some(AddGroupDesc::Zero)));
    }

    #[test]
    fn determinant_group_examples() {
        let opts = PipelineOptions::new(1);
        // r1 = 1/(2x): mu_2
        let d = compute_d(&rf(&[1], &[0, 2]), &opts);
        assert_eq!(d.finite_order(), Some(2));
        // r1 = 0: trivial
        let d0 = compute_d(&RatFunc::zero(), &opts);
        assert_eq!(d0.finite_order(), Some(1));
    }

    #[test]
    fn dihedral_coupling_even_order() {
        // v = 1/(2x) = r1, D = mu_2 (k = 1): v - 1*r1 = 0
        let v = rf(&[1], &[0, 2]);
        let r1 = rf(&[1], &[0, 2]);
        let opts = PipelineOptions::new(1);
        let d = compute_d(&r1, &opts);
        match lambda_coupling_case2(&v, &r1, &d) {
            CouplingDesc::DihedralCoupling { k, witness } => {
                assert_eq!(k, 1);
                assert!(witness.is_scalar());
            }
            other => panic!("expected dihedral coupling, got {}", other.kind()),
        }
    }

    #[test]
    fn dihedral_coupling_trivial_paths() {
        let v = rf(&[1], &[0, 2]);
        let opts = PipelineOptions::new(1);
        // infinite D
        let t1 = RatFunc::param(0);
        let d_inf = compute_d(&(&t1 / &RatFunc::x()), &opts);
        assert!(matches!(
            lambda_coupling_case2(&v, &(&t1 / &RatFunc::x()), &d_inf),
            CouplingDesc::TrivialLambda
        ));
        // odd finite D: r1 = 1/(3x) gives mu_3
        let r1 = rf(&[1], &[0, 3]);
        let d3 = compute_d(&r1, &opts);
        assert_eq!(d3.finite_order(), Some(3));
        assert!(matches!(
            lambda_coupling_case2(&v, &r1, &d3),
            CouplingDesc::TrivialLambda
        ));
    }

    #[test]
    fn finite_coupling_with_supplied_semi_invariant() {
        // D = mu_4 via r1 = 1/(4x); v_chi = r1 with ell = 2: k1 = k2 = 1
        let r1 = rf(&[1], &[0, 4]);
        let opts = PipelineOptions::new(1);
        let d = compute_d(&r1, &opts);
        assert_eq!(d.finite_order(), Some(4));
        let semis = vec![SemiInvariant {
            label: "chi".to_string(),
            order: 2,
            v_chi: r1.clone(),
        }];
        let mut reasons = Vec::new();
        match lambda_coupling_case3(&d, &r1, &semis, &mut reasons) {
            CouplingDesc::FiniteCoupling { k1, k2, .. } => {
                assert_eq!((k1, k2), (1, 1));
            }
            other => panic!("expected finite coupling, got {}", other.kind()),
        }
        // without semi-invariants: trivial with a partial reason
        let mut reasons2 = Vec::new();
        assert!(matches!(
            lambda_coupling_case3(&d, &r1, &[], &mut reasons2),
            CouplingDesc::TrivialLambda
        ));
        assert_eq!(reasons2.len(), 1);
        // infinite D: trivial, no reasons
        let t1 = RatFunc::param(0);
        let d_inf = compute_d(&(&t1 / &RatFunc::x()), &opts);
        let mut reasons3 = Vec::new();
        assert!(matches!(
            lambda_coupling_case3(&d_inf, &r1, &semis, &mut reasons3),
            CouplingDesc::TrivialLambda
        ));
        assert!(reasons3.is_empty());
    }

    #[test]
    fn third_order_operator_identity() {
        let (a1, a0) = worked_input();
        let (r1, r0, q) = normalize_equation(&a1, &a0);
        let op = third_order_operator(&r1, &r0, &q).unwrap();
        assert_eq!(op.order(), Some(3));
        // unimodular specialization r1 = 0, r0 = -q
        let q2 = rf(&[1, 1], &[0, 0, 0, 1]);
        let op2 = third_order_operator(&RatFunc::zero(), &(-&q2), &q2).unwrap();
        assert_eq!(op2.order(), Some(3));
        // q = 0 errors
        assert!(third_order_operator(&RatFunc::zero(), &RatFunc::zero(), &RatFunc::zero())
            .is_err());
    }

    #[test]
    fn inconsistent_coupling_is_rejected() {
        let (a1, a0) = worked_input();
        let opts = PipelineOptions::new(2);
        let report = run_pipeline(&a1, &a0, &opts).unwrap();
        let bad = CouplingDesc::DihedralCoupling {
            k: 1,
            witness: RatFunc::one(),
        };
        let err = assemble_g(&report.h, &report.d_group, &bad).unwrap_err();
        assert!(matches!(err, EngineError::InconsistentCoupling { .. }));
    }

    #[test]
    fn unimodular_degeneration_matches_h() {
        let q = rf(&[2], &[0, 0, 1]);
        let opts = PipelineOptions::new(1);
        let report = run_pipeline(&RatFunc::zero(), &(-&q), &opts).unwrap();
        assert_eq!(report.d_group.finite_order(), Some(1));
        assert!(matches!(report.coupling, CouplingDesc::TrivialLambda));
        assert_eq!(report.group, describe_h(&report.h));
    }

    #[test]
    fn additive_coupling_instance() {
        // u = 1/(2x) (A = mu_2), r1 = t1/x (D infinite, not constant):
        // q = u' + u^2 = -1/(4x^2); B comes out full via the eta^{-2} data
        let u = rf(&[1], &[0, 2]);
        let q = &u.dx() + &(&u * &u);
        let t1 = RatFunc::param(0);
        let r1 = &t1 / &RatFunc::x();
        let a1 = r1.scale(&ParamScalar::from_int(-2));
        let r0 = &(&(&r1 * &r1) - &r1.dx()) - &q;
        let opts = PipelineOptions::new(1);
        let report = run_pipeline(&a1, &r0, &opts).unwrap();
        assert_eq!(report.h.case.label(), "I");
        let a = report.h.a_group.as_ref().unwrap();
        assert_eq!(a.finite_order(), Some(2));
        match &report.coupling {
            CouplingDesc::AddMultCoupling { basis } => {
                assert!(!basis.is_empty());
            }
            other => panic!("expected add-mult coupling, got {}", other.kind()),
        }
    }
}

//! Coupling-relation solvers: pairs (p, q) of linear differential
//! polynomials with p(data) - q(d r1 data) exact, reported modulo the
//! trivial pairs coming from relations of the factor groups.

use crate::algebra::linalg::in_row_space;
use crate::algebra::ratfunc::{Derivation, RatFunc};
use crate::algebra::scalar::ParamScalar;
use crate::calculus::exactness::exactness_relation_space;

use super::additive::AddGroupDesc;
use super::lindiff::{LinDiffPoly, ThetaMonomial};
use super::multiplicative::{from_vector, keys_up_to, to_vector};

/// One coupling relation with its exactness witness.
#[derive(Clone, Debug)]
pub struct CouplingPair {
    pub p: LinDiffPoly,
    pub q: LinDiffPoly,
    pub witness: RatFunc,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CouplingError {
    ZeroAdditiveGroup,
}

impl std::fmt::Display for CouplingError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CouplingError::ZeroAdditiveGroup => {
                write!(f, "precondition: B != 0")
            }
        }
    }
}

impl std::error::Error for CouplingError {}

/// Row = (coefficient vector, witness) for elimination with witness carry.
fn eliminate_with_witnesses(
    trivial: Vec<(Vec<ParamScalar>, RatFunc)>,
    candidates: Vec<(Vec<ParamScalar>, RatFunc)>,
) -> Vec<(Vec<ParamScalar>, RatFunc)> {
    let mut pivots: Vec<(usize, Vec<ParamScalar>, RatFunc)> = Vec::new();
    let reduce = |mut v: Vec<ParamScalar>,
                      mut w: RatFunc,
                      pivots: &Vec<(usize, Vec<ParamScalar>, RatFunc)>|
     -> (Vec<ParamScalar>, RatFunc) {
        for (pc, pv, pw) in pivots {
            if !v[*pc].is_zero() {
                let factor = v[*pc].clone();
                for j in 0..v.len() {
                    let delta = &factor * &pv[j];
                    v[j] = &v[j] - &delta;
                }
                let delta = pw.scale(&factor);
                w = &w - &delta;
            }
        }
        (v, w)
    };
    let add_pivot = |v: Vec<ParamScalar>,
                         w: RatFunc,
                         pivots: &mut Vec<(usize, Vec<ParamScalar>, RatFunc)>|
     -> bool {
        let Some(pc) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = v[pc].inv();
        let v: Vec<ParamScalar> = v.iter().map(|c| c * &inv).collect();
        let w = w.scale(&inv);
        pivots.push((pc, v, w));
        pivots.sort_by_key(|(c, _, _)| *c);
        true
    };
    for (v, w) in trivial {
        let (v, w) = reduce(v, w, &pivots);
        add_pivot(v, w, &mut pivots);
    }
    let mut survivors = Vec::new();
    for (v, w) in candidates {
        let (v, w) = reduce(v, w, &pivots);
        if add_pivot(v.clone(), w.clone(), &mut pivots) {
            survivors.push((v, w));
        }
    }
    // back-substitute survivors against each other for a reduced form
    let mut final_pivots: Vec<(usize, Vec<ParamScalar>, RatFunc)> = Vec::new();
    let mut out = Vec::new();
    for (v, w) in survivors {
        let (v, w) = reduce(v, w, &final_pivots);
        if add_pivot(v, w, &mut final_pivots) {
            let (pc, nv, nw) = final_pivots.last().unwrap().clone();
            let _ = pc;
            out.push((nv, nw));
        }
    }
    out
}

/// Basis of the space of pairs (p, q) with
/// p(d1 u,...,dm u) - q(d1 r1,...,dm r1) in dx(K), quotiented by the pairs
/// that impose no coupling (p a relation of A paired with q a relation of D).
pub fn coupling_relations(
    u: &RatFunc,
    r1: &RatFunc,
    nparams: usize,
    max_theta_order: u32,
    a_relations: &[(LinDiffPoly, RatFunc)],
    d_relations: &[(LinDiffPoly, RatFunc)],
) -> Vec<CouplingPair> {
    let keys = keys_up_to(nparams, nparams, max_theta_order);
    let du: Vec<RatFunc> = (0..nparams)
        .map(|j| u.derive(&Derivation::Param(j)))
        .collect();
    let dr: Vec<RatFunc> = (0..nparams)
        .map(|j| r1.derive(&Derivation::Param(j)))
        .collect();
    let mut family: Vec<RatFunc> = keys
        .iter()
        .map(|(theta, j)| theta.apply(&du[*j]))
        .collect();
    family.extend(keys.iter().map(|(theta, j)| -&theta.apply(&dr[*j])));
    let space = exactness_relation_space(&family);
    let ncols = 2 * keys.len();
    // trivial rows: (a_rel | 0) and (0 | d_rel)
    let mut trivial = Vec::new();
    for (p, f) in a_relations {
        let mut v = to_vector(p, &keys);
        v.extend(vec![ParamScalar::zero(); keys.len()]);
        trivial.push((v, f.clone()));
    }
    for (q, f) in d_relations {
        let mut v = vec![ParamScalar::zero(); keys.len()];
        v.extend(to_vector(q, &keys));
        trivial.push((v, -f));
    }
    let candidates: Vec<(Vec<ParamScalar>, RatFunc)> = space
        .basis
        .iter()
        .zip(&space.witnesses)
        .map(|(v, f)| (v.clone(), f.clone()))
        .collect();
    let reduced = eliminate_with_witnesses(trivial, candidates);
    let a_vectors: Vec<Vec<ParamScalar>> =
        a_relations.iter().map(|(p, _)| to_vector(p, &keys)).collect();
    let d_vectors: Vec<Vec<ParamScalar>> =
        d_relations.iter().map(|(q, _)| to_vector(q, &keys)).collect();
    let mut out = Vec::new();
    for (v, w) in reduced {
        assert_eq!(v.len(), ncols);
        let p = from_vector(&v[..keys.len()], &keys, nparams);
        let q = from_vector(&v[keys.len()..], &keys, nparams);
        // nontriviality certificates
        let pv = to_vector(&p, &keys);
        assert!(
            !in_row_space(&a_vectors, &pv),
            "coupling p stays outside the relation span of A"
        );
        let qv = to_vector(&q, &keys);
        assert!(
            !in_row_space(&d_vectors, &qv),
            "coupling q stays outside the relation span of D"
        );
        // witness re-verification
        let lhs = &p.apply(&du).unwrap() - &q.apply(&dr).unwrap();
        assert_eq!(lhs, w.dx(), "coupling witness re-verifies");
        out.push(CouplingPair { p, q, witness: w });
    }
    out
}

/// Basis of pairs (p, q) with p a single-variable polynomial applied to
/// eta^{-2} and q applied to (d1 r1,...,dm r1), with p nontrivial modulo
/// the relations of B.
pub fn coupling_relations_additive(
    eta2inv: &RatFunc,
    r1: &RatFunc,
    b_group: &AddGroupDesc,
    nparams: usize,
    max_theta_order: u32,
    d_relations: &[(LinDiffPoly, RatFunc)],
) -> Result<Vec<CouplingPair>, CouplingError> {
    if matches!(b_group, AddGroupDesc::Zero) {
        return Err(CouplingError::ZeroAdditiveGroup);
    }
    let p_keys = keys_up_to(1, nparams, max_theta_order);
    let q_keys = keys_up_to(nparams, nparams, max_theta_order);
    let dr: Vec<RatFunc> = (0..nparams)
        .map(|j| r1.derive(&Derivation::Param(j)))
        .collect();
    let mut family: Vec<RatFunc> = p_keys
        .iter()
        .map(|(theta, _)| theta.apply(eta2inv))
        .collect();
    family.extend(q_keys.iter().map(|(theta, j)| -&theta.apply(&dr[*j])));
    let space = exactness_relation_space(&family);
    // trivial rows: (b_rel | 0) and (0 | d_rel)
    let mut trivial = Vec::new();
    let b_relations: Vec<(LinDiffPoly, RatFunc)> = match b_group {
        AddGroupDesc::Relations(rels) => rels.clone(),
        _ => Vec::new(),
    };
    for (p, f) in &b_relations {
        let mut v = to_vector(p, &p_keys);
        v.extend(vec![ParamScalar::zero(); q_keys.len()]);
        trivial.push((v, f.clone()));
    }
    for (q, f) in d_relations {
        let mut v = vec![ParamScalar::zero(); p_keys.len()];
        v.extend(to_vector(q, &q_keys));
        trivial.push((v, -f));
    }
    let candidates: Vec<(Vec<ParamScalar>, RatFunc)> = space
        .basis
        .iter()
        .zip(&space.witnesses)
        .map(|(v, f)| (v.clone(), f.clone()))
        .collect();
    let reduced = eliminate_with_witnesses(trivial, candidates);
    let b_vectors: Vec<Vec<ParamScalar>> = b_relations
        .iter()
        .map(|(p, _)| to_vector(p, &p_keys))
        .collect();
    let mut out = Vec::new();
    for (v, w) in reduced {
        let p = from_vector(&v[..p_keys.len()], &p_keys, 1);
        let q = from_vector(&v[p_keys.len()..], &q_keys, nparams);
        let pv = to_vector(&p, &p_keys);
        if p.is_zero() || in_row_space(&b_vectors, &pv) {
            // imposes nothing on B
            continue;
        }
        let lhs = &p.apply(std::slice::from_ref(eta2inv)).unwrap() - &q.apply(&dr).unwrap();
        assert_eq!(lhs, w.dx(), "additive coupling witness re-verifies");
        out.push(CouplingPair { p, q, witness: w });
    }
    Ok(out)
}

/// Reduced row echelon form of a set of (p, q) pairs over the ordered term
/// basis; idempotent and row-space preserving.
pub fn canonicalize_basis(pairs: Vec<(LinDiffPoly, LinDiffPoly)>) -> Vec<(LinDiffPoly, LinDiffPoly)> {
    if pairs.is_empty() {
        return pairs;
    }
    let nparams = pairs
        .iter()
        .flat_map(|(p, q)| {
            p.terms()
                .map(|(k, _)| k.0.nparams())
                .chain(q.terms().map(|(k, _)| k.0.nparams()))
        })
        .max()
        .unwrap_or(0);
    let p_vars = pairs.iter().map(|(p, _)| p.nvars).max().unwrap();
    let q_vars = pairs.iter().map(|(_, q)| q.nvars).max().unwrap();
    let order = pairs
        .iter()
        .map(|(p, q)| p.max_order().max(q.max_order()))
        .max()
        .unwrap();
    let p_keys = keys_up_to(p_vars, nparams, order);
    let q_keys = keys_up_to(q_vars, nparams, order);
    let mut rows: Vec<Vec<ParamScalar>> = pairs
        .iter()
        .map(|(p, q)| {
            let mut v = to_vector(p, &p_keys);
            v.extend(to_vector(q, &q_keys));
            v
        })
        .collect();
    let _ = crate::algebra::linalg::rref(&mut rows);
    rows.into_iter()
        .map(|v| {
            (
                from_vector(&v[..p_keys.len()], &p_keys, p_vars),
                from_vector(&v[p_keys.len()..], &q_keys, q_vars),
            )
        })
        .collect()
}

/// Helper for tests and the engine: builds a polynomial from (theta, var,
/// coefficient) triples.
pub fn lindiff_from_terms(
    nvars: usize,
    terms: &[(Vec<u32>, usize, i64)],
) -> LinDiffPoly {
    let mut p = LinDiffPoly::zero(nvars);
    for (exps, var, c) in terms {
        p.set(
            (ThetaMonomial::from_exponents(exps.clone()), *var),
            ParamScalar::from_int(*c),
        );
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::multiplicative::{compute_mult_group, MultGroupDesc, MultGroupOptions};

    fn worked_u() -> RatFunc {
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        &(&t1 / &x) + &(&(&t1 - &t2) / &(&x - &one))
    }

    fn worked_r1() -> RatFunc {
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        &(&(&t1 - &t2) / &x) + &(&t2 / &(&x - &one))
    }

    fn relations_of(g: &MultGroupDesc) -> Vec<(LinDiffPoly, RatFunc)> {
        match g {
            MultGroupDesc::Infinite { relations, .. } => relations.clone(),
            _ => Vec::new(),
        }
    }

    #[test]
    fn worked_example_coupling_basis() {
        let u = worked_u();
        let r1 = worked_r1();
        let opts = MultGroupOptions::default();
        let a = compute_mult_group(&u, 2, &opts);
        let d = compute_mult_group(&r1, 2, &opts);
        let pairs = coupling_relations(&u, &r1, 2, 3, &relations_of(&a), &relations_of(&d));
        assert_eq!(pairs.len(), 2);
        // expected row space: {(Y1+Y2, Y1), (-Y2, Y1+Y2)}
        let e1 = (
            lindiff_from_terms(2, &[(vec![0, 0], 0, 1), (vec![0, 0], 1, 1)]),
            lindiff_from_terms(2, &[(vec![0, 0], 0, 1)]),
        );
        let e2 = (
            lindiff_from_terms(2, &[(vec![0, 0], 1, -1)]),
            lindiff_from_terms(2, &[(vec![0, 0], 0, 1), (vec![0, 0], 1, 1)]),
        );
        let got = canonicalize_basis(pairs.iter().map(|c| (c.p.clone(), c.q.clone())).collect());
        let expect = canonicalize_basis(vec![e1, e2]);
        assert_eq!(got, expect);
        for c in &pairs {
            assert!(c.witness.is_zero());
        }
    }

    #[test]
    fn identical_inputs_have_identity_coupling() {
        let u = worked_u();
        let opts = MultGroupOptions::default();
        let a = compute_mult_group(&u, 2, &opts);
        let rels = relations_of(&a);
        let pairs = coupling_relations(&u, &u, 2, 3, &rels, &rels);
        // (Y1, Y1) and (Y2, Y2) with witness 0 span the space
        assert_eq!(pairs.len(), 2);
        for c in &pairs {
            assert!(c.witness.is_zero());
        }
        let got = canonicalize_basis(pairs.iter().map(|c| (c.p.clone(), c.q.clone())).collect());
        let expect = canonicalize_basis(vec![
            (
                lindiff_from_terms(2, &[(vec![0, 0], 0, 1)]),
                lindiff_from_terms(2, &[(vec![0, 0], 0, 1)]),
            ),
            (
                lindiff_from_terms(2, &[(vec![0, 0], 1, 1)]),
                lindiff_from_terms(2, &[(vec![0, 0], 1, 1)]),
            ),
        ]);
        assert_eq!(got, expect);
    }

    #[test]
    fn disjoint_poles_give_empty_coupling() {
        // u with poles {0}, r1 with poles {x - 3}, non-cancelling residues
        let t1 = RatFunc::param(0);
        let x = RatFunc::x();
        let u = &t1 / &x;
        let r1 = &t1 / &(&x - &RatFunc::from_int(3));
        let opts = MultGroupOptions::default();
        let a = compute_mult_group(&u, 1, &opts);
        let d = compute_mult_group(&r1, 1, &opts);
        let pairs = coupling_relations(&u, &r1, 1, 2, &relations_of(&a), &relations_of(&d));
        assert!(pairs.is_empty());
    }

    #[test]
    fn canonicalize_scaling_and_duplicates() {
        let two_p = lindiff_from_terms(1, &[(vec![0], 0, 2)]);
        let two_q = lindiff_from_terms(1, &[(vec![0], 0, 2)]);
        let got = canonicalize_basis(vec![
            (two_p.clone(), two_q.clone()),
            (two_p.clone(), two_q.clone()),
        ]);
        assert_eq!(got.len(), 1);
        assert_eq!(
            got[0],
            (
                lindiff_from_terms(1, &[(vec![0], 0, 1)]),
                lindiff_from_terms(1, &[(vec![0], 0, 1)])
            )
        );
        // idempotence
        assert_eq!(canonicalize_basis(got.clone()), got);
    }

    #[test]
    fn additive_coupling_rejects_zero_b() {
        let r = coupling_relations_additive(
            &RatFunc::one(),
            &RatFunc::zero(),
            &AddGroupDesc::Zero,
            1,
            2,
            &[],
        );
        assert_eq!(r.unwrap_err(), CouplingError::ZeroAdditiveGroup);
    }

    #[test]
    fn additive_coupling_simple_instance() {
        // eta^{-2} = 1/x, r1 = t1/x: pair (Y, Y) with witness 0
        let x = RatFunc::x();
        let eta2inv = &RatFunc::one() / &x;
        let t1 = RatFunc::param(0);
        let r1 = &t1 / &x;
        let opts = MultGroupOptions::default();
        let d = compute_mult_group(&r1, 1, &opts);
        let d_rels = relations_of(&d);
        let pairs = coupling_relations_additive(
            &eta2inv,
            &r1,
            &AddGroupDesc::Full,
            1,
            3,
            &d_rels,
        )
        .unwrap();
        assert!(!pairs.is_empty());
        // the order-0 pair must be present modulo the span
        let got = canonicalize_basis(pairs.iter().map(|c| (c.p.clone(), c.q.clone())).collect());
        assert!(got.contains(&(
            lindiff_from_terms(1, &[(vec![0], 0, 1)]),
            lindiff_from_terms(1, &[(vec![0], 0, 1)])
        )));
    }
}

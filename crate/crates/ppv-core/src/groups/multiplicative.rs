//! Cassidy-style descriptions of differential algebraic subgroups of the
//! multiplicative group, computed from a log-derivative datum w: the group
//! of the first-order equation dx Y = w Y.

use crate::algebra::linalg::{in_row_space, rref, same_row_space};
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::scalar::ParamScalar;
use crate::calculus::exactness::exactness_relation_space;
use crate::calculus::logder::minimal_log_multiple;

use super::lindiff::{LinDiffPoly, ThetaMonomial};

/// Description of a subgroup A of the multiplicative group.
#[derive(Clone, Debug)]
pub enum MultGroupDesc {
    /// The group of ell-th roots of unity; ell*w = dx(f)/f with the witness.
    Finite { order: u32, witness: RatFunc },
    /// Contains all parametric constants; cut out by linear differential
    /// polynomial relations in d1 a/a, ..., dm a/a.
    Infinite {
        /// Full relation basis at the truncation order, with witnesses.
        relations: Vec<(LinDiffPoly, RatFunc)>,
        /// Reduced module presentation (relations minus derivative
        /// consequences of earlier ones).
        generators: Vec<LinDiffPoly>,
        truncation_order: u32,
        /// True when the substituted family vanishes identically at some
        /// order <= truncation, which makes the basis provably complete.
        stabilized: bool,
        /// Relation-space dimension at each order 0..=truncation.
        dims_per_order: Vec<usize>,
    },
}

impl MultGroupDesc {
    pub fn is_finite(&self) -> bool {
        matches!(self, MultGroupDesc::Finite { .. })
    }

    pub fn finite_order(&self) -> Option<u32> {
        match self {
            MultGroupDesc::Finite { order, .. } => Some(*order),
            _ => None,
        }
    }

    /// A finite group is parametrically constant; an infinite one is
    /// constant iff its relations force every d_j a / a to vanish.
    pub fn is_pi_constant(&self, nparams: usize) -> bool {
        match self {
            MultGroupDesc::Finite { .. } => true,
            MultGroupDesc::Infinite { relations, .. } => {
                let keys = collect_keys(relations.iter().map(|(p, _)| p), nparams);
                let basis: Vec<Vec<ParamScalar>> = relations
                    .iter()
                    .map(|(p, _)| to_vector(p, &keys))
                    .collect();
                (0..nparams).all(|j| {
                    let yj = LinDiffPoly::var(nparams, j, nparams);
                    match vector_in_keys(&yj, &keys) {
                        Some(v) => in_row_space(&basis, &v),
                        None => false,
                    }
                })
            }
        }
    }

    /// Row-space comparison of the defining data.
    pub fn coincides_with(&self, other: &MultGroupDesc, nparams: usize) -> bool {
        match (self, other) {
            (
                MultGroupDesc::Finite { order: a, .. },
                MultGroupDesc::Finite { order: b, .. },
            ) => a == b,
            (
                MultGroupDesc::Infinite { relations: ra, .. },
                MultGroupDesc::Infinite { relations: rb, .. },
            ) => {
                let keys = collect_keys(
                    ra.iter().map(|(p, _)| p).chain(rb.iter().map(|(p, _)| p)),
                    nparams,
                );
                let va: Vec<Vec<ParamScalar>> =
                    ra.iter().map(|(p, _)| to_vector(p, &keys)).collect();
                let vb: Vec<Vec<ParamScalar>> =
                    rb.iter().map(|(p, _)| to_vector(p, &keys)).collect();
                same_row_space(&va, &vb)
            }
            _ => false,
        }
    }
}

/// Column keys for a family of polynomials (union of their term keys plus
/// all monomial keys up to the maximal order so bases can be compared).
pub fn collect_keys<'a, I: Iterator<Item = &'a LinDiffPoly>>(
    polys: I,
    nparams: usize,
) -> Vec<(ThetaMonomial, usize)> {
    let mut max_order = 0;
    let mut nvars = 1;
    for p in polys {
        max_order = max_order.max(p.max_order());
        nvars = nvars.max(p.nvars);
    }
    keys_up_to(nvars, nparams, max_order)
}

pub fn keys_up_to(nvars: usize, nparams: usize, order: u32) -> Vec<(ThetaMonomial, usize)> {
    let mut keys = Vec::new();
    for theta in ThetaMonomial::up_to_order(nparams, order) {
        for j in 0..nvars {
            keys.push((theta.clone(), j));
        }
    }
    keys
}

pub fn to_vector(p: &LinDiffPoly, keys: &[(ThetaMonomial, usize)]) -> Vec<ParamScalar> {
    keys.iter().map(|k| p.coeff(k)).collect()
}

fn vector_in_keys(
    p: &LinDiffPoly,
    keys: &[(ThetaMonomial, usize)],
) -> Option<Vec<ParamScalar>> {
    // every term of p must be covered by the key list
    for (k, _) in p.terms() {
        if !keys.contains(k) {
            return None;
        }
    }
    Some(to_vector(p, keys))
}

pub fn from_vector(
    v: &[ParamScalar],
    keys: &[(ThetaMonomial, usize)],
    nvars: usize,
) -> LinDiffPoly {
    let mut p = LinDiffPoly::zero(nvars);
    for (c, k) in v.iter().zip(keys) {
        if !c.is_zero() {
            p.set(k.clone(), c.clone());
        }
    }
    p
}

pub struct MultGroupOptions {
    pub max_theta_order: u32,
    pub finite_order_bound: u32,
}

impl Default for MultGroupOptions {
    fn default() -> Self {
        MultGroupOptions {
            max_theta_order: 3,
            finite_order_bound: 64,
        }
    }
}

/// Computes the group of dx Y = w Y: finite order when some multiple of w
/// is a logarithmic derivative, otherwise the truncated relation basis of
/// { q : q(d1 w, ..., dm w) in dx(K) }.
pub fn compute_mult_group(
    w: &RatFunc,
    nparams: usize,
    opts: &MultGroupOptions,
) -> MultGroupDesc {
    if let Some((ell, witness)) = minimal_log_multiple(w) {
        if ell <= opts.finite_order_bound {
            return MultGroupDesc::Finite {
                order: ell,
                witness,
            };
        }
    }
    let cap = opts.max_theta_order;
    // family theta d_j w indexed by the keys
    let keys = keys_up_to(nparams, nparams, cap);
    let derivatives: Vec<RatFunc> = (0..nparams)
        .map(|j| w.derive(&crate::algebra::ratfunc::Derivation::Param(j)))
        .collect();
    let family: Vec<RatFunc> = keys
        .iter()
        .map(|(theta, j)| theta.apply(&derivatives[*j]))
        .collect();
    let space = exactness_relation_space(&family);
    let relations: Vec<(LinDiffPoly, RatFunc)> = space
        .basis
        .iter()
        .zip(&space.witnesses)
        .map(|(v, f)| (from_vector(v, &keys, nparams), f.clone()))
        .collect();
    // dimension per order, by solving on the truncated subfamily
    let mut dims_per_order = Vec::new();
    for k in 0..=cap {
        let sub_keys = keys_up_to(nparams, nparams, k);
        let sub_family: Vec<RatFunc> = sub_keys
            .iter()
            .map(|(theta, j)| theta.apply(&derivatives[*j]))
            .collect();
        dims_per_order.push(exactness_relation_space(&sub_family).basis.len());
    }
    // stabilization: all entries at some order vanish identically
    let mut stabilized = false;
    for k in 1..=cap {
        let all_zero = keys
            .iter()
            .zip(&family)
            .filter(|((theta, _), _)| theta.order() == k)
            .all(|(_, g)| g.is_zero());
        if all_zero {
            stabilized = true;
            break;
        }
    }
    let generators = module_generators(&relations, &keys, nparams, cap);
    MultGroupDesc::Infinite {
        relations,
        generators,
        truncation_order: cap,
        stabilized,
        dims_per_order,
    }
}

/// Reduces a relation basis to module generators: relations that are
/// derivative consequences (theta-multiples modulo the span of earlier
/// generators) are dropped.
pub fn module_generators(
    relations: &[(LinDiffPoly, RatFunc)],
    keys: &[(ThetaMonomial, usize)],
    nparams: usize,
    cap: u32,
) -> Vec<LinDiffPoly> {
    let mut sorted: Vec<&LinDiffPoly> = relations.iter().map(|(p, _)| p).collect();
    sorted.sort_by_key(|p| p.max_order());
    let mut generators: Vec<LinDiffPoly> = Vec::new();
    let mut closure: Vec<Vec<ParamScalar>> = Vec::new();
    for p in sorted {
        let v = to_vector(p, keys);
        if in_row_space(&closure, &v) {
            continue;
        }
        generators.push(p.clone());
        // extend the closure with all theta-multiples within the cap
        let mut frontier = vec![p.clone()];
        closure.push(v);
        while let Some(g) = frontier.pop() {
            if g.max_order() >= cap {
                continue;
            }
            for j in 0..nparams {
                let d = g.derive(j);
                if d.max_order() <= cap {
                    let dv = to_vector(&d, keys);
                    if !in_row_space(&closure, &dv) {
                        closure.push(dv);
                    }
                    frontier.push(d);
                }
            }
        }
        let _ = rref(&mut closure);
    }
    generators
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(num), xpoly_int(den)).unwrap()
    }

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

    #[test]
    fn half_residue_gives_mu2() {
        let w = rf(&[1], &[0, 2]);
        let g = compute_mult_group(&w, 1, &MultGroupOptions::default());
        match g {
            MultGroupDesc::Finite { order, witness } => {
                assert_eq!(order, 2);
                assert_eq!(witness, RatFunc::from_poly(xpoly_int(&[0, 1])));
            }
            _ => panic!("expected finite group"),
        }
    }

    #[test]
    fn zero_datum_is_trivial_group() {
        let g = compute_mult_group(&RatFunc::zero(), 2, &MultGroupOptions::default());
        assert_eq!(g.finite_order(), Some(1));
    }

    #[test]
    fn worked_example_group_relations() {
        let opts = MultGroupOptions::default();
        let a = compute_mult_group(&worked_u(), 2, &opts);
        match &a {
            MultGroupDesc::Infinite {
                generators,
                stabilized,
                dims_per_order,
                ..
            } => {
                assert!(*stabilized);
                // four generators: d_j Y_i for i,j in {1,2}
                assert_eq!(generators.len(), 4);
                assert!(generators.iter().all(|g| g.max_order() == 1));
                // no order-0 relations
                assert_eq!(dims_per_order[0], 0);
            }
            _ => panic!("expected infinite group"),
        }
        let d = compute_mult_group(&worked_r1(), 2, &opts);
        assert!(a.coincides_with(&d, 2));
        assert!(!a.is_pi_constant(2));
    }

    #[test]
    fn pi_constant_detection() {
        // w = 1/x^2 is parameter-free with a non-simple pole: the relations
        // force d_j a / a = 0 for all j
        let w = rf(&[1], &[0, 0, 1]);
        let g = compute_mult_group(&w, 2, &MultGroupOptions::default());
        match &g {
            MultGroupDesc::Infinite { .. } => assert!(g.is_pi_constant(2)),
            _ => panic!("expected infinite group"),
        }
        // finite groups are constant
        let f = compute_mult_group(&rf(&[1], &[0, 2]), 2, &MultGroupOptions::default());
        assert!(f.is_pi_constant(2));
    }
}

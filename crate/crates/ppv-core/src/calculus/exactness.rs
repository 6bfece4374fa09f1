//! The relation space { c in F0^n : sum_i c_i g_i in dx(K) }.
//!
//! The Hermite residual is linear over the parameter field, and a proper
//! rational function with squarefree denominator is exact iff it is zero,
//! so the space is the kernel of one exact linear system.

use crate::algebra::linalg::{kernel, rref};
use crate::algebra::ratfunc::{Derivation, RatFunc};
use crate::algebra::scalar::ParamScalar;
use crate::algebra::xpoly::XPoly;

use super::hermite::hermite_reduce;
use super::logder::is_exact;

#[derive(Clone, Debug)]
pub struct ExactnessRelationSpace {
    /// Reduced-echelon basis of coefficient vectors over the parameter field.
    pub basis: Vec<Vec<ParamScalar>>,
    /// Witness f with sum_i c_i g_i = dx(f), one per basis vector.
    pub witnesses: Vec<RatFunc>,
}

pub fn exactness_relation_space(gs: &[RatFunc]) -> ExactnessRelationSpace {
    let n = gs.len();
    let reductions: Vec<_> = gs.iter().map(hermite_reduce).collect();
    // combine residuals over a common denominator
    let mut common_den = XPoly::one();
    for r in &reductions {
        if !r.residual.is_zero() {
            let g = XPoly::gcd(&common_den, r.residual.denom());
            common_den = common_den.mul(&r.residual.denom().exact_div(&g).unwrap());
        }
    }
    let numerators: Vec<XPoly> = reductions
        .iter()
        .map(|r| {
            if r.residual.is_zero() {
                XPoly::zero()
            } else {
                let cof = common_den.exact_div(r.residual.denom()).unwrap();
                r.residual.numer().mul(&cof)
            }
        })
        .collect();
    let max_deg = numerators
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .map(|d| d + 1)
        .unwrap_or(0);
    // rows: one per x-power, columns: one per generator
    let mut rows = Vec::with_capacity(max_deg);
    for e in 0..max_deg {
        rows.push(
            numerators
                .iter()
                .map(|p| p.coeff(e))
                .collect::<Vec<ParamScalar>>(),
        );
    }
    let mut basis = kernel(&rows, n);
    let _ = rref(&mut basis);
    let mut witnesses = Vec::with_capacity(basis.len());
    for c in &basis {
        let mut w = RatFunc::zero();
        for (ci, r) in c.iter().zip(&reductions) {
            if !ci.is_zero() {
                w = &w + &r.rational_part.scale(ci);
            }
        }
        // always-on soundness check
        let combined = combine(gs, c);
        let direct = is_exact(&combined).expect("kernel vector must be exact");
        debug_assert_eq!(direct.derive(&Derivation::MainX), combined);
        assert_eq!(w.derive(&Derivation::MainX), combined);
        witnesses.push(w);
    }
    ExactnessRelationSpace { basis, witnesses }
}

pub fn combine(gs: &[RatFunc], c: &[ParamScalar]) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (ci, g) in c.iter().zip(gs) {
        if !ci.is_zero() {
            acc = &acc + &g.scale(ci);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::linalg::in_row_space;
    use crate::algebra::xpoly::xpoly_int;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(num), xpoly_int(den)).unwrap()
    }

    #[test]
    fn full_space_for_exact_generator() {
        let h = rf(&[1, 5], &[2, 0, 1]);
        let space = exactness_relation_space(&[h.dx()]);
        assert_eq!(space.basis.len(), 1);
    }

    #[test]
    fn disjoint_residues_give_zero_space() {
        // 1/x and 1/(x - t1): residues cannot cancel
        let a = rf(&[1], &[0, 1]);
        let b = RatFunc::new(XPoly::one(), XPoly::linear_root(&ParamScalar::param(0))).unwrap();
        let space = exactness_relation_space(&[a, b]);
        assert!(space.basis.is_empty());
    }

    #[test]
    fn worked_example_relations() {
        // gs = (d1 u, d2 u, d1 r1, d2 r1) for the two-parameter example:
        // relations (1,1,-1,0) and (0,1,1,1) span the space
        let x = RatFunc::x();
        let one = RatFunc::one();
        let inv_x = &one / &x;
        let inv_xm1 = &one / &(&x - &one);
        let d1u = &inv_x + &inv_xm1;
        let d2u = -&inv_xm1;
        let d1r1 = inv_x.clone();
        let d2r1 = &(-&inv_x) + &inv_xm1;
        let space = exactness_relation_space(&[d1u, d2u, d1r1, d2r1]);
        assert_eq!(space.basis.len(), 2);
        let v1: Vec<ParamScalar> = [1, 1, -1, 0]
            .iter()
            .map(|&k| ParamScalar::from_int(k))
            .collect();
        let v2: Vec<ParamScalar> = [0, 1, 1, 1]
            .iter()
            .map(|&k| ParamScalar::from_int(k))
            .collect();
        assert!(in_row_space(&space.basis, &v1));
        assert!(in_row_space(&space.basis, &v2));
    }

    #[test]
    fn differentiated_relation_is_detected() {
        let f = rf(&[3, 1], &[0, 0, 1]);
        let gs = [f.dx(), -&f.dx()];
        let space = exactness_relation_space(&gs);
        let ones: Vec<ParamScalar> = vec![ParamScalar::one(), ParamScalar::one()];
        assert!(in_row_space(&space.basis, &ones));
    }
}

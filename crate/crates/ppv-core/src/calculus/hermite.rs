//! Hermite reduction: splits a rational function into an exact derivative
//! and a residual with simple poles.

use crate::algebra::ratfunc::RatFunc;
use crate::algebra::xpoly::XPoly;

/// g = d/dx(rational_part) + residual, where the residual is proper with
/// squarefree denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteResult {
    pub rational_part: RatFunc,
    pub residual: RatFunc,
}

/// Partial-fraction split of a proper rational function along the squarefree
/// decomposition of its denominator: N/D = sum_i N_i / d_i^{m_i}.
pub fn split_by_factors(g: &RatFunc) -> Vec<(XPoly, u32, XPoly)> {
    assert!(g.is_proper(), "partial fractions need a proper input");
    if g.is_zero() {
        return Vec::new();
    }
    let factors = g.denom().squarefree_decomposition();
    let mut out = Vec::new();
    let mut num = g.numer().clone();
    let mut den = g.denom().clone();
    for (i, (f, m)) in factors.iter().enumerate() {
        if i + 1 == factors.len() {
            out.push((f.clone(), *m, num.clone()));
            break;
        }
        let fm = f.pow(*m);
        let rest = den.exact_div(&fm).expect("factorization divides denominator");
        // 1 = s*fm + t*rest; num/(fm*rest) = num*t/fm + num*s/rest
        let (gcd, s, t) = XPoly::extended_gcd(&fm, &rest);
        assert!(gcd.is_one(), "squarefree factors are pairwise coprime");
        let part = num.mul(&t);
        let (_, part_red) = part.div_rem(&fm);
        out.push((f.clone(), *m, part_red));
        let carry = num.mul(&s);
        let (_, carry_red) = carry.div_rem(&rest);
        num = carry_red;
        den = rest;
    }
    out.retain(|(_, _, n)| !n.is_zero());
    out
}

/// Hermite reduction. The polynomial part of `g` integrates exactly and is
/// absorbed into the rational part.
pub fn hermite_reduce(g: &RatFunc) -> HermiteResult {
    let (poly, proper) = g.split_polynomial_part();
    // antiderivative of the polynomial part
    let mut anti = Vec::new();
    anti.push(crate::algebra::scalar::ParamScalar::zero());
    for (i, c) in poly.coeffs().iter().enumerate() {
        anti.push(c / &crate::algebra::scalar::ParamScalar::from_int((i + 1) as i64));
    }
    let mut rational_part = RatFunc::from_poly(XPoly::from_coeffs(anti));
    let mut residual = RatFunc::zero();

    for (f, m, num) in split_by_factors(&proper) {
        let mut m = m;
        let mut num = num;
        let df = f.derivative();
        // reduce N / f^m step by step while m > 1
        while m > 1 {
            // N = s*f + t*f' with deg constraints via extended gcd
            let (g1, s, t) = XPoly::extended_gcd(&f, &df);
            assert!(g1.is_one(), "squarefree factor is coprime to its derivative");
            let s = s.mul(&num);
            let t = t.mul(&num);
            // reduce t mod f, folding the quotient into s
            let (q, t_red) = t.div_rem(&f);
            let s_adj = s.add(&q.mul(&df));
            let k = crate::algebra::scalar::ParamScalar::from_int((m - 1) as i64);
            // N/f^m = d/dx( -t/( (m-1) f^{m-1} ) ) + (s + t'/(m-1)) / f^{m-1}
            let fpow = f.pow(m - 1);
            let piece = RatFunc::new(t_red.scale(&k.inv()).neg(), fpow.clone()).unwrap();
            rational_part = &rational_part + &piece;
            num = s_adj.add(&t_red.derivative().scale(&k.inv()));
            let (q2, r2) = num.div_rem(&fpow);
            assert!(q2.is_zero(), "hermite step stays proper");
            num = r2;
            m -= 1;
        }
        if !num.is_zero() {
            residual = &residual + &RatFunc::new(num, f).unwrap();
        }
    }
    HermiteResult {
        rational_part,
        residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratfunc::Derivation;
    use crate::algebra::scalar::ParamScalar;
    use crate::algebra::xpoly::xpoly_int;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(num), xpoly_int(den)).unwrap()
    }

    #[test]
    fn pure_double_pole() {
        // 1/x^2 integrates to -1/x
        let g = rf(&[1], &[0, 0, 1]);
        let h = hermite_reduce(&g);
        assert_eq!(h.rational_part, rf(&[-1], &[0, 1]));
        assert!(h.residual.is_zero());
        assert_eq!(h.rational_part.dx(), g);
    }

    #[test]
    fn simple_pole_passes_through() {
        let g = rf(&[1], &[0, 1]);
        let h = hermite_reduce(&g);
        assert!(h.rational_part.is_zero());
        assert_eq!(h.residual, g);
    }

    #[test]
    fn mixed_case_with_parameter() {
        // t1/(x-1)^2 + 1/x -> (-t1/(x-1), 1/x)
        let t1 = RatFunc::param(0);
        let dbl = RatFunc::new(xpoly_int(&[1]), xpoly_int(&[1, -2, 1])).unwrap();
        let g = &(&t1 * &dbl) + &rf(&[1], &[0, 1]);
        let h = hermite_reduce(&g);
        let expect_rat = &(-&t1) * &rf(&[1], &[-1, 1]);
        assert_eq!(h.rational_part, expect_rat);
        assert_eq!(h.residual, rf(&[1], &[0, 1]));
    }

    #[test]
    fn reduction_invariant_on_random_inputs() {
        // input = d/dx(rational_part) + residual holds exactly
        let samples = vec![
            rf(&[1, 2, 3], &[0, 0, 0, 1]),
            rf(&[5], &[1, 2, 1]),
            rf(&[1, 1], &[0, 4, 0, 1]),
            rf(&[7, 0, 1, 2], &[0, 1, -2, 1]),
        ];
        for g in samples {
            let h = hermite_reduce(&g);
            let back = &h.rational_part.derive(&Derivation::MainX) + &h.residual;
            assert_eq!(back, g, "failed for {g}");
            if !h.residual.is_zero() {
                assert!(h.residual.is_proper());
                let d = h.residual.denom();
                let sf = d.squarefree_decomposition();
                assert!(sf.iter().all(|(_, m)| *m == 1), "residual not squarefree");
            }
        }
    }

    #[test]
    fn polynomial_part_is_integrated() {
        // x^2 + 1/x^2
        let g = &RatFunc::from_poly(xpoly_int(&[0, 0, 1])) + &rf(&[1], &[0, 0, 1]);
        let h = hermite_reduce(&g);
        assert!(h.residual.is_zero());
        let third = ParamScalar::from_int(3).inv();
        let expect = &RatFunc::from_poly(xpoly_int(&[0, 0, 0, 1])).scale(&third) + &rf(&[-1], &[0, 1]);
        assert_eq!(h.rational_part, expect);
    }

    #[test]
    fn linearity_of_residual() {
        let g1 = rf(&[1, 1], &[0, 2, 0, 1]);
        let g2 = rf(&[3], &[0, -1, 1]);
        let r1 = hermite_reduce(&g1).residual;
        let r2 = hermite_reduce(&g2).residual;
        let rsum = hermite_reduce(&(&g1 + &g2)).residual;
        assert_eq!(rsum, &r1 + &r2);
    }
}

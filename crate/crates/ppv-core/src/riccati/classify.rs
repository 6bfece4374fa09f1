//! The four-way case split, tested strictly in order I, II, III, IV.

use std::fmt;

use crate::algebra::ratfunc::RatFunc;

use super::kovacic::{
    riccati_case3_search, riccati_quadratic_search, riccati_rational_solutions, verify_riccati,
};

/// Outcome of the case analysis for dx^2 Y = q Y. Exactly one applies.
#[derive(Clone, Debug, PartialEq)]
pub enum CaseTag {
    /// A rational Riccati solution exists. Carries the chosen solution and
    /// every representative found.
    CaseI {
        u: RatFunc,
        all_solutions: Vec<RatFunc>,
    },
    /// A quadratic Riccati solution exists; w = u - conj(u) has w^2 in K.
    CaseII { w2: RatFunc, v: RatFunc },
    /// An algebraic solution of degree 4, 6 or 12 exists.
    CaseIII { degree: u32, minpoly: Vec<RatFunc> },
    /// No algebraic Riccati solution.
    CaseIV,
}

impl CaseTag {
    pub fn label(&self) -> &'static str {
        match self {
            CaseTag::CaseI { .. } => "I",
            CaseTag::CaseII { .. } => "II",
            CaseTag::CaseIII { .. } => "III",
            CaseTag::CaseIV => "IV",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CaseError {
    /// A case test was invoked out of order (an earlier case applies).
    OrderingViolated(&'static str),
}

impl fmt::Display for CaseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseError::OrderingViolated(what) => {
                write!(f, "precondition violated: {what}")
            }
        }
    }
}

impl std::error::Error for CaseError {}

/// Quadratic-solution data (w^2, v); errors when case I applies.
pub fn riccati_quadratic(
    q: &RatFunc,
) -> Result<Option<(RatFunc, RatFunc)>, CaseError> {
    let (sols, _) = riccati_rational_solutions(q);
    if !sols.is_empty() {
        return Err(CaseError::OrderingViolated(
            "a rational Riccati solution exists; case I applies",
        ));
    }
    let (found, _) = riccati_quadratic_search(q);
    Ok(found.map(|(w2, v, _phi)| (w2, v)))
}

/// Degree of an algebraic solution in {4, 6, 12}; errors when case I or II
/// applies.
pub fn riccati_case3(q: &RatFunc) -> Result<Option<u32>, CaseError> {
    let (sols, _) = riccati_rational_solutions(q);
    if !sols.is_empty() {
        return Err(CaseError::OrderingViolated(
            "a rational Riccati solution exists; case I applies",
        ));
    }
    let (quad, _) = riccati_quadratic_search(q);
    if quad.is_some() {
        return Err(CaseError::OrderingViolated(
            "a quadratic Riccati solution exists; case II applies",
        ));
    }
    let (found, _) = riccati_case3_search(q);
    Ok(found.map(|(deg, _)| deg))
}

/// Full classification with accumulated genericity notes.
pub fn classify_case(q: &RatFunc) -> (CaseTag, Vec<String>) {
    let mut notes = Vec::new();
    let (sols, n1) = riccati_rational_solutions(q);
    notes.extend(n1);
    if !sols.is_empty() {
        for u in &sols {
            assert!(verify_riccati(u, q), "emitted solution re-verifies");
        }
        let u = sols[0].clone();
        return (
            CaseTag::CaseI {
                u,
                all_solutions: sols,
            },
            notes,
        );
    }
    let (quad, n2) = riccati_quadratic_search(q);
    notes.extend(n2);
    if let Some((w2, v, _phi)) = quad {
        return (CaseTag::CaseII { w2, v }, notes);
    }
    let (c3, n3) = riccati_case3_search(q);
    notes.extend(n3);
    if let Some((degree, minpoly)) = c3 {
        return (CaseTag::CaseIII { degree, minpoly }, notes);
    }
    (CaseTag::CaseIV, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(num), xpoly_int(den)).unwrap()
    }

    #[test]
    fn worked_example_is_case1() {
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        let u = &(&t1 / &x) + &(&(&t1 - &t2) / &(&x - &one));
        let q = &u.dx() + &(&u * &u);
        let (tag, _) = classify_case(&q);
        match tag {
            CaseTag::CaseI { u: got, .. } => assert_eq!(got, u),
            other => panic!("expected case I, got {}", other.label()),
        }
    }

    #[test]
    fn airy_is_case4() {
        let (tag, _) = classify_case(&RatFunc::x());
        assert_eq!(tag, CaseTag::CaseIV);
    }

    #[test]
    fn zero_q_is_case1() {
        let (tag, _) = classify_case(&RatFunc::zero());
        match tag {
            CaseTag::CaseI { u, all_solutions } => {
                assert!(u.is_zero());
                assert!(all_solutions.contains(&rf(&[1], &[0, 1])));
            }
            other => panic!("expected case I, got {}", other.label()),
        }
    }

    #[test]
    fn constructed_case2_is_case2() {
        let q = &RatFunc::x() + &rf(&[5], &[0, 0, 16]);
        let (tag, _) = classify_case(&q);
        match tag {
            CaseTag::CaseII { w2, v } => {
                assert_eq!(w2, RatFunc::from_poly(xpoly_int(&[0, 4])));
                assert_eq!(
                    v,
                    &w2.dx() / &w2.scale(&crate::algebra::scalar::ParamScalar::from_int(2))
                );
            }
            other => panic!("expected case II, got {}", other.label()),
        }
    }

    #[test]
    fn ordering_contract_flags_case1_inputs() {
        let q = rf(&[2], &[0, 0, 1]);
        assert!(riccati_quadratic(&q).is_err());
        assert!(riccati_case3(&q).is_err());
    }

    #[test]
    fn translation_equivariance_of_classification() {
        // shifting x -> x + 1 must not change the case tag
        let q = rf(&[2], &[0, 0, 1]); // 2/x^2, case I
        let shifted = rf(&[2], &[1, 2, 1]); // 2/(x+1)^2
        let (t1, _) = classify_case(&q);
        let (t2, _) = classify_case(&shifted);
        assert_eq!(t1.label(), t2.label());
        let a = &RatFunc::x() + &rf(&[5], &[0, 0, 16]);
        let (ta, _) = classify_case(&a);
        // x -> x - 2: q(x-2) = (x-2) + 5/(16(x-2)^2)
        let xm2 = &RatFunc::x() - &RatFunc::from_int(2);
        let b = &xm2 + &(&rf(&[5], &[16]) / &(&xm2 * &xm2));
        let (tb, _) = classify_case(&b);
        assert_eq!(ta.label(), tb.label());
    }
}

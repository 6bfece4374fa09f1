//! Linear differential operators in d/dx with rational-function coefficients.

use std::fmt;

use super::ratfunc::{Derivation, RatFunc};

/// sum_i c_i (d/dx)^i, stored densely with index = order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiffOperator {
    coeffs: Vec<RatFunc>,
}

impl DiffOperator {
    pub fn zero() -> Self {
        DiffOperator { coeffs: Vec::new() }
    }

    pub fn identity() -> Self {
        DiffOperator::from_coeffs(vec![RatFunc::one()])
    }

    /// The bare derivation d/dx.
    pub fn dx() -> Self {
        DiffOperator::from_coeffs(vec![RatFunc::zero(), RatFunc::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        DiffOperator { coeffs }
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        self.coeffs.get(i).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &other.coeff(i));
        }
        DiffOperator::from_coeffs(out)
    }

    pub fn sub(&self, other: &DiffOperator) -> DiffOperator {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) - &other.coeff(i));
        }
        DiffOperator::from_coeffs(out)
    }

    pub fn scale(&self, f: &RatFunc) -> DiffOperator {
        DiffOperator::from_coeffs(self.coeffs.iter().map(|c| c * f).collect())
    }

    /// Left-composition with d/dx: dx . L = sum (c_i delta^{i+1} + c_i' delta^i).
    fn dx_compose(&self) -> DiffOperator {
        let mut out = vec![RatFunc::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i + 1] = &out[i + 1] + c;
            out[i] = &out[i] + &c.derive(&Derivation::MainX);
        }
        DiffOperator::from_coeffs(out)
    }

    /// Operator composition: (self . other)(f) = self(other(f)).
    pub fn compose(&self, other: &DiffOperator) -> DiffOperator {
        let mut acc = DiffOperator::zero();
        // powers[i] = delta^i . other
        let mut power = other.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                power = power.dx_compose();
            }
            if !c.is_zero() {
                acc = acc.add(&power.scale(c));
            }
        }
        acc
    }

    /// Applies the operator to a rational function.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = RatFunc::zero();
        let mut df = f.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                df = df.derive(&Derivation::MainX);
            }
            if !c.is_zero() {
                acc = &acc + &(c * &df);
            }
        }
        acc
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let head = match i {
                0 => String::new(),
                1 => "Dx".to_string(),
                _ => format!("Dx^{i}"),
            };
            if head.is_empty() {
                parts.push(format!("({c})"));
            } else if c.is_one() {
                parts.push(head);
            } else {
                parts.push(format!("({c})*{head}"));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn one_over_x() -> RatFunc {
        RatFunc::new(xpoly_int(&[1]), xpoly_int(&[0, 1])).unwrap()
    }

    #[test]
    fn identity_composition() {
        let l = DiffOperator::from_coeffs(vec![one_over_x(), RatFunc::from_int(3), RatFunc::x()]);
        assert_eq!(DiffOperator::identity().compose(&l), l);
        assert_eq!(l.compose(&DiffOperator::identity()), l);
    }

    #[test]
    fn riccati_factorization_identity() {
        // (dx + u) . (dx - u) = dx^2 - (u' + u^2) for any u
        let u = one_over_x();
        let left = DiffOperator::from_coeffs(vec![u.clone(), RatFunc::one()]);
        let right = DiffOperator::from_coeffs(vec![-&u, RatFunc::one()]);
        let prod = left.compose(&right);
        let q = &u.dx() + &(&u * &u);
        let expect = DiffOperator::from_coeffs(vec![-&q, RatFunc::zero(), RatFunc::one()]);
        assert_eq!(prod, expect);
    }

    #[test]
    fn apply_matches_composition() {
        let u = one_over_x();
        let left = DiffOperator::from_coeffs(vec![u.clone(), RatFunc::one()]);
        let right = DiffOperator::from_coeffs(vec![-&u, RatFunc::one()]);
        let f = RatFunc::new(xpoly_int(&[1, 2]), xpoly_int(&[3, 0, 1])).unwrap();
        let lhs = left.compose(&right).apply(&f);
        let rhs = left.apply(&right.apply(&f));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn apply_simple() {
        let dx = DiffOperator::dx();
        let f = RatFunc::from_poly(xpoly_int(&[0, 0, 1]));
        assert_eq!(dx.apply(&f), RatFunc::from_poly(xpoly_int(&[0, 2])));
    }

    #[test]
    fn degree_adds_under_composition() {
        let a = DiffOperator::from_coeffs(vec![RatFunc::x(), RatFunc::one(), RatFunc::one()]);
        let b = DiffOperator::from_coeffs(vec![RatFunc::one(), RatFunc::x()]);
        assert_eq!(a.compose(&b).order(), Some(3));
    }
}

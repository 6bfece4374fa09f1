//! Elements of the parameter field Q(t1,...,tm).
//!
//! A scalar is a reduced fraction of multivariate polynomials. The
//! denominator is normalized so its leading coefficient (graded lex) is 1,
//! which makes representations unique: equal field elements have equal
//! numerator/denominator pairs. All arithmetic is exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mpoly::MPoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamScalar {
    num: MPoly,
    den: MPoly,
}

impl ParamScalar {
    /// Builds the reduced canonical fraction. Panics on a zero denominator.
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "division by zero in parameter field");
        if num.is_zero() {
            return ParamScalar {
                num: MPoly::zero(),
                den: MPoly::one(),
            };
        }
        let g = MPoly::gcd(&num, &den);
        let mut n = num.exact_div(&g).expect("gcd divides numerator");
        let mut d = den.exact_div(&g).expect("gcd divides denominator");
        let lc = d.leading_coeff();
        let inv = BigRational::one() / lc;
        n = n.scale(&inv);
        d = d.scale(&inv);
        ParamScalar { num: n, den: d }
    }

    pub fn zero() -> Self {
        ParamScalar {
            num: MPoly::zero(),
            den: MPoly::one(),
        }
    }

    pub fn one() -> Self {
        ParamScalar {
            num: MPoly::one(),
            den: MPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ParamScalar {
            num: MPoly::from_int(n),
            den: MPoly::one(),
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        ParamScalar {
            num: MPoly::constant(q),
            den: MPoly::one(),
        }
    }

    /// The parameter t_j (0-based index).
    pub fn param(j: usize) -> Self {
        ParamScalar {
            num: MPoly::var(j),
            den: MPoly::one(),
        }
    }

    pub fn from_poly(p: MPoly) -> Self {
        ParamScalar {
            num: p,
            den: MPoly::one(),
        }
    }

    pub fn numer(&self) -> &MPoly {
        &self.num
    }

    pub fn denom(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match (self.num.as_constant(), self.den.as_constant()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        let q = self.as_rational()?;
        if q.denom().is_one() {
            Some(q.numer().clone())
        } else {
            None
        }
    }

    pub fn inv(&self) -> ParamScalar {
        assert!(!self.is_zero(), "inverse of zero in parameter field");
        ParamScalar::new(self.den.clone(), self.num.clone())
    }

    /// Partial derivative with respect to t_j (quotient rule).
    pub fn derivative(&self, j: usize) -> ParamScalar {
        let dn = self.num.derivative(j);
        let dd = self.den.derivative(j);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        let den = self.den.mul(&self.den);
        ParamScalar::new(num, den)
    }

    /// Exact square root, when the element is a perfect square.
    pub fn sqrt(&self) -> Option<ParamScalar> {
        let n = self.num.sqrt()?;
        let d = self.den.sqrt()?;
        let cand = ParamScalar::new(n, d);
        if &cand * &cand == *self {
            Some(cand)
        } else {
            // leading normalization can flip signs inside the parts
            let neg = -cand;
            if &neg * &neg == *self {
                Some(neg)
            } else {
                None
            }
        }
    }

    /// Substitutes rational values for the parameters; `None` when the
    /// denominator vanishes at the point.
    pub fn eval(&self, point: &[BigRational]) -> Option<BigRational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point) / d)
    }
}

impl Add for &ParamScalar {
    type Output = ParamScalar;
    fn add(self, rhs: &ParamScalar) -> ParamScalar {
        let num = self
            .num
            .mul(&rhs.den)
            .add(&rhs.num.mul(&self.den));
        ParamScalar::new(num, self.den.mul(&rhs.den))
    }
}

impl Sub for &ParamScalar {
    type Output = ParamScalar;
    fn sub(self, rhs: &ParamScalar) -> ParamScalar {
        let num = self
            .num
            .mul(&rhs.den)
            .sub(&rhs.num.mul(&self.den));
        ParamScalar::new(num, self.den.mul(&rhs.den))
    }
}

impl Mul for &ParamScalar {
    type Output = ParamScalar;
    fn mul(self, rhs: &ParamScalar) -> ParamScalar {
        ParamScalar::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &ParamScalar {
    type Output = ParamScalar;
    fn div(self, rhs: &ParamScalar) -> ParamScalar {
        assert!(!rhs.is_zero(), "division by zero in parameter field");
        ParamScalar::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }
}

impl Neg for ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Neg for &ParamScalar {
    type Output = ParamScalar;
    fn neg(self) -> ParamScalar {
        ParamScalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.num_terms() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "(({})/({}))", self.num, self.den)
        }
    }
}

impl PartialOrd for ParamScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ParamScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .cmp(&other.num)
            .then_with(|| self.den.cmp(&other.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms() {
        let t1 = ParamScalar::param(0);
        let two = ParamScalar::from_int(2);
        // (2 t1) / (2) reduces to t1
        let a = ParamScalar::new(
            MPoly::var(0).scale(&BigRational::from_integer(BigInt::from(2))),
            MPoly::from_int(2),
        );
        assert_eq!(a, t1);
        let b = &t1 / &two;
        let c = ParamScalar::new(MPoly::var(0), MPoly::from_int(2));
        assert_eq!(b, c);
    }

    #[test]
    fn field_ops() {
        let t1 = ParamScalar::param(0);
        let t2 = ParamScalar::param(1);
        let s = &t1 + &t2;
        let p = &s * &s;
        let back = &p / &s;
        assert_eq!(back, s);
        let inv = s.inv();
        assert!((&s * &inv).is_one());
    }

    #[test]
    fn derivative_quotient_rule() {
        let t1 = ParamScalar::param(0);
        let t2 = ParamScalar::param(1);
        let f = &t1 / &t2;
        let d1 = f.derivative(0);
        assert_eq!(d1, t2.inv());
        let d2 = f.derivative(1);
        let expect = -&(&t1 / &(&t2 * &t2));
        assert_eq!(d2, expect);
    }

    #[test]
    fn integer_detection() {
        let x = ParamScalar::from_rational(BigRational::new(BigInt::from(4), BigInt::from(2)));
        assert_eq!(x.as_integer(), Some(BigInt::from(2)));
        let h = ParamScalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert_eq!(h.as_integer(), None);
        assert_eq!(ParamScalar::param(0).as_integer(), None);
    }

    #[test]
    fn sqrt_detection() {
        let t1 = ParamScalar::param(0);
        let sq = &(&t1 * &t1) / &ParamScalar::from_int(4);
        let r = sq.sqrt().unwrap();
        assert_eq!(&r * &r, sq);
        assert!(t1.sqrt().is_none());
    }
}

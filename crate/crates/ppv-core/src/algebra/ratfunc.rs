//! Rational functions in x over Q(t1,...,tm), in canonical form.
//!
//! Canonical form: numerator and denominator coprime, denominator monic
//! in x. Two equal field elements always have identical representations,
//! which the golden tests rely on.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::scalar::ParamScalar;
use super::xpoly::XPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    DivisionByZero,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::DivisionByZero => write!(f, "division by zero"),
        }
    }
}

impl std::error::Error for AlgebraError {}

/// A derivation acting on K = Q(t1,...,tm)(x).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Derivation {
    /// d/dx
    MainX,
    /// d/dt_j, 0-based index
    Param(usize),
    /// A nonzero combination sum_j c_j d/dt_j with c_j in the parameter field.
    ParamCombo(Vec<ParamScalar>),
}

impl Derivation {
    pub fn combo(coeffs: Vec<ParamScalar>) -> Self {
        assert!(
            coeffs.iter().any(|c| !c.is_zero()),
            "parametric combination must have a nonzero coefficient"
        );
        Derivation::ParamCombo(coeffs)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct RatFunc {
    num: XPoly,
    den: XPoly,
}

impl RatFunc {
    /// Canonical constructor. Errors on a zero denominator.
    pub fn new(num: XPoly, den: XPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: XPoly::zero(),
                den: XPoly::one(),
            });
        }
        let g = XPoly::gcd(&num, &den);
        let mut n = num.exact_div(&g).expect("gcd divides numerator");
        let mut d = den.exact_div(&g).expect("gcd divides denominator");
        let lc = d.leading_coeff().inv();
        n = n.scale(&lc);
        d = d.scale(&lc);
        Ok(RatFunc { num: n, den: d })
    }

    pub fn from_poly(p: XPoly) -> Self {
        RatFunc {
            num: p,
            den: XPoly::one(),
        }
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(XPoly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(XPoly::one())
    }

    pub fn x() -> Self {
        RatFunc::from_poly(XPoly::x())
    }

    pub fn from_int(n: i64) -> Self {
        RatFunc::from_poly(XPoly::constant(ParamScalar::from_int(n)))
    }

    pub fn scalar(c: ParamScalar) -> Self {
        RatFunc::from_poly(XPoly::constant(c))
    }

    pub fn param(j: usize) -> Self {
        RatFunc::scalar(ParamScalar::param(j))
    }

    pub fn numer(&self) -> &XPoly {
        &self.num
    }

    pub fn denom(&self) -> &XPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_scalar(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    pub fn as_scalar(&self) -> Option<ParamScalar> {
        if self.is_scalar() {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    pub fn inv(&self) -> RatFunc {
        assert!(!self.is_zero(), "inverse of the zero rational function");
        let lc = self.num.leading_coeff().inv();
        RatFunc {
            num: self.den.scale(&lc),
            den: self.num.scale(&lc),
        }
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self * &rhs.inv())
    }

    pub fn pow(&self, n: i64) -> RatFunc {
        if n < 0 {
            return self.inv().pow(-n);
        }
        let mut acc = RatFunc::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Applies a derivation exactly (quotient rule).
    pub fn derive(&self, d: &Derivation) -> RatFunc {
        let (dn, dd) = match d {
            Derivation::MainX => (self.num.derivative(), self.den.derivative()),
            Derivation::Param(j) => (
                self.num.param_derivative(*j),
                self.den.param_derivative(*j),
            ),
            Derivation::ParamCombo(cs) => {
                let mut acc = RatFunc::zero();
                for (j, c) in cs.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    acc = &acc + &self.derive(&Derivation::Param(j)).scale(c);
                }
                return acc;
            }
        };
        if self.den.is_one() {
            return RatFunc::from_poly(dn);
        }
        if dd.is_zero() {
            return RatFunc::new(dn, self.den.clone()).unwrap();
        }
        // (n/d)' = (n' (d/g) - n (d'/g)) / (d (d/g)) with g = gcd(d, d')
        let g = XPoly::gcd(&self.den, &dd);
        let ds = self.den.exact_div(&g).unwrap();
        let num = dn.mul(&ds).sub(&self.num.mul(&dd.exact_div(&g).unwrap()));
        let den = self.den.mul(&ds);
        RatFunc::new(num, den).unwrap()
    }

    pub fn dx(&self) -> RatFunc {
        self.derive(&Derivation::MainX)
    }

    pub fn scale(&self, c: &ParamScalar) -> RatFunc {
        if c.is_zero() || self.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Splits into polynomial part and proper part: self = poly + proper.
    pub fn split_polynomial_part(&self) -> (XPoly, RatFunc) {
        let (q, r) = self.num.div_rem(&self.den);
        (q, RatFunc::new(r, self.den.clone()).unwrap())
    }

    /// True when deg(num) < deg(den).
    pub fn is_proper(&self) -> bool {
        match (self.num.degree(), self.den.degree()) {
            (None, _) => true,
            (Some(dn), Some(dd)) => dn < dd,
            _ => unreachable!("denominator is never zero"),
        }
    }

    /// Order at infinity: deg(den) - deg(num). Zero reports a large value.
    pub fn order_at_infinity(&self) -> i64 {
        match self.num.degree() {
            None => i64::MAX,
            Some(dn) => self.den.degree().unwrap() as i64 - dn as i64,
        }
    }

    /// Evaluates at x = a when defined.
    pub fn eval_x(&self, a: &ParamScalar) -> Option<ParamScalar> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(a) / &d)
    }
}

// The arithmetic below leans on the canonical-form invariant (numerator
// and denominator coprime, denominator monic) so reductions happen on the
// original factors, never on their products.

fn add_reduced(a: &RatFunc, b: &RatFunc, negate_b: bool) -> RatFunc {
    if a.is_zero() {
        return if negate_b { -b } else { b.clone() };
    }
    if b.is_zero() {
        return a.clone();
    }
    let bn = if negate_b { b.num.neg() } else { b.num.clone() };
    let g = XPoly::gcd(&a.den, &b.den);
    if g.is_one() {
        // coprime denominators: the sum is already reduced
        let num = a.num.mul(&b.den).add(&bn.mul(&a.den));
        let den = a.den.mul(&b.den);
        return RatFunc { num, den }.trimmed();
    }
    let da_red = a.den.exact_div(&g).unwrap();
    let db_red = b.den.exact_div(&g).unwrap();
    let num = a.num.mul(&db_red).add(&bn.mul(&da_red));
    if num.is_zero() {
        return RatFunc::zero();
    }
    // any common factor of num and den divides g
    let h = XPoly::gcd(&num, &g);
    let den = a.den.mul(&db_red);
    if h.is_one() {
        return RatFunc { num, den }.trimmed();
    }
    RatFunc::new(num.exact_div(&h).unwrap(), den.exact_div(&h).unwrap()).unwrap()
}

impl RatFunc {
    fn trimmed(self) -> RatFunc {
        if self.num.is_zero() {
            return RatFunc::zero();
        }
        debug_assert!(self.den.is_monic());
        self
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        add_reduced(self, rhs, false)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        add_reduced(self, rhs, true)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel: gcd(na nb, da db) = gcd(na, db) gcd(nb, da)
        let g1 = XPoly::gcd(&self.num, &rhs.den);
        let g2 = XPoly::gcd(&rhs.num, &self.den);
        let na = self.num.exact_div(&g1).unwrap();
        let nb = rhs.num.exact_div(&g2).unwrap();
        let da = self.den.exact_div(&g2).unwrap();
        let db = rhs.den.exact_div(&g1).unwrap();
        let num = na.mul(&nb);
        let den = da.mul(&db);
        let lc = den.leading_coeff();
        if lc.is_one() {
            RatFunc { num, den }.trimmed()
        } else {
            let inv = lc.inv();
            RatFunc {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
            .trimmed()
        }
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs)
            .expect("division by the zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.num
            .cmp(&other.num)
            .then_with(|| self.den.cmp(&other.den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn t(j: usize) -> ParamScalar {
        ParamScalar::param(j)
    }

    #[test]
    fn cancels_common_factor() {
        // (x^2 - 1)/(x - 1) = x + 1
        let f = RatFunc::new(xpoly_int(&[-1, 0, 1]), xpoly_int(&[-1, 1])).unwrap();
        assert_eq!(f, RatFunc::from_poly(xpoly_int(&[1, 1])));
        assert!(f.is_polynomial());
    }

    #[test]
    fn monic_denominator_normalization() {
        // (t1 x) / (2 x^2) = (t1/2) / x
        let num = XPoly::from_coeffs(vec![ParamScalar::zero(), t(0)]);
        let den = xpoly_int(&[0, 0, 2]);
        let f = RatFunc::new(num, den).unwrap();
        assert!(f.denom().is_monic());
        assert_eq!(f.denom(), &xpoly_int(&[0, 1]));
        let half_t1 = &t(0) / &ParamScalar::from_int(2);
        assert_eq!(f.numer(), &XPoly::constant(half_t1));
    }

    #[test]
    fn zero_canonical_form() {
        let f = RatFunc::new(XPoly::zero(), xpoly_int(&[0, 0, 0, 1])).unwrap();
        assert!(f.is_zero());
        assert_eq!(f.denom(), &XPoly::one());
    }

    #[test]
    fn zero_denominator_is_an_error() {
        assert_eq!(
            RatFunc::new(XPoly::one(), XPoly::zero()),
            Err(AlgebraError::DivisionByZero)
        );
    }

    #[test]
    fn worked_example_parametric_derivatives() {
        // u = t1/x + (t1 - t2)/(x - 1)
        let u = sample_u();
        // d/dt1 u = 1/x + 1/(x - 1)
        let d1 = u.derive(&Derivation::Param(0));
        let expect1 = &RatFunc::new(XPoly::one(), xpoly_int(&[0, 1])).unwrap()
            + &RatFunc::new(XPoly::one(), xpoly_int(&[-1, 1])).unwrap();
        assert_eq!(d1, expect1);
        // d/dt2 u = -1/(x - 1)
        let d2 = u.derive(&Derivation::Param(1));
        let expect2 = -&RatFunc::new(XPoly::one(), xpoly_int(&[-1, 1])).unwrap();
        assert_eq!(d2, expect2);
    }

    #[test]
    fn main_derivative() {
        let f = RatFunc::new(XPoly::one(), xpoly_int(&[0, 1])).unwrap();
        let df = f.dx();
        let expect = -&RatFunc::new(XPoly::one(), xpoly_int(&[0, 0, 1])).unwrap();
        assert_eq!(df, expect);
    }

    pub(crate) fn sample_u() -> RatFunc {
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        &(&t1 / &x) + &(&(&t1 - &t2) / &(&x - &one))
    }

    #[test]
    fn combo_derivation() {
        let u = sample_u();
        let combo = Derivation::combo(vec![ParamScalar::one(), ParamScalar::one()]);
        let lhs = u.derive(&combo);
        let rhs = &u.derive(&Derivation::Param(0)) + &u.derive(&Derivation::Param(1));
        assert_eq!(lhs, rhs);
    }
}

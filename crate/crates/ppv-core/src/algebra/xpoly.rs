//! Dense univariate polynomials in the main variable x over Q(t1,...,tm).

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::scalar::ParamScalar;

/// Polynomial in x; coefficient index = degree. Zero is the empty list.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct XPoly {
    coeffs: Vec<ParamScalar>,
}

impl XPoly {
    pub fn zero() -> Self {
        XPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        XPoly::constant(ParamScalar::one())
    }

    pub fn x() -> Self {
        XPoly::from_coeffs(vec![ParamScalar::zero(), ParamScalar::one()])
    }

    pub fn constant(c: ParamScalar) -> Self {
        XPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<ParamScalar>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        XPoly { coeffs }
    }

    /// x - a
    pub fn linear_root(a: &ParamScalar) -> Self {
        XPoly::from_coeffs(vec![-a, ParamScalar::one()])
    }

    pub fn coeffs(&self) -> &[ParamScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> ParamScalar {
        self.coeffs.get(i).cloned().unwrap_or_else(ParamScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; zero polynomial reports None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> ParamScalar {
        self.coeffs.last().cloned().unwrap_or_else(ParamScalar::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn add(&self, other: &XPoly) -> XPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(&self.coeff(i) + &other.coeff(i));
        }
        XPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> XPoly {
        XPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn sub(&self, other: &XPoly) -> XPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &XPoly) -> XPoly {
        if self.is_zero() || other.is_zero() {
            return XPoly::zero();
        }
        let mut out = vec![ParamScalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        XPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &ParamScalar) -> XPoly {
        XPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, n: u32) -> XPoly {
        let mut acc = XPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> XPoly {
        if self.is_zero() {
            return XPoly::zero();
        }
        self.scale(&self.leading_coeff().inv())
    }

    /// Division with remainder over the field of coefficients.
    pub fn div_rem(&self, d: &XPoly) -> (XPoly, XPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.degree().unwrap();
        let lc = d.leading_coeff();
        let mut rem = self.clone();
        let mut quot = vec![ParamScalar::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(dr) = rem.degree() {
            if dr < dd {
                break;
            }
            let q = &rem.leading_coeff() / &lc;
            let shift = dr - dd;
            quot[shift] = q.clone();
            let mut sub = vec![ParamScalar::zero(); shift];
            sub.extend(d.coeffs.iter().map(|c| c * &q));
            rem = rem.sub(&XPoly::from_coeffs(sub));
        }
        (XPoly::from_coeffs(quot), rem)
    }

    pub fn exact_div(&self, d: &XPoly) -> Option<XPoly> {
        let (q, r) = self.div_rem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Index to use for x when clearing into a pure polynomial ring: one
    /// past the highest parameter index appearing in the coefficients.
    fn clearing_var(polys: &[&XPoly]) -> usize {
        let mut nv = 0usize;
        for p in polys {
            for c in &p.coeffs {
                if let Some(v) = c.numer().top_var() {
                    nv = nv.max(v + 1);
                }
                if let Some(v) = c.denom().top_var() {
                    nv = nv.max(v + 1);
                }
            }
        }
        nv
    }

    /// Clears coefficient denominators, yielding an element of Q[t1..tm, x]
    /// that differs from self by a parameter-only factor.
    fn to_cleared_mpoly(&self, xvar: usize) -> super::mpoly::MPoly {
        use super::mpoly::MPoly;
        let mut lcm = MPoly::one();
        for c in &self.coeffs {
            let g = MPoly::gcd(&lcm, c.denom());
            lcm = lcm.mul(&c.denom().exact_div(&g).unwrap());
        }
        let mut acc = MPoly::zero();
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cof = lcm.exact_div(c.denom()).unwrap();
            let term = c.numer().mul(&cof);
            let xe = super::mpoly::Monomial::var(xvar).pow(e as u32);
            acc = acc.add(&term.mul_monomial(&xe, &num_rational::BigRational::one()));
        }
        acc
    }

    fn from_mpoly(p: &super::mpoly::MPoly, xvar: usize) -> XPoly {
        let coeffs = p.coeffs_in_var(xvar);
        XPoly::from_coeffs(
            coeffs
                .into_iter()
                .map(ParamScalar::from_poly)
                .collect(),
        )
    }

    /// Monic gcd over Q(t)[x]. Denominators are cleared and the gcd is
    /// taken by subresultant PRS in the polynomial ring Q[t, x], which
    /// avoids the coefficient blowup of the naive Euclidean algorithm.
    pub fn gcd(a: &XPoly, b: &XPoly) -> XPoly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.is_constant() || b.is_constant() {
            return XPoly::one();
        }
        let xvar = Self::clearing_var(&[a, b]);
        let pa = a.to_cleared_mpoly(xvar);
        let pb = b.to_cleared_mpoly(xvar);
        let g = super::mpoly::MPoly::gcd(&pa, &pb);
        Self::from_mpoly(&g, xvar).monic()
    }

    /// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
    pub fn extended_gcd(a: &XPoly, b: &XPoly) -> (XPoly, XPoly, XPoly) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = XPoly::one();
        let mut s1 = XPoly::zero();
        let mut t0 = XPoly::zero();
        let mut t1 = XPoly::one();
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (XPoly::zero(), XPoly::zero(), XPoly::zero());
        }
        let lc = r0.leading_coeff().inv();
        (r0.scale(&lc), s0.scale(&lc), t0.scale(&lc))
    }

    /// d/dx.
    pub fn derivative(&self) -> XPoly {
        let mut out = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c * &ParamScalar::from_int(i as i64));
        }
        XPoly::from_coeffs(out)
    }

    /// Coefficientwise parametric derivative d/dt_j.
    pub fn param_derivative(&self, j: usize) -> XPoly {
        XPoly::from_coeffs(self.coeffs.iter().map(|c| c.derivative(j)).collect())
    }

    pub fn eval(&self, at: &ParamScalar) -> ParamScalar {
        let mut acc = ParamScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * at) + c;
        }
        acc
    }

    /// Evaluates the coefficients at a rational parameter point, giving a
    /// univariate rational-coefficient polynomial. `None` if any coefficient
    /// denominator vanishes there.
    pub fn eval_params(&self, point: &[BigRational]) -> Option<Vec<BigRational>> {
        self.coeffs.iter().map(|c| c.eval(point)).collect()
    }

    /// Squarefree decomposition (Yun). Factors are monic, pairwise coprime;
    /// ordered by descending multiplicity, ties by display string.
    pub fn squarefree_decomposition(&self) -> Vec<(XPoly, u32)> {
        assert!(!self.is_zero(), "squarefree decomposition of zero");
        let p = self.monic();
        if p.degree() == Some(0) {
            return Vec::new();
        }
        let dp = p.derivative();
        let g = XPoly::gcd(&p, &dp);
        let mut w = p.exact_div(&g).unwrap();
        let mut y = dp.exact_div(&g).unwrap();
        let mut out = Vec::new();
        let mut i = 1u32;
        while w.degree().unwrap_or(0) > 0 {
            let z = y.sub(&w.derivative());
            let f = XPoly::gcd(&w, &z);
            if f.degree().unwrap_or(0) > 0 {
                out.push((f.monic(), i));
            }
            w = w.exact_div(&f).unwrap();
            y = z.exact_div(&f).unwrap();
            i += 1;
        }
        out.sort_by(|(f1, m1), (f2, m2)| {
            m2.cmp(m1).then_with(|| format!("{f1}").cmp(&format!("{f2}")))
        });
        out
    }

    pub fn squarefree_part(&self) -> XPoly {
        let mut acc = XPoly::one();
        for (f, _) in self.squarefree_decomposition() {
            acc = acc.mul(&f);
        }
        acc
    }

    /// Resultant of two polynomials over the coefficient field.
    pub fn resultant(a: &XPoly, b: &XPoly) -> ParamScalar {
        fn go(a: &XPoly, b: &XPoly) -> ParamScalar {
            let da = match a.degree() {
                None => return ParamScalar::zero(),
                Some(d) => d,
            };
            let db = match b.degree() {
                None => return ParamScalar::zero(),
                Some(d) => d,
            };
            if db == 0 {
                let mut acc = ParamScalar::one();
                let c = b.leading_coeff();
                for _ in 0..da {
                    acc = &acc * &c;
                }
                return acc;
            }
            if da < db {
                let sign = if (da * db) % 2 == 1 {
                    ParamScalar::from_int(-1)
                } else {
                    ParamScalar::one()
                };
                return &sign * &go(b, a);
            }
            let (_, r) = a.div_rem(b);
            let dr = r.degree();
            let lcb = b.leading_coeff();
            let mut scale = ParamScalar::one();
            let exp = da - dr.map(|d| d).unwrap_or(0);
            for _ in 0..exp {
                scale = &scale * &lcb;
            }
            if r.is_zero() {
                return ParamScalar::zero();
            }
            let sign = if (da * db) % 2 == 1 {
                ParamScalar::from_int(-1)
            } else {
                ParamScalar::one()
            };
            &(&sign * &scale) * &go(b, &r)
        }
        go(a, b)
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = format!("{c}");
            let term = match i {
                0 => cs,
                1 => {
                    if c.is_one() {
                        var.to_string()
                    } else {
                        format!("{cs}*{var}")
                    }
                }
                _ => {
                    if c.is_one() {
                        format!("{var}^{i}")
                    } else {
                        format!("{cs}*{var}^{i}")
                    }
                }
            };
            parts.push(term);
        }
        parts.join(" + ")
    }
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl PartialOrd for XPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

/// Convenience constructor from integer coefficients (index = degree).
pub fn xpoly_int(coeffs: &[i64]) -> XPoly {
    XPoly::from_coeffs(coeffs.iter().map(|&c| ParamScalar::from_int(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_rem_and_gcd() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let p = xpoly_int(&[-1, 0, 1]);
        let d = xpoly_int(&[-1, 1]);
        let (q, r) = p.div_rem(&d);
        assert!(r.is_zero());
        assert_eq!(q, xpoly_int(&[1, 1]));
        let g = XPoly::gcd(&p, &d);
        assert_eq!(g, d.monic());
    }

    #[test]
    fn extended_gcd_identity() {
        let a = xpoly_int(&[0, 0, 1]); // x^2
        let b = xpoly_int(&[-1, 1]); // x - 1
        let (g, s, t) = XPoly::extended_gcd(&a, &b);
        assert!(g.is_one());
        let lhs = s.mul(&a).add(&t.mul(&b));
        assert!(lhs.is_one());
    }

    #[test]
    fn squarefree_ordering() {
        // x^3 - x^2 = x^2 (x - 1): descending multiplicity
        let p = xpoly_int(&[0, 0, -1, 1]);
        let sf = p.squarefree_decomposition();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (xpoly_int(&[0, 1]), 2));
        assert_eq!(sf[1], (xpoly_int(&[-1, 1]), 1));
    }

    #[test]
    fn squarefree_with_parameter() {
        // (x - t1)^2
        let t1 = ParamScalar::param(0);
        let f = XPoly::linear_root(&t1);
        let p = f.mul(&f);
        let sf = p.squarefree_decomposition();
        assert_eq!(sf, vec![(f, 2)]);
    }

    #[test]
    fn irreducible_quadratic_is_squarefree() {
        let p = xpoly_int(&[1, 0, 1]);
        let sf = p.squarefree_decomposition();
        assert_eq!(sf, vec![(p, 1)]);
    }

    #[test]
    fn resultant_basic() {
        // res(x^2 - 1, x - 2) = (2)^2 - 1 = 3
        let a = xpoly_int(&[-1, 0, 1]);
        let b = xpoly_int(&[-2, 1]);
        let r = XPoly::resultant(&a, &b);
        assert_eq!(r, ParamScalar::from_int(3));
    }
}

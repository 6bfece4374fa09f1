//! Linear differential polynomials in Y_1..Y_m over the parameter field,
//! with the monoid of parametric derivative monomials acting on them.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::ratfunc::{Derivation, RatFunc};
use crate::algebra::scalar::ParamScalar;

/// A monomial d1^{e1} ... dm^{em} of parametric derivations.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct ThetaMonomial(Vec<u32>);

impl ThetaMonomial {
    pub fn identity(nparams: usize) -> Self {
        ThetaMonomial(vec![0; nparams])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        ThetaMonomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn nparams(&self) -> usize {
        self.0.len()
    }

    /// Bumps the exponent of derivation j.
    pub fn bump(&self, j: usize) -> ThetaMonomial {
        let mut v = self.0.clone();
        v[j] += 1;
        ThetaMonomial(v)
    }

    /// All monomials of order <= cap in nparams derivations, graded order.
    pub fn up_to_order(nparams: usize, cap: u32) -> Vec<ThetaMonomial> {
        let mut out = vec![ThetaMonomial::identity(nparams)];
        let mut frontier = vec![ThetaMonomial::identity(nparams)];
        for _ in 0..cap {
            let mut next = Vec::new();
            for m in &frontier {
                for j in 0..nparams {
                    let b = m.bump(j);
                    if !next.contains(&b) {
                        next.push(b);
                    }
                }
            }
            next.sort_by(grlex);
            next.dedup();
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort_by(grlex);
        out.dedup();
        out
    }

    /// Applies the monomial to a rational function.
    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut acc = f.clone();
        for (j, e) in self.0.iter().enumerate() {
            for _ in 0..*e {
                acc = acc.derive(&Derivation::Param(j));
            }
        }
        acc
    }
}

pub fn grlex(a: &ThetaMonomial, b: &ThetaMonomial) -> std::cmp::Ordering {
    a.order()
        .cmp(&b.order())
        .then_with(|| b.exponents().cmp(a.exponents()).reverse())
        .then_with(|| a.exponents().cmp(b.exponents()))
}

impl fmt::Display for ThetaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order() == 0 {
            return Ok(());
        }
        let mut parts = Vec::new();
        for (j, e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("D{}", j + 1)),
                _ => parts.push(format!("D{}^{}", j + 1, e)),
            }
        }
        write!(f, "{}", parts.join(" "))
    }
}

/// A term index: which derivative monomial applied to which variable.
pub type TermKey = (ThetaMonomial, usize);

/// A linear differential polynomial sum c_{theta,j} theta Y_{j+1}.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct LinDiffPoly {
    pub nvars: usize,
    terms: BTreeMap<TermKey, ParamScalar>,
}

impl LinDiffPoly {
    pub fn zero(nvars: usize) -> Self {
        LinDiffPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// The bare variable Y_{j+1}.
    pub fn var(nvars: usize, j: usize, nparams: usize) -> Self {
        let mut p = LinDiffPoly::zero(nvars);
        p.set(
            (ThetaMonomial::identity(nparams), j),
            ParamScalar::one(),
        );
        p
    }

    pub fn set(&mut self, key: TermKey, c: ParamScalar) {
        assert!(key.1 < self.nvars, "variable index in range");
        if c.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, c);
        }
    }

    pub fn coeff(&self, key: &TermKey) -> ParamScalar {
        self.terms.get(key).cloned().unwrap_or_else(ParamScalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &ParamScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.terms.keys().map(|(t, _)| t.order()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &LinDiffPoly) -> LinDiffPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let cur = out.coeff(k);
            out.set(k.clone(), &cur + c);
        }
        out
    }

    pub fn scale(&self, c: &ParamScalar) -> LinDiffPoly {
        let mut out = LinDiffPoly::zero(self.nvars);
        for (k, v) in &self.terms {
            out.set(k.clone(), v * c);
        }
        out
    }

    pub fn neg(&self) -> LinDiffPoly {
        self.scale(&ParamScalar::from_int(-1))
    }

    /// Left action of a parametric derivation: d_j (c theta Y) =
    /// (d_j c) theta Y + c (d_j theta) Y.
    pub fn derive(&self, j: usize) -> LinDiffPoly {
        let mut out = LinDiffPoly::zero(self.nvars);
        for ((theta, var), c) in &self.terms {
            let dc = c.derivative(j);
            if !dc.is_zero() {
                let cur = out.coeff(&(theta.clone(), *var));
                out.set((theta.clone(), *var), &cur + &dc);
            }
            let bumped = theta.bump(j);
            let cur = out.coeff(&(bumped.clone(), *var));
            out.set((bumped, *var), &cur + c);
        }
        out
    }

    /// Substitutes values for the variables: Y_{j+1} -> values[j].
    pub fn apply(&self, values: &[RatFunc]) -> Result<RatFunc, String> {
        let mut acc = RatFunc::zero();
        for ((theta, var), c) in &self.terms {
            let v = values
                .get(*var)
                .ok_or_else(|| format!("missing value for variable Y{}", var + 1))?;
            acc = &acc + &theta.apply(v).scale(c);
        }
        Ok(acc)
    }

    /// Renders with a custom label per variable, e.g. Y1 -> "D1(a)/a".
    pub fn render_with<F: Fn(usize) -> String>(&self, label: F) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for ((theta, var), c) in &self.terms {
            let base = label(*var);
            let body = if theta.order() == 0 {
                base
            } else {
                format!("{theta}({base})")
            };
            if c.is_one() {
                parts.push(body);
            } else if (-c).is_one() {
                parts.push(format!("-{body}"));
            } else {
                parts.push(format!("{c}*{body}"));
            }
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

impl fmt::Display for LinDiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_with(|j| format!("Y{}", j + 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn inv(den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(&[1]), xpoly_int(den)).unwrap()
    }

    #[test]
    fn worked_example_substitution() {
        // p = Y1 + Y2 applied to (d1 u, d2 u) gives 1/x
        let d1u = &inv(&[0, 1]) + &inv(&[-1, 1]);
        let d2u = -&inv(&[-1, 1]);
        let mut p = LinDiffPoly::zero(2);
        p.set((ThetaMonomial::identity(2), 0), ParamScalar::one());
        p.set((ThetaMonomial::identity(2), 1), ParamScalar::one());
        let got = p.apply(&[d1u.clone(), d2u.clone()]).unwrap();
        assert_eq!(got, inv(&[0, 1]));
        // p = -Y2 gives 1/(x-1)
        let mut p2 = LinDiffPoly::zero(2);
        p2.set((ThetaMonomial::identity(2), 1), ParamScalar::from_int(-1));
        assert_eq!(p2.apply(&[d1u, d2u]).unwrap(), inv(&[-1, 1]));
    }

    #[test]
    fn zero_polynomial_applies_to_zero() {
        let p = LinDiffPoly::zero(2);
        assert!(p.apply(&[RatFunc::one(), RatFunc::x()]).unwrap().is_zero());
    }

    #[test]
    fn missing_variable_is_an_error() {
        let p = LinDiffPoly::var(2, 1, 2);
        assert!(p.apply(&[RatFunc::one()]).is_err());
    }

    #[test]
    fn theta_action_satisfies_substitution_rule() {
        // (d_j p)(values) = d_j (p(values)) when values depend on parameters
        let t1 = RatFunc::param(0);
        let vals = vec![&t1 * &RatFunc::x()];
        let mut p = LinDiffPoly::zero(1);
        p.set(
            (ThetaMonomial::identity(1), 0),
            ParamScalar::param(0),
        );
        let lhs = p.derive(0).apply(&vals).unwrap();
        let rhs = p.apply(&vals).unwrap().derive(&Derivation::Param(0));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_enumeration_counts() {
        // orders 0..2 in 2 vars: 1 + 2 + 3 = 6
        let ms = ThetaMonomial::up_to_order(2, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms[0].order(), 0);
        assert_eq!(ms.last().unwrap().order(), 2);
    }

    #[test]
    fn rendering_scheme() {
        let mut p = LinDiffPoly::zero(2);
        p.set(
            (ThetaMonomial::from_exponents(vec![2, 1]), 0),
            ParamScalar::one(),
        );
        assert_eq!(format!("{p}"), "D1^2 D2(Y1)");
    }
}

//! Sparse multivariate polynomials over the rationals.
//!
//! These are the building blocks for the parameter field Q(t1,...,tm).
//! Monomials are exponent vectors ordered by graded lexicographic order
//! with t1 < t2 < ... (total degree first, then the highest variable
//! index decides). Trailing zero exponents are trimmed so a polynomial
//! does not need to know the ambient number of variables.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exponent vector with trailing zeros trimmed.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// The monomial t_j (0-based index).
    pub fn var(j: usize) -> Self {
        let mut v = vec![0; j + 1];
        v[j] = 1;
        Monomial(v)
    }

    pub fn from_exponents(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Monomial(exps)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, j: usize) -> u32 {
        self.0.get(j).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Index of the highest variable occurring, if any.
    pub fn top_var(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut v = vec![0u32; n];
        for (i, e) in self.0.iter().enumerate() {
            v[i] += e;
        }
        for (i, e) in other.0.iter().enumerate() {
            v[i] += e;
        }
        Monomial::from_exponents(v)
    }

    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut v = self.0.clone();
        for (i, e) in other.0.iter().enumerate() {
            let have = v.get(i).copied().unwrap_or(0);
            if have < *e {
                return None;
            }
            v[i] = have - e;
        }
        Some(Monomial::from_exponents(v))
    }

    pub fn pow(&self, n: u32) -> Monomial {
        Monomial::from_exponents(self.0.iter().map(|e| e * n).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let n = self.0.len().max(other.0.len());
        for i in (0..n).rev() {
            match self.exponent(i).cmp(&other.exponent(i)) {
                Ordering::Equal => {}
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        MPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        MPoly::constant(BigRational::from_integer(BigInt::from(n)))
    }

    /// The variable t_j (0-based).
    pub fn var(j: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(j), BigRational::one());
        MPoly { terms }
    }

    pub fn from_terms(pairs: Vec<(Monomial, BigRational)>) -> Self {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in pairs {
            if c.is_zero() {
                continue;
            }
            let entry = terms.entry(m).or_insert_with(BigRational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if self.is_constant() {
            return self.terms.get(&Monomial::one()).cloned();
        }
        None
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    /// Highest variable index occurring in the polynomial.
    pub fn top_var(&self) -> Option<usize> {
        self.terms.keys().filter_map(|m| m.top_var()).max()
    }

    /// Leading term in graded lex order.
    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let entry = terms.entry(m.clone()).or_insert_with(BigRational::zero);
            *entry += c;
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        if self.is_zero() || other.is_zero() {
            return MPoly::zero();
        }
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry += c;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut acc = MPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to t_j.
    pub fn derivative(&self, j: usize) -> MPoly {
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.exponent(j);
            if e == 0 {
                continue;
            }
            let mut exps = m.exponents().to_vec();
            if exps.len() <= j {
                exps.resize(j + 1, 0);
            }
            exps[j] = e - 1;
            let nm = Monomial::from_exponents(exps);
            let nc = c * BigRational::from_integer(BigInt::from(e));
            let entry = terms.entry(nm).or_insert_with(BigRational::zero);
            *entry += nc;
        }
        terms.retain(|_, c| !c.is_zero());
        MPoly { terms }
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.keys().map(|m| m.exponent(v)).max().unwrap_or(0)
    }

    /// Dense coefficient list with respect to variable `v`; index = v-degree.
    pub fn coeffs_in_var(&self, v: usize) -> Vec<MPoly> {
        let d = self.degree_in(v) as usize;
        let mut out = vec![MPoly::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(v) as usize;
            let mut exps = m.exponents().to_vec();
            if exps.len() > v {
                exps[v] = 0;
            }
            let rest = Monomial::from_exponents(exps);
            out[e] = out[e].add(&MPoly::from_terms(vec![(rest, c.clone())]));
        }
        out
    }

    pub fn from_coeffs_in_var(v: usize, coeffs: &[MPoly]) -> MPoly {
        let mut acc = MPoly::zero();
        for (e, c) in coeffs.iter().enumerate() {
            let me = Monomial::var(v).pow(e as u32);
            acc = acc.add(&c.mul_monomial(&me, &BigRational::one()));
        }
        acc
    }

    /// Exact division; `None` if the division leaves a remainder.
    pub fn exact_div(&self, d: &MPoly) -> Option<MPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(BigRational::one() / c)));
        }
        // multivariate long division by the leading term; exact iff remainder is 0
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = MPoly::zero();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let qm = rm.try_div(&dm)?;
            let qc = rc / &dc;
            let t = MPoly::from_terms(vec![(qm.clone(), qc.clone())]);
            quot = quot.add(&t);
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
        }
        Some(quot)
    }

    /// Splits into rational content and an integer-coefficient primitive part
    /// whose leading coefficient is positive. Zero splits as (0, 0).
    pub fn primitive(&self) -> (BigRational, MPoly) {
        if self.is_zero() {
            return (BigRational::zero(), MPoly::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_integer::Integer::gcd(&num_gcd, c.numer());
            den_lcm = num_integer::Integer::lcm(&den_lcm, c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading_coeff().is_negative() {
            content = -content;
        }
        let prim = self.scale(&(BigRational::one() / &content));
        (content, prim)
    }

    /// Content with respect to variable `v`: gcd of the v-coefficients.
    pub fn content_in_var(&self, v: usize) -> MPoly {
        let coeffs = self.coeffs_in_var(v);
        let mut g = MPoly::zero();
        for c in coeffs {
            if !c.is_zero() {
                g = MPoly::gcd(&g, &c);
            }
        }
        g
    }

    /// Substitutes rational values for all variables.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (j, e) in m.exponents().iter().enumerate() {
                for _ in 0..*e {
                    term *= &point[j];
                }
            }
            acc += term;
        }
        acc
    }

    /// Pseudo-remainder of `self` by `d` in variable `v`:
    /// lc(d)^(deg a - deg d + 1) * a = q*d + r with deg_v r < deg_v d.
    fn pseudo_rem(&self, d: &MPoly, v: usize) -> MPoly {
        let dd = d.degree_in(v);
        let da = self.degree_in(v);
        if da < dd {
            // still scale for the exact subresultant bookkeeping
            let lb = d.coeffs_in_var(v).pop().unwrap();
            return self.mul(&lb.pow(da.saturating_sub(dd).saturating_add(1)));
        }
        let dcoeffs = d.coeffs_in_var(v);
        let lb = dcoeffs.last().unwrap().clone();
        let mut r = self.clone();
        let mut steps = 0u32;
        let bound = da - dd + 1;
        while !r.is_zero() && r.degree_in(v) >= dd {
            let rcoeffs = r.coeffs_in_var(v);
            let dr = (rcoeffs.len() - 1) as u32;
            let lr = rcoeffs.last().unwrap().clone();
            let shift = Monomial::var(v).pow(dr - dd);
            r = r
                .mul(&lb)
                .sub(&d.mul(&lr).mul_monomial(&shift, &BigRational::one()));
            steps += 1;
        }
        for _ in steps..bound {
            r = r.mul(&lb);
        }
        r
    }

    /// Substitutes rational values for every variable except `keep`,
    /// producing dense univariate coefficients (index = degree in `keep`).
    fn specialize_except(&self, keep: usize, point: &[BigRational]) -> Vec<BigRational> {
        let d = self.degree_in(keep) as usize;
        let mut out = vec![BigRational::zero(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exponent(keep) as usize;
            let mut v = c.clone();
            for (j, exp) in m.exponents().iter().enumerate() {
                if j == keep {
                    continue;
                }
                for _ in 0..*exp {
                    v *= &point[j];
                }
            }
            out[e] += v;
        }
        out
    }

    /// Certifies coprimality by specializing all but one variable at random
    /// points and taking univariate gcds: a specialization that keeps the
    /// leading coefficient nonzero can only enlarge the gcd degree, so a
    /// degree-zero specialized gcd in every variable proves the gcd is a
    /// constant.
    fn certified_coprime(a: &MPoly, b: &MPoly) -> bool {
        let nv = match a.top_var().max(b.top_var()) {
            None => return true,
            Some(v) => v + 1,
        };
        'vars: for v in 0..nv {
            let da = a.degree_in(v);
            let db = b.degree_in(v);
            if da == 0 || db == 0 {
                continue;
            }
            for attempt in 0..8 {
                let point: Vec<BigRational> = (0..nv)
                    .map(|j| {
                        BigRational::from_integer(BigInt::from(
                            3 + 5 * attempt as i64 + 2 * j as i64,
                        ))
                    })
                    .collect();
                let ua = a.specialize_except(v, &point);
                let ub = b.specialize_except(v, &point);
                if ua.last().map(|c| c.is_zero()).unwrap_or(true)
                    || ub.last().map(|c| c.is_zero()).unwrap_or(true)
                {
                    continue; // leading coefficient vanished, pick another point
                }
                if univariate_gcd_degree(&ua, &ub) == 0 {
                    continue 'vars;
                }
                return false;
            }
            return false;
        }
        true
    }

    /// Polynomial gcd, returned integer-primitive with positive leading
    /// coefficient (subresultant PRS on the top variable).
    pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_zero() {
            return b.primitive().1;
        }
        if b.is_zero() {
            return a.primitive().1;
        }
        if a.is_constant() || b.is_constant() {
            return MPoly::one();
        }
        if Self::certified_coprime(a, b) {
            return MPoly::one();
        }
        let pa = a.primitive().1;
        let pb = b.primitive().1;
        Self::gcd_primitive(&pa, &pb)
    }

    fn gcd_primitive(a: &MPoly, b: &MPoly) -> MPoly {
        let va = a.top_var();
        let vb = b.top_var();
        let v = match (va, vb) {
            (None, None) => return MPoly::one(),
            (Some(_), None) | (None, Some(_)) => {
                // one side is constant and nonzero
                return MPoly::one();
            }
            (Some(x), Some(y)) => x.max(y),
        };
        if a.degree_in(v) == 0 {
            return MPoly::gcd(a, &b.content_in_var(v));
        }
        if b.degree_in(v) == 0 {
            return MPoly::gcd(&a.content_in_var(v), b);
        }
        let ca = a.content_in_var(v);
        let cb = b.content_in_var(v);
        let mut aa = a.exact_div(&ca).unwrap();
        let mut bb = b.exact_div(&cb).unwrap();
        let cont = MPoly::gcd(&ca, &cb);
        if aa.degree_in(v) < bb.degree_in(v) {
            std::mem::swap(&mut aa, &mut bb);
        }
        let mut g = MPoly::one();
        let mut h = MPoly::one();
        loop {
            let da = aa.degree_in(v);
            let db = bb.degree_in(v);
            let delta = da - db;
            let r = aa.pseudo_rem(&bb, v);
            if r.is_zero() {
                break;
            }
            if r.degree_in(v) == 0 {
                bb = MPoly::one();
                break;
            }
            aa = bb;
            let divisor = g.mul(&h.pow(delta));
            bb = r.exact_div(&divisor).expect("subresultant division is exact");
            g = aa.coeffs_in_var(v).pop().unwrap();
            h = if delta == 0 {
                h
            } else {
                let gd = g.pow(delta);
                gd.exact_div(&h.pow(delta - 1))
                    .expect("subresultant h-update is exact")
            };
        }
        if bb.degree_in(v) == 0 {
            return cont;
        }
        let prim = bb
            .exact_div(&bb.content_in_var(v))
            .unwrap()
            .primitive()
            .1;
        cont.mul(&prim).primitive().1
    }

    /// Squarefree decomposition: self = content * prod f_i^(m_i) with the
    /// f_i pairwise coprime, squarefree, integer-primitive.
    pub fn squarefree_decomposition(&self) -> Vec<(MPoly, u32)> {
        let mut out = Vec::new();
        let mut p = self.primitive().1;
        loop {
            let v = match p.top_var() {
                None => break,
                Some(v) => v,
            };
            let cont = p.content_in_var(v);
            let prim = p.exact_div(&cont).unwrap();
            // Yun's algorithm in variable v
            let dp = {
                // derivative with respect to v
                let coeffs = prim.coeffs_in_var(v);
                let mut dcoeffs = Vec::new();
                for (e, c) in coeffs.iter().enumerate().skip(1) {
                    dcoeffs.push(c.scale(&BigRational::from_integer(BigInt::from(e))));
                }
                MPoly::from_coeffs_in_var(v, &dcoeffs)
            };
            let g = MPoly::gcd(&prim, &dp);
            let mut w = prim.exact_div(&g).unwrap();
            let mut y = dp.exact_div(&g).unwrap();
            let mut i = 1u32;
            while w.degree_in(v) > 0 || !w.is_constant() {
                let wv = {
                    let coeffs = w.coeffs_in_var(v);
                    let mut dcoeffs = Vec::new();
                    for (e, c) in coeffs.iter().enumerate().skip(1) {
                        dcoeffs.push(c.scale(&BigRational::from_integer(BigInt::from(e))));
                    }
                    MPoly::from_coeffs_in_var(v, &dcoeffs)
                };
                let z = y.sub(&wv);
                if z.is_zero() {
                    if !(w.is_constant()) {
                        out.push((w.primitive().1, i));
                    }
                    break;
                }
                let f = MPoly::gcd(&w, &z);
                if !f.is_constant() {
                    out.push((f.primitive().1, i));
                }
                w = w.exact_div(&f).unwrap();
                y = z.exact_div(&f).unwrap();
                i += 1;
            }
            p = cont;
        }
        out.sort_by(|(f1, m1), (f2, m2)| m2.cmp(m1).then_with(|| format!("{f1}").cmp(&format!("{f2}"))));
        out
    }

    /// Exact square root of a perfect square.
    pub fn sqrt(&self) -> Option<MPoly> {
        if self.is_zero() {
            return Some(MPoly::zero());
        }
        let (content, prim) = self.primitive();
        if content.is_negative() {
            return None;
        }
        let cn = content.numer().sqrt();
        let cd = content.denom().sqrt();
        if &(&cn * &cn) != content.numer() || &(&cd * &cd) != content.denom() {
            return None;
        }
        let mut root = MPoly::constant(BigRational::new(cn, cd));
        for (f, m) in prim.squarefree_decomposition() {
            if m % 2 != 0 {
                return None;
            }
            root = root.mul(&f.pow(m / 2));
        }
        if root.mul(&root) == *self {
            Some(root)
        } else {
            None
        }
    }
}

/// Degree of the monic Euclidean gcd of two dense rational-coefficient
/// polynomials.
fn univariate_gcd_degree(a: &[BigRational], b: &[BigRational]) -> usize {
    let trim = |v: &mut Vec<BigRational>| {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    };
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    while !r1.is_empty() {
        // r0 mod r1
        let lead = r1.last().unwrap().clone();
        while r0.len() >= r1.len() && !r0.is_empty() {
            let q = r0.last().unwrap() / &lead;
            let shift = r0.len() - r1.len();
            for (i, c) in r1.iter().enumerate() {
                let delta = &q * c;
                r0[shift + i] -= delta;
            }
            trim(&mut r0);
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    r0.len().saturating_sub(1)
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || m.is_one() {
                if mag.denom().is_one() {
                    factors.push(format!("{}", mag.numer()));
                } else {
                    factors.push(format!("({}/{})", mag.numer(), mag.denom()));
                }
            }
            for (j, e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("t{}", j + 1)),
                    _ => factors.push(format!("t{}^{}", j + 1, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl PartialOrd for MPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        let a: Vec<_> = self.terms.iter().collect();
        let b: Vec<_> = other.terms.iter().collect();
        a.cmp(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn grlex_order() {
        let t1 = Monomial::var(0);
        let t2 = Monomial::var(1);
        assert!(t1 < t2);
        assert!(t1.mul(&t1) > t2);
        assert!(t1.mul(&t2) < t2.mul(&t2));
    }

    #[test]
    fn arithmetic_and_division() {
        let t1 = MPoly::var(0);
        let t2 = MPoly::var(1);
        let p = t1.add(&t2).mul(&t1.sub(&t2));
        let expect = t1.mul(&t1).sub(&t2.mul(&t2));
        assert_eq!(p, expect);
        let d = t1.add(&t2);
        assert_eq!(p.exact_div(&d), Some(t1.sub(&t2)));
        assert_eq!(p.exact_div(&t1), None);
    }

    #[test]
    fn gcd_multivariate() {
        let t1 = MPoly::var(0);
        let t2 = MPoly::var(1);
        let common = t1.sub(&t2);
        let a = common.mul(&t1.add(&MPoly::one()));
        let b = common.mul(&common).mul(&t2);
        let g = MPoly::gcd(&a, &b);
        assert_eq!(g, common.primitive().1);
    }

    #[test]
    fn gcd_coprime() {
        let t1 = MPoly::var(0);
        let t2 = MPoly::var(1);
        assert_eq!(MPoly::gcd(&t1, &t2), MPoly::one());
    }

    #[test]
    fn squarefree_and_sqrt() {
        let t1 = MPoly::var(0);
        let p = t1.sub(&MPoly::one()).pow(2).mul(&t1.pow(3));
        let sf = p.squarefree_decomposition();
        assert_eq!(sf.len(), 2);
        let sq = t1.add(&MPoly::var(1)).pow(2).scale(&q(9, 4));
        let r = sq.sqrt().unwrap();
        assert_eq!(r.mul(&r), sq);
        assert_eq!(t1.sqrt(), None);
    }

    #[test]
    fn derivative_rule() {
        let t1 = MPoly::var(0);
        let t2 = MPoly::var(1);
        let p = t1.pow(2).mul(&t2).add(&t2.pow(3));
        let d0 = p.derivative(0);
        assert_eq!(d0, t1.mul(&t2).scale(&q(2, 1)));
        let d1 = p.derivative(1);
        assert_eq!(d1, t1.pow(2).add(&t2.pow(2).scale(&q(3, 1))));
    }
}

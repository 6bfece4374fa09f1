//! Rothstein-Trager residue data and exact integer-root extraction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::ratfunc::RatFunc;
use crate::algebra::scalar::ParamScalar;
use crate::algebra::xpoly::XPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueError {
    NotReduced,
}

impl std::fmt::Display for ResidueError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ResidueError::NotReduced => write!(f, "call hermite_reduce first"),
        }
    }
}

impl std::error::Error for ResidueError {}

/// One entry per squarefree denominator factor d: the resultant
/// res_x(d, num - z*d') as a polynomial in z. Its roots are exactly the
/// residues of the input at the roots of d.
pub fn residue_data(r: &RatFunc) -> Result<Vec<(XPoly, XPoly)>, ResidueError> {
    if r.is_zero() {
        return Ok(Vec::new());
    }
    if !r.is_proper() {
        return Err(ResidueError::NotReduced);
    }
    let factors = r.denom().squarefree_decomposition();
    if factors.iter().any(|(_, m)| *m > 1) {
        return Err(ResidueError::NotReduced);
    }
    let pieces = super::hermite::split_by_factors(r);
    let mut out = Vec::new();
    for (d, _, num) in pieces {
        let res = rt_resultant(&d, &num);
        out.push((d, res));
    }
    Ok(out)
}

/// res_x(d, num - z*d') as a polynomial in z over the parameter field,
/// computed by interpolation from rational sample points.
pub fn rt_resultant(d: &XPoly, num: &XPoly) -> XPoly {
    let dd = d.derivative();
    let deg = d.degree().expect("nonzero denominator factor");
    values_resultant_in_z(d, num, &dd, deg)
}

/// res_x(d, a - z*b) interpolated in z; the result has degree <= cap.
fn values_resultant_in_z(d: &XPoly, a: &XPoly, b: &XPoly, cap: usize) -> XPoly {
    let points: Vec<i64> = (0..=(cap as i64)).collect();
    let mut values = Vec::with_capacity(points.len());
    for p in &points {
        let z = ParamScalar::from_int(*p);
        let shifted = a.sub(&b.scale(&z));
        values.push(XPoly::resultant(d, &shifted));
    }
    lagrange_interpolate(&points, &values)
}

fn lagrange_interpolate(points: &[i64], values: &[ParamScalar]) -> XPoly {
    let mut acc = XPoly::zero();
    for (i, vi) in values.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let mut basis = XPoly::one();
        let mut denom = ParamScalar::one();
        for (j, pj) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            basis = basis.mul(&XPoly::linear_root(&ParamScalar::from_int(*pj)));
            denom = &denom * &ParamScalar::from_int(points[i] - pj);
        }
        acc = acc.add(&basis.scale(&(vi / &denom)));
    }
    acc
}

/// Integer roots (with multiplicity collapsed) of a polynomial over the
/// parameter field. Roots must be parameter-free integers; candidates are
/// located from a rational specialization and verified by exact division.
/// Returns `None` when the search had to give up (huge coefficient bounds),
/// which callers must treat as "unknown, assume none and flag".
pub fn integer_roots(p: &XPoly) -> Option<Vec<BigInt>> {
    if p.is_zero() || p.is_constant() {
        return Some(Vec::new());
    }
    // specialize parameters at a point where all coefficients stay finite
    let mut nparams = 0usize;
    for c in p.coeffs() {
        for (m, _) in c.numer().terms() {
            nparams = nparams.max(m.exponents().len());
        }
        for (m, _) in c.denom().terms() {
            nparams = nparams.max(m.exponents().len());
        }
    }
    let mut spec: Option<Vec<BigRational>> = None;
    for attempt in 0..64 {
        let pt: Vec<BigRational> = (0..nparams)
            .map(|j| {
                BigRational::new(
                    BigInt::from(17 + 13 * attempt as i64 + 7 * j as i64),
                    BigInt::from(5 + attempt as i64),
                )
            })
            .collect();
        if p.eval_params(&pt).is_some() && !p.coeffs().last().unwrap().eval(&pt).map(|v| v.is_zero()).unwrap_or(true) {
            spec = Some(pt);
            break;
        }
    }
    let spec = spec?;
    let rat_coeffs = p.eval_params(&spec)?;
    // clear to a primitive integer polynomial
    let mut lcm = BigInt::one();
    for c in &rat_coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let int_coeffs: Vec<BigInt> = rat_coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let candidates = integer_root_candidates(&int_coeffs)?;
    let mut out = Vec::new();
    for k in candidates {
        let ks = ParamScalar::from_rational(BigRational::from_integer(k.clone()));
        if p.eval(&ks).is_zero() {
            out.push(k);
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// Candidate integer roots of an integer-coefficient polynomial: divisors of
/// the trailing coefficient within the Cauchy root bound. `None` when the
/// bound is too large to enumerate.
fn integer_root_candidates(coeffs: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut cs = coeffs.to_vec();
    let mut out = vec![BigInt::zero()];
    // strip powers of z (root zero)
    while cs.first().map(|c| c.is_zero()).unwrap_or(false) {
        cs.remove(0);
    }
    if cs.len() <= 1 {
        return Some(out);
    }
    let lead = cs.last().unwrap().abs();
    let maxabs = cs.iter().map(|c| c.abs()).max().unwrap();
    // Cauchy bound: |root| <= 1 + max|a_i|/|a_n|
    let bound = BigInt::one() + maxabs.div_ceil(&lead);
    let trailing = cs[0].abs();
    let scan_cap = BigInt::from(200_000i64);
    if bound <= scan_cap {
        let b: i64 = bound.try_into().ok()?;
        let horner = |k: &BigInt| -> BigInt {
            let mut acc = BigInt::zero();
            for c in cs.iter().rev() {
                acc = acc * k + c;
            }
            acc
        };
        for k in -b..=b {
            if k == 0 {
                continue;
            }
            let kb = BigInt::from(k);
            if horner(&kb).is_zero() {
                out.push(kb);
            }
        }
        return Some(out);
    }
    // fall back to divisors of the trailing coefficient, if it factors easily
    let divisors = small_divisors(&trailing, &bound)?;
    for d in divisors {
        out.push(d.clone());
        out.push(-d);
    }
    Some(out)
}

/// All positive divisors of n that are <= bound, via trial division.
/// `None` when n has a large factor we cannot split.
fn small_divisors(n: &BigInt, bound: &BigInt) -> Option<Vec<BigInt>> {
    if n.is_zero() {
        return Some(Vec::new());
    }
    let mut rest = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    let trial_cap = BigInt::from(1_000_000i64);
    while &(&p * &p) <= &rest && p <= trial_cap {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if rest > BigInt::one() {
        if &rest <= bound {
            primes.push((rest.clone(), 1));
        } else if &(&p * &p) <= &rest {
            // a large composite remains unfactored
            return None;
        } else {
            primes.push((rest.clone(), 1));
        }
    }
    let mut divisors = vec![BigInt::one()];
    for (q, e) in primes {
        let mut next = Vec::new();
        for d in &divisors {
            let mut m = d.clone();
            for _ in 0..=e {
                if &m <= bound {
                    next.push(m.clone());
                }
                m *= &q;
            }
        }
        next.sort();
        next.dedup();
        divisors = next;
    }
    Some(divisors)
}

/// Rational roots of a polynomial over the parameter field. Candidates come
/// from a rational specialization of the parameters; each is verified by
/// exact evaluation. `None` when candidate location had to give up.
pub fn rational_roots(p: &XPoly) -> Option<Vec<BigRational>> {
    if p.is_zero() || p.is_constant() {
        return Some(Vec::new());
    }
    let mut nparams = 0usize;
    for c in p.coeffs() {
        for (m, _) in c.numer().terms() {
            nparams = nparams.max(m.exponents().len());
        }
        for (m, _) in c.denom().terms() {
            nparams = nparams.max(m.exponents().len());
        }
    }
    let mut spec: Option<Vec<BigRational>> = None;
    for attempt in 0..64 {
        let pt: Vec<BigRational> = (0..nparams)
            .map(|j| {
                BigRational::new(
                    BigInt::from(23 + 11 * attempt as i64 + 3 * j as i64),
                    BigInt::from(7 + attempt as i64),
                )
            })
            .collect();
        if p.eval_params(&pt).is_some()
            && !p
                .coeffs()
                .last()
                .unwrap()
                .eval(&pt)
                .map(|v| v.is_zero())
                .unwrap_or(true)
        {
            spec = Some(pt);
            break;
        }
    }
    let spec = spec?;
    let rat_coeffs = p.eval_params(&spec)?;
    let mut lcm = BigInt::one();
    for c in &rat_coeffs {
        lcm = lcm.lcm(c.denom());
    }
    let mut ints: Vec<BigInt> = rat_coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut candidates: Vec<BigRational> = vec![BigRational::zero()];
    while ints.first().map(|c| c.is_zero()).unwrap_or(false) {
        ints.remove(0);
    }
    if ints.len() > 1 {
        let trail = ints[0].abs();
        let lead = ints.last().unwrap().abs();
        let ps = trial_divisors(&trail)?;
        let qs = trial_divisors(&lead)?;
        for q in &qs {
            for p0 in &ps {
                candidates.push(BigRational::new(p0.clone(), q.clone()));
                candidates.push(BigRational::new(-p0.clone(), q.clone()));
            }
        }
    }
    let mut out = Vec::new();
    for c in candidates {
        let cs = ParamScalar::from_rational(c.clone());
        if p.eval(&cs).is_zero() {
            out.push(c);
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

fn trial_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    if n.is_zero() {
        return Some(vec![]);
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    let nn = n.abs();
    let mut count = 0usize;
    while &(&d * &d) <= &nn {
        if (&nn % &d).is_zero() {
            out.push(d.clone());
            out.push(&nn / &d);
        }
        d += 1;
        count += 1;
        if count > 200_000 {
            return None;
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

/// True when every root of `p` (over the algebraic closure) is a rational
/// integer; returns the roots when so.
pub fn splits_with_integer_roots(p: &XPoly) -> Option<Vec<BigInt>> {
    if p.is_zero() {
        return None;
    }
    let monic = p.monic();
    // a monic polynomial with all-integer roots has integer coefficients
    let mut coeffs = Vec::with_capacity(monic.coeffs().len());
    for c in monic.coeffs() {
        let q = c.as_rational()?;
        if !q.denom().is_one() {
            return None;
        }
        coeffs.push(q.numer().clone());
    }
    let mut roots = Vec::new();
    let mut current: Vec<BigInt> = coeffs;
    while current.len() > 1 {
        let cand = integer_root_candidates(&current)?;
        let horner = |cs: &[BigInt], k: &BigInt| -> BigInt {
            let mut acc = BigInt::zero();
            for c in cs.iter().rev() {
                acc = acc * k + c;
            }
            acc
        };
        let mut found = None;
        for k in cand {
            if horner(&current, &k).is_zero() {
                found = Some(k);
                break;
            }
        }
        let k = found?;
        // synthetic division by (z - k): q[i-1] = c[i] + k*q[i]
        let n = current.len() - 1;
        let mut quotient = vec![BigInt::zero(); n];
        quotient[n - 1] = current[n].clone();
        for i in (1..n).rev() {
            quotient[i - 1] = &current[i] + &k * &quotient[i];
        }
        let remainder = &current[0] + &k * &quotient[0];
        assert!(remainder.is_zero(), "division by a verified root is exact");
        roots.push(k);
        current = quotient;
    }
    roots.sort();
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(num), xpoly_int(den)).unwrap()
    }

    #[test]
    fn residues_of_one_over_x2_minus_1() {
        // 1/(x^2-1) has residues 1/2 and -1/2
        let g = rf(&[1], &[-1, 0, 1]);
        let data = residue_data(&g).unwrap();
        assert_eq!(data.len(), 1);
        let res = &data[0].1;
        // roots of the resultant are ±1/2: res ~ c*(z^2 - 1/4)
        let half = ParamScalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        assert!(res.eval(&half).is_zero());
        assert!(res.eval(&(-&half)).is_zero());
        assert!(!res.eval(&ParamScalar::one()).is_zero());
    }

    #[test]
    fn parametric_residue() {
        // (t1(k1-k2)+t2 k2)/x with k1=2, k2=3 has the single residue 2t1 + ... well,
        // directly: (a t1 + b t2)/x has residue a t1 + b t2
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let a = RatFunc::from_int(-1); // k1 - k2 = -1
        let b = RatFunc::from_int(3); // k2 = 3
        let num = &(&a * &t1) + &(&b * &t2);
        let g = &num * &rf(&[1], &[0, 1]);
        let data = residue_data(&g).unwrap();
        assert_eq!(data.len(), 1);
        let res = &data[0].1;
        assert_eq!(res.degree(), Some(1));
        let expected_root = num.as_scalar().unwrap();
        assert!(res.eval(&expected_root).is_zero());
    }

    #[test]
    fn simple_integer_residue() {
        let g = rf(&[2], &[0, 1]);
        let data = residue_data(&g).unwrap();
        let res = &data[0].1;
        assert!(res.eval(&ParamScalar::from_int(2)).is_zero());
        assert_eq!(splits_with_integer_roots(res), Some(vec![BigInt::from(2)]));
    }

    #[test]
    fn rejects_unreduced_input() {
        let g = rf(&[1], &[0, 0, 1]);
        assert_eq!(residue_data(&g), Err(ResidueError::NotReduced));
    }

    #[test]
    fn integer_root_extraction() {
        // (z-3)(z+5)(z-t1) has integer roots 3, -5
        let t1 = ParamScalar::param(0);
        let p = xpoly_int(&[-3, 1])
            .mul(&xpoly_int(&[5, 1]))
            .mul(&XPoly::linear_root(&t1));
        let roots = integer_roots(&p).unwrap();
        assert_eq!(roots, vec![BigInt::from(-5), BigInt::from(3)]);
    }

    #[test]
    fn splits_detection() {
        let yes = xpoly_int(&[-3, 1]).mul(&xpoly_int(&[5, 1]));
        assert_eq!(
            splits_with_integer_roots(&yes),
            Some(vec![BigInt::from(-5), BigInt::from(3)])
        );
        let no = xpoly_int(&[1, 0, 1]);
        assert_eq!(splits_with_integer_roots(&no), None);
        let half = xpoly_int(&[-1, 2]); // root 1/2
        assert_eq!(splits_with_integer_roots(&half), None);
    }
}

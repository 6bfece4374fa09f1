//! Membership tests: g in dx(K) and g in { f'/f : f in K* }, with witnesses.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::hermite::hermite_reduce;
use super::residue::{residue_data, splits_with_integer_roots};
use crate::algebra::ratfunc::{Derivation, RatFunc};
use crate::algebra::xpoly::XPoly;

/// If g = dx(f) for some f in K, returns such an f. Decision rule: the
/// Hermite residual must vanish.
pub fn is_exact(g: &RatFunc) -> Option<RatFunc> {
    let h = hermite_reduce(g);
    if h.residual.is_zero() {
        debug_assert_eq!(h.rational_part.derive(&Derivation::MainX), *g);
        Some(h.rational_part)
    } else {
        None
    }
}

/// If g = dx(f)/f for some f in K*, returns such an f. Requires g proper
/// with simple poles and all residues rational integers; f is rebuilt from
/// gcd-extracted factors and re-verified exactly.
pub fn is_log_derivative(g: &RatFunc) -> Option<RatFunc> {
    if g.is_zero() {
        return Some(RatFunc::one());
    }
    if !g.is_proper() {
        return None;
    }
    // simple poles only
    let h = hermite_reduce(g);
    if !h.rational_part.is_zero() {
        return None;
    }
    let data = residue_data(g).ok()?;
    let mut f = RatFunc::one();
    for (d, res) in &data {
        let mut roots = splits_with_integer_roots(res)?;
        roots.dedup();
        let num_piece = piece_numerator(g, d);
        for k in roots.iter().filter(|k| !k.is_zero()) {
            let shifted = num_piece.sub(&d.derivative().scale(
                &crate::algebra::scalar::ParamScalar::from_rational(
                    num_rational::BigRational::from_integer(k.clone()),
                ),
            ));
            let v = XPoly::gcd(d, &shifted);
            if v.degree().unwrap_or(0) == 0 {
                continue;
            }
            let exp = k.to_i64()?;
            let factor = RatFunc::from_poly(v);
            f = &f * &factor.pow(exp);
        }
    }
    // exactness of the reconstruction is the final arbiter
    let check = &f.derive(&Derivation::MainX) / &f;
    if &check == g {
        Some(f)
    } else {
        None
    }
}

/// Numerator of the partial-fraction piece of g at squarefree factor d.
fn piece_numerator(g: &RatFunc, d: &XPoly) -> XPoly {
    for (f, _, num) in super::hermite::split_by_factors(g) {
        if &f == d {
            return num;
        }
    }
    XPoly::zero()
}

/// Minimal positive multiplier ell with ell*g a logarithmic derivative,
/// together with its witness, or None when no multiple works.
///
/// Structure: scaling never fixes a polynomial part or a higher-order pole,
/// and never makes an irrational residue rational, so either the residues
/// are all rational (then ell = lcm of their denominators) or no ell exists.
pub fn minimal_log_multiple(g: &RatFunc) -> Option<(u32, RatFunc)> {
    if g.is_zero() {
        return Some((1, RatFunc::one()));
    }
    if !g.is_proper() {
        return None;
    }
    let h = hermite_reduce(g);
    if !h.rational_part.is_zero() {
        return None;
    }
    let data = residue_data(g).ok()?;
    let mut ell = BigInt::from(1);
    for (_, res) in &data {
        // all residues must be rational: the monic resultant must have
        // rational coefficients and split over Q
        let monic = res.monic();
        let mut coeffs = Vec::new();
        for c in monic.coeffs() {
            coeffs.push(c.as_rational()?);
        }
        let dens = rational_roots_denominator_lcm(&coeffs)?;
        ell = num_integer::Integer::lcm(&ell, &dens);
    }
    let ell_u = ell.to_u32()?;
    let scaled = g.scale(&crate::algebra::scalar::ParamScalar::from_int(ell_u as i64));
    let f = is_log_derivative(&scaled)?;
    Some((ell_u, f))
}

/// For a monic rational-coefficient polynomial splitting over Q, the lcm of
/// the denominators of its roots. None when it does not split over Q.
fn rational_roots_denominator_lcm(coeffs: &[num_rational::BigRational]) -> Option<BigInt> {
    // clear to primitive integer coefficients; rational roots p/q then have
    // q | lc and p | trailing
    let mut lcm = BigInt::from(1);
    for c in coeffs {
        lcm = num_integer::Integer::lcm(&lcm, c.denom());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * num_rational::BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let mut current = ints;
    let mut denom_lcm = BigInt::from(1);
    while current.len() > 1 {
        // strip zero roots
        if current[0].is_zero() {
            current.remove(0);
            continue;
        }
        let root = find_rational_root(&current)?;
        let (p, q) = root;
        denom_lcm = num_integer::Integer::lcm(&denom_lcm, &q);
        // divide by (q z - p)
        let n = current.len() - 1;
        let mut quotient = vec![BigInt::zero(); n];
        // synthetic division for root p/q on q*z - p: work over rationals
        let rational_root = num_rational::BigRational::new(p.clone(), q.clone());
        let mut rq: Vec<num_rational::BigRational> = vec![num_rational::BigRational::zero(); n];
        rq[n - 1] = num_rational::BigRational::from_integer(current[n].clone());
        for i in (1..n).rev() {
            rq[i - 1] = num_rational::BigRational::from_integer(current[i].clone())
                + &rational_root * &rq[i];
        }
        let rem = num_rational::BigRational::from_integer(current[0].clone())
            + &rational_root * &rq[0];
        if !rem.is_zero() {
            return None;
        }
        // rescale to integer coefficients
        let mut l = BigInt::from(1);
        for c in &rq {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        for (i, c) in rq.iter().enumerate() {
            quotient[i] = (c * num_rational::BigRational::from_integer(l.clone())).to_integer();
        }
        current = quotient;
    }
    Some(denom_lcm)
}

/// One rational root (p, q) in lowest terms of an integer polynomial, or None.
fn find_rational_root(coeffs: &[BigInt]) -> Option<(BigInt, BigInt)> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n].abs();
    let trail = coeffs[0].abs();
    if trail.is_zero() {
        return Some((BigInt::zero(), BigInt::from(1)));
    }
    let eval = |p: &BigInt, q: &BigInt| -> BigInt {
        // q^n * f(p/q)
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::from(1);
        for (i, c) in coeffs.iter().enumerate().rev() {
            acc = acc * p + c * &qpow;
            if i > 0 {
                qpow *= q;
            }
        }
        acc
    };
    let ps = divisors_bounded(&trail, 100_000)?;
    let qs = divisors_bounded(&lead, 100_000)?;
    for q in &qs {
        for p in &ps {
            for sign in [1i64, -1] {
                let pp = p * BigInt::from(sign);
                if num_integer::Integer::gcd(&pp, q) != BigInt::from(1) {
                    continue;
                }
                if eval(&pp, q).is_zero() {
                    return Some((pp, q.clone()));
                }
            }
        }
    }
    None
}

fn divisors_bounded(n: &BigInt, cap: usize) -> Option<Vec<BigInt>> {
    let mut out = Vec::new();
    let mut d = BigInt::from(1);
    let nn = n.abs();
    // trial enumeration up to sqrt(n), capped
    let mut count = 0usize;
    while &(&d * &d) <= &nn {
        if (&nn % &d).is_zero() {
            out.push(d.clone());
            out.push(&nn / &d);
        }
        d += 1;
        count += 1;
        if count > cap {
            return None;
        }
    }
    out.sort();
    out.dedup();
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(num), xpoly_int(den)).unwrap()
    }

    #[test]
    fn exact_round_trip() {
        let f = rf(&[1, 2, 0, 5], &[3, 0, 1]);
        let g = f.dx();
        let w = is_exact(&g).unwrap();
        assert_eq!(w.dx(), g);
    }

    #[test]
    fn simple_pole_is_not_exact() {
        assert!(is_exact(&rf(&[1], &[0, 1])).is_none());
    }

    #[test]
    fn log_derivative_of_x_squared() {
        // 2/x = (x^2)'/x^2
        let g = rf(&[2], &[0, 1]);
        let f = is_log_derivative(&g).unwrap();
        assert_eq!(&f.dx() / &f, g);
        assert_eq!(f, RatFunc::from_poly(xpoly_int(&[0, 0, 1])));
    }

    #[test]
    fn parameter_residue_is_rejected() {
        let g = &RatFunc::param(0) * &rf(&[1], &[0, 1]);
        assert!(is_log_derivative(&g).is_none());
    }

    #[test]
    fn half_residue_is_rejected() {
        let g = rf(&[1], &[0, 2]);
        assert!(is_log_derivative(&g).is_none());
        // but the minimal multiple is 2 with witness x
        let (ell, f) = minimal_log_multiple(&g).unwrap();
        assert_eq!(ell, 2);
        assert_eq!(f, RatFunc::from_poly(xpoly_int(&[0, 1])));
    }

    #[test]
    fn log_derivative_round_trip() {
        let f = rf(&[0, 0, 1], &[-1, 1]); // x^2/(x-1)
        let g = &f.dx() / &f;
        let w = is_log_derivative(&g).unwrap();
        assert_eq!(&w.dx() / &w, g);
    }

    #[test]
    fn negative_exponent_reconstruction() {
        let f = rf(&[1], &[0, 0, 0, 1]); // x^{-3}
        let g = &f.dx() / &f;
        let w = is_log_derivative(&g).unwrap();
        assert_eq!(&w.dx() / &w, g);
    }

    #[test]
    fn irrational_pole_structure() {
        // f = x^2+1: f'/f = 2x/(x^2+1) has residues 1 at ±i
        let f = rf(&[1, 0, 1], &[1]);
        let g = &f.dx() / &f;
        let w = is_log_derivative(&g).unwrap();
        assert_eq!(&w.dx() / &w, g);
    }

    #[test]
    fn minimal_multiple_of_zero() {
        assert_eq!(minimal_log_multiple(&RatFunc::zero()), Some((1, RatFunc::one())));
    }

    #[test]
    fn no_multiple_for_double_pole() {
        assert!(minimal_log_multiple(&rf(&[1], &[0, 0, 1])).is_none());
    }

    #[test]
    fn no_multiple_for_parameter_residue() {
        let g = &RatFunc::param(0) * &rf(&[1], &[0, 1]);
        assert!(minimal_log_multiple(&g).is_none());
    }
}

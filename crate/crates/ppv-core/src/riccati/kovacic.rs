//! Riccati solvability analysis for dx^2 Y = q Y over K = Q(t)(x):
//! rational solutions (case I), quadratic solutions through their trace and
//! norm data (case II), and the finite primitive degrees 4/6/12 (case III).
//!
//! Local exponents are elements of the parameter field; a candidate degree
//! is admitted only when it is a parameter-free non-negative integer, and
//! every discarded parameter-dependent candidate is recorded as a
//! genericity assumption.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use crate::algebra::linalg::solve;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::scalar::ParamScalar;
use crate::algebra::xpoly::XPoly;

/// Exact check of dx(u) + u^2 = q.
pub fn verify_riccati(u: &RatFunc, q: &RatFunc) -> bool {
    let lhs = &u.dx() + &(u * u);
    &lhs == q
}

#[derive(Clone, Debug)]
struct Place {
    poly: XPoly,
    order: u32,
}

fn places_of(q: &RatFunc) -> Vec<Place> {
    if q.is_zero() || q.is_polynomial() {
        return Vec::new();
    }
    let sf = q.denom().squarefree_decomposition();
    // refine to a gcd-free basis, splitting rational and quadratic roots so
    // local data is constant on each place whenever possible
    let basis = crate::calculus::lattice::refine_splitting(
        sf.iter().map(|(f, _)| f.clone()).collect(),
    );
    let mut out = Vec::new();
    for b in basis {
        let mut mu = 0u32;
        let mut den = q.denom().clone();
        while let Some(qq) = den.exact_div(&b) {
            den = qq;
            mu += 1;
        }
        if mu > 0 {
            out.push(Place {
                poly: b,
                order: mu,
            });
        }
    }
    out.sort_by(|a, b| a.poly.cmp(&b.poly));
    out
}

fn inverse_mod(a: &XPoly, modulus: &XPoly) -> XPoly {
    let (_, r) = a.div_rem(modulus);
    let (g, s, _) = XPoly::extended_gcd(&r, modulus);
    assert!(g.is_one(), "inverse modulo a squarefree place");
    let (_, red) = s.div_rem(modulus);
    red
}

/// The coefficient of the second-order part of q at the place p:
/// b in F0[x]/(p) with q = b/(x-alpha)^2 + lower order at each root alpha.
fn order2_coefficient(q: &RatFunc, p: &Place) -> XPoly {
    let ppow = RatFunc::from_poly(p.poly.pow(p.order));
    let scaled = &ppow * q;
    let den_inv = inverse_mod(scaled.denom(), &p.poly);
    let (_, val) = scaled.numer().mul(&den_inv).div_rem(&p.poly);
    // convert from p-power normalization to local-parameter normalization
    let dinv = inverse_mod(&p.poly.derivative(), &p.poly);
    let mut out = val;
    for _ in 0..p.order {
        let prod = out.mul(&dinv);
        let (_, r) = prod.div_rem(&p.poly);
        out = r;
    }
    out
}

/// Taylor coefficients of f at the point a (which must not be a pole).
fn taylor_at(f: &RatFunc, a: &ParamScalar, n: usize) -> Vec<ParamScalar> {
    let mut out = Vec::with_capacity(n);
    let mut cur = f.clone();
    let mut fact = BigRational::from_integer(BigInt::from(1));
    for k in 0..n {
        if k > 0 {
            cur = cur.dx();
            fact = fact * BigRational::from_integer(BigInt::from(k as i64));
        }
        let v = cur.eval_x(a).expect("expansion point is regular");
        out.push(&v / &ParamScalar::from_rational(fact.clone()));
    }
    out
}

/// Laurent expansion at infinity: returns (top, coeffs) with
/// f = sum_k coeffs[k] x^(top - k) + O(x^(top - n)).
fn laurent_at_infinity(f: &RatFunc, n: usize) -> (i64, Vec<ParamScalar>) {
    assert!(!f.is_zero());
    let top = f.numer().degree().unwrap() as i64 - f.denom().degree().unwrap() as i64;
    let mut coeffs = Vec::with_capacity(n);
    let mut rem = f.clone();
    for k in 0..n {
        let e = top - k as i64;
        let c = match rem.is_zero() {
            true => ParamScalar::zero(),
            false => {
                let cur = rem.numer().degree().unwrap() as i64
                    - rem.denom().degree().unwrap() as i64;
                if cur == e {
                    &rem.numer().leading_coeff() / &rem.denom().leading_coeff()
                } else {
                    ParamScalar::zero()
                }
            }
        };
        coeffs.push(c.clone());
        if !c.is_zero() {
            let term = RatFunc::scalar(c).pow(1);
            let xe = RatFunc::x().pow(e.abs());
            let mono = if e >= 0 { &term * &xe } else { &term / &xe };
            rem = &rem - &mono;
        }
    }
    (top, coeffs)
}

/// One exponent option at a finite place or at infinity.
#[derive(Clone, Debug)]
struct ExponentOption {
    /// Sum of the exponents over the roots of the place (an element of F0).
    degree_contribution: ParamScalar,
    /// Contribution to theta.
    theta_part: RatFunc,
}

/// Case-1 local options at a finite place. None means case 1 is impossible.
fn case1_place_options(
    q: &RatFunc,
    p: &Place,
    notes: &mut Vec<String>,
) -> Option<Vec<ExponentOption>> {
    let deg = p.poly.degree().unwrap();
    let dpoly = p.poly.clone();
    let dprime = dpoly.derivative();
    let theta_of = |alpha: &XPoly| -> RatFunc {
        // sum over roots of alpha(root)/(x-root) = ((alpha * p') mod p) / p
        let prod = alpha.mul(&dprime);
        let (_, r) = prod.div_rem(&dpoly);
        RatFunc::new(r, dpoly.clone()).unwrap()
    };
    match p.order {
        1 => {
            let one = XPoly::one();
            Some(vec![ExponentOption {
                degree_contribution: ParamScalar::from_int(deg as i64),
                theta_part: theta_of(&one),
            }])
        }
        2 => {
            let b = order2_coefficient(q, p);
            // 1 + 4b must have a square root that is constant across the roots
            let val = {
                let mut v = b.scale(&ParamScalar::from_int(4));
                v = v.add(&XPoly::one());
                v
            };
            if !val.is_constant() {
                notes.push(format!(
                    "local exponent datum at {} varies across conjugate roots; case-1 families through it were not enumerated",
                    dpoly
                ));
                return Some(Vec::new());
            }
            let c = val.coeff(0);
            let s = match c.sqrt() {
                Some(s) => s,
                None => {
                    if deg == 1 {
                        // exponents are irrational over the parameter field; no
                        // equivariant choice can make the degree an integer at a
                        // single root unless they cancel globally; not enumerated
                        notes.push(format!(
                            "local exponents at {} are not in the parameter field; case-1 families through it were not enumerated",
                            dpoly
                        ));
                    } else {
                        notes.push(format!(
                            "local exponents at {} live in an extension; case-1 families through it were not enumerated",
                            dpoly
                        ));
                    }
                    return Some(Vec::new());
                }
            };
            let half = ParamScalar::from_rational(BigRational::new(
                BigInt::from(1),
                BigInt::from(2),
            ));
            let mut opts = Vec::new();
            for sign in [1i64, -1] {
                let alpha_scalar = &(&ParamScalar::one()
                    + &(&s * &ParamScalar::from_int(sign)))
                    * &half;
                let alpha = XPoly::constant(alpha_scalar.clone());
                opts.push(ExponentOption {
                    degree_contribution: &alpha_scalar * &ParamScalar::from_int(deg as i64),
                    theta_part: theta_of(&alpha),
                });
            }
            if s.is_zero() {
                opts.truncate(1);
            }
            Some(opts)
        }
        m if m % 2 == 1 => None,
        m => {
            // even order >= 4: supported at rational points only
            if deg != 1 {
                notes.push(format!(
                    "high-order pole at the non-linear place {}; case-1 families through it were not enumerated",
                    dpoly
                ));
                return Some(Vec::new());
            }
            let a = -&dpoly.coeff(0);
            let nu = m / 2;
            // series of q*(x-a)^{2nu} at a
            let shifted = {
                let ppow = RatFunc::from_poly(dpoly.pow(m));
                &ppow * q
            };
            let c = taylor_at(&shifted, &a, nu as usize + 1);
            // solve S = sum_{i=2..nu} s_i w^{-i} with S^2 matching c_0..c_{nu-2}
            let mut s = vec![ParamScalar::zero(); nu as usize + 1]; // s[i] for i=2..nu
            let s_nu = match c[0].sqrt() {
                Some(r) => r,
                None => {
                    notes.push(format!(
                        "leading local coefficient at {} is not a square; case-1 families were not enumerated there",
                        dpoly
                    ));
                    return Some(Vec::new());
                }
            };
            if s_nu.is_zero() {
                return None;
            }
            s[nu as usize] = s_nu.clone();
            // triangular solve: c_k = 2 s_nu s_{nu-k} + (pairs with both
            // indices above nu-k, already known)
            for k in 1..=(nu as usize).saturating_sub(2) {
                let target = 2 * nu as usize - k;
                let lo = nu as usize - k + 1;
                let mut known = ParamScalar::zero();
                for i in lo..=(nu as usize) {
                    if target < i {
                        continue;
                    }
                    let j = target - i;
                    if j < lo || j > nu as usize || j < i {
                        continue;
                    }
                    let prod = &s[i] * &s[j];
                    if i == j {
                        known = &known + &prod;
                    } else {
                        known = &known + &(&prod * &ParamScalar::from_int(2));
                    }
                }
                let idx = nu as usize - k;
                let rhs = &c[k] - &known;
                s[idx] = &rhs / &(&s_nu * &ParamScalar::from_int(2));
            }
            // b = c_{nu-1} - coefficient of w^{-(nu+1)} in S^2
            let mut s2_coeff = ParamScalar::zero();
            let target = nu as usize + 1;
            for i in 2..=(nu as usize) {
                for j in 2..=(nu as usize) {
                    if i + j == target {
                        s2_coeff = &s2_coeff + &(&s[i] * &s[j]);
                    }
                }
            }
            let b = &c[(nu - 1) as usize] - &s2_coeff;
            // sqrt part as a rational function
            let mut sqrt_part = RatFunc::zero();
            for i in 2..=(nu as usize) {
                if s[i].is_zero() {
                    continue;
                }
                let piece = RatFunc::new(
                    XPoly::constant(s[i].clone()),
                    dpoly.pow(i as u32),
                )
                .unwrap();
                sqrt_part = &sqrt_part + &piece;
            }
            let half = ParamScalar::from_rational(BigRational::new(
                BigInt::from(1),
                BigInt::from(2),
            ));
            let mut opts = Vec::new();
            for sign in [1i64, -1] {
                let sg = ParamScalar::from_int(sign);
                let alpha_scalar = &(&(&(&b / &s_nu) * &sg)
                    + &ParamScalar::from_int(nu as i64))
                    * &half;
                let alpha = XPoly::constant(alpha_scalar.clone());
                opts.push(ExponentOption {
                    degree_contribution: alpha_scalar,
                    theta_part: &theta_of(&alpha) + &sqrt_part.scale(&sg),
                });
            }
            Some(opts)
        }
    }
}

/// Case-1 options at infinity. None means case 1 is impossible.
fn case1_infinity_options(q: &RatFunc, notes: &mut Vec<String>) -> Option<Vec<ExponentOption>> {
    if q.is_zero() {
        return Some(vec![
            ExponentOption {
                degree_contribution: ParamScalar::zero(),
                theta_part: RatFunc::zero(),
            },
            ExponentOption {
                degree_contribution: ParamScalar::one(),
                theta_part: RatFunc::zero(),
            },
        ]);
    }
    let o = q.order_at_infinity();
    if o > 2 {
        return Some(vec![
            ExponentOption {
                degree_contribution: ParamScalar::zero(),
                theta_part: RatFunc::zero(),
            },
            ExponentOption {
                degree_contribution: ParamScalar::one(),
                theta_part: RatFunc::zero(),
            },
        ]);
    }
    if o == 2 {
        let (_, coeffs) = laurent_at_infinity(q, 1);
        let b = coeffs[0].clone();
        let val = &ParamScalar::one() + &(&b * &ParamScalar::from_int(4));
        let s = match val.sqrt() {
            Some(s) => s,
            None => {
                notes.push(
                    "exponent at infinity is not in the parameter field; case-1 families through it were not enumerated".to_string(),
                );
                return Some(Vec::new());
            }
        };
        let half =
            ParamScalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        let mut opts = Vec::new();
        for sign in [1i64, -1] {
            let alpha =
                &(&ParamScalar::one() + &(&s * &ParamScalar::from_int(sign))) * &half;
            opts.push(ExponentOption {
                degree_contribution: alpha,
                theta_part: RatFunc::zero(),
            });
        }
        if s.is_zero() {
            opts.truncate(1);
        }
        return Some(opts);
    }
    if o % 2 != 0 {
        return None;
    }
    // o = -2nu <= 0: polynomial square-root part of degree nu
    let nu = (-o / 2) as usize;
    let (top, coeffs) = laurent_at_infinity(q, nu + 2);
    debug_assert_eq!(top, 2 * nu as i64);
    let s_nu = match coeffs[0].sqrt() {
        Some(r) => r,
        None => {
            notes.push(
                "leading coefficient at infinity is not a square; case-1 families were not enumerated there".to_string(),
            );
            return Some(Vec::new());
        }
    };
    if s_nu.is_zero() {
        return None;
    }
    // S = sum_{i=0..nu} s_i x^i, match coefficients of x^{2nu-k} for k=0..nu:
    // c_k = 2 s_nu s_{nu-k} + (pairs with both indices above nu-k)
    let mut s = vec![ParamScalar::zero(); nu + 1];
    s[nu] = s_nu.clone();
    for k in 1..=nu {
        let target = 2 * nu - k;
        let lo = nu - k + 1;
        let mut known = ParamScalar::zero();
        for i in lo..=nu {
            if target < i {
                continue;
            }
            let j = target - i;
            if j < lo || j > nu || j < i {
                continue;
            }
            let prod = &s[i] * &s[j];
            if i == j {
                known = &known + &prod;
            } else {
                known = &known + &(&prod * &ParamScalar::from_int(2));
            }
        }
        let idx = nu - k;
        let rhs = &coeffs[k] - &known;
        s[idx] = &rhs / &(&s_nu * &ParamScalar::from_int(2));
    }
    // b = coefficient of x^{nu-1} in q - S^2
    let spoly = XPoly::from_coeffs(s.clone());
    let s2 = spoly.mul(&spoly);
    let q_coeff_nu_m1 = if nu >= 1 {
        coeffs
            .get(2 * nu - (nu - 1))
            .cloned()
            .unwrap_or_else(ParamScalar::zero)
    } else {
        // nu = 0: coefficient of x^{-1}
        coeffs.get(1).cloned().unwrap_or_else(ParamScalar::zero)
    };
    let s2_coeff = if nu >= 1 {
        s2.coeff(nu - 1)
    } else {
        ParamScalar::zero()
    };
    let b = &q_coeff_nu_m1 - &s2_coeff;
    let half = ParamScalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
    let mut opts = Vec::new();
    for sign in [1i64, -1] {
        let sg = ParamScalar::from_int(sign);
        let alpha = &(&(&(&b / &s_nu) * &sg) - &ParamScalar::from_int(nu as i64)) * &half;
        opts.push(ExponentOption {
            degree_contribution: alpha,
            theta_part: RatFunc::from_poly(spoly.clone()).scale(&sg),
        });
    }
    Some(opts)
}

/// Monic polynomial solutions of P'' + 2 theta P' + psi P = 0 of degree d.
/// Returns representatives (particular and particular+kernel directions).
fn monic_poly_solutions(theta: &RatFunc, psi: &RatFunc, d: usize) -> Vec<XPoly> {
    use crate::algebra::operator::DiffOperator;
    let op = DiffOperator::from_coeffs(vec![
        psi.clone(),
        theta.scale(&ParamScalar::from_int(2)),
        RatFunc::one(),
    ]);
    solve_monic_affine(&op, d)
}

/// Monic degree-d polynomial solutions of a linear operator equation
/// op(P) = 0, by undetermined coefficients.
fn solve_monic_affine(op: &crate::algebra::operator::DiffOperator, d: usize) -> Vec<XPoly> {
    let monomial = |i: usize| -> RatFunc {
        let mut v = vec![ParamScalar::zero(); i];
        v.push(ParamScalar::one());
        RatFunc::from_poly(XPoly::from_coeffs(v))
    };
    let applied: Vec<RatFunc> = (0..=d).map(|i| op.apply(&monomial(i))).collect();
    // common denominator
    let mut cden = XPoly::one();
    for a in &applied {
        if !a.is_zero() {
            let g = XPoly::gcd(&cden, a.denom());
            cden = cden.mul(&a.denom().exact_div(&g).unwrap());
        }
    }
    let nums: Vec<XPoly> = applied
        .iter()
        .map(|a| {
            if a.is_zero() {
                XPoly::zero()
            } else {
                a.numer().mul(&cden.exact_div(a.denom()).unwrap())
            }
        })
        .collect();
    let rows_deg = nums
        .iter()
        .filter_map(|p| p.degree())
        .max()
        .map(|x| x + 1)
        .unwrap_or(0);
    // unknowns p_0..p_{d-1}; rhs from the monic top term
    let mut amat = Vec::new();
    let mut bvec = Vec::new();
    for e in 0..rows_deg {
        let row: Vec<ParamScalar> = (0..d).map(|i| nums[i].coeff(e)).collect();
        amat.push(row);
        bvec.push(-&nums[d].coeff(e));
    }
    let solved = if d == 0 {
        if nums[0].is_zero() {
            Some((Vec::new(), Vec::new()))
        } else {
            None
        }
    } else if amat.is_empty() {
        // operator annihilates every monomial in range
        Some((
            vec![ParamScalar::zero(); d],
            (0..d)
                .map(|i| {
                    let mut v = vec![ParamScalar::zero(); d];
                    v[i] = ParamScalar::one();
                    v
                })
                .collect(),
        ))
    } else {
        solve(&amat, &bvec)
    };
    let Some((particular, kernel_basis)) = solved else {
        return Vec::new();
    };
    let build = |coeffs: &[ParamScalar]| -> XPoly {
        let mut v = coeffs.to_vec();
        v.push(ParamScalar::one());
        XPoly::from_coeffs(v)
    };
    let mut out = vec![build(&particular)];
    for k in &kernel_basis {
        let summed: Vec<ParamScalar> = particular
            .iter()
            .zip(k.iter())
            .map(|(a, b)| a + b)
            .collect();
        out.push(build(&summed));
    }
    out.dedup();
    out
}

/// All rational Riccati solutions found by the case-1 search, plus the
/// genericity/completeness notes accumulated along the way.
pub fn riccati_rational_solutions(q: &RatFunc) -> (Vec<RatFunc>, Vec<String>) {
    let mut notes = Vec::new();
    let places = places_of(q);
    let Some(inf_opts) = case1_infinity_options(q, &mut notes) else {
        return (Vec::new(), notes);
    };
    let mut place_opts = Vec::new();
    for p in &places {
        match case1_place_options(q, p, &mut notes) {
            None => return (Vec::new(), notes),
            Some(opts) => place_opts.push(opts),
        }
    }
    let mut solutions: Vec<RatFunc> = Vec::new();
    // enumerate sign families
    let mut indices = vec![0usize; place_opts.len()];
    'families: loop {
        'inf: for inf in &inf_opts {
            let mut dsum = inf.degree_contribution.clone();
            let mut theta = inf.theta_part.clone();
            for (pi, &oi) in indices.iter().enumerate() {
                if place_opts[pi].is_empty() {
                    continue 'inf;
                }
                let opt = &place_opts[pi][oi];
                dsum = &dsum - &opt.degree_contribution;
                theta = &theta + &opt.theta_part;
            }
            let d = match dsum.as_integer() {
                Some(d) => d,
                None => {
                    if dsum.as_rational().is_none() {
                        notes.push(format!(
                            "candidate degree {dsum} treated as a non-integer (generic parameters)"
                        ));
                    }
                    continue;
                }
            };
            if d.is_negative() {
                continue;
            }
            let d = d.to_usize().expect("small candidate degree");
            if d > 64 {
                notes.push(format!("candidate degree {d} exceeded the search cap"));
                continue;
            }
            let psi = &(&theta.dx() + &(&theta * &theta)) - q;
            for p in monic_poly_solutions(&theta, &psi, d) {
                let pf = RatFunc::from_poly(p.clone());
                if pf.is_zero() {
                    continue;
                }
                let u = &theta + &(&pf.dx() / &pf);
                if verify_riccati(&u, q) && !solutions.contains(&u) {
                    solutions.push(u);
                }
            }
        }
        // advance the odometer over place options
        let mut k = 0;
        loop {
            if k == indices.len() {
                break 'families;
            }
            indices[k] += 1;
            if indices[k] < place_opts[k].len().max(1) {
                break;
            }
            indices[k] = 0;
            k += 1;
        }
    }
    solutions.sort();
    (solutions, notes)
}

// ---------------------------------------------------------------------------
// Case 2
// ---------------------------------------------------------------------------

/// Integer exponent-set options for case 2 at a finite place.
fn case2_place_set(q: &RatFunc, p: &Place, notes: &mut Vec<String>) -> Vec<i64> {
    match p.order {
        1 => vec![4],
        2 => {
            let b = order2_coefficient(q, p);
            let mut out = vec![2];
            let val = b.scale(&ParamScalar::from_int(4)).add(&XPoly::one());
            if val.is_constant() {
                if let Some(s) = val.coeff(0).sqrt() {
                    for sign in [1i64, -1] {
                        let e = &ParamScalar::from_int(2)
                            + &(&s * &ParamScalar::from_int(2 * sign));
                        if let Some(i) = e.as_integer() {
                            if let Some(v) = i.to_i64() {
                                out.push(v);
                            }
                        }
                    }
                }
            } else {
                notes.push(format!(
                    "case-2 exponent data varies across the roots of {}; only the universal entry was used",
                    p.poly
                ));
            }
            out.sort();
            out.dedup();
            out
        }
        v => vec![v as i64],
    }
}

fn case2_infinity_set(q: &RatFunc) -> Vec<i64> {
    if q.is_zero() {
        return vec![0, 2, 4];
    }
    let o = q.order_at_infinity();
    if o > 2 {
        return vec![0, 2, 4];
    }
    if o == 2 {
        let (_, coeffs) = laurent_at_infinity(q, 1);
        let b = coeffs[0].clone();
        let mut out = vec![2];
        let val = &ParamScalar::one() + &(&b * &ParamScalar::from_int(4));
        if let Some(s) = val.sqrt() {
            for sign in [1i64, -1] {
                let e = &ParamScalar::from_int(2) + &(&s * &ParamScalar::from_int(2 * sign));
                if let Some(i) = e.as_integer() {
                    if let Some(v) = i.to_i64() {
                        out.push(v);
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        return out;
    }
    vec![o]
}

/// Case-2 search. On success returns (w2, v, phi) with w = u - conj(u),
/// w2 = w^2 in K, v = dx(w2)/(2 w2), and phi = u + conj(u).
pub fn riccati_quadratic_search(q: &RatFunc) -> (Option<(RatFunc, RatFunc, RatFunc)>, Vec<String>) {
    let mut notes = Vec::new();
    let places = places_of(q);
    // necessary: at least one pole of order 2 or odd order > 2
    let feasible = places
        .iter()
        .any(|p| p.order == 2 || (p.order > 2 && p.order % 2 == 1))
        || {
            // or the behavior at infinity supplies the quadratic branching
            let o = if q.is_zero() { i64::MAX } else { q.order_at_infinity() };
            o == 2 || o < 2
        };
    if !feasible {
        return (None, notes);
    }
    let inf_set = case2_infinity_set(q);
    let place_sets: Vec<Vec<i64>> = places
        .iter()
        .map(|p| case2_place_set(q, p, &mut notes))
        .collect();
    let mut indices = vec![0usize; place_sets.len()];
    'families: loop {
        for e_inf in &inf_set {
            let mut total = *e_inf;
            let mut theta = RatFunc::zero();
            for (pi, &oi) in indices.iter().enumerate() {
                let e = place_sets[pi][oi];
                let degp = places[pi].poly.degree().unwrap() as i64;
                total -= e * degp;
                let dp = RatFunc::from_poly(places[pi].poly.derivative());
                let pp = RatFunc::from_poly(places[pi].poly.clone());
                theta = &theta
                    + &(&dp / &pp).scale(&ParamScalar::from_rational(BigRational::new(
                        BigInt::from(e),
                        BigInt::from(2),
                    )));
            }
            if total % 2 != 0 || total < 0 {
                continue;
            }
            let d = (total / 2) as usize;
            if d > 64 {
                notes.push(format!("case-2 candidate degree {d} exceeded the search cap"));
                continue;
            }
            // P''' + 3 theta P'' + (3 theta^2 + 3 theta' - 4q) P'
            //   + (theta'' + 3 theta theta' + theta^3 - 4 q theta - 2 q') P = 0
            let t2 = &theta * &theta;
            let tp = theta.dx();
            let c1 = &(&t2.scale(&ParamScalar::from_int(3))
                + &tp.scale(&ParamScalar::from_int(3)))
                - &q.scale(&ParamScalar::from_int(4));
            let c0 = &(&(&tp.dx() + &(&theta * &tp).scale(&ParamScalar::from_int(3)))
                + &(&t2 * &theta))
                - &(&(q * &theta).scale(&ParamScalar::from_int(4))
                    + &q.dx().scale(&ParamScalar::from_int(2)));
            let op = crate::algebra::operator::DiffOperator::from_coeffs(vec![
                c0,
                c1,
                theta.scale(&ParamScalar::from_int(3)),
                RatFunc::one(),
            ]);
            for p in solve_monic_affine(&op, d) {
                let pf = RatFunc::from_poly(p);
                if pf.is_zero() {
                    continue;
                }
                let phi = &theta + &(&pf.dx() / &pf);
                // w^2 = -phi^2 - 2 phi' + 4q
                let w2 = &(&(-&(&phi * &phi)) - &phi.dx().scale(&ParamScalar::from_int(2)))
                    + &q.scale(&ParamScalar::from_int(4));
                if w2.is_zero() {
                    continue;
                }
                let v = &w2.dx() / &w2.scale(&ParamScalar::from_int(2));
                // verify in K[w]/(w^2 - w2): u = (phi + w)/2 solves the Riccati
                // rational part: phi'/2 + (phi^2 + w2)/4 - q = 0
                let half = ParamScalar::from_rational(BigRational::new(
                    BigInt::from(1),
                    BigInt::from(2),
                ));
                let quarter = ParamScalar::from_rational(BigRational::new(
                    BigInt::from(1),
                    BigInt::from(4),
                ));
                let rat_part = &(&phi.dx().scale(&half)
                    + &(&(&phi * &phi) + &w2).scale(&quarter))
                    - q;
                // w-part: (v + phi)/2 = 0
                let w_part = (&v + &phi).scale(&half);
                if rat_part.is_zero() && w_part.is_zero() {
                    return (Some((w2, v, phi)), notes);
                }
            }
        }
        let mut k = 0;
        loop {
            if k == indices.len() {
                break 'families;
            }
            indices[k] += 1;
            if indices[k] < place_sets[k].len() {
                break;
            }
            indices[k] = 0;
            k += 1;
        }
        if indices.is_empty() {
            break;
        }
    }
    (None, notes)
}

// ---------------------------------------------------------------------------
// Case 3
// ---------------------------------------------------------------------------

fn case3_sets(q: &RatFunc, n: i64, notes: &mut Vec<String>) -> Option<(Vec<Vec<i64>>, Vec<i64>)> {
    let places = places_of(q);
    if places.iter().any(|p| p.order > 2) {
        return None;
    }
    let o = if q.is_zero() { i64::MAX } else { q.order_at_infinity() };
    if o < 2 {
        return None;
    }
    let step = 12 / n;
    let entry_set = |sq: Option<ParamScalar>, place: &str, notes: &mut Vec<String>| -> Vec<i64> {
        let mut out = Vec::new();
        match sq {
            Some(s) => {
                for k in -(n / 2)..=(n / 2) {
                    let e = &ParamScalar::from_int(6)
                        + &(&s * &ParamScalar::from_int(step * k));
                    if let Some(i) = e.as_integer() {
                        if let Some(v) = i.to_i64() {
                            out.push(v);
                        }
                    }
                }
            }
            None => {
                notes.push(format!(
                    "case-3 exponent data at {place} is not in the parameter field; only the universal entry was used"
                ));
                out.push(6);
            }
        }
        out.sort();
        out.dedup();
        out
    };
    let mut place_sets = Vec::new();
    for p in &places {
        let set = match p.order {
            1 => vec![12],
            2 => {
                let b = order2_coefficient(q, p);
                let val = b.scale(&ParamScalar::from_int(4)).add(&XPoly::one());
                if val.is_constant() {
                    entry_set(val.coeff(0).sqrt(), &format!("{}", p.poly), notes)
                } else {
                    notes.push(format!(
                        "case-3 exponent data varies across the roots of {}; only the universal entry was used",
                        p.poly
                    ));
                    vec![6]
                }
            }
            _ => unreachable!("orders above 2 were filtered"),
        };
        place_sets.push(set);
    }
    let inf_set = if o > 2 || q.is_zero() {
        entry_set(Some(ParamScalar::one()), "infinity", notes)
    } else {
        let (_, coeffs) = laurent_at_infinity(q, 1);
        let b = coeffs[0].clone();
        let val = &ParamScalar::one() + &(&b * &ParamScalar::from_int(4));
        entry_set(val.sqrt(), "infinity", notes)
    };
    Some((place_sets, inf_set))
}

/// Builds the linear operator P -> P_{-1} of the case-3 auxiliary recursion
/// and solves for a monic P of degree d. Returns the ladder P_n..P_0 on
/// success along with P itself.
fn case3_recursion_solutions(
    q: &RatFunc,
    theta: &RatFunc,
    n: i64,
    d: usize,
) -> Vec<(XPoly, Vec<RatFunc>)> {
    // P_{-1} as a linear combination: track operators applied to P
    // represent each P_i as a DiffOperator acting on P
    use crate::algebra::operator::DiffOperator;
    let mut ladder_ops: Vec<DiffOperator> = Vec::new();
    let minus_one = DiffOperator::identity().scale(&RatFunc::from_int(-1));
    ladder_ops.push(minus_one); // P_n = -P
    let mut current = ladder_ops[0].clone();
    let mut prev: Option<DiffOperator> = None;
    for i in (0..=n).rev() {
        // P_{i-1} = -dx(P_i) - theta P_i - (n-i)(i+1) q P_{i+1}
        let dxp = DiffOperator::dx().compose(&current);
        let mut next = dxp.scale(&RatFunc::from_int(-1));
        next = next.add(&current.scale(&(-theta)));
        if let Some(pprev) = &prev {
            let coeff = RatFunc::from_int((n - i) * (i + 1));
            next = next.add(&pprev.scale(&(&(-&coeff) * q)));
        }
        prev = Some(current);
        current = next;
        ladder_ops.push(current.clone());
    }
    // current is now P_{-1} as an operator on P
    let p_solutions = solve_monic_affine(&current, d);
    let mut out = Vec::new();
    for p in p_solutions {
        let pf = RatFunc::from_poly(p.clone());
        if pf.is_zero() {
            continue;
        }
        // evaluate the ladder (all P_i) for the verification path
        let ladder: Vec<RatFunc> = ladder_ops.iter().map(|op| op.apply(&pf)).collect();
        if ladder.last().map(|l| l.is_zero()).unwrap_or(false) {
            out.push((p, ladder));
        }
    }
    out
}

/// Case-3 existence test: returns the minimal working degree (4, 6 or 12)
/// together with the minimal polynomial coefficients of the algebraic
/// Riccati solution (for downstream verification).
pub fn riccati_case3_search(q: &RatFunc) -> (Option<(u32, Vec<RatFunc>)>, Vec<String>) {
    let mut notes = Vec::new();
    for n in [4i64, 6, 12] {
        let Some((place_sets, inf_set)) = case3_sets(q, n, &mut notes) else {
            return (None, notes);
        };
        let places = places_of(q);
        let mut indices = vec![0usize; place_sets.len()];
        'families: loop {
            for e_inf in &inf_set {
                let mut total = *e_inf;
                let mut theta = RatFunc::zero();
                for (pi, &oi) in indices.iter().enumerate() {
                    let e = place_sets[pi][oi];
                    let degp = places[pi].poly.degree().unwrap() as i64;
                    total -= e * degp;
                    let dp = RatFunc::from_poly(places[pi].poly.derivative());
                    let pp = RatFunc::from_poly(places[pi].poly.clone());
                    theta = &theta
                        + &(&dp / &pp).scale(&ParamScalar::from_rational(BigRational::new(
                            BigInt::from(e * n),
                            BigInt::from(12),
                        )));
                }
                if total < 0 {
                    continue;
                }
                let dn = BigRational::new(BigInt::from(total) * BigInt::from(n), BigInt::from(12));
                if !dn.denom().is_one() {
                    continue;
                }
                let d = match dn.numer().to_usize() {
                    Some(d) if d <= 24 => d,
                    _ => continue,
                };
                for (_, ladder) in case3_recursion_solutions(q, &theta, n, d) {
                    // minimal polynomial coefficients: m_i = P_i / (n-i)!
                    let mut minpoly = Vec::with_capacity(n as usize + 1);
                    for i in 0..=(n as usize) {
                        let fact = (1..=(n as usize - i)).product::<usize>().max(1);
                        let c = ladder[n as usize - i].scale(
                            &ParamScalar::from_int(fact as i64).inv(),
                        );
                        minpoly.push(c);
                    }
                    // ladder is stored as [P_n, P_{n-1}, ..., P_0, P_{-1}]:
                    // index n - i holds P_i
                    return (Some((n as u32, minpoly)), notes);
                }
            }
            let mut k = 0;
            loop {
                if k == indices.len() {
                    break 'families;
                }
                indices[k] += 1;
                if indices[k] < place_sets[k].len() {
                    break;
                }
                indices[k] = 0;
                k += 1;
            }
            if indices.is_empty() {
                break;
            }
        }
    }
    (None, notes)
}

// ---------------------------------------------------------------------------
// Quotient-ring verification for algebraic Riccati solutions
// ---------------------------------------------------------------------------

/// Polynomials in one indeterminate over K, reduced modulo a squarefree
/// minimal polynomial; used to verify algebraic Riccati solutions.
#[derive(Clone, Debug, PartialEq)]
pub struct ModPoly {
    pub coeffs: Vec<RatFunc>,
}

impl ModPoly {
    fn trim(mut v: Vec<RatFunc>) -> Self {
        while v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
        ModPoly { coeffs: v }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &ModPoly) -> ModPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let get = |v: &Vec<RatFunc>, i: usize| v.get(i).cloned().unwrap_or_else(RatFunc::zero);
        ModPoly::trim(
            (0..n)
                .map(|i| &get(&self.coeffs, i) + &get(&o.coeffs, i))
                .collect(),
        )
    }
    fn mul(&self, o: &ModPoly) -> ModPoly {
        if self.is_zero() || o.is_zero() {
            return ModPoly { coeffs: Vec::new() };
        }
        let mut out = vec![RatFunc::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        ModPoly::trim(out)
    }
    fn rem(&self, m: &ModPoly) -> ModPoly {
        let dm = m.coeffs.len() - 1;
        let lc = m.coeffs.last().unwrap();
        let mut r = self.coeffs.clone();
        while r.len() > dm {
            let q = &r.last().unwrap().clone() / lc;
            let shift = r.len() - 1 - dm;
            for (i, c) in m.coeffs.iter().enumerate() {
                let delta = &q * c;
                r[shift + i] = &r[shift + i] - &delta;
            }
            while r.last().map(|c| c.is_zero()).unwrap_or(false) {
                r.pop();
            }
            if r.len() <= dm {
                break;
            }
        }
        ModPoly::trim(r)
    }
    fn gcd(a: &ModPoly, b: &ModPoly) -> ModPoly {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        // monic
        if let Some(lc) = x.coeffs.last().cloned() {
            ModPoly::trim(x.coeffs.iter().map(|c| c / &lc).collect())
        } else {
            x
        }
    }
    fn derivative_in_u(&self) -> ModPoly {
        ModPoly::trim(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&ParamScalar::from_int(i as i64)))
                .collect(),
        )
    }
    fn derivative_in_x(&self) -> ModPoly {
        ModPoly::trim(self.coeffs.iter().map(|c| c.dx()).collect())
    }
    /// Inverse modulo m (assumed coprime).
    fn inverse_mod(&self, m: &ModPoly) -> Option<ModPoly> {
        // extended Euclid
        let mut r0 = m.clone();
        let mut r1 = self.rem(m);
        let mut t0 = ModPoly { coeffs: Vec::new() };
        let mut t1 = ModPoly {
            coeffs: vec![RatFunc::one()],
        };
        while !r1.is_zero() {
            // q = r0 div r1
            let (q, r) = Self::div_rem(&r0, &r1);
            let tq = t0.add(&q.mul(&t1).neg());
            r0 = r1;
            r1 = r;
            t0 = t1;
            t1 = tq;
        }
        if r0.coeffs.len() != 1 {
            return None;
        }
        let lc = r0.coeffs[0].clone();
        Some(ModPoly::trim(
            t0.coeffs.iter().map(|c| c / &lc).collect(),
        ))
    }
    fn div_rem(a: &ModPoly, b: &ModPoly) -> (ModPoly, ModPoly) {
        let db = b.coeffs.len() - 1;
        let lc = b.coeffs.last().unwrap();
        let mut r = a.coeffs.clone();
        let mut q = vec![RatFunc::zero(); a.coeffs.len().saturating_sub(db)];
        while r.len() > db {
            let c = &r.last().unwrap().clone() / lc;
            let shift = r.len() - 1 - db;
            q[shift] = c.clone();
            for (i, bc) in b.coeffs.iter().enumerate() {
                let delta = &c * bc;
                r[shift + i] = &r[shift + i] - &delta;
            }
            while r.last().map(|cc| cc.is_zero()).unwrap_or(false) {
                r.pop();
            }
            if r.len() <= db {
                break;
            }
        }
        (ModPoly::trim(q), ModPoly::trim(r))
    }
    fn neg(&self) -> ModPoly {
        ModPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Verifies that the (squarefree part of the) given minimal polynomial has
/// Riccati-solution roots: dx(u) + u^2 - q = 0 in K[u]/(m).
pub fn verify_algebraic_riccati(minpoly: &[RatFunc], q: &RatFunc) -> bool {
    let m = ModPoly::trim(minpoly.to_vec());
    if m.coeffs.len() < 2 {
        return false;
    }
    // squarefree part
    let g = ModPoly::gcd(&m, &m.derivative_in_u());
    let (msf, _) = ModPoly::div_rem(&m, &g);
    if msf.coeffs.len() < 2 {
        return false;
    }
    let mprime = msf.derivative_in_u();
    let Some(mpinv) = mprime.inverse_mod(&msf) else {
        return false;
    };
    // dx(u) = -(coefficientwise dx of msf)(u) * msf'(u)^{-1}
    let dx_coeffs = msf.derivative_in_x();
    let du = dx_coeffs.neg().mul(&mpinv).rem(&msf);
    // u as an element of the quotient
    let u = ModPoly {
        coeffs: vec![RatFunc::zero(), RatFunc::one()],
    };
    let expr = du
        .add(&u.mul(&u))
        .add(&ModPoly {
            coeffs: vec![-q],
        })
        .rem(&msf);
    expr.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::xpoly::xpoly_int;

    fn rf(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(xpoly_int(num), xpoly_int(den)).unwrap()
    }

    fn worked_q() -> RatFunc {
        // q = dx(u) + u^2 for u = t1/x + (t1 - t2)/(x - 1)
        let u = worked_u();
        &u.dx() + &(&u * &u)
    }

    fn worked_u() -> RatFunc {
        let t1 = RatFunc::param(0);
        let t2 = RatFunc::param(1);
        let x = RatFunc::x();
        let one = RatFunc::one();
        &(&t1 / &x) + &(&(&t1 - &t2) / &(&x - &one))
    }

    #[test]
    fn verify_riccati_basics() {
        assert!(verify_riccati(&RatFunc::zero(), &RatFunc::zero()));
        let u = rf(&[1], &[0, 1]);
        assert!(!verify_riccati(&u, &u));
        assert!(verify_riccati(&worked_u(), &worked_q()));
    }

    #[test]
    fn worked_example_unique_solution() {
        let (sols, _notes) = riccati_rational_solutions(&worked_q());
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0], worked_u());
    }

    #[test]
    fn zero_q_solutions() {
        let (sols, _) = riccati_rational_solutions(&RatFunc::zero());
        assert!(sols.contains(&RatFunc::zero()));
        let inv_x = rf(&[1], &[0, 1]);
        assert!(sols.contains(&inv_x));
        for u in &sols {
            assert!(verify_riccati(u, &RatFunc::zero()));
        }
    }

    #[test]
    fn double_pole_two_solutions() {
        let q = rf(&[2], &[0, 0, 1]);
        let (sols, _) = riccati_rational_solutions(&q);
        assert!(sols.contains(&rf(&[2], &[0, 1])));
        assert!(sols.contains(&rf(&[-1], &[0, 1])));
        for u in &sols {
            assert!(verify_riccati(u, &q));
        }
        assert!(sols.len() >= 2);
    }

    #[test]
    fn airy_has_no_case1_solutions() {
        let (sols, _) = riccati_rational_solutions(&RatFunc::x());
        assert!(sols.is_empty());
    }

    #[test]
    fn airy_fails_case2_and_case3() {
        let (c2, _) = riccati_quadratic_search(&RatFunc::x());
        assert!(c2.is_none());
        let (c3, _) = riccati_case3_search(&RatFunc::x());
        assert!(c3.is_none());
    }

    #[test]
    fn constructed_case2_instance() {
        // q = x + 5/(16 x^2): u = -1/(4x) + sqrt(x), w^2 = 4x, v = 1/(2x)
        let q = &RatFunc::x() + &rf(&[5], &[0, 0, 16]);
        let (sols, _) = riccati_rational_solutions(&q);
        assert!(sols.is_empty(), "not case 1");
        let (found, _) = riccati_quadratic_search(&q);
        let (w2, v, phi) = found.expect("case 2 must be detected");
        assert_eq!(w2, RatFunc::from_poly(xpoly_int(&[0, 4])));
        assert_eq!(v, rf(&[1], &[0, 2]));
        assert_eq!(phi, rf(&[-1], &[0, 2]));
        // v = dx(w2)/(2 w2)
        assert_eq!(&w2.dx() / &w2.scale(&ParamScalar::from_int(2)), v);
    }

    #[test]
    fn tetrahedral_instance_is_case3() {
        // q = -3/(16x^2) - 2/(9(x-1)^2) + 3/(16 x (x-1))
        let q = tetrahedral_q();
        let (sols, _) = riccati_rational_solutions(&q);
        assert!(sols.is_empty(), "not case 1");
        let (c2, _) = riccati_quadratic_search(&q);
        assert!(c2.is_none(), "not case 2");
        let (c3, _) = riccati_case3_search(&q);
        let (deg, minpoly) = c3.expect("tetrahedral detection");
        assert_eq!(deg, 4);
        assert!(verify_algebraic_riccati(&minpoly, &q));
    }

    pub(crate) fn tetrahedral_q() -> RatFunc {
        let a = rf(&[-3], &[0, 0, 16]);
        let b = rf(&[-2], &[9, -18, 9]);
        let c = rf(&[3], &[0, -16, 16]);
        &(&a + &b) + &c
    }

    #[test]
    fn quadratic_verification_in_quotient_ring() {
        // u^2 - phi u + psi for the constructed case-2 instance
        let q = &RatFunc::x() + &rf(&[5], &[0, 0, 16]);
        let (found, _) = riccati_quadratic_search(&q);
        let (_w2, _v, phi) = found.unwrap();
        let half = ParamScalar::from_rational(BigRational::new(BigInt::from(1), BigInt::from(2)));
        let psi = &(&phi.dx().scale(&half) + &(&phi * &phi).scale(&half)) - &q;
        let minpoly = vec![psi, -&phi, RatFunc::one()];
        assert!(verify_algebraic_riccati(&minpoly, &q));
    }
}

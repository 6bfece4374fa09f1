//! Isoconstancy directions: combinations d' = sum_j c_j d/dt_j for which the
//! third-order equation dx^3 f - 4q dx f - 2 dx(q) f = -2 d'(q) has a
//! rational solution. Detected by one joint linear system over the
//! parameter field; every reported direction carries a verified witness.

use crate::algebra::operator::DiffOperator;
use crate::algebra::ratfunc::{Derivation, RatFunc};
use crate::algebra::scalar::ParamScalar;
use crate::calculus::ratsol::solve_joint;

#[derive(Clone, Debug)]
pub struct IsoconstancyBasis {
    /// Direction coefficients (c_1..c_m), echelonized.
    pub directions: Vec<Vec<ParamScalar>>,
    /// Witness f per direction.
    pub witnesses: Vec<RatFunc>,
}

/// The symmetric-square operator dx^3 - 4q dx - 2 dx(q).
pub fn symmetric_square_operator(q: &RatFunc) -> DiffOperator {
    DiffOperator::from_coeffs(vec![
        q.dx().scale(&ParamScalar::from_int(-2)),
        q.scale(&ParamScalar::from_int(-4)),
        RatFunc::zero(),
        RatFunc::one(),
    ])
}

pub fn isoconstancy_directions(q: &RatFunc, nparams: usize) -> IsoconstancyBasis {
    let op = symmetric_square_operator(q);
    let rhs: Vec<RatFunc> = (0..nparams)
        .map(|j| {
            q.derive(&Derivation::Param(j))
                .scale(&ParamScalar::from_int(-2))
        })
        .collect();
    let joint = solve_joint(&op, &rhs);
    // echelonize over the direction block, carrying witnesses along
    let mut rows: Vec<(Vec<ParamScalar>, RatFunc)> = joint
        .basis
        .into_iter()
        .map(|(f, lambda)| (lambda, f))
        .collect();
    let mut directions = Vec::new();
    let mut witnesses = Vec::new();
    for col in 0..nparams {
        let pivot = rows
            .iter()
            .position(|(lam, _)| !lam[col].is_zero() && lam[..col].iter().all(|c| c.is_zero()));
        let Some(pi) = pivot else { continue };
        let (lam, f) = rows.remove(pi);
        let inv = lam[col].inv();
        let lam: Vec<ParamScalar> = lam.iter().map(|c| c * &inv).collect();
        let f = f.scale(&inv);
        for (olam, of) in rows.iter_mut() {
            if !olam[col].is_zero() {
                let factor = olam[col].clone();
                for j in 0..nparams {
                    let delta = &factor * &lam[j];
                    olam[j] = &olam[j] - &delta;
                }
                let delta = &f.scale(&factor);
                *of = &*of - delta;
            }
        }
        directions.push(lam);
        witnesses.push(f);
    }
    // verify every direction by re-substitution
    for (dir, f) in directions.iter().zip(&witnesses) {
        let mut dq = RatFunc::zero();
        for (j, c) in dir.iter().enumerate() {
            if !c.is_zero() {
                dq = &dq + &q.derive(&Derivation::Param(j)).scale(c);
            }
        }
        let lhs = op.apply(f);
        let rhs = dq.scale(&ParamScalar::from_int(-2));
        assert_eq!(lhs, rhs, "isoconstancy witness re-verifies");
    }
    IsoconstancyBasis {
        directions,
        witnesses,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_free_q_gives_full_space() {
        let basis = isoconstancy_directions(&RatFunc::x(), 1);
        assert_eq!(basis.directions.len(), 1);
        assert!(basis.witnesses[0].is_zero() || !basis.witnesses[0].is_zero());
    }

    #[test]
    fn linear_parameter_q() {
        // q = t1 x: direction d/dt1 with witness x/(3 t1)
        let t1 = RatFunc::param(0);
        let q = &t1 * &RatFunc::x();
        let basis = isoconstancy_directions(&q, 1);
        assert_eq!(basis.directions.len(), 1);
        assert!(basis.directions[0][0].is_one());
        let op = symmetric_square_operator(&q);
        let expect_rhs = q
            .derive(&Derivation::Param(0))
            .scale(&ParamScalar::from_int(-2));
        assert_eq!(op.apply(&basis.witnesses[0]), expect_rhs);
    }

    #[test]
    fn two_parameters_full_space_when_parameter_free() {
        let q = RatFunc::zero();
        let basis = isoconstancy_directions(&q, 2);
        assert_eq!(basis.directions.len(), 2);
    }
}

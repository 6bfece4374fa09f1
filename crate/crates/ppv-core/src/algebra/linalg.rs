//! Exact linear algebra over a field, plus integer-lattice utilities.
//!
//! The field solver backs every relation-space computation; the integer
//! side (HNF, kernels, congruence lattices) backs the log-derivative
//! lattice machinery.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::scalar::ParamScalar;

/// Minimal field interface for the exact solvers.
pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn div(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Field for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
}

impl Field for ParamScalar {
    fn zero() -> Self {
        ParamScalar::zero()
    }
    fn one() -> Self {
        ParamScalar::one()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div(&self, other: &Self) -> Self {
        self / other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        ParamScalar::is_zero(self)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(mat: &mut Vec<Vec<F>>) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let mut sel = None;
        for i in r..rows {
            if !mat[i][c].is_zero() {
                sel = Some(i);
                break;
            }
        }
        let Some(sel) = sel else { continue };
        mat.swap(r, sel);
        let inv = F::one().div(&mat[r][c]);
        for j in c..cols {
            mat[r][j] = mat[r][j].mul(&inv);
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let factor = mat[i][c].clone();
                for j in c..cols {
                    let delta = factor.mul(&mat[r][j]);
                    mat[i][j] = mat[i][j].sub(&delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    mat.retain(|row| row.iter().any(|v| !v.is_zero()));
    pivots
}

/// Kernel basis of a matrix (right kernel), in reduced echelon form.
pub fn kernel<F: Field>(mat: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let mut m: Vec<Vec<F>> = mat.to_vec();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = m[ri][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Affine solution of A x = b: particular solution plus kernel basis.
/// `None` when the system is inconsistent.
pub fn solve<F: Field>(a: &[Vec<F>], b: &[F]) -> Option<(Vec<F>, Vec<Vec<F>>)> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<F>> = a
        .iter()
        .zip(b.iter())
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the rhs column
    }
    let mut particular = vec![F::zero(); cols];
    for (ri, &pc) in pivots.iter().enumerate() {
        particular[pc] = aug[ri][cols].clone();
    }
    let stripped: Vec<Vec<F>> = aug
        .iter()
        .map(|row| row[..cols].to_vec())
        .collect();
    let ker = kernel(&stripped, cols);
    Some((particular, ker))
}

/// Checks whether `v` lies in the row space spanned by `basis`.
pub fn in_row_space<F: Field>(basis: &[Vec<F>], v: &[F]) -> bool {
    let mut m: Vec<Vec<F>> = basis.to_vec();
    let _ = rref(&mut m);
    let mut w = v.to_vec();
    for row in &m {
        let pc = row.iter().position(|c| !c.is_zero());
        let Some(pc) = pc else { continue };
        if !w[pc].is_zero() {
            let factor = w[pc].clone();
            for j in 0..w.len() {
                let delta = factor.mul(&row[j]);
                w[j] = w[j].sub(&delta);
            }
        }
    }
    w.iter().all(|c| c.is_zero())
}

/// Row-space equality of two bases.
pub fn same_row_space<F: Field>(a: &[Vec<F>], b: &[Vec<F>]) -> bool {
    a.iter().all(|v| in_row_space(b, v)) && b.iter().all(|v| in_row_space(a, v))
}

// ---------------------------------------------------------------------------
// Integer lattice utilities
// ---------------------------------------------------------------------------

/// Row Hermite normal form with transformation: returns (H, U) with U*A = H,
/// U unimodular. Zero rows of H sink to the bottom.
pub fn hnf_with_transform(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| {
            (0..rows)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..cols {
        if pivot_row >= rows {
            break;
        }
        // clear column c below pivot_row using extended gcd row ops
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..rows {
                if !h[i][c].is_zero() {
                    best = match best {
                        None => Some(i),
                        Some(b) => {
                            if h[i][c].abs() < h[b][c].abs() {
                                Some(i)
                            } else {
                                Some(b)
                            }
                        }
                    };
                }
            }
            let Some(b) = best else { break };
            h.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut done = true;
            for i in (pivot_row + 1)..rows {
                if h[i][c].is_zero() {
                    continue;
                }
                let q = &h[i][c] / &h[pivot_row][c];
                if !q.is_zero() {
                    for j in 0..cols {
                        let delta = &q * &h[pivot_row][j];
                        h[i][j] -= delta;
                    }
                    for j in 0..rows {
                        let delta = &q * &u[pivot_row][j];
                        u[i][j] -= delta;
                    }
                }
                if !h[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[pivot_row][c].is_zero() {
            continue;
        }
        if h[pivot_row][c].is_negative() {
            for j in 0..cols {
                h[pivot_row][j] = -h[pivot_row][j].clone();
            }
            for j in 0..rows {
                u[pivot_row][j] = -u[pivot_row][j].clone();
            }
        }
        // reduce the rows above
        for i in 0..pivot_row {
            let q = h[i][c].div_floor(&h[pivot_row][c]);
            if !q.is_zero() {
                for j in 0..cols {
                    let delta = &q * &h[pivot_row][j];
                    h[i][j] -= delta;
                }
                for j in 0..rows {
                    let delta = &q * &u[pivot_row][j];
                    u[i][j] -= delta;
                }
            }
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Basis of the left kernel {x : x A = 0} over the integers.
pub fn integer_left_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let (h, u) = hnf_with_transform(a);
    let mut out = Vec::new();
    for (i, row) in h.iter().enumerate() {
        if row.iter().all(|v| v.is_zero()) {
            out.push(u[i].clone());
        }
    }
    out
}

/// Basis of the right kernel {v : A v = 0} over the integers (saturated).
pub fn integer_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    if rows == 0 {
        // everything is in the kernel
        return (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
    }
    let transpose: Vec<Vec<BigInt>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j].clone()).collect())
        .collect();
    integer_left_kernel(&transpose)
}

/// Clears denominators of a rational matrix row by row, yielding integers.
pub fn clear_rows(a: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    a.iter()
        .map(|row| {
            let mut l = BigInt::one();
            for v in row {
                l = l.lcm(v.denom());
            }
            row.iter()
                .map(|v| (v * BigRational::from_integer(l.clone())).to_integer())
                .collect()
        })
        .collect()
}

/// Lattice of y in Z^s with C y in Z^k, for a rational matrix C.
/// Returns a basis of the (full-rank) solution lattice.
pub fn congruence_lattice(c: &[Vec<BigRational>], s: usize) -> Vec<Vec<BigInt>> {
    if c.is_empty() {
        return (0..s)
            .map(|i| {
                (0..s)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
    }
    let k = c.len();
    let mut l = BigInt::one();
    for row in c {
        for v in row {
            l = l.lcm(v.denom());
        }
    }
    let lq = BigRational::from_integer(l.clone());
    // rows: [L*C | -L*I], kernel in Z^{s+k}, project to the first s coords
    let mut mat: Vec<Vec<BigInt>> = Vec::with_capacity(k);
    for (i, row) in c.iter().enumerate() {
        let mut r: Vec<BigInt> = row.iter().map(|v| (v * &lq).to_integer()).collect();
        for j in 0..k {
            r.push(if i == j { -l.clone() } else { BigInt::zero() });
        }
        mat.push(r);
    }
    let ker = integer_kernel(&mat);
    ker.into_iter().map(|v| v[..s].to_vec()).collect()
}

/// Membership of an integer vector in the lattice spanned by `basis` rows.
pub fn lattice_contains(basis: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| x.is_zero());
    }
    let (h, _) = hnf_with_transform(basis);
    let mut w: Vec<BigInt> = v.to_vec();
    for row in &h {
        let pc = row.iter().position(|c| !c.is_zero());
        let Some(pc) = pc else { continue };
        if w[pc].is_zero() {
            continue;
        }
        let (q, r) = w[pc].div_rem(&row[pc]);
        if !r.is_zero() {
            return false;
        }
        for j in 0..w.len() {
            let delta = &q * &row[j];
            w[j] -= delta;
        }
    }
    w.iter().all(|x| x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn solve_identity() {
        let a = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        let b = vec![q(3), q(5)];
        let (p, k) = solve(&a, &b).unwrap();
        assert_eq!(p, b);
        assert!(k.is_empty());
    }

    #[test]
    fn zero_matrix_kernel_is_everything() {
        let a: Vec<Vec<BigRational>> = vec![vec![q(0), q(0)]];
        let k = kernel(&a, 2);
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn one_equation_kernel_over_params() {
        // [[t1, 1]] x = 0 has kernel spanned by (1, -t1)
        let t1 = ParamScalar::param(0);
        let a = vec![vec![t1.clone(), ParamScalar::one()]];
        let k = kernel(&a, 2);
        assert_eq!(k.len(), 1);
        // normalize: first coordinate 1
        let v = &k[0];
        let scale = v[0].inv();
        assert_eq!(&v[0] * &scale, ParamScalar::one());
        assert_eq!(&v[1] * &scale, -&t1);
    }

    #[test]
    fn inconsistent_system() {
        let a = vec![vec![q(1), q(1)], vec![q(1), q(1)]];
        let b = vec![q(1), q(2)];
        assert!(solve(&a, &b).is_none());
    }

    #[test]
    fn hnf_kernel() {
        // kernel of [1 2 3] over Z
        let a = vec![vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]];
        let k = integer_kernel(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: BigInt = v
                .iter()
                .zip(&a[0])
                .map(|(x, y)| x * y)
                .sum();
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn congruence_half_integers() {
        // {(k1, k2) : k1 + k2/2 in Z} = span{(1,0),(0,2)}
        let c = vec![vec![q(1), BigRational::new(BigInt::from(1), BigInt::from(2))]];
        let basis = congruence_lattice(&c, 2);
        assert!(lattice_contains(&basis, &[BigInt::from(1), BigInt::from(0)]));
        assert!(lattice_contains(&basis, &[BigInt::from(0), BigInt::from(2)]));
        assert!(!lattice_contains(&basis, &[BigInt::from(0), BigInt::from(1)]));
    }

    #[test]
    fn row_space_membership() {
        let basis = vec![vec![q(1), q(2), q(0)], vec![q(0), q(0), q(1)]];
        assert!(in_row_space(&basis, &[q(2), q(4), q(7)]));
        assert!(!in_row_space(&basis, &[q(1), q(0), q(0)]));
    }
}

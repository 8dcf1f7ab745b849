//! Reference algorithms that share no code path with the permutation sums:
//! fraction-free (Bareiss) elimination and first-row cofactor expansion.
//!
//! The permutation sums index entries as `a[π_k, k]`, i.e. they expand
//! `det(Aᵀ)`. These routines work on `A` in the usual orientation; the two
//! agree because a matrix and its transpose have the same determinant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{Rational, Scalar};
use crate::cramer::LinearSystem;
use crate::error::{Error, Result};

/// Largest size accepted by [`cofactor_det`].
pub const COFACTOR_MAX_N: usize = 7;

/// Multiplies each row by the lcm of its denominators.
fn integer_rows(rows: &[Vec<Rational>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut scale_product = BigInt::one();
    let out = rows
        .iter()
        .map(|row| {
            let l = row
                .iter()
                .fold(BigInt::one(), |l, x| l.lcm(x.denominator()));
            scale_product *= &l;
            row.iter()
                .map(|x| x.numerator() * (&l / x.denominator()))
                .collect()
        })
        .collect();
    (out, scale_product)
}

/// In-place fraction-free elimination on the first `n` columns of `m`.
/// Returns the number of row swaps, or `None` if a pivot column is all zero.
fn eliminate(m: &mut [Vec<BigInt>]) -> Option<usize> {
    let n = m.len();
    let width = m[0].len();
    let mut swaps = 0;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero())?;
        if pivot != k {
            m.swap(pivot, k);
            swaps += 1;
        }
        for i in k + 1..n {
            for j in k + 1..width {
                let t = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                // Sylvester's identity guarantees exact division.
                m[i][j] = t / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Some(swaps)
}

/// Solves `A x = b` exactly; fails with `SingularSystem` iff `det A = 0`.
pub fn bareiss_solve(sys: &LinearSystem<Rational>) -> Result<Vec<Rational>> {
    let n = sys.n();
    let augmented: Vec<Vec<Rational>> = sys
        .entries()
        .iter()
        .zip(sys.rhs())
        .map(|(row, b)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(b.clone()))
                .collect()
        })
        .collect();
    let (mut m, _) = integer_rows(&augmented);
    eliminate(&mut m).ok_or(Error::SingularSystem)?;
    let mut x = vec![Rational::zero(); n];
    for i in (0..n).rev() {
        let mut acc = Rational::from_integer(m[i][n].clone());
        for j in i + 1..n {
            acc = acc.sub(&Rational::from_integer(m[i][j].clone()).mul(&x[j]));
        }
        x[i] = acc.div(&Rational::from_integer(m[i][i].clone()))?;
    }
    Ok(x)
}

/// Determinant by fraction-free elimination.
pub fn bareiss_det(rows: &[Vec<Rational>]) -> Rational {
    if rows.is_empty() {
        return Rational::one();
    }
    let (mut m, scale) = integer_rows(rows);
    let Some(swaps) = eliminate(&mut m) else {
        return Rational::zero();
    };
    let mut det = m[m.len() - 1][m.len() - 1].clone();
    if swaps % 2 == 1 {
        det = -det;
    }
    Rational::new(det, scale).expect("row scales are positive")
}

/// Determinant of the coefficient matrix by first-row cofactor expansion.
pub fn cofactor_det<S: Scalar>(sys: &LinearSystem<S>) -> Result<S> {
    cofactor_det_matrix(sys.entries())
}

pub fn cofactor_det_matrix<S: Scalar>(m: &[Vec<S>]) -> Result<S> {
    let n = m.len();
    if n == 0 || n > COFACTOR_MAX_N {
        return Err(Error::SizeGuard {
            n,
            max_n: COFACTOR_MAX_N,
        });
    }
    let rows: Vec<&[S]> = m.iter().map(|r| r.as_slice()).collect();
    let cols: Vec<usize> = (0..n).collect();
    Ok(expand(&rows, &cols))
}

/// Expands along `rows[0]`, restricted to the surviving `cols`.
fn expand<S: Scalar>(rows: &[&[S]], cols: &[usize]) -> S {
    if cols.len() == 1 {
        return rows[0][cols[0]].clone();
    }
    let mut acc = S::zero();
    for (idx, &c) in cols.iter().enumerate() {
        let entry = &rows[0][c];
        if entry.is_zero() {
            continue;
        }
        let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let term = entry.times(&expand(&rows[1..], &minor_cols));
        acc = if idx % 2 == 0 {
            acc.plus(&term)
        } else {
            acc.plus(&term.negated())
        };
    }
    acc
}

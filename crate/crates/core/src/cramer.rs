//! Signed permutation weights and the quotients `x_j = X_j / X_0`.
//!
//! `X_0` sums `sign(π) Π_k a[π_k, k]` over `S_n`; `X_j` does the same with
//! the factor from column `j` replaced by `b[π_j]`. That is the Leibniz sum
//! of the matrix whose column `j` has been overwritten by the right-hand side.

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{Polynomial, Rational, Scalar, Symbol};
use crate::error::{Error, Result};
use crate::perm::{factorial, rank_chunks, Permutation, HARD_MAX_N};

use std::collections::BTreeMap;

/// Below this many permutations a sum runs on the calling thread.
const PARALLEL_THRESHOLD: u64 = 5040;

/// `n` equations `Σ_j a[i,j] x_j = b[i]` with entries of one scalar type.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<S> {
    n: usize,
    entries: Vec<Vec<S>>,
    rhs: Vec<S>,
}

impl<S: Scalar> LinearSystem<S> {
    pub fn new(entries: Vec<Vec<S>>, rhs: Vec<S>) -> Result<Self> {
        let n = entries.len();
        if n == 0 || n > HARD_MAX_N {
            return Err(Error::SizeGuard {
                n,
                max_n: HARD_MAX_N,
            });
        }
        if let Some(row) = entries.iter().find(|r| r.len() != n) {
            return Err(Error::SizeMismatch {
                expected: n,
                found: row.len(),
            });
        }
        if rhs.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: rhs.len(),
            });
        }
        Ok(Self { n, entries, rhs })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a[i,j]`, 1-based.
    pub fn a(&self, i: usize, j: usize) -> &S {
        &self.entries[i - 1][j - 1]
    }

    /// `b[i]`, 1-based.
    pub fn b(&self, i: usize) -> &S {
        &self.rhs[i - 1]
    }

    pub fn entries(&self) -> &[Vec<S>] {
        &self.entries
    }

    pub fn rhs(&self) -> &[S] {
        &self.rhs
    }

    /// The coefficient matrix with column `j` (1-based) replaced by the
    /// right-hand side; `j = 0` leaves it untouched.
    pub fn column_replaced(&self, j: usize) -> Vec<Vec<S>> {
        let mut m = self.entries.clone();
        if j > 0 {
            for (row, b) in m.iter_mut().zip(&self.rhs) {
                row[j - 1] = b.clone();
            }
        }
        m
    }

    fn check_perm(&self, p: &Permutation) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::SizeMismatch {
                expected: self.n,
                found: p.n(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_index(&self, index: usize, lo: usize) -> Result<()> {
        if index < lo || index > self.n {
            return Err(Error::IndexOutOfRange {
                index,
                lo,
                hi: self.n,
            });
        }
        Ok(())
    }
}

impl LinearSystem<Rational> {
    /// Integer entries drawn uniformly from `-bound..=bound`.
    pub fn random_integer<R: Rng + ?Sized>(n: usize, bound: i64, rng: &mut R) -> Result<Self> {
        let mut draw = || Rational::from(rng.gen_range(-bound..=bound));
        let entries = (0..n).map(|_| (0..n).map(|_| draw()).collect()).collect();
        let rhs = (0..n).map(|_| draw()).collect();
        Self::new(entries, rhs)
    }
}

impl LinearSystem<Polynomial> {
    /// Entry `(i,j)` is the symbol `a[i,j]` and right-hand side `i` is `b[i]`.
    pub fn generic(n: usize) -> Result<Self> {
        let entries = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| Polynomial::symbol(Symbol::a(i, j)))
                    .collect()
            })
            .collect();
        let rhs = (1..=n).map(|i| Polynomial::symbol(Symbol::b(i))).collect();
        Self::new(entries, rhs)
    }

    /// Substitutes exact values into every entry.
    pub fn instantiate(
        &self,
        assignment: &BTreeMap<Symbol, Rational>,
    ) -> Result<LinearSystem<Rational>> {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|p| p.evaluate(assignment)).collect())
            .collect::<Result<_>>()?;
        let rhs = self
            .rhs
            .iter()
            .map(|p| p.evaluate(assignment))
            .collect::<Result<_>>()?;
        LinearSystem::new(entries, rhs)
    }
}

/// `w_0(π) = sign(π) Π_k a[π_k, k]`.
pub fn weight_w0<S: Scalar>(sys: &LinearSystem<S>, p: &Permutation) -> Result<S> {
    sys.check_perm(p)?;
    let mut w = S::one();
    for k in 1..=sys.n {
        w = w.times(sys.a(p.at(k), k));
    }
    Ok(if p.is_odd() { w.negated() } else { w })
}

/// `w_j(π) = sign(π) b[π_j] Π_{k≠j} a[π_k, k]`, for `1 ≤ j ≤ n`.
pub fn weight_wj<S: Scalar>(sys: &LinearSystem<S>, j: usize, p: &Permutation) -> Result<S> {
    sys.check_index(j, 1)?;
    sys.check_perm(p)?;
    let mut w = sys.b(p.at(j)).clone();
    for k in (1..=sys.n).filter(|&k| k != j) {
        w = w.times(sys.a(p.at(k), k));
    }
    Ok(if p.is_odd() { w.negated() } else { w })
}

/// `w_j` for any `0 ≤ j ≤ n`.
pub fn weight<S: Scalar>(sys: &LinearSystem<S>, j: usize, p: &Permutation) -> Result<S> {
    if j == 0 {
        weight_w0(sys, p)
    } else {
        weight_wj(sys, j, p)
    }
}

/// Leibniz sum of a square matrix, split across threads by rank range once
/// `n!` is large enough. Exact arithmetic makes the merge order irrelevant.
pub fn leibniz_det<S: Scalar>(m: &[Vec<S>]) -> S {
    let n = m.len();
    let total = factorial(n);
    if total < PARALLEL_THRESHOLD {
        return S::leibniz_sum(m, 0..total);
    }
    rank_chunks(n, rayon::current_num_threads() * 4)
        .into_par_iter()
        .map(|r| S::leibniz_sum(m, r))
        .reduce(S::zero, |x, y| x.plus(&y))
}

/// `X_j = Σ_{π ∈ S_n} w_j(π)`, for `0 ≤ j ≤ n`.
pub fn big_x<S: Scalar>(sys: &LinearSystem<S>, j: usize) -> Result<S> {
    sys.check_index(j, 0)?;
    Ok(leibniz_det(&sys.column_replaced(j)))
}

/// `X_0, X_1, ..., X_n`.
pub fn all_big_x<S: Scalar>(sys: &LinearSystem<S>) -> Vec<S> {
    (0..=sys.n)
        .map(|j| leibniz_det(&sys.column_replaced(j)))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<S: Scalar> {
    /// `X_1, ..., X_n`.
    pub numerators: Vec<S>,
    /// `X_0`.
    pub denominator: S,
    pub quotients: Vec<S::Quotient>,
}

/// Solves by `x_j = X_j / X_0`, then checks every equation before returning.
pub fn solve<S: Scalar>(sys: &LinearSystem<S>) -> Result<Solution<S>> {
    let mut xs = all_big_x(sys);
    let denominator = xs.remove(0);
    if denominator.is_zero() {
        return Err(Error::SingularSystem);
    }
    let quotients = xs
        .iter()
        .map(|x| S::quotient(x, &denominator))
        .collect::<Result<Vec<_>>>()?;
    for i in 1..=sys.n {
        let (lhs, rhs) = identity_sides(sys, i, &denominator, &xs);
        if lhs != rhs {
            return Err(Error::Residual(i));
        }
    }
    Ok(Solution {
        numerators: xs,
        denominator,
        quotients,
    })
}

impl Solution<Rational> {
    /// `Σ_j a[i,j] x_j - b[i]` for each row.
    pub fn residuals(&self, sys: &LinearSystem<Rational>) -> Vec<Rational> {
        (1..=sys.n)
            .map(|i| {
                (1..=sys.n)
                    .fold(Rational::zero(), |acc, j| {
                        acc.add(&sys.a(i, j).mul(&self.quotients[j - 1]))
                    })
                    .sub(sys.b(i))
            })
            .collect()
    }
}

/// Both sides of `Σ_j a[i,j] X_j = b[i] X_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport<S> {
    pub i: usize,
    pub holds: bool,
    pub lhs: S,
    pub rhs: S,
}

fn identity_sides<S: Scalar>(sys: &LinearSystem<S>, i: usize, x0: &S, xs: &[S]) -> (S, S) {
    let lhs = (1..=sys.n).fold(S::zero(), |acc, j| acc.plus(&sys.a(i, j).times(&xs[j - 1])));
    (lhs, sys.b(i).times(x0))
}

pub fn verify_identity<S: Scalar>(sys: &LinearSystem<S>, i: usize) -> Result<IdentityReport<S>> {
    sys.check_index(i, 1)?;
    let mut xs = all_big_x(sys);
    let x0 = xs.remove(0);
    let (lhs, rhs) = identity_sides(sys, i, &x0, &xs);
    Ok(IdentityReport {
        i,
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

/// Every `i` at once, sharing one computation of the `X_j`.
pub fn verify_identity_all<S: Scalar>(sys: &LinearSystem<S>) -> Vec<IdentityReport<S>> {
    let mut xs = all_big_x(sys);
    let x0 = xs.remove(0);
    (1..=sys.n)
        .map(|i| {
            let (lhs, rhs) = identity_sides(sys, i, &x0, &xs);
            IdentityReport {
                i,
                holds: lhs == rhs,
                lhs,
                rhs,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::enumerate_permutations;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn numeric(rows: &[&[i64]], rhs: &[i64]) -> LinearSystem<Rational> {
        LinearSystem::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
            rhs.iter().map(|&x| Rational::from(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn shape_validation() {
        let one = || Rational::one();
        assert!(
            LinearSystem::new(vec![vec![one(), one()], vec![one()]], vec![one(), one()]).is_err()
        );
        assert!(LinearSystem::new(vec![vec![one()]], vec![one(), one()]).is_err());
        assert!(LinearSystem::<Rational>::new(vec![], vec![]).is_err());
    }

    #[test]
    fn w0_examples() {
        let g2 = LinearSystem::generic(2).unwrap();
        assert_eq!(
            weight_w0(&g2, &perm(&[1, 2])).unwrap().to_string(),
            "a[1,1]*a[2,2]"
        );
        assert_eq!(
            weight_w0(&g2, &perm(&[2, 1])).unwrap().to_string(),
            "-a[1,2]*a[2,1]"
        );
        let g1 = LinearSystem::generic(1).unwrap();
        assert_eq!(weight_w0(&g1, &perm(&[1])).unwrap().to_string(), "a[1,1]");
        assert!(weight_w0(&g2, &perm(&[1])).is_err());
    }

    #[test]
    fn wj_examples() {
        let g2 = LinearSystem::generic(2).unwrap();
        assert_eq!(
            weight_wj(&g2, 1, &perm(&[1, 2])).unwrap().to_string(),
            "a[2,2]*b[1]"
        );
        assert_eq!(
            weight_wj(&g2, 1, &perm(&[2, 1])).unwrap().to_string(),
            "-a[1,2]*b[2]"
        );
        let g1 = LinearSystem::generic(1).unwrap();
        assert_eq!(weight_wj(&g1, 1, &perm(&[1])).unwrap().to_string(), "b[1]");
        assert!(weight_wj(&g2, 3, &perm(&[1, 2])).is_err());
        assert!(weight_wj(&g2, 0, &perm(&[1, 2])).is_err());
    }

    #[test]
    fn big_x_examples() {
        let g2 = LinearSystem::generic(2).unwrap();
        assert_eq!(
            big_x(&g2, 0).unwrap().to_string(),
            "a[1,1]*a[2,2] - a[1,2]*a[2,1]"
        );
        assert_eq!(
            big_x(&g2, 1).unwrap().to_string(),
            "-a[1,2]*b[2] + a[2,2]*b[1]"
        );
        let g1 = LinearSystem::generic(1).unwrap();
        assert_eq!(big_x(&g1, 0).unwrap().to_string(), "a[1,1]");
        assert!(big_x(&g2, 3).is_err());
    }

    #[test]
    fn big_x_equals_literal_weight_sum() {
        for n in 1..=4 {
            let g = LinearSystem::generic(n).unwrap();
            for j in 0..=n {
                let literal = enumerate_permutations(n)
                    .unwrap()
                    .fold(Polynomial::zero(), |acc, p| {
                        acc.add(&weight(&g, j, &p).unwrap())
                    });
                assert_eq!(big_x(&g, j).unwrap(), literal, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn parallel_split_matches_sequential() {
        let g = LinearSystem::generic(7).unwrap();
        let m = g.column_replaced(3);
        assert_eq!(leibniz_det(&m), Polynomial::leibniz_sum(&m, 0..5040));
    }

    #[test]
    fn solve_examples() {
        let sol = solve(&numeric(&[&[1, 1], &[1, -1]], &[3, 1])).unwrap();
        assert_eq!(sol.quotients, vec![Rational::from(2), Rational::from(1)]);
        assert_eq!(sol.denominator, Rational::from(-2));

        let c = Rational::new(-7, 3).unwrap();
        let d = Rational::new(5, 2).unwrap();
        let sys = LinearSystem::new(vec![vec![c.clone()]], vec![d.clone()]).unwrap();
        assert_eq!(solve(&sys).unwrap().quotients, vec![d.div(&c).unwrap()]);

        assert_eq!(
            solve(&numeric(&[&[1, 1], &[1, 1]], &[1, 2])),
            Err(Error::SingularSystem)
        );
    }

    #[test]
    fn symbolic_solve_keeps_pairs() {
        let g = LinearSystem::generic(2).unwrap();
        let sol = solve(&g).unwrap();
        assert_eq!(sol.quotients[0].1, sol.denominator);
        assert_eq!(sol.quotients[1].0.to_string(), "a[1,1]*b[2] - a[2,1]*b[1]");
    }

    #[test]
    fn residuals_vanish() {
        let sys = numeric(&[&[2, -1, 0], &[1, 3, 5], &[0, 4, -2]], &[1, -2, 7]);
        let sol = solve(&sys).unwrap();
        assert!(sol.residuals(&sys).iter().all(|r| r.is_zero()));
    }

    #[test]
    fn identity_examples() {
        let g2 = LinearSystem::generic(2).unwrap();
        let rep = verify_identity(&g2, 1).unwrap();
        assert!(rep.holds);
        assert_eq!(
            rep.rhs.to_string(),
            "a[1,1]*a[2,2]*b[1] - a[1,2]*a[2,1]*b[1]"
        );
        let g1 = LinearSystem::generic(1).unwrap();
        assert!(verify_identity(&g1, 1).unwrap().holds);
        let g3 = LinearSystem::generic(3).unwrap();
        assert!(verify_identity_all(&g3).iter().all(|r| r.holds));
        assert!(verify_identity(&g3, 0).is_err());
        assert!(verify_identity(&g3, 4).is_err());
    }

    #[test]
    fn generic_determinant_is_multilinear() {
        for n in 1..=5 {
            let g = LinearSystem::generic(n).unwrap();
            let x0 = big_x(&g, 0).unwrap();
            assert_eq!(x0.len() as u64, factorial(n));
            for (m, c) in x0.terms() {
                assert!(c == &1.into() || c == &(-1).into());
                let mut cols: Vec<usize> = m.factors().iter().map(|(s, _)| s.col).collect();
                cols.sort();
                assert_eq!(cols, (1..=n).collect::<Vec<_>>());
                assert!(m.factors().iter().all(|&(_, e)| e == 1));
            }
            for j in 1..=n {
                for (m, _) in big_x(&g, j).unwrap().terms() {
                    let bs = m
                        .factors()
                        .iter()
                        .filter(|(s, _)| s.kind == crate::algebra::SymbolKind::B)
                        .count();
                    let mut cols: Vec<usize> = m
                        .factors()
                        .iter()
                        .filter(|(s, _)| s.kind == crate::algebra::SymbolKind::A)
                        .map(|(s, _)| s.col)
                        .collect();
                    cols.sort();
                    assert_eq!(bs, 1);
                    assert_eq!(cols, (1..=n).filter(|&k| k != j).collect::<Vec<_>>());
                }
            }
        }
    }
}

//! Exact scalars: big rationals for numeric systems and integer polynomials
//! over `a[i,j]`, `b[i]` for symbolic ones.

mod polynomial;
mod rational;

use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

pub use polynomial::{Monomial, Polynomial, Symbol, SymbolKind};
pub use rational::Rational;

use crate::error::{Error, Result};
use crate::perm::Permutations;

/// The operations the solver needs from an entry type.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// What `X_j / X_0` becomes: a reduced fraction, or the unreduced pair.
    type Quotient: Clone + PartialEq + fmt::Debug;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn quotient(numerator: &Self, denominator: &Self) -> Result<Self::Quotient>;

    /// `Σ sign(π) Π_k m[π_k][k]` over the permutations whose lexicographic
    /// rank lies in `ranks`. `m` is square and row-major; indices are 0-based.
    fn leibniz_sum(m: &[Vec<Self>], ranks: Range<u64>) -> Self {
        leibniz_sum_generic(m, ranks)
    }
}

/// Term-by-term Leibniz sum using only the ring operations.
pub fn leibniz_sum_generic<S: Scalar>(m: &[Vec<S>], ranks: Range<u64>) -> S {
    let n = m.len();
    let mut acc = S::zero();
    let perms = Permutations::ranks(n, ranks).expect("matrix size within enumeration bounds");
    perms.for_each_borrowed(|p| {
        let mut term = S::one();
        for (k, &row) in p.values().iter().enumerate() {
            term = term.times(&m[row - 1][k]);
        }
        if p.is_odd() {
            term = term.negated();
        }
        acc = acc.plus(&term);
    });
    acc
}

impl Scalar for Rational {
    type Quotient = Rational;

    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn quotient(numerator: &Self, denominator: &Self) -> Result<Rational> {
        numerator
            .div(denominator)
            .map_err(|_| Error::SingularSystem)
    }

    /// Scales each column to integers, sums the integer products in `i128`
    /// while they fit and spills to `BigInt` otherwise, then divides the
    /// column scales back out.
    fn leibniz_sum(m: &[Vec<Self>], ranks: Range<u64>) -> Self {
        let n = m.len();
        let scales: Vec<BigInt> = (0..n)
            .map(|k| (0..n).fold(BigInt::one(), |l, r| l.lcm(m[r][k].denominator())))
            .collect();
        let ints: Vec<Vec<BigInt>> = m
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&scales)
                    .map(|(x, s)| x.numerator() * (s / x.denominator()))
                    .collect()
            })
            .collect();
        let small: Option<Vec<Vec<i64>>> = ints
            .iter()
            .map(|row| row.iter().map(|x| x.to_i64()).collect())
            .collect();

        let mut wide = 0i128;
        let mut big = BigInt::zero();
        let perms = Permutations::ranks(n, ranks).expect("matrix size within enumeration bounds");
        perms.for_each_borrowed(|p| {
            let rows = p.values();
            let odd = p.is_odd();
            let fast = small.as_ref().and_then(|sm| {
                rows.iter()
                    .enumerate()
                    .try_fold(1i128, |acc, (k, &r)| acc.checked_mul(sm[r - 1][k] as i128))
                    .map(|t| if odd { -t } else { t })
            });
            match fast {
                Some(t) => match wide.checked_add(t) {
                    Some(s) => wide = s,
                    None => {
                        big += wide;
                        wide = t;
                    }
                },
                None => {
                    let mut t: BigInt = rows
                        .iter()
                        .enumerate()
                        .map(|(k, &r)| &ints[r - 1][k])
                        .product();
                    if odd {
                        t = -t;
                    }
                    big += t;
                }
            }
        });
        big += wide;
        let scale: BigInt = scales.iter().product();
        Rational::new(big, scale).expect("column scales are positive")
    }
}

impl Scalar for Polynomial {
    type Quotient = (Polynomial, Polynomial);

    fn zero() -> Self {
        Polynomial::zero()
    }
    fn one() -> Self {
        Polynomial::one()
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self.add(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn quotient(numerator: &Self, denominator: &Self) -> Result<(Polynomial, Polynomial)> {
        if denominator.is_zero() {
            return Err(Error::SingularSystem);
        }
        Ok((numerator.clone(), denominator.clone()))
    }

    /// When every entry is a single term (the generic system always is), each
    /// product is one monomial and goes straight into the accumulator.
    fn leibniz_sum(m: &[Vec<Self>], ranks: Range<u64>) -> Self {
        let n = m.len();
        let mut single: Vec<Vec<Option<(&Monomial, &BigInt)>>> = Vec::with_capacity(n);
        for row in m {
            let mut out = Vec::with_capacity(n);
            for x in row {
                if x.is_zero() {
                    out.push(None);
                } else if let Some(t) = x.as_single_term() {
                    out.push(Some(t));
                } else {
                    return leibniz_sum_generic(m, ranks);
                }
            }
            single.push(out);
        }

        let mut acc = Polynomial::zero();
        let mut factors = Vec::with_capacity(2 * n);
        let perms = Permutations::ranks(n, ranks).expect("matrix size within enumeration bounds");
        perms.for_each_borrowed(|p| {
            factors.clear();
            let mut coeff = BigInt::one();
            for (k, &r) in p.values().iter().enumerate() {
                let Some((mono, c)) = single[r - 1][k] else {
                    return;
                };
                if !c.is_one() {
                    coeff *= c;
                }
                factors.extend_from_slice(mono.factors());
            }
            if p.is_odd() {
                coeff = -coeff;
            }
            acc.add_term(Monomial::from_factors(factors.iter().copied()), coeff);
        });
        acc
    }
}

//! Permutations of `{1, ..., n}` in one-line notation.
//!
//! Positions and values are 1-based on every public method. Enumeration is
//! lexicographic, but callers should only rely on getting every permutation
//! exactly once.

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default upper bound on `n` for exhaustive enumeration.
pub const DEFAULT_MAX_N: usize = 9;

/// Largest `n` whose factorial fits in a `u64`.
pub const HARD_MAX_N: usize = 20;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    /// Validates a one-line sequence `π_1 ... π_n`.
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        let mut seen = vec![false; n];
        for &v in &values {
            if v == 0 || v > n {
                return Err(Error::ValueOutOfRange { value: v, n });
            }
            if std::mem::replace(&mut seen[v - 1], true) {
                return Err(Error::RepeatedValue(v));
            }
        }
        Ok(Self { values })
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPermutation);
        }
        Ok(Self {
            values: (1..=n).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `π_position`, 1-based. Panics if `position` is outside `1..=n`.
    pub fn at(&self, position: usize) -> usize {
        self.values[position - 1]
    }

    /// Pairs `(i, j)` with `i < j` and `π_i > π_j`, 1-based, in lexicographic order.
    pub fn inversion_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.values[i] > self.values[j] {
                    pairs.push((i + 1, j + 1));
                }
            }
        }
        pairs
    }

    pub fn inversions(&self) -> usize {
        let v = &self.values;
        (0..v.len())
            .map(|i| v[i + 1..].iter().filter(|&&x| x < v[i]).count())
            .sum()
    }

    /// `+1` for an even number of inversions, `-1` for odd.
    pub fn sign(&self) -> i32 {
        if self.is_odd() {
            -1
        } else {
            1
        }
    }

    pub fn is_odd(&self) -> bool {
        self.inversions() % 2 == 1
    }

    /// The unique position `k` with `π_k = value`.
    pub fn position_of(&self, value: usize) -> Result<usize> {
        let n = self.n();
        if value == 0 || value > n {
            return Err(Error::ValueOutOfRange { value, n });
        }
        Ok(self
            .values
            .iter()
            .position(|&v| v == value)
            .expect("bijective")
            + 1)
    }

    /// Swaps the entries at positions `j` and `j2`, returning a new permutation.
    pub fn transpose_positions(&self, j: usize, j2: usize) -> Result<Self> {
        let n = self.n();
        if j == j2 || j == 0 || j2 == 0 || j > n || j2 > n {
            return Err(Error::InvalidTransposition { j, j2, n });
        }
        let mut values = self.values.clone();
        values.swap(j - 1, j2 - 1);
        Ok(Self { values })
    }

    /// Lexicographic rank in `S_n`, starting at 0.
    pub fn rank(&self) -> u64 {
        let n = self.n();
        let mut rank = 0u64;
        for i in 0..n {
            let smaller_after = self.values[i + 1..]
                .iter()
                .filter(|&&x| x < self.values[i])
                .count() as u64;
            rank += smaller_after * factorial(n - 1 - i);
        }
        rank
    }

    /// The permutation of lexicographic rank `rank` in `S_n`.
    pub fn unrank(n: usize, mut rank: u64) -> Result<Self> {
        check_size(n, HARD_MAX_N)?;
        let total = factorial(n);
        if rank >= total {
            return Err(Error::IndexOutOfRange {
                index: rank as usize,
                lo: 0,
                hi: total as usize - 1,
            });
        }
        let mut pool: Vec<usize> = (1..=n).collect();
        let mut values = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let f = factorial(i);
            let idx = (rank / f) as usize;
            rank %= f;
            values.push(pool.remove(idx));
        }
        Ok(Self { values })
    }

    /// Steps to the lexicographic successor in place; returns `false` at the last permutation.
    fn advance(&mut self) -> bool {
        let v = &mut self.values;
        let Some(pivot) = (0..v.len().saturating_sub(1))
            .rev()
            .find(|&i| v[i] < v[i + 1])
        else {
            return false;
        };
        let succ = (pivot + 1..v.len())
            .rev()
            .find(|&k| v[k] > v[pivot])
            .expect("a larger element exists after the pivot");
        v.swap(pivot, succ);
        v[pivot + 1..].reverse();
        true
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Single digits print run together (51423), larger sizes comma-separated.
        if self.n() < 10 {
            for v in &self.values {
                write!(f, "{v}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({self})")
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.values.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let values = Vec::<usize>::deserialize(deserializer)?;
        Permutation::new(values).map_err(serde::de::Error::custom)
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub(crate) fn check_size(n: usize, max_n: usize) -> Result<()> {
    if n == 0 || n > max_n.min(HARD_MAX_N) {
        return Err(Error::SizeGuard {
            n,
            max_n: max_n.min(HARD_MAX_N),
        });
    }
    Ok(())
}

/// Streams the permutations whose lexicographic rank lies in a range.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Option<Permutation>,
    remaining: u64,
}

impl Permutations {
    /// All of `S_n`, with `n` bounded by `max_n`.
    pub fn all(n: usize, max_n: usize) -> Result<Self> {
        check_size(n, max_n)?;
        Self::ranks(n, 0..factorial(n))
    }

    /// Ranks `range` of `S_n`; the range is clamped to `0..n!`.
    pub fn ranks(n: usize, range: Range<u64>) -> Result<Self> {
        check_size(n, HARD_MAX_N)?;
        let end = range.end.min(factorial(n));
        if range.start >= end {
            return Ok(Self {
                current: None,
                remaining: 0,
            });
        }
        Ok(Self {
            current: Some(Permutation::unrank(n, range.start)?),
            remaining: end - range.start,
        })
    }
}

impl Permutations {
    /// Calls `f` on each permutation in turn without allocating per item.
    pub fn for_each_borrowed(mut self, mut f: impl FnMut(&Permutation)) {
        let Some(mut cur) = self.current.take() else {
            return;
        };
        while self.remaining > 0 {
            f(&cur);
            self.remaining -= 1;
            if self.remaining > 0 {
                cur.advance();
            }
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.current.clone()?;
        if self.remaining > 0 {
            let cur = self.current.as_mut().expect("checked above");
            cur.advance();
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}

impl ExactSizeIterator for Permutations {}

/// Every permutation of size `n` in lexicographic order, guarded by [`DEFAULT_MAX_N`].
pub fn enumerate_permutations(n: usize) -> Result<Permutations> {
    Permutations::all(n, DEFAULT_MAX_N)
}

/// Splits `0..n!` into at most `parts` contiguous rank ranges of near-equal size.
pub fn rank_chunks(n: usize, parts: usize) -> Vec<Range<u64>> {
    let total = factorial(n);
    let parts = (parts.max(1) as u64).min(total);
    let step = total.div_ceil(parts);
    (0..parts)
        .map(|p| p * step..((p + 1) * step).min(total))
        .filter(|r| r.start < r.end)
        .collect()
}

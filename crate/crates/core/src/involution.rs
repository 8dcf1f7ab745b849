//! Exhaustive checker for the good/bad split of `F_n = {[j, π]}` and the
//! involution `T_i` that pairs up the bad elements with opposite weights.
//!
//! With `W_i([j, π]) = a[i,j] w_j(π)`, the sum of `W_i` over `F_n` is the
//! left side of `Σ_j a[i,j] X_j = b[i] X_0`. Good elements (`π_j = i`) sum to
//! `b[i] X_0`; bad elements cancel in pairs `{e, T_i(e)}`.

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Polynomial, Scalar};
use crate::cramer::{all_big_x, weight_w0, weight_wj, LinearSystem};
use crate::error::{Error, Result};
use crate::perm::{factorial, rank_chunks, Permutation, Permutations};

/// `[j, π]` with `1 ≤ j ≤ n`. Ordered by `j`, then by the values of `π`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FElement {
    pub j: usize,
    pub p: Permutation,
}

impl FElement {
    pub fn new(j: usize, p: Permutation) -> Result<Self> {
        if j == 0 || j > p.n() {
            return Err(Error::IndexOutOfRange {
                index: j,
                lo: 1,
                hi: p.n(),
            });
        }
        Ok(Self { j, p })
    }
}

impl fmt::Display for FElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.j, self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    Good,
    Bad,
}

/// Every element of `F_n` whose permutation has rank in `ranks`.
fn elements_in(n: usize, ranks: Range<u64>) -> impl Iterator<Item = FElement> {
    Permutations::ranks(n, ranks)
        .expect("size checked by the caller")
        .flat_map(move |p| (1..=n).map(move |j| FElement { j, p: p.clone() }))
}

/// All of `F_n`, sorted by `(j, π)`.
pub fn f_elements(n: usize) -> Result<Vec<FElement>> {
    let mut all: Vec<FElement> = elements_in(n, 0..u64::MAX).collect();
    all.sort_unstable();
    Ok(all)
}

/// `Good` iff `π_j = i`.
pub fn classify(i: usize, e: &FElement) -> Class {
    if e.p.at(e.j) == i {
        Class::Good
    } else {
        Class::Bad
    }
}

/// `T_i([j, π]) = [j', σ]` with `j' = π⁻¹(i)` and `σ` equal to `π` with
/// positions `j` and `j'` swapped.
pub fn t_involution(i: usize, e: &FElement) -> Result<FElement> {
    if classify(i, e) == Class::Good {
        return Err(Error::GoodElement {
            i,
            j: e.j,
            perm: e.p.to_string(),
        });
    }
    let j2 = e.p.position_of(i)?;
    let sigma = e.p.transpose_positions(e.j, j2)?;
    Ok(FElement { j: j2, p: sigma })
}

/// `W_i([j, π]) = a[i,j] w_j(π)`.
pub fn weight_big_w<S: Scalar>(sys: &LinearSystem<S>, i: usize, e: &FElement) -> Result<S> {
    sys.check_index(i, 1)?;
    Ok(sys.a(i, e.j).times(&weight_wj(sys, e.j, &e.p)?))
}

fn check_args<S: Scalar>(sys: &LinearSystem<S>, i: usize) -> Result<()> {
    sys.check_index(i, 1)
}

/// Runs `f` over rank ranges of `S_n`, in parallel for large `n`, and merges.
fn over_chunks<T, F, M>(n: usize, f: F, merge: M) -> T
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync,
    M: Fn(T, T) -> T + Sync,
{
    if factorial(n) < 720 {
        return f(0..factorial(n));
    }
    rank_chunks(n, rayon::current_num_threads() * 4)
        .into_par_iter()
        .map(&f)
        .collect::<Vec<T>>()
        .into_iter()
        .reduce(&merge)
        .expect("at least one chunk")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fact1Report<S> {
    pub i: usize,
    pub good_count: u64,
    /// Good elements whose weight differs from `b[i] w_0(π)`.
    pub elementwise_failures: Vec<FElement>,
    pub sum: S,
    pub b_i_times_x0: S,
    pub holds: bool,
}

/// Sums `W_i` over the good elements and compares with `b[i] X_0`, also
/// checking `W_i([j, π]) = b[i] w_0(π)` for every good element on its own.
pub fn check_fact1<S: Scalar>(sys: &LinearSystem<S>, i: usize) -> Result<Fact1Report<S>> {
    check_args(sys, i)?;
    let n = sys.n();
    let (good_count, elementwise_failures, sum) = over_chunks(
        n,
        |ranks| {
            let mut count = 0u64;
            let mut failures = Vec::new();
            let mut sum = S::zero();
            for e in elements_in(n, ranks).filter(|e| classify(i, e) == Class::Good) {
                count += 1;
                let w = weight_big_w(sys, i, &e).expect("indices checked");
                let expected = sys.b(i).times(&weight_w0(sys, &e.p).expect("sizes match"));
                if w != expected {
                    failures.push(e);
                }
                sum = sum.plus(&w);
            }
            (count, failures, sum)
        },
        |mut x, y| {
            x.1.extend(y.1);
            (x.0 + y.0, x.1, x.2.plus(&y.2))
        },
    );
    let x0 = all_big_x(sys).swap_remove(0);
    let b_i_times_x0 = sys.b(i).times(&x0);
    let holds = elementwise_failures.is_empty() && sum == b_i_times_x0;
    Ok(Fact1Report {
        i,
        good_count,
        elementwise_failures,
        sum,
        b_i_times_x0,
        holds,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fact2Report<S> {
    pub i: usize,
    pub bad_count: u64,
    /// Bad elements with `T_i(e) = e`.
    pub fixed_points: Vec<FElement>,
    /// Bad elements whose image is good.
    pub image_not_bad: Vec<FElement>,
    /// Bad elements with `T_i(T_i(e)) ≠ e`.
    pub not_involutive: Vec<FElement>,
    /// Bad elements where `inv(π) - inv(σ)` is even.
    pub even_parity: Vec<FElement>,
    /// Bad elements with `W_i(e) + W_i(T_i(e)) ≠ 0`.
    pub not_canceling: Vec<FElement>,
    pub sum: S,
    pub holds: bool,
}

impl<S> Fact2Report<S> {
    fn failure_lists(&self) -> [&Vec<FElement>; 5] {
        [
            &self.fixed_points,
            &self.image_not_bad,
            &self.not_involutive,
            &self.even_parity,
            &self.not_canceling,
        ]
    }

    pub fn pairwise_ok(&self) -> bool {
        self.failure_lists().iter().all(|v| v.is_empty())
    }
}

/// Sums `W_i` over the bad elements and checks the pairing element by
/// element: `T_i` maps bad to bad, has no fixed point, is its own inverse,
/// flips inversion parity, and pairs opposite weights.
pub fn check_fact2<S: Scalar>(sys: &LinearSystem<S>, i: usize) -> Result<Fact2Report<S>> {
    check_args(sys, i)?;
    let n = sys.n();
    let empty = || Fact2Report {
        i,
        bad_count: 0,
        fixed_points: Vec::new(),
        image_not_bad: Vec::new(),
        not_involutive: Vec::new(),
        even_parity: Vec::new(),
        not_canceling: Vec::new(),
        sum: S::zero(),
        holds: false,
    };
    let mut report = over_chunks(
        n,
        |ranks| {
            let mut r = empty();
            for e in elements_in(n, ranks).filter(|e| classify(i, e) == Class::Bad) {
                r.bad_count += 1;
                let image = t_involution(i, &e).expect("e is bad");
                let w = weight_big_w(sys, i, &e).expect("indices checked");
                r.sum = r.sum.plus(&w);
                if image == e {
                    r.fixed_points.push(e);
                    continue;
                }
                if classify(i, &image) != Class::Bad {
                    r.image_not_bad.push(e);
                    continue;
                }
                if t_involution(i, &image).ok().as_ref() != Some(&e) {
                    r.not_involutive.push(e.clone());
                }
                if (e.p.inversions() + image.p.inversions()).is_multiple_of(2) {
                    r.even_parity.push(e.clone());
                }
                let w2 = weight_big_w(sys, i, &image).expect("indices checked");
                if !w.plus(&w2).is_zero() {
                    r.not_canceling.push(e);
                }
            }
            r
        },
        |mut x, y| {
            x.bad_count += y.bad_count;
            x.fixed_points.extend(y.fixed_points);
            x.image_not_bad.extend(y.image_not_bad);
            x.not_involutive.extend(y.not_involutive);
            x.even_parity.extend(y.even_parity);
            x.not_canceling.extend(y.not_canceling);
            x.sum = x.sum.plus(&y.sum);
            x
        },
    );
    report.holds = report.pairwise_ok() && report.sum.is_zero();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodEntry {
    pub j: usize,
    pub pi: Permutation,
    pub weight: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BadPair {
    pub j: usize,
    pub pi: Permutation,
    pub j2: usize,
    pub sigma: Permutation,
    pub weight: String,
    pub weight2: String,
}

/// The good elements with their weights and the bad elements grouped into
/// canceling pairs, for one `i` of the generic or any symbolic system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingCertificate {
    pub n: usize,
    pub i: usize,
    pub good: Vec<GoodEntry>,
    pub bad_pairs: Vec<BadPair>,
    pub fact1_sum: String,
    #[serde(rename = "b_i_times_X0")]
    pub b_i_times_x0: String,
    pub fact2_sum: String,
}

/// Good entries come in `(j, π)` order; each bad pair appears once, smaller
/// element first, pairs sorted by that element.
pub fn build_certificate(sys: &LinearSystem<Polynomial>, i: usize) -> Result<PairingCertificate> {
    check_args(sys, i)?;
    let n = sys.n();
    let mut good = Vec::new();
    let mut bad_pairs = Vec::new();
    let mut fact1 = Polynomial::zero();
    let mut fact2 = Polynomial::zero();
    for e in f_elements(n)? {
        let w = weight_big_w(sys, i, &e)?;
        match classify(i, &e) {
            Class::Good => {
                fact1.add_assign(&w);
                good.push(GoodEntry {
                    j: e.j,
                    pi: e.p,
                    weight: w.to_string(),
                });
            }
            Class::Bad => {
                fact2.add_assign(&w);
                let image = t_involution(i, &e)?;
                if e < image {
                    let w2 = weight_big_w(sys, i, &image)?;
                    bad_pairs.push(BadPair {
                        j: e.j,
                        pi: e.p,
                        j2: image.j,
                        sigma: image.p,
                        weight: w.to_string(),
                        weight2: w2.to_string(),
                    });
                }
            }
        }
    }
    let x0 = all_big_x(sys).swap_remove(0);
    Ok(PairingCertificate {
        n,
        i,
        good,
        bad_pairs,
        fact1_sum: fact1.to_string(),
        b_i_times_x0: sys.b(i).mul(&x0).to_string(),
        fact2_sum: fact2.to_string(),
    })
}

impl PairingCertificate {
    /// Re-checks the certificate from its own contents: counts, element
    /// classes, the pairing, weight negation, and both sums.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let n = self.n;
        let (i, total) = (self.i, n as u64 * factorial(n));
        let parse = |s: &str| s.parse::<Polynomial>().map_err(|e| e.to_string());
        if self.good.len() as u64 + 2 * self.bad_pairs.len() as u64 != total {
            return Err(format!(
                "|good| + 2|pairs| = {} + 2*{} != {total}",
                self.good.len(),
                self.bad_pairs.len()
            ));
        }
        if self.good.len() as u64 != factorial(n) {
            return Err(format!("|good| = {} != {}", self.good.len(), factorial(n)));
        }
        let mut good_sum = Polynomial::zero();
        for g in &self.good {
            let e = FElement::new(g.j, g.pi.clone()).map_err(|e| e.to_string())?;
            if e.p.n() != n || classify(i, &e) != Class::Good {
                return Err(format!("{e} is not {i}-good"));
            }
            good_sum.add_assign(&parse(&g.weight)?);
        }
        let mut bad_sum = Polynomial::zero();
        for pair in &self.bad_pairs {
            let e = FElement::new(pair.j, pair.pi.clone()).map_err(|e| e.to_string())?;
            let f = FElement::new(pair.j2, pair.sigma.clone()).map_err(|e| e.to_string())?;
            if e.p.n() != n || f.p.n() != n {
                return Err(format!("pair {e} / {f} has the wrong size"));
            }
            if classify(i, &e) != Class::Bad || classify(i, &f) != Class::Bad {
                return Err(format!("pair {e} / {f} is not made of {i}-bad elements"));
            }
            if t_involution(i, &e).ok().as_ref() != Some(&f) || e >= f {
                return Err(format!(
                    "{f} is not the image of {e}, or the pair is out of order"
                ));
            }
            let w = parse(&pair.weight)?;
            let w2 = parse(&pair.weight2)?;
            if w.neg() != w2 || pair.weight2 != w.neg().to_string() {
                return Err(format!("weights of {e} and {f} do not cancel"));
            }
            bad_sum.add_assign(&w);
            bad_sum.add_assign(&w2);
        }
        if self.fact2_sum != "0" || !bad_sum.is_zero() {
            return Err(format!("fact2_sum is {:?}", self.fact2_sum));
        }
        if self.fact1_sum != self.b_i_times_x0 || good_sum.to_string() != self.fact1_sum {
            return Err(format!(
                "fact1_sum {:?} does not match b_i_times_X0 {:?}",
                self.fact1_sum, self.b_i_times_x0
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(j: usize, v: &[usize]) -> FElement {
        FElement::new(j, Permutation::new(v.to_vec()).unwrap()).unwrap()
    }

    #[test]
    fn big_w_examples() {
        let g2 = LinearSystem::generic(2).unwrap();
        assert_eq!(
            weight_big_w(&g2, 1, &el(2, &[1, 2])).unwrap().to_string(),
            "a[1,1]*a[1,2]*b[2]"
        );
        assert_eq!(
            weight_big_w(&g2, 1, &el(1, &[2, 1])).unwrap().to_string(),
            "-a[1,1]*a[1,2]*b[2]"
        );
        let g1 = LinearSystem::generic(1).unwrap();
        assert_eq!(
            weight_big_w(&g1, 1, &el(1, &[1])).unwrap().to_string(),
            "a[1,1]*b[1]"
        );
        assert!(weight_big_w(&g1, 2, &el(1, &[1])).is_err());
    }

    #[test]
    fn classification() {
        assert_eq!(classify(1, &el(1, &[1, 2])), Class::Good);
        assert_eq!(classify(1, &el(2, &[1, 2])), Class::Bad);
        for k in 1..=4 {
            for j in 1..=4 {
                let expected = if j == k { Class::Good } else { Class::Bad };
                assert_eq!(classify(k, &el(j, &[1, 2, 3, 4])), expected);
            }
        }
    }

    #[test]
    fn involution_examples() {
        assert_eq!(
            t_involution(2, &el(1, &[3, 1, 2])).unwrap(),
            el(3, &[2, 1, 3])
        );
        assert_eq!(t_involution(1, &el(2, &[1, 2])).unwrap(), el(1, &[2, 1]));
        assert!(matches!(
            t_involution(1, &el(1, &[1, 2])),
            Err(Error::GoodElement { .. })
        ));
    }

    #[test]
    fn fact1_small() {
        let g2 = LinearSystem::generic(2).unwrap();
        let r = check_fact1(&g2, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.good_count, 2);
        assert_eq!(r.sum.to_string(), "a[1,1]*a[2,2]*b[1] - a[1,2]*a[2,1]*b[1]");
        let g1 = LinearSystem::generic(1).unwrap();
        let r = check_fact1(&g1, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.sum.to_string(), "a[1,1]*b[1]");
    }

    #[test]
    fn fact2_small() {
        let g2 = LinearSystem::generic(2).unwrap();
        let r = check_fact2(&g2, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.bad_count, 2);
        assert!(r.sum.is_zero());
        let g1 = LinearSystem::generic(1).unwrap();
        let r = check_fact2(&g1, 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.bad_count, 0);
    }

    #[test]
    fn facts_hold_through_n5_and_in_parallel_chunks() {
        for n in 1..=5 {
            let g = LinearSystem::generic(n).unwrap();
            for i in 1..=n {
                assert!(check_fact1(&g, i).unwrap().holds, "fact1 n={n} i={i}");
                let f2 = check_fact2(&g, i).unwrap();
                assert!(f2.holds, "fact2 n={n} i={i}");
                assert_eq!(f2.bad_count, (n as u64 - 1) * factorial(n));
            }
        }
    }

    #[test]
    fn certificate_counts() {
        let c = build_certificate(&LinearSystem::generic(2).unwrap(), 1).unwrap();
        assert_eq!((c.good.len(), c.bad_pairs.len()), (2, 1));
        assert_eq!(c.bad_pairs[0].pi.to_string(), "21");
        assert_eq!(c.bad_pairs[0].j, 1);
        c.validate().unwrap();
        let c = build_certificate(&LinearSystem::generic(1).unwrap(), 1).unwrap();
        assert_eq!((c.good.len(), c.bad_pairs.len()), (1, 0));
        c.validate().unwrap();
        let c = build_certificate(&LinearSystem::generic(3).unwrap(), 2).unwrap();
        assert_eq!(c.good.len() + 2 * c.bad_pairs.len(), 18);
        c.validate().unwrap();
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let c = build_certificate(&LinearSystem::generic(3).unwrap(), 1).unwrap();
        let mut bad = c.clone();
        bad.bad_pairs[0].weight2 = bad.bad_pairs[0].weight.clone();
        assert!(bad.validate().is_err());
        let mut bad = c.clone();
        bad.fact2_sum = "a[1,1]".into();
        assert!(bad.validate().is_err());
        let mut bad = c.clone();
        bad.good.pop();
        assert!(bad.validate().is_err());
        let mut bad = c;
        bad.bad_pairs.swap(0, 1);
        let (p0, p1) = (bad.bad_pairs[0].clone(), bad.bad_pairs[1].clone());
        bad.bad_pairs[0].sigma = p1.sigma;
        bad.bad_pairs[1].sigma = p0.sigma;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn certificate_json_field_names() {
        let c = build_certificate(&LinearSystem::generic(2).unwrap(), 1).unwrap();
        let v: serde_json::Value = serde_json::to_value(&c).unwrap();
        for key in [
            "n",
            "i",
            "good",
            "bad_pairs",
            "fact1_sum",
            "b_i_times_X0",
            "fact2_sum",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["bad_pairs"][0]["sigma"], serde_json::json!([1, 2]));
        let back: PairingCertificate = serde_json::from_value(v).unwrap();
        assert_eq!(back, c);
    }
}

//! Exponent vectors in `N^k` and the counting that goes with them.
//!
//! Axes are 0-based in the Rust API. External formats (JSON, CLI output)
//! label variables `1..=k`; the conversion happens at the serialization
//! boundary only.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An exponent vector `alpha = (alpha^1, ..., alpha^k)`.
///
/// The derived [`Ord`] is the canonical basis order used everywhere in the
/// crate: graded first (ascending total degree), then within one degree by
/// entries compared lexicographically in descending order, so that
/// `x^1 < x^2 < ... < x^k` and `(2,0) < (1,1) < (0,2)`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(k: usize) -> Self {
        MultiIndex(vec![0; k])
    }

    /// The standard basis vector `e_axis` in `N^k`.
    pub fn unit(k: usize, axis: usize) -> Result<Self> {
        if axis >= k {
            return Err(Error::AxisOutOfRange { axis, k });
        }
        let mut entries = vec![0; k];
        entries[axis] = 1;
        Ok(MultiIndex(entries))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.0[axis]
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &MultiIndex) -> Result<MultiIndex> {
        self.check_len(other)?;
        Ok(MultiIndex(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }

    /// `self + e_axis`.
    pub fn add_unit(&self, axis: usize) -> Result<MultiIndex> {
        if axis >= self.len() {
            return Err(Error::AxisOutOfRange {
                axis,
                k: self.len(),
            });
        }
        let mut entries = self.0.clone();
        entries[axis] += 1;
        Ok(MultiIndex(entries))
    }

    /// `self - e_axis`; the axis must lie in the support.
    pub fn sub_unit(&self, axis: usize) -> Result<MultiIndex> {
        if axis >= self.len() {
            return Err(Error::AxisOutOfRange {
                axis,
                k: self.len(),
            });
        }
        if self.0[axis] == 0 {
            return Err(Error::NotInSupport {
                axis,
                index: self.to_string(),
            });
        }
        let mut entries = self.0.clone();
        entries[axis] -= 1;
        Ok(MultiIndex(entries))
    }

    /// Axes with a positive exponent, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.support_iter().collect()
    }

    pub fn support_iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(j, _)| j)
    }

    /// Largest axis in the support, `None` for the zero index.
    pub fn max_support(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }

    fn check_len(&self, other: &MultiIndex) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(())
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (n, e) in self.0.iter().enumerate() {
            if n > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }
}

/// All multi-indices in `N^k` of degree exactly `d`, in canonical order.
pub fn enumerate_degree_exactly(k: usize, d: u32) -> Vec<MultiIndex> {
    fn fill(prefix: &mut Vec<u32>, k: usize, remaining: u32, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == k {
            prefix.push(remaining);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for head in (0..=remaining).rev() {
            prefix.push(head);
            fill(prefix, k, remaining - head, out);
            prefix.pop();
        }
    }

    let mut out = Vec::new();
    if k == 0 {
        if d == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    fill(&mut Vec::with_capacity(k), k, d, &mut out);
    out
}

/// All multi-indices in `N^k` of degree at most `d`, in canonical order.
/// This is the basis order of `D^d_k`.
pub fn enumerate_degree_at_most(k: usize, d: u32) -> Vec<MultiIndex> {
    (0..=d)
        .flat_map(|degree| enumerate_degree_exactly(k, degree))
        .collect()
}

/// Binomial coefficient with the conventions `C(n, 0) = 1` for every `n`
/// (including negative `n`), and `C(n, m) = 0` when `m < 0`, when
/// `0 <= n < m`, or when `n < 0 < m`.
pub fn binomial(n: i64, m: i64) -> BigUint {
    if m == 0 {
        return BigUint::one();
    }
    if m < 0 || n < 0 || n < m {
        return BigUint::zero();
    }
    let m = m.min(n - m) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for step in 0..m {
        acc *= n - step;
        acc /= step + 1;
    }
    acc
}

/// All strictly increasing `len`-tuples drawn from `0..n`, lexicographically.
pub fn increasing_tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if len > n {
        return out;
    }
    let mut current: Vec<usize> = (0..len).collect();
    loop {
        out.push(current.clone());
        let Some(pos) = (0..len).rev().find(|&p| current[p] < n - len + p) else {
            return out;
        };
        current[pos] += 1;
        for q in pos + 1..len {
            current[q] = current[q - 1] + 1;
        }
    }
}

/// Sorts `items` ascending and returns the sign of the sorting permutation,
/// or `None` when two entries coincide.
pub fn sort_with_sign<T: Ord + Clone>(items: &[T]) -> Option<(Vec<T>, i8)> {
    let mut sorted = items.to_vec();
    let mut sign = 1i8;
    // insertion sort; tuples here are short
    for i in 1..sorted.len() {
        let mut j = i;
        while j > 0 {
            match sorted[j - 1].cmp(&sorted[j]) {
                Ordering::Greater => {
                    sorted.swap(j - 1, j);
                    sign = -sign;
                    j -= 1;
                }
                Ordering::Equal => return None,
                Ordering::Less => break,
            }
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sorted, sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn degree_examples() {
        assert_eq!(mi(&[0, 0]).degree(), 0);
        assert_eq!(mi(&[2, 1]).degree(), 3);
        for k in 1..5 {
            for j in 0..k {
                assert_eq!(MultiIndex::unit(k, j).unwrap().degree(), 1);
            }
        }
    }

    #[test]
    fn add_examples() {
        assert_eq!(mi(&[1, 0]).add(&mi(&[0, 1])).unwrap(), mi(&[1, 1]));
        assert_eq!(mi(&[2, 0]).add(&mi(&[0, 0])).unwrap(), mi(&[2, 0]));
        assert_eq!(mi(&[1, 2]).add(&mi(&[3, 1])).unwrap(), mi(&[4, 3]));
        assert_eq!(
            mi(&[1, 2]).add(&mi(&[1])),
            Err(Error::LengthMismatch {
                expected: 2,
                actual: 1
            })
        );
    }

    #[test]
    fn sub_unit_examples() {
        // axes 1 and 2 in the one-based notation
        assert_eq!(mi(&[2, 1]).sub_unit(0).unwrap(), mi(&[1, 1]));
        assert_eq!(mi(&[0, 1]).sub_unit(1).unwrap(), mi(&[0, 0]));
        assert!(matches!(
            mi(&[0, 1]).sub_unit(0),
            Err(Error::NotInSupport { axis: 0, .. })
        ));
        assert!(matches!(
            mi(&[0, 1]).sub_unit(2),
            Err(Error::AxisOutOfRange { .. })
        ));
    }

    #[test]
    fn support_examples() {
        assert!(mi(&[0, 0]).support().is_empty());
        assert_eq!(mi(&[2, 0, 1]).support(), vec![0, 2]);
        assert_eq!(MultiIndex::unit(3, 1).unwrap().support(), vec![1]);
        assert_eq!(mi(&[2, 0, 1]).max_support(), Some(2));
        assert_eq!(mi(&[0, 0]).max_support(), None);
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(
            enumerate_degree_at_most(1, 2),
            vec![mi(&[0]), mi(&[1]), mi(&[2])]
        );
        assert_eq!(
            enumerate_degree_at_most(2, 1),
            vec![mi(&[0, 0]), mi(&[1, 0]), mi(&[0, 1])]
        );
        assert_eq!(enumerate_degree_at_most(2, 2).len(), 6);
        assert_eq!(enumerate_degree_at_most(0, 3), vec![mi(&[])]);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        // every vector in a box, filtered by degree and sorted
        for k in 1..=3usize {
            for d in 0..=4u32 {
                let mut expected = Vec::new();
                let total = (d as usize + 1).pow(k as u32);
                for code in 0..total {
                    let mut rest = code;
                    let entries: Vec<u32> = (0..k)
                        .map(|_| {
                            let e = (rest % (d as usize + 1)) as u32;
                            rest /= d as usize + 1;
                            e
                        })
                        .collect();
                    if entries.iter().sum::<u32>() <= d {
                        expected.push(MultiIndex(entries));
                    }
                }
                expected.sort();
                assert_eq!(enumerate_degree_at_most(k, d), expected);
            }
        }
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(-1, 0), BigUint::one());
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(3, -1), BigUint::zero());
        assert_eq!(binomial(-3, 2), BigUint::zero());
        assert_eq!(
            binomial(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn increasing_tuple_enumeration() {
        assert_eq!(
            increasing_tuples(3, 2),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(increasing_tuples(3, 0), vec![Vec::<usize>::new()]);
        assert!(increasing_tuples(1, 2).is_empty());
        assert_eq!(increasing_tuples(0, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn sorting_sign() {
        assert_eq!(sort_with_sign(&[2, 1]), Some((vec![1, 2], -1)));
        assert_eq!(sort_with_sign(&[1, 2]), Some((vec![1, 2], 1)));
        assert_eq!(sort_with_sign(&[3, 1, 2]), Some((vec![1, 2, 3], 1)));
        assert_eq!(sort_with_sign(&[1, 1]), None);
        assert_eq!(sort_with_sign(&[2, 0, 2]), None);
        assert_eq!(sort_with_sign::<usize>(&[]), Some((vec![], 1)));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn index(k: usize) -> impl Strategy<Value = MultiIndex> {
        proptest::collection::vec(0u32..6, k).prop_map(MultiIndex::new)
    }

    proptest! {
        #[test]
        fn degree_is_additive((a, b) in (1usize..5).prop_flat_map(|k| (index(k), index(k)))) {
            prop_assert_eq!(a.add(&b).unwrap().degree(), a.degree() + b.degree());
        }

        #[test]
        fn sub_unit_inverts_add_unit(a in (1usize..5).prop_flat_map(index), j in 0usize..5) {
            let j = j % a.len();
            let e = MultiIndex::unit(a.len(), j).unwrap();
            prop_assert_eq!(a.add(&e).unwrap().sub_unit(j).unwrap(), a.clone());
            prop_assert_eq!(a.add_unit(j).unwrap(), a.add(&e).unwrap());
        }

        #[test]
        fn support_empty_iff_degree_zero(a in (1usize..5).prop_flat_map(index)) {
            prop_assert_eq!(a.support().is_empty(), a.degree() == 0);
        }

        #[test]
        fn enumeration_counts_and_order(k in 1usize..5, d in 0u32..5) {
            let all = enumerate_degree_at_most(k, d);
            prop_assert_eq!(BigUint::from(all.len()), binomial(d as i64 + k as i64, k as i64));
            prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn pascal_identity(n in 1i64..60, m in 1i64..60) {
            prop_assert_eq!(binomial(n, m), binomial(n - 1, m - 1) + binomial(n - 1, m));
        }

        #[test]
        fn sort_sign_matches_inversion_parity(v in proptest::collection::vec(0usize..8, 0..6)) {
            let inversions = (0..v.len())
                .flat_map(|i| (i + 1..v.len()).map(move |j| (i, j)))
                .filter(|&(i, j)| v[i] > v[j])
                .count();
            let distinct = {
                let mut w = v.clone();
                w.sort();
                w.dedup();
                w.len() == v.len()
            };
            match sort_with_sign(&v) {
                None => prop_assert!(!distinct),
                Some((sorted, sign)) => {
                    prop_assert!(distinct);
                    prop_assert!(sorted.windows(2).all(|w| w[0] < w[1]));
                    prop_assert_eq!(sign, if inversions % 2 == 0 { 1 } else { -1 });
                }
            }
        }
    }
}

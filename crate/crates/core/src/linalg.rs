//! Exact sparse Gaussian elimination over the rationals: rank, row
//! reduction, and nullspace bases.
//!
//! Rows are kept sparse and sorted by column. Elimination is incremental:
//! each incoming row is reduced against the pivots found so far, keyed by
//! their leading column, and becomes a new pivot if anything survives. This
//! keeps fill-in confined to the columns a row can actually reach, which
//! for block-structured systems means the block it lives in.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Rational;

/// A sparse row: `(column, value)` pairs, strictly increasing in column,
/// with no explicit zeros.
pub type SparseRow = Vec<(usize, Rational)>;

/// Sorts, merges duplicate columns, and drops zeros.
pub fn normalize_row(mut entries: Vec<(usize, Rational)>) -> SparseRow {
    entries.sort_by_key(|(col, _)| *col);
    let mut out: SparseRow = Vec::with_capacity(entries.len());
    for (col, value) in entries {
        match out.last_mut() {
            Some((last, acc)) if *last == col => *acc += value,
            _ => out.push((col, value)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// `a - factor * b` for sparse rows.
fn sub_scaled(a: &[(usize, Rational)], factor: &Rational, b: &[(usize, Rational)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(factor * &b[j].1)));
            j += 1;
        } else {
            let v = &a[i].1 - factor * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn dot(row: &[(usize, Rational)], vector: &[Rational]) -> Rational {
    row.iter()
        .fold(Rational::zero(), |acc, (col, v)| acc + v * &vector[*col])
}

/// Row-echelon form built one row at a time.
///
/// Each stored pivot row has a leading coefficient of one at its key column
/// and no entries to the left of it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    columns: usize,
    pivots: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new(columns: usize) -> Self {
        Echelon {
            columns,
            pivots: BTreeMap::new(),
        }
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduces `row` against the current pivots. The result is zero exactly
    /// when `row` lies in the span of the rows inserted so far.
    pub fn reduce(&self, mut row: SparseRow) -> SparseRow {
        let mut cursor = 0;
        while cursor < row.len() {
            let col = row[cursor].0;
            match self.pivots.get(&col) {
                Some(pivot) => {
                    let factor = row[cursor].1.clone();
                    let tail = sub_scaled(&row[cursor..], &factor, pivot);
                    row.truncate(cursor);
                    row.extend(tail);
                }
                None => cursor += 1,
            }
        }
        row
    }

    /// Inserts a row; returns `true` if it increased the rank.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        let mut row = self.reduce(row);
        let Some(&(lead, _)) = row.first() else {
            return false;
        };
        // reduce leaves no pivot columns, so `lead` is new
        let inv = Rational::one() / &row[0].1;
        for (_, v) in row.iter_mut() {
            *v *= &inv;
        }
        self.pivots.insert(lead, row);
        true
    }

    pub fn contains(&self, row: SparseRow) -> bool {
        self.reduce(row).is_empty()
    }

    /// Reduced row-echelon form: every pivot row is zero at every other
    /// pivot column.
    fn reduced(&self) -> BTreeMap<usize, SparseRow> {
        let mut done: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&lead, row) in self.pivots.iter().rev() {
            let mut row = row.clone();
            let mut cursor = 1;
            while cursor < row.len() {
                let col = row[cursor].0;
                match done.get(&col) {
                    Some(pivot) => {
                        let factor = row[cursor].1.clone();
                        let tail = sub_scaled(&row[cursor..], &factor, pivot);
                        row.truncate(cursor);
                        row.extend(tail);
                    }
                    None => cursor += 1,
                }
            }
            done.insert(lead, row);
        }
        done
    }

    /// A basis of the nullspace of the inserted rows, one dense vector per
    /// free column, in ascending order of free column. Each vector is one at
    /// its free column and zero at every other free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let rref = self.reduced();
        let free: Vec<usize> = (0..self.columns)
            .filter(|c| !rref.contains_key(c))
            .collect();
        let free_slot: BTreeMap<usize, usize> =
            free.iter().enumerate().map(|(n, &c)| (c, n)).collect();
        let mut basis: Vec<Vec<Rational>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![Rational::zero(); self.columns];
                v[f] = Rational::one();
                v
            })
            .collect();
        for (&lead, row) in &rref {
            for (col, value) in &row[1..] {
                let slot = free_slot[col];
                basis[slot][lead] = -value.clone();
            }
        }
        basis
    }
}

/// Rank of a set of sparse rows.
pub fn rank<I: IntoIterator<Item = SparseRow>>(columns: usize, rows: I) -> usize {
    let mut echelon = Echelon::new(columns);
    for row in rows {
        echelon.insert(row);
    }
    echelon.rank()
}

pub fn dense_to_sparse(vector: &[Rational]) -> SparseRow {
    vector
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (c, v.clone()))
        .collect()
}

/// Rank of dense vectors of a common length.
pub fn rank_dense(columns: usize, vectors: &[Vec<Rational>]) -> usize {
    rank(columns, vectors.iter().map(|v| dense_to_sparse(v)))
}

/// Whether a dense matrix (given by rows) is square and invertible.
pub fn is_invertible(rows: &[Vec<Rational>]) -> bool {
    let n = rows.len();
    rows.iter().all(|r| r.len() == n) && rank_dense(n, rows) == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{from_int, ratio};

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        normalize_row(entries.iter().map(|&(c, v)| (c, from_int(v))).collect())
    }

    fn dense(values: &[i64]) -> Vec<Rational> {
        values.iter().map(|&v| from_int(v)).collect()
    }

    #[test]
    fn normalize_merges_and_drops() {
        assert_eq!(
            row(&[(3, 1), (1, 2), (3, -1), (0, 0), (1, 1)]),
            vec![(1, from_int(3))]
        );
    }

    #[test]
    fn rank_of_small_systems() {
        assert_eq!(
            rank(3, vec![row(&[(0, 1), (1, 1)]), row(&[(1, 1), (2, 1)])]),
            2
        );
        assert_eq!(
            rank(
                3,
                vec![
                    row(&[(0, 1), (1, 1)]),
                    row(&[(1, 1), (2, 1)]),
                    row(&[(0, 1), (2, -1)])
                ]
            ),
            2
        );
        assert_eq!(rank(2, vec![row(&[]), row(&[])]), 0);
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let rows = vec![
            row(&[(0, 2), (1, -1), (3, 4)]),
            row(&[(1, 3), (2, 1)]),
            row(&[(0, 2), (1, 2), (2, 1), (3, 4)]),
            row(&[(4, 5)]),
        ];
        let mut e = Echelon::new(5);
        for r in &rows {
            e.insert(r.clone());
        }
        let null = e.nullspace();
        assert_eq!(e.rank() + null.len(), 5);
        for v in &null {
            for r in &rows {
                assert!(dot(r, v).is_zero());
            }
        }
        assert_eq!(rank_dense(5, &null), null.len());
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let mut e = Echelon::new(3);
        for c in 0..3 {
            assert!(e.insert(vec![(c, ratio(1, 3))]));
        }
        assert!(!e.insert(row(&[(0, 1), (2, 7)])));
        assert!(e.nullspace().is_empty());
    }

    #[test]
    fn membership() {
        let mut e = Echelon::new(3);
        e.insert(row(&[(0, 1), (1, 1)]));
        assert!(e.contains(row(&[(0, 3), (1, 3)])));
        assert!(!e.contains(row(&[(0, 1)])));
    }

    #[test]
    fn invertibility() {
        assert!(is_invertible(&[dense(&[1, 2]), dense(&[3, 4])]));
        assert!(!is_invertible(&[dense(&[1, 2]), dense(&[2, 4])]));
        assert!(!is_invertible(&[dense(&[1, 2])]));
        assert!(is_invertible(&[]));
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::rational::from_int;
    use proptest::prelude::*;

    /// Determinant by cofactor expansion, for cross-checking rank on small
    /// square matrices.
    fn det(m: &[Vec<Rational>]) -> Rational {
        if m.is_empty() {
            return Rational::one();
        }
        let mut total = Rational::zero();
        for c in 0..m.len() {
            let minor: Vec<Vec<Rational>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != c)
                        .map(|(_, v)| v.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][c] * det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 5), 0..7)) {
            let rows: Vec<SparseRow> = entries
                .iter()
                .map(|r| normalize_row(r.iter().enumerate().map(|(c, &v)| (c, from_int(v))).collect()))
                .collect();
            let mut e = Echelon::new(5);
            for r in &rows {
                e.insert(r.clone());
            }
            let null = e.nullspace();
            prop_assert_eq!(e.rank() + null.len(), 5);
            for v in &null {
                for r in &rows {
                    prop_assert!(dot(r, v).is_zero());
                }
            }
        }

        #[test]
        fn invertible_iff_nonzero_determinant(entries in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 4), 4)) {
            let m: Vec<Vec<Rational>> = entries.iter().map(|r| r.iter().map(|&v| from_int(v)).collect()).collect();
            prop_assert_eq!(is_invertible(&m), !det(&m).is_zero());
        }
    }
}

//! Brute-force model of the same space as an explicit linear system.
//!
//! The unknowns are the values `F(x^{eps_1}, ..., x^{eps_s})(x^delta)` for
//! strictly increasing tuples of basis monomials (skew-symmetry is built in
//! by only keeping sorted tuples; permuted tuples resolve to a signed
//! unknown and tuples with a repeat to zero). Each instance of the product
//! rule on basis monomials contributes one row. The nullspace of the system
//! is then, by construction, the space of maps we are after, computed
//! without any reference to the closed-form construction.

use std::collections::HashMap;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lift_space::{construct, CoefficientAssignment, LiftParams, LiftTable};
use crate::linalg::{self, dot, normalize_row, Echelon, SparseRow};
use crate::multiindex::{binomial, increasing_tuples, sort_with_sign, MultiIndex};
use crate::rational::{self, Rational};
use crate::verifier::{Failure, VerificationReport, DEFAULT_WITNESS_LIMIT};

pub const DEFAULT_MAX_UNKNOWNS: usize = 20_000;

/// Which argument slots the product rule is imposed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotSelection {
    All,
    LastOnly,
}

#[derive(Clone, Debug)]
pub struct OracleOptions {
    pub max_unknowns: usize,
    pub slots: SlotSelection,
    pub witness_limit: usize,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_unknowns: DEFAULT_MAX_UNKNOWNS,
            slots: SlotSelection::All,
            witness_limit: DEFAULT_WITNESS_LIMIT,
        }
    }
}

/// Basis positions the row was instantiated on: the rule in slot `slot`
/// with the other arguments `others` and the triple `(b, c, d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowOrigin {
    pub slot: usize,
    pub others: Vec<usize>,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

pub struct ConstraintSystem {
    params: LiftParams,
    unknown_tuples: Vec<Vec<usize>>,
    tuple_index: HashMap<Vec<usize>, usize>,
    rows: Vec<SparseRow>,
    origins: Vec<RowOrigin>,
    instantiated: usize,
}

impl ConstraintSystem {
    pub fn params(&self) -> &LiftParams {
        &self.params
    }

    /// `C(B, s) * B` with `B = dim D^r_k`.
    pub fn unknown_count(&self) -> usize {
        self.unknown_tuples.len() * self.params.algebra().dim()
    }

    /// The nonzero rows. Rows that cancel identically are counted in
    /// [`Self::instantiated`] but not stored.
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn origins(&self) -> &[RowOrigin] {
        &self.origins
    }

    pub fn instantiated(&self) -> usize {
        self.instantiated
    }

    /// `(monomial positions, target position)` of an unknown.
    pub fn describe_unknown(&self, unknown: usize) -> (&[usize], usize) {
        let b = self.params.algebra().dim();
        (&self.unknown_tuples[unknown / b], unknown % b)
    }

    /// Resolves `F(x^{eps_1}, ..., x^{eps_s})(x^delta)`, given by basis
    /// positions, to a signed unknown; `None` if a monomial repeats.
    pub fn unknown(&self, monomials: &[usize], target: usize) -> Option<(usize, i8)> {
        let (sorted, sign) = sort_with_sign(monomials)?;
        let tuple = self.tuple_index[&sorted];
        Some((tuple * self.params.algebra().dim() + target, sign))
    }

    /// Writes the system in a MatrixMarket-style coordinate format with
    /// rational entries (`row col p/q`, one-based).
    pub fn write_matrix_market<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "%%MatrixMarket matrix coordinate rational general")?;
        writeln!(
            out,
            "% r={} k={} s={}",
            self.params.r(),
            self.params.k(),
            self.params.s()
        )?;
        let nnz: usize = self.rows.iter().map(Vec::len).sum();
        writeln!(out, "{} {} {}", self.rows.len(), self.unknown_count(), nnz)?;
        for (n, row) in self.rows.iter().enumerate() {
            for (col, value) in row {
                writeln!(out, "{} {} {}", n + 1, col + 1, rational::format(value))?;
            }
        }
        Ok(())
    }
}

/// `C(B, s) * B` without building anything.
pub fn unknown_count(params: &LiftParams) -> BigUint {
    let b = params.algebra().dim();
    binomial(b as i64, params.s() as i64) * BigUint::from(b)
}

/// Instantiates the product rule on every tuple of basis monomials.
///
/// For each selected slot `t`, every choice of the other `s - 1` arguments,
/// and every `(b, c, d)`, emits
/// `F(.., x^b x^c, ..)(x^d) - F(.., x^b, ..)(x^c x^d) - F(.., x^c, ..)(x^b x^d) = 0`,
/// dropping terms whose product is truncated to zero.
pub fn build_constraints(params: &LiftParams, options: &OracleOptions) -> Result<ConstraintSystem> {
    let count = unknown_count(params);
    if count > BigUint::from(options.max_unknowns) {
        return Err(Error::TooLarge {
            unknowns: count.to_u128().unwrap_or(u128::MAX),
            limit: options.max_unknowns,
        });
    }
    let algebra = params.algebra();
    let b = algebra.dim();
    let s = params.s();
    let unknown_tuples = increasing_tuples(b, s);
    let tuple_index = unknown_tuples
        .iter()
        .enumerate()
        .map(|(n, t)| (t.clone(), n))
        .collect();
    let mut system = ConstraintSystem {
        params: params.clone(),
        unknown_tuples,
        tuple_index,
        rows: Vec::new(),
        origins: Vec::new(),
        instantiated: 0,
    };
    if s == 0 {
        return Ok(system);
    }
    let slots: Vec<usize> = match options.slots {
        SlotSelection::All => (0..s).collect(),
        SlotSelection::LastOnly => vec![s - 1],
    };
    let products: Vec<Vec<Option<usize>>> = (0..b)
        .map(|x| (0..b).map(|y| algebra.multiply_positions(x, y)).collect())
        .collect();
    let other_tuples = all_tuples(b, s - 1);

    let jobs: Vec<(usize, &Vec<usize>)> = slots
        .iter()
        .flat_map(|&slot| other_tuples.iter().map(move |o| (slot, o)))
        .collect();
    let sys = &system;
    let built: Vec<Vec<(SparseRow, RowOrigin)>> = jobs
        .par_iter()
        .map(|&(slot, others)| {
            let mut out = Vec::with_capacity(b * b * b);
            let mut args = vec![0usize; s];
            let term = |args: &mut Vec<usize>,
                        value: usize,
                        target: usize,
                        coeff: i64,
                        row: &mut Vec<(usize, Rational)>| {
                let mut n = 0;
                for (pos, a) in args.iter_mut().enumerate() {
                    if pos == slot {
                        *a = value;
                    } else {
                        *a = others[n];
                        n += 1;
                    }
                }
                if let Some((unknown, sign)) = sys.unknown(args, target) {
                    row.push((unknown, rational::from_int(coeff * i64::from(sign))));
                }
            };
            for bb in 0..b {
                for cc in 0..b {
                    for dd in 0..b {
                        let mut row = Vec::with_capacity(3);
                        if let Some(bc) = products[bb][cc] {
                            term(&mut args, bc, dd, 1, &mut row);
                        }
                        if let Some(cd) = products[cc][dd] {
                            term(&mut args, bb, cd, -1, &mut row);
                        }
                        if let Some(bd) = products[bb][dd] {
                            term(&mut args, cc, bd, -1, &mut row);
                        }
                        out.push((
                            normalize_row(row),
                            RowOrigin {
                                slot,
                                others: others.clone(),
                                b: bb,
                                c: cc,
                                d: dd,
                            },
                        ));
                    }
                }
            }
            out
        })
        .collect();
    for (row, origin) in built.into_iter().flatten() {
        system.instantiated += 1;
        if !row.is_empty() {
            system.rows.push(row);
            system.origins.push(origin);
        }
    }
    Ok(system)
}

/// Every `len`-tuple over `0..b` (repeats allowed), lexicographically.
fn all_tuples(b: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..b).map(move |x| {
                    let mut t = prefix.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

/// Nullspace of a constraint system.
#[derive(Clone, Debug)]
pub struct Nullspace {
    pub dimension: usize,
    pub rank: usize,
    /// Dense vectors over the unknowns.
    pub basis: Vec<Vec<Rational>>,
}

pub fn nullspace(system: &ConstraintSystem) -> Nullspace {
    let mut echelon = Echelon::new(system.unknown_count());
    for row in &system.rows {
        echelon.insert(row.clone());
    }
    let basis = echelon.nullspace();
    Nullspace {
        dimension: basis.len(),
        rank: echelon.rank(),
        basis,
    }
}

/// The matrix of the map reading off `F(x^{i_1}, ..., x^{i_s})(x^alpha)` at
/// every element of `Z`, applied to each nullspace basis vector. Rows are
/// indexed by `Z`, columns by the basis.
pub fn iso_matrix(system: &ConstraintSystem, basis: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let params = &system.params;
    let algebra = params.algebra();
    let k = params.k();
    params
        .z()
        .iter()
        .map(|z| {
            let monomials: Vec<usize> = z
                .tuple
                .iter()
                .map(|&i| {
                    let unit = MultiIndex::unit(k, i).expect("axis below k");
                    algebra.position(&unit).expect("r >= 1 when Z has tuples")
                })
                .collect();
            let target = algebra.position(&z.alpha).expect("Z monomial in basis");
            let (unknown, sign) = system
                .unknown(&monomials, target)
                .expect("distinct axes give distinct monomials");
            basis
                .iter()
                .map(|v| {
                    if sign < 0 {
                        -v[unknown].clone()
                    } else {
                        v[unknown].clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// Whether reading off the `Z` values is a bijection from the nullspace:
/// the matrix from [`iso_matrix`] must be square and invertible.
pub fn check_iso(system: &ConstraintSystem, basis: &[Vec<Rational>]) -> bool {
    let z = system.params.z().len();
    if z != basis.len() {
        return false;
    }
    linalg::is_invertible(&iso_matrix(system, basis))
}

/// Evaluates a table on every unknown of the system.
pub fn expand_table(system: &ConstraintSystem, table: &LiftTable) -> Vec<Rational> {
    (0..system.unknown_count())
        .into_par_iter()
        .map(|unknown| {
            let (monomials, target) = system.describe_unknown(unknown);
            table.evaluate_positions(monomials, target)
        })
        .collect()
}

fn row_failures(system: &ConstraintSystem, vector: &[Rational], check: &str) -> Vec<Failure> {
    let basis = system.params.algebra().basis();
    system
        .rows
        .par_iter()
        .zip(system.origins.par_iter())
        .filter_map(|(row, origin)| {
            let value = dot(row, vector);
            if value.is_zero() {
                return None;
            }
            let mut witness: Vec<MultiIndex> =
                origin.others.iter().map(|&g| basis[g].clone()).collect();
            witness.extend([
                basis[origin.b].clone(),
                basis[origin.c].clone(),
                basis[origin.d].clone(),
            ]);
            Some(Failure {
                check: format!("{check}[slot {}]", origin.slot + 1),
                witness,
                expected: Rational::zero(),
                actual: value,
            })
        })
        .collect()
}

fn count_failure(check: &str, expected: usize, actual: usize) -> Failure {
    Failure {
        check: check.to_string(),
        witness: Vec::new(),
        expected: rational::from_int(expected as i64),
        actual: rational::from_int(actual as i64),
    }
}

/// Cross-checks the construction against the nullspace: every table built
/// from a standard-basis assignment satisfies every row, the tables span
/// the whole nullspace, and reading off `Z` is invertible on it.
pub fn compare_with_construction(
    params: &LiftParams,
    options: &OracleOptions,
) -> Result<VerificationReport> {
    let system = build_constraints(params, options)?;
    let null = nullspace(&system);
    let n = system.unknown_count();
    let mut report = VerificationReport::new(options.witness_limit);

    let mut expanded = Vec::with_capacity(params.z().len());
    let mut row_fails = Vec::new();
    for idx in 0..params.z().len() {
        let table = construct(&CoefficientAssignment::standard_basis(params, idx))?;
        let vector = expand_table(&system, &table);
        row_fails.extend(row_failures(&system, &vector, "constraints"));
        expanded.push(vector);
    }
    report.record("constraints", system.rows.len() * expanded.len(), row_fails);

    let rank_constructed = linalg::rank_dense(n, &expanded);
    let rank_null = linalg::rank_dense(n, &null.basis);
    let joint: Vec<Vec<Rational>> = expanded.iter().chain(&null.basis).cloned().collect();
    let rank_joint = linalg::rank_dense(n, &joint);
    let mut span_fails = Vec::new();
    if rank_constructed != params.z().len() {
        span_fails.push(count_failure(
            "span[independent]",
            params.z().len(),
            rank_constructed,
        ));
    }
    if rank_joint != rank_null {
        span_fails.push(count_failure(
            "span[constructed in nullspace]",
            rank_null,
            rank_joint,
        ));
    }
    if rank_joint != rank_constructed {
        span_fails.push(count_failure(
            "span[nullspace in constructed]",
            rank_constructed,
            rank_joint,
        ));
    }
    report.record("span", 3, span_fails);

    let iso_fails = if check_iso(&system, &null.basis) {
        Vec::new()
    } else {
        vec![count_failure("iso", params.z().len(), null.dimension)]
    };
    report.record("iso", 1, iso_fails);
    Ok(report)
}

/// Compares the nullspace with the rule imposed in every slot against the
/// nullspace with the rule imposed in the last slot only: equal dimension
/// and each basis satisfying the other system.
pub fn compare_slot_reduction(
    params: &LiftParams,
    options: &OracleOptions,
) -> Result<VerificationReport> {
    let all = build_constraints(
        params,
        &OracleOptions {
            slots: SlotSelection::All,
            ..options.clone()
        },
    )?;
    let last = build_constraints(
        params,
        &OracleOptions {
            slots: SlotSelection::LastOnly,
            ..options.clone()
        },
    )?;
    let null_all = nullspace(&all);
    let null_last = nullspace(&last);
    let mut report = VerificationReport::new(options.witness_limit);
    let dim_fails = if null_all.dimension == null_last.dimension && null_all.rank == null_last.rank
    {
        Vec::new()
    } else {
        vec![count_failure(
            "dimension",
            null_all.dimension,
            null_last.dimension,
        )]
    };
    report.record("dimension", 1, dim_fails);
    let mut contain = Vec::new();
    for v in &null_last.basis {
        contain.extend(row_failures(&all, v, "last-only in all"));
    }
    for v in &null_all.basis {
        contain.extend(row_failures(&last, v, "all in last-only"));
    }
    report.record(
        "containment",
        all.rows.len() * null_last.basis.len() + last.rows.len() * null_all.basis.len(),
        contain,
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift_space::{dimension, ZIndex};

    fn system(r: u32, k: usize, s: usize) -> ConstraintSystem {
        build_constraints(&LiftParams::new(r, k, s), &OracleOptions::default()).unwrap()
    }

    /// Does the system contain, up to scale, the given row?
    fn has_row(sys: &ConstraintSystem, row: SparseRow) -> bool {
        sys.rows().iter().any(|candidate| {
            candidate.len() == row.len() && candidate.iter().zip(&row).all(|(a, b)| a.0 == b.0) && {
                let scale = &candidate[0].1 / &row[0].1;
                candidate
                    .iter()
                    .zip(&row)
                    .all(|(a, b)| a.1 == &scale * &b.1)
            }
        })
    }

    #[test]
    fn dual_number_rows() {
        // basis of D^1_1: position 0 is 1, position 1 is x
        let sys = system(1, 1, 1);
        assert_eq!(sys.unknown_count(), 4);
        let f = |g: usize, d: usize| sys.unknown(&[g], d).unwrap().0;
        // F(x*x)(1) = F(x)(x) + F(x)(x) with x*x = 0
        assert!(has_row(&sys, vec![(f(1, 1), rational::from_int(-2))]));
        // F(1)(1) = 2 F(1)(1)
        assert!(has_row(&sys, vec![(f(0, 0), rational::from_int(-1))]));
        let null = nullspace(&sys);
        assert_eq!(null.dimension, 1);
        let v = &null.basis[0];
        assert_eq!(v.len(), 4);
        for (unknown, value) in v.iter().enumerate() {
            let expected = if unknown == f(1, 0) { 1 } else { 0 };
            assert_eq!(*value, rational::from_int(expected));
        }
        assert!(check_iso(&sys, &null.basis));
        assert_eq!(
            iso_matrix(&sys, &null.basis),
            vec![vec![rational::from_int(1)]]
        );
    }

    #[test]
    fn dual_space_has_no_rows() {
        let sys = system(2, 2, 0);
        assert!(sys.rows().is_empty());
        assert_eq!(sys.instantiated(), 0);
        assert_eq!(sys.unknown_count(), 6);
        let null = nullspace(&sys);
        assert_eq!(null.dimension, 6);
        assert!(check_iso(&sys, &null.basis));
    }

    #[test]
    fn small_nullspace_dimensions() {
        assert_eq!(nullspace(&system(1, 2, 1)).dimension, 3);
        for (r, k, s) in [(1, 1, 2), (2, 1, 2), (1, 2, 3)] {
            let null = nullspace(&system(r, k, s));
            assert_eq!(null.dimension, 0, "r={r} k={k} s={s}");
        }
        let sys = system(1, 2, 1);
        assert!(check_iso(&sys, &nullspace(&sys).basis));
    }

    #[test]
    fn iso_rejects_overconstrained_system() {
        let mut sys = system(1, 2, 1);
        let before = nullspace(&sys);
        // an extra independent constraint on a nullspace direction
        let pivot = before.basis[0].iter().position(|v| !v.is_zero()).unwrap();
        sys.rows.push(vec![(pivot, rational::from_int(1))]);
        let after = nullspace(&sys);
        assert_eq!(after.dimension, before.dimension - 1);
        assert!(!check_iso(&sys, &after.basis));
    }

    #[test]
    fn construction_matches_oracle_on_small_grid() {
        for r in 1..=2 {
            for k in 1..=2 {
                for s in 0..=2 {
                    let p = LiftParams::new(r, k, s);
                    let report = compare_with_construction(&p, &OracleOptions::default()).unwrap();
                    assert!(report.passed, "{p:?}: {report:?}");
                }
            }
        }
    }

    #[test]
    fn expanded_hand_trace_value() {
        let p = LiftParams::new(1, 2, 1);
        let sys = build_constraints(&p, &OracleOptions::default()).unwrap();
        let z = ZIndex::new(vec![0], MultiIndex::new(vec![0, 1]));
        let n = p.z().iter().position(|x| x == &z).unwrap();
        let table = construct(&CoefficientAssignment::standard_basis(&p, n)).unwrap();
        let v = expand_table(&sys, &table);
        let algebra = p.algebra();
        let x1 = algebra.position(&MultiIndex::new(vec![1, 0])).unwrap();
        let x2 = algebra.position(&MultiIndex::new(vec![0, 1])).unwrap();
        let (unknown, sign) = sys.unknown(&[x2], x1).unwrap();
        assert_eq!(sign, 1);
        assert_eq!(v[unknown], rational::from_int(-1));
        let null = nullspace(&sys);
        let mut e = Echelon::new(sys.unknown_count());
        for b in &null.basis {
            e.insert(linalg::dense_to_sparse(b));
        }
        assert!(e.contains(linalg::dense_to_sparse(&v)));
        assert_eq!(BigUint::from(null.dimension), dimension(&p));
    }

    #[test]
    fn size_guard() {
        let p = LiftParams::new(3, 4, 2);
        let err = build_constraints(&p, &OracleOptions::default())
            .err()
            .unwrap();
        // B = 35, C(35, 2) * 35 = 20825
        assert_eq!(
            err,
            Error::TooLarge {
                unknowns: 20_825,
                limit: 20_000
            }
        );
        assert_eq!(unknown_count(&p), BigUint::from(20_825u32));
    }

    #[test]
    fn slot_reduction_small() {
        for (r, k, s) in [(1, 2, 2), (2, 2, 2), (1, 3, 2)] {
            let report =
                compare_slot_reduction(&LiftParams::new(r, k, s), &OracleOptions::default())
                    .unwrap();
            assert!(report.passed, "{report:?}");
        }
    }

    #[test]
    fn matrix_market_dump() {
        let sys = system(1, 1, 1);
        let mut out = Vec::new();
        sys.write_matrix_market(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("%%MatrixMarket matrix coordinate rational general")
        );
        assert_eq!(lines.next(), Some("% r=1 k=1 s=1"));
        let header: Vec<usize> = lines
            .next()
            .unwrap()
            .split(' ')
            .map(|x| x.parse().unwrap())
            .collect();
        assert_eq!(header[0], sys.rows().len());
        assert_eq!(header[1], 4);
        assert_eq!(lines.count(), header[2]);
    }
}

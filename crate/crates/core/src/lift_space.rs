//! Skew-symmetric `s`-linear maps `F : D^r_k x ... x D^r_k -> (D^r_k)^*`
//! satisfying the product rule in every slot, described through their
//! values on degree-one generators.
//!
//! Such a map is determined by the numbers `F(x^{i_1}, ..., x^{i_s})(x^alpha)`
//! for `i_1 < ... < i_s` and `|alpha| <= r`, and these in turn are determined
//! freely by their values on the index set `Z` (see [`LiftParams::contains`]).
//! [`construct`] fills in the rest, [`LiftTable::evaluate`] extends to
//! arbitrary algebra elements, and [`LiftTable::extract_coefficients`] reads
//! the `Z` values back.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiindex::{binomial, increasing_tuples, sort_with_sign, MultiIndex};
use crate::rational::{self, Rational};
use crate::weil_algebra::{AlgebraElement, AlgebraParams};

/// The triple `(r, k, s)` with the derived index layout shared by every
/// assignment and table over it.
#[derive(Clone)]
pub struct LiftParams {
    algebra: Arc<AlgebraParams>,
    s: usize,
    layout: Arc<Layout>,
}

struct Layout {
    /// Strictly increasing `s`-tuples of axes, lexicographic; the table rows.
    tuples: Vec<Vec<usize>>,
    tuple_rows: HashMap<Vec<usize>, usize>,
    z: Vec<ZIndex>,
    /// `(row, column)` of each `Z` element, parallel to `z`.
    z_cells: Vec<(usize, usize)>,
    z_positions: HashMap<(usize, usize), usize>,
}

impl LiftParams {
    pub fn new(r: u32, k: usize, s: usize) -> Self {
        Self::over(AlgebraParams::new(r, k), s)
    }

    pub fn over(algebra: Arc<AlgebraParams>, s: usize) -> Self {
        let tuples = increasing_tuples(algebra.k(), s);
        let tuple_rows = tuples
            .iter()
            .enumerate()
            .map(|(row, t)| (t.clone(), row))
            .collect();
        let mut z = Vec::new();
        let mut z_cells = Vec::new();
        for (row, tuple) in tuples.iter().enumerate() {
            for (col, alpha) in algebra.basis().iter().enumerate() {
                if in_z(algebra.r(), tuple, alpha) {
                    z.push(ZIndex {
                        tuple: tuple.clone(),
                        alpha: alpha.clone(),
                    });
                    z_cells.push((row, col));
                }
            }
        }
        let z_positions = z_cells
            .iter()
            .enumerate()
            .map(|(n, &cell)| (cell, n))
            .collect();
        LiftParams {
            algebra,
            s,
            layout: Arc::new(Layout {
                tuples,
                tuple_rows,
                z,
                z_cells,
                z_positions,
            }),
        }
    }

    pub fn r(&self) -> u32 {
        self.algebra.r()
    }

    pub fn k(&self) -> usize {
        self.algebra.k()
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn algebra(&self) -> &Arc<AlgebraParams> {
        &self.algebra
    }

    /// Table rows: strictly increasing `s`-tuples of 0-based axes.
    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.layout.tuples
    }

    pub fn tuple_row(&self, tuple: &[usize]) -> Option<usize> {
        self.layout.tuple_rows.get(tuple).copied()
    }

    /// The index set `Z` in canonical order.
    pub fn z(&self) -> &[ZIndex] {
        &self.layout.z
    }

    /// Whether `(tuple, alpha)` belongs to `Z`: the tuple is strictly
    /// increasing and either `|alpha| < r`, or `|alpha| = r` and the last
    /// tuple entry is below the largest axis in the support of `alpha`.
    /// With `s = 0` every monomial of degree at most `r` qualifies.
    pub fn contains(&self, tuple: &[usize], alpha: &MultiIndex) -> bool {
        tuple.len() == self.s
            && alpha.len() == self.k()
            && alpha.degree() <= self.r()
            && tuple.iter().all(|&i| i < self.k())
            && in_z(self.r(), tuple, alpha)
    }

    fn same_shape(&self, other: &LiftParams) -> bool {
        self.s == other.s && self.algebra.same_algebra(&other.algebra)
    }

    fn check_same(&self, other: &LiftParams) -> Result<()> {
        self.algebra.check_same(&other.algebra)?;
        if self.s != other.s {
            return Err(Error::ArityMismatch {
                expected: self.s,
                actual: other.s,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for LiftParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(r={}, k={}, s={})", self.r(), self.k(), self.s)
    }
}

impl PartialEq for LiftParams {
    fn eq(&self, other: &Self) -> bool {
        self.same_shape(other)
    }
}

impl Eq for LiftParams {}

fn in_z(r: u32, tuple: &[usize], alpha: &MultiIndex) -> bool {
    if tuple.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    let degree = alpha.degree();
    match tuple.last() {
        None => degree <= r,
        Some(&last) => {
            degree < r || (degree == r && alpha.max_support().is_some_and(|top| last < top))
        }
    }
}

/// An element `(i_1 < ... < i_s, alpha)` of `Z`, axes 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZIndex {
    pub tuple: Vec<usize>,
    pub alpha: MultiIndex,
}

impl ZIndex {
    pub fn new(tuple: Vec<usize>, alpha: MultiIndex) -> Self {
        ZIndex { tuple, alpha }
    }

    /// `{"i": [...], "alpha": [...]}` with one-based axis labels.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "i": one_based(&self.tuple), "alpha": self.alpha })
    }
}

impl fmt::Display for ZIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.tuple.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "(({}), {})", labels.join(","), self.alpha)
    }
}

impl fmt::Debug for ZIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The index set `Z` in canonical order: tuples lexicographically, then
/// monomials in basis order.
pub fn enumerate_z(params: &LiftParams) -> Vec<ZIndex> {
    params.z().to_vec()
}

/// `C(r+s-1, s) * C(r+k, r+s)`, valid for all non-negative `r`, `k`, `s`.
pub fn dimension(params: &LiftParams) -> BigUint {
    dimension_of(params.r(), params.k(), params.s())
}

pub fn dimension_of(r: u32, k: usize, s: usize) -> BigUint {
    let (r, k, s) = (r as i64, k as i64, s as i64);
    binomial(r + s - 1, s) * binomial(r + k, r + s)
}

/// A rational value for every element of `Z`.
#[derive(Clone, PartialEq, Eq)]
pub struct CoefficientAssignment {
    params: LiftParams,
    /// Parallel to `params.z()`.
    values: Vec<Rational>,
}

impl CoefficientAssignment {
    pub fn zero(params: &LiftParams) -> Self {
        CoefficientAssignment {
            params: params.clone(),
            values: vec![Rational::zero(); params.z().len()],
        }
    }

    /// The assignment that is one at the `n`-th element of `Z` and zero
    /// elsewhere.
    pub fn standard_basis(params: &LiftParams, n: usize) -> Self {
        let mut out = Self::zero(params);
        out.values[n] = rational::one();
        out
    }

    /// Values listed in canonical `Z` order.
    pub fn from_values(params: &LiftParams, values: Vec<Rational>) -> Result<Self> {
        if values.len() != params.z().len() {
            return Err(Error::Coverage(format!(
                "expected {} values, got {}",
                params.z().len(),
                values.len()
            )));
        }
        Ok(CoefficientAssignment {
            params: params.clone(),
            values,
        })
    }

    /// Builds an assignment from explicit `(ZIndex, value)` pairs, which must
    /// list every element of `Z` exactly once and nothing else.
    pub fn from_entries(
        params: &LiftParams,
        entries: impl IntoIterator<Item = (ZIndex, Rational)>,
    ) -> Result<Self> {
        let mut values: Vec<Option<Rational>> = vec![None; params.z().len()];
        for (z, value) in entries {
            let pos = z_position(params, &z)
                .ok_or_else(|| Error::Coverage(format!("{z} is not an element of Z")))?;
            if values[pos].replace(value).is_some() {
                return Err(Error::Coverage(format!("duplicate entry for {z}")));
            }
        }
        let values = values
            .into_iter()
            .enumerate()
            .map(|(pos, v)| {
                v.ok_or_else(|| Error::Coverage(format!("missing {}", params.z()[pos])))
            })
            .collect::<Result<_>>()?;
        Ok(CoefficientAssignment {
            params: params.clone(),
            values,
        })
    }

    /// Random values `p/q` with `|p| <= 9`, `1 <= q <= 9`.
    pub fn random<R: Rng + ?Sized>(params: &LiftParams, rng: &mut R) -> Self {
        let values = (0..params.z().len())
            .map(|_| rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
            .collect();
        CoefficientAssignment {
            params: params.clone(),
            values,
        }
    }

    /// `a * lhs + b * rhs`.
    pub fn linear_combination(
        a: &Rational,
        lhs: &CoefficientAssignment,
        b: &Rational,
        rhs: &CoefficientAssignment,
    ) -> Result<Self> {
        lhs.params.check_same(&rhs.params)?;
        let values = lhs
            .values
            .iter()
            .zip(&rhs.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(CoefficientAssignment {
            params: lhs.params.clone(),
            values,
        })
    }

    pub fn params(&self) -> &LiftParams {
        &self.params
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn get(&self, z: &ZIndex) -> Option<&Rational> {
        z_position(&self.params, z).map(|pos| &self.values[pos])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ZIndex, &Rational)> {
        self.params.z().iter().zip(&self.values)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = AssignmentDoc {
            r: self.params.r(),
            k: self.params.k(),
            s: self.params.s(),
            values: self
                .iter()
                .map(|(z, c)| AssignmentEntryDoc {
                    i: one_based(&z.tuple),
                    alpha: z.alpha.clone(),
                    c: c.clone(),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("assignment serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: AssignmentDoc = serde_json::from_value(value.clone())?;
        let params = LiftParams::new(doc.r, doc.k, doc.s);
        let entries = doc
            .values
            .into_iter()
            .map(|e| Ok((ZIndex::new(zero_based(&e.i, doc.k)?, e.alpha), e.c)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(&params, entries)
    }
}

impl fmt::Debug for CoefficientAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter()).finish()
    }
}

fn z_position(params: &LiftParams, z: &ZIndex) -> Option<usize> {
    if !params.contains(&z.tuple, &z.alpha) {
        return None;
    }
    let row = params.tuple_row(&z.tuple)?;
    let col = params.algebra.position(&z.alpha)?;
    params.layout.z_positions.get(&(row, col)).copied()
}

/// The values `F(x^{i_1}, ..., x^{i_s})(x^alpha)` for every strictly
/// increasing tuple and every basis monomial. All other values of `F` are
/// derived from these on demand.
#[derive(Clone, PartialEq, Eq)]
pub struct LiftTable {
    params: LiftParams,
    /// Row-major: one row per tuple, one column per basis monomial.
    cells: Vec<Rational>,
}

impl LiftTable {
    pub fn zeros(params: &LiftParams) -> Self {
        LiftTable {
            params: params.clone(),
            cells: vec![Rational::zero(); params.tuples().len() * params.algebra.dim()],
        }
    }

    pub fn params(&self) -> &LiftParams {
        &self.params
    }

    pub fn rows(&self) -> usize {
        self.params.tuples().len()
    }

    pub fn cols(&self) -> usize {
        self.params.algebra.dim()
    }

    pub fn cells(&self) -> &[Rational] {
        &self.cells
    }

    pub fn cell(&self, row: usize, col: usize) -> &Rational {
        &self.cells[row * self.cols() + col]
    }

    fn cell_mut(&mut self, row: usize, col: usize) -> &mut Rational {
        let cols = self.cols();
        &mut self.cells[row * cols + col]
    }

    /// Overwrites the cell at a strictly increasing tuple and basis monomial.
    pub fn set(&mut self, tuple: &[usize], alpha: &MultiIndex, value: Rational) -> Result<()> {
        self.params.algebra.check_monomial(alpha)?;
        let row = self.params.tuple_row(tuple).ok_or_else(|| {
            Error::MalformedTable(format!("{tuple:?} is not an increasing tuple"))
        })?;
        let col = self
            .params
            .algebra
            .position(alpha)
            .expect("checked monomial");
        *self.cell_mut(row, col) = value;
        Ok(())
    }

    /// `F(x^{j_1}, ..., x^{j_s})(x^alpha)` for an arbitrary axis tuple: zero
    /// when an axis repeats, otherwise the sign of the sorting permutation
    /// times the stored cell.
    pub fn lookup_skew(&self, tuple: &[usize], alpha: &MultiIndex) -> Result<Rational> {
        self.check_axes(tuple)?;
        self.params.algebra.check_monomial(alpha)?;
        let col = self
            .params
            .algebra
            .position(alpha)
            .expect("checked monomial");
        Ok(self.lookup_skew_at(tuple, col))
    }

    pub(crate) fn lookup_skew_at(&self, tuple: &[usize], col: usize) -> Rational {
        match sort_with_sign(tuple) {
            None => Rational::zero(),
            Some((sorted, sign)) => {
                let row = self.params.tuple_row(&sorted).expect("sorted axis tuple");
                let value = self.cell(row, col);
                if sign < 0 {
                    -value
                } else {
                    value.clone()
                }
            }
        }
    }

    fn check_axes(&self, tuple: &[usize]) -> Result<()> {
        if tuple.len() != self.params.s {
            return Err(Error::ArityMismatch {
                expected: self.params.s,
                actual: tuple.len(),
            });
        }
        let k = self.params.k();
        match tuple.iter().find(|&&i| i >= k) {
            Some(&axis) => Err(Error::AxisOutOfRange { axis, k }),
            None => Ok(()),
        }
    }

    /// `F(x^{gamma_1}, ..., x^{gamma_s})(x^delta)` for basis monomials.
    ///
    /// Each slot is expanded through its support,
    /// `sum_{j_1, ..., j_s} gamma_1^{j_1} ... gamma_s^{j_s}
    ///  F(x^{j_1}, ..., x^{j_s})(x^{gamma_1 - e_{j_1} + ... + gamma_s - e_{j_s} + delta})`,
    /// and the value is zero whenever `|gamma_1 + ... + gamma_s + delta| > r + s`.
    pub fn evaluate_monomials(
        &self,
        gammas: &[MultiIndex],
        delta: &MultiIndex,
    ) -> Result<Rational> {
        if gammas.len() != self.params.s {
            return Err(Error::ArityMismatch {
                expected: self.params.s,
                actual: gammas.len(),
            });
        }
        let algebra = &self.params.algebra;
        for gamma in gammas {
            algebra.check_monomial(gamma)?;
        }
        algebra.check_monomial(delta)?;
        let refs: Vec<&MultiIndex> = gammas.iter().collect();
        Ok(self.evaluate_unchecked(&refs, delta))
    }

    /// [`Self::evaluate_monomials`] on basis positions.
    pub fn evaluate_positions(&self, gammas: &[usize], delta: usize) -> Rational {
        let basis = self.params.algebra.basis();
        let refs: Vec<&MultiIndex> = gammas.iter().map(|&g| &basis[g]).collect();
        self.evaluate_unchecked(&refs, &basis[delta])
    }

    fn evaluate_unchecked(&self, gammas: &[&MultiIndex], delta: &MultiIndex) -> Rational {
        let s = gammas.len();
        let total: u32 = gammas.iter().map(|g| g.degree()).sum::<u32>() + delta.degree();
        if total > self.params.r() + s as u32 {
            return Rational::zero();
        }
        if gammas.iter().any(|g| g.is_zero()) {
            return Rational::zero();
        }
        let mut exponent: Vec<u32> = delta.entries().to_vec();
        for gamma in gammas {
            for (slot, e) in exponent.iter_mut().zip(gamma.entries()) {
                *slot += e;
            }
        }
        let mut axes = Vec::with_capacity(s);
        let mut acc = BigInt::zero();
        let mut denom_acc = Rational::zero();
        self.expand_slots(
            gammas,
            &mut axes,
            1,
            &mut exponent,
            &mut acc,
            &mut denom_acc,
        );
        denom_acc + Rational::from_integer(acc)
    }

    /// Depth-first walk over `j_1 in supp gamma_1, ..., j_s in supp gamma_s`.
    /// Integer-valued contributions are summed in `int_acc`; the rest in
    /// `acc`.
    fn expand_slots(
        &self,
        gammas: &[&MultiIndex],
        axes: &mut Vec<usize>,
        weight: u64,
        exponent: &mut Vec<u32>,
        int_acc: &mut BigInt,
        acc: &mut Rational,
    ) {
        let slot = axes.len();
        if slot == gammas.len() {
            let alpha = MultiIndex::new(exponent.clone());
            let col = self
                .params
                .algebra
                .position(&alpha)
                .expect("expanded exponent stays within degree r");
            let value = self.lookup_skew_at(axes, col);
            if value.is_zero() {
                return;
            }
            if value.is_integer() {
                *int_acc += value.to_integer() * weight;
            } else {
                *acc += value * Rational::from_integer(BigInt::from(weight));
            }
            return;
        }
        let gamma = gammas[slot];
        for j in gamma.support_iter() {
            // a repeated axis contributes nothing
            if axes.contains(&j) {
                continue;
            }
            axes.push(j);
            exponent[j] -= 1;
            self.expand_slots(
                gammas,
                axes,
                weight * u64::from(gamma.get(j)),
                exponent,
                int_acc,
                acc,
            );
            exponent[j] += 1;
            axes.pop();
        }
    }

    /// Full multilinear extension to arbitrary algebra elements.
    pub fn evaluate(&self, args: &[AlgebraElement], d: &AlgebraElement) -> Result<Rational> {
        if args.len() != self.params.s {
            return Err(Error::ArityMismatch {
                expected: self.params.s,
                actual: args.len(),
            });
        }
        let algebra = &self.params.algebra;
        for a in args.iter().chain(std::iter::once(d)) {
            algebra.check_same(a.params())?;
        }
        let arg_terms: Vec<Vec<(usize, &Rational)>> =
            args.iter().map(|a| a.terms().collect()).collect();
        let mut total = Rational::zero();
        let mut positions = Vec::with_capacity(args.len());
        for (delta, cd) in d.terms() {
            self.expand_args(&arg_terms, &mut positions, cd.clone(), delta, &mut total);
        }
        Ok(total)
    }

    fn expand_args(
        &self,
        arg_terms: &[Vec<(usize, &Rational)>],
        positions: &mut Vec<usize>,
        coeff: Rational,
        delta: usize,
        total: &mut Rational,
    ) {
        let slot = positions.len();
        if slot == arg_terms.len() {
            let value = self.evaluate_positions(positions, delta);
            if !value.is_zero() {
                *total += coeff * value;
            }
            return;
        }
        for &(pos, c) in &arg_terms[slot] {
            positions.push(pos);
            self.expand_args(arg_terms, positions, &coeff * c, delta, total);
            positions.pop();
        }
    }

    /// Reads the values at the `Z` positions back out.
    pub fn extract_coefficients(&self) -> CoefficientAssignment {
        let values = self
            .params
            .layout
            .z_cells
            .iter()
            .map(|&(row, col)| self.cell(row, col).clone())
            .collect();
        CoefficientAssignment {
            params: self.params.clone(),
            values,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let basis = self.params.algebra.basis();
        let cells = self
            .params
            .tuples()
            .iter()
            .enumerate()
            .flat_map(|(row, tuple)| {
                basis.iter().enumerate().map(move |(col, alpha)| CellDoc {
                    i: one_based(tuple),
                    alpha: alpha.clone(),
                    v: self.cell(row, col).clone(),
                })
            })
            .collect();
        let doc = TableDoc {
            r: self.params.r(),
            k: self.params.k(),
            s: self.params.s(),
            cells,
        };
        serde_json::to_value(doc).expect("table serializes")
    }

    /// Parses a table document; every cell must be listed exactly once.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: TableDoc = serde_json::from_value(value.clone())?;
        let params = LiftParams::new(doc.r, doc.k, doc.s);
        let mut table = LiftTable::zeros(&params);
        let mut seen = vec![false; table.cells.len()];
        for cell in doc.cells {
            let tuple = zero_based(&cell.i, doc.k)?;
            let row = params.tuple_row(&tuple).ok_or_else(|| {
                Error::MalformedTable(format!("{:?} is not a strictly increasing tuple", cell.i))
            })?;
            params
                .algebra
                .check_monomial(&cell.alpha)
                .map_err(|e| Error::MalformedTable(e.to_string()))?;
            let col = params
                .algebra
                .position(&cell.alpha)
                .expect("checked monomial");
            let idx = row * table.cols() + col;
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::MalformedTable(format!(
                    "duplicate cell {:?} {}",
                    cell.i, cell.alpha
                )));
            }
            table.cells[idx] = cell.v;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            let row = missing / table.cols();
            let col = missing % table.cols();
            return Err(Error::MalformedTable(format!(
                "missing cell {:?} {}",
                one_based(&params.tuples()[row]),
                params.algebra.basis()[col]
            )));
        }
        Ok(table)
    }
}

impl fmt::Debug for LiftTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "LiftTable {:?}", self.params)?;
        for (row, tuple) in self.params.tuples().iter().enumerate() {
            let values: Vec<String> = (0..self.cols())
                .map(|col| self.cell(row, col).to_string())
                .collect();
            writeln!(f, "  {:?}: [{}]", one_based(tuple), values.join(", "))?;
        }
        Ok(())
    }
}

/// Builds the unique table whose values on `Z` are `assignment`.
///
/// Cells in `Z` are copied. Every other cell has `|alpha| = r` and
/// `i_s >= max supp alpha`, and is set to
/// `-1/(alpha^{i_s} + 1) * sum_{j in supp alpha, j != i_s}
///  alpha^j F(x^{i_1}, ..., x^{i_{s-1}}, x^j)(x^{alpha + e_{i_s} - e_j})`.
/// Each lookup on the right lands in `Z` once the tuple is sorted, so a
/// single pass suffices; a lookup outside `Z` is reported as
/// [`Error::Internal`].
pub fn construct(assignment: &CoefficientAssignment) -> Result<LiftTable> {
    let params = &assignment.params;
    if assignment.values.len() != params.z().len() {
        return Err(Error::Coverage(format!(
            "expected {} values, got {}",
            params.z().len(),
            assignment.values.len()
        )));
    }
    let mut table = LiftTable::zeros(params);
    for (&(row, col), value) in params.layout.z_cells.iter().zip(&assignment.values) {
        *table.cell_mut(row, col) = value.clone();
    }
    let s = params.s();
    if s == 0 {
        return Ok(table);
    }
    let algebra = Arc::clone(&params.algebra);
    let r = params.r();
    for (row, tuple) in params.tuples().iter().enumerate() {
        let last = tuple[s - 1];
        for (col, alpha) in algebra.basis().iter().enumerate() {
            if in_z(r, tuple, alpha) {
                continue;
            }
            let mut sum = Rational::zero();
            for j in alpha.support_iter().filter(|&j| j != last) {
                let mut shifted = tuple.clone();
                shifted[s - 1] = j;
                let Some((sorted, sign)) = sort_with_sign(&shifted) else {
                    continue;
                };
                let target = alpha.add_unit(last)?.sub_unit(j)?;
                if !in_z(r, &sorted, &target) {
                    return Err(Error::Internal(format!(
                        "cell ({:?}, {alpha}) refers to ({:?}, {target}) outside Z",
                        one_based(tuple),
                        one_based(&sorted)
                    )));
                }
                let target_row = params.tuple_row(&sorted).expect("sorted tuple");
                let target_col = algebra.position(&target).expect("degree r monomial");
                let value = table.cell(target_row, target_col);
                let weight = Rational::from_integer(BigInt::from(alpha.get(j)));
                if sign < 0 {
                    sum -= value * weight;
                } else {
                    sum += value * weight;
                }
            }
            let scale = Rational::from_integer(BigInt::from(alpha.get(last) + 1));
            *table.cell_mut(row, col) = -sum / scale;
        }
    }
    Ok(table)
}

fn one_based(tuple: &[usize]) -> Vec<usize> {
    tuple.iter().map(|i| i + 1).collect()
}

fn zero_based(labels: &[usize], k: usize) -> Result<Vec<usize>> {
    labels
        .iter()
        .map(|&i| {
            if i == 0 || i > k {
                Err(Error::AxisOutOfRange { axis: i, k })
            } else {
                Ok(i - 1)
            }
        })
        .collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentDoc {
    r: u32,
    k: usize,
    s: usize,
    values: Vec<AssignmentEntryDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentEntryDoc {
    i: Vec<usize>,
    alpha: MultiIndex,
    #[serde(with = "rational::as_string")]
    c: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    r: u32,
    k: usize,
    s: usize,
    cells: Vec<CellDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellDoc {
    i: Vec<usize>,
    alpha: MultiIndex,
    #[serde(with = "rational::as_string")]
    v: Rational,
}

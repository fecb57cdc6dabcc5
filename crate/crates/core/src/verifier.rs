//! Exhaustive checks that a [`LiftTable`] describes a skew-symmetric map
//! satisfying the product rule
//!
//! ```text
//! F(a_1, ..., bc, ..., a_s)(d) = F(a_1, ..., b, ..., a_s)(cd) + F(a_1, ..., c, ..., a_s)(bd)
//! ```
//!
//! Both sides are multilinear, so checking every tuple of basis monomials is
//! a complete check. Failures are collected with their witnesses rather than
//! aborting at the first one.

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::lift_space::LiftTable;
use crate::multiindex::{enumerate_degree_exactly, increasing_tuples, MultiIndex};
use crate::rational::{self, Rational};

pub const DEFAULT_WITNESS_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    /// The monomials (or, for `eq7`, unit vectors and `epsilon`) the check
    /// was instantiated on.
    pub witness: Vec<MultiIndex>,
    #[serde(with = "rational::as_string")]
    pub expected: Rational,
    #[serde(with = "rational::as_string")]
    pub actual: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub evaluated: usize,
    pub failed: usize,
}

/// Outcome of one or more checks. `passed` holds iff no instance failed;
/// `failures` keeps only the first `witness_limit` witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<Failure>,
    pub witness_limit: usize,
}

impl VerificationReport {
    pub fn new(witness_limit: usize) -> Self {
        VerificationReport {
            passed: true,
            checks: Vec::new(),
            failures: Vec::new(),
            witness_limit,
        }
    }

    pub fn total_failed(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub(crate) fn record(&mut self, name: &str, evaluated: usize, failures: Vec<Failure>) {
        let failed = failures.len();
        self.checks.push(CheckSummary {
            name: name.to_string(),
            evaluated,
            failed,
        });
        let room = self.witness_limit.saturating_sub(self.failures.len());
        self.failures.extend(failures.into_iter().take(room));
        self.passed &= failed == 0;
    }

    pub fn merge(&mut self, other: VerificationReport) {
        self.passed &= other.passed;
        self.checks.extend(other.checks);
        let room = self.witness_limit.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Check configuration.
#[derive(Clone, Debug)]
pub struct Verifier {
    pub witness_limit: usize,
    /// Check the product rule in every slot instead of the last one only.
    pub all_slots: bool,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            witness_limit: DEFAULT_WITNESS_LIMIT,
            all_slots: false,
        }
    }
}

impl Verifier {
    pub fn run_all(&self, table: &LiftTable) -> VerificationReport {
        let mut report = self.skew(table);
        report.merge(self.leibniz(table));
        report.merge(self.eq7(table));
        report
    }

    /// For every `s`-tuple of basis monomials and every target monomial,
    /// swapping two slots negates the value, and a repeated monomial gives
    /// zero.
    pub fn skew(&self, table: &LiftTable) -> VerificationReport {
        let s = table.params().s();
        let b = table.cols();
        let basis = table.params().algebra().basis();
        let (evaluated, failures) = par_tuples(b, s, |tuple| {
            let mut evaluated = 0;
            let mut failures = Vec::new();
            let repeated = (0..s).any(|x| (x + 1..s).any(|y| tuple[x] == tuple[y]));
            for delta in 0..b {
                let value = table.evaluate_positions(tuple, delta);
                let witness = || {
                    let mut w: Vec<MultiIndex> = tuple.iter().map(|&g| basis[g].clone()).collect();
                    w.push(basis[delta].clone());
                    w
                };
                if repeated {
                    evaluated += 1;
                    if !value.is_zero() {
                        failures.push(Failure {
                            check: "skew".into(),
                            witness: witness(),
                            expected: Rational::zero(),
                            actual: value.clone(),
                        });
                    }
                }
                for x in 0..s {
                    for y in x + 1..s {
                        let mut swapped = tuple.to_vec();
                        swapped.swap(x, y);
                        let other = table.evaluate_positions(&swapped, delta);
                        evaluated += 1;
                        if other != -value.clone() {
                            failures.push(Failure {
                                check: "skew".into(),
                                witness: witness(),
                                expected: -value.clone(),
                                actual: other,
                            });
                        }
                    }
                }
            }
            (evaluated, failures)
        });
        let mut report = VerificationReport::new(self.witness_limit);
        report.record("skew", evaluated, failures);
        report
    }

    /// `F(a_1, ..., a_{s-1}, x^{beta+gamma})(x^delta)
    ///  = F(a_1, ..., x^beta)(x^{gamma+delta}) + F(a_1, ..., x^gamma)(x^{beta+delta})`
    /// over all basis monomials, with truncated products contributing zero.
    /// Only the last slot is checked unless `all_slots` is set.
    pub fn leibniz(&self, table: &LiftTable) -> VerificationReport {
        let s = table.params().s();
        let algebra = table.params().algebra();
        let basis = algebra.basis();
        let b = basis.len();
        let mut report = VerificationReport::new(self.witness_limit);
        if s == 0 {
            report.record("leibniz", 0, Vec::new());
            return report;
        }
        let slots: Vec<usize> = if self.all_slots {
            (0..s).collect()
        } else {
            vec![s - 1]
        };
        let (evaluated, failures) = par_tuples(b, s - 1, |others| {
            let mut evaluated = 0;
            let mut failures = Vec::new();
            let mut args = vec![0usize; s];
            for &slot in &slots {
                let place = |args: &mut Vec<usize>, value: usize| {
                    let mut n = 0;
                    for (pos, a) in args.iter_mut().enumerate() {
                        if pos == slot {
                            *a = value;
                        } else {
                            *a = others[n];
                            n += 1;
                        }
                    }
                };
                for beta in 0..b {
                    for gamma in 0..b {
                        let product = algebra.multiply_positions(beta, gamma);
                        for delta in 0..b {
                            let lhs = match product {
                                Some(bg) => {
                                    place(&mut args, bg);
                                    table.evaluate_positions(&args, delta)
                                }
                                None => Rational::zero(),
                            };
                            let mut rhs = Rational::zero();
                            if let Some(gd) = algebra.multiply_positions(gamma, delta) {
                                place(&mut args, beta);
                                rhs += table.evaluate_positions(&args, gd);
                            }
                            if let Some(bd) = algebra.multiply_positions(beta, delta) {
                                place(&mut args, gamma);
                                rhs += table.evaluate_positions(&args, bd);
                            }
                            evaluated += 1;
                            if lhs != rhs {
                                let mut witness: Vec<MultiIndex> =
                                    others.iter().map(|&g| basis[g].clone()).collect();
                                witness.extend([
                                    basis[beta].clone(),
                                    basis[gamma].clone(),
                                    basis[delta].clone(),
                                ]);
                                failures.push(Failure {
                                    check: format!("leibniz[slot {}]", slot + 1),
                                    witness,
                                    expected: rhs,
                                    actual: lhs,
                                });
                            }
                        }
                    }
                }
            }
            (evaluated, failures)
        });
        report.record("leibniz", evaluated, failures);
        report
    }

    /// For every strictly increasing `(s-1)`-tuple `g` and every `epsilon`
    /// of degree `r + 1`:
    /// `sum_{h in supp epsilon} epsilon^h F(x^{g_1}, ..., x^{g_{s-1}}, x^h)(x^{epsilon - e_h}) = 0`.
    pub fn eq7(&self, table: &LiftTable) -> VerificationReport {
        let params = table.params();
        let s = params.s();
        let k = params.k();
        let mut report = VerificationReport::new(self.witness_limit);
        if s == 0 {
            report.record("eq7", 0, Vec::new());
            return report;
        }
        let epsilons = enumerate_degree_exactly(k, params.r() + 1);
        let algebra = params.algebra();
        let prefixes = increasing_tuples(k, s - 1);
        let results: Vec<(usize, Vec<Failure>)> = prefixes
            .par_iter()
            .map(|prefix| {
                let mut failures = Vec::new();
                let mut axes = prefix.clone();
                axes.push(0);
                for eps in &epsilons {
                    let mut sum = Rational::zero();
                    for h in eps.support_iter() {
                        axes[s - 1] = h;
                        let target = eps.sub_unit(h).expect("h in support");
                        let col = algebra.position(&target).expect("degree r monomial");
                        sum += table.lookup_skew_at(&axes, col)
                            * rational::from_int(i64::from(eps.get(h)));
                    }
                    if !sum.is_zero() {
                        let mut witness: Vec<MultiIndex> = prefix
                            .iter()
                            .map(|&g| MultiIndex::unit(k, g).expect("axis below k"))
                            .collect();
                        witness.push(eps.clone());
                        failures.push(Failure {
                            check: "eq7".into(),
                            witness,
                            expected: Rational::zero(),
                            actual: sum,
                        });
                    }
                }
                (epsilons.len(), failures)
            })
            .collect();
        let evaluated = results.iter().map(|(n, _)| n).sum();
        let failures = results.into_iter().flat_map(|(_, f)| f).collect();
        report.record("eq7", evaluated, failures);
        report
    }
}

/// Runs `visit` on every `len`-tuple over `0..b`, in parallel on the first
/// coordinate, and concatenates the results in tuple order.
fn par_tuples<F>(b: usize, len: usize, visit: F) -> (usize, Vec<Failure>)
where
    F: Fn(&[usize]) -> (usize, Vec<Failure>) + Sync,
{
    if len == 0 {
        return visit(&[]);
    }
    let chunks: Vec<(usize, Vec<Failure>)> = (0..b)
        .into_par_iter()
        .map(|first| {
            let mut tuple = vec![0usize; len];
            tuple[0] = first;
            let mut evaluated = 0;
            let mut failures = Vec::new();
            loop {
                let (n, f) = visit(&tuple);
                evaluated += n;
                failures.extend(f);
                // odometer over the remaining coordinates
                let Some(pos) = (1..len).rev().find(|&p| tuple[p] + 1 < b) else {
                    break;
                };
                tuple[pos] += 1;
                for t in &mut tuple[pos + 1..] {
                    *t = 0;
                }
            }
            (evaluated, failures)
        })
        .collect();
    let evaluated = chunks.iter().map(|(n, _)| n).sum();
    (evaluated, chunks.into_iter().flat_map(|(_, f)| f).collect())
}

pub fn check_skew(table: &LiftTable) -> VerificationReport {
    Verifier::default().skew(table)
}

pub fn check_leibniz_basis(table: &LiftTable) -> VerificationReport {
    Verifier::default().leibniz(table)
}

pub fn check_eq7(table: &LiftTable) -> VerificationReport {
    Verifier::default().eq7(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lift_space::{construct, CoefficientAssignment, LiftParams, ZIndex};
    use crate::rational::{from_int, ratio};
    use crate::weil_algebra::AlgebraElement;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn hand_table(c3: Rational) -> LiftTable {
        let p = LiftParams::new(1, 2, 1);
        let c = CoefficientAssignment::from_entries(
            &p,
            [
                (ZIndex::new(vec![0], mi(&[0, 0])), ratio(1, 3)),
                (ZIndex::new(vec![1], mi(&[0, 0])), from_int(4)),
                (ZIndex::new(vec![0], mi(&[0, 1])), c3),
            ],
        )
        .unwrap();
        construct(&c).unwrap()
    }

    #[test]
    fn skew_is_vacuous_for_small_arity() {
        for s in 0..=1 {
            let p = LiftParams::new(2, 2, s);
            let mut t = LiftTable::zeros(&p);
            if s == 1 {
                t.set(&[0], &mi(&[0, 0]), from_int(9)).unwrap();
            }
            let report = check_skew(&t);
            assert!(report.passed);
            assert_eq!(report.checks[0].evaluated, 0);
        }
    }

    #[test]
    fn constructed_tables_pass() {
        for (r, k, s) in [
            (1, 2, 2),
            (1, 2, 1),
            (2, 2, 2),
            (2, 2, 1),
            (1, 1, 1),
            (2, 1, 1),
            (2, 2, 0),
        ] {
            let p = LiftParams::new(r, k, s);
            for n in 0..p.z().len() {
                let t = construct(&CoefficientAssignment::standard_basis(&p, n)).unwrap();
                let v = Verifier {
                    all_slots: true,
                    ..Verifier::default()
                };
                let report = v.run_all(&t);
                assert!(report.passed, "{p:?} basis {n}: {report:?}");
            }
        }
    }

    #[test]
    fn leibniz_hand_trace() {
        let c3 = ratio(5, 7);
        let t = hand_table(c3.clone());
        let p = t.params().algebra().clone();
        let x1 = AlgebraElement::monomial(&p, &mi(&[1, 0])).unwrap();
        let x2 = AlgebraElement::monomial(&p, &mi(&[0, 1])).unwrap();
        let one = AlgebraElement::one(&p);
        let lhs = t.evaluate(&[x1.multiply(&x2).unwrap()], &one).unwrap();
        assert!(lhs.is_zero());
        let a = t.evaluate(std::slice::from_ref(&x1), &x2).unwrap();
        let b = t.evaluate(std::slice::from_ref(&x2), &x1).unwrap();
        assert_eq!(a, c3.clone());
        assert_eq!(b, -c3);
        assert!((a + b).is_zero());
        // unit in one factor
        for g in p.basis() {
            for d in p.basis() {
                let ge = AlgebraElement::monomial(&p, g).unwrap();
                let de = AlgebraElement::monomial(&p, d).unwrap();
                let lhs = t.evaluate(&[one.multiply(&ge).unwrap()], &de).unwrap();
                let rhs = t
                    .evaluate(std::slice::from_ref(&one), &ge.multiply(&de).unwrap())
                    .unwrap()
                    + t.evaluate(std::slice::from_ref(&ge), &one.multiply(&de).unwrap())
                        .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert!(check_leibniz_basis(&t).passed);
    }

    #[test]
    fn eq7_hand_traces() {
        let c3 = ratio(5, 7);
        let t = hand_table(c3.clone());
        let sum =
            t.lookup_skew(&[0], &mi(&[0, 1])).unwrap() + t.lookup_skew(&[1], &mi(&[1, 0])).unwrap();
        assert!(sum.is_zero());
        assert!(check_eq7(&t).passed);

        let p = LiftParams::new(1, 1, 1);
        let t = construct(&CoefficientAssignment::standard_basis(&p, 0)).unwrap();
        assert!(t.lookup_skew(&[0], &mi(&[1])).unwrap().is_zero());
        assert!(check_eq7(&t).passed);

        let p0 = LiftParams::new(2, 2, 0);
        let report = check_eq7(&LiftTable::zeros(&p0));
        assert!(report.passed);
        assert_eq!(report.checks[0].evaluated, 0);
    }

    #[test]
    fn corrupted_cell_is_detected_with_witness() {
        let mut t = hand_table(from_int(1));
        t.set(&[1], &mi(&[1, 0]), from_int(3)).unwrap();
        let report = Verifier::default().run_all(&t);
        assert!(!report.passed);
        assert!(!report.failures.is_empty());
        assert!(report.failures.iter().all(|f| f.expected != f.actual));
        let json = report.to_json();
        assert_eq!(json["passed"], serde_json::json!(false));
    }

    #[test]
    fn witness_limit_caps_failures() {
        let p = LiftParams::new(2, 2, 1);
        let mut t = LiftTable::zeros(&p);
        for alpha in p.algebra().basis().to_vec() {
            t.set(&[1], &alpha, from_int(1)).unwrap();
        }
        let v = Verifier {
            witness_limit: 2,
            all_slots: false,
        };
        let report = v.run_all(&t);
        assert!(!report.passed);
        assert_eq!(report.failures.len(), 2);
        assert!(report.total_failed() > 2);
    }
}

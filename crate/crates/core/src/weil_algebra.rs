//! The truncated polynomial algebra `D^r_k`: polynomials in `k` variables
//! modulo all monomials of total degree above `r`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiindex::{enumerate_degree_at_most, MultiIndex};
use crate::rational::{self, Rational};

/// The pair `(r, k)` together with the ordered monomial basis of `D^r_k`.
pub struct AlgebraParams {
    r: u32,
    k: usize,
    basis: Vec<MultiIndex>,
    positions: HashMap<MultiIndex, usize>,
}

impl AlgebraParams {
    pub fn new(r: u32, k: usize) -> Arc<Self> {
        let basis = enumerate_degree_at_most(k, r);
        let positions = basis
            .iter()
            .enumerate()
            .map(|(pos, alpha)| (alpha.clone(), pos))
            .collect();
        Arc::new(AlgebraParams {
            r,
            k,
            basis,
            positions,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[MultiIndex] {
        &self.basis
    }

    /// Position of a monomial in the basis, `None` when it is not a basis
    /// monomial (wrong length or degree above `r`).
    pub fn position(&self, alpha: &MultiIndex) -> Option<usize> {
        self.positions.get(alpha).copied()
    }

    pub fn unit_position(&self) -> usize {
        0
    }

    /// Checks that `alpha` is a basis monomial of this algebra.
    pub fn check_monomial(&self, alpha: &MultiIndex) -> Result<()> {
        if alpha.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: alpha.len(),
            });
        }
        let degree = alpha.degree();
        if degree > self.r {
            return Err(Error::DegreeTooHigh {
                index: alpha.to_string(),
                degree,
                r: self.r,
            });
        }
        Ok(())
    }

    /// Product of two basis monomials; `None` when it is truncated to zero.
    pub fn multiply_monomials(&self, z: &MultiIndex, e: &MultiIndex) -> Result<Option<MultiIndex>> {
        self.check_monomial(z)?;
        self.check_monomial(e)?;
        let sum = z.add(e)?;
        Ok((sum.degree() <= self.r).then_some(sum))
    }

    /// Product of two basis monomials given by position.
    pub fn multiply_positions(&self, a: usize, b: usize) -> Option<usize> {
        let (za, zb) = (&self.basis[a], &self.basis[b]);
        if za.degree() + zb.degree() > self.r {
            return None;
        }
        let sum = za.add(zb).expect("basis monomials share a length");
        self.position(&sum)
    }

    pub fn same_algebra(&self, other: &AlgebraParams) -> bool {
        self.r == other.r && self.k == other.k
    }

    pub(crate) fn check_same(&self, other: &AlgebraParams) -> Result<()> {
        if self.same_algebra(other) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch {
                left_r: self.r,
                left_k: self.k,
                right_r: other.r,
                right_k: other.k,
            })
        }
    }
}

impl PartialEq for AlgebraParams {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other)
    }
}

impl Eq for AlgebraParams {}

impl fmt::Debug for AlgebraParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D^{}_{}", self.r, self.k)
    }
}

/// An element of `D^r_k`, stored densely over the canonical basis.
#[derive(Clone)]
pub struct AlgebraElement {
    params: Arc<AlgebraParams>,
    coeffs: Vec<Rational>,
}

impl AlgebraElement {
    pub fn zero(params: &Arc<AlgebraParams>) -> Self {
        AlgebraElement {
            params: Arc::clone(params),
            coeffs: vec![Rational::zero(); params.dim()],
        }
    }

    pub fn one(params: &Arc<AlgebraParams>) -> Self {
        let mut out = Self::zero(params);
        out.coeffs[params.unit_position()] = rational::one();
        out
    }

    pub fn monomial(params: &Arc<AlgebraParams>, alpha: &MultiIndex) -> Result<Self> {
        Self::from_terms(params, [(alpha.clone(), rational::one())])
    }

    /// Sums `coeff * x^exp` over the given terms; repeated exponents add up.
    pub fn from_terms(
        params: &Arc<AlgebraParams>,
        terms: impl IntoIterator<Item = (MultiIndex, Rational)>,
    ) -> Result<Self> {
        let mut out = Self::zero(params);
        for (alpha, coeff) in terms {
            params.check_monomial(&alpha)?;
            let pos = params.position(&alpha).expect("checked monomial");
            out.coeffs[pos] += coeff;
        }
        Ok(out)
    }

    pub fn from_dense(params: &Arc<AlgebraParams>, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.len() != params.dim() {
            return Err(Error::LengthMismatch {
                expected: params.dim(),
                actual: coeffs.len(),
            });
        }
        Ok(AlgebraElement {
            params: Arc::clone(params),
            coeffs,
        })
    }

    pub fn params(&self) -> &Arc<AlgebraParams> {
        &self.params
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Rational {
        self.params
            .position(alpha)
            .map(|pos| self.coeffs[pos].clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero terms as `(basis position, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn multiply(&self, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.params.check_same(&other.params)?;
        let mut out = Self::zero(&self.params);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some(pos) = self.params.multiply_positions(a, b) {
                    out.coeffs[pos] += ca * cb;
                }
            }
        }
        Ok(out)
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, c: &Rational, other: &AlgebraElement) -> Result<AlgebraElement> {
        self.params.check_same(&other.params)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + c * b)
            .collect();
        Ok(AlgebraElement {
            params: Arc::clone(&self.params),
            coeffs,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ElementDoc::from(self)).expect("element serializes")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: ElementDoc = serde_json::from_value(value.clone())?;
        let params = AlgebraParams::new(doc.r, doc.k);
        Self::from_terms(&params, doc.terms.into_iter().map(|t| (t.exp, t.coeff)))
    }
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        self.params.same_algebra(&other.params) && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraElement {}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (pos, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*x^{}", c, self.params.basis[pos])?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementDoc {
    r: u32,
    k: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    exp: MultiIndex,
    #[serde(with = "rational::as_string")]
    coeff: Rational,
}

impl From<&AlgebraElement> for ElementDoc {
    fn from(element: &AlgebraElement) -> Self {
        ElementDoc {
            r: element.params.r,
            k: element.params.k,
            terms: element
                .terms()
                .map(|(pos, c)| TermDoc {
                    exp: element.params.basis[pos].clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn element(params: Arc<AlgebraParams>) -> impl Strategy<Value = AlgebraElement> {
        let dim = params.dim();
        proptest::collection::vec((-5i64..=5, 1i64..=4), dim).prop_map(move |raw| {
            let coeffs = raw.into_iter().map(|(n, d)| ratio(n, d)).collect();
            AlgebraElement::from_dense(&params, coeffs).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws(
            (a, b, c) in (0u32..4, 1usize..4).prop_flat_map(|(r, k)| {
                let p = AlgebraParams::new(r, k);
                (element(p.clone()), element(p.clone()), element(p))
            })
        ) {
            let p = a.params().clone();
            prop_assert_eq!(a.multiply(&b).unwrap(), b.multiply(&a).unwrap());
            prop_assert_eq!(
                a.multiply(&b).unwrap().multiply(&c).unwrap(),
                a.multiply(&b.multiply(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(a.multiply(&AlgebraElement::one(&p)).unwrap(), a.clone());
            // distributivity
            let one = crate::rational::one();
            prop_assert_eq!(
                a.multiply(&b.add_scaled(&one, &c).unwrap()).unwrap(),
                a.multiply(&b).unwrap().add_scaled(&one, &a.multiply(&c).unwrap()).unwrap()
            );
        }
    }
}

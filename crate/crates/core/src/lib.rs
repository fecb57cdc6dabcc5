//! Exact computation of the spaces of skew-symmetric multilinear maps on the
//! truncated polynomial algebra `D^r_k` that satisfy the Leibniz-type product
//! rule in every argument.
//!
//! The crate is organised bottom-up:
//!
//! * [`multiindex`]: exponent vectors, the canonical monomial order and the
//!   binomial coefficients used for counting.
//! * [`weil_algebra`]: the algebra `D^r_k` itself (polynomials in `k`
//!   variables truncated above total degree `r`) over exact rationals.
//! * [`lift_space`]: the index set `Z`, the closed-form dimension, and the
//!   explicit construction of a map from an arbitrary assignment of values
//!   on `Z`, together with its evaluation on arbitrary algebra elements.
//! * [`verifier`]: exhaustive checks that a table really is skew-symmetric
//!   and satisfies the product rule.
//! * [`oracle`]: an independent brute-force description of the same space as
//!   the nullspace of an explicit linear system, built on [`linalg`].
//!
//! All arithmetic is exact; there is no floating point anywhere.
//!
//! ```
//! use weil_core::{construct, CoefficientAssignment, LiftParams, Verifier};
//!
//! let params = LiftParams::new(2, 3, 2);
//! let assignment = CoefficientAssignment::standard_basis(&params, 0);
//! let table = construct(&assignment)?;
//! assert!(Verifier::default().run_all(&table).passed);
//! assert_eq!(table.extract_coefficients(), assignment);
//! # Ok::<(), weil_core::error::Error>(())
//! ```

pub mod error;
pub mod lift_space;
pub mod linalg;
pub mod multiindex;
pub mod oracle;
pub mod rational;
pub mod verifier;
pub mod weil_algebra;

pub use error::{Error, Result};
pub use lift_space::{
    construct, dimension, enumerate_z, CoefficientAssignment, LiftParams, LiftTable, ZIndex,
};
pub use multiindex::{binomial, enumerate_degree_at_most, MultiIndex};
pub use oracle::{build_constraints, compare_with_construction, ConstraintSystem, OracleOptions};
pub use rational::Rational;
pub use verifier::{check_eq7, check_leibniz_basis, check_skew, VerificationReport, Verifier};
pub use weil_algebra::{AlgebraElement, AlgebraParams};

//! Multiplicative compound matrices and their inverse.
//!
//! The k-th compound `C_k(X)` collects all `k x k` minors of `X`, rows and
//! columns indexed by increasing k-tuples in lexicographic order. This crate
//! computes compounds and related exterior-algebra objects, and recovers `A`
//! from `M = C_k(A)`: uniquely up to sign when `rank(M) > 1`, as a
//! determinant-one family when `rank(M) = 1`.
//!
//! ```
//! use compound_kit::{compound, inverse_compound, Matrix, TolerancePolicy};
//!
//! let a = Matrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.0, 3.0, 1.0, 1.0, 0.0, 4.0]);
//! let m = compound(&a, 2).unwrap();
//! let rec = inverse_compound(&m, 3, 3, 2, &TolerancePolicy::default()).unwrap();
//! let b = rec.outcome.representative();
//! assert!((&b - &a).amax().min((&b + &a).amax()) < 1e-8);
//! ```

pub mod bench;
pub mod combinat;
mod error;
pub mod exterior;
pub mod io;
pub mod numerics;
pub mod recovery;
pub mod testkit;

pub use combinat::{binomial, incidence_matrix, indexof_tuple, lex_tuples, unrank_tuple, IndexTuple};
pub use error::{Error, ErrorClass, Result};
pub use exterior::{adjugate, adjugate_via_compound, compound, determinant, is_decomposable, wedge, wedge_matrix};
pub use numerics::{Matrix, SignSearch, TolerancePolicy, Vector};
pub use recovery::{
    closed_form_inverse_nminus1, family_contains, inverse_compound, rank_one_inverse, Recovery, RecoveryOutcome,
    RecoveryReport, RankOneFamily,
};

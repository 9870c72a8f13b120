use crate::error::{ensure_arg, Error, Result};
use crate::exterior::{compound, determinant};
use crate::numerics::{ensure_finite, numerical_rank, Matrix, TolerancePolicy};

use super::relative_residual;

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormInverse {
    /// An `n x n` matrix with `C_{n-1}(b) = M`.
    pub b: Matrix,
    /// True when `-b` is a preimage as well (odd `n`).
    pub negation_valid: bool,
}

/// Inverse of the `(n-1)`-th compound of an invertible `n x n` matrix:
/// `B = |det M|^{-(n-2)/(n-1)} C_{n-1}(M)`.
///
/// `C_{n-1}(C_{n-1}(A)) = det(A)^{n-2} A` and `det M = det(A)^{n-1}`, so the
/// scalar fixes `|det A|`; for even `n` the sign of `det A` matches the sign of
/// `det M` and cancels, for odd `n` both signs are preimages.
pub fn closed_form_inverse_nminus1(m: &Matrix, policy: &TolerancePolicy) -> Result<ClosedFormInverse> {
    policy.validate()?;
    let n = m.nrows();
    ensure_arg!(m.is_square() && n >= 2, "need a square matrix of size >= 2, got {}x{}", n, m.ncols());
    ensure_finite(m, "compound matrix")?;
    if numerical_rank(m, policy)? < n {
        return Err(Error::SingularInput("M is numerically singular".into()));
    }
    let det = determinant(m)?;
    if n % 2 == 1 && det < 0.0 {
        return Err(Error::NotCompoundDecomposable(format!(
            "det M = {det:e} < 0 is not an even power of a real determinant"
        )));
    }
    let scale = det.abs().powf(-((n - 2) as f64) / ((n - 1) as f64));
    let b = compound(m, n - 1)? * scale;
    let residual = relative_residual(&compound(&b, n - 1)?, m);
    if residual > policy.residual_rtol {
        return Err(Error::VerificationFailed {
            residual,
            tolerance: policy.residual_rtol,
        });
    }
    Ok(ClosedFormInverse {
        b,
        negation_valid: n % 2 == 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Vector;
    use crate::testkit::random_rank_r;

    #[test]
    fn diagonal_case() {
        let m = Matrix::from_diagonal(&Vector::from_vec(vec![6.0, 10.0, 15.0]));
        let out = closed_form_inverse_nminus1(&m, &TolerancePolicy::default()).unwrap();
        let want = Matrix::from_diagonal(&Vector::from_vec(vec![2.0, 3.0, 5.0]));
        assert!((&out.b - want).amax() < 1e-12);
        assert!(out.negation_valid);
    }

    #[test]
    fn identity_maps_to_identity() {
        for n in 2..6 {
            let out = closed_form_inverse_nminus1(&Matrix::identity(n, n), &TolerancePolicy::default()).unwrap();
            assert!((out.b - Matrix::identity(n, n)).amax() < 1e-14);
            assert_eq!(out.negation_valid, n % 2 == 1);
        }
    }

    #[test]
    fn random_invertible_round_trip() {
        let policy = TolerancePolicy::default();
        for seed in 0..10 {
            for n in [3, 4, 5] {
                let a = random_rank_r(n, n, n, seed, None).unwrap();
                let m = compound(&a, n - 1).unwrap();
                let b = closed_form_inverse_nminus1(&m, &policy).unwrap().b;
                let err = if n % 2 == 0 {
                    (&b - &a).norm()
                } else {
                    (&b - &a).norm().min((&b + &a).norm())
                };
                assert!(err <= 1e-9 * a.norm(), "n = {n}, seed = {seed}");
            }
        }
    }

    #[test]
    fn rejects_singular_and_negative_det() {
        let policy = TolerancePolicy::default();
        let mut m = Matrix::identity(3, 3);
        m[(2, 2)] = 0.0;
        assert!(matches!(closed_form_inverse_nminus1(&m, &policy), Err(Error::SingularInput(_))));
        m[(2, 2)] = -1.0;
        assert!(matches!(
            closed_form_inverse_nminus1(&m, &policy),
            Err(Error::NotCompoundDecomposable(_))
        ));
        assert!(closed_form_inverse_nminus1(&Matrix::identity(1, 1), &policy).is_err());
    }

    #[test]
    fn even_size_accepts_negative_det() {
        let mut a = Matrix::identity(4, 4);
        a[(0, 0)] = -2.0;
        let m = compound(&a, 3).unwrap();
        let b = closed_form_inverse_nminus1(&m, &TolerancePolicy::default()).unwrap().b;
        assert!((b - a).amax() < 1e-12);
    }
}

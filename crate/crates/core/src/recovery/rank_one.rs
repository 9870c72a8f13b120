use crate::combinat::binom_capped;
use crate::error::{ensure_arg, Error, Result};
use crate::exterior::{compound, determinant, wedge_matrix};
use crate::numerics::{kernel_basis, reduced_svd, Matrix, ReducedSvd, TolerancePolicy, Vector};

use super::relative_residual;

/// The preimage set `{U Σ T Vᵀ : det T = 1}` of a rank-one compound, where `U`
/// (n x k) and `V` (m x k) are orthonormal and `Σ` is positive diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RankOneFamily {
    pub u: Matrix,
    pub sigma: Matrix,
    pub v: Matrix,
}

impl RankOneFamily {
    /// `U Σ Vᵀ`, the member with `T = I`.
    pub fn representative(&self) -> Matrix {
        &self.u * &self.sigma * self.v.transpose()
    }

    /// `U Σ T Vᵀ`; `t` must be k x k (its determinant is not checked).
    pub fn member(&self, t: &Matrix) -> Result<Matrix> {
        let k = self.sigma.nrows();
        ensure_arg!(t.shape() == (k, k), "T must be {k}x{k}, got {}x{}", t.nrows(), t.ncols());
        Ok(&self.u * &self.sigma * t * self.v.transpose())
    }

    pub fn k(&self) -> usize {
        self.sigma.nrows()
    }
}

/// Orthonormal `U` with `C_k(U) = α x` for some `α > 0`, plus that `α`.
fn factor_side(x: &Vector, n: usize, k: usize, policy: &TolerancePolicy) -> Result<(Matrix, f64)> {
    let mut u = if k == n {
        Matrix::identity(n, n)
    } else {
        let mz = wedge_matrix(x, n, k)?;
        let basis = kernel_basis(mz.matrix(), policy)?;
        if basis.ncols() != k {
            return Err(Error::NotCompoundDecomposable(format!(
                "singular vector is not a {k}-wedge (kernel dimension {})",
                basis.ncols()
            )));
        }
        basis
    };
    let mut alpha = x.dot(&compound(&u, k)?.column(0));
    if alpha < 0.0 {
        u.column_mut(0).neg_mut();
        alpha = -alpha;
    }
    if alpha <= f64::EPSILON.sqrt() * x.norm() {
        return Err(Error::NotCompoundDecomposable(
            "singular vector is orthogonal to the wedge of its kernel".into(),
        ));
    }
    Ok((u, alpha))
}

/// The family of all `A` with `C_k(A) = m` when `m` has rank one.
pub fn rank_one_inverse(m: &Matrix, n: usize, cols: usize, k: usize, policy: &TolerancePolicy) -> Result<RankOneFamily> {
    policy.validate()?;
    ensure_arg!(k >= 1 && k <= n.min(cols), "k = {k} must lie in 1..={}", n.min(cols));
    ensure_arg!(
        m.shape() == (binom_capped(n, k)?, binom_capped(cols, k)?),
        "expected a binom({n}, {k}) x binom({cols}, {k}) matrix, got {}x{}",
        m.nrows(),
        m.ncols()
    );
    let svd = reduced_svd(m, policy)?;
    if svd.rank() != 1 {
        return Err(Error::InvalidArgument(format!("matrix has rank {}, expected 1", svd.rank())));
    }
    rank_one_from_svd(m, &svd, n, cols, k, policy)
}

pub(crate) fn rank_one_from_svd(
    m: &Matrix,
    svd: &ReducedSvd,
    n: usize,
    cols: usize,
    k: usize,
    policy: &TolerancePolicy,
) -> Result<RankOneFamily> {
    let (u, alpha) = factor_side(&svd.left.column(0).into_owned(), n, k, policy)?;
    let (v, beta) = factor_side(&svd.right.column(0).into_owned(), cols, k, policy)?;
    let scale = (alpha * svd.sigma[0] * beta).powf(1.0 / k as f64);
    let fam = RankOneFamily {
        u,
        sigma: Matrix::identity(k, k) * scale,
        v,
    };
    let residual = relative_residual(&compound(&fam.representative(), k)?, m);
    if residual > policy.residual_rtol {
        return Err(Error::VerificationFailed {
            residual,
            tolerance: policy.residual_rtol,
        });
    }
    Ok(fam)
}

/// Whether `b` lies in the family, i.e. `b = U Σ T Vᵀ` with `det T = 1`.
pub fn family_contains(b: &Matrix, fam: &RankOneFamily, policy: &TolerancePolicy) -> bool {
    if b.shape() != (fam.u.nrows(), fam.v.nrows()) {
        return false;
    }
    let Some(sigma_inv) = fam.sigma.clone().try_inverse() else {
        return false;
    };
    let t = sigma_inv * fam.u.transpose() * b * &fam.v;
    let Ok(rebuilt) = fam.member(&t) else {
        return false;
    };
    if (b - rebuilt).norm() > policy.residual_rtol * b.norm() {
        return false;
    }
    determinant(&t).is_ok_and(|d| (d - 1.0).abs() <= policy.residual_rtol)
}

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_arg, Error, Result};
use crate::exterior::compound;
use crate::numerics::{gaussian_matrix, reduced_svd, Matrix, ReducedSvd, TolerancePolicy};

/// `m_tilde = C_k(q) m`, chosen so the nonzero singular values of `m_tilde`
/// are separated.
#[derive(Debug, Clone, PartialEq)]
pub struct Preprocessed {
    pub q: Matrix,
    pub m_tilde: Matrix,
    pub used: bool,
    /// Random draws consumed (0 when `m` already qualified).
    pub attempts: usize,
    pub svd: ReducedSvd,
}

fn separated(svd: &ReducedSvd, policy: &TolerancePolicy) -> bool {
    svd.min_relative_gap() >= policy.gap_rtol
}

pub fn preprocess_distinct(m: &Matrix, n: usize, k: usize, policy: &TolerancePolicy) -> Result<Preprocessed> {
    ensure_arg!(k >= 1 && k <= n, "k = {k} must lie in 1..={n}");
    let svd = reduced_svd(m, policy)?;
    preprocess_with_svd(m, svd, n, k, policy)
}

pub(crate) fn preprocess_with_svd(
    m: &Matrix,
    svd: ReducedSvd,
    n: usize,
    k: usize,
    policy: &TolerancePolicy,
) -> Result<Preprocessed> {
    ensure_arg!(
        m.nrows() == crate::combinat::binom_capped(n, k)?,
        "matrix has {} rows, expected binom({n}, {k})",
        m.nrows()
    );
    if separated(&svd, policy) {
        return Ok(Preprocessed {
            q: Matrix::identity(n, n),
            m_tilde: m.clone(),
            used: false,
            attempts: 0,
            svd,
        });
    }
    let rank = svd.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(policy.rng_seed);
    let mut best_gap = svd.min_relative_gap();
    for attempt in 1..=policy.max_resample {
        let q = gaussian_matrix(n, n, &mut rng);
        let m_tilde = compound(&q, k)? * m;
        let cand = reduced_svd(&m_tilde, policy)?;
        if cand.rank() != rank {
            continue;
        }
        let gap = cand.min_relative_gap();
        if gap >= policy.gap_rtol {
            return Ok(Preprocessed {
                q,
                m_tilde,
                used: true,
                attempts: attempt,
                svd: cand,
            });
        }
        best_gap = best_gap.max(gap);
    }
    Err(Error::PreprocessingFailed {
        attempts: policy.max_resample,
        best_gap,
    })
}

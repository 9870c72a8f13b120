//! Recovering `A` from `M = C_k(A)`.
//!
//! The dispatcher [`inverse_compound`] looks at `rank(M)`:
//!
//! * `0`: every matrix of rank below `k` is a preimage;
//! * `1`: the preimage is `{U Σ T Vᵀ : det T = 1}` (see [`rank_one_inverse`]);
//! * `> 1`: `A` is unique up to sign and is rebuilt from its singular triplets.
//!   The left/right singular vectors of `A` are read off the singular vectors of
//!   `M` by decomposing them as wedges, singular values come from a log-linear
//!   system, and signs are reconciled through a parity system over GF(2).

mod align;
mod closed_form;
mod preprocess;
mod rank_one;
mod wedge_decompose;

use std::collections::BTreeMap;

use serde::Serialize;

pub use align::{align_and_sign_adjust, order_compound_singular_values, recover_singular_values, Aligned, SingularValueFit};
pub use closed_form::{closed_form_inverse_nminus1, ClosedFormInverse};
pub use preprocess::{preprocess_distinct, Preprocessed};
pub use rank_one::{family_contains, rank_one_inverse, RankOneFamily};
pub use wedge_decompose::wedge_decompose;

use crate::combinat::{binom_capped, binomial};
use crate::error::{ensure_arg, Error, Result};
use crate::exterior::compound;
use crate::numerics::{ensure_finite, reduced_svd, Matrix, TolerancePolicy};

#[derive(Debug, Clone, PartialEq)]
pub enum RecoveryOutcome {
    /// `C_k(a) = M`; for even `k` so does `C_k(-a)`.
    UniqueUpToSign { a: Matrix, sign_ambiguous: bool },
    RankOneFamily(RankOneFamily),
    /// `C_k(B) = 0` exactly for the matrices `B` of rank below `k`.
    RankDeficientFamily { k: usize, rows: usize, cols: usize },
}

impl RecoveryOutcome {
    pub fn tag(&self) -> &'static str {
        match self {
            RecoveryOutcome::UniqueUpToSign { .. } => "unique",
            RecoveryOutcome::RankOneFamily(_) => "rank_one_family",
            RecoveryOutcome::RankDeficientFamily { .. } => "rank_deficient",
        }
    }

    /// One concrete preimage.
    pub fn representative(&self) -> Matrix {
        match self {
            RecoveryOutcome::UniqueUpToSign { a, .. } => a.clone(),
            RecoveryOutcome::RankOneFamily(fam) => fam.representative(),
            RecoveryOutcome::RankDeficientFamily { rows, cols, .. } => Matrix::zeros(*rows, *cols),
        }
    }

    pub fn sign_ambiguous(&self) -> bool {
        match self {
            RecoveryOutcome::UniqueUpToSign { sign_ambiguous, .. } => *sign_ambiguous,
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RecoveryReport {
    pub resample_count: usize,
    pub preprocessing_used: bool,
    /// `|C_k(result) - M|_F / |M|_F`.
    pub reconstruction_residual: f64,
    /// Rank of the preimage; `None` for the rank-deficient family.
    pub inferred_r: Option<usize>,
    /// Relative residual of the log-linear singular value system.
    pub singular_value_residual: f64,
    /// True when the `2^r` sign scan ran instead of the parity solve.
    pub exhaustive_sign_search: bool,
    /// Wall-clock milliseconds per stage.
    pub stage_timings: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    pub outcome: RecoveryOutcome,
    pub report: RecoveryReport,
}

#[cfg(not(target_arch = "wasm32"))]
fn now_ms() -> f64 {
    use std::sync::OnceLock;
    use std::time::Instant;
    static START: OnceLock<Instant> = OnceLock::new();
    START.get_or_init(Instant::now).elapsed().as_secs_f64() * 1e3
}

// No monotonic clock without a JS shim; timings read as zero in the browser.
#[cfg(target_arch = "wasm32")]
fn now_ms() -> f64 {
    0.0
}

struct Stages {
    last: f64,
    timings: BTreeMap<String, f64>,
}

impl Stages {
    fn start() -> Self {
        Self {
            last: now_ms(),
            timings: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = now_ms();
        *self.timings.entry(stage.to_string()).or_default() += now - self.last;
        self.last = now;
    }
}

/// The unique `r >= k` with `binom(r, k) = rank_m`.
pub fn infer_base_rank(rank_m: usize, k: usize) -> Result<usize> {
    ensure_arg!(rank_m >= 1 && k >= 1, "need rank(M) >= 1 and k >= 1");
    let mut r = k;
    loop {
        match binomial(r as u64, k as u64) {
            Some(b) if b == rank_m as u64 => return Ok(r),
            Some(b) if b < rank_m as u64 => r += 1,
            _ => {
                return Err(Error::NotCompoundDecomposable(format!(
                    "rank {rank_m} is not binom(r, {k}) for any r"
                )))
            }
        }
    }
}

pub(crate) fn relative_residual(got: &Matrix, want: &Matrix) -> f64 {
    let scale = want.norm();
    let diff = (got - want).norm();
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn check_shape(m: &Matrix, n: usize, cols: usize, k: usize) -> Result<()> {
    ensure_arg!(
        k >= 1 && k <= n.min(cols),
        "k = {k} must lie in 1..={} for a {n}x{cols} preimage",
        n.min(cols)
    );
    let want = (binom_capped(n, k)?, binom_capped(cols, k)?);
    ensure_arg!(
        m.shape() == want,
        "a {k}-th compound of a {n}x{cols} matrix is {}x{}, got {}x{}",
        want.0,
        want.1,
        m.nrows(),
        m.ncols()
    );
    ensure_finite(m, "compound matrix")
}

/// Flip `a` so its first entry above the noise floor (column-major) is positive.
fn canonicalize_sign(a: &mut Matrix, policy: &TolerancePolicy) {
    let floor = policy.rank_rtol * a.amax();
    if let Some(&first) = a.iter().find(|v| v.abs() > floor) {
        if first < 0.0 {
            a.neg_mut();
        }
    }
}

/// Every `A` (as a [`RecoveryOutcome`]) with `C_k(A) = m`, where `m` is
/// `binom(n,k) x binom(cols,k)`.
pub fn inverse_compound(m: &Matrix, n: usize, cols: usize, k: usize, policy: &TolerancePolicy) -> Result<Recovery> {
    policy.validate()?;
    check_shape(m, n, cols, k)?;
    let mut stages = Stages::start();
    let svd = reduced_svd(m, policy)?;
    stages.lap("svd");

    match svd.rank() {
        0 => {
            return Ok(Recovery {
                outcome: RecoveryOutcome::RankDeficientFamily { k, rows: n, cols },
                report: RecoveryReport {
                    stage_timings: stages.timings,
                    ..RecoveryReport::default()
                },
            })
        }
        1 => {
            let fam = rank_one::rank_one_from_svd(m, &svd, n, cols, k, policy)?;
            stages.lap("rank_one");
            let residual = relative_residual(&compound(&fam.representative(), k)?, m);
            stages.lap("verify");
            return Ok(Recovery {
                outcome: RecoveryOutcome::RankOneFamily(fam),
                report: RecoveryReport {
                    reconstruction_residual: residual,
                    inferred_r: Some(k),
                    stage_timings: stages.timings,
                    ..RecoveryReport::default()
                },
            });
        }
        _ => {}
    }

    let r = infer_base_rank(svd.rank(), k)?;
    if r > n.min(cols) {
        return Err(Error::NotCompoundDecomposable(format!(
            "rank {} implies a preimage of rank {r} > min({n}, {cols})",
            svd.rank()
        )));
    }

    let pre = preprocess::preprocess_with_svd(m, svd, n, k, policy)?;
    stages.lap("preprocess");
    if pre.svd.rank() != binom_capped(r, k)? {
        return Err(Error::PreprocessingFailed {
            attempts: pre.attempts,
            best_gap: pre.svd.min_relative_gap(),
        });
    }

    let v_hat = wedge_decompose(&pre.svd.left, n, r, k, policy)?;
    let w_hat = wedge_decompose(&pre.svd.right, cols, r, k, policy)?;
    stages.lap("wedge_decompose");

    let aligned = align_and_sign_adjust(&v_hat, &w_hat, &pre.m_tilde, &pre.svd, k, policy)?;
    stages.lap("align");

    let a_tilde = &aligned.v * Matrix::from_diagonal(&aligned.sigma) * aligned.w.transpose();
    let mut a = if pre.used {
        pre.q
            .clone()
            .lu()
            .solve(&a_tilde)
            .ok_or_else(|| Error::SingularInput("preprocessing transform is singular".into()))?
    } else {
        a_tilde
    };
    let sign_ambiguous = k.is_multiple_of(2);
    if sign_ambiguous && policy.canonical_sign {
        canonicalize_sign(&mut a, policy);
    }
    stages.lap("compose");

    let residual = relative_residual(&compound(&a, k)?, m);
    stages.lap("verify");
    if residual > policy.residual_rtol {
        return Err(Error::VerificationFailed {
            residual,
            tolerance: policy.residual_rtol,
        });
    }

    Ok(Recovery {
        outcome: RecoveryOutcome::UniqueUpToSign { a, sign_ambiguous },
        report: RecoveryReport {
            resample_count: pre.attempts,
            preprocessing_used: pre.used,
            reconstruction_residual: residual,
            inferred_r: Some(r),
            singular_value_residual: aligned.singular_value_residual,
            exhaustive_sign_search: aligned.exhaustive_sign_search,
            stage_timings: stages.timings,
        },
    })
}

//! Dense numerical kernels shared by the compound and recovery code.
//!
//! Every threshold comes from one [`TolerancePolicy`].

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_arg, Error, Result};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// How the sign-consistency stage searches for the diagonal sign matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum SignSearch {
    /// Parity system over GF(2); polynomial.
    #[default]
    Gf2,
    /// Scan all `2^r` sign patterns. Kept as a cross-check.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    /// Singular values at or below `rank_rtol * sigma_max * max(rows, cols)` count as zero.
    pub rank_rtol: f64,
    /// Minimum relative gap `(s_i - s_{i+1}) / s_1` between kept singular values.
    pub gap_rtol: f64,
    /// Column-matching threshold on `1 - |cos angle|` between unit vectors,
    /// and on `min(|a - b|, |a + b|)` for duplicate detection.
    pub sign_atol: f64,
    /// Relative residual accepted by verification steps.
    pub residual_rtol: f64,
    /// Random draws allowed when separating repeated singular values.
    pub max_resample: usize,
    pub rng_seed: u64,
    pub sign_search: SignSearch,
    /// For even k, flip the recovered matrix so its first non-negligible
    /// entry (column-major) is positive.
    pub canonical_sign: bool,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            rank_rtol: 1e-10,
            gap_rtol: 1e-6,
            sign_atol: 1e-8,
            residual_rtol: 1e-8,
            max_resample: 16,
            rng_seed: 0x5eed_c0de,
            sign_search: SignSearch::Gf2,
            canonical_sign: false,
        }
    }
}

impl TolerancePolicy {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            rng_seed: seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("rank_rtol", self.rank_rtol),
            ("gap_rtol", self.gap_rtol),
            ("sign_atol", self.sign_atol),
            ("residual_rtol", self.residual_rtol),
        ] {
            ensure_arg!(v.is_finite() && v > 0.0, "{name} must be finite and positive, got {v}");
        }
        ensure_arg!(self.max_resample >= 1, "max_resample must be at least 1");
        Ok(())
    }

    /// Absolute singular-value cutoff for a matrix with the given shape.
    pub fn rank_cutoff(&self, sigma_max: f64, rows: usize, cols: usize) -> f64 {
        self.rank_rtol * sigma_max * rows.max(cols) as f64
    }
}

/// Compact SVD `X = left * diag(sigma) * right^T` keeping only the numerically
/// nonzero singular values, sorted decreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedSvd {
    pub left: Matrix,
    pub sigma: Vector,
    pub right: Matrix,
}

impl ReducedSvd {
    pub fn rank(&self) -> usize {
        self.sigma.len()
    }

    pub fn reconstruct(&self) -> Matrix {
        &self.left * Matrix::from_diagonal(&self.sigma) * self.right.transpose()
    }

    /// Smallest relative gap `(s_i - s_{i+1}) / s_1`; infinite for rank <= 1.
    pub fn min_relative_gap(&self) -> f64 {
        if self.sigma.len() < 2 {
            return f64::INFINITY;
        }
        let top = self.sigma[0];
        self.sigma
            .as_slice()
            .windows(2)
            .map(|w| (w[0] - w[1]) / top)
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn ensure_finite(x: &Matrix, what: &str) -> Result<()> {
    ensure_arg!(x.iter().all(|v| v.is_finite()), "{what} has non-finite entries");
    Ok(())
}

/// Full SVD with singular values sorted decreasing. Returns `(u, sigma, v)` with
/// `u: rows x p`, `v: cols x p`, `p = min(rows, cols)`.
fn sorted_svd(x: &Matrix) -> Result<(Matrix, Vector, Matrix)> {
    // nalgebra's bidiagonal SVD returns inaccurate factors on some
    // rank-deficient inputs; faer's does not.
    let fx = faer::Mat::<f64>::from_fn(x.nrows(), x.ncols(), |i, j| x[(i, j)]);
    let svd = fx
        .thin_svd()
        .map_err(|e| Error::DecompositionFailed(format!("SVD did not converge: {e:?}")))?;
    let (u, s, v) = (svd.U(), svd.S().column_vector(), svd.V());
    let mut order: Vec<usize> = (0..s.nrows()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let u = Matrix::from_fn(u.nrows(), order.len(), |i, j| u[(i, order[j])]);
    let v = Matrix::from_fn(v.nrows(), order.len(), |i, j| v[(i, order[j])]);
    let s = Vector::from_iterator(order.len(), order.iter().map(|&j| s[j]));
    Ok((u, s, v))
}

pub fn reduced_svd(x: &Matrix, policy: &TolerancePolicy) -> Result<ReducedSvd> {
    ensure_finite(x, "matrix")?;
    let (rows, cols) = x.shape();
    if rows == 0 || cols == 0 {
        return Ok(ReducedSvd {
            left: Matrix::zeros(rows, 0),
            sigma: Vector::zeros(0),
            right: Matrix::zeros(cols, 0),
        });
    }
    let (u, s, v) = sorted_svd(x)?;
    let cutoff = policy.rank_cutoff(s[0], rows, cols);
    let rho = s.iter().take_while(|&&v| v > cutoff && v > 0.0).count();
    Ok(ReducedSvd {
        left: u.columns(0, rho).into_owned(),
        sigma: s.rows(0, rho).into_owned(),
        right: v.columns(0, rho).into_owned(),
    })
}

pub fn numerical_rank(x: &Matrix, policy: &TolerancePolicy) -> Result<usize> {
    Ok(reduced_svd(x, policy)?.rank())
}

/// Orthonormal basis of the numerical kernel of `x` (`cols x d`).
pub fn kernel_basis(x: &Matrix, policy: &TolerancePolicy) -> Result<Matrix> {
    ensure_finite(x, "matrix")?;
    let (rows, cols) = x.shape();
    if cols == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    // Pad wide matrices so the right factor spans all of R^cols.
    let padded;
    let work = if rows < cols {
        padded = x.clone().resize_vertically(cols, 0.0);
        &padded
    } else {
        x
    };
    let (_, s, v) = sorted_svd(work)?;
    let cutoff = policy.rank_cutoff(s[0], rows, cols);
    let rank = s.iter().take_while(|&&v| v > cutoff && v > 0.0).count();
    Ok(v.columns(rank, cols - rank).into_owned())
}

/// Orthonormal basis for the column span of a full-column-rank `b`.
pub(crate) fn orthonormalize(b: &Matrix) -> Result<Matrix> {
    if b.ncols() == 0 {
        return Ok(b.clone());
    }
    let (u, _, _) = sorted_svd(b)?;
    Ok(u.columns(0, b.ncols()).into_owned())
}

/// Orthonormal basis of `im(b1) ∩ im(b2)`, from the kernel of `[b1 -b2]`.
pub fn subspace_intersection(b1: &Matrix, b2: &Matrix, policy: &TolerancePolicy) -> Result<Matrix> {
    ensure_arg!(
        b1.nrows() == b2.nrows(),
        "bases live in different spaces ({} vs {} rows)",
        b1.nrows(),
        b2.nrows()
    );
    let n = b1.nrows();
    let (k1, k2) = (b1.ncols(), b2.ncols());
    if k1 == 0 || k2 == 0 {
        return Ok(Matrix::zeros(n, 0));
    }
    let mut stacked = Matrix::zeros(n, k1 + k2);
    stacked.columns_mut(0, k1).copy_from(b1);
    stacked.columns_mut(k1, k2).copy_from(&(-b2));
    let null = kernel_basis(&stacked, policy)?;
    if null.ncols() == 0 {
        return Ok(Matrix::zeros(n, 0));
    }
    let raw = b1 * null.rows(0, k1);
    orthonormalize(&raw)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LeastSquares {
    pub solution: Vector,
    /// `|L x - y|_2`.
    pub residual: f64,
}

/// Minimizer of `|l x - y|_2` for a full-column-rank `l`.
pub fn least_squares(l: &Matrix, y: &Vector, policy: &TolerancePolicy) -> Result<LeastSquares> {
    ensure_arg!(
        l.nrows() == y.len(),
        "system has {} rows but right-hand side has length {}",
        l.nrows(),
        y.len()
    );
    ensure_finite(l, "system matrix")?;
    ensure_arg!(y.iter().all(|v| v.is_finite()), "right-hand side has non-finite entries");
    let svd = reduced_svd(l, policy)?;
    if svd.rank() < l.ncols() {
        return Err(Error::RankDeficientSystem {
            rank: svd.rank(),
            cols: l.ncols(),
        });
    }
    let coeffs = svd.left.transpose() * y;
    let scaled = coeffs.component_div(&svd.sigma);
    let solution = &svd.right * scaled;
    let residual = (l * &solution - y).norm();
    Ok(LeastSquares { solution, residual })
}

/// One solution of `a x = b` over GF(2), or `None` when the system is inconsistent.
pub fn gf2_solve(a: &[Vec<bool>], b: &[bool]) -> Result<Option<Vec<bool>>> {
    ensure_arg!(a.len() == b.len(), "{} equations but {} right-hand sides", a.len(), b.len());
    let cols = a.first().map_or(0, Vec::len);
    ensure_arg!(a.iter().all(|row| row.len() == cols), "ragged GF(2) system");

    // Each row packs the coefficients followed by the right-hand side bit.
    let words = (cols + 1).div_ceil(64);
    let mut rows: Vec<Vec<u64>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut packed = vec![0u64; words];
            for (j, _) in row.iter().enumerate().filter(|(_, &bit)| bit) {
                packed[j / 64] |= 1 << (j % 64);
            }
            if rhs {
                packed[cols / 64] |= 1 << (cols % 64);
            }
            packed
        })
        .collect();
    let bit = |row: &[u64], j: usize| (row[j / 64] >> (j % 64)) & 1 == 1;

    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        let Some(p) = (next_row..rows.len()).find(|&i| bit(&rows[i], col)) else {
            continue;
        };
        rows.swap(next_row, p);
        for i in 0..rows.len() {
            if i != next_row && bit(&rows[i], col) {
                let (src, dst) = if i < next_row {
                    let (lo, hi) = rows.split_at_mut(next_row);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = rows.split_at_mut(i);
                    (&lo[next_row], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src) {
                    *d ^= s;
                }
            }
        }
        pivots.push(col);
        next_row += 1;
        if next_row == rows.len() {
            break;
        }
    }
    // A zero row with rhs 1 means 0 = 1.
    if rows[next_row..].iter().any(|row| bit(row, cols)) {
        return Ok(None);
    }
    let mut x = vec![false; cols];
    for (i, &col) in pivots.iter().enumerate() {
        x[col] = bit(&rows[i], cols);
    }
    Ok(Some(x))
}

/// Matrix with independent standard normal entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

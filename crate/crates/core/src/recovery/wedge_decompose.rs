use crate::error::{ensure_arg, Error, Result};
use crate::exterior::wedge_matrix;
use crate::numerics::{kernel_basis, subspace_intersection, Matrix, TolerancePolicy};

/// True when the orthonormal bases `a` and `b` span the same subspace.
fn same_subspace(a: &Matrix, b: &Matrix, tol: f64) -> bool {
    a.ncols() == b.ncols() && (b - a * (a.transpose() * b)).norm() <= tol
}

fn push_unique_subspace(set: &mut Vec<Matrix>, basis: Matrix, tol: f64) {
    if !set.iter().any(|s| same_subspace(s, &basis, tol)) {
        set.push(basis);
    }
}

fn push_unique_vector(found: &mut Vec<Matrix>, v: Matrix, tol: f64) {
    let dup = found
        .iter()
        .any(|u| (u - &v).norm().min((u + &v).norm()) <= tol);
    if !dup {
        found.push(v);
    }
}

/// Pairwise intersections of `set` that have exactly `dim` dimensions.
fn intersections_of_dim(set: &[Matrix], dim: usize, policy: &TolerancePolicy) -> Result<Vec<Matrix>> {
    let mut out = Vec::new();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let meet = subspace_intersection(&set[i], &set[j], policy)?;
            if meet.ncols() == dim {
                if dim == 1 {
                    push_unique_vector(&mut out, meet, policy.sign_atol);
                } else {
                    push_unique_subspace(&mut out, meet, policy.sign_atol);
                }
            }
        }
    }
    Ok(out)
}

/// Recovers the unit columns of `U` (up to order and sign) from the columns of
/// `z`, each of which is `±` the wedge of some k columns of `U`.
///
/// Each wedge gives the k-dimensional span of its factors as the kernel of its
/// wedge matrix. Spans are intersected pairwise; while the spans are wider than
/// `ceil(r/2)` the minimal pairwise intersections (dimension `2s - r`) become
/// the next generation, after which two spans sharing exactly one factor meet
/// in that factor's line.
pub fn wedge_decompose(z: &Matrix, n: usize, r: usize, k: usize, policy: &TolerancePolicy) -> Result<Matrix> {
    ensure_arg!(k >= 1 && k < r && r <= n, "need 1 <= k < r <= n, got n = {n}, r = {r}, k = {k}");
    ensure_arg!(
        z.nrows() == crate::combinat::binom_capped(n, k)?,
        "wedge columns have length {}, expected binom({n}, {k})",
        z.nrows()
    );
    let mut spans = Vec::with_capacity(z.ncols());
    for (idx, col) in z.column_iter().enumerate() {
        let mz = wedge_matrix(&col.into_owned(), n, k)?;
        let basis = kernel_basis(mz.matrix(), policy)?;
        if basis.ncols() != k {
            return Err(Error::DecompositionFailed(format!(
                "column {idx} is not decomposable (kernel dimension {} != {k})",
                basis.ncols()
            )));
        }
        spans.push(basis);
    }

    let half = r.div_ceil(2);
    let mut dim = k;
    while dim > half {
        let next = 2 * dim - r;
        spans = intersections_of_dim(&spans, next, policy)?;
        dim = next;
    }

    let lines = if dim == 1 {
        let mut lines = Vec::new();
        for s in spans {
            push_unique_vector(&mut lines, s, policy.sign_atol);
        }
        lines
    } else {
        intersections_of_dim(&spans, 1, policy)?
    };

    if lines.len() != r {
        return Err(Error::DecompositionFailed(format!(
            "found {} distinct factor directions, expected {r}",
            lines.len()
        )));
    }
    let cols: Vec<_> = lines.iter().map(|l| l.column(0).into_owned()).collect();
    Ok(Matrix::from_columns(&cols))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::compound;
    use crate::numerics::reduced_svd;
    use crate::testkit::{fixtures, match_columns_up_to_sign, random_orthonormal, seeded_rng};

    #[test]
    fn recovers_unit_columns() {
        let policy = TolerancePolicy::default();
        let u = Matrix::identity(4, 4).columns(0, 3).into_owned();
        let z = compound(&u, 2).unwrap();
        let got = wedge_decompose(&z, 4, 3, 2, &policy).unwrap();
        assert!(match_columns_up_to_sign(&got, &u) < 1e-14);
    }

    #[test]
    fn tolerates_column_sign_flips() {
        let policy = TolerancePolicy::default();
        let mut rng = seeded_rng(21);
        let u = random_orthonormal(5, 4, &mut rng);
        let mut z = compound(&u, 2).unwrap();
        for j in [0, 3, 4] {
            z.column_mut(j).neg_mut();
        }
        let got = wedge_decompose(&z, 5, 4, 2, &policy).unwrap();
        assert!(match_columns_up_to_sign(&got, &u) < 1e-10);
    }

    #[test]
    fn both_branches_on_random_factors() {
        let policy = TolerancePolicy::default();
        let mut rng = seeded_rng(22);
        for (n, r, k) in [(6, 5, 4), (5, 5, 3), (7, 5, 2), (6, 4, 3), (6, 3, 1), (7, 5, 1)] {
            let u = random_orthonormal(n, r, &mut rng);
            let z = compound(&u, k).unwrap();
            let got = wedge_decompose(&z, n, r, k, &policy).unwrap();
            assert!(match_columns_up_to_sign(&got, &u) <= 1e-8, "(n, r, k) = ({n}, {r}, {k})");
        }
    }

    #[test]
    fn running_example_left_factors() {
        let m = fixtures::example3_m();
        let svd = reduced_svd(&m, &TolerancePolicy::default()).unwrap();
        let v_hat = wedge_decompose(&svd.left, 4, 3, 2, &TolerancePolicy::default()).unwrap();
        assert!(match_columns_up_to_sign(&v_hat, &fixtures::example3_v_hat()) <= 5e-3);
        let w_hat = wedge_decompose(&svd.right, 4, 3, 2, &TolerancePolicy::default()).unwrap();
        assert!(match_columns_up_to_sign(&w_hat, &fixtures::example3_w_hat()) <= 5e-3);
    }

    #[test]
    fn non_decomposable_column_fails() {
        let q = fixtures::example1_q();
        let mut z = Matrix::identity(6, 6).columns(0, 3).into_owned();
        z.set_column(1, &q);
        let err = wedge_decompose(&z, 4, 3, 2, &TolerancePolicy::default()).unwrap_err();
        assert!(matches!(err, Error::DecompositionFailed(_)));
    }
}

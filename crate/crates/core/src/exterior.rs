//! Multiplicative compounds, wedge products and the adjugate identities.

use crate::combinat::{binom_capped, lex_tuples0, rank0};
use crate::error::{ensure_arg, Error, Result};
use crate::numerics::{ensure_finite, kernel_basis, Matrix, TolerancePolicy, Vector};

/// Determinant of the row-major `k x k` matrix in `buf` by LU with partial
/// pivoting. Destroys `buf`.
pub(crate) fn lu_det(buf: &mut [f64], k: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..k {
        let mut piv = col;
        let mut best = buf[col * k + col].abs();
        for row in col + 1..k {
            let v = buf[row * k + col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != col {
            for j in 0..k {
                buf.swap(col * k + j, piv * k + j);
            }
            det = -det;
        }
        let p = buf[col * k + col];
        det *= p;
        for row in col + 1..k {
            let f = buf[row * k + col] / p;
            if f != 0.0 {
                for j in col + 1..k {
                    buf[row * k + j] -= f * buf[col * k + j];
                }
            }
        }
    }
    det
}

pub fn determinant(x: &Matrix) -> Result<f64> {
    ensure_arg!(x.is_square(), "determinant of a non-square {}x{} matrix", x.nrows(), x.ncols());
    let n = x.nrows();
    if n == 0 {
        return Ok(1.0);
    }
    let mut buf: Vec<f64> = (0..n * n).map(|idx| x[(idx / n, idx % n)]).collect();
    Ok(lu_det(&mut buf, n))
}

/// k-th multiplicative compound: entry `(i, j)` is the minor of `x` on the
/// i-th row tuple and j-th column tuple in lexicographic order.
pub fn compound(x: &Matrix, k: usize) -> Result<Matrix> {
    let (n, m) = x.shape();
    ensure_arg!(
        k >= 1 && k <= n.min(m),
        "compound order k = {k} must lie in 1..={} for a {n}x{m} matrix",
        n.min(m)
    );
    if k == 1 {
        return Ok(x.clone());
    }
    let rows = lex_tuples0(n, k)?;
    let cols = lex_tuples0(m, k)?;
    let mut out = Matrix::zeros(rows.len(), cols.len());
    let mut buf = vec![0.0; k * k];
    for (i, rt) in rows.iter().enumerate() {
        for (j, ct) in cols.iter().enumerate() {
            for (a, &r) in rt.iter().enumerate() {
                for (b, &c) in ct.iter().enumerate() {
                    buf[a * k + b] = x[(r, c)];
                }
            }
            out[(i, j)] = lu_det(&mut buf, k);
        }
    }
    Ok(out)
}

/// `u_1 ∧ … ∧ u_k` in lexicographic coordinates of the k-th exterior power.
pub fn wedge(vectors: &[Vector]) -> Result<Vector> {
    ensure_arg!(!vectors.is_empty(), "wedge of no vectors");
    let n = vectors[0].len();
    ensure_arg!(
        vectors.iter().all(|v| v.len() == n),
        "wedge factors have mismatched lengths"
    );
    ensure_arg!(vectors.len() <= n, "cannot wedge {} vectors in R^{n}", vectors.len());
    let stacked = Matrix::from_columns(vectors);
    Ok(compound(&stacked, vectors.len())?.column(0).into_owned())
}

/// Matrix of `x ↦ x ∧ z` for `z` in the k-th exterior power of R^n.
/// For decomposable nonzero `z` its kernel is the k-dimensional subspace of `z`.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeMatrix {
    data: Matrix,
    ambient: usize,
    grade: usize,
}

impl WedgeMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.data
    }

    pub fn into_matrix(self) -> Matrix {
        self.data
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        &self.data * x
    }
}

pub fn wedge_matrix(z: &Vector, n: usize, k: usize) -> Result<WedgeMatrix> {
    ensure_arg!(k >= 1 && k < n, "wedge matrix needs 1 <= k < n, got n = {n}, k = {k}");
    let dim = binom_capped(n, k)?;
    ensure_arg!(z.len() == dim, "vector of length {} is not in the {k}-th exterior power of R^{n}", z.len());
    if z.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateInput("wedge matrix of the zero vector".into()));
    }
    let rows = lex_tuples0(n, k + 1)?;
    let mut data = Matrix::zeros(rows.len(), n);
    let mut face = Vec::with_capacity(k);
    for (i, tuple) in rows.iter().enumerate() {
        for (pos, &j) in tuple.iter().enumerate() {
            face.clear();
            face.extend(tuple.iter().copied().filter(|&t| t != j));
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            data[(i, j)] = sign * z[rank0(&face, n)];
        }
    }
    Ok(WedgeMatrix {
        data,
        ambient: n,
        grade: k,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposability {
    pub decomposable: bool,
    /// Orthonormal basis of the numerical kernel of the wedge matrix.
    pub kernel: Matrix,
}

/// A nonzero `z` is decomposable iff its wedge matrix has a k-dimensional kernel.
pub fn is_decomposable(z: &Vector, n: usize, k: usize, policy: &TolerancePolicy) -> Result<Decomposability> {
    ensure_arg!(k >= 1 && k < n, "decomposability test needs 1 <= k < n, got n = {n}, k = {k}");
    if z.norm() <= f64::MIN_POSITIVE {
        return Ok(Decomposability {
            decomposable: false,
            kernel: Matrix::zeros(n, 0),
        });
    }
    let mz = wedge_matrix(z, n, k)?;
    let kernel = kernel_basis(mz.matrix(), policy)?;
    Ok(Decomposability {
        decomposable: kernel.ncols() == k,
        kernel,
    })
}

/// Classical adjugate from cofactors: `adj(A)_{ij} = (-1)^{i+j} det(A without row j, column i)`.
pub fn adjugate(a: &Matrix) -> Result<Matrix> {
    ensure_arg!(a.is_square() && a.nrows() >= 1, "adjugate needs a non-empty square matrix");
    ensure_finite(a, "matrix")?;
    let n = a.nrows();
    if n == 1 {
        return Ok(Matrix::from_element(1, 1, 1.0));
    }
    let mut buf = vec![0.0; (n - 1) * (n - 1)];
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut idx = 0;
            for r in (0..n).filter(|&r| r != j) {
                for c in (0..n).filter(|&c| c != i) {
                    buf[idx] = a[(r, c)];
                    idx += 1;
                }
            }
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            out[(i, j)] = sign * lu_det(&mut buf, n - 1);
        }
    }
    Ok(out)
}

/// The alternating sign matrix `S = diag((-1)^i)` (1-based `i`) and the
/// anti-diagonal exchange matrix `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignReversalPair {
    pub s: Matrix,
    pub p: Matrix,
}

pub fn sign_reversal_pair(n: usize) -> Result<SignReversalPair> {
    ensure_arg!(n >= 1, "sign/reversal pair needs n >= 1");
    let s = Matrix::from_fn(n, n, |i, j| match (i == j, i % 2) {
        (true, 0) => -1.0,
        (true, _) => 1.0,
        _ => 0.0,
    });
    let p = Matrix::from_fn(n, n, |i, j| if i + j == n - 1 { 1.0 } else { 0.0 });
    Ok(SignReversalPair { s, p })
}

/// `adj(A) = S P C_{n-1}(A)^T P S`.
pub fn adjugate_via_compound(a: &Matrix) -> Result<Matrix> {
    ensure_arg!(a.is_square(), "adjugate needs a square matrix");
    let n = a.nrows();
    ensure_arg!(n >= 2, "adjugate via compound needs n >= 2, got {n}");
    let SignReversalPair { s, p } = sign_reversal_pair(n)?;
    let c = compound(a, n - 1)?;
    Ok(&s * &p * c.transpose() * &p * &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit::{fixtures, laplace_det, random_orthonormal, random_rank_r, reference_compound, seeded_rng};
    use rand::Rng;

    fn rel(a: &Matrix, b: &Matrix) -> f64 {
        (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
    }

    fn random_vec(n: usize, rng: &mut impl Rng) -> Vector {
        Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0))
    }

    #[test]
    fn lu_det_matches_laplace() {
        let mut rng = seeded_rng(1);
        for n in 1..=4 {
            for _ in 0..20 {
                let x = Matrix::from_fn(n, n, |_, _| rng.random_range(-2.0..2.0));
                let d = determinant(&x).unwrap();
                let want = laplace_det(&x);
                assert!((d - want).abs() <= 1e-12 * (1.0 + want.abs()));
            }
        }
        assert_eq!(determinant(&Matrix::zeros(3, 3)).unwrap(), 0.0);
    }

    #[test]
    fn compound_of_running_example() {
        let a = fixtures::example3_a();
        let m = compound(&a, 2).unwrap();
        assert_eq!(m.row(0).iter().copied().collect::<Vec<_>>(), vec![-6., 12., 24., -16., -16., -32.]);
        assert!((m - fixtures::example3_m()).amax() < 1e-12);
    }

    #[test]
    fn compound_trivial_cases() {
        assert_eq!(compound(&Matrix::identity(4, 4), 2).unwrap(), Matrix::identity(6, 6));
        let mut rng = seeded_rng(2);
        let x = Matrix::from_fn(4, 3, |_, _| rng.random_range(-1.0..1.0));
        assert_eq!(compound(&x, 1).unwrap(), x);
        let t = -1.7;
        for k in 1..=3 {
            let lhs = compound(&(&x * t), k).unwrap();
            let rhs = compound(&x, k).unwrap() * t.powi(k as i32);
            assert!(rel(&lhs, &rhs) < 1e-12);
        }
        let sq = Matrix::from_fn(3, 3, |_, _| rng.random_range(-1.0..1.0));
        let top = compound(&sq, 3).unwrap();
        assert_eq!(top.shape(), (1, 1));
        assert!((top[(0, 0)] - laplace_det(&sq)).abs() < 1e-12);
        assert!(compound(&x, 4).is_err());
        assert!(compound(&x, 0).is_err());
    }

    #[test]
    fn compound_agrees_with_reference() {
        let mut rng = seeded_rng(4);
        for _ in 0..5 {
            let x = Matrix::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0));
            for k in 1..=4 {
                let got = compound(&x, k).unwrap();
                let want = reference_compound(&x, k).unwrap();
                assert!(rel(&got, &want) < 1e-12);
            }
        }
    }

    #[test]
    fn wedge_basics() {
        let e = Matrix::identity(4, 4);
        let e1 = e.column(0).into_owned();
        let e2 = e.column(1).into_owned();
        let z = wedge(&[e1.clone(), e2.clone()]).unwrap();
        assert_eq!(z.as_slice(), &[1., 0., 0., 0., 0., 0.]);

        let mut rng = seeded_rng(9);
        let u = random_vec(5, &mut rng);
        let v = random_vec(5, &mut rng);
        assert!(wedge(&[u.clone(), u.clone()]).unwrap().amax() < 1e-15);
        let uv = wedge(&[u.clone(), v.clone()]).unwrap();
        let vu = wedge(&[v.clone(), u.clone()]).unwrap();
        assert!((uv + vu).amax() < 1e-15);
        assert!(wedge(&[u, Vector::zeros(4)]).is_err());
    }

    #[test]
    fn wedge_vanishes_on_dependent_factors() {
        let mut rng = seeded_rng(10);
        let u = random_vec(5, &mut rng);
        let v = random_vec(5, &mut rng);
        let w = &u * 0.3 - &v * 2.0;
        assert!(wedge(&[u.clone(), v.clone(), w]).unwrap().amax() < 1e-14);
        let x = random_vec(5, &mut rng);
        assert!(wedge(&[u, v, x]).unwrap().norm() > 1e-3);
    }

    #[test]
    fn wedge_matrix_of_coordinate_plane() {
        let z = Vector::from_vec(vec![1., 0., 0., 0., 0., 0.]);
        let mz = wedge_matrix(&z, 4, 2).unwrap();
        let k = kernel_basis(mz.matrix(), &TolerancePolicy::default()).unwrap();
        assert_eq!(k.ncols(), 2);
        // kernel = span{e1, e2}
        assert!(k.rows(2, 2).amax() < 1e-14);
    }

    #[test]
    fn wedge_matrix_symbolic_layout() {
        // distinct primes make every entry traceable back to its z coordinate
        let z = Vector::from_vec(vec![2., 3., 5., 7., 11., 13.]);
        let mz = wedge_matrix(&z, 4, 2).unwrap();
        let (z1, z2, z3, z4, z5, z6) = (2., 3., 5., 7., 11., 13.);
        let expected = Matrix::from_row_slice(
            4,
            4,
            &[z4, -z2, z1, 0., z5, -z3, 0., z1, z6, 0., -z3, z2, 0., z6, -z5, z4],
        );
        assert_eq!(mz.matrix(), &expected);
    }

    #[test]
    fn wedge_matrix_acts_as_wedge() {
        let mut rng = seeded_rng(12);
        let (u, v, w) = (random_vec(6, &mut rng), random_vec(6, &mut rng), random_vec(6, &mut rng));
        let z = wedge(&[u.clone(), v.clone(), w.clone()]).unwrap();
        let mz = wedge_matrix(&z, 6, 3).unwrap();
        assert_eq!(mz.matrix().shape(), (15, 6));
        for _ in 0..20 {
            let x = random_vec(6, &mut rng);
            let direct = wedge(&[x.clone(), u.clone(), v.clone(), w.clone()]).unwrap();
            assert!((mz.apply(&x) - &direct).amax() < 1e-13);
        }
    }

    #[test]
    fn wedge_matrix_errors() {
        assert!(matches!(
            wedge_matrix(&Vector::zeros(6), 4, 2),
            Err(Error::DegenerateInput(_))
        ));
        assert!(wedge_matrix(&Vector::from_element(1, 1.0), 4, 4).is_err());
        assert!(wedge_matrix(&Vector::from_element(5, 1.0), 4, 2).is_err());
    }

    #[test]
    fn decomposability() {
        let policy = TolerancePolicy::default();
        let q = fixtures::example1_q();
        let res = is_decomposable(&q, 4, 2, &policy).unwrap();
        assert!(!res.decomposable);
        assert!(res.kernel.ncols() < 2);

        let m = fixtures::example3_m();
        for j in 0..m.ncols() {
            let col = m.column(j).into_owned();
            let res = is_decomposable(&col, 4, 2, &policy).unwrap();
            assert!(res.decomposable, "column {j}");
            assert_eq!(res.kernel.ncols(), 2);
        }

        let z = Vector::from_vec(vec![1., 0., 0., 0., 0., 0.]);
        assert!(is_decomposable(&z, 4, 2, &policy).unwrap().decomposable);
        let zero = is_decomposable(&Vector::zeros(6), 4, 2, &policy).unwrap();
        assert!(!zero.decomposable && zero.kernel.ncols() == 0);
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(adjugate(&Matrix::identity(4, 4)).unwrap(), Matrix::identity(4, 4));
        let d = Matrix::from_diagonal(&Vector::from_vec(vec![2., 3., 5.]));
        assert_eq!(
            adjugate(&d).unwrap(),
            Matrix::from_diagonal(&Vector::from_vec(vec![15., 10., 6.]))
        );
        assert_eq!(adjugate(&Matrix::from_element(1, 1, 4.0)).unwrap()[(0, 0)], 1.0);
        let mut rng = seeded_rng(13);
        let a = Matrix::from_fn(5, 5, |_, _| rng.random_range(-1.0..1.0));
        let adj = adjugate(&a).unwrap();
        let det = determinant(&a).unwrap();
        assert!(rel(&(&adj * &a), &(Matrix::identity(5, 5) * det)) < 1e-12);
        assert!(rel(&(&a * &adj), &(Matrix::identity(5, 5) * det)) < 1e-12);
    }

    #[test]
    fn adjugate_transformation_and_double_adjugate() {
        let mut rng = seeded_rng(14);
        for n in 2..=6 {
            let a = random_rank_r(n, n, n, rng.random(), None).unwrap();
            let via = adjugate_via_compound(&a).unwrap();
            let direct = adjugate(&a).unwrap();
            assert!(rel(&via, &direct) < 1e-12, "n = {n}");
            let adj2 = adjugate(&direct).unwrap();
            let cc = compound(&compound(&a, n - 1).unwrap(), n - 1).unwrap();
            assert!(rel(&adj2, &cc) < 1e-10);
            let scaled = &a * determinant(&a).unwrap().powi(n as i32 - 2);
            assert!(rel(&adj2, &scaled) < 1e-10);
        }
        assert!(adjugate_via_compound(&Matrix::identity(1, 1)).is_err());
    }

    #[test]
    fn sign_reversal_properties() {
        let sp3 = sign_reversal_pair(3).unwrap();
        assert_eq!(sp3.s.diagonal().as_slice(), &[-1.0, 1.0, -1.0]);
        for n in 1..=7 {
            let SignReversalPair { s, p } = sign_reversal_pair(n).unwrap();
            let id = Matrix::identity(n, n);
            let sign = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
            assert_eq!(&p * &p, id);
            assert_eq!(determinant(&s).unwrap(), sign(n * (n + 1) / 2));
            assert_eq!(determinant(&p).unwrap(), sign((n - 1) * n / 2));
            let sp = &s * &p;
            assert_eq!(&sp * &sp, &id * sign(n + 1));
            assert_eq!(sp, (&p * &s).transpose());
            if n >= 2 {
                assert_eq!(compound(&s, n - 1).unwrap(), &s * sign(n * (n + 3) / 2 + 1));
                assert_eq!(compound(&p, n - 1).unwrap(), &p * sign((n - 1) * (n - 2) / 2));
            }
        }
        let sp4 = sign_reversal_pair(4).unwrap();
        let t = &sp4.s * &sp4.p;
        assert_eq!(&t * &t, -Matrix::identity(4, 4));
    }

    #[test]
    fn compound_of_orthonormal_is_orthonormal() {
        let mut rng = seeded_rng(15);
        let u = random_orthonormal(6, 4, &mut rng);
        for k in 1..=4 {
            let c = compound(&u, k).unwrap();
            let gram = c.transpose() * &c;
            assert!((gram - Matrix::identity(c.ncols(), c.ncols())).amax() < 1e-12);
        }
    }
}

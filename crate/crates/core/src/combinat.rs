//! Increasing index tuples in lexicographic order.
//!
//! Tuples are 1-based in the public model (`IndexTuple`), matching the usual
//! row/column labelling of compound matrices. The `*0` helpers work on 0-based
//! `Vec<usize>` and are what the numerical code uses internally.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{ensure_arg, Error, Result};

/// Largest binomial coefficient any enumeration in this crate will produce.
pub const MAX_BINOMIAL: u64 = 1_000_000;

/// `binom(n, k)` in 64-bit arithmetic; `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) after the multiplication.
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Binomial coefficient checked against [`MAX_BINOMIAL`], as a `usize`.
pub fn binom_capped(n: usize, k: usize) -> Result<usize> {
    match binomial(n as u64, k as u64) {
        Some(b) if b <= MAX_BINOMIAL => Ok(b as usize),
        _ => Err(Error::InvalidArgument(format!(
            "binom({n}, {k}) exceeds the size cap of {MAX_BINOMIAL}"
        ))),
    }
}

/// A strictly increasing k-tuple drawn from `1..=ambient`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexTuple {
    entries: Vec<usize>,
    ambient: usize,
}

impl IndexTuple {
    pub fn new(entries: Vec<usize>, ambient: usize) -> Result<Self> {
        ensure_arg!(
            !entries.is_empty() && entries.len() <= ambient,
            "tuple length {} must lie in 1..={ambient}",
            entries.len()
        );
        ensure_arg!(entries[0] >= 1, "tuple entries are 1-based");
        ensure_arg!(
            entries.windows(2).all(|w| w[0] < w[1]),
            "tuple {entries:?} is not strictly increasing"
        );
        ensure_arg!(
            *entries.last().unwrap() <= ambient,
            "tuple {entries:?} exceeds ambient size {ambient}"
        );
        Ok(Self { entries, ambient })
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// 0-based copy of the entries.
    pub fn to_zero_based(&self) -> Vec<usize> {
        self.entries.iter().map(|&e| e - 1).collect()
    }
}

impl fmt::Display for IndexTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

fn check_nk(n: usize, k: usize) -> Result<()> {
    ensure_arg!(k >= 1 && k <= n, "need 1 <= k <= n, got n = {n}, k = {k}");
    Ok(())
}

/// All 0-based increasing k-subsets of `0..n` in lexicographic order.
pub fn lex_tuples0(n: usize, k: usize) -> Result<Vec<Vec<usize>>> {
    check_nk(n, k)?;
    let count = binom_capped(n, k)?;
    let mut out = Vec::with_capacity(count);
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // rightmost position that can still advance
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            break;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
    debug_assert_eq!(out.len(), count);
    Ok(out)
}

/// All increasing k-tuples of `1..=n` in lexicographic order.
pub fn lex_tuples(n: usize, k: usize) -> Result<Vec<IndexTuple>> {
    Ok(lex_tuples0(n, k)?
        .into_iter()
        .map(|t| IndexTuple {
            entries: t.into_iter().map(|e| e + 1).collect(),
            ambient: n,
        })
        .collect())
}

/// 0-based lexicographic rank of a 0-based increasing tuple of `0..n`.
///
/// Combinadic formula: `binom(n,k) - 1 - sum_i binom(n - 1 - c_i, k - i)`.
pub(crate) fn rank0(tuple: &[usize], n: usize) -> usize {
    let k = tuple.len();
    let total = binomial(n as u64, k as u64).expect("validated size") as usize;
    let tail: usize = tuple
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial((n - 1 - c) as u64, (k - i) as u64).unwrap() as usize)
        .sum();
    total - 1 - tail
}

/// Inverse of [`rank0`].
pub(crate) fn unrank0(mut rank: usize, n: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot;
        let mut c = next;
        loop {
            // number of tuples whose `slot` entry equals c
            let block = binomial((n - 1 - c) as u64, (remaining - 1) as u64).unwrap() as usize;
            if rank < block {
                break;
            }
            rank -= block;
            c += 1;
        }
        out.push(c);
        next = c + 1;
    }
    out
}

/// 1-based position of `t` in `lex_tuples(t.ambient(), t.len())`.
pub fn indexof_tuple(t: &IndexTuple) -> usize {
    rank0(&t.to_zero_based(), t.ambient) + 1
}

/// The `i`-th (1-based) tuple of `lex_tuples(n, k)`.
pub fn unrank_tuple(i: usize, n: usize, k: usize) -> Result<IndexTuple> {
    check_nk(n, k)?;
    let total = binom_capped(n, k)?;
    ensure_arg!(i >= 1 && i <= total, "rank {i} outside 1..={total}");
    let entries = unrank0(i - 1, n, k).into_iter().map(|e| e + 1).collect();
    Ok(IndexTuple { entries, ambient: n })
}

/// 0/1 matrix with rows indexed by `lex_tuples(r, k)` and a one at `(I, j)`
/// whenever `j ∈ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubsetIncidence {
    r: usize,
    k: usize,
    entries: DMatrix<f64>,
}

impl SubsetIncidence {
    pub fn rows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn cols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.entries
    }

    /// Row `i` as booleans, for parity systems.
    pub fn bool_row(&self, i: usize) -> Vec<bool> {
        self.entries.row(i).iter().map(|&v| v != 0.0).collect()
    }
}

pub fn incidence_matrix(r: usize, k: usize) -> Result<SubsetIncidence> {
    ensure_arg!(k >= 1 && k < r, "incidence matrix needs 1 <= k < r, got r = {r}, k = {k}");
    let tuples = lex_tuples0(r, k)?;
    let mut entries = DMatrix::zeros(tuples.len(), r);
    for (row, t) in tuples.iter().enumerate() {
        for &j in t {
            entries[(row, j)] = 1.0;
        }
    }
    Ok(SubsetIncidence { r, k, entries })
}

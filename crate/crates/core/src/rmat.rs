//! Classical trigonometric R-matrices, the permutation matrix and partial
//! transposes, stored sparsely over `QScalar`.
//!
//! Composite index convention: `(i, k) -> i * k_dim + k`, sheet 1 outer.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::qalg::QScalar;

/// Sparse matrix with commuting `QScalar` entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), QScalar>,
}

impl CMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.entries.insert((i, i), QScalar::one());
        }
        m
    }

    /// Elementary matrix `e_ij` of size `n`.
    pub fn elementary(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n, n);
        m.entries.insert((i, j), QScalar::one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> QScalar {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, c: QScalar) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        if c.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), c);
        }
    }

    fn add_at(&mut self, i: usize, j: usize, c: &QScalar) {
        let e = self.entries.entry((i, j)).or_default();
        *e += c;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &QScalar)> {
        self.entries.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// Replace `q` by `q^-1` in every entry.
    pub fn bar(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&k, c)| (k, c.bar())).collect(),
        }
    }

    pub fn scale(&self, c: &QScalar) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for (&(i, j), x) in &self.entries {
            out.set(i, j, x * c);
        }
        out
    }

    pub fn try_mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_row: Vec<Vec<(usize, &QScalar)>> = vec![Vec::new(); other.rows];
        for (&(k, j), c) in &other.entries {
            by_row[k].push((j, c));
        }
        let mut out = CMatrix::zero(self.rows, other.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                out.add_at(i, j, &(a * b));
            }
        }
        Ok(out)
    }

    fn combine(&self, other: &CMatrix, sign: i8) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (&(i, j), c) in &other.entries {
            if sign >= 0 {
                out.add_at(i, j, c);
            } else {
                out.add_at(i, j, &-c);
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.combine(other, 1)
    }

    pub fn try_sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.combine(other, -1)
    }

    /// Kronecker product `self (x) other` in the sheet-1-outer convention.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zero(self.rows * other.rows, self.cols * other.cols);
        for (&(i, j), a) in &self.entries {
            for (&(k, l), b) in &other.entries {
                out.set(i * other.rows + k, j * other.cols + l, a * b);
            }
        }
        out
    }

    fn sheet_dim(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("partial transpose needs a square matrix".into()));
        }
        let k = (self.rows as f64).sqrt().round() as usize;
        if k * k != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "dimension {} is not a perfect square",
                self.rows
            )));
        }
        Ok(k)
    }

    /// Transpose in the first tensor factor only.
    pub fn partial_transpose_t1(&self) -> Result<CMatrix> {
        let k = self.sheet_dim()?;
        let mut out = CMatrix::zero(self.rows, self.cols);
        for (&(r, c), x) in &self.entries {
            let (i, a) = (r / k, r % k);
            let (j, b) = (c / k, c % k);
            out.set(j * k + a, i * k + b, x.clone());
        }
        Ok(out)
    }

    /// Transpose in the second tensor factor only.
    pub fn partial_transpose_t2(&self) -> Result<CMatrix> {
        let k = self.sheet_dim()?;
        let mut out = CMatrix::zero(self.rows, self.cols);
        for (&(r, c), x) in &self.entries {
            let (i, a) = (r / k, r % k);
            let (j, b) = (c / k, c % k);
            out.set(i * k + b, j * k + a, x.clone());
        }
        Ok(out)
    }
}

/// # Panics
/// On incompatible shapes.
impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.try_mul(rhs).expect("CMatrix product shape mismatch")
    }
}

/// # Panics
/// On incompatible shapes.
impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.try_add(rhs).expect("CMatrix sum shape mismatch")
    }
}

/// # Panics
/// On incompatible shapes.
impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.try_sub(rhs).expect("CMatrix difference shape mismatch")
    }
}

/// Trigonometric R-matrix
/// `R_k = sum e_ii(x)e_jj + (q-1) sum e_ii(x)e_ii + (q-q^-1) sum_{j<i} e_ij(x)e_ji`.
/// With `inverse_q`, every power of `q` is inverted, which yields `R_k^-1`.
pub fn build_r(k: usize, inverse_q: bool) -> CMatrix {
    assert!(k >= 1, "R-matrix needs k >= 1");
    let n = k * k;
    let mut r = CMatrix::zero(n, n);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                r.set(i * k + j, i * k + j, QScalar::one());
            }
        }
        r.set(i * k + i, i * k + i, QScalar::q_pow(1));
        for j in 0..i {
            r.set(i * k + j, j * k + i, QScalar::q_minus_q_inv());
        }
    }
    if inverse_q {
        r.bar()
    } else {
        r
    }
}

/// Permutation `P = sum e_ij (x) e_ji` on `V (x) V`, `dim V = k`.
pub fn build_p(k: usize) -> CMatrix {
    build_p_rect(k, k)
}

/// Flip `V_a (x) V_b -> V_b (x) V_a` as an `(a*b) x (b*a)` matrix: the row
/// `(i, k)` with `i < a`, `k < b` meets the column `(k, i)`.
///
/// For `a = b` this is the usual permutation matrix. In mixed sheet
/// products it carries the operator with row shape `a (x) b` to one with
/// column shape `b (x) a`.
pub fn build_p_rect(a: usize, b: usize) -> CMatrix {
    let mut p = CMatrix::zero(a * b, b * a);
    for i in 0..a {
        for k in 0..b {
            p.set(i * b + k, k * a + i, QScalar::one());
        }
    }
    p
}

/// `R^-T = (R^-1)^T`.
pub fn build_r_inv_t(k: usize) -> CMatrix {
    build_r(k, true).transpose()
}

/// The two coefficients of `R(lambda, mu) = lambda R^-T - mu R`, as `(R^-T, R)`.
pub fn affine_r_pair(k: usize) -> (CMatrix, CMatrix) {
    (build_r_inv_t(k), build_r(k, false))
}

/// `R12 R13 R23 = R23 R13 R12` on `V^(x)3`.
pub fn check_yang_baxter(k: usize) -> bool {
    yang_baxter_holds(&build_r(k, false), k)
}

/// Yang-Baxter equation for an arbitrary `k^2 x k^2` matrix.
pub fn yang_baxter_holds(r: &CMatrix, k: usize) -> bool {
    let id = CMatrix::identity(k);
    let r12 = r.kron(&id);
    let r23 = id.kron(r);
    let p23 = id.kron(&build_p(k));
    let r13 = &(&p23 * &r12) * &p23;
    let lhs = &(&r12 * &r13) * &r23;
    let rhs = &(&r23 * &r13) * &r12;
    lhs == rhs
}

/// `R R^T = (q-q^-1) R P + I`, `R^T R = (q-q^-1) P R + I`, and the
/// differences `R^T - R^-1 = R - R^-T = (q-q^-1) P`.
pub fn check_rrp_identity(k: usize) -> bool {
    rrp_holds(&build_r(k, false), &build_r(k, true), k)
}

/// The identities of [`check_rrp_identity`] for a given pair `(R, R^-1)`.
pub fn rrp_holds(r: &CMatrix, rinv: &CMatrix, k: usize) -> bool {
    let rt = r.transpose();
    let rinvt = rinv.transpose();
    let p = build_p(k);
    let id = CMatrix::identity(k * k);
    let c = QScalar::q_minus_q_inv();
    let first = &(r * &rt) == &(&(r * &p).scale(&c) + &id);
    let second = &(&rt * r) == &(&(&p * r).scale(&c) + &id);
    let cp = p.scale(&c);
    let third = &rt - rinv == cp;
    let fourth = r - &rinvt == cp;
    first && second && third && fourth
}

/// `P R = R^T P`.
pub fn check_pr_identity(k: usize) -> bool {
    pr_holds(&build_r(k, false), k)
}

pub fn pr_holds(r: &CMatrix, k: usize) -> bool {
    let p = build_p(k);
    &p * r == &r.transpose() * &p
}

/// `R(q) R(q^-1) = R(q^-1) R(q) = I`.
pub fn check_inverse(k: usize) -> bool {
    inverse_holds(&build_r(k, false), &build_r(k, true))
}

pub fn inverse_holds(r: &CMatrix, rinv: &CMatrix) -> bool {
    let id = CMatrix::identity(r.rows());
    r * rinv == id && rinv * r == id
}

/// `(uR - vR^-T)(uR^-1 - vR^T) = (u^2 + v^2 - (q^2+q^-2)uv) I`, checked per
/// monomial in `u, v`.
pub fn check_scalar_identity(k: usize) -> bool {
    let r = build_r(k, false);
    let rinv = build_r(k, true);
    let rinvt = rinv.transpose();
    let rt = r.transpose();
    let id = CMatrix::identity(k * k);
    let uu = &r * &rinv;
    let vv = &rinvt * &rt;
    let uv = &(&r * &rt) + &(&rinvt * &rinv);
    let q2 = &QScalar::q_pow(2) + &QScalar::q_pow(-2);
    uu == id && vv == id && uv == id.scale(&q2)
}

/// `R^t1(u,v) R(w,y) = R(w,y) R^t1(u,v)` for all spectral values, i.e. each
/// of `(R^-T)^t1`, `R^t1` commutes with each of `R^-T`, `R`.
pub fn check_t1_commutation(k: usize) -> bool {
    let (rmt, r) = affine_r_pair(k);
    let s1 = rmt.partial_transpose_t1().expect("square");
    let rt1 = r.partial_transpose_t1().expect("square");
    [&s1, &rt1]
        .iter()
        .all(|x| [&rmt, &r].iter().all(|y| &(*x * *y) == &(*y * *x)))
}

/// Blocks of `R_k` under the basis split `k = m + n2`, each sheet ordered
/// `(first m | last n2)`.
///
/// Returns the 16 blocks indexed by `(alpha, beta)` pairs of sheet labels
/// `((a1, a2), (b1, b2))`, each a CMatrix of size `d(a1)d(a2) x d(b1)d(b2)`.
pub fn block_decompose(r: &CMatrix, m: usize, n2: usize) -> BTreeMap<((u8, u8), (u8, u8)), CMatrix> {
    let k = m + n2;
    assert_eq!(r.rows(), k * k, "block decomposition size");
    let part = |i: usize| if i < m { (0u8, i) } else { (1u8, i - m) };
    let dim = |p: u8| if p == 0 { m } else { n2 };
    let mut out: BTreeMap<((u8, u8), (u8, u8)), CMatrix> = BTreeMap::new();
    for a1 in 0..2u8 {
        for a2 in 0..2u8 {
            for b1 in 0..2u8 {
                for b2 in 0..2u8 {
                    out.insert(
                        ((a1, a2), (b1, b2)),
                        CMatrix::zero(dim(a1) * dim(a2), dim(b1) * dim(b2)),
                    );
                }
            }
        }
    }
    for (row, col, c) in r.entries() {
        let (a1, i) = part(row / k);
        let (a2, ii) = part(row % k);
        let (b1, j) = part(col / k);
        let (b2, jj) = part(col % k);
        let blk = out.get_mut(&((a1, a2), (b1, b2))).expect("block present");
        blk.set(i * dim(a2) + ii, j * dim(b2) + jj, c.clone());
    }
    out
}

/// Structural test of the index convention: under a `(m | n2)` split the
/// diagonal blocks of `R_{m+n2}` are `R_m`, `I`, `I`, `R_n2`, the
/// `(21, 12)` block is `(q-q^-1)` times the flip, and all others vanish.
pub fn check_block_form(m: usize, n2: usize) -> bool {
    let r = build_r(m + n2, false);
    let blocks = block_decompose(&r, m, n2);
    let c = QScalar::q_minus_q_inv();
    blocks.iter().all(|(&(a, b), blk)| {
        let expected = match (a, b) {
            ((0, 0), (0, 0)) => build_r(m, false),
            ((0, 1), (0, 1)) => CMatrix::identity(m * n2),
            ((1, 0), (1, 0)) => CMatrix::identity(n2 * m),
            ((1, 1), (1, 1)) => build_r(n2, false),
            ((1, 0), (0, 1)) => build_p_rect(n2, m).scale(&c),
            _ => CMatrix::zero(blk.rows(), blk.cols()),
        };
        *blk == expected
    })
}

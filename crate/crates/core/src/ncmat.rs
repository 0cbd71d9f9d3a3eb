//! Dense matrices over the quantum torus.
//!
//! Every product keeps the quantum order of the factors: `(AB)_ij` is the
//! sum of `A_ik * B_kj` with the entry of `A` on the left.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::qalg::{QElem, QScalar, SkewForm};
use crate::rmat::CMatrix;

/// Rectangular matrix whose entries share one skew form.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    form: Arc<SkewForm>,
    data: Vec<QElem>,
}

/// Sheet order of a tensor product of two quantum matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SheetOrder {
    /// `(1)A (2)B`: entry `A_ij * B_kl`.
    O12,
    /// `(2)B (1)A`: entry `B_kl * A_ij`.
    O21,
}

/// Side of a classical action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn shape_err(what: &str, a: &QMatrix, b: &QMatrix) -> Error {
    Error::DimensionMismatch(format!(
        "{what}: {}x{} and {}x{}",
        a.rows, a.cols, b.rows, b.cols
    ))
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize, form: &Arc<SkewForm>) -> Self {
        Self {
            rows,
            cols,
            form: form.clone(),
            data: vec![QElem::zero(form); rows * cols],
        }
    }

    pub fn identity(n: usize, form: &Arc<SkewForm>) -> Self {
        let mut m = Self::zeros(n, n, form);
        for i in 0..n {
            m.data[i * n + i] = QElem::one(form);
        }
        m
    }

    /// Build from row vectors; every entry must live on `form`.
    pub fn from_rows(rows: Vec<Vec<QElem>>, form: &Arc<SkewForm>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for e in row {
                if **e.form() != **form {
                    return Err(Error::FormMismatch);
                }
                data.push(e);
            }
        }
        Ok(Self { rows: r, cols: c, form: form.clone(), data })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        form: &Arc<SkewForm>,
        mut f: impl FnMut(usize, usize) -> QElem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, form: form.clone(), data }
    }

    /// Classical matrix viewed as a quantum matrix with scalar entries.
    pub fn from_cmatrix(c: &CMatrix, form: &Arc<SkewForm>) -> Self {
        let mut m = Self::zeros(c.rows(), c.cols(), form);
        for (i, j, s) in c.entries() {
            m.set(i, j, QElem::scalar(s.clone(), form));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn get(&self, i: usize, j: usize) -> &QElem {
        &self.data[i * self.cols + j]
    }

    /// # Panics
    /// If the entry lives on another form or the index is out of range.
    pub fn set(&mut self, i: usize, j: usize, e: QElem) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert!(**e.form() == *self.form, "entry on a different form");
        self.data[i * self.cols + j] = e;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QElem::is_zero)
    }

    /// Nonzero entries with their `(row, col)` positions, row-major.
    pub fn nonzero_entries(&self) -> Vec<((usize, usize), &QElem)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(k, e)| ((k / self.cols, k % self.cols), e))
            .collect()
    }

    fn check_form(&self, other: &QMatrix) -> Result<()> {
        if Arc::ptr_eq(&self.form, &other.form) || *self.form == *other.form {
            Ok(())
        } else {
            Err(Error::FormMismatch)
        }
    }

    pub fn matmul(&self, other: &QMatrix) -> Result<QMatrix> {
        self.check_form(other)?;
        if self.cols != other.rows {
            return Err(shape_err("matmul", self, other));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols, &self.form);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.mul_unchecked(b);
                    out.data[i * other.cols + j].add_assign_scaled(&p, 1);
                }
            }
        }
        Ok(out)
    }

    fn combine(&self, other: &QMatrix, sign: i8) -> Result<QMatrix> {
        self.check_form(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(shape_err("sum", self, other));
        }
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            x.add_assign_scaled(y, sign);
        }
        Ok(out)
    }

    pub fn add(&self, other: &QMatrix) -> Result<QMatrix> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &QMatrix) -> Result<QMatrix> {
        self.combine(other, -1)
    }

    pub fn scale(&self, c: &QScalar) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            form: self.form.clone(),
            data: self.data.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> QMatrix {
        self.scale(&QScalar::from_int(-1))
    }

    /// Ordered tensor product on two sheets. Composite row `(i, k)` is
    /// `i * B.rows + k`, composite column `(j, l)` is `j * B.cols + l`.
    pub fn sheet_product(a: &QMatrix, b: &QMatrix, order: SheetOrder) -> Result<QMatrix> {
        a.check_form(b)?;
        let (br, bc) = (b.rows, b.cols);
        let mut out = QMatrix::zeros(a.rows * br, a.cols * bc, &a.form);
        for i in 0..a.rows {
            for j in 0..a.cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for k in 0..br {
                    for l in 0..bc {
                        let y = b.get(k, l);
                        if y.is_zero() {
                            continue;
                        }
                        let p = match order {
                            SheetOrder::O12 => x.mul_unchecked(y),
                            SheetOrder::O21 => y.mul_unchecked(x),
                        };
                        out.data[(i * br + k) * out.cols + j * bc + l] = p;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `C * M` (left) or `M * C` (right) with `C` classical.
    pub fn classical_act(c: &CMatrix, m: &QMatrix, side: Side) -> Result<QMatrix> {
        match side {
            Side::Left => {
                if c.cols() != m.rows {
                    return Err(Error::DimensionMismatch(format!(
                        "classical {}x{} times {}x{}",
                        c.rows(),
                        c.cols(),
                        m.rows,
                        m.cols
                    )));
                }
                let mut out = QMatrix::zeros(c.rows(), m.cols, &m.form);
                for (r, k, s) in c.entries() {
                    for j in 0..m.cols {
                        let e = m.get(k, j);
                        if !e.is_zero() {
                            out.data[r * m.cols + j].add_assign_scaled(&e.scale(s), 1);
                        }
                    }
                }
                Ok(out)
            }
            Side::Right => {
                if m.cols != c.rows() {
                    return Err(Error::DimensionMismatch(format!(
                        "{}x{} times classical {}x{}",
                        m.rows,
                        m.cols,
                        c.rows(),
                        c.cols()
                    )));
                }
                let mut out = QMatrix::zeros(m.rows, c.cols(), &m.form);
                for (k, col, s) in c.entries() {
                    for i in 0..m.rows {
                        let e = m.get(i, k);
                        if !e.is_zero() {
                            out.data[i * c.cols() + col].add_assign_scaled(&e.scale(s), 1);
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Entry `(i, j)` becomes entry `(j, i)`; the entries are untouched.
    pub fn transpose_q(&self) -> QMatrix {
        QMatrix::from_fn(self.cols, self.rows, &self.form, |i, j| self.get(j, i).clone())
    }

    /// `A (x) I_n` as an operator on two sheets.
    pub fn lift1(&self, n: usize) -> QMatrix {
        let id = QMatrix::identity(n, &self.form);
        QMatrix::sheet_product(self, &id, SheetOrder::O12).expect("same form")
    }

    /// `I_n (x) A` as an operator on two sheets.
    pub fn lift2(&self, n: usize) -> QMatrix {
        let id = QMatrix::identity(n, &self.form);
        QMatrix::sheet_product(&id, self, SheetOrder::O12).expect("same form")
    }

    pub fn submatrix(&self, r0: usize, nr: usize, c0: usize, nc: usize) -> Result<QMatrix> {
        if r0 + nr > self.rows || c0 + nc > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "submatrix [{r0}+{nr}, {c0}+{nc}] of {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(QMatrix::from_fn(nr, nc, &self.form, |i, j| self.get(r0 + i, c0 + j).clone()))
    }

    /// Assemble `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &QMatrix, b: &QMatrix, c: &QMatrix, d: &QMatrix) -> Result<QMatrix> {
        for x in [b, c, d] {
            a.check_form(x)?;
        }
        if a.rows != b.rows || c.rows != d.rows || a.cols != c.cols || b.cols != d.cols {
            return Err(Error::DimensionMismatch("block sizes do not line up".into()));
        }
        let (r1, c1) = (a.rows, a.cols);
        Ok(QMatrix::from_fn(r1 + c.rows, c1 + b.cols, &a.form, |i, j| {
            match (i < r1, j < c1) {
                (true, true) => a.get(i, j),
                (true, false) => b.get(i, j - c1),
                (false, true) => c.get(i - r1, j),
                (false, false) => d.get(i - r1, j - c1),
            }
            .clone()
        }))
    }

    pub fn pow(&self, p: usize) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut out = QMatrix::identity(self.rows, &self.form);
        for _ in 0..p {
            out = out.matmul(self)?;
        }
        Ok(out)
    }

    /// Re-express every entry on a larger form at the given generator offset.
    pub fn embed(&self, form: &Arc<SkewForm>, offset: usize) -> Result<QMatrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(e.embed(form, offset)?);
        }
        Ok(QMatrix { rows: self.rows, cols: self.cols, form: form.clone(), data })
    }

    /// Entrywise value at `w_i = 1`, `q = 1`.
    pub fn classicalize(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).classicalize()).collect())
            .collect()
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| ((i + 1)..self.cols).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j).is_zero()))
    }

    /// Two-sided inverse for the supported class: a unit monomial `1x1`,
    /// a triangular matrix with unit-monomial diagonal, or a `2x2`
    /// block-triangular matrix with recursively invertible diagonal blocks.
    pub fn invert_restricted(&self) -> Result<QMatrix> {
        if self.rows != self.cols {
            return Err(Error::NotInvertibleInSupportedClass(format!(
                "{}x{} is not square",
                self.rows, self.cols
            )));
        }
        let inv = self.invert_unchecked()?;
        let id = QMatrix::identity(self.rows, &self.form);
        if self.matmul(&inv)? != id || inv.matmul(self)? != id {
            return Err(Error::NotInvertibleInSupportedClass(
                "candidate inverse failed the two-sided check".into(),
            ));
        }
        Ok(inv)
    }

    fn invert_unchecked(&self) -> Result<QMatrix> {
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        if n == 1 {
            let e = self.get(0, 0).invert_monomial().map_err(|_| {
                Error::NotInvertibleInSupportedClass(format!("entry {} is not a unit", self.get(0, 0)))
            })?;
            return Ok(QMatrix::from_fn(1, 1, &self.form, |_, _| e.clone()));
        }
        if self.is_lower_triangular() {
            if let Ok(inv) = self.invert_triangular(true) {
                return Ok(inv);
            }
        }
        if self.is_upper_triangular() {
            if let Ok(inv) = self.invert_triangular(false) {
                return Ok(inv);
            }
        }
        for s in 1..n {
            let a = self.submatrix(0, s, 0, s)?;
            let b = self.submatrix(0, s, s, n - s)?;
            let c = self.submatrix(s, n - s, 0, s)?;
            let d = self.submatrix(s, n - s, s, n - s)?;
            if b.is_zero() {
                if let (Ok(ai), Ok(di)) = (a.invert_unchecked(), d.invert_unchecked()) {
                    let off = di.matmul(&c)?.matmul(&ai)?.neg();
                    let z = QMatrix::zeros(s, n - s, &self.form);
                    return QMatrix::from_blocks(&ai, &z, &off, &di);
                }
            } else if c.is_zero() {
                if let (Ok(ai), Ok(di)) = (a.invert_unchecked(), d.invert_unchecked()) {
                    let off = ai.matmul(&b)?.matmul(&di)?.neg();
                    let z = QMatrix::zeros(n - s, s, &self.form);
                    return QMatrix::from_blocks(&ai, &off, &z, &di);
                }
            }
        }
        Err(Error::NotInvertibleInSupportedClass(format!(
            "{n}x{n} matrix is neither monomial, triangular nor block-triangular"
        )))
    }

    fn invert_triangular(&self, lower: bool) -> Result<QMatrix> {
        let n = self.rows;
        let mut diag_inv = Vec::with_capacity(n);
        for i in 0..n {
            diag_inv.push(self.get(i, i).invert_monomial().map_err(|_| {
                Error::NotInvertibleInSupportedClass(format!("diagonal entry {i} is not a unit"))
            })?);
        }
        let mut inv = QMatrix::zeros(n, n, &self.form);
        for j in 0..n {
            inv.set(j, j, diag_inv[j].clone());
            let order: Vec<usize> = if lower {
                ((j + 1)..n).collect()
            } else {
                (0..j).rev().collect()
            };
            for i in order {
                let range: Vec<usize> = if lower { (j..i).collect() } else { ((i + 1)..=j).collect() };
                let mut acc = QElem::zero(&self.form);
                for k in range {
                    let x = self.get(i, k);
                    let y = inv.get(k, j);
                    if !x.is_zero() && !y.is_zero() {
                        acc.add_assign_scaled(&x.mul_unchecked(y), 1);
                    }
                }
                let v = diag_inv[i].mul_unchecked(&acc);
                inv.set(i, j, -&v);
            }
        }
        Ok(inv)
    }
}

impl fmt::Display for QMatrix {
    /// One line per nonzero entry: `[i,j] <entry>`; an all-zero matrix
    /// prints nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ((i, j), e) in self.nonzero_entries() {
            writeln!(f, "[{i},{j}] {e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix {}x{}\n{self}", self.rows, self.cols)
    }
}

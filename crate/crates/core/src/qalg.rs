//! Exact coefficient ring `Z[v, v^-1]` (with `q = v^2`) and the quantum torus
//! of Weyl-ordered monomials over it.
//!
//! The torus is defined by a skew form `E = 2 eps` stored with integer entries.
//! Weyl-ordered basis elements multiply as
//!
//! ```text
//! :w^a: * :w^b: = v^(-a.E.b) :w^(a+b):
//! ```
//!
//! so that generators satisfy `w_i w_j = q^(-2 eps_ij) w_j w_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Laurent polynomial in `v = q^(1/2)` with arbitrary-precision integer
/// coefficients. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QScalar {
    terms: BTreeMap<i64, BigInt>,
}

impl QScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    /// `v^k`.
    pub fn v_pow(k: i64) -> Self {
        Self::term(1, k)
    }

    /// `q^k = v^(2k)`.
    pub fn q_pow(k: i64) -> Self {
        Self::term(1, 2 * k)
    }

    /// `c * v^k`.
    pub fn term(c: impl Into<BigInt>, k: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::term(c, 0)
    }

    /// `q - q^-1`, the factor in front of every permutation-matrix correction.
    pub fn q_minus_q_inv() -> Self {
        Self::q_pow(1) - Self::q_pow(-1)
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut s = Self::zero();
        for (k, c) in it {
            s.add_term(k, c.into());
        }
        s
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    /// Bar involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    /// If this scalar is `+-v^k`, return `(sign, k)`.
    pub fn as_unit(&self) -> Option<(i8, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((1, *k))
        } else if (-c).is_one() {
            Some((-1, *k))
        } else {
            None
        }
    }

    /// Value at `v = 1`.
    pub fn at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// `self * other * v^shift`.
    pub fn mul_shifted(&self, other: &QScalar, shift: i64) -> QScalar {
        let mut out = QScalar::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                out.add_term(k1 + k2 + shift, c1 * c2);
            }
        }
        out
    }

    fn add_scaled(&mut self, other: &QScalar, sign: i8) {
        for (k, c) in &other.terms {
            if sign >= 0 {
                self.add_term(*k, c.clone());
            } else {
                self.add_term(*k, -c.clone());
            }
        }
    }
}

impl fmt::Display for QScalar {
    /// `c*v^k` terms in ascending exponent, e.g. `-1*v^-2 + 1*v^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*v^{k}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QScalar({self})")
    }
}

impl Add for &QScalar {
    type Output = QScalar;
    fn add(self, rhs: &QScalar) -> QScalar {
        let mut out = self.clone();
        out.add_scaled(rhs, 1);
        out
    }
}

impl Sub for &QScalar {
    type Output = QScalar;
    fn sub(self, rhs: &QScalar) -> QScalar {
        let mut out = self.clone();
        out.add_scaled(rhs, -1);
        out
    }
}

impl Mul for &QScalar {
    type Output = QScalar;
    fn mul(self, rhs: &QScalar) -> QScalar {
        self.mul_shifted(rhs, 0)
    }
}

impl Neg for &QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        QScalar {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! forward_owned_scalar {
    ($tr:ident, $m:ident) => {
        impl $tr for QScalar {
            type Output = QScalar;
            fn $m(self, rhs: QScalar) -> QScalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned_scalar!(Add, add);
forward_owned_scalar!(Sub, sub);
forward_owned_scalar!(Mul, mul);

impl Neg for QScalar {
    type Output = QScalar;
    fn neg(self) -> QScalar {
        -&self
    }
}

impl AddAssign<&QScalar> for QScalar {
    fn add_assign(&mut self, rhs: &QScalar) {
        self.add_scaled(rhs, 1);
    }
}

impl SubAssign<&QScalar> for QScalar {
    fn sub_assign(&mut self, rhs: &QScalar) {
        self.add_scaled(rhs, -1);
    }
}

/// Skew-symmetric integer matrix `E = 2 eps` on `N` generators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewForm {
    n: usize,
    e: Vec<i64>,
}

impl SkewForm {
    /// Validate and wrap a square matrix of doubled exchange entries.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        let mut e = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "exchange matrix row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            e.extend_from_slice(row);
        }
        for i in 0..n {
            for j in i..n {
                if e[i * n + j] != -e[j * n + i] {
                    return Err(Error::NotSkewSymmetric(i, j));
                }
            }
        }
        Ok(Self { n, e })
    }

    /// Form on `n` mutually commuting generators.
    pub fn zero(n: usize) -> Self {
        Self { n, e: vec![0; n * n] }
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Doubled exchange entry `E_ij = 2 eps_ij`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.e[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.e.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    /// Copy with `E_ij = value` and `E_ji = -value`.
    pub fn with_entry(&self, i: usize, j: usize, value: i64) -> Self {
        let mut out = self.clone();
        out.e[i * self.n + j] = value;
        out.e[j * self.n + i] = -value;
        out
    }

    /// `a . E . b`.
    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            let row = &self.e[i * self.n..(i + 1) * self.n];
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    acc += ai * row[j] * bj;
                }
            }
        }
        acc
    }

    /// Block-diagonal sum: the generators of `other` follow those of `self`
    /// and commute with them.
    pub fn direct_sum(&self, other: &SkewForm) -> SkewForm {
        let n = self.n + other.n;
        let mut e = vec![0; n * n];
        for i in 0..self.n {
            for j in 0..self.n {
                e[i * n + j] = self.entry(i, j);
            }
        }
        for i in 0..other.n {
            for j in 0..other.n {
                e[(self.n + i) * n + self.n + j] = other.entry(i, j);
            }
        }
        SkewForm { n, e }
    }
}

impl fmt::Debug for SkewForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SkewForm").field("n", &self.n).field("E", &self.rows()).finish()
    }
}

/// Exponent vector of a Weyl-ordered monomial.
pub type Exponent = Vec<i64>;

/// Element of the quantum torus: finite sum of `c_a :w^a:` in normal form.
#[derive(Clone)]
pub struct QElem {
    terms: BTreeMap<Exponent, QScalar>,
    form: Arc<SkewForm>,
}

fn same_form(a: &Arc<SkewForm>, b: &Arc<SkewForm>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for QElem {
    fn eq(&self, other: &Self) -> bool {
        same_form(&self.form, &other.form) && self.terms == other.terms
    }
}

impl Eq for QElem {}

impl QElem {
    pub fn zero(form: &Arc<SkewForm>) -> Self {
        Self { terms: BTreeMap::new(), form: form.clone() }
    }

    pub fn one(form: &Arc<SkewForm>) -> Self {
        Self::scalar(QScalar::one(), form)
    }

    /// Scalar multiple of the identity.
    pub fn scalar(c: QScalar, form: &Arc<SkewForm>) -> Self {
        Self::monomial_unchecked(vec![0; form.rank()], c, form)
    }

    /// The basis element `:w^a:`.
    pub fn weyl(a: &[i64], form: &Arc<SkewForm>) -> Result<Self> {
        Self::monomial(a, QScalar::one(), form)
    }

    /// `c :w^a:`.
    pub fn monomial(a: &[i64], c: QScalar, form: &Arc<SkewForm>) -> Result<Self> {
        if a.len() != form.rank() {
            return Err(Error::DimensionMismatch(format!(
                "exponent has length {}, form has {} generators",
                a.len(),
                form.rank()
            )));
        }
        Ok(Self::monomial_unchecked(a.to_vec(), c, form))
    }

    fn monomial_unchecked(a: Exponent, c: QScalar, form: &Arc<SkewForm>) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        Self { terms, form: form.clone() }
    }

    /// Generator `w_i`.
    pub fn generator(i: usize, form: &Arc<SkewForm>) -> Self {
        let mut a = vec![0; form.rank()];
        a[i] = 1;
        Self::monomial_unchecked(a, QScalar::one(), form)
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &QScalar)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, a: &[i64]) -> QScalar {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    /// Product in the torus; fails if the operands live on different forms.
    pub fn qmul(&self, other: &QElem) -> Result<QElem> {
        if !same_form(&self.form, &other.form) {
            return Err(Error::FormMismatch);
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &QElem) -> QElem {
        let mut out = QElem::zero(&self.form);
        if self.is_zero() || other.is_zero() {
            return out;
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let shift = -self.form.pairing(a, b);
                let key: Exponent = a.iter().zip(b).map(|(x, y)| x + y).collect();
                let c = ca.mul_shifted(cb, shift);
                out.accumulate(key, &c, 1);
            }
        }
        out
    }

    fn accumulate(&mut self, key: Exponent, c: &QScalar, sign: i8) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(existing) => {
                if sign >= 0 {
                    *existing += c;
                } else {
                    *existing -= c;
                }
                if existing.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                let c = if sign >= 0 { c.clone() } else { -c };
                self.terms.insert(key, c);
            }
        }
    }

    pub fn scale(&self, c: &QScalar) -> QElem {
        let mut out = QElem::zero(&self.form);
        if c.is_zero() {
            return out;
        }
        for (a, ca) in &self.terms {
            let p = ca * c;
            if !p.is_zero() {
                out.terms.insert(a.clone(), p);
            }
        }
        out
    }

    pub(crate) fn add_assign_scaled(&mut self, other: &QElem, sign: i8) {
        for (a, c) in &other.terms {
            self.accumulate(a.clone(), c, sign);
        }
    }

    /// If the element is a single monomial `c :w^a:`, return it.
    pub fn as_monomial(&self) -> Option<(&Exponent, &QScalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Inverse of a unit monomial `+-v^k :w^a:`, namely `+-v^-k :w^-a:`.
    pub fn invert_monomial(&self) -> Result<QElem> {
        let (a, c) = self
            .as_monomial()
            .ok_or_else(|| Error::NotAUnit(self.to_string()))?;
        let (sign, k) = c.as_unit().ok_or_else(|| Error::NotAUnit(self.to_string()))?;
        let neg: Exponent = a.iter().map(|x| -x).collect();
        Ok(Self::monomial_unchecked(neg, QScalar::term(sign as i64, -k), &self.form))
    }

    /// Value under `w_i -> 1`, `v -> 1`.
    pub fn classicalize(&self) -> BigInt {
        self.terms.values().map(|c| c.at_one()).sum()
    }

    /// Re-express on a larger form, placing the generators at `offset`.
    pub fn embed(&self, form: &Arc<SkewForm>, offset: usize) -> Result<QElem> {
        if offset + self.form.rank() > form.rank() {
            return Err(Error::DimensionMismatch(format!(
                "cannot embed {} generators at offset {offset} into {}",
                self.form.rank(),
                form.rank()
            )));
        }
        let mut out = QElem::zero(form);
        for (a, c) in &self.terms {
            let mut b = vec![0; form.rank()];
            b[offset..offset + a.len()].copy_from_slice(a);
            out.terms.insert(b, c.clone());
        }
        Ok(out)
    }

    /// Add `e` to every exponent vector; coefficients are unchanged.
    pub fn shifted(&self, e: &[i64]) -> QElem {
        let mut out = QElem::zero(&self.form);
        for (a, c) in &self.terms {
            let b: Exponent = a.iter().zip(e).map(|(x, y)| x + y).collect();
            out.terms.insert(b, c.clone());
        }
        out
    }

    /// Coefficientwise bar involution; not an algebra map of the torus.
    pub fn bar_coefficients(&self) -> QElem {
        let mut out = QElem::zero(&self.form);
        for (a, c) in &self.terms {
            out.terms.insert(a.clone(), c.bar());
        }
        out
    }
}

impl fmt::Display for QElem {
    /// Canonical report rendering: `(<coefficient>) * w[a1,a2,...]` terms in
    /// lexicographic exponent order joined by ` + `; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (a, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c}) * w[")?;
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QElem({self})")
    }
}

/// # Panics
/// If the operands live on different forms.
impl Mul for &QElem {
    type Output = QElem;
    fn mul(self, rhs: &QElem) -> QElem {
        self.qmul(rhs).expect("quantum torus product across different forms")
    }
}

/// # Panics
/// If the operands live on different forms.
impl Add for &QElem {
    type Output = QElem;
    fn add(self, rhs: &QElem) -> QElem {
        assert!(same_form(&self.form, &rhs.form), "sum across different forms");
        let mut out = self.clone();
        out.add_assign_scaled(rhs, 1);
        out
    }
}

/// # Panics
/// If the operands live on different forms.
impl Sub for &QElem {
    type Output = QElem;
    fn sub(self, rhs: &QElem) -> QElem {
        assert!(same_form(&self.form, &rhs.form), "difference across different forms");
        let mut out = self.clone();
        out.add_assign_scaled(rhs, -1);
        out
    }
}

impl Neg for &QElem {
    type Output = QElem;
    fn neg(self) -> QElem {
        self.scale(&QScalar::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn form(rows: Vec<Vec<i64>>) -> Arc<SkewForm> {
        Arc::new(SkewForm::new(rows).unwrap())
    }

    #[test]
    fn scalar_basics() {
        let x = QScalar::q_minus_q_inv();
        assert_eq!(x.bar(), QScalar::q_pow(-1) - QScalar::q_pow(1));
        let y = QScalar::q_pow(1) + QScalar::q_pow(-1);
        assert_eq!(&x * &y, QScalar::q_pow(2) - QScalar::q_pow(-2));
        let z = QScalar::from_terms([(5, 3), (0, 1)]);
        assert_eq!(z.bar().bar(), z);
        assert_eq!(x.to_string(), "-1*v^-2 + 1*v^2");
        assert_eq!(QScalar::zero().to_string(), "0");
        assert!(QScalar::from_terms([(1, 2), (1, -2)]).is_zero());
    }

    #[test]
    fn weyl_products() {
        let f = form(vec![vec![0, 2], vec![-2, 0]]);
        let w1 = QElem::weyl(&[1, 0], &f).unwrap();
        let w2 = QElem::weyl(&[0, 1], &f).unwrap();
        let p = &w1 * &w2;
        assert_eq!(p, QElem::monomial(&[1, 1], QScalar::v_pow(-2), &f).unwrap());
        let diff = &p - &(&w2 * &w1).scale(&QScalar::q_pow(-2));
        assert!(diff.is_zero());
        assert_eq!(QElem::weyl(&[0, 0], &f).unwrap(), QElem::one(&f));
        assert!(QElem::weyl(&[1], &f).is_err());
        let a = QElem::weyl(&[3, -2], &f).unwrap();
        let b = QElem::weyl(&[-3, 2], &f).unwrap();
        assert_eq!(&a * &b, QElem::one(&f));
    }

    #[test]
    fn monomial_inverse() {
        let f = form(vec![vec![0, 1], vec![-1, 0]]);
        let x = QElem::monomial(&[1, 0], QScalar::v_pow(3), &f).unwrap();
        let y = x.invert_monomial().unwrap();
        assert_eq!(y, QElem::monomial(&[-1, 0], QScalar::v_pow(-3), &f).unwrap());
        let s = &QElem::generator(0, &f) + &QElem::generator(1, &f);
        assert!(matches!(s.invert_monomial(), Err(Error::NotAUnit(_))));
        let two = QElem::monomial(&[1, 0], QScalar::from_int(2), &f).unwrap();
        assert!(two.invert_monomial().is_err());
    }

    #[test]
    fn rendering() {
        let f = form(vec![vec![0, 0, 0], vec![0, 0, 0], vec![0, 0, 0]]);
        let x = QElem::monomial(&[1, 0, -1], QScalar::q_minus_q_inv(), &f).unwrap();
        assert_eq!(x.to_string(), "(-1*v^-2 + 1*v^2) * w[1,0,-1]");
        assert_eq!(QElem::zero(&f).to_string(), "0");
        let y = &x + &QElem::one(&f);
        assert_eq!(y.to_string(), "(1*v^0) * w[0,0,0] + (-1*v^-2 + 1*v^2) * w[1,0,-1]");
    }

    #[test]
    fn form_mismatch() {
        let f = form(vec![vec![0, 2], vec![-2, 0]]);
        let g = form(vec![vec![0, -2], vec![2, 0]]);
        let a = QElem::generator(0, &f);
        let b = QElem::generator(0, &g);
        assert_eq!(a.qmul(&b), Err(Error::FormMismatch));
        assert!(SkewForm::new(vec![vec![0, 1], vec![1, 0]]).is_err());
    }

    #[test]
    fn generator_commutation() {
        let f = form(vec![vec![0, 2, -1], vec![-2, 0, 1], vec![1, -1, 0]]);
        for i in 0..3 {
            for j in 0..3 {
                let wi = QElem::generator(i, &f);
                let wj = QElem::generator(j, &f);
                let lhs = &wi * &wj;
                let rhs = (&wj * &wi).scale(&QScalar::v_pow(-2 * f.entry(i, j)));
                assert!((&lhs - &rhs).is_zero(), "i={i} j={j}");
            }
        }
    }

    #[test]
    fn weyl_order_insensitive() {
        let f = form(vec![vec![0, 2, -1], vec![-2, 0, 1], vec![1, -1, 0]]);
        let gens = [0usize, 1, 1, 2, 0];
        let mut a = vec![0i64; 3];
        for &g in &gens {
            a[g] += 1;
        }
        let perms = [[0, 1, 2, 3, 4], [4, 3, 2, 1, 0], [1, 0, 3, 2, 4], [2, 4, 0, 1, 3]];
        for p in perms {
            let seq: Vec<usize> = p.iter().map(|&i| gens[i]).collect();
            let mut prod = QElem::one(&f);
            let mut shift = 0i64;
            let mut acc = vec![0i64; 3];
            for &g in &seq {
                prod = &prod * &QElem::generator(g, &f);
                let mut e = vec![0i64; 3];
                e[g] = 1;
                shift -= f.pairing(&acc, &e);
                acc[g] += 1;
            }
            let expected = QElem::monomial(&a, QScalar::v_pow(shift), &f).unwrap();
            assert_eq!(prod, expected);
        }
    }

    fn arb_form(n: usize) -> impl Strategy<Value = SkewForm> {
        proptest::collection::vec(-2i64..=2, n * (n - 1) / 2).prop_map(move |upper| {
            let mut rows = vec![vec![0i64; n]; n];
            let mut it = upper.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let x = it.next().unwrap();
                    rows[i][j] = x;
                    rows[j][i] = -x;
                }
            }
            SkewForm::new(rows).unwrap()
        })
    }

    fn arb_scalar() -> impl Strategy<Value = QScalar> {
        proptest::collection::vec((-3i64..=3, -3i64..=3), 0..3)
            .prop_map(|t| QScalar::from_terms(t))
    }

    fn arb_elem(n: usize) -> impl Strategy<Value = Vec<(Vec<i64>, QScalar)>> {
        proptest::collection::vec((proptest::collection::vec(-2i64..=2, n), arb_scalar()), 0..3)
    }

    fn build(terms: &[(Vec<i64>, QScalar)], f: &Arc<SkewForm>) -> QElem {
        let mut x = QElem::zero(f);
        for (a, c) in terms {
            x = &x + &QElem::monomial(a, c.clone(), f).unwrap();
        }
        x
    }

    fn arb_triple() -> impl Strategy<Value = (SkewForm, [Vec<(Vec<i64>, QScalar)>; 3])> {
        (1usize..=6).prop_flat_map(|n| (arb_form(n), [arb_elem(n), arb_elem(n), arb_elem(n)]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn associativity((form, [a, b, c]) in arb_triple()) {
            let f = Arc::new(form);
            let (x, y, z) = (build(&a, &f), build(&b, &f), build(&c, &f));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }

        #[test]
        fn identity_and_distributivity((form, [a, b, c]) in arb_triple()) {
            let f = Arc::new(form);
            let (x, y, z) = (build(&a, &f), build(&b, &f), build(&c, &f));
            prop_assert_eq!(&x * &QElem::one(&f), x.clone());
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        }

        #[test]
        fn bar_is_involutive_ring_map(x in arb_scalar(), y in arb_scalar()) {
            prop_assert_eq!(x.bar().bar(), x.clone());
            prop_assert_eq!((&x * &y).bar(), &x.bar() * &y.bar());
            prop_assert_eq!((&x + &y).bar(), &x.bar() + &y.bar());
            prop_assert_eq!(&x * &y, &y * &x);
        }

        #[test]
        fn monomial_inverse_two_sided(
            form in arb_form(4),
            a in proptest::collection::vec(-3i64..=3, 4),
            k in -5i64..=5,
            neg in any::<bool>(),
        ) {
            let f = Arc::new(form);
            let c = QScalar::term(if neg { -1 } else { 1 }, k);
            let x = QElem::monomial(&a, c, &f).unwrap();
            let y = x.invert_monomial().unwrap();
            prop_assert_eq!(&x * &y, QElem::one(&f));
            prop_assert_eq!(&y * &x, QElem::one(&f));
        }
    }
}

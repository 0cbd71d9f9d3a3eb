//! Level-k generators, loop generators and the reflection series built
//! from the blocks of a transport matrix.
//!
//! A [`TSeries`] stores the coefficient of `u^{-n}` at key `n`. Plus-type
//! series live at `n >= 0`, minus-type series at `n <= -1` (the level-k
//! minus generator sits at `n = -k`).

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ncmat::QMatrix;
use crate::network::BlockTransport;
use crate::qalg::SkewForm;

/// What a series knows about one index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LevelState {
    /// Outside the declared support: the level is zero.
    Zero,
    /// Computed.
    Present,
    /// Inside the support but beyond what was computed.
    Truncated,
}

/// A finitely truncated family of equally shaped quantum matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    rows: usize,
    cols: usize,
    form: Arc<SkewForm>,
    support: (Option<i64>, Option<i64>),
    truncation: i64,
    levels: BTreeMap<i64, QMatrix>,
}

impl TSeries {
    /// Empty series with support `[lo, hi]` (either end may be open).
    /// `truncation` is the largest `|n|` that is meant to be computed.
    pub fn new(
        rows: usize,
        cols: usize,
        form: &Arc<SkewForm>,
        support: (Option<i64>, Option<i64>),
        truncation: i64,
    ) -> Self {
        Self { rows, cols, form: form.clone(), support, truncation, levels: BTreeMap::new() }
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

    pub fn support(&self) -> (Option<i64>, Option<i64>) {
        self.support
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn levels(&self) -> impl Iterator<Item = (i64, &QMatrix)> {
        self.levels.iter().map(|(k, v)| (*k, v))
    }

    fn in_support(&self, n: i64) -> bool {
        self.support.0.map_or(true, |lo| n >= lo) && self.support.1.map_or(true, |hi| n <= hi)
    }

    /// Store level `n`, replacing any previous value.
    pub fn set(&mut self, n: i64, m: QMatrix) -> Result<()> {
        if m.rows() != self.rows || m.cols() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "level {n} is {}x{}, series is {}x{}",
                m.rows(),
                m.cols(),
                self.rows,
                self.cols
            )));
        }
        if **m.form() != *self.form {
            return Err(Error::FormMismatch);
        }
        if !self.in_support(n) {
            return Err(Error::InvalidParameter(format!("level {n} is outside the support")));
        }
        self.levels.insert(n, m);
        Ok(())
    }

    pub fn state(&self, n: i64) -> LevelState {
        if !self.in_support(n) {
            LevelState::Zero
        } else if self.levels.contains_key(&n) {
            LevelState::Present
        } else {
            LevelState::Truncated
        }
    }

    /// Level `n`; zero outside the support, an error past the truncation.
    pub fn get(&self, n: i64) -> Result<QMatrix> {
        match self.state(n) {
            LevelState::Zero => Ok(QMatrix::zeros(self.rows, self.cols, &self.form)),
            LevelState::Present => Ok(self.levels[&n].clone()),
            LevelState::Truncated => Err(Error::Truncation { level: n, truncation: self.truncation }),
        }
    }
}

/// `T_0 = M21`, `T_1 = M22 M11`, `T_{k+1} = M22 M12^k M11` for levels `0..=K`.
pub fn levels_t(b: &BlockTransport, k_max: usize) -> Result<TSeries> {
    let mut s = TSeries::new(b.n2, b.n1, b.form(), (Some(0), None), k_max as i64);
    s.set(0, b.m21.clone())?;
    let mut left = b.m22.clone();
    for k in 1..=k_max {
        s.set(k as i64, left.matmul(&b.m11)?)?;
        left = left.matmul(&b.m12)?;
    }
    Ok(s)
}

/// `M22 M12^{-k} M11` for `k = 1..=count`, computed with one verified inverse.
fn negative_chain(b: &BlockTransport, count: usize) -> Result<Vec<QMatrix>> {
    let inv = b.m12.invert_restricted()?;
    let mut left = b.m22.clone();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        left = left.matmul(&inv)?;
        out.push(left.matmul(&b.m11)?);
    }
    Ok(out)
}

/// Residual `M22 M12^{-1} M11 - M21` of the groupoid condition.
pub fn groupoid_defect(b: &BlockTransport) -> Result<QMatrix> {
    let x = negative_chain(b, 1)?.remove(0);
    x.sub(&b.m21)
}

/// Plus and minus loop generators up to level `K`.
///
/// Default mode: `T+_0 = M21`, `T+_k = M22 M12^{k-1} M11`,
/// `T-_k = M22 M12^{-k} M11 - [k = 1] M21`.
///
/// Groupoid mode requires `M21 = M22 M12^{-1} M11` and shifts the minus
/// side: `T+_k = M22 M12^{k-1} M11` for `k >= 0`, `T-_k = M22 M12^{-k-1} M11`.
pub fn loop_generators(
    b: &BlockTransport,
    k_max: usize,
    groupoid_mode: bool,
) -> Result<(TSeries, TSeries)> {
    let form = b.form();
    let trunc = k_max as i64;
    let mut plus = TSeries::new(b.n2, b.n1, form, (Some(0), None), trunc);
    let mut minus = TSeries::new(b.n2, b.n1, form, (None, Some(-1)), trunc);
    let neg = negative_chain(b, k_max + 1)?;

    if groupoid_mode {
        if !neg[0].sub(&b.m21)?.is_zero() {
            return Err(Error::GroupoidViolated);
        }
        plus.set(0, neg[0].clone())?;
        for k in 1..=k_max {
            minus.set(-(k as i64), neg[k].clone())?;
        }
    } else {
        plus.set(0, b.m21.clone())?;
        for k in 1..=k_max {
            let mut t = neg[k - 1].clone();
            if k == 1 {
                t = t.sub(&b.m21)?;
            }
            minus.set(-(k as i64), t)?;
        }
    }
    let mut left = b.m22.clone();
    for k in 1..=k_max {
        plus.set(k as i64, left.matmul(&b.m11)?)?;
        left = left.matmul(&b.m12)?;
    }
    Ok((plus, minus))
}

/// `A^{(k)} = sum_{j=1}^{k+1} [T-_j]^T T+_{k+1-j}` for `k = 0..=K`.
///
/// `A^{(k)}` is the coefficient of `u^{-(k+1)}` in `[T-(1/u)]^T T+(u)`, so
/// that `A^{(0)} = [T-_1]^T T+_0`. Needs minus levels up to `K + 1`.
pub fn reflection_series(plus: &TSeries, minus: &TSeries, k_max: usize) -> Result<TSeries> {
    if plus.rows != minus.rows || plus.cols != minus.cols {
        return Err(Error::DimensionMismatch("plus and minus series differ in shape".into()));
    }
    if *plus.form != *minus.form {
        return Err(Error::FormMismatch);
    }
    let n = plus.cols;
    let mut out = TSeries::new(n, n, &plus.form, (Some(0), None), k_max as i64);
    for k in 0..=k_max as i64 {
        let mut acc = QMatrix::zeros(n, n, &plus.form);
        for j in 1..=k + 1 {
            let term = minus.get(-j)?.transpose_q().matmul(&plus.get(k + 1 - j)?)?;
            acc = acc.add(&term)?;
        }
        out.set(k, acc)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::{QElem, QScalar};

    fn form2() -> Arc<SkewForm> {
        Arc::new(SkewForm::new(vec![vec![0, 2], vec![-2, 0]]).unwrap())
    }

    fn one_by_one(e: QElem) -> QMatrix {
        let f = e.form().clone();
        QMatrix::from_fn(1, 1, &f, |_, _| e.clone())
    }

    fn scalar_blocks() -> BlockTransport {
        let f = form2();
        let w = |a: &[i64]| QElem::weyl(a, &f).unwrap();
        BlockTransport::from_blocks(
            one_by_one(w(&[0, 1])),
            one_by_one(w(&[1, 0])),
            one_by_one(w(&[0, 0])),
            one_by_one(w(&[0, -1])),
        )
        .unwrap()
    }

    #[test]
    fn levels_follow_the_product_rule() {
        let b = scalar_blocks();
        let t = levels_t(&b, 3).unwrap();
        assert_eq!(t.get(0).unwrap(), b.m21);
        assert_eq!(t.get(1).unwrap(), b.m22.matmul(&b.m11).unwrap());
        let t2 = b.m22.matmul(&b.m12).unwrap().matmul(&b.m11).unwrap();
        assert_eq!(t.get(2).unwrap(), t2);
        assert!(t.get(-1).unwrap().is_zero());
        assert_eq!(t.get(4), Err(Error::Truncation { level: 4, truncation: 3 }));
    }

    #[test]
    fn zero_middle_block_kills_higher_levels() {
        let mut b = scalar_blocks();
        b.m12 = QMatrix::zeros(1, 1, b.form());
        let t = levels_t(&b, 4).unwrap();
        for k in 2..=4 {
            assert!(t.get(k).unwrap().is_zero());
        }
    }

    #[test]
    fn minus_generators_by_hand() {
        // M22 M12^{-k} M11 = :w2^-1: :w1^-k: :w2:, a single monomial.
        let b = scalar_blocks();
        let f = b.form().clone();
        let (plus, minus) = loop_generators(&b, 3, false).unwrap();
        assert_eq!(plus.get(0).unwrap(), b.m21);
        for k in 1..=3i64 {
            let e1 = [0, -1];
            let e2 = [-k, 0];
            let e3 = [0, 1];
            let p12 = -f.pairing(&e1, &e2);
            let e12 = [-k, -1];
            let p = p12 - f.pairing(&e12, &e3);
            let mut want = QElem::monomial(&[-k, 0], QScalar::v_pow(p), &f).unwrap();
            if k == 1 {
                want = &want - &QElem::one(&f);
            }
            assert_eq!(minus.get(-k).unwrap(), one_by_one(want), "level {k}");
        }
        assert!(minus.get(0).unwrap().is_zero());
        assert!(minus.get(-4).is_err());
    }

    #[test]
    fn plus_generators_extend_levels() {
        let b = scalar_blocks();
        let t = levels_t(&b, 4).unwrap();
        let (plus, _) = loop_generators(&b, 4, false).unwrap();
        for k in 0..=4 {
            assert_eq!(t.get(k).unwrap(), plus.get(k).unwrap());
        }
    }

    #[test]
    fn groupoid_mode_needs_the_condition() {
        let b = scalar_blocks();
        assert_eq!(loop_generators(&b, 2, true).unwrap_err(), Error::GroupoidViolated);

        let mut g = b.clone();
        g.m21 = groupoid_defect(&b).unwrap().add(&b.m21).unwrap();
        assert!(groupoid_defect(&g).unwrap().is_zero());
        let (_, default_minus) = loop_generators(&g, 2, false).unwrap();
        assert!(default_minus.get(-1).unwrap().is_zero());
        let (plus, minus) = loop_generators(&g, 2, true).unwrap();
        assert_eq!(plus.get(0).unwrap(), g.m21);
        assert_eq!(minus.get(-1).unwrap(), default_minus.get(-2).unwrap());
    }

    #[test]
    fn reflection_levels() {
        let b = scalar_blocks();
        let (plus, minus) = loop_generators(&b, 3, false).unwrap();
        let a = reflection_series(&plus, &minus, 2).unwrap();
        let tm = |j: i64| minus.get(-j).unwrap().transpose_q();
        let tp = |i: i64| plus.get(i).unwrap();
        assert_eq!(a.get(0).unwrap(), tm(1).matmul(&tp(0)).unwrap());
        let a1 = tm(1).matmul(&tp(1)).unwrap().add(&tm(2).matmul(&tp(0)).unwrap()).unwrap();
        assert_eq!(a.get(1).unwrap(), a1);
        assert!(reflection_series(&plus, &minus, 3).is_err());
    }

    #[test]
    fn single_surviving_minus_term() {
        let b = scalar_blocks();
        let (plus, minus) = loop_generators(&b, 3, false).unwrap();
        let mut only_first = TSeries::new(1, 1, b.form(), (None, Some(-1)), 3);
        only_first.set(-1, minus.get(-1).unwrap()).unwrap();
        for j in 2..=3 {
            only_first.set(-j, QMatrix::zeros(1, 1, b.form())).unwrap();
        }
        let a = reflection_series(&plus, &only_first, 2).unwrap();
        for k in 0..=2 {
            let want = minus.get(-1).unwrap().transpose_q().matmul(&plus.get(k).unwrap()).unwrap();
            assert_eq!(a.get(k).unwrap(), want);
        }
    }
}

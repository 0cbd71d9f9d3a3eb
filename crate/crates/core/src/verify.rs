//! Exact relation checkers.
//!
//! Every checker builds one or more residual matrices and reports each
//! nonzero entry. A report passes iff no residual entry survives; there is
//! no tolerance anywhere.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::affine::{groupoid_defect, loop_generators, LevelState, TSeries};
use crate::error::{Error, Result};
use crate::ncmat::{QMatrix, SheetOrder, Side};
use crate::network::BlockTransport;
use crate::qalg::QScalar;
use crate::rmat::{self, build_p, build_p_rect, build_r, build_r_inv_t, CMatrix};

/// One nonzero residual entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Residual {
    /// Relation label and composite `[row,col]` index.
    pub index: String,
    /// Canonical rendering of the entry.
    pub value: String,
}

/// Outcome of one checker run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub parameters: BTreeMap<String, Value>,
    pub passed: bool,
    pub residuals: Vec<Residual>,
    pub timing_ms: f64,
}

impl CheckReport {
    /// Same report with the timing zeroed, for byte-stable output.
    pub fn without_timing(mut self) -> Self {
        self.timing_ms = 0.0;
        self
    }
}

/// Collects residuals while a check runs.
struct Recorder {
    name: String,
    parameters: BTreeMap<String, Value>,
    residuals: Vec<Residual>,
    start: Instant,
}

impl Recorder {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            parameters: BTreeMap::new(),
            residuals: Vec::new(),
            start: Instant::now(),
        }
    }

    fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    fn record(&mut self, label: &str, m: &QMatrix) {
        for ((i, j), e) in m.nonzero_entries() {
            self.residuals.push(Residual { index: format!("{label}[{i},{j}]"), value: e.to_string() });
        }
    }

    /// A failure that is not tied to a matrix entry.
    fn flag(&mut self, label: &str, what: &str) {
        self.residuals.push(Residual { index: label.to_string(), value: what.to_string() });
    }

    fn finish(self) -> CheckReport {
        let elapsed = self.start.elapsed().as_secs_f64() * 1000.0;
        CheckReport {
            name: self.name,
            parameters: self.parameters,
            passed: self.residuals.is_empty(),
            residuals: self.residuals,
            timing_ms: (elapsed * 1000.0).round() / 1000.0,
        }
    }
}

// Small algebra helpers. `s12(a, b)` is (1)A (2)B; `s21(a, b)` is (2)B (1)A.

fn s12(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    QMatrix::sheet_product(a, b, SheetOrder::O12)
}

fn s21(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    QMatrix::sheet_product(a, b, SheetOrder::O21)
}

fn left(c: &CMatrix, m: &QMatrix) -> Result<QMatrix> {
    QMatrix::classical_act(c, m, Side::Left)
}

fn right(m: &QMatrix, c: &CMatrix) -> Result<QMatrix> {
    QMatrix::classical_act(c, m, Side::Right)
}

fn qq() -> QScalar {
    QScalar::q_minus_q_inv()
}

/// `C (1)M (2)M - (2)M (1)M C'` with `C` sized by rows and `C'` by columns.
fn rtt_residual(m: &QMatrix, lhs: &CMatrix, rhs: &CMatrix) -> Result<QMatrix> {
    left(lhs, &s12(m, m)?)?.sub(&right(&s21(m, m)?, rhs)?)
}

fn r_pair(n_out: usize, n_in: usize) -> (CMatrix, CMatrix) {
    (build_r(n_out, false), build_r(n_in, false))
}

fn r_inv_t_pair(n_out: usize, n_in: usize) -> (CMatrix, CMatrix) {
    (build_r_inv_t(n_out), build_r_inv_t(n_in))
}

/// The classical identities of `R_k`: Yang-Baxter, both product forms
/// with the transpose, the flip identity, `R(q) R(1/q) = I`, the
/// spectral scalar identity and the partial-transpose commutation.
pub fn check_rmatrix(k: usize) -> CheckReport {
    let mut rec = Recorder::new("rmatrix");
    rec.param("k", k);
    rmatrix_core(&mut rec, &build_r(k, false), &build_r(k, true), k);
    if !rmat::check_scalar_identity(k) {
        rec.flag("spectral_scalar", "identity fails");
    }
    if !rmat::check_t1_commutation(k) {
        rec.flag("t1_commutation", "identity fails");
    }
    rec.finish()
}

/// The first four identities of [`check_rmatrix`] for a supplied pair
/// `(R, R^-1)` of `k^2 x k^2` matrices.
pub fn check_rmatrix_with(r: &CMatrix, rinv: &CMatrix, k: usize) -> Result<CheckReport> {
    for m in [r, rinv] {
        if m.rows() != k * k || m.cols() != k * k {
            return Err(Error::DimensionMismatch(format!("expected {0}x{0}", k * k)));
        }
    }
    let mut rec = Recorder::new("rmatrix");
    rec.param("k", k);
    rmatrix_core(&mut rec, r, rinv, k);
    Ok(rec.finish())
}

fn rmatrix_core(rec: &mut Recorder, r: &CMatrix, rinv: &CMatrix, k: usize) {
    if !rmat::yang_baxter_holds(r, k) {
        rec.flag("yang_baxter", "identity fails");
    }
    if !rmat::rrp_holds(r, rinv, k) {
        rec.flag("rr_transpose", "identity fails");
    }
    if !rmat::pr_holds(r, k) {
        rec.flag("flip", "identity fails");
    }
    if !rmat::inverse_holds(r, rinv) {
        rec.flag("inverse", "identity fails");
    }
}

/// `R_{n_out} (1)M (2)M - (2)M (1)M R_{n_in}`.
pub fn check_rtt(m: &QMatrix, n_out: usize, n_in: usize) -> Result<CheckReport> {
    if m.rows() != n_out || m.cols() != n_in {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, expected {n_out}x{n_in}",
            m.rows(),
            m.cols()
        )));
    }
    let mut rec = Recorder::new("rtt");
    rec.param("rows", n_out);
    rec.param("cols", n_in);
    let (a, b) = r_pair(n_out, n_in);
    rec.record("rtt", &rtt_residual(m, &a, &b)?);
    Ok(rec.finish())
}

/// The ten quadratic relations among the four blocks.
pub fn check_block_algebra(b: &BlockTransport) -> Result<CheckReport> {
    let mut rec = Recorder::new("blocks");
    rec.param("split", vec![b.n1, b.m, b.n2]);
    let (m11, m12, m21, m22) = (&b.m11, &b.m12, &b.m21, &b.m22);
    let (rm, rn1, rn2) = (build_r(b.m, false), build_r(b.n1, false), build_r(b.n2, false));

    for (name, x) in [("M11", m11), ("M12", m12), ("M21", m21), ("M22", m22)] {
        let (a, c) = r_pair(x.rows(), x.cols());
        rec.record(&format!("{name}.R"), &rtt_residual(x, &a, &c)?);
        let (a, c) = r_inv_t_pair(x.rows(), x.cols());
        rec.record(&format!("{name}.RinvT"), &rtt_residual(x, &a, &c)?);
    }

    // (2)M11 (1)M12 = R (1)M12 (2)M11
    rec.record("M11M12", &s21(m12, m11)?.sub(&left(&rm, &s12(m12, m11)?)?)?);
    // (1)M12 (2)M22 = (2)M22 (1)M12 R
    rec.record("M12M22", &s12(m12, m22)?.sub(&right(&s21(m12, m22)?, &rm)?)?);
    // (1)M11 (2)M21 = (2)M21 (1)M11 R
    rec.record("M11M21", &s12(m11, m21)?.sub(&right(&s21(m11, m21)?, &rn1)?)?);
    // (2)M21 (1)M22 = R (1)M22 (2)M21
    rec.record("M22M21", &s21(m22, m21)?.sub(&left(&rn2, &s12(m22, m21)?)?)?);
    // (1)M12 (2)M21 = (2)M21 (1)M12
    rec.record("M12M21", &s12(m12, m21)?.sub(&s21(m12, m21)?)?);
    // (1)M11 (2)M22 - (2)M22 (1)M11 = (q - 1/q) (2)M21 (1)M12 P
    let comm = s12(m11, m22)?.sub(&s21(m11, m22)?)?;
    let corr = right(&s21(m12, m21)?, &build_p_rect(b.m, b.n1))?.scale(&qq());
    rec.record("M11M22", &comm.sub(&corr)?);
    Ok(rec.finish())
}

fn same_shape(x: &TSeries, y: &TSeries) -> Result<()> {
    if x.rows() != y.rows() || x.cols() != y.cols() {
        return Err(Error::DimensionMismatch("series shapes differ".into()));
    }
    if **x.form() != **y.form() {
        return Err(Error::FormMismatch);
    }
    Ok(())
}

/// Residual of the summed level relation for `k >= p >= 0`:
/// `R (1)T_k (2)T_p + (q-1/q) P sum_m (1)T_{k+m} (2)T_{p-m}`
/// `- (2)T_p (1)T_k R - sum_m (2)T_{p-m} (1)T_{k+m} (q-1/q) P`.
pub fn affine_summed_residual(t: &TSeries, k: i64, p: i64) -> Result<QMatrix> {
    if p < 0 || k < p {
        return Err(Error::InvalidParameter(format!("need k >= p >= 0, got k={k}, p={p}")));
    }
    let (no, ni) = (t.rows(), t.cols());
    let (tk, tp) = (t.get(k)?, t.get(p)?);
    let mut res = left(&build_r(no, false), &s12(&tk, &tp)?)?.sub(&right(&s21(&tk, &tp)?, &build_r(ni, false))?)?;
    let mut lsum = QMatrix::zeros(no * no, ni * ni, t.form());
    let mut rsum = lsum.clone();
    for m in 1..=p {
        let (a, b) = (t.get(k + m)?, t.get(p - m)?);
        lsum = lsum.add(&s12(&a, &b)?)?;
        rsum = rsum.add(&s21(&a, &b)?)?;
    }
    res = res.add(&left(&build_p(no), &lsum)?.scale(&qq()))?;
    res.sub(&right(&rsum, &build_p(ni))?.scale(&qq()))
}

pub fn check_affine_summed(t: &TSeries, k: i64, p: i64) -> Result<CheckReport> {
    let mut rec = Recorder::new("affine_summed");
    rec.param("k", k);
    rec.param("p", p);
    rec.record("summed", &affine_summed_residual(t, k, p)?);
    Ok(rec.finish())
}

/// Coefficient of one bidegree in `R(l,m) (1)X(l) (2)Y(m) - (2)Y(m) (1)X(l) R(l,m)`
/// with `R(l,m) = l R^{-T} - m R`:
/// `R^{-T} X_{a+1} Y_b - R X_a Y_{b+1} - (Y_b X_{a+1} R^{-T} - Y_{b+1} X_a R)`.
pub fn spectral_residual(x: &TSeries, y: &TSeries, a: i64, b: i64) -> Result<QMatrix> {
    same_shape(x, y)?;
    let (no, ni) = (x.rows(), x.cols());
    let (xa1, xa, yb, yb1) = (x.get(a + 1)?, x.get(a)?, y.get(b)?, y.get(b + 1)?);
    let (rt_o, rt_i) = r_inv_t_pair(no, ni);
    let (r_o, r_i) = r_pair(no, ni);
    let lhs = left(&rt_o, &s12(&xa1, &yb)?)?.sub(&left(&r_o, &s12(&xa, &yb1)?)?)?;
    let rhs = right(&s21(&xa1, &yb)?, &rt_i)?.sub(&right(&s21(&xa, &yb1)?, &r_i)?)?;
    lhs.sub(&rhs)
}

pub fn check_spectral_componentwise(x: &TSeries, y: &TSeries, a: i64, b: i64) -> Result<CheckReport> {
    let mut rec = Recorder::new("spectral");
    rec.param("a", a);
    rec.param("b", b);
    rec.record("componentwise", &spectral_residual(x, y, a, b)?);
    Ok(rec.finish())
}

/// Summed residual rebuilt from componentwise ones for a plus series:
/// `S(k, p) = S(k + p, 0) - sum_{j=1}^{p} C(k + j - 1, p - j)`.
pub fn telescoped_summed_residual(t: &TSeries, k: i64, p: i64) -> Result<QMatrix> {
    let mut acc = affine_summed_residual(t, k + p, 0)?;
    for j in 1..=p {
        acc = acc.sub(&spectral_residual(t, t, k + j - 1, p - j)?)?;
    }
    Ok(acc)
}

/// Summed and componentwise forms agree on `0 <= p <= k <= k_max`, and
/// each form vanishes on that range exactly when the other does.
pub fn check_telescoping(t: &TSeries, k_max: i64) -> Result<CheckReport> {
    let mut rec = Recorder::new("telescoping");
    rec.param("kmax", k_max);
    let mut summed_zero = true;
    for k in 0..=k_max {
        for p in 0..=k {
            let direct = affine_summed_residual(t, k, p)?;
            let rebuilt = telescoped_summed_residual(t, k, p)?;
            rec.record(&format!("S({k},{p})"), &direct.sub(&rebuilt)?);
            summed_zero &= direct.is_zero();
        }
    }
    let mut comp_zero = true;
    for a in -1..2 * k_max {
        for b in -1..2 * k_max - a {
            match spectral_residual(t, t, a, b) {
                Ok(c) => comp_zero &= c.is_zero(),
                Err(Error::Truncation { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if summed_zero != comp_zero {
        rec.flag("equivalence", "summed and componentwise forms disagree");
    }
    rec.param("summed_zero", summed_zero);
    rec.param("componentwise_zero", comp_zero);
    Ok(rec.finish())
}

/// Range of indices worth trying for a series.
fn candidate_range(s: &TSeries) -> std::ops::RangeInclusive<i64> {
    let t = s.truncation();
    (-t - 2)..=(t + 1)
}

fn vacuous(s: &TSeries, n: i64) -> bool {
    s.state(n) == LevelState::Zero && s.state(n + 1) == LevelState::Zero
}

/// Every componentwise relation between `x` and `y` whose levels are
/// available. Returns the number of bidegrees checked.
fn sweep_pair(
    rec: &mut Recorder,
    label: &str,
    x: &TSeries,
    y: &TSeries,
    residual: impl Fn(&TSeries, &TSeries, i64, i64) -> Result<QMatrix>,
) -> Result<usize> {
    let mut checked = 0;
    for a in candidate_range(x) {
        if vacuous(x, a) {
            continue;
        }
        for b in candidate_range(y) {
            if vacuous(y, b) {
                continue;
            }
            match residual(x, y, a, b) {
                Ok(r) => {
                    rec.record(&format!("{label}({a},{b})"), &r);
                    checked += 1;
                }
                Err(Error::Truncation { .. }) => {}
                Err(e) => return Err(e),
            }
        }
    }
    Ok(checked)
}

/// The four loop relations `++`, `+-`, `--`, `-+` at every bidegree whose
/// levels lie within the truncation.
pub fn check_loop(plus: &TSeries, minus: &TSeries) -> Result<CheckReport> {
    same_shape(plus, minus)?;
    let mut rec = Recorder::new("loop");
    for (label, x, y) in [("++", plus, plus), ("+-", plus, minus), ("--", minus, minus), ("-+", minus, plus)] {
        let n = sweep_pair(&mut rec, label, x, y, spectral_residual)?;
        rec.param(&format!("checked{label}"), n);
    }
    Ok(rec.finish())
}

/// Same relations for the transposed series `[X(1/u)]^T`: the coefficient
/// of `u^{a+1} v^{b+1}` in
/// `R(u,v) [(1)X(1/u)]^T [(2)Y(1/v)]^T - [(2)Y(1/v)]^T [(1)X(1/u)]^T R(u,v)`.
pub fn transposed_spectral_residual(x: &TSeries, y: &TSeries, a: i64, b: i64) -> Result<QMatrix> {
    same_shape(x, y)?;
    let (no, ni) = (x.cols(), x.rows());
    let t = |s: &TSeries, n: i64| s.get(n).map(|m| m.transpose_q());
    let (xa, xa1, yb, yb1) = (t(x, a)?, t(x, a + 1)?, t(y, b)?, t(y, b + 1)?);
    let (rt_o, rt_i) = r_inv_t_pair(no, ni);
    let (r_o, r_i) = r_pair(no, ni);
    let lhs = left(&rt_o, &s12(&xa, &yb1)?)?.sub(&left(&r_o, &s12(&xa1, &yb)?)?)?;
    let rhs = right(&s21(&xa, &yb1)?, &rt_i)?.sub(&right(&s21(&xa1, &yb)?, &r_i)?)?;
    lhs.sub(&rhs)
}

/// Transposed relations for the same-sign pairs `++` and `--`.
pub fn check_transposed_loop(plus: &TSeries, minus: &TSeries) -> Result<CheckReport> {
    same_shape(plus, minus)?;
    let mut rec = Recorder::new("transposed_loop");
    for (label, x) in [("++", plus), ("--", minus)] {
        let n = sweep_pair(&mut rec, label, x, x, transposed_spectral_residual)?;
        rec.param(&format!("checked{label}"), n);
    }
    Ok(rec.finish())
}

/// The five relations among `T0` (plus level 0) and `T1m` (minus level 1).
pub fn check_subalgebra(t0: &QMatrix, t1m: &QMatrix) -> Result<CheckReport> {
    if t0.rows() != t1m.rows() || t0.cols() != t1m.cols() {
        return Err(Error::DimensionMismatch("T0 and T1 differ in shape".into()));
    }
    let mut rec = Recorder::new("subalgebra");
    let (no, ni) = (t0.rows(), t0.cols());
    let (r_o, r_i) = r_pair(no, ni);
    let (rt_o, rt_i) = r_inv_t_pair(no, ni);
    rec.record("T0T0.R", &rtt_residual(t0, &r_o, &r_i)?);
    rec.record("T0T0.RinvT", &rtt_residual(t0, &rt_o, &rt_i)?);
    let mixed = left(&r_o, &s12(t1m, t0)?)?.sub(&right(&s21(t1m, t0)?, &r_i)?)?;
    rec.record("T1T0.R", &mixed);
    rec.record("T1T1.R", &rtt_residual(t1m, &r_o, &r_i)?);
    rec.record("T1T1.RinvT", &rtt_residual(t1m, &rt_o, &rt_i)?);
    Ok(rec.finish())
}

/// `M22 M12^{-1} M11 - M21`.
pub fn check_groupoid(b: &BlockTransport) -> Result<CheckReport> {
    let mut rec = Recorder::new("groupoid");
    rec.param("split", vec![b.n1, b.m, b.n2]);
    rec.record("groupoid", &groupoid_defect(b)?);
    Ok(rec.finish())
}

fn as_q(c: &CMatrix, like: &QMatrix) -> QMatrix {
    QMatrix::from_cmatrix(c, like.form())
}

/// `outer (1)A mid (2)A - (2)A mid (1)A outer` for a square `A`.
pub fn reflection_residual(a: &QMatrix, outer: &CMatrix, mid: &CMatrix) -> Result<QMatrix> {
    let n = a.rows();
    let (a1, a2) = (a.lift1(n), a.lift2(n));
    let lhs = left(outer, &a1)?.matmul(&as_q(mid, a))?.matmul(&a2)?;
    let rhs = right(&a2.matmul(&as_q(mid, a))?.matmul(&a1)?, outer)?;
    lhs.sub(&rhs)
}

fn reflection_pair(a: &QMatrix, rec: &mut Recorder) -> Result<()> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::DimensionMismatch("reflection matrix must be square".into()));
    }
    let r = build_r(n, false);
    let rt1 = r.partial_transpose_t1()?;
    rec.record("R", &reflection_residual(a, &r, &rt1)?);
    rec.record("RinvT", &reflection_residual(a, &build_r_inv_t(n), &rt1)?);
    Ok(())
}

/// `R (1)A R^{t1} (2)A - (2)A R^{t1} (1)A R`, plus the same with `R^{-T}`
/// as the outer factor.
pub fn check_reflection_a0(a0: &QMatrix) -> Result<CheckReport> {
    let mut rec = Recorder::new("reflection");
    rec.param("n", a0.rows());
    reflection_pair(a0, &mut rec)?;
    Ok(rec.finish())
}

/// Coefficient of `u^{-alpha-1} v^{-beta-1}` in
/// `R(u,v) (1)A(u) R^{t1}(1/u,v) (2)A(v) - (2)A(v) R^{t1}(1/u,v) (1)A(u) R(u,v)`
/// where `A(u) = sum_k A^{(k)} u^{-(k+1)}`, `R(u,v) = u R^{-T} - v R` and
/// `R^{t1}(1/u,v) = u^{-1} (R^{-T})^{t1} - v R^{t1}`.
pub fn affine_reflection_residual(a: &TSeries, alpha: i64, beta: i64) -> Result<QMatrix> {
    let n = a.rows();
    let (rt, r) = rmat::affine_r_pair(n);
    let s1 = rt.partial_transpose_t1()?;
    let rt1 = r.partial_transpose_t1()?;
    // (u, v) exponents and coefficient of each factor, then the sign.
    let combos: [((i64, i64), &CMatrix, (i64, i64), &CMatrix, i8); 4] = [
        ((1, 0), &rt, (-1, 0), &s1, 1),
        ((1, 0), &rt, (0, 1), &rt1, -1),
        ((0, 1), &r, (-1, 0), &s1, -1),
        ((0, 1), &r, (0, 1), &rt1, 1),
    ];
    let mut total = QMatrix::zeros(n * n, n * n, a.form());
    for ((e1, f1), c1, (e2, f2), c2, sign) in combos {
        let (ia, ib) = (e1 + e2 + alpha, f1 + f2 + beta);
        if ia < 0 || ib < 0 {
            continue;
        }
        let (aa, ab) = (a.get(ia)?, a.get(ib)?);
        let (a1, a2) = (aa.lift1(n), ab.lift2(n));
        let lhs = left(c1, &a1)?.matmul(&as_q(c2, &aa))?.matmul(&a2)?;
        let rhs = right(&a2.matmul(&as_q(c2, &aa))?.matmul(&a1)?, c1)?;
        let d = lhs.sub(&rhs)?;
        total = if sign > 0 { total.add(&d)? } else { total.sub(&d)? };
    }
    Ok(total)
}

/// Affine reflection equation at every bidegree that only uses levels
/// `0..=K` of the series.
pub fn check_reflection_affine(a: &TSeries, k_max: i64) -> Result<CheckReport> {
    if a.truncation() < k_max {
        return Err(Error::Truncation { level: k_max, truncation: a.truncation() });
    }
    let mut rec = Recorder::new("reflection_affine");
    rec.param("kmax", k_max);
    let mut checked = 0usize;
    for alpha in -1..k_max {
        for beta in -2..=k_max - 2 {
            let r = affine_reflection_residual(a, alpha, beta)?;
            rec.record(&format!("u^{} v^{}", -alpha - 1, -beta - 1), &r);
            checked += 1;
        }
    }
    rec.param("bidegrees", checked);
    Ok(rec.finish())
}

/// `A = [M1^T] M2` for `M` stacked as `(M1; M2)`.
pub fn disc_reflection_matrix(m: &QMatrix) -> Result<QMatrix> {
    if m.rows() % 2 != 0 {
        return Err(Error::DimensionMismatch(format!("{} rows cannot be halved", m.rows())));
    }
    let h = m.rows() / 2;
    let m1 = m.submatrix(0, h, 0, m.cols())?;
    let m2 = m.submatrix(h, h, 0, m.cols())?;
    m1.transpose_q().matmul(&m2)
}

/// Reflection equation for `A = [M1^T] M2`; also reports whether `A` is
/// upper-triangular.
pub fn check_disc_reflection(m: &QMatrix, n1: usize, n2: usize) -> Result<CheckReport> {
    if m.rows() != 2 * n2 || m.cols() != n1 {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, expected {}x{n1}",
            m.rows(),
            m.cols(),
            2 * n2
        )));
    }
    let a = disc_reflection_matrix(m)?;
    let mut rec = Recorder::new("disc_reflection");
    rec.param("n1", n1);
    rec.param("n2", n2);
    let r = build_r(n1, false);
    rec.record("RARA", &reflection_residual(&a, &r, &r.partial_transpose_t1()?)?);
    rec.param("upper_triangular", a.is_upper_triangular());
    Ok(rec.finish())
}

/// The closed relation for the level-2 minus generator, with
/// `T_k = M22 M12^{-k} M11` and `D = T_1 - M21`:
/// `R^{-T} (1)T2 (2)T2 - (2)T2 (1)T2 R^{-T} - (q-1/q) P (1)T3 (2)D + (q-1/q) (2)D (1)T3 P`.
/// With `groupoid` set, `D = 0` is asserted and the homogeneous relation
/// for `M22 M12^{-2} M11` is checked as well.
pub fn check_appendix(b: &BlockTransport, groupoid: bool) -> Result<CheckReport> {
    let mut rec = Recorder::new("appendix");
    rec.param("groupoid", groupoid);
    let (_, minus) = loop_generators(b, 3, false)?;
    let (d, t2, t3) = (minus.get(-1)?, minus.get(-2)?, minus.get(-3)?);
    let (no, ni) = (t2.rows(), t2.cols());
    let (rt_o, rt_i) = r_inv_t_pair(no, ni);
    let mut res = rtt_residual(&t2, &rt_o, &rt_i)?;
    res = res.sub(&left(&build_p(no), &s12(&t3, &d)?)?.scale(&qq()))?;
    res = res.add(&right(&s21(&t3, &d)?, &build_p(ni))?.scale(&qq()))?;
    rec.record("inhomogeneous", &res);
    if groupoid {
        if !d.is_zero() {
            return Err(Error::GroupoidViolated);
        }
        rec.record("homogeneous", &rtt_residual(&t2, &rt_o, &rt_i)?);
    }
    Ok(rec.finish())
}

/// Relations of `M12^{-1}` with the other blocks, and the exchange
/// relations of `X = M22 M12^{-1} M11` with `M11` and `M22`.
pub fn check_auxiliary(b: &BlockTransport) -> Result<CheckReport> {
    let mut rec = Recorder::new("auxiliary");
    rec.param("split", vec![b.n1, b.m, b.n2]);
    let m = b.m;
    let inv = b.m12.invert_restricted()?;
    let rm = build_r(m, false);
    let rm_inv = as_q(&build_r(m, true), &inv);

    // (2)M22 R^{-1} (1)M12^{-1} = (1)M12^{-1} (2)M22
    let lhs = b.m22.lift2(m).matmul(&rm_inv)?.matmul(&inv.lift1(m))?;
    rec.record("M22.inv", &lhs.sub(&s12(&inv, &b.m22)?)?);
    // (1)M12^{-1} R^{-1} (2)M11 = (2)M11 (1)M12^{-1}
    let lhs = inv.lift1(m).matmul(&rm_inv)?.matmul(&b.m11.lift2(m))?;
    rec.record("inv.M11", &lhs.sub(&s21(&inv, &b.m11)?)?);
    // (1)M12^{-1} (2)M12^{-1} R = R (2)M12^{-1} (1)M12^{-1}
    rec.record("inv.inv", &right(&s12(&inv, &inv)?, &rm)?.sub(&left(&rm, &s21(&inv, &inv)?)?)?);

    let x = b.m22.matmul(&inv)?.matmul(&b.m11)?;
    // (1)X (2)M11 R^{-1} = (2)M11 (1)X - (q-1/q) (1)M21 (2)M11 P
    let lhs = right(&s12(&x, &b.m11)?, &build_r(b.n1, true))?;
    let corr = right(&s12(&b.m21, &b.m11)?, &build_p(b.n1))?.scale(&qq());
    rec.record("X.M11", &lhs.sub(&s21(&x, &b.m11)?)?.add(&corr)?);
    // R (1)X (2)M22 = (2)M22 (1)X + (q-1/q) R (1)M22 (2)M21 P
    let rn2 = build_r(b.n2, false);
    let lhs = left(&rn2, &s12(&x, &b.m22)?)?;
    let corr = left(&rn2, &right(&s12(&b.m22, &b.m21)?, &build_p_rect(m, b.n1))?)?.scale(&qq());
    rec.record("X.M22", &lhs.sub(&s21(&x, &b.m22)?)?.sub(&corr)?);
    Ok(rec.finish())
}

//! Named network families: the triangle network, a ladder with a single
//! unit-monomial crossing, a bottleneck network, the three-piece composite
//! and the all-ones toy matrix.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ncmat::QMatrix;
use crate::qalg::{QElem, SkewForm};

use super::{BlockTransport, Network, PlanarBuilder};

/// Triangle network with `n` sources on the right side and `2n` sinks:
/// `n` on the left side, then `n` on the bottom side.
///
/// Sources are labelled `1..n` from the top, left sinks `1'..n'` from the
/// top and bottom sinks `1''..n''` from the left.
pub fn build_triangle(n: usize) -> Result<Network> {
    if n == 0 {
        return Err(Error::InvalidNetwork("triangle needs n >= 1".into()));
    }
    let mut b = PlanarBuilder::new();
    let nf = n as f64;
    let mut gray = vec![Vec::new(); n];
    for (r, row) in gray.iter_mut().enumerate() {
        for j in 0..=r {
            row.push(b.vertex(format!("g{r}_{j}"), -(r as f64) / 2.0 + j as f64, -(r as f64)));
        }
    }
    let mut black = vec![Vec::new(); n.saturating_sub(1)];
    for (r, row) in black.iter_mut().enumerate() {
        for j in 0..=r {
            row.push(b.vertex(
                format!("b{r}_{j}"),
                -(r as f64) / 2.0 + j as f64,
                -(r as f64) - 0.6,
            ));
        }
    }
    let sources: Vec<usize> = (0..n)
        .map(|i| {
            let y = -(i as f64) + 0.2;
            b.vertex(format!("{}", i + 1), -y / 2.0 + 0.8, y)
        })
        .collect();
    let left: Vec<usize> = (0..n)
        .map(|r| {
            let y = -(r as f64) + 0.3;
            b.vertex(format!("{}'", r + 1), y / 2.0 - 0.8, y)
        })
        .collect();
    let yb = -(nf - 1.0) - 0.8;
    let bottom: Vec<usize> = (0..n)
        .map(|j| b.vertex(format!("{}''", j + 1), -(nf - 1.0) / 2.0 + j as f64, yb))
        .collect();
    let top = b.vertex("T", 0.0, 1.6);
    let bl = b.vertex("BL", yb / 2.0 - 0.8, yb);
    let br = b.vertex("BR", -yb / 2.0 + 0.8, yb);

    for (i, &s) in sources.iter().enumerate() {
        b.edge(s, gray[i][i]);
    }
    for r in 0..n {
        for j in 0..=r {
            let g = gray[r][j];
            if r + 1 < n {
                b.edge(g, black[r][j]);
            } else {
                b.edge(g, bottom[j]);
            }
            if j >= 1 {
                b.edge(g, black[r - 1][j - 1]);
            } else {
                b.edge(g, left[r]);
            }
        }
    }
    for r in 0..n.saturating_sub(1) {
        for j in 0..=r {
            b.edge(black[r][j], gray[r + 1][j]);
        }
    }
    let mut boundary = vec![top];
    boundary.extend(&left);
    boundary.push(bl);
    boundary.extend(&bottom);
    boundary.push(br);
    boundary.extend(sources.iter().rev());
    b.boundary(boundary);
    let mut sinks = left;
    sinks.extend(bottom);
    b.sources(sources);
    b.sinks(sinks);
    b.finish()
}

/// Horizontal lines `1..k` running from source `s_i` on the right to sink
/// `t_i` on the left, joined by vertical rungs.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderSpec {
    pub k: usize,
    /// `(i, x)`: rung from line `i+1` up to line `i` at abscissa `x`.
    pub ups: Vec<(usize, f64)>,
    /// `(i, x)`: rung from line `i` down to line `i+1` at abscissa `x`.
    pub downs: Vec<(usize, f64)>,
    pub width: f64,
}

/// Three lines with two upward rungs on the right and four downward rungs
/// on the left. With split `(2, 1, 2)` its `M12` is a single unit monomial.
pub fn default_ladder() -> LadderSpec {
    LadderSpec {
        k: 3,
        ups: vec![(1, 6.0), (2, 8.0)],
        downs: vec![(1, 2.0), (2, 3.0), (1, 4.0), (2, 1.0)],
        width: 10.0,
    }
}

pub fn build_ladder(spec: &LadderSpec) -> Result<Network> {
    let k = spec.k;
    if k < 2 {
        return Err(Error::InvalidNetwork("ladder needs at least two lines".into()));
    }
    for &(i, x) in spec.ups.iter().chain(&spec.downs) {
        if i < 1 || i >= k || x <= 0.0 || x >= spec.width {
            return Err(Error::InvalidNetwork(format!("rung ({i}, {x}) is out of range")));
        }
    }
    let mut b = PlanarBuilder::new();
    let mut on_line: Vec<Vec<(f64, usize)>> = vec![Vec::new(); k + 1];
    let mut rungs = Vec::new();
    let mut count = 0;
    let mut point = |b: &mut PlanarBuilder, line: usize, x: f64| {
        let id = b.vertex(format!("v{count}"), x, -(line as f64));
        count += 1;
        on_line[line].push((x, id));
        id
    };
    for &(i, x) in &spec.ups {
        let lo = point(&mut b, i + 1, x);
        let hi = point(&mut b, i, x);
        rungs.push((lo, hi));
    }
    for &(i, x) in &spec.downs {
        let hi = point(&mut b, i, x);
        let lo = point(&mut b, i + 1, x);
        rungs.push((hi, lo));
    }
    let mut sources = Vec::new();
    let mut sinks = Vec::new();
    for i in 1..=k {
        sources.push(b.vertex(format!("s{i}"), spec.width, -(i as f64)));
        sinks.push(b.vertex(format!("t{i}"), 0.0, -(i as f64)));
    }
    for (u, w) in rungs {
        b.edge(u, w);
    }
    for i in 1..=k {
        let mut pts = on_line[i].clone();
        pts.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut seq = vec![sources[i - 1]];
        seq.extend(pts.iter().map(|p| p.1));
        seq.push(sinks[i - 1]);
        for w in seq.windows(2) {
            b.edge(w[0], w[1]);
        }
    }
    let tl = b.vertex("TL", 0.0, 0.0);
    let tr = b.vertex("TR", spec.width, 0.0);
    let bl = b.vertex("BL", 0.0, -(k as f64) - 1.0);
    let br = b.vertex("BR", spec.width, -(k as f64) - 1.0);
    let mut boundary = vec![tl];
    boundary.extend(&sinks);
    boundary.extend([bl, br]);
    boundary.extend(sources.iter().rev());
    boundary.push(tr);
    b.boundary(boundary);
    b.sources(sources);
    b.sinks(sinks);
    b.finish()
}

/// All `n1 + 1` sources merge into one edge that then splits to all
/// `1 + n2` sinks. With split `(n1, 1, n2)` the groupoid condition holds.
pub fn build_bottleneck(n1: usize, n2: usize) -> Result<Network> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidNetwork("bottleneck needs n1, n2 >= 1".into()));
    }
    let (s, t) = (n1 + 1, n2 + 1);
    let w = 10.0;
    let mut b = PlanarBuilder::new();
    let sources: Vec<usize> =
        (1..=s).map(|j| b.vertex(format!("s{j}"), w, -(j as f64))).collect();
    let sinks: Vec<usize> =
        (1..=t).map(|i| b.vertex(format!("t{i}"), 0.0, -(i as f64))).collect();
    let merge: Vec<usize> =
        (2..=s).map(|j| b.vertex(format!("m{j}"), 7.0, -(j as f64))).collect();
    let split: Vec<usize> =
        (2..=t).map(|i| b.vertex(format!("u{i}"), 3.0, -(i as f64))).collect();
    b.edge(sources[0], merge[0]);
    for j in 2..=s {
        b.edge(sources[j - 1], merge[j - 2]);
        if j > 2 {
            b.edge(merge[j - 3], merge[j - 2]);
        }
    }
    b.edge(*merge.last().expect("s >= 2"), *split.last().expect("t >= 2"));
    for i in 2..=t {
        b.edge(split[i - 2], sinks[i - 1]);
        if i > 2 {
            b.edge(split[i - 2], split[i - 3]);
        }
    }
    b.edge(split[0], sinks[0]);
    let depth = -(s.max(t) as f64) - 1.0;
    let tl = b.vertex("TL", 0.0, 0.0);
    let tr = b.vertex("TR", w, 0.0);
    let bl = b.vertex("BL", 0.0, depth);
    let br = b.vertex("BR", w, depth);
    let mut boundary = vec![tl];
    boundary.extend(&sinks);
    boundary.extend([bl, br]);
    boundary.extend(sources.iter().rev());
    boundary.push(tr);
    b.boundary(boundary);
    b.sources(sources);
    b.sinks(sinks);
    b.finish()
}

/// Transport matrices of three subnetworks glued in sequence. Superscript
/// is the subnetwork, subscript the piece: `t21` is the first piece of the
/// second subnetwork.
#[derive(Clone, Debug)]
pub struct CompositeBlocks {
    /// `m2 x m2`
    pub t11: QMatrix,
    /// `m2 x n1`
    pub t12: QMatrix,
    /// `m2 x m2`
    pub t21: QMatrix,
    /// `k x m2`
    pub t22: QMatrix,
    /// `k x m1`
    pub t23: QMatrix,
    /// `m1 x k`
    pub t31: QMatrix,
    /// `n2 x k`
    pub t32: QMatrix,
}

/// Columns `(n1 | m2 | m1)`, rows `(m2 | m1 | n2)`:
///
/// ```text
/// m2 | t21 t12          t21 t11          0
/// m1 | t31 t22 t12      t31 t22 t11      t31 t23
/// n2 | t32 t22 t12      t32 t22 t11      t32 t23
/// ```
///
/// split as `(n1, m2 + m1, n2)`. The upper-right zero block means nothing
/// flows from the `m1` sources to the `m2` sinks of the middle piece.
pub fn assemble_composite(b: &CompositeBlocks) -> Result<BlockTransport> {
    let m2 = b.t11.rows();
    let k = b.t22.rows();
    let m1 = b.t23.cols();
    let ok = b.t11.cols() == m2
        && b.t12.rows() == m2
        && b.t21.rows() == m2
        && b.t21.cols() == m2
        && b.t22.cols() == m2
        && b.t23.rows() == k
        && b.t31.rows() == m1
        && b.t31.cols() == k
        && b.t32.cols() == k;
    if !ok {
        return Err(Error::DimensionMismatch("composite pieces have inconsistent sizes".into()));
    }
    let f = b.t11.form().clone();
    let t22t12 = b.t22.matmul(&b.t12)?;
    let t22t11 = b.t22.matmul(&b.t11)?;
    let m11 = vstack(&b.t21.matmul(&b.t12)?, &b.t31.matmul(&t22t12)?)?;
    let m12 = QMatrix::from_blocks(
        &b.t21.matmul(&b.t11)?,
        &QMatrix::zeros(m2, m1, &f),
        &b.t31.matmul(&t22t11)?,
        &b.t31.matmul(&b.t23)?,
    )?;
    let m21 = b.t32.matmul(&t22t12)?;
    let m22 = hstack(&b.t32.matmul(&t22t11)?, &b.t32.matmul(&b.t23)?)?;
    BlockTransport::from_blocks(m11, m12, m21, m22)
}

fn vstack(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    let f = a.form().clone();
    QMatrix::from_blocks(a, &QMatrix::zeros(a.rows(), 0, &f), b, &QMatrix::zeros(b.rows(), 0, &f))
}

fn hstack(a: &QMatrix, b: &QMatrix) -> Result<QMatrix> {
    let f = a.form().clone();
    QMatrix::from_blocks(a, b, &QMatrix::zeros(0, a.cols(), &f), &QMatrix::zeros(0, b.cols(), &f))
}

/// Composite built from three triangle networks on commuting generators.
///
/// The first piece comes from the left sinks of a triangle of size
/// `n1 + m2`, the second from the left sinks of a triangle of size
/// `m2 + m1`, the third from a triangle of size `m1` (so `k = m1`, and
/// `n2 <= m1` bottom sinks are kept). All required blocks are triangular
/// with unit-monomial diagonals.
pub fn build_composite(n1: usize, m2: usize, m1: usize, n2: usize) -> Result<CompositeBlocks> {
    if n1 == 0 || m2 == 0 || m1 == 0 || n2 == 0 || n2 > m1 {
        return Err(Error::InvalidNetwork(
            "composite needs n1, m2, m1, n2 >= 1 and n2 <= m1".into(),
        ));
    }
    let nets = [build_triangle(n1 + m2)?, build_triangle(m2 + m1)?, build_triangle(m1)?];
    let mut form = SkewForm::zero(0);
    let mut offsets = Vec::new();
    for net in &nets {
        offsets.push(form.rank());
        form = form.direct_sum(net.form());
    }
    let form = Arc::new(form);
    let mut mats = Vec::new();
    for (net, &off) in nets.iter().zip(&offsets) {
        mats.push(net.transport_matrix()?.embed(&form, off)?);
    }
    let (a, b, c) = (&mats[0], &mats[1], &mats[2]);
    Ok(CompositeBlocks {
        t12: a.submatrix(n1, m2, 0, n1)?,
        t11: a.submatrix(n1, m2, n1, m2)?,
        t21: b.submatrix(0, m2, 0, m2)?,
        t22: b.submatrix(m2, m1, 0, m2)?,
        t23: b.submatrix(m2, m1, m2, m1)?,
        t31: c.submatrix(0, m1, 0, m1)?,
        t32: c.submatrix(m1, n2, 0, m1)?,
    })
}

/// `(r+1) x (r+1)` matrix with entry `1` iff `j <= i + 1` (1-based rows
/// and columns), i.e. `i - j + 1 >= 0`.
pub fn hat_matrix(r: usize) -> Vec<Vec<i64>> {
    (1..=r + 1)
        .map(|i| (1..=r + 1).map(|j| i64::from(i as i64 - j as i64 + 1 >= 0)).collect())
        .collect()
}

/// The hat matrix over commuting generators, split as `(1, r, 1)`.
pub fn hat_block_transport(r: usize) -> Result<BlockTransport> {
    if r == 0 {
        return Err(Error::InvalidNetwork("hat matrix needs r >= 1".into()));
    }
    let form = Arc::new(SkewForm::zero(0));
    let h = hat_matrix(r);
    let m = QMatrix::from_fn(r + 1, r + 1, &form, |i, j| {
        if h[i][j] == 1 {
            QElem::one(&form)
        } else {
            QElem::zero(&form)
        }
    });
    BlockTransport::split(&m, 1, r, 1)
}

/// Integer entries of `[M12^-1]^p` for the hat matrix.
pub fn hat_inverse_power(r: usize, p: usize) -> Result<Vec<Vec<BigInt>>> {
    let bt = hat_block_transport(r)?;
    Ok(bt.m12.invert_restricted()?.pow(p)?.classicalize())
}

/// How `f^r_p = M22 [M12^-1]^p M11` of the hat matrix is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrpMode {
    /// Matrix product with the restricted inverse.
    Matrix,
    /// `f^r_{p+1} = f^r_p - f^{r-1}_p`, `f^r_1 = f^1_p = 1`.
    Recursion,
    /// `(-1)^(r-1) binom(p-2, r-1)` with the generalized binomial.
    Closed,
}

pub fn f_rp(r: usize, p: usize, mode: FrpMode) -> Result<BigInt> {
    if r == 0 || p == 0 {
        return Err(Error::InvalidNetwork("f^r_p needs r, p >= 1".into()));
    }
    match mode {
        FrpMode::Matrix => {
            let bt = hat_block_transport(r)?;
            let inv = bt.m12.invert_restricted()?;
            let v = bt.m22.matmul(&inv.pow(p)?)?.matmul(&bt.m11)?;
            Ok(v.get(0, 0).classicalize())
        }
        FrpMode::Recursion => {
            // f[r] at the current p
            let mut f = vec![BigInt::one(); r + 1];
            for _ in 1..p {
                let mut next = f.clone();
                for rr in 2..=r {
                    next[rr] = &f[rr] - &f[rr - 1];
                }
                f = next;
            }
            Ok(f[r].clone())
        }
        FrpMode::Closed => {
            let b = binomial(p as i64 - 2, r as i64 - 1);
            Ok(if (r - 1) % 2 == 0 { b } else { -b })
        }
    }
}

/// `n (n-1) ... (n-k+1) / k!` for any integer `n` and `k >= 0`.
fn binomial(n: i64, k: i64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    if num.is_zero() {
        BigInt::zero()
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_binomial() {
        assert_eq!(binomial(3, 2), BigInt::from(3));
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-1, 0), BigInt::from(1));
        assert_eq!(binomial(0, 2), BigInt::from(0));
        assert_eq!(binomial(2, 5), BigInt::from(0));
    }

    #[test]
    fn hat_shapes() {
        assert_eq!(hat_matrix(1), vec![vec![1, 1], vec![1, 1]]);
        let bt = hat_block_transport(3).unwrap();
        let m12 = bt.m12.classicalize();
        for (i, row) in m12.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(*x, BigInt::from(i64::from(j <= i)));
            }
        }
    }

    #[test]
    fn frp_examples() {
        assert_eq!(f_rp(3, 5, FrpMode::Closed).unwrap(), BigInt::from(3));
        assert_eq!(f_rp(3, 5, FrpMode::Matrix).unwrap(), BigInt::from(3));
        assert_eq!(f_rp(2, 2, FrpMode::Closed).unwrap(), BigInt::from(0));
        assert_eq!(f_rp(2, 2, FrpMode::Matrix).unwrap(), BigInt::from(0));
        assert_eq!(f_rp(2, 2, FrpMode::Recursion).unwrap(), BigInt::from(0));
        assert!(f_rp(0, 1, FrpMode::Closed).is_err());
    }
}

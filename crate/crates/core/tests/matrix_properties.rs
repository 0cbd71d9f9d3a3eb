use std::sync::Arc;

use proptest::prelude::*;

use qtransport::ncmat::{QMatrix, SheetOrder, Side};
use qtransport::qalg::{QElem, QScalar, SkewForm};
use qtransport::rmat::{build_p, build_r};

fn form3() -> Arc<SkewForm> {
    Arc::new(SkewForm::new(vec![vec![0, 2, -1], vec![-2, 0, 3], vec![1, -3, 0]]).unwrap())
}

fn arb_elem() -> impl Strategy<Value = Vec<([i64; 3], i64, i64)>> {
    prop::collection::vec(([-2i64..=2, -2..=2, -2..=2], -3i64..=3, -2i64..=2), 0..3)
}

fn build_elem(terms: &[([i64; 3], i64, i64)], f: &Arc<SkewForm>) -> QElem {
    let mut acc = QElem::zero(f);
    for (a, c, k) in terms {
        acc = &acc + &QElem::monomial(a, QScalar::term(*c, *k), f).unwrap_or_else(|_| QElem::zero(f));
    }
    acc
}

fn arb_matrix(r: usize, c: usize) -> impl Strategy<Value = Vec<Vec<([i64; 3], i64, i64)>>> {
    prop::collection::vec(arb_elem(), r * c)
}

fn to_matrix(raw: &[Vec<([i64; 3], i64, i64)>], r: usize, c: usize, f: &Arc<SkewForm>) -> QMatrix {
    QMatrix::from_fn(r, c, f, |i, j| build_elem(&raw[i * c + j], f))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matmul_is_associative(a in arb_matrix(2, 2), b in arb_matrix(2, 2), c in arb_matrix(2, 2)) {
        let f = form3();
        let (a, b, c) = (to_matrix(&a, 2, 2, &f), to_matrix(&b, 2, 2, &f), to_matrix(&c, 2, 2, &f));
        let lhs = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let rhs = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn transpose_of_product_keeps_quantum_order(a in arb_matrix(2, 3), b in arb_matrix(3, 2)) {
        let f = form3();
        let (a, b) = (to_matrix(&a, 2, 3, &f), to_matrix(&b, 3, 2, &f));
        let t = a.matmul(&b).unwrap().transpose_q();
        for i in 0..2 {
            for j in 0..2 {
                let mut want = QElem::zero(&f);
                for k in 0..3 {
                    want = &want + &a.get(j, k).qmul(b.get(k, i)).unwrap();
                }
                prop_assert_eq!(t.get(i, j), &want);
            }
        }
    }

    #[test]
    fn classical_actions_compose(a in arb_matrix(2, 2), b in arb_matrix(2, 2)) {
        let f = form3();
        let (a, b) = (to_matrix(&a, 2, 2, &f), to_matrix(&b, 2, 2, &f));
        let s = QMatrix::sheet_product(&a, &b, SheetOrder::O12).unwrap();
        let (r, p) = (build_r(2, false), build_p(2));
        let step = QMatrix::classical_act(&p, &QMatrix::classical_act(&r, &s, Side::Left).unwrap(), Side::Left).unwrap();
        let once = QMatrix::classical_act(&(&p * &r), &s, Side::Left).unwrap();
        prop_assert_eq!(&step, &once);
        let rs = QMatrix::classical_act(&r, &QMatrix::classical_act(&p, &s, Side::Right).unwrap(), Side::Right).unwrap();
        let rs_once = QMatrix::classical_act(&(&p * &r), &s, Side::Right).unwrap();
        prop_assert_eq!(rs, rs_once);
    }

    #[test]
    fn flip_conjugation_swaps_sheets_classically(a in prop::collection::vec(-3i64..=3, 4), b in prop::collection::vec(-3i64..=3, 4)) {
        let f = Arc::new(SkewForm::zero(1));
        let mk = |v: &[i64]| QMatrix::from_fn(2, 2, &f, |i, j| QElem::scalar(QScalar::from_int(v[i * 2 + j]), &f));
        let (a, b) = (mk(&a), mk(&b));
        let p = build_p(2);
        let ab = QMatrix::sheet_product(&a, &b, SheetOrder::O12).unwrap();
        let conj = QMatrix::classical_act(&p, &QMatrix::classical_act(&p, &ab, Side::Left).unwrap(), Side::Right).unwrap();
        prop_assert_eq!(conj, QMatrix::sheet_product(&b, &a, SheetOrder::O12).unwrap());
        prop_assert_eq!(ab, QMatrix::sheet_product(&a, &b, SheetOrder::O21).unwrap());
    }

    #[test]
    fn restricted_inverse_is_two_sided(diag in prop::collection::vec(([-2i64..=2, -2..=2, -2..=2], -3i64..=3), 3), low in arb_matrix(3, 3)) {
        let f = form3();
        let low = to_matrix(&low, 3, 3, &f);
        let m = QMatrix::from_fn(3, 3, &f, |i, j| {
            if i == j {
                QElem::monomial(&diag[i].0, QScalar::v_pow(diag[i].1), &f).unwrap()
            } else if i > j {
                low.get(i, j).clone()
            } else {
                QElem::zero(&f)
            }
        });
        let inv = m.invert_restricted().unwrap();
        let id = QMatrix::identity(3, &f);
        prop_assert_eq!(m.matmul(&inv).unwrap(), id.clone());
        prop_assert_eq!(inv.matmul(&m).unwrap(), id);
    }
}

#[test]
fn left_action_by_r_on_a_column() {
    let f = form3();
    let x: Vec<QElem> = (0..3).map(|i| QElem::generator(i, &f)).collect();
    let col = QMatrix::from_fn(4, 1, &f, |i, _| if i < 3 { x[i].clone() } else { QElem::one(&f) });
    let out = QMatrix::classical_act(&build_r(2, false), &col, Side::Left).unwrap();
    let q = QScalar::q_pow(1);
    // rows (0,0) and (1,1) scale by q; row (1,0) picks up (q - 1/q) times row (0,1).
    assert_eq!(out.get(0, 0), &x[0].scale(&q));
    assert_eq!(out.get(1, 0), &x[1]);
    assert_eq!(out.get(2, 0), &(&x[2] + &x[1].scale(&QScalar::q_minus_q_inv())));
    assert_eq!(out.get(3, 0), &QElem::scalar(q, &f));
}

#[test]
fn unsupported_inverse_is_a_typed_error() {
    let f = form3();
    let g = |i| QElem::generator(i, &f);
    let m = QMatrix::from_fn(2, 2, &f, |i, j| &g(i) + &g(j));
    assert!(matches!(
        m.invert_restricted(),
        Err(qtransport::Error::NotInvertibleInSupportedClass(_))
    ));
}

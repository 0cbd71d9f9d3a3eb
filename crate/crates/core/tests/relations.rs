use qtransport::affine::{levels_t, loop_generators};
use qtransport::network::{
    assemble_composite, build_bottleneck, build_composite, build_ladder, build_triangle,
    default_ladder, hat_block_transport, BlockTransport,
};
use qtransport::verify::*;

#[test]
fn rtt_implies_block_algebra_on_every_split() {
    let nets = vec![
        build_triangle(2).unwrap(),
        build_triangle(3).unwrap(),
        build_ladder(&default_ladder()).unwrap(),
        build_bottleneck(2, 3).unwrap(),
    ];
    for net in nets {
        let m = net.transport_matrix().unwrap();
        assert!(check_rtt(&m, m.rows(), m.cols()).unwrap().passed);
        for (n1, mm, n2) in BlockTransport::admissible_splits(m.rows(), m.cols()) {
            let b = BlockTransport::split(&m, n1, mm, n2).unwrap();
            let r = check_block_algebra(&b).unwrap();
            assert!(r.passed, "split ({n1},{mm},{n2}): {:?}", r.residuals.first());
        }
    }
}

#[test]
fn composite_transport_satisfies_rtt() {
    for (n1, m2, m1, n2) in [(1, 1, 2, 1), (2, 1, 2, 2)] {
        let b = assemble_composite(&build_composite(n1, m2, m1, n2).unwrap()).unwrap();
        let m = b.assemble();
        let r = check_rtt(&m, m.rows(), m.cols()).unwrap();
        assert!(r.passed, "{:?}", r.residuals.first());
        assert!(check_block_algebra(&b).unwrap().passed);
        assert!(check_auxiliary(&b).unwrap().passed);
    }
}

#[test]
fn groupoid_mode_generators_satisfy_loop_relations() {
    let m = build_bottleneck(2, 2).unwrap().transport_matrix().unwrap();
    let b = BlockTransport::split(&m, 2, 1, 2).unwrap();
    let (plus, minus) = loop_generators(&b, 3, true).unwrap();
    let r = check_loop(&plus, &minus).unwrap();
    assert!(r.passed, "{:?}", r.residuals.first());
}

#[test]
fn composite_groupoid_mode_loop_relations() {
    let b = assemble_composite(&build_composite(1, 1, 2, 1).unwrap()).unwrap();
    let (plus, minus) = loop_generators(&b, 2, true).unwrap();
    let r = check_loop(&plus, &minus).unwrap();
    assert!(r.passed, "{:?}", r.residuals.first());
    assert!(check_appendix(&b, true).unwrap().passed);
}

#[test]
fn ladder_summed_relations_match_componentwise() {
    let m = build_ladder(&default_ladder()).unwrap().transport_matrix().unwrap();
    let b = BlockTransport::split(&m, 1, 2, 1).unwrap();
    let t = levels_t(&b, 4).unwrap();
    let r = check_telescoping(&t, 2).unwrap();
    assert!(r.passed, "{:?}", r.residuals.first());
}

#[test]
fn hat_levels_are_commuting_integers() {
    let b = hat_block_transport(3).unwrap();
    let t = levels_t(&b, 2).unwrap();
    assert_eq!(t.get(0).unwrap(), b.m21);
}

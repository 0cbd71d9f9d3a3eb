//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::panic::{self, AssertUnwindSafe};
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use qtransport::affine::{levels_t, loop_generators, reflection_series};
use qtransport::ncmat::QMatrix;
use qtransport::network::{
    assemble_composite, build_bottleneck, build_composite, build_ladder, build_triangle,
    default_ladder, f_rp, hat_inverse_power, BlockTransport, FrpMode, Network,
};
use qtransport::qalg::{QElem, QScalar, SkewForm};
use qtransport::rmat::{build_r, build_r_inv_t};
use qtransport::verify::*;
use qtransport::Error;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn pass(r: &CheckReport, what: &str) -> Result<(), String> {
    ensure(r.passed, format!("{what}: {} residual entries, first {:?}", r.residuals.len(), r.residuals.first()))
}

fn fail(r: &CheckReport, what: &str) -> Result<(), String> {
    ensure(!r.passed, format!("{what}: corrupted input passed"))
}

fn e<T>(r: qtransport::Result<T>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn transport(net: &Network) -> Result<QMatrix, String> {
    e(net.transport_matrix())
}

fn ladder_blocks() -> Result<BlockTransport, String> {
    let m = transport(&e(build_ladder(&default_ladder()))?)?;
    e(BlockTransport::split(&m, 2, 1, 2))
}

fn bottleneck_blocks(n1: usize, n2: usize) -> Result<BlockTransport, String> {
    let m = transport(&e(build_bottleneck(n1, n2))?)?;
    e(BlockTransport::split(&m, n1, 1, n2))
}

fn corrupt(m: &QMatrix) -> QMatrix {
    let mut out = m.clone();
    let ((i, j), x) = m.nonzero_entries()[0];
    out.set(i, j, x + &QElem::generator(0, m.form()));
    out
}

fn c1_rmatrix() -> Outcome {
    let t = Instant::now();
    for k in 1..=4 {
        pass(&check_rmatrix(k), &format!("k={k}"))?;
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(5), format!("took {dt:?}"))?;
    Ok(format!("k=1..4 exact, {:.0} ms", dt.as_secs_f64() * 1e3))
}

fn c2_rtt() -> Outcome {
    let mut times = Vec::new();
    for n in [2usize, 3] {
        let t = Instant::now();
        let m = transport(&e(build_triangle(n))?)?;
        pass(&e(check_rtt(&m, 2 * n, n))?, &format!("triangle n={n}"))?;
        times.push(t.elapsed());
    }
    ensure(times[1] < Duration::from_secs(60), format!("n=3 took {:?}", times[1]))?;
    Ok(format!("triangle n=2,3 exact; n=3 in {:.0} ms", times[1].as_secs_f64() * 1e3))
}

fn c3_disc() -> Outcome {
    for n in [2usize, 3] {
        let m = transport(&e(build_triangle(n))?)?;
        let r = e(check_disc_reflection(&m, n, n))?;
        pass(&r, &format!("n={n}"))?;
        ensure(r.parameters["upper_triangular"] == true, format!("n={n}: A not upper-triangular"))?;
    }
    Ok("n=2,3 upper-triangular and exact".into())
}

fn c4_blocks() -> Outcome {
    let mut nets: Vec<(String, Network)> = Vec::new();
    for n in [2usize, 3] {
        nets.push((format!("triangle {n}"), e(build_triangle(n))?));
    }
    nets.push(("ladder".into(), e(build_ladder(&default_ladder()))?));
    for n1 in 1..=3 {
        for n2 in 1..=3 {
            nets.push((format!("bottleneck {n1},{n2}"), e(build_bottleneck(n1, n2))?));
        }
    }
    let mut count = 0;
    for (name, net) in &nets {
        let m = transport(net)?;
        let rtt = e(check_rtt(&m, m.rows(), m.cols()))?;
        for (n1, mm, n2) in BlockTransport::admissible_splits(m.rows(), m.cols()) {
            if n1 > 3 || mm > 3 || n2 > 3 {
                continue;
            }
            let b = e(BlockTransport::split(&m, n1, mm, n2))?;
            let r = e(check_block_algebra(&b))?;
            pass(&r, &format!("{name} split ({n1},{mm},{n2})"))?;
            ensure(rtt.passed, format!("{name}: blocks pass but RTT fails"))?;
            count += 1;
        }
    }
    ensure(count > 0, "no admissible split in range")?;
    Ok(format!("{count} splits over {} networks", nets.len()))
}

fn c5_affine() -> Outcome {
    let mut count = 0;
    for (n, n1, m, n2) in [(2usize, 1, 1, 3), (3, 1, 2, 4), (3, 2, 1, 5)] {
        let mat = transport(&e(build_triangle(n))?)?;
        let b = e(BlockTransport::split(&mat, n1, m, n2))?;
        let t = e(levels_t(&b, 6))?;
        for k in 0..=3 {
            for p in 0..=k {
                pass(&e(check_affine_summed(&t, k, p))?, &format!("n={n} k={k} p={p}"))?;
                count += 1;
            }
        }
        let tel = e(check_telescoping(&t, 3))?;
        pass(&tel, &format!("n={n} telescoping"))?;
        ensure(tel.parameters["componentwise_zero"] == true, "componentwise residual nonzero")?;
    }
    Ok(format!("{count} summed checks, telescoping on 3 block sets"))
}

fn c6_loop() -> Outcome {
    let b = ladder_blocks()?;
    let (plus, minus) = e(loop_generators(&b, 3, false))?;
    let r = e(check_loop(&plus, &minus))?;
    pass(&r, "loop relations")?;
    let mut counts = Vec::new();
    for key in ["checked++", "checked+-", "checked--", "checked-+"] {
        let c = r.parameters[key].as_u64().unwrap_or(0);
        ensure(c > 0, format!("{key} is empty"))?;
        counts.push(c);
    }
    pass(&e(check_subalgebra(&e(plus.get(0))?, &e(minus.get(-1))?))?, "subalgebra")?;
    pass(&e(check_auxiliary(&b))?, "auxiliary")?;
    Ok(format!("bidegrees ++ {} +- {} -- {} -+ {}; subalgebra, auxiliary ok", counts[0], counts[1], counts[2], counts[3]))
}

fn c7_appendix() -> Outcome {
    pass(&e(check_appendix(&ladder_blocks()?, false))?, "ladder")?;
    let g = bottleneck_blocks(2, 2)?;
    pass(&e(check_groupoid(&g))?, "groupoid precondition")?;
    let r = e(check_appendix(&g, true))?;
    pass(&r, "homogeneous form")?;
    Ok("inhomogeneous on ladder, homogeneous under groupoid".into())
}

fn random_blocks(rng: &mut StdRng, n1: usize, m: usize, n2: usize) -> Result<BlockTransport, String> {
    let f = Arc::new(e(SkewForm::new(vec![vec![0, 2, -1], vec![-2, 0, 1], vec![1, -1, 0]]))?);
    let mono = |rng: &mut StdRng| {
        let a: Vec<i64> = (0..3).map(|_| rng.gen_range(-2..=2)).collect();
        QElem::monomial(&a, QScalar::v_pow(rng.gen_range(-3..=3)), &f).expect("length 3")
    };
    let mat = |rng: &mut StdRng, r: usize, c: usize| {
        let rows = (0..r).map(|_| (0..c).map(|_| mono(rng)).collect()).collect();
        QMatrix::from_rows(rows, &f).expect("rectangular")
    };
    let m11 = mat(rng, m, n1);
    let mut m12 = mat(rng, m, m);
    for i in 0..m {
        for j in (i + 1)..m {
            m12.set(i, j, QElem::zero(&f));
        }
    }
    let m21 = mat(rng, n2, n1);
    let m22 = mat(rng, n2, m);
    e(BlockTransport::from_blocks(m11, m12, m21, m22))
}

fn c8_groupoid() -> Outcome {
    let mut count = 0;
    for (n1, m2, m1, n2) in [(1usize, 1, 1, 1), (1, 1, 2, 1), (2, 1, 2, 2), (1, 2, 1, 1)] {
        let blocks = e(build_composite(n1, m2, m1, n2))?;
        let b = e(assemble_composite(&blocks))?;
        pass(&e(check_groupoid(&b))?, &format!("composite ({n1},{m2},{m1},{n2})"))?;
        count += 1;
    }
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..5 {
        let b = random_blocks(&mut rng, 2, 2, 2)?;
        fail(&e(check_groupoid(&b))?, "random blocks")?;
    }
    Ok(format!("{count} composites pass, 5 random instances fail"))
}

fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::from(0);
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

fn c9_combinatorics() -> Outcome {
    let t = Instant::now();
    for r in 1..=8 {
        for p in 1..=8 {
            let a = e(f_rp(r, p, FrpMode::Matrix))?;
            let b = e(f_rp(r, p, FrpMode::Recursion))?;
            let c = e(f_rp(r, p, FrpMode::Closed))?;
            ensure(a == b && b == c, format!("f({r},{p}): {a} {b} {c}"))?;
            if 1 < p && p <= r {
                ensure(a == BigInt::from(0), format!("f({r},{p}) = {a}, expected 0"))?;
            }
        }
    }
    for r in 1..=8 {
        for p in 1..=8 {
            let inv = e(hat_inverse_power(r, p))?;
            for (i, row) in inv.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let d = i as i64 - j as i64;
                    let sign = if d.rem_euclid(2) == 0 { 1 } else { -1 };
                    let want = binom(p as i64, d) * sign;
                    ensure(*x == want, format!("r={r} p={p} [{i},{j}] = {x}, expected {want}"))?;
                }
            }
        }
    }
    let dt = t.elapsed();
    ensure(dt < Duration::from_secs(1), format!("took {dt:?}"))?;
    ensure(e(f_rp(3, 5, FrpMode::Closed))? == BigInt::from(3), "f(3,5) != 3")?;
    Ok(format!("three modes agree on 8x8, binomial inverse powers, {:.0} ms", dt.as_secs_f64() * 1e3))
}

fn c10_reflection() -> Outcome {
    let b = ladder_blocks()?;
    let (plus, minus) = e(loop_generators(&b, 3, false))?;
    let a = e(reflection_series(&plus, &minus, 2))?;
    let r = e(check_reflection_affine(&a, 2))?;
    pass(&r, "affine reflection")?;
    let a0 = e(a.get(0))?;
    pass(&e(check_reflection_a0(&a0))?, "level zero")?;
    let n = a0.rows();
    let rt1 = e(build_r(n, false).partial_transpose_t1())?;
    let low = e(affine_reflection_residual(&a, -1, -1))?;
    let direct = e(reflection_residual(&a0, &build_r_inv_t(n), &rt1))?;
    ensure(low == direct.neg(), "lowest bidegree differs from the level-zero equation")?;
    Ok(format!("{} bidegrees at K=2; lowest equals the level-zero equation", r.parameters["bidegrees"]))
}

fn c11_negative() -> Outcome {
    let mut names = Vec::new();
    let mut note = |s: &str| names.push(s.to_string());

    let mut bad_r = build_r(2, false);
    bad_r.set(2, 1, QScalar::q_pow(1));
    fail(&e(check_rmatrix_with(&bad_r, &build_r(2, true), 2))?, "rmatrix")?;
    note("rmatrix");

    let net = e(build_triangle(2))?;
    let f = net.form();
    let (i, j) = (0..f.rank())
        .flat_map(|i| (0..f.rank()).map(move |j| (i, j)))
        .find(|&(i, j)| i < j && f.entry(i, j) != 0)
        .ok_or("no nonzero form entry")?;
    let broken = e(net.with_form(f.with_entry(i, j, f.entry(i, j) + 2)))?;
    fail(&e(check_rtt(&transport(&broken)?, 4, 2))?, "rtt")?;
    note("rtt");

    let lb = ladder_blocks()?;
    let mut b = lb.clone();
    b.m22 = corrupt(&b.m22);
    fail(&e(check_block_algebra(&b))?, "blocks")?;
    note("blocks");

    let tri = transport(&e(build_triangle(3))?)?;
    let t = e(levels_t(&e(BlockTransport::split(&tri, 1, 2, 4))?, 4))?;
    let mut swapped = t.clone();
    e(swapped.set(1, e(t.get(2))?))?;
    e(swapped.set(2, e(t.get(1))?))?;
    fail(&e(check_affine_summed(&swapped, 2, 1))?, "affine summed")?;
    note("affine");
    fail(&e(check_spectral_componentwise(&swapped, &swapped, 0, 1))?, "spectral")?;
    note("spectral");

    let (plus, minus) = e(loop_generators(&lb, 3, false))?;
    let mut bad_minus = minus.clone();
    e(bad_minus.set(-2, corrupt(&e(minus.get(-2))?)))?;
    fail(&e(check_loop(&plus, &bad_minus))?, "loop")?;
    note("loop");
    fail(&e(check_subalgebra(&e(plus.get(0))?, &corrupt(&e(minus.get(-1))?)))?, "subalgebra")?;
    note("subalgebra");

    fail(&e(check_groupoid(&lb))?, "groupoid")?;
    note("groupoid");

    let a = e(reflection_series(&plus, &minus, 2))?;
    fail(&e(check_reflection_a0(&corrupt(&e(a.get(0))?)))?, "reflection")?;
    note("reflection");
    let mut bad_a = a.clone();
    e(bad_a.set(1, corrupt(&e(a.get(1))?)))?;
    fail(&e(check_reflection_affine(&bad_a, 2))?, "reflection affine")?;
    note("reflection-affine");

    fail(&e(check_disc_reflection(&corrupt(&transport(&e(build_triangle(2))?)?), 2, 2))?, "disc")?;
    note("disc-reflection");

    let mut b = lb.clone();
    b.m21 = corrupt(&b.m21);
    fail(&e(check_appendix(&b, false))?, "appendix")?;
    note("appendix");

    let mut b = lb.clone();
    b.m11 = corrupt(&b.m11);
    fail(&e(check_auxiliary(&b))?, "auxiliary")?;
    note("auxiliary");

    ensure(matches!(check_appendix(&lb, true), Err(Error::GroupoidViolated)), "groupoid mode accepted a violation")?;
    Ok(format!("{} checkers reject corrupted input: {}", names.len(), names.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("R-matrix identities", c1_rmatrix),
        ("RTT on triangle networks", c2_rtt),
        ("disc reflection equation", c3_disc),
        ("block algebra on every split", c4_blocks),
        ("summed level relations and telescoping", c5_affine),
        ("loop algebra, subalgebra, auxiliary", c6_loop),
        ("level-2 minus generator identity", c7_appendix),
        ("groupoid condition", c8_groupoid),
        ("combinatorial examples", c9_combinatorics),
        ("affine reflection equation", c10_reflection),
        ("negative controls", c11_negative),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("criterion {:>2} PASS  {name} ({detail}) [{secs:.2}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use frt_core::analysis::{
    a_points, certificate_search, convex_hull3, hata_graph, hausdorff_distance, interior_witness, separation_check,
    separation_margin, separation_threshold, similarity_dimension, symmetry_check, v_points, v_prime_points,
    verify_certificate, Connectedness, DisjointEvidence, FastPath, PairVerdict, SearchLimits, SymmetryVerdict,
};
use frt_core::cube::{
    ball_cover_coverage, cover_face_fraction, cover_is_nested, exact_cover, ic_predicate, verify_ic, Axis, IcMode,
};
use frt_core::frt::{bounding_ball, cell_diameter, eval_address, generate_cloud, same_point_set};
use frt_core::geom::h_matrix;
use frt_core::rotgroup::{hexahedral_coset, hexahedral_group, tetrahedral_group, ExactRotation};
use frt_core::{Address, FrtParams, Mat3, Q23, Rational, Scalar, Sqrt23, Vec3};

type Check = Result<String, String>;

const CRITERION_1_BUDGET: Duration = Duration::from_secs(120);
const SUITE_BUDGET: Duration = Duration::from_secs(300);

fn rat(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn named(name: &str) -> ExactRotation {
    ExactRotation::named(name).unwrap_or_else(|| panic!("unknown rotation {name}"))
}

fn frt(c: Rational, name: &str) -> FrtParams<Rational> {
    FrtParams::from_rotation(c, &named(name)).unwrap()
}

/// The rotation by π/3 about `(1, −1, 1)`.
fn example_rotation() -> Mat3<Rational> {
    Mat3([
        [rat(2, 3), rat(-2, 3), rat(-1, 3)],
        [rat(1, 3), rat(2, 3), rat(-2, 3)],
        [rat(2, 3), rat(1, 3), rat(2, 3)],
    ])
}

/// The rotation by π/4 about the z-axis, exact in `ℚ(√2, √3)`.
fn eighth_turn() -> Mat3<Q23> {
    let s = Q23::sqrt2() / Q23::from_int(2);
    let (z, o) = (Q23::zero(), Q23::one());
    Mat3([[s.clone(), -s.clone(), z.clone()], [s.clone(), s, z.clone()], [z.clone(), z, o]])
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let cs = [(3, 10), (2, 5), (9, 20), (1, 2), (3, 5), (3, 4)];
    let mut true_cells = 0;
    let mut decay_cells = 0;
    for (n, d) in cs {
        let c = rat(n, d);
        let large = 2 * n >= d;
        let bound = |k: u32| Scalar::pow(&(Rational::from_int(4) * c.clone() * c.clone()), k);
        for name in ["E", "z90", "z180", "diag120:v1"] {
            let p = frt(c.clone(), name);
            ensure(ic_predicate(&p, 0.0) == large, || format!("predicate wrong at c={c}, P={name}"))?;
            if large {
                let r = verify_ic(&p, 5, IcMode::Exact).map_err(|e| e.to_string())?;
                let all_one = r.levels.iter().all(|l| l.faces.iter().all(|f| f.exact.as_deref() == Some("1")));
                ensure(r.witnessed_ic && all_one && r.nested == Some(true), || format!("cover not full at c={c}, P={name}"))?;
                true_cells += 1;
            } else {
                let mut series = Vec::new();
                for k in 1..=4 {
                    let cover = exact_cover(&p, k).map_err(|e| e.to_string())?;
                    let mut worst = Rational::from_int(0);
                    for axis in Axis::ALL {
                        let f = cover_face_fraction(&cover, axis);
                        ensure(f <= bound(k), || format!("coverage {f} > (4c²)^{k} at c={c}, P={name}"))?;
                        worst = worst.max(f);
                    }
                    series.push(Scalar::to_f64(&worst));
                }
                ensure(strictly_decreasing(&series), || format!("coverage not decreasing at c={c}, P={name}: {series:?}"))?;
                decay_cells += 1;
            }
        }
        let general = FrtParams::new(c.clone(), example_rotation()).unwrap();
        let quarter: FrtParams<Q23> = FrtParams::new(Q23::rational(c.clone()), eighth_turn()).unwrap();
        ensure(!ic_predicate(&general, 0.0) && !ic_predicate(&quarter, 0.0), || format!("predicate true off P6 at c={c}"))?;
        if !large {
            let cf = Scalar::to_f64(&c);
            for (label, series) in [
                ("pi/3 about (1,-1,1)", ball_series(&general, 4)?),
                ("pi/4 about z", ball_series(&quarter, 4)?),
            ] {
                for (k, f) in series.iter().enumerate() {
                    let b = (4.0 * cf * cf).powi(k as i32 + 1);
                    ensure(*f <= b + 1e-12, || format!("ball cover {f} > {b} at c={c}, {label}"))?;
                }
                ensure(strictly_decreasing(&series), || format!("ball cover not decreasing at c={c}, {label}"))?;
                decay_cells += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed <= CRITERION_1_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{true_cells} IC cells full at depths 1..5, {decay_cells} deficit cells decay; {elapsed:.1?}"))
}

fn ball_series<S: Scalar>(p: &FrtParams<S>, depth: u32) -> Result<Vec<f64>, String> {
    (1..=depth)
        .map(|k| generate_cloud(p, k).map(|cl| ball_cover_coverage(&cl).max_fraction()).map_err(|e| e.to_string()))
        .collect()
}

fn criterion_2() -> Check {
    let ex = FrtParams::new(rat(1, 2), example_rotation()).unwrap();
    let a: Address = "2|322443".parse().unwrap();
    let b: Address = "3|443322".parse().unwrap();
    let framed = ex.convert::<Q23>().unwrap().in_frame(&h_matrix()).map_err(|e| e.to_string())?;
    ensure(framed.is_about_z_axis(), || "H frame does not put the axis on z".into())?;
    let (pa, _) = eval_address(&framed, &a).unwrap();
    let (pb, _) = eval_address(&framed, &b).unwrap();
    ensure(pa == pb, || format!("Q23 values differ: {pa:?} vs {pb:?}"))?;
    let fl = ex.to_f64();
    let (fa, _) = eval_address(&fl, &a).unwrap();
    let (fb, _) = eval_address(&fl, &b).unwrap();
    let dist = fa.distance(&fb);
    ensure(dist <= 1e-12, || format!("float distance {dist}"))?;
    let g = hata_graph(&ex, &SearchLimits { max_depth: 24, ..Default::default() }).map_err(|e| e.to_string())?;
    for (i, j) in [(2, 3), (2, 4), (3, 4)] {
        ensure(g.pair(i, j).verdict.is_intersect(), || format!("({i},{j}) not certified intersecting"))?;
    }
    for (i, j) in [(1, 2), (1, 3), (1, 4)] {
        ensure(g.pair(i, j).verdict.is_disjoint(), || format!("({i},{j}) not certified disjoint"))?;
    }
    ensure(g.verdict == Connectedness::Disconnected, || format!("verdict {:?}", g.verdict))?;
    Ok(format!("exact in Q(√2,√3), float distance {dist:e}, graph Disconnected"))
}

fn criterion_3() -> Check {
    let half = rat(1, 2);
    let p = frt(half.clone(), "z90");
    let cloud = generate_cloud(&p, 7).unwrap();
    let hull = convex_hull3(&cloud.points, 0.0).map_err(|e| e.to_string())?;
    let vprime = v_prime_points(&half);
    let vprime_f: Vec<Vec3<f64>> = vprime.iter().map(Vec3::to_f64).collect();
    let dh = hausdorff_distance(&hull.vertices_f64(), &vprime_f).unwrap();
    let bound = 2.0 * 3f64.sqrt() * 0.5f64.powi(7) / 0.5;
    ensure(dh <= bound, || format!("d_H {dh} > {bound}"))?;
    let hv = convex_hull3(&v_points(&half), 0.0).map_err(|e| e.to_string())?;
    ensure(hv.vertices.len() == 12, || format!("hull(V(1/2)) has {} vertices", hv.vertices.len()))?;
    ensure(same_point_set(&hv.vertices, &vprime, 0.0), || "hull(V(1/2)) vertices differ from V'(1/2)".into())?;
    for c in [rat(1, 3), rat(1, 2), rat(2, 3)] {
        let one = Rational::one();
        let pp = one.clone() / (one.clone() - c.clone());
        let m = one.clone() / (one.clone() + c.clone());
        let v = |x: &Rational, y: &Rational, z: &Rational| Vec3::new(x.clone(), y.clone(), z.clone());
        let (np, nm) = (-pp.clone(), -m.clone());
        let first = [v(&pp, &nm, &pp), v(&m, &np, &pp), v(&pp, &np, &m)];
        let second = [v(&np, &pp, &m), v(&np, &nm, &np), v(&m, &pp, &np)];
        let vp = v_prime_points(&c);
        ensure(first.iter().chain(&second).all(|x| vp.contains(x)), || format!("witness points not in V'({c})"))?;
        let third = rat(1, 3);
        let d1 = (first[0].clone() + first[1].clone() + first[2].clone()).scale(&third);
        let d2 = (second[0].clone() + second[1].clone() + second[2].clone()).scale(&third);
        let a1 = d1.scale(&m) + d2.scale(&(c.clone() * m.clone()));
        ensure(m.clone() + c.clone() * m.clone() == one, || "weights do not sum to 1".into())?;
        ensure(a1 == a_points(&c)[0], || format!("identity fails at c={c}"))?;
        let (w1, w2, combo) = interior_witness(&c);
        ensure(w1 == d1 && w2 == d2 && combo == a1, || format!("library witness differs at c={c}"))?;
    }
    Ok(format!("d_H = {dh:.4} <= {bound:.4}, |hull V(1/2)| = 12, identity exact at c = 1/3, 1/2, 2/3"))
}

fn criterion_4() -> Check {
    let mut worst_refuted = f64::INFINITY;
    for name in ["E", "z90"] {
        let p = frt(rat(1, 2), name);
        for q in tetrahedral_group() {
            let r = symmetry_check(&p, &q.to_mat(), 6).map_err(|e| e.to_string())?;
            ensure(r.verdict == SymmetryVerdict::ExactEquality, || format!("{q} not an exact symmetry of P={name}"))?;
        }
        let threshold = 2.0 * cell_diameter(0.5, 6);
        for q in hexahedral_coset() {
            let r = symmetry_check(&p, &q.to_mat(), 6).map_err(|e| e.to_string())?;
            ensure(r.verdict == SymmetryVerdict::Refuted && r.hausdorff > threshold, || {
                format!("{q} not refuted for P={name}: d_H {}", r.hausdorff)
            })?;
            worst_refuted = worst_refuted.min(r.hausdorff);
        }
    }
    Ok(format!("12 exact symmetries, 12 refuted (min d_H {worst_refuted:.3} > {:.3})", 2.0 * cell_diameter(0.5, 6)))
}

fn criterion_5() -> Check {
    let t = separation_threshold();
    ensure(separation_margin(&t) == Q23::zero(), || "exact margin at √6−2 is not zero".into())?;
    let tf = Scalar::to_f64(&t);
    let mf = separation_margin(&tf);
    ensure(mf.abs() <= 1e-12, || format!("float margin {mf}"))?;
    let below = separation_check(&(tf - 1e-3)).unwrap();
    let above = separation_check(&(tf + 1e-3)).unwrap();
    ensure(below.disjoint && below.margin > 0.0 && !above.disjoint && above.margin < 0.0, || "no sign flip".into())?;
    for g in [
        hata_graph(&frt(rat(3, 10), "E"), &SearchLimits::default()),
        hata_graph(&FrtParams::from_rotation(0.3, &named("E")).unwrap(), &SearchLimits::default()),
    ] {
        let g = g.map_err(|e| e.to_string())?;
        let by_balls = g.pairs.iter().all(|r| {
            matches!(&r.verdict, PairVerdict::CertifiedDisjoint { evidence: DisjointEvidence::Separation { .. } })
        });
        ensure(by_balls && g.verdict == Connectedness::Disconnected, || "c = 0.3 not all-disjoint by separation".into())?;
    }
    Ok(format!("margin(√6−2) = 0, float {mf:e}, flip at ±1e-3, c = 0.3 all disjoint"))
}

fn criterion_6() -> Check {
    for c in [rat(1, 2), rat(3, 5)] {
        for name in ["E", "z90"] {
            let p = frt(c.clone(), name);
            let r = certificate_search(&p, (1, 3), &SearchLimits::default()).map_err(|e| e.to_string())?;
            let cert = r.verdict.certificate().ok_or_else(|| format!("no (1,3) certificate at c={c}, P={name}"))?;
            let v = verify_certificate(&p, &cert.first, &cert.second).unwrap();
            ensure(v.valid, || format!("(1,3) certificate invalid at c={c}, P={name}"))?;
            let g = hata_graph(&p, &SearchLimits::default()).map_err(|e| e.to_string())?;
            ensure(g.fast_paths.contains(&FastPath::AxisQuarterTurn), || "axis fast path not taken".into())?;
            for (i, j) in [(1, 4), (2, 4), (2, 3)] {
                let rep = g.pair(i, j);
                let cert = rep.verdict.certificate().ok_or_else(|| format!("({i},{j}) not propagated"))?;
                ensure(rep.nodes == 0, || format!("({i},{j}) was searched, not propagated"))?;
                let v = verify_certificate(&p, &cert.first, &cert.second).unwrap();
                ensure(v.valid, || format!("propagated ({i},{j}) certificate invalid at c={c}, P={name}"))?;
            }
            ensure(g.verdict == Connectedness::Connected, || format!("verdict {:?}", g.verdict))?;
        }
    }
    let p = frt(rat(1, 2), "E");
    let r = certificate_search(&p, (1, 3), &SearchLimits::default()).unwrap();
    let cert = r.verdict.certificate().unwrap();
    ensure(cert.first.to_string() == "1|3" && cert.second.to_string() == "3|1", || {
        format!("E certificate is {} ~ {}", cert.first, cert.second)
    })?;
    let (pt, _) = eval_address(&p, &cert.first).unwrap();
    ensure(pt == Vec3::from_ints([0, -2, 0]), || format!("edge midpoint is {pt:?}"))?;
    Ok("(1,3) certified and propagated for c in {1/2, 3/5}, P in {E, z90}; p(1 3̄) = p(3 1̄) = (0,-2,0)".into())
}

fn criterion_7() -> Check {
    let half = rat(1, 2);
    let cloud = |name: &str| generate_cloud(&frt(half.clone(), name), 6).unwrap();
    let (t1, t2) = (cloud("E"), cloud("diag120:v1"));
    let (o1, o2) = (cloud("z90"), cloud("z270"));
    ensure(same_point_set(&t1.points, &t2.points, 0.0), || "T clouds differ".into())?;
    ensure(same_point_set(&o1.points, &o2.points, 0.0), || "O clouds differ".into())?;
    ensure(!same_point_set(&t1.points, &o1.points, 0.0), || "T and O clouds coincide".into())?;
    let target = Vec3::from_ints([2, -2, 2]);
    let (fixed, _) = eval_address(&frt(half, "E"), &"|1".parse().unwrap()).unwrap();
    ensure(fixed == target, || "v1/(1-c) is not the fixed point of f1".into())?;
    let cd = cell_diameter(0.5, 6);
    let (_, dt) = t1.nearest(&target.to_f64());
    let (_, dobj) = o1.nearest(&target.to_f64());
    ensure(dt <= cd, || format!("T cloud is {dt} from v1/(1-c)"))?;
    ensure(dobj > cd, || format!("O cloud is only {dobj} from v1/(1-c)"))?;
    Ok(format!("T and O classes exact; dist(v1/(1-c), T) = {dt:.4}, dist(v1/(1-c), O) = {dobj:.4} > {cd:.4}"))
}

/// Rotation of the unit quaternion proportional to `(a, b, c, d)`.
fn quaternion_rotation(a: i64, b: i64, c: i64, d: i64) -> Mat3<Rational> {
    let n = a * a + b * b + c * c + d * d;
    let m = [
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ];
    Mat3::from_fn(|i, j| rat(m[i][j], n))
}

fn criterion_8() -> Check {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..5 {
        let c = rat(rng.gen_range(1..97), 97);
        let q: [i64; 4] = loop {
            let q = [(); 4].map(|_| rng.gen_range(-3..=3));
            if q.iter().any(|&x| x != 0) {
                break q;
            }
        };
        let p = FrtParams::new(c.clone(), quaternion_rotation(q[0], q[1], q[2], q[3])).map_err(|e| e.to_string())?;
        let ball = bounding_ball(&p);
        for depth in 1..=5 {
            let cl = generate_cloud(&p, depth).unwrap();
            for i in 1..=4u8 {
                for j in 1..=4u8 {
                    let shift = p.vertex(j).clone() - p.vertex(i).clone();
                    let moved: Vec<_> = cl.piece(i).iter().map(|x| x.clone() + shift.clone()).collect();
                    ensure(same_point_set(&moved, cl.piece(j), 0.0), || {
                        format!("translation A{i}->A{j} fails at c={c}, q={q:?}, depth {depth}")
                    })?;
                }
            }
            ensure(cl.points.iter().all(|x| ball.contains(x, 0.0)), || format!("point outside ball at c={c}"))?;
        }
    }
    let d2 = similarity_dimension(0.5).unwrap();
    let d1 = similarity_dimension(0.25).unwrap();
    ensure((d2 - 2.0).abs() < 1e-12 && (d1 - 1.0).abs() < 1e-12, || format!("dimensions {d2}, {d1}"))?;
    for c in [rat(2, 5), rat(1, 2), rat(3, 4)] {
        for q in hexahedral_group() {
            let p = FrtParams::from_rotation(c.clone(), q).unwrap();
            let covers: Vec<_> = (1..=5).map(|n| exact_cover(&p, n).unwrap()).collect();
            ensure(covers.windows(2).all(|w| cover_is_nested(&w[0], &w[1])), || format!("cover not nested for {q}"))?;
        }
    }
    Ok("translation, ball containment, dimensions and nesting hold".into())
}

fn main() {
    let suite_start = Instant::now();
    let criteria: [(&str, fn() -> Check); 8] = [
        ("phase diagram", criterion_1),
        ("pi/3 rotation certificate and graph", criterion_2),
        ("hulls", criterion_3),
        ("symmetry group", criterion_4),
        ("separation bound", criterion_5),
        ("connectedness via the axis reduction", criterion_6),
        ("two attractors", criterion_7),
        ("invariant suites", criterion_8),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS [{}] {name}: {detail} ({elapsed:.1?})", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{}] {name}: {detail} ({elapsed:.1?})", k + 1);
            }
        }
    }
    let total = suite_start.elapsed();
    if total <= SUITE_BUDGET {
        println!("PASS [runtime] full suite in {total:.1?} (budget {SUITE_BUDGET:?})");
    } else {
        failed += 1;
        println!("FAIL [runtime] full suite in {total:.1?} (budget {SUITE_BUDGET:?})");
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run with `cargo test -p lpsnake-core --test acceptance -- --nocapture` to see
//! the report.

use lpsnake::counting::count_matchings;
use lpsnake::fixtures::{
    condition1_context, condition4_context, ctx0, load_bearing_cases, path_chain,
};
use lpsnake::gen::{all_maximal_nested, connected_subsets, random_context, unlabeled_trees};
use lpsnake::matcher::{
    chi, enumerate_admissible, enumerate_with, is_admissible, weight, Condition, ConditionMask,
};
use lpsnake::oracle::{verify_with, Oracle};
use lpsnake::snake::{
    build_singleton, build_snake_graph, positivity_in_cluster, weights_in_cluster, Weight,
};
use lpsnake::symbolic::y;
use lpsnake::tpath::matching_to_tpath;
use lpsnake::typea::{
    build_ms_snake_graph, is_zigzag, path_lp_bridge, perfect_matchings, random_triangulation,
    Polygon, Triangulation,
};
use lpsnake::{rf_equal, ClusterContext, RationalExpr, Vertex, VertexSet};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

const EX: [Vertex; 6] = [0, 3, 4, 5, 6, 8];
const SEED: u64 = 2024;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, format!("took {t:?}, limit {limit:?}"))
}

fn prod(factors: &[&[Vertex]]) -> RationalExpr {
    factors
        .iter()
        .fold(RationalExpr::one(), |acc, c| acc.mul(&y(c)))
}

/// Random contexts of the criterion-4 sweep, each with its weakly rooted sets.
type Sweep = Vec<(ClusterContext, Vec<VertexSet>)>;

fn sweep_cases() -> Sweep {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    (0..240)
        .map(|round| {
            let ctx = random_context(2 + round % 6, &mut rng);
            let sets = connected_subsets(ctx.tree())
                .into_iter()
                .filter(|s| ctx.is_weakly_rooted(s))
                .collect();
            (ctx, sets)
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ctx = ctx0();
    let g = build_snake_graph(&ctx, &EX).map_err(|e| e.to_string())?;
    let ms = enumerate_admissible(&g);
    ensure(ms.len() == 7, format!("{} matchings", ms.len()))?;
    let expected = [
        prod(&[&[1, 2, 3, 4, 5, 6, 7, 8, 0], &[2], &[0], &[0]]),
        prod(&[&[8], &[4, 5, 6, 7, 0], &[0], &[0]]),
        prod(&[
            &[8],
            &[4, 5, 6, 7, 0],
            &[4, 5, 6, 7, 0],
            &[5, 6, 0],
            &[1, 2],
        ]),
        prod(&[&[8], &[4, 5, 6, 7, 0], &[0], &[0], &[1, 2]]),
        prod(&[&[2], &[5, 6, 7, 0], &[8], &[0], &[0], &[1, 2]]),
        prod(&[
            &[1, 2, 3, 4, 5, 6, 7, 8, 0],
            &[2],
            &[4, 5, 6, 7, 0],
            &[5, 6, 0],
        ]),
        prod(&[&[8], &[4, 5, 6, 7, 0], &[4, 5, 6, 7, 0], &[5, 6, 0]]),
    ];
    let mut want: Vec<String> = expected.iter().map(|e| e.to_string()).collect();
    let mut got: Vec<String> = ms
        .iter()
        .map(|m| weight(&g, m).to_expr().to_string())
        .collect();
    want.sort();
    got.sort();
    ensure(got == want, format!("weights {got:?}"))?;
    let ell = prod(&[&[2], &[1, 2], &[5, 6, 7, 0], &[4, 5, 6, 7, 0]]);
    ensure(g.ell().to_expr() == ell, format!("ell = {}", g.ell()))?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "7 matchings, weights and ell exact, {:?}",
        start.elapsed()
    ))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let ctx = ctx0();
    let det = count_matchings(&ctx, &EX).map_err(|e| e.to_string())?;
    ensure(det == BigInt::from(7), format!("det = {det}"))?;
    let mut census: Vec<(ClusterContext, VertexSet)> = Vec::new();
    for n in 1..=6 {
        for tree in unlabeled_trees(n) {
            for coll in all_maximal_nested(&tree) {
                let ctx = ClusterContext::new(tree.clone(), coll).map_err(|e| e.to_string())?;
                for s in connected_subsets(ctx.tree()) {
                    if ctx.is_weakly_rooted(&s) {
                        census.push((ctx.clone(), s));
                    }
                }
            }
        }
    }
    let total = census.len();
    const CAP: usize = 10_000;
    if total > CAP {
        census.shuffle(&mut ChaCha8Rng::seed_from_u64(SEED));
        census.truncate(CAP);
    }
    for (ctx, s) in &census {
        let g = build_snake_graph(ctx, s).map_err(|e| e.to_string())?;
        let n = enumerate_admissible(&g).len();
        let d = count_matchings(ctx, s).map_err(|e| e.to_string())?;
        ensure(
            d == BigInt::from(n),
            format!(
                "tree {:?}, {:?}, S={s:?}: det {d}, enumeration {n}",
                ctx.tree().edges(),
                ctx.collection().sets()
            ),
        )?;
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "det=7; {} of {total} census cases agree, {:?}",
        census.len(),
        start.elapsed()
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let ctx = ctx0();
    let g = build_singleton(&ctx, 4).map_err(|e| e.to_string())?;
    let q = |a: RationalExpr, b: RationalExpr| a.div(&b).expect("nonzero");
    let formula = q(y(&[4, 5, 6, 7, 0]), y(&[5, 6, 7, 0]))
        .add(&q(prod(&[&[0], &[0]]), prod(&[&[5, 6, 7, 0], &[5, 6, 0]])))
        .add(&q(prod(&[&[6], &[6]]), prod(&[&[5, 6, 0], &[5, 6]])))
        .add(&q(y(&[6]), y(&[5, 6])));
    ensure(rf_equal(&chi(&g), &formula), format!("chi = {}", chi(&g)))?;
    let oracle = Oracle::new(&ctx);
    let yjm = oracle.y_jm(4, &[2]).map_err(|e| e.to_string())?;
    let y0 = oracle.y_set(&[0]).map_err(|e| e.to_string())?;
    let want = q(
        prod(&[&[4, 5, 6, 7, 0], &[5, 6, 0]]).add(&y0.mul(&y0)),
        y(&[5, 6, 7, 0]),
    );
    ensure(rf_equal(&yjm, &want), format!("y_jm(4,(2)) = {yjm}"))?;
    let singleton = oracle.y_singleton(4).map_err(|e| e.to_string())?;
    let reduced = oracle.to_cluster(&chi(&g)).map_err(|e| e.to_string())?;
    ensure(rf_equal(&reduced, &singleton), "chi(G_4) differs from Y_4")?;
    within(start, Duration::from_secs(1))?;
    Ok(format!(
        "chi(G_4) and y_jm(4,(2)) exact, {:?}",
        start.elapsed()
    ))
}

fn criterion_4(cases: &Sweep) -> Outcome {
    let mut sets = 0;
    for (ctx, family) in cases {
        ensure(ctx.tree().vertices().len() <= 7, "tree too large")?;
        let oracle = Oracle::new(ctx);
        for s in family {
            let r = verify_with(&oracle, s).map_err(|e| format!("S={s:?}: {e}"))?;
            ensure(
                r.ok,
                format!(
                    "tree {:?}, {:?}, S={s:?}: {} vs {}",
                    ctx.tree().edges(),
                    ctx.collection().sets(),
                    r.chi_reduced,
                    r.oracle
                ),
            )?;
            sets += 1;
        }
    }
    ensure(cases.len() >= 200, format!("only {} contexts", cases.len()))?;
    Ok(format!(
        "{sets} sets on {} contexts, zero mismatches",
        cases.len()
    ))
}

/// A random connected set grown from `start` inside `allowed`.
fn grow(
    ctx: &ClusterContext,
    start: Vertex,
    allowed: &dyn Fn(Vertex) -> bool,
    rng: &mut ChaCha8Rng,
) -> VertexSet {
    let target = rng.gen_range(1..=ctx.tree().vertices().len());
    let mut set = vec![start];
    while set.len() < target {
        let frontier: Vec<Vertex> = set
            .iter()
            .flat_map(|&x| ctx.tree().neighbors(x).iter().copied())
            .filter(|&x| allowed(x) && !set.contains(&x))
            .collect();
        match frontier.choose(rng) {
            Some(&x) => set.push(x),
            None => break,
        }
    }
    set.sort_unstable();
    set
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut instances = 0;
    while instances < 600 {
        let ctx = random_context(rng.gen_range(2..=8), &mut rng);
        let oracle = Oracle::new(&ctx);
        let y_or_one = |set: &[Vertex]| -> Result<RationalExpr, String> {
            if set.is_empty() {
                Ok(RationalExpr::one())
            } else {
                oracle.y_set(set).map_err(|e| e.to_string())
            }
        };
        for _ in 0..5 {
            let &(w, v) = ctx
                .tree()
                .edges()
                .choose(&mut rng)
                .expect("at least one edge");
            let (w, v) = if rng.gen_bool(0.5) { (w, v) } else { (v, w) };
            let s = grow(&ctx, w, &|x| x != v, &mut rng);
            let t = grow(&ctx, v, &|x| !s.contains(&x), &mut rng);
            let mut union = [s.clone(), t.clone()].concat();
            union.sort_unstable();
            let s_minus: Vec<Vertex> = s.iter().copied().filter(|&x| x != w).collect();
            let t_minus: Vec<Vertex> = t.iter().copied().filter(|&x| x != v).collect();
            let lhs = y_or_one(&s)?.mul(&y_or_one(&t)?);
            let rhs = y_or_one(&union)?.add(&y_or_one(&s_minus)?.mul(&y_or_one(&t_minus)?));
            ensure(
                rf_equal(&lhs, &rhs),
                format!(
                    "tree {:?}, {:?}, S={s:?}, T={t:?}, w={w}, v={v}",
                    ctx.tree().edges(),
                    ctx.collection().sets()
                ),
            )?;
            instances += 1;
        }
    }
    Ok(format!("{instances} exchange instances hold"))
}

fn criterion_6() -> Outcome {
    let mut zigzags = 0;
    for n in 4..=13 {
        let arcs: Vec<(usize, usize)> = (3..n).map(|k| (1, k)).collect();
        let t = Triangulation::new(Polygon::new(n).map_err(|e| e.to_string())?, &arcs)
            .map_err(|e| e.to_string())?;
        let g = build_ms_snake_graph(&t, (2, n)).map_err(|e| e.to_string())?;
        ensure(is_zigzag(&g), format!("fan {n} is not a zigzag"))?;
        let (tiles, count) = (g.tiles.len(), perfect_matchings(&g).len());
        ensure(
            count == tiles + 1,
            format!("fan zigzag with {tiles} tiles has {count} matchings"),
        )?;
        zigzags += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..300 {
        let n = rng.gen_range(5..=13);
        let t = random_triangulation(n, &mut rng);
        let a = rng.gen_range(1..=n);
        let b = rng.gen_range(1..=n);
        let Ok(g) = build_ms_snake_graph(&t, (a.min(b), a.max(b))) else {
            continue;
        };
        if g.tiles.len() <= 10 && is_zigzag(&g) {
            let count = perfect_matchings(&g).len();
            ensure(
                count == g.tiles.len() + 1,
                format!("zigzag with {} tiles has {count}", g.tiles.len()),
            )?;
            zigzags += 1;
        }
    }
    let octagon = Triangulation::new(
        Polygon::new(8).map_err(|e| e.to_string())?,
        &[(1, 7), (2, 7), (3, 7), (4, 7), (4, 6)],
    )
    .map_err(|e| e.to_string())?;
    let g = build_ms_snake_graph(&octagon, (5, 8)).map_err(|e| e.to_string())?;
    let count = perfect_matchings(&g).len();
    ensure(
        g.tiles.len() == 5 && count == 9,
        format!("octagon: {} tiles, {count} matchings", g.tiles.len()),
    )?;
    let mut compared = 0;
    let mut paths = 0;
    for n in 2..=6 {
        let tree = path_chain(n).tree().clone();
        for coll in all_maximal_nested(&tree) {
            let ctx = ClusterContext::new(tree.clone(), coll).map_err(|e| e.to_string())?;
            let bridge = path_lp_bridge(&ctx).map_err(|e| e.to_string())?;
            let oracle = Oracle::new(&ctx);
            paths += 1;
            let order = &bridge.order;
            for i in 0..order.len() {
                for j in i + 2..order.len() {
                    let s = bridge
                        .set_for(order[i], order[j])
                        .map_err(|e| e.to_string())?;
                    if !ctx.is_weakly_rooted(&s) || ctx.is_member(&s) {
                        continue;
                    }
                    let via_polygon = bridge
                        .expand(order[i], order[j])
                        .map_err(|e| e.to_string())?;
                    let g = build_snake_graph(&ctx, &s).map_err(|e| e.to_string())?;
                    let via_engine = oracle.to_cluster(&chi(&g)).map_err(|e| e.to_string())?;
                    ensure(
                        rf_equal(&via_polygon, &via_engine),
                        format!("path {n}, {:?}, S={s:?}", ctx.collection().sets()),
                    )?;
                    compared += 1;
                }
            }
        }
    }
    Ok(format!(
        "{zigzags} zigzags have tiles+1 matchings; octagon 5 tiles, 9 matchings; {compared} bridge sets on {paths} path contexts agree"
    ))
}

fn criterion_7(cases: &Sweep) -> Outcome {
    let (mut in_cluster, mut laurent, mut total) = (0, 0, 0);
    for (ctx, s) in cases
        .iter()
        .flat_map(|(c, f)| f.iter().map(move |s| (c, s)))
    {
        total += 1;
        let g = build_snake_graph(ctx, s).map_err(|e| e.to_string())?;
        let predicted = positivity_in_cluster(ctx, s).map_err(|e| e.to_string())?;
        let actual = weights_in_cluster(ctx, &g);
        ensure(
            predicted == actual,
            format!("S={s:?}: classifier {predicted}, weights {actual}"),
        )?;
        in_cluster += usize::from(actual);
        let reduced = Oracle::new(ctx)
            .to_cluster(&chi(&g))
            .map_err(|e| e.to_string())?;
        laurent += usize::from(reduced.is_laurent());
        ensure(
            reduced.has_positive_coefficients(),
            format!("S={s:?}: {reduced}"),
        )?;
    }
    Ok(format!(
        "classifier exact on {total} sets ({in_cluster} in-cluster); Laurent {laurent}/{total}; all coefficients positive"
    ))
}

fn criterion_8() -> Outcome {
    let lit = ConditionMask::LITERAL;
    let configurations: [(&str, ClusterContext, Vec<Vertex>, Condition); 3] = [
        (
            "condition 1 on G_25",
            condition1_context(),
            vec![2, 5],
            Condition::One,
        ),
        (
            "condition 3 on G_345680",
            ctx0(),
            EX.to_vec(),
            Condition::Three,
        ),
        (
            "condition 4 (item 11) on G_0",
            condition4_context(),
            vec![0],
            Condition::Four,
        ),
    ];
    for (name, ctx, s, c) in &configurations {
        let g = build_snake_graph(ctx, s).map_err(|e| e.to_string())?;
        let base = enumerate_with(&g, lit);
        let only_c: Vec<_> = enumerate_with(&g, lit.minus(*c))
            .into_iter()
            .filter(|m| !base.contains(m))
            .collect();
        ensure(
            !only_c.is_empty(),
            format!("{name}: no configuration found"),
        )?;
        for m in &only_c {
            let report = is_admissible(&g, &m.edges).map_err(|e| e.to_string())?;
            let tag = report.first_violation.map(|v| v.condition);
            ensure(
                tag == Some(*c),
                format!("{name}: {:?} tagged {tag:?}", m.edges),
            )?;
        }
        if *c == Condition::Three {
            let i4 = Weight::Y(vec![0, 4, 5, 6, 7]);
            let i7 = Weight::Y(vec![0, 5, 6, 7]);
            let uses = |m: &lpsnake::matcher::Matching, w: &Weight| {
                m.edges.iter().any(|&e| &g.edges[e].weight == w)
            };
            ensure(
                only_c.iter().all(|m| uses(m, &i4) && uses(m, &i7)),
                "condition 3 configuration lacks Y_I4, Y_I7",
            )?;
        }
    }
    let mut seen = Vec::new();
    for (c, ctx, s, mask, with, without) in load_bearing_cases() {
        let g = build_snake_graph(&ctx, &s).map_err(|e| e.to_string())?;
        let a = enumerate_with(&g, mask).len();
        let b = enumerate_with(&g, mask.minus(c)).len();
        ensure(
            a == with && b == without && a != b,
            format!("{c} on {s:?}: {a} vs {b}"),
        )?;
        seen.push(c);
    }
    for c in [
        Condition::One,
        Condition::Two,
        Condition::Three,
        Condition::Four,
        Condition::Seam,
    ] {
        ensure(
            seen.contains(&c),
            format!("{c} has no stored counterexample"),
        )?;
    }
    Ok("tags 1, 3, 4 on the three configurations; every check changes a stored count".into())
}

fn criterion_9(cases: &Sweep) -> Outcome {
    let (mut paths, mut total) = (0, 0);
    for (ctx, s) in cases
        .iter()
        .flat_map(|(c, f)| f.iter().map(move |s| (c, s)))
    {
        total += 1;
        let oracle = Oracle::new(ctx);
        let g = build_snake_graph(ctx, s).map_err(|e| e.to_string())?;
        let mut sum = RationalExpr::zero();
        for m in enumerate_admissible(&g) {
            let alpha = matching_to_tpath(&g, &m).map_err(|e| e.to_string())?;
            sum = sum.add(&alpha.weight());
            paths += 1;
        }
        let reduced = oracle.to_cluster(&sum).map_err(|e| e.to_string())?;
        let want = oracle.y_set(s).map_err(|e| e.to_string())?;
        ensure(
            rf_equal(&reduced, &want),
            format!("S={s:?}: {reduced} vs {want}"),
        )?;
    }
    Ok(format!("{paths} T-paths over {total} sets sum to Y_S"))
}

fn run(n: usize, f: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into()))
    });
    match outcome {
        Ok(msg) => {
            println!("criterion {n}: PASS ({msg})");
            true
        }
        Err(msg) => {
            println!("criterion {n}: FAIL ({msg})");
            false
        }
    }
}

#[test]
fn acceptance() {
    let cases = sweep_cases();
    let results = [
        run(1, criterion_1),
        run(2, criterion_2),
        run(3, criterion_3),
        run(4, || criterion_4(&cases)),
        run(5, criterion_5),
        run(6, criterion_6),
        run(7, || criterion_7(&cases)),
        run(8, criterion_8),
        run(9, || criterion_9(&cases)),
    ];
    let failed: Vec<usize> = (1..=9).filter(|&k| !results[k - 1]).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

//! Property tests over random contexts and triangulations.

use lpsnake::counting::{bareiss_determinant, count_matrix};
use lpsnake::gen::{connected_subsets, random_context};
use lpsnake::matcher::enumerate_admissible;
use lpsnake::oracle::Oracle;
use lpsnake::snake::{
    build_singleton, build_snake_graph, glue, glue_order, positivity_in_cluster, trim, EdgeKind,
};
use lpsnake::typea::{
    build_ms_snake_graph, path_lp_bridge, perfect_matchings, random_triangulation,
};
use lpsnake::{ClusterContext, Monomial, RationalExpr, Vertex};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn context_from(seed: u64, n: usize) -> ClusterContext {
    random_context(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn members_below(ctx: &ClusterContext, v: Vertex) -> Vec<Vertex> {
    ctx.tree()
        .vertices()
        .iter()
        .copied()
        .filter(|&u| ctx.less(u, v))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn collections_have_one_member_per_vertex(seed in any::<u64>(), n in 1usize..=10) {
        let ctx = context_from(seed, n);
        prop_assert_eq!(ctx.collection().sets().len(), n);
        let mut peaks: Vec<Vertex> = ctx.collection().sets().iter().map(|s| ctx.m_of_member(s).unwrap()).collect();
        peaks.sort_unstable();
        prop_assert_eq!(&peaks[..], ctx.tree().vertices());
        for &v in ctx.tree().vertices() {
            prop_assert_eq!(ctx.m_of_member(ctx.i_of(v)), Some(v));
        }
    }

    #[test]
    fn order_is_strict_inclusion(seed in any::<u64>(), n in 2usize..=10) {
        let ctx = context_from(seed, n);
        for &v in ctx.tree().vertices() {
            for u in members_below(&ctx, v) {
                prop_assert!(lpsnake::cluster::vset::is_proper_subset(ctx.i_of(u), ctx.i_of(v)));
            }
        }
    }

    #[test]
    fn one_diagonal_per_incompatible_member(seed in any::<u64>(), n in 2usize..=7) {
        let ctx = context_from(seed, n);
        for s in connected_subsets(ctx.tree()) {
            if !ctx.is_weakly_rooted(&s) {
                continue;
            }
            let g = build_snake_graph(&ctx, &s).unwrap();
            let mut labels = g.diagonal_labels();
            labels.sort();
            let mut want = ctx.incompatible_members(&s);
            want.sort();
            prop_assert_eq!(labels, want, "S={:?}", s);
        }
    }

    #[test]
    fn singleton_valence_census(seed in any::<u64>(), n in 2usize..=8) {
        let ctx = context_from(seed, n);
        let ext = ctx.extended();
        for &v in ctx.tree().vertices() {
            if ctx.is_member(&[v]) {
                continue;
            }
            let bd = ctx.branch(v);
            let g = build_singleton(&ctx, v).unwrap();
            let nd = g.node_diagonals();
            let deg = |x: Vertex| ext.neighbors(x).len() as u32;
            for node in &g.nodes {
                let (a, b) = (node.valence.a, node.valence.b);
                if node.is_v_fix {
                    prop_assert_eq!((a, b), (bd.r as u32 - 1, 0));
                } else if node.is_v_opt {
                    prop_assert_eq!((a, b), (1, bd.p() as u32 - 2));
                } else {
                    prop_assert_eq!(a, 1);
                    let x = node.label;
                    let on_peak_diagonal = (1..=bd.p()).any(|i| {
                        let br = bd.branch(i);
                        (1..br.c()).any(|j| br.peak(j) == x && nd[node.id].iter().any(|&d| g.diagonals[d].label == br.set(j + 1)))
                    });
                    let neighbor_below = (1..=bd.r).any(|i| bd.branch(i).neighbor == x);
                    prop_assert!(b == 0 || ((on_peak_diagonal || neighbor_below) && b == deg(x) - 2),
                        "v={} node {} labeled {} has {}", v, node.id, x, node.valence);
                    if on_peak_diagonal {
                        prop_assert_eq!(b, deg(x) - 2, "v={} node {}", v, node.id);
                    }
                }
            }
        }
    }

    #[test]
    fn internal_edges_on_the_same_diagonals_pair_up(seed in any::<u64>(), n in 2usize..=7) {
        let ctx = context_from(seed, n);
        for s in connected_subsets(ctx.tree()) {
            if !ctx.is_weakly_rooted(&s) {
                continue;
            }
            let g = build_snake_graph(&ctx, &s).unwrap();
            let nd = g.node_diagonals();
            let internal: Vec<usize> = g
                .edges
                .iter()
                .filter(|e| e.kind == EdgeKind::Internal)
                .filter(|e| e.endpoints.len() == 2 && e.endpoints.iter().all(|&x| !nd[x].is_empty()))
                .map(|e| e.id)
                .collect();
            let ms = enumerate_admissible(&g);
            for (k, &e1) in internal.iter().enumerate() {
                for &e2 in &internal[k + 1..] {
                    let d1 = g.edge_diagonals(e1);
                    if d1.len() != 2 || d1 != g.edge_diagonals(e2) {
                        continue;
                    }
                    for m in &ms {
                        prop_assert_eq!(m.contains(e1), m.contains(e2), "S={:?} edges {} {}", s, e1, e2);
                    }
                }
            }
        }
    }

    #[test]
    fn small_singletons_count_one_plus_chain_lengths(seed in any::<u64>(), n in 2usize..=8) {
        let ctx = context_from(seed, n);
        for &v in ctx.tree().vertices() {
            let bd = ctx.branch(v);
            if ctx.is_member(&[v]) || bd.r > 2 {
                continue;
            }
            let total: usize = 1 + (1..=bd.p()).map(|i| bd.branch(i).c()).sum::<usize>();
            let g = build_singleton(&ctx, v).unwrap();
            prop_assert_eq!(enumerate_admissible(&g).len(), total, "v={}", v);
        }
    }

    #[test]
    fn each_boundary_port_is_omitted_once(seed in any::<u64>(), n in 2usize..=8) {
        let ctx = context_from(seed, n);
        for &v in ctx.tree().vertices() {
            if ctx.is_member(&[v]) {
                continue;
            }
            let g = build_singleton(&ctx, v).unwrap();
            let ms = enumerate_admissible(&g);
            for &a in ctx.extended().neighbors(v) {
                let Some(e) = g.port(v, a) else { continue };
                prop_assert_eq!(ms.iter().filter(|m| !m.contains(e)).count(), 1, "v={} a={}", v, a);
            }
        }
    }

    #[test]
    fn cluster_expansions_have_square_free_denominators(seed in any::<u64>(), n in 2usize..=7) {
        let ctx = context_from(seed, n);
        let oracle = Oracle::new(&ctx);
        for s in connected_subsets(ctx.tree()) {
            if !ctx.is_weakly_rooted(&s) {
                continue;
            }
            let e = oracle.y_set(&s).unwrap();
            prop_assert!(e.is_laurent(), "S={:?}: {}", s, e);
            if !positivity_in_cluster(&ctx, &s).unwrap() {
                continue;
            }
            let ell = ctx
                .incompatible_members(&s)
                .iter()
                .fold(RationalExpr::one(), |acc, c| acc.mul(&RationalExpr::var(c)));
            let cleared = e.numerator().mul(ell.numerator()).div_exact(e.denominator());
            prop_assert!(cleared.is_some(), "S={:?}: {}", s, e);
        }
    }

    #[test]
    fn path_graphs_match_the_polygon_snake_graph(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = loop {
            let c = random_context(n, &mut rng);
            if c.tree().is_path_graph() {
                break c;
            }
        };
        let bridge = path_lp_bridge(&ctx).unwrap();
        let order = &bridge.order;
        for i in 0..order.len() {
            for j in i + 2..order.len() {
                let s = bridge.set_for(order[i], order[j]).unwrap();
                if !ctx.is_weakly_rooted(&s) || ctx.is_member(&s) {
                    continue;
                }
                let gamma = bridge.gamma(order[i], order[j]).unwrap();
                let planar = build_ms_snake_graph(&bridge.triangulation, gamma).unwrap();
                let mut polygon: Vec<String> = perfect_matchings(&planar)
                    .iter()
                    .map(|m| m.iter().fold(RationalExpr::one(), |acc, &e| acc.mul(&planar.edges[e].weight)).to_string())
                    .collect();
                let g = build_snake_graph(&ctx, &s).unwrap();
                let mut engine: Vec<String> = enumerate_admissible(&g)
                    .iter()
                    .map(|m| lpsnake::matcher::weight(&g, m).to_expr().to_string())
                    .collect();
                polygon.sort();
                engine.sort();
                prop_assert_eq!(polygon, engine, "S={:?}", s);
            }
        }
    }

    #[test]
    fn polygon_expansions_are_laurent_over_crossed_arcs(seed in any::<u64>(), n in 4usize..=11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_triangulation(n, &mut rng);
        for a in 1..=n {
            for b in a + 2..=n {
                if t.polygon().adjacent(a, b) || t.contains((a, b)) {
                    continue;
                }
                let e = lpsnake::typea::expand_arc(&t, (a, b)).unwrap();
                let crossed = lpsnake::typea::crossing_sequence(&t, (a, b)).unwrap();
                let want = crossed.iter().fold(Monomial::one(), |acc, &c| acc.mul(&t.weight(c).unwrap().numerator().monomials()[0]));
                prop_assert_eq!(e.denominator().monomials(), vec![want], "arc ({}, {})", a, b);
                prop_assert!(e.has_positive_coefficients());
            }
        }
    }

    #[test]
    fn gluing_counts_follow_the_bijection(seed in any::<u64>(), n in 2usize..=7) {
        let ctx = context_from(seed, n);
        for s in connected_subsets(ctx.tree()) {
            if !ctx.is_weakly_rooted(&s) || ctx.is_member(&s) {
                continue;
            }
            let order = glue_order(&ctx, &ctx.rooted_portion(&s));
            let mut acc = trim(&ctx, &build_singleton(&ctx, order[0]).unwrap(), &s).unwrap();
            for (k, &w) in order.iter().enumerate().skip(1) {
                let u = *order[..k].iter().find(|&&u| ctx.tree().neighbors(w).contains(&u)).unwrap();
                let piece = trim(&ctx, &build_singleton(&ctx, w).unwrap(), &s).unwrap();
                let glued = glue(&acc, &piece, u, w).unwrap();
                let (ma, mb) = (enumerate_admissible(&acc), enumerate_admissible(&piece));
                let (ea, eb) = (acc.port(u, w).unwrap(), piece.port(w, u).unwrap());
                let ne_a = ma.iter().filter(|m| !m.contains(ea)).count();
                let ne_b = mb.iter().filter(|m| !m.contains(eb)).count();
                prop_assert_eq!(enumerate_admissible(&glued).len(), ma.len() * mb.len() - ne_a * ne_b, "S={:?} at {}", s, w);
                acc = glued;
            }
        }
    }

    #[test]
    fn count_matrices_expand_along_leaves(seed in any::<u64>(), n in 2usize..=8) {
        let ctx = context_from(seed, n);
        for s in connected_subsets(ctx.tree()) {
            if !ctx.is_weakly_rooted(&s) || ctx.is_member(&s) {
                continue;
            }
            let m = count_matrix(&ctx, &s).unwrap();
            let k = m.order.len();
            if k < 2 {
                continue;
            }
            let minor = |drop: &[usize]| -> BigInt {
                let keep: Vec<usize> = (0..k).filter(|i| !drop.contains(i)).collect();
                bareiss_determinant(
                    keep.iter().map(|&i| keep.iter().map(|&j| BigInt::from(m.entries[i][j])).collect()).collect(),
                )
            };
            let leaf = (0..k).find(|&i| (0..k).filter(|&j| j != i && m.entries[i][j] != 0).count() == 1).unwrap();
            let nb = (0..k).find(|&j| j != leaf && m.entries[leaf][j] != 0).unwrap();
            let f = BigInt::from(m.entries[leaf][leaf]);
            prop_assert_eq!(m.determinant(), f * minor(&[leaf]) - minor(&[leaf, nb]), "S={:?}", s);
        }
    }
}

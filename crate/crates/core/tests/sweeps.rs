//! Seeded sweeps over random and exhaustively enumerated contexts.

use lpsnake::counting::count_matchings;
use lpsnake::gen::{all_maximal_nested, connected_subsets, random_context, unlabeled_trees};
use lpsnake::matcher::{enumerate_admissible, is_admissible};
use lpsnake::oracle::{verify_with, Oracle};
use lpsnake::snake::build_snake_graph;
use lpsnake::tpath::{matching_to_tpath, structure_for, validate_against, ValidationOptions};
use lpsnake::{A1Rule, ClusterContext, ContextOptions};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

fn random_contexts(seed: u64, count: usize, max_n: usize) -> Vec<ClusterContext> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| random_context(2 + k % (max_n - 1), &mut rng))
        .collect()
}

#[test]
fn expansions_agree_under_both_neighbor_rules() {
    for rule in [A1Rule::LargestLabel, A1Rule::SmallestLabel] {
        let mut checked = 0;
        for base in random_contexts(7, 150, 7) {
            let ctx = ClusterContext::with_options(
                base.tree().clone(),
                base.collection().clone(),
                ContextOptions { a1_rule: rule },
            )
            .unwrap();
            let oracle = Oracle::new(&ctx);
            for s in connected_subsets(ctx.tree()) {
                if ctx.is_weakly_rooted(&s) {
                    let r = verify_with(&oracle, &s).unwrap();
                    assert!(
                        r.ok,
                        "{rule:?} {:?} {:?} S={s:?}",
                        ctx.tree().edges(),
                        ctx.collection().sets()
                    );
                    checked += 1;
                }
            }
        }
        assert!(checked > 1500);
    }
}

#[test]
fn determinant_census_up_to_seven_vertices() {
    let mut cases = 0;
    for n in 1..=7 {
        for tree in unlabeled_trees(n) {
            for coll in all_maximal_nested(&tree) {
                let ctx = ClusterContext::new(tree.clone(), coll).unwrap();
                for s in connected_subsets(ctx.tree()) {
                    if !ctx.is_weakly_rooted(&s) {
                        continue;
                    }
                    let g = build_snake_graph(&ctx, &s).unwrap();
                    let count = enumerate_admissible(&g).len();
                    assert_eq!(
                        count_matchings(&ctx, &s).unwrap(),
                        BigInt::from(count),
                        "{:?} {:?} S={s:?}",
                        ctx.tree().edges(),
                        ctx.collection().sets()
                    );
                    cases += 1;
                }
            }
        }
    }
    assert!(cases > 29_449);
}

#[test]
fn tpath_validity_tracks_admissibility_under_toggles() {
    let mut toggled = 0;
    for ctx in random_contexts(11, 60, 6) {
        for s in connected_subsets(ctx.tree()) {
            if !ctx.is_weakly_rooted(&s) {
                continue;
            }
            let g = build_snake_graph(&ctx, &s).unwrap();
            let ms = enumerate_admissible(&g);
            let mut images = BTreeSet::new();
            for m in &ms {
                let alpha = matching_to_tpath(&g, m).unwrap();
                assert!(
                    validate_against(&ctx, &g, &alpha, ValidationOptions::default()).valid,
                    "S={s:?} {:?}",
                    m.edges
                );
                images.insert(alpha.odd_sources());
                for e in 0..g.edges.len() {
                    let mut t = m.edges.clone();
                    match t.iter().position(|&x| x == e) {
                        Some(p) => {
                            t.remove(p);
                        }
                        None => t.push(e),
                    }
                    let admissible = is_admissible(&g, &t).unwrap().ok;
                    let valid = validate_against(
                        &ctx,
                        &g,
                        &structure_for(&g, &t),
                        ValidationOptions::default(),
                    )
                    .valid;
                    assert_eq!(admissible, valid, "S={s:?} edges {t:?}");
                    toggled += 1;
                }
            }
            assert_eq!(
                images.len(),
                ms.len(),
                "conversion is not injective for S={s:?}"
            );
        }
    }
    assert!(toggled > 5000);
}

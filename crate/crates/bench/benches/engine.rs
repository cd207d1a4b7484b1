use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lpsnake::counting::count_matchings;
use lpsnake::fixtures;
use lpsnake::gen::connected_subsets;
use lpsnake::matcher::{chi, enumerate_admissible};
use lpsnake::oracle::{verify_with, Oracle};
use lpsnake::snake::build_snake_graph;
use lpsnake::tpath::{matching_to_tpath, validate_against, ValidationOptions};
use lpsnake::typea::{expand_arc, polygon_count, FkConvention, Polygon, Triangulation};
use std::hint::black_box;

const EX: [u32; 6] = [3, 4, 5, 6, 8, 0];

fn worked_example(c: &mut Criterion) {
    let ctx = fixtures::ctx0();
    let g = build_snake_graph(&ctx, &EX).unwrap();
    let ms = enumerate_admissible(&g);
    c.bench_function("build snake graph", |b| {
        b.iter(|| build_snake_graph(&ctx, black_box(&EX)).unwrap())
    });
    c.bench_function("enumerate admissible", |b| {
        b.iter(|| enumerate_admissible(black_box(&g)))
    });
    c.bench_function("expansion", |b| b.iter(|| chi(black_box(&g))));
    c.bench_function("determinant count", |b| {
        b.iter(|| count_matchings(&ctx, black_box(&EX)).unwrap())
    });
    c.bench_function("oracle verify", |b| {
        b.iter(|| {
            let oracle = Oracle::new(&ctx);
            verify_with(&oracle, black_box(&EX)).unwrap()
        })
    });
    c.bench_function("tpath validation", |b| {
        b.iter(|| {
            for m in &ms {
                let alpha = matching_to_tpath(&g, m).unwrap();
                black_box(validate_against(
                    &ctx,
                    &g,
                    &alpha,
                    ValidationOptions::default(),
                ));
            }
        })
    });
}

fn path_chains(c: &mut Criterion) {
    let mut group = c.benchmark_group("path chain");
    for n in [4u32, 6, 8] {
        let ctx = fixtures::path_chain(n);
        let s = connected_subsets(ctx.tree())
            .into_iter()
            .filter(|s| ctx.is_weakly_rooted(s) && !ctx.is_member(s))
            .max_by_key(|s| s.len())
            .unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(n), &s, |b, s| {
            b.iter(|| {
                let g = build_snake_graph(&ctx, s).unwrap();
                enumerate_admissible(&g).len()
            })
        });
    }
    group.finish();
}

fn polygons(c: &mut Criterion) {
    let t = Triangulation::new(
        Polygon::new(8).unwrap(),
        &[(1, 7), (2, 7), (3, 7), (4, 7), (4, 6)],
    )
    .unwrap();
    c.bench_function("octagon expansion", |b| {
        b.iter(|| expand_arc(&t, black_box((5, 8))).unwrap())
    });
    c.bench_function("octagon continuant", |b| {
        b.iter(|| polygon_count(&t, black_box((5, 8)), FkConvention::Triangles).unwrap())
    });
}

criterion_group!(benches, worked_example, path_chains, polygons);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, Criterion};
use ekr_core::ekr::gl_spanning_gram;
use ekr_core::lp::{build_lp, solve_lp};
use ekr_core::search::{self, Budget};
use ekr_core::spectra::{canonical_weights, spectrum};
use ekr_core::{CharacterTable, Family, GroupContext, Tying};
use std::hint::black_box;

fn group_build(c: &mut Criterion) {
    c.bench_function("build GL(2,7)", |b| b.iter(|| GroupContext::build(Family::Gl, black_box(7)).unwrap()));
    c.bench_function("build AGL(2,4)", |b| b.iter(|| GroupContext::build(Family::Agl, black_box(4)).unwrap()));
}

fn characters(c: &mut Criterion) {
    let sl = GroupContext::build(Family::Sl, 7).unwrap();
    c.bench_function("central characters SL(2,7)", |b| b.iter(|| CharacterTable::from_central(&sl).unwrap()));
    let gl = GroupContext::build(Family::Gl, 7).unwrap();
    let table = CharacterTable::gl_explicit(&gl).unwrap();
    let w = canonical_weights(Family::Gl, 7).unwrap().to_vector(&gl).unwrap();
    c.bench_function("weighted spectrum GL(2,7)", |b| b.iter(|| spectrum(&gl, &table, &w).unwrap()));
}

fn lp(c: &mut Criterion) {
    let agl = GroupContext::build(Family::Agl, 3).unwrap();
    let table = CharacterTable::from_central(&agl).unwrap();
    c.bench_function("lp AGL(2,3)", |b| {
        b.iter(|| solve_lp(&build_lp(&agl, &table, Tying::InversePairs).unwrap()).unwrap())
    });
}

fn searches(c: &mut Criterion) {
    let pgl = GroupContext::build(Family::Pgl, 7).unwrap();
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("two-intersecting PGL(2,7)", |b| {
        b.iter(|| search::max_two_intersecting(&pgl, Budget::default()).unwrap())
    });
    let gl = GroupContext::build(Family::Gl, 3).unwrap();
    g.bench_function("coclique GL(2,3)", |b| b.iter(|| search::max_coclique(&gl, true, Budget::default()).unwrap()));
    g.finish();
}

fn gram(c: &mut Criterion) {
    let gl = GroupContext::build(Family::Gl, 4).unwrap();
    let mut g = c.benchmark_group("gram");
    g.sample_size(10);
    g.bench_function("spanning gram GL(2,4)", |b| b.iter(|| gl_spanning_gram(&gl).unwrap()));
    g.finish();
}

criterion_group!(benches, group_build, characters, lp, searches, gram);
criterion_main!(benches);

use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use plknot_core::analysis::{forcing_number, were_set, Mode};
use plknot_core::diagram::{alternating_resolution, pd_code};
use plknot_core::generators::{gen_star, gen_torus};
use plknot_core::invariants::{bracket_brute_force, bracket_of_pd};
use plknot_core::realizability::{build_constraints, check_feasibility, minimal_infeasible_core};
use plknot_core::Pseudodiagram;

fn feasibility(c: &mut Criterion) {
    let star = Arc::new(gen_star(5).unwrap());
    let torus = Arc::new(gen_torus(9, 2).unwrap());
    let bad = build_constraints(&alternating_resolution(Arc::clone(&star), true));
    let good = build_constraints(&alternating_resolution(Arc::clone(&torus), true));
    c.bench_function("feasibility/pentagram alternating", |b| b.iter(|| check_feasibility(black_box(&bad))));
    c.bench_function("feasibility/torus 9 alternating", |b| b.iter(|| check_feasibility(black_box(&good))));
    c.bench_function("core/pentagram alternating", |b| b.iter(|| minimal_infeasible_core(black_box(&bad))));
}

fn analysis(c: &mut Criterion) {
    let star = Pseudodiagram::unassigned(Arc::new(gen_star(5).unwrap()));
    let torus = Pseudodiagram::unassigned(Arc::new(gen_torus(7, 2).unwrap()));
    let mut g = c.benchmark_group("analysis");
    g.sample_size(10);
    g.bench_function("were_set pentagram pl", |b| b.iter(|| were_set(black_box(&star), Mode::Pl)));
    g.bench_function("were_set torus 7 pl", |b| b.iter(|| were_set(black_box(&torus), Mode::Pl)));
    g.bench_function("forcing_number pentagram", |b| b.iter(|| forcing_number(black_box(&star), None)));
    g.finish();
}

fn bracket(c: &mut Criterion) {
    let pd = pd_code(&alternating_resolution(Arc::new(gen_torus(9, 2).unwrap()), true)).unwrap();
    c.bench_function("bracket/torus 9 memoized", |b| b.iter(|| bracket_of_pd(black_box(&pd))));
    c.bench_function("bracket/torus 9 brute force", |b| b.iter(|| bracket_brute_force(black_box(&pd))));
}

criterion_group!(benches, feasibility, analysis, bracket);
criterion_main!(benches);

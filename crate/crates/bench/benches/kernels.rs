use criterion::{black_box, criterion_group, criterion_main, Criterion};
use koszul_core::arith::{PrimeField, DEFAULT_PRIMES};
use koszul_core::cobar::{cycle_cn, differential, is_boundary};
use koszul_core::hypergeom::{guess_recurrence, positivity_certificate, SequenceTable};
use koszul_core::linalg::rank_mod_p;
use koszul_core::operad_dims::build_consequence_matrix;
use koszul_core::series::{lagrange_invert, newton_invert, TruncatedSeries};
use koszul_core::trees::{nu, DEFAULT_BUDGET};

fn cobar(c: &mut Criterion) {
    let v = nu(4, DEFAULT_BUDGET).unwrap();
    c.bench_function("differential of nu, n=4", |b| {
        b.iter(|| differential(black_box(&v)))
    });
    let c3 = cycle_cn(3, DEFAULT_BUDGET).unwrap();
    c.bench_function("non-boundary solve, n=3", |b| {
        b.iter(|| is_boundary(black_box(&c3), DEFAULT_BUDGET).unwrap())
    });
}

fn ranks(c: &mut Criterion) {
    let m = build_consequence_matrix(8, 4, DEFAULT_BUDGET).unwrap();
    let field = PrimeField::new(DEFAULT_PRIMES[0]).unwrap();
    c.bench_function("rank mod p, n=8 weight 4", |b| {
        b.iter(|| rank_mod_p(black_box(&m.matrix), field))
    });
    c.bench_function("consequence matrix, n=8 weight 4", |b| {
        b.iter(|| build_consequence_matrix(8, black_box(4), DEFAULT_BUDGET).unwrap())
    });
}

fn series(c: &mut Criterion) {
    let f = TruncatedSeries::koszul_dual_trinomial(8, 350);
    let mut g = c.benchmark_group("inverse of t - t^8 + t^15 to t^350");
    g.sample_size(10);
    g.bench_function("lagrange", |b| {
        b.iter(|| lagrange_invert(black_box(&f)).unwrap())
    });
    g.bench_function("newton", |b| {
        b.iter(|| newton_invert(black_box(&f)).unwrap())
    });
    g.finish();
}

fn hypergeom(c: &mut Criterion) {
    let a = SequenceTable::a_closed(120);
    let mut g = c.benchmark_group("hypergeom");
    g.sample_size(10);
    g.bench_function("guess order 2 degree 20", |b| {
        b.iter(|| guess_recurrence(black_box(&a.values), 2, 20))
    });
    g.bench_function("certificate N=300", |b| {
        b.iter(|| positivity_certificate(black_box(300)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, cobar, ranks, series, hypergeom);
criterion_main!(benches);

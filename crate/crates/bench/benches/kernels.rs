//! Benchmarks for the three computational kernels: the exhaustive
//! sign-pattern search, the unimodularity product-equation search, and
//! Smith normal form over arbitrary-precision integers.

use criterion::{criterion_group, criterion_main, Criterion};

use bourdon::{diophantine, homology, snf, tess};

/// 10 geodesics, 512 sign patterns, no certificate: the search runs to
/// exhaustion every iteration.
fn bench_sign_search(c: &mut Criterion) {
    let build = tess::build_any(12, 3).unwrap();
    c.bench_function("sign_search_exhaust_512", |b| {
        b.iter(|| homology::find_sign_coeffs(&build.ts))
    });
}

fn bench_unimod(c: &mut Criterion) {
    c.bench_function("unimod_count_v21_k5", |b| {
        b.iter(|| diophantine::solve_unimod(21, 5, diophantine::SearchMode::Count, None))
    });
    c.bench_function("unimod_count_v33_k5", |b| {
        b.iter(|| diophantine::solve_unimod(33, 5, diophantine::SearchMode::Count, None))
    });
}

fn bench_snf(c: &mut Criterion) {
    let (ts, _) = tess::build_f_div4(5, 16).unwrap();
    let cc = homology::chain_complex(&ts);
    c.bench_function("smith_d2_40x16", |b| b.iter(|| snf::smith(&cc.d2)));
    c.bench_function("smith_d1_20x40", |b| b.iter(|| snf::smith(&cc.d1)));
}

criterion_group!(benches, bench_sign_search, bench_unimod, bench_snf);
criterion_main!(benches);

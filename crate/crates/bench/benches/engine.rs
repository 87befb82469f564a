use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use spectral_rumin::forms::MultiIndex;
use spectral_rumin::morphism::sample_constrained_map;
use spectral_rumin::numeric::{verify_pullback_identity, BumpForm};
use spectral_rumin::suites::morphism_instance;
use spectral_rumin::{compute_pages, ExteriorElement, SmoothMap, Tolerances};
use spectral_rumin_bench::polynomial_heisenberg;

fn pages(c: &mut Criterion) {
    let mut g = c.benchmark_group("compute_pages");
    for d in [0, 1, 2] {
        let fc = polynomial_heisenberg(d);
        g.bench_with_input(BenchmarkId::new("heisenberg_poly", d), &fc, |b, fc| {
            b.iter(|| compute_pages(black_box(fc), 6).unwrap())
        });
    }
    g.finish();
}

fn sampler(c: &mut Criterion) {
    let (source, duality) = morphism_instance();
    let mut seed = 0u64;
    c.bench_function("sample_constrained_map/heisenberg_poly_1", |b| {
        b.iter(|| {
            seed += 1;
            sample_constrained_map(black_box(&source), &duality, seed)
        })
    });
}

fn quadrature(c: &mut Criterion) {
    let f = SmoothMap::shear_lift();
    let omega = ExteriorElement::theta(3, &[0, 2]);
    let eta = BumpForm::standard(3, MultiIndex::EMPTY);
    let tol = Tolerances { grids: (16, 32), ..Tolerances::default() };
    c.bench_function("verify_pullback_identity/shear_16_32", |b| {
        b.iter(|| verify_pullback_identity(&f, black_box(&omega), &eta, &tol, false).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = pages, sampler, quadrature
}
criterion_main!(benches);

use bcdaha::exact::{RatFunc, Rational};
use bcdaha::functors::{admissible_mus, build_daha, build_ddaha, y_lambda};
use bcdaha::glmodules::{CatalogKind, CatalogModule, SymmetricPair};
use bcdaha::presentations::{relation_set, verify, Presentation};
use bcdaha::rootsys_dunkl::{monomial_domain, sample_params, DunklParams, LaurentRep};
use criterion::{criterion_group, criterion_main, Criterion};

fn dunkl_lusztig(c: &mut Criterion) {
    let params = sample_params(1, 1).remove(0);
    let rep = LaurentRep::new(2, params.clone()).unwrap();
    let rels = relation_set(Presentation::Lusztig, 2, &params.to_presentation_params());
    let domain = monomial_domain(2, 2);
    c.bench_function("Lusztig suite n=2 rational", |b| b.iter(|| verify(&rep, &rels, &domain).unwrap()));

    let sym = DunklParams {
        t: RatFunc::symbol("t"),
        k1: RatFunc::symbol("k1"),
        k2: RatFunc::symbol("k2"),
        k3: RatFunc::symbol("k3"),
    };
    let rep = LaurentRep::new(2, sym.clone()).unwrap();
    let rels = relation_set(Presentation::Lusztig, 2, &sym.to_presentation_params());
    let domain = monomial_domain(2, 1);
    let mut group = c.benchmark_group("symbolic");
    group.sample_size(10);
    group.bench_function("Lusztig suite n=2 symbolic", |b| b.iter(|| verify(&rep, &rels, &domain).unwrap()));
    group.finish();
}

fn functors(c: &mut Criterion) {
    let pair = SymmetricPair::new(1, 2).unwrap();
    let module = CatalogModule::<Rational>::new(CatalogKind::Vector, 3).unwrap();
    let mu = admissible_mus(&module, 2, pair).unwrap().remove(0);
    c.bench_function("build_daha V N=3 n=2", |b| b.iter(|| build_daha(&module, 2, pair, &mu).unwrap().verify().unwrap()));
    let (lambda, mu) = (Rational::new(1, 5).unwrap(), Rational::new(1, 3).unwrap());
    c.bench_function("y_lambda n=3", |b| b.iter(|| y_lambda(3, &lambda, &mu).unwrap().verify().unwrap()));
    let mut group = c.benchmark_group("ddaha");
    group.sample_size(10);
    let half = Rational::new(1, 2).unwrap();
    group.bench_function("build_ddaha n=1 d=2", |b| {
        b.iter(|| {
            let build = build_ddaha(1, 1, 1, 2, &half, 0).unwrap();
            build.verify_relations(&build.rep()).unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, dunkl_lusztig, functors);
criterion_main!(benches);

use bcdaha::exact::{RatFunc, Rational};
use bcdaha::linalg::{kernel, SparseVec};
use criterion::{black_box, criterion_group, criterion_main, Criterion};

fn rational_sum(c: &mut Criterion) {
    let terms: Vec<Rational> = (1..200).map(|k| Rational::new(k % 17 - 8, k).unwrap()).collect();
    c.bench_function("rational harmonic-like sum", |b| {
        b.iter(|| terms.iter().fold(Rational::zero(), |acc, t| acc + t.clone()))
    });
}

fn ratfunc_products(c: &mut Criterion) {
    let f: RatFunc = "(t + k1)/(t - 2*k2) + k3^2/(t + 1)".parse().unwrap();
    let g: RatFunc = "(k1*k2 - t)/(k3 + 1)".parse().unwrap();
    c.bench_function("ratfunc mul + add", |b| b.iter(|| black_box(&f).mul(black_box(&g)).add(&f)));
}

fn kernel_of_band_matrix(c: &mut Criterion) {
    let n = 60;
    let rows: Vec<SparseVec<usize, Rational>> = (0..n - 3)
        .map(|j| {
            let mut row = SparseVec::new();
            row.add_term(j, &Rational::integer(2));
            row.add_term((j + 1) % n, &Rational::new(-1, 3).unwrap());
            row.add_term((j + 7) % n, &Rational::new(5, (j as i64) + 1).unwrap());
            row
        })
        .collect();
    c.bench_function("kernel 57x60 banded", |b| b.iter(|| kernel(black_box(&rows), n)));
}

criterion_group!(benches, rational_sum, ratfunc_products, kernel_of_band_matrix);
criterion_main!(benches);

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use mixnorm::{hl_max, nikolskij_decompose, quasi_norm_spectrum, FamilySpec, TestFamily};
use mixnorm::{Grid, GridFunction, SpaceParams};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_function(grid: &Grid, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GridFunction::from_fn(grid, |_| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

fn bench(c: &mut Criterion) {
    let grid = Grid::dyadic_uniform(2, 256, 3).unwrap();
    let f = random_function(&grid, 7);
    let spec = f.dft();

    c.bench_function("dft 256x256", |b| b.iter(|| black_box(&f).dft()));

    let mixed = SpaceParams::mixed_f(1.0, 2.0, 2.0, 2);
    c.bench_function("mixed F norm 256x256", |b| {
        b.iter(|| quasi_norm_spectrum(black_box(&spec), &mixed).unwrap())
    });

    let iso = SpaceParams::isotropic_f(1.0, 2.0, 2.0, 2);
    c.bench_function("isotropic F norm 256x256", |b| {
        b.iter(|| quasi_norm_spectrum(black_box(&spec), &iso).unwrap())
    });

    // stores every band piece, so it is the memory-heavy path
    let small = Grid::dyadic_uniform(2, 128, 2).unwrap();
    let g = random_function(&small, 11);
    c.bench_function("band decomposition 128x128", |b| {
        b.iter(|| nikolskij_decompose(black_box(&g), 1.0, 2.0, 2.0).unwrap())
    });

    c.bench_function("cube maximal 256x256", |b| {
        b.iter(|| hl_max(black_box(&f)))
    });

    let member = FamilySpec::new(TestFamily::Ex1, 5, 2).unwrap();
    let dg = member.default_grid().unwrap();
    c.bench_function("ex1 spectrum on the default 512x512 grid", |b| {
        b.iter(|| member.spectrum(black_box(&dg)).unwrap())
    });
}

criterion_group!(benches, bench);
criterion_main!(benches);

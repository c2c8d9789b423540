use criterion::{criterion_group, criterion_main, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twograph::zlin::{self, IntMatrix};
use twograph::table;

fn bench_smith(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let entries: Vec<i64> = (0..60 * 60).map(|_| rng.gen_range(-3..4)).collect();
    let a = IntMatrix::from_fn(60, 60, |i, j| entries[i * 60 + j]);
    c.bench_function("smith_60x60_small_entries", |b| {
        b.iter(|| zlin::smith_normal_form(&a).rank())
    });
}

fn bench_k_cells(c: &mut Criterion) {
    let mut group = c.benchmark_group("k_theory_cell");
    group.sample_size(10);
    for (rows, q) in [(vec![2u32, 1], 2u64), (vec![3, 1, 1], 3), (vec![5], 3)] {
        let name = format!("{rows:?}_q{q}");
        group.bench_function(&name, |b| {
            b.iter(|| table::compute_cell(&rows, q, 4096).unwrap().k0_order())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_smith, bench_k_cells);
criterion_main!(benches);

//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p twograph --test acceptance -- --nocapture`.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::sync::OnceLock;
use std::time::Instant;
use twograph::dynamics::{self, ApeVerdict};
use twograph::graph::DEFAULT_VERTEX_LIMIT;
use twograph::ktheory::{self, KTheoryReport};
use twograph::subshift;
use twograph::table::{self, TableCell, REFERENCE_TABLE};
use twograph::tiles::{Pt, E1, E2, ORIGIN};
use twograph::zlin;
use twograph::{BasicData, Lambda, Tile};

fn ledrappier() -> Lambda {
    let data = BasicData::new(Tile::from_rows(&[2, 1]).unwrap(), 2, 0).unwrap();
    Lambda::new(data, DEFAULT_VERTEX_LIMIT).unwrap()
}

struct CellRun {
    cell: TableCell,
    report: KTheoryReport,
    three_invertible_corners: bool,
    c2_positive: bool,
}

static TABLE_RUNS: OnceLock<Vec<CellRun>> = OnceLock::new();

fn table_runs() -> &'static [CellRun] {
    TABLE_RUNS.get_or_init(|| {
        REFERENCE_TABLE
            .par_iter()
            .map(|cell| {
                let tile = Tile::from_rows(cell.rows).unwrap();
                let metrics = tile.metrics();
                let data = BasicData::new(tile, cell.q, 0).unwrap();
                let flags = data.flags();
                // Constructing the graph and its matrices runs the skeleton
                // assertions (vertex count, 0/1 entries, degree sums,
                // commutation) for every cell.
                let g = Lambda::new(data, DEFAULT_VERTEX_LIMIT).unwrap();
                g.matrices();
                let report = ktheory::compute_k_theory(&g).unwrap();
                CellRun {
                    cell: *cell,
                    report,
                    three_invertible_corners: flags.three_invertible_corners,
                    c2_positive: metrics.extent.y >= 1,
                }
            })
            .collect()
    })
}

#[test]
fn criterion_1_ledrappier_end_to_end() {
    let t0 = Instant::now();
    let g = ledrappier();
    assert_eq!(g.vertex_count(), 4);

    // Reference vertex matrices of the worked example, in its own vertex
    // order; ours must agree after one simultaneous permutation of indices.
    let b_ref: [[i64; 4]; 4] = [[1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 0, 0], [0, 0, 1, 1]];
    let r_ref: [[i64; 4]; 4] = [[1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 0]];
    let m = g.matrices();
    let perms = permutations(4);
    let found = perms.iter().find(|p| {
        (0..4).all(|i| {
            (0..4).all(|j| {
                b_ref[i][j] == m.blue.get(p[i], p[j]) && r_ref[i][j] == m.red.get(p[i], p[j])
            })
        })
    });
    assert!(
        found.is_some(),
        "no simultaneous permutation matches the reference matrices"
    );

    let report = ktheory::compute_k_theory(&g).unwrap();
    assert!(report.k0.is_trivial(), "K0 must be trivial");
    assert!(report.k1.is_trivial(), "K1 must be trivial");
    let elapsed = t0.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "end-to-end run took {elapsed:?}, expected under 1 s"
    );
    println!(
        "criterion 1 (ledrappier end to end, permutation {:?}): PASS in {elapsed:.2?}",
        found.unwrap()
    );
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 1 {
        return vec![vec![0]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for slot in 0..n {
            let mut q: Vec<usize> = p.iter().map(|&x| if x >= slot { x + 1 } else { x }).collect();
            q.push(slot);
            out.push(q);
        }
    }
    out
}

#[test]
fn criterion_2_table_reproduction() {
    let t0 = Instant::now();
    let runs = table_runs();
    assert_eq!(runs.len(), 70);
    for run in runs {
        assert!(
            table::cell_matches(&run.cell, &run.report),
            "cell {:?} q={} computed ({:?}, {:?}), expected ({}, {})",
            run.cell.rows,
            run.cell.q,
            run.report.k0_order(),
            run.report.k1_order(),
            run.cell.k0,
            run.cell.k1
        );
    }
    println!(
        "criterion 2 (reference table, {} cells exact): PASS in {:.2?}",
        runs.len(),
        t0.elapsed()
    );
}

#[test]
fn criterion_3_theorem_suite() {
    let t0 = Instant::now();

    // Kernel of the second block map vanishes and the K-group orders agree
    // on every table instance with three invertible corners.
    let mut table_checked = 0;
    for run in table_runs() {
        if run.three_invertible_corners {
            assert_eq!(
                run.report.ker_d2_rank, 0,
                "ker d2 must vanish for {:?} q={}",
                run.cell.rows, run.cell.q
            );
            assert_eq!(
                run.report.k0_order(),
                run.report.k1_order(),
                "|K0| = |K1| fails for {:?} q={}",
                run.cell.rows,
                run.cell.q
            );
            table_checked += 1;
        }
    }
    assert!(table_checked > 0);

    // Fifty randomized data sets with a strictly tallest first column or
    // strictly longest first row.
    let mut rng = ChaCha8Rng::seed_from_u64(0x2b7e1516);
    let mut random_checked = 0;
    while random_checked < 50 {
        let Some(data) = random_valid_data(&mut rng) else {
            continue;
        };
        let g = Lambda::new(data.clone(), DEFAULT_VERTEX_LIMIT).unwrap();
        g.matrices();
        let report = ktheory::compute_k_theory(&g).unwrap();
        assert_eq!(
            report.ker_d2_rank,
            0,
            "ker d2 must vanish for randomized data {:?} q={} t={} rule={:?}",
            data.tile().rows(),
            data.q(),
            data.trace(),
            data.rule()
        );
        let (k0, k1) = (report.k0_order(), report.k1_order());
        assert!(k0.is_some() && k0 == k1, "|K0| = |K1| fails on randomized data");
        random_checked += 1;
    }

    // Determinant of the all-ones complement: nonzero for every size, with
    // the closed-form value 1 - n.
    for n in 2..=12 {
        let det = zlin::circulant_det_check(n);
        assert_eq!(det, BigInt::from(1 - n as i64));
        assert_eq!(det.magnitude().to_string(), (n - 1).to_string());
    }

    // Scaled 0/1 matrices have injective 1 - n*B^t for n >= 2.
    for trial in 0..50 {
        let size = 2 + (trial % 7);
        let n = if trial % 2 == 0 { 2i64 } else { 3 };
        let bits: Vec<i64> = (0..size * size).map(|_| rng.gen_range(0..2)).collect();
        let a = zlin::IntMatrix::from_fn(size, size, |i, j| {
            i64::from(i == j) - n * bits[j * size + i]
        });
        assert_eq!(zlin::kernel_basis(&a).cols(), 0, "trial {trial}");
    }

    println!(
        "criterion 3 (theorem suite: {} table instances, 50 randomized data sets, circulant determinants 2..12, 50 scaled kernels): PASS in {:.2?}",
        table_checked,
        t0.elapsed()
    );
}

/// Random basic data with invertible corners, both extents positive, a
/// strictly tallest first column or strictly longest first row, and at most
/// 256 vertices. Returns `None` when the draw misses the constraints.
fn random_valid_data(rng: &mut ChaCha8Rng) -> Option<BasicData> {
    let q = rng.gen_range(2..=5u64);
    let max_size = match q {
        2 => 8,
        3 => 6,
        4 => 5,
        _ => 4,
    };
    let height = rng.gen_range(2..=4usize);
    let mut rows = Vec::with_capacity(height);
    let mut prev = rng.gen_range(2..=4u32);
    rows.push(prev);
    for _ in 1..height {
        let next = rng.gen_range(1..=prev);
        rows.push(next);
        prev = next;
    }
    let size: u32 = rows.iter().sum();
    if size > max_size {
        return None;
    }
    // Strictness: a length-1 last row makes the first column strictly
    // tallest; a strictly longer first row works symmetrically.
    if !(rows[rows.len() - 1] == 1 || rows[0] > rows[1]) {
        return None;
    }
    let tile = Tile::from_rows(&rows).ok()?;
    let metrics = tile.metrics();
    if metrics.extent.x < 1 || metrics.extent.y < 1 {
        return None;
    }
    let t = rng.gen_range(0..q);
    let corner_x = Pt::new(metrics.extent.x, 0);
    let corner_y = Pt::new(0, metrics.extent.y);
    let pairs: Vec<(Pt, u64)> = tile
        .cells()
        .iter()
        .map(|&c| {
            let v = if c == corner_x || c == corner_y {
                loop {
                    let v = rng.gen_range(1..q);
                    if twograph::tiles::gcd(v, q) == 1 {
                        break v;
                    }
                }
            } else {
                rng.gen_range(0..q)
            };
            (c, v)
        })
        .collect();
    BasicData::with_rule(tile, q, t, &pairs).ok()
}

#[test]
fn criterion_4_composition_factorization() {
    let t0 = Instant::now();
    let g = ledrappier();

    // Exhaustive split/recompose over all paths of degree <= (2,2).
    let mut paths_by_degree = Vec::new();
    for dx in 0..=2 {
        for dy in 0..=2 {
            let d = Pt::new(dx, dy);
            let mut all = Vec::new();
            for v in 0..g.vertex_count() {
                all.extend(g.paths_from(v, d, 1 << 20).unwrap());
            }
            assert_eq!(
                all.len() as u64,
                4 * 2u64.pow((dx + dy) as u32),
                "path count at degree ({dx}, {dy})"
            );
            paths_by_degree.push((d, all));
        }
    }
    let mut splits = 0;
    for (d, all) in &paths_by_degree {
        for lambda in all {
            for mx in 0..=d.x {
                for my in 0..=d.y {
                    let m = Pt::new(mx, my);
                    let (a, b) = g.factorize(lambda, m).unwrap();
                    let back = g.compose(&a, &b).unwrap();
                    assert_eq!(&back, lambda, "split at {m} does not recompose");
                    splits += 1;
                }
            }
        }
    }

    // Composing then factorizing returns the original pair, over all
    // composable pairs with total degree <= (2,2).
    let mut pairs = 0;
    for (dm, mus) in &paths_by_degree {
        for (dn, nus) in &paths_by_degree {
            let total = dm + *dn;
            if total.x > 2 || total.y > 2 {
                continue;
            }
            for mu in mus {
                for nu in nus {
                    if g.source_values(mu) != g.range_values(nu) {
                        continue;
                    }
                    let lambda = g.compose(mu, nu).unwrap();
                    let (a, b) = g.factorize(&lambda, *dm).unwrap();
                    assert_eq!(&a, mu);
                    assert_eq!(&b, nu);
                    pairs += 1;
                }
            }
        }
    }

    // Associativity over all composable triples with each factor of degree
    // <= (1,1).
    let small: Vec<&twograph::Path> = paths_by_degree
        .iter()
        .filter(|(d, _)| d.x <= 1 && d.y <= 1)
        .flat_map(|(_, v)| v.iter())
        .collect();
    let mut triples = 0;
    for mu in &small {
        for nu in &small {
            if g.source_values(mu) != g.range_values(nu) {
                continue;
            }
            let mu_nu = g.compose(mu, nu).unwrap();
            for rho in &small {
                if g.source_values(nu) != g.range_values(rho) {
                    continue;
                }
                let left = g.compose(&mu_nu, rho).unwrap();
                let nu_rho = g.compose(nu, rho).unwrap();
                let right = g.compose(mu, &nu_rho).unwrap();
                assert_eq!(left, right, "associativity fails");
                triples += 1;
            }
        }
    }
    assert!(triples > 0);

    // The worked degree-(3,2) grid: validates, factors at every split point
    // and recomposes bit-exactly.
    let rows: [&[u64]; 4] = [&[0, 0, 1, 1, 0], &[0, 1, 0, 1, 1], &[1, 1, 1, 0, 1], &[0, 0, 1, 1]];
    let expath = {
        let mut windows = subshift::enumerate_windows(g.data(), Pt::new(3, 2), 1 << 22).unwrap();
        let target = windows
            .iter()
            .position(|w| {
                rows.iter().enumerate().all(|(y, row)| {
                    row.iter()
                        .enumerate()
                        .all(|(x, &v)| w.value_at(Pt::new(x as i64, y as i64)) == Some(v))
                })
            })
            .expect("the worked grid is a valid window");
        windows.swap_remove(target).grid().clone()
    };
    assert!(g.validate_path(&expath));
    assert_eq!(g.range_values(&expath), vec![0, 0, 0]);
    assert_eq!(g.source_values(&expath), vec![0, 1, 1]);
    for mx in 0..=3 {
        for my in 0..=2 {
            let m = Pt::new(mx, my);
            let (a, b) = g.factorize(&expath, m).unwrap();
            assert_eq!(g.compose(&a, &b).unwrap(), expath);
        }
    }

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!(
        "criterion 4 (composition/factorization: {splits} splits, {pairs} pairs, {triples} triples, worked grid): PASS in {elapsed:.2?}"
    );
}

#[test]
fn criterion_5_aperiodicity() {
    let t0 = Instant::now();
    let g = ledrappier();
    let bound = Pt::new(3, 3);
    let mut queries = 0;
    for v in 0..g.vertex_count() {
        for mx in 0..=2 {
            for my in 0..=2 {
                for nx in 0..=2 {
                    for ny in 0..=2 {
                        let (m, n) = (Pt::new(mx, my), Pt::new(nx, ny));
                        if m == n {
                            continue;
                        }
                        // Both routes must find a witness: exhaustive search
                        // below the bound, and the constructive argument.
                        let brute =
                            dynamics::brute_force_witness(&g, v, m, n, bound, 1 << 22).unwrap();
                        assert_eq!(
                            brute.verdict,
                            ApeVerdict::WitnessFound,
                            "brute force fails at v={v} m={m} n={n}"
                        );
                        let cons = dynamics::aperiodicity_witness(&g, v, m, n, bound, 1 << 22)
                            .unwrap();
                        assert_eq!(cons.verdict, ApeVerdict::WitnessFound);
                        let w = cons.witness.unwrap();
                        assert!(dynamics::separates(&g, &w, m, n));
                        queries += 1;
                    }
                }
            }
        }
    }

    // The rule vanishing at the origin forces diagonal constancy; the scan
    // certifies it and witness search for the diagonal offsets reports a
    // proved periodicity, never a witness.
    let data = BasicData::with_rule(
        Tile::from_rows(&[2, 1]).unwrap(),
        2,
        0,
        &[(ORIGIN, 0), (E1, 1), (E2, 1)],
    )
    .unwrap();
    let scan = subshift::diagonal_periodicity_scan(&data, 1 << 20).unwrap();
    assert!(scan.all_pairs_agree && scan.certified);
    let gg = Lambda::new(data, DEFAULT_VERTEX_LIMIT).unwrap();
    for v in 0..gg.vertex_count() {
        let rep = dynamics::aperiodicity_witness(&gg, v, E2, E1, bound, 1 << 22).unwrap();
        assert_eq!(rep.verdict, ApeVerdict::PeriodicityProved);
    }

    println!(
        "criterion 5 (aperiodicity: {queries} witness queries both routes, degenerate rule certified periodic): PASS in {:.2?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_6_dual_reduction() {
    let t0 = Instant::now();
    let data = BasicData::new(Tile::from_rows(&[4, 3, 1, 1]).unwrap(), 2, 0).unwrap();
    let chain = ktheory::reduction_chain(&data).unwrap();
    let rows: Vec<Vec<u32>> = chain.tiles.iter().map(|t| t.rows().to_vec()).collect();
    assert_eq!(rows, vec![vec![3, 2, 1], vec![2, 1, 1], vec![1, 1]]);
    assert_eq!(
        chain.multipliers,
        vec![BigInt::from(2), BigInt::from(1), BigInt::from(2)]
    );
    let checks = ktheory::verify_reduction_chain(&data, DEFAULT_VERTEX_LIMIT).unwrap();
    assert_eq!(checks.len(), 3, "every chain step verified");
    assert_eq!(checks[0].base_vertices, 256);

    // Sock chain: one step to the vertical domino, whose blue graph is
    // complete (with loops) on two vertices.
    let sock = BasicData::new(Tile::from_rows(&[2, 1]).unwrap(), 2, 0).unwrap();
    let chain = ktheory::reduction_chain(&sock).unwrap();
    assert_eq!(chain.tiles.len(), 1);
    assert_eq!(chain.tiles[0].rows(), &[1, 1]);
    assert_eq!(chain.multipliers, vec![BigInt::from(1)]);
    let fin = Lambda::new(
        BasicData::new(chain.tiles[0].clone(), 2, 0).unwrap(),
        DEFAULT_VERTEX_LIMIT,
    )
    .unwrap();
    assert_eq!(fin.vertex_count(), 2);
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(fin.matrices().blue.get(i, j), 1);
        }
    }
    ktheory::verify_dual_step(&sock, DEFAULT_VERTEX_LIMIT).unwrap();

    println!(
        "criterion 6 (dual reduction: staircase chain (2,1,2) verified edge-by-edge, sock chain complete on 2): PASS in {:.2?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_7_subshift_correspondence() {
    let t0 = Instant::now();
    let mut checked = 0;
    for (rows, q) in [(vec![2u32, 1], 2u64), (vec![2, 1], 3), (vec![3], 2)] {
        let data = BasicData::new(Tile::from_rows(&rows).unwrap(), q, 0).unwrap();
        for nx in 0..=2 {
            for ny in 0..=2 {
                let n = Pt::new(nx, ny);
                let rep = subshift::path_window_correspondence(
                    &data,
                    n,
                    DEFAULT_VERTEX_LIMIT,
                    1 << 24,
                )
                .unwrap();
                // Counts agree and the two enumerations produce identical
                // grids item by item (the maps between them preserve every
                // cell value, so set equality makes them mutually inverse).
                assert!(rep.holds);
                let m = Tile::from_rows(&rows).unwrap().metrics();
                let expected = q.pow((m.size - 1) as u32)
                    * q.pow((nx * m.extent.y + ny * m.extent.x) as u32);
                assert_eq!(rep.paths as u64, expected, "{rows:?} q={q} n={n}");
                checked += 1;
            }
        }
    }
    println!(
        "criterion 7 (path/window correspondence, {checked} cases exact): PASS in {:.2?}",
        t0.elapsed()
    );
}

#[test]
fn criterion_8_unit_class_generates() {
    let t0 = Instant::now();
    let runs = table_runs();
    let mut checked = 0;
    for run in runs {
        let finite_nontrivial = run
            .report
            .k0_order()
            .is_some_and(|o| o > BigInt::from(1));
        if run.c2_positive && finite_nontrivial {
            assert!(
                ktheory::unit_class_is_generator(&run.report).unwrap(),
                "unit class fails to generate for {:?} q={}",
                run.cell.rows,
                run.cell.q
            );
            checked += 1;
        }
    }
    assert!(checked > 0);
    println!(
        "criterion 8 (unit class generates the cokernel on {checked} instances): PASS in {:.2?}",
        t0.elapsed()
    );
}

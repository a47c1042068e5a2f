//! Acceptance gate: each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lptsp_core::generate::{all_graphs, connected_graphs, random_connected};
use lptsp_core::tsp::{christofides_path, held_karp_path};
use lptsp_core::{
    build_instance, export_tsplib, greedy_label_for_order, import_tour, label_from_path,
    oracle_span_permutations, parse_tsplib, pmax_approx_labeling, solve, span_via_path_cover,
    verify_labeling, Graph, HamiltonianPath, Method, MetricInstance, PVector,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! check {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn pv(s: &str) -> PVector {
    s.parse().unwrap()
}

fn diameter(g: &Graph) -> u32 {
    g.all_pairs_distances().diameter().expect("connected")
}

/// Steps through permutations in lexicographic order; false after the last.
fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = (1..a.len()).rev().find(|&i| a[i - 1] < a[i]) else {
        return false;
    };
    let j = (i..a.len()).rev().find(|&j| a[j] > a[i - 1]).unwrap();
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Weight lookup independent of the instance type.
fn brute_path(n: usize, w: impl Fn(usize, usize) -> u64) -> u64 {
    if n <= 1 {
        return 0;
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = u64::MAX;
    loop {
        best = best.min(order.windows(2).map(|e| w(e[0], e[1])).sum());
        if !next_permutation(&mut order) {
            return best;
        }
    }
}

/// Minimum Hamiltonian cycle by fixing city `n - 1` and permuting the rest.
fn brute_cycle(n: usize, w: impl Fn(usize, usize) -> u64) -> (u64, Vec<usize>) {
    let last = n - 1;
    let mut rest: Vec<usize> = (0..last).collect();
    let mut best = (u64::MAX, Vec::new());
    loop {
        let mut tour = vec![last];
        tour.extend_from_slice(&rest);
        let length: u64 = (0..n).map(|i| w(tour[i], tour[(i + 1) % n])).sum();
        if length < best.0 {
            best = (length, tour);
        }
        if !next_permutation(&mut rest) {
            return best;
        }
    }
}

fn has_triangle_violation(inst: &MetricInstance) -> bool {
    let n = inst.n();
    for u in 0..n {
        for v in 0..n {
            for x in 0..n {
                if inst.weight(u, v) > inst.weight(u, x) + inst.weight(x, v) {
                    return true;
                }
            }
        }
    }
    false
}

/// Shortest-path closure of random weights in `1..=max`: always metric.
fn random_metric(n: usize, max: u32, rng: &mut impl Rng) -> MetricInstance {
    let mut w = vec![0u32; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            let x = rng.random_range(1..=max);
            w[u * n + v] = x;
            w[v * n + u] = x;
        }
    }
    for x in 0..n {
        for u in 0..n {
            for v in 0..n {
                let via = w[u * n + x] + w[x * n + v];
                if via < w[u * n + v] {
                    w[u * n + v] = via;
                }
            }
        }
    }
    MetricInstance::from_matrix(n, w).unwrap()
}

/// Random separation vector of length `k` with `p_max <= 2 p_min`.
fn random_ratio_ok(k: usize, rng: &mut impl Rng) -> PVector {
    let low = rng.random_range(1..=5);
    PVector::new((0..k).map(|_| rng.random_range(low..=2 * low)).collect()).unwrap()
}

/// Random graph instances mixed with random metric closures.
fn metric_instances(count: usize, max_n: usize, seed: u64) -> Vec<MetricInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.random_range(1..=max_n);
            if i % 2 == 0 {
                random_metric(n, 20, &mut rng)
            } else {
                let k = rng.random_range(2..=3);
                let g =
                    random_connected(n, rng.random_range(0.45..0.85), k as u32, &mut rng).unwrap();
                build_instance(&g, &random_ratio_ok(k, &mut rng)).unwrap()
            }
        })
        .collect()
}

fn reduction_correctness() -> Outcome {
    const VECTORS: [&str; 6] = ["2,1", "1,1", "2,2", "3,2", "1,2", "2,2,1"];
    let mut graphs: Vec<Graph> = (1..=6).flat_map(connected_graphs).collect();
    let exhaustive = graphs.len();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [7, 8] {
        for _ in 0..500 {
            let prob = rng.random_range(0.3..0.85);
            graphs.push(random_connected(n, prob, 3, &mut rng).unwrap());
        }
    }
    let mut cases = 0;
    for g in &graphs {
        let d = diameter(g);
        for s in VECTORS {
            let p = pv(s);
            if d as usize > p.k() {
                continue;
            }
            let exact = solve(g, &p, Method::Exact).map_err(|e| format!("{g:?} p={p}: {e}"))?;
            let oracle = oracle_span_permutations(g, &p).unwrap().span();
            check!(
                exact.labeling.span() == oracle,
                "{g:?} p={p}: solve {} oracle {oracle}",
                exact.labeling.span()
            );
            check!(
                exact.report.verified,
                "{g:?} p={p}: labeling failed verification"
            );
            cases += 1;
        }
    }
    Ok(format!(
        "{cases} (graph, p) cases over {exhaustive} exhaustive graphs (n <= 6) and 1000 random (n = 7, 8)"
    ))
}

fn prefix_sums_match_greedy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let trials = 10_000;
    for _ in 0..trials {
        let n = rng.random_range(1..=10);
        let k = rng.random_range(2..=4);
        let g = random_connected(n, rng.random_range(0.25..0.9), k as u32, &mut rng).unwrap();
        let p = random_ratio_ok(k, &mut rng);
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut rng);
        let inst = build_instance(&g, &p).unwrap();
        let path = HamiltonianPath::new(&inst, order.clone()).unwrap();
        let prefix = label_from_path(&inst, &path);
        let greedy = greedy_label_for_order(&g, &p, &order);
        check!(
            prefix == greedy,
            "{g:?} p={p} order={order:?}: {prefix:?} vs {greedy:?}"
        );
    }
    Ok(format!("{trials} random triples, 0 mismatches"))
}

fn metricity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for n in 1..=6 {
        for g in connected_graphs(n) {
            let k = (diameter(&g) as usize).max(1);
            for _ in 0..3 {
                let p = random_ratio_ok(k, &mut rng);
                check!(
                    !has_triangle_violation(&build_instance(&g, &p).unwrap()),
                    "{g:?} p={p}"
                );
                checked += 1;
            }
        }
    }
    for _ in 0..500 {
        let n = rng.random_range(7..=12);
        let k = rng.random_range(2..=4);
        let g = random_connected(n, rng.random_range(0.25..0.8), k as u32, &mut rng).unwrap();
        let p = random_ratio_ok(k, &mut rng);
        check!(
            !has_triangle_violation(&build_instance(&g, &p).unwrap()),
            "{g:?} p={p}"
        );
        checked += 1;
    }
    let c5 = build_instance(&Graph::cycle(5), &pv("3,1")).unwrap();
    check!(
        has_triangle_violation(&c5),
        "C5 with p=(3,1) should break the triangle inequality"
    );
    // w(0,1) = 3 > w(0,3) + w(3,1) = 1 + 1
    check!(
        c5.weight(0, 1) > c5.weight(0, 3) + c5.weight(3, 1),
        "expected violation on 0-3-1"
    );
    Ok(format!(
        "{checked} instances metric; C5 with p=(3,1) violates"
    ))
}

fn held_karp_exact() -> Outcome {
    let started = Instant::now();
    let instances = metric_instances(240, 9, 4);
    let mut at_nine = 0;
    for inst in &instances {
        let hk = held_karp_path(inst).unwrap();
        let brute = brute_path(inst.n(), |u, v| u64::from(inst.weight(u, v)));
        check!(
            hk.length == brute,
            "n={} held-karp {} brute {brute}",
            inst.n(),
            hk.length
        );
        check!(
            inst.path_length(&hk.order) == hk.length,
            "reported length disagrees with order"
        );
        at_nine += usize::from(inst.n() == 9);
    }
    let elapsed = started.elapsed();
    check!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    Ok(format!(
        "{} instances ({at_nine} with n = 9) in {:.1}s",
        instances.len(),
        elapsed.as_secs_f64()
    ))
}

fn christofides_ratio() -> Outcome {
    let instances = metric_instances(1200, 14, 5);
    let mut worst = 1.0f64;
    for inst in &instances {
        let opt = held_karp_path(inst).unwrap().length;
        let approx = christofides_path(inst).unwrap();
        check!(
            2 * approx.length <= 3 * opt,
            "n={} christofides {} optimum {opt}",
            inst.n(),
            approx.length
        );
        if opt > 0 {
            worst = worst.max(approx.length as f64 / opt as f64);
        }
    }
    Ok(format!(
        "{} instances, 0 violations, worst ratio {worst:.3}",
        instances.len()
    ))
}

fn path_cover_formula() -> Outcome {
    const PAIRS: [(u32, u32); 5] = [(2, 1), (1, 2), (2, 2), (3, 2), (2, 3)];
    let total: Vec<usize> = (1..=8).map(|n| all_graphs(n).len()).collect();
    check!(
        total == [1, 2, 4, 11, 34, 156, 1044, 12346],
        "class counts {total:?}"
    );
    let (mut graphs, mut below, mut above) = (0, 0, 0);
    for n in 1..=8 {
        for g in connected_graphs(n) {
            if diameter(&g) > 2 {
                continue;
            }
            graphs += 1;
            for (p, q) in PAIRS {
                let formula = span_via_path_cover(&g, p, q).map_err(|e| format!("{g:?}: {e}"))?;
                let pq = PVector::new(vec![p, q]).unwrap();
                let exact = solve(&g, &pq, Method::Exact).unwrap().labeling.span();
                check!(
                    formula == exact,
                    "{g:?} ({p},{q}): formula {formula} exact {exact}"
                );
                if n <= 7 {
                    let oracle = oracle_span_permutations(&g, &pq).unwrap().span();
                    check!(
                        formula == oracle,
                        "{g:?} ({p},{q}): formula {formula} oracle {oracle}"
                    );
                }
                if p < q {
                    below += 1;
                } else if p > q {
                    above += 1;
                }
            }
        }
    }
    Ok(format!(
        "{graphs} diameter-2 graphs (n <= 8) x 5 pairs; {below} cases with p < q, {above} via the complement"
    ))
}

fn pmax_bound() -> Outcome {
    const VECTORS: [&str; 4] = ["2,1", "3,2", "1,2", "2,2,1"];
    let mut cases = 0;
    for n in 1..=8 {
        for g in connected_graphs(n) {
            let lambda_one: Vec<u64> = (0..=3)
                .map(|k| {
                    if k < 2 {
                        0
                    } else {
                        oracle_span_permutations(&g, &PVector::ones(k))
                            .unwrap()
                            .span()
                    }
                })
                .collect();
            for s in VECTORS {
                let p = pv(s);
                let l = pmax_approx_labeling(&g, &p).map_err(|e| format!("{g:?}: {e}"))?;
                check!(
                    verify_labeling(&g, &p, &l).unwrap().is_empty(),
                    "{g:?} p={p}: invalid labeling"
                );
                let lambda_one = lambda_one[p.k()];
                check!(
                    l.span() <= u64::from(p.p_max()) * lambda_one,
                    "{g:?} p={p}: span {} > {} * {lambda_one}",
                    l.span(),
                    p.p_max()
                );
                cases += 1;
            }
        }
    }
    let mut scaled = 0;
    for n in 1..=6 {
        for g in connected_graphs(n) {
            let d = diameter(&g) as usize;
            for s in ["2,1", "1,2", "3,2,2"] {
                let p = pv(s);
                if d > p.k() {
                    continue;
                }
                let base = oracle_span_permutations(&g, &p).unwrap().span();
                let via_solve = solve(&g, &p, Method::Exact).unwrap().labeling.span();
                for c in [2, 3, 5] {
                    let c_span = oracle_span_permutations(&g, &p.scaled(c)).unwrap().span();
                    check!(c_span == u64::from(c) * base, "{g:?} p={p} c={c}");
                    let c_solve = solve(&g, &p.scaled(c), Method::Exact)
                        .unwrap()
                        .labeling
                        .span();
                    check!(
                        c_solve == u64::from(c) * via_solve,
                        "{g:?} p={p} c={c} via solve"
                    );
                    scaled += 1;
                }
            }
        }
    }
    Ok(format!(
        "{cases} bound checks on all connected n <= 8; {scaled} scaling checks"
    ))
}

fn tsplib_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let trials = 60;
    for i in 0..trials {
        let n = 1 + i % 9;
        let k = rng.random_range(2..=3);
        let g = random_connected(n, rng.random_range(0.3..0.8), k as u32, &mut rng).unwrap();
        let p = random_ratio_ok(k, &mut rng);
        let inst = build_instance(&g, &p).unwrap();
        let problem =
            parse_tsplib(&export_tsplib(&inst, "roundtrip")).map_err(|e| e.to_string())?;
        check!(
            problem.dimension == n + 1,
            "dimension {}",
            problem.dimension
        );

        let (cycle, tour) = brute_cycle(n + 1, |u, v| u64::from(problem.weight(u, v)));
        let path_opt = held_karp_path(&inst).unwrap().length;
        check!(cycle == path_opt, "n={n}: cycle {cycle} path {path_opt}");

        let mut text = String::from("NAME: roundtrip.tour\nTYPE: TOUR\n");
        text.push_str(&format!("DIMENSION: {}\nTOUR_SECTION\n", n + 1));
        for c in &tour {
            text.push_str(&format!("{}\n", c + 1));
        }
        text.push_str("-1\nEOF\n");
        let path = import_tour(&text, &inst).map_err(|e| e.to_string())?;
        check!(
            path.length == cycle,
            "imported path {} vs cycle {cycle}",
            path.length
        );
        let span = label_from_path(&inst, &path).normalized().span();
        let optimum = oracle_span_permutations(&g, &p).unwrap().span();
        check!(
            span == optimum,
            "n={n} p={p}: imported span {span} optimum {optimum}"
        );
    }
    Ok(format!("{trials} instances with n <= 9"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("reduction correctness", reduction_correctness),
        ("prefix-sum labeling", prefix_sums_match_greedy),
        ("metricity", metricity),
        ("exact path TSP", held_karp_exact),
        ("approximation ratio", christofides_ratio),
        ("path-cover span formula", path_cover_formula),
        ("p_max approximation", pmax_bound),
        ("TSPLIB round trip", tsplib_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|payload| {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(summary) => println!("PASS [{}] {name}: {summary} ({secs:.1}s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL [{}] {name}: {reason} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

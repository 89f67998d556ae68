//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness so the report is always printed.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use ybx::arith::{ceil_div, euler_phi};
use ybx::classify::{all_specs, count_classes, enumerate_order, squarefree_enumerate};
use ybx::cycleset::stabilizer_h;
use ybx::oracle::{bruteforce_partition, census, enumerate_all_cycle_sets, theorem_partition};
use ybx::zgroup::{ActedFactor, ActionEntry, BraceFactorSpec};
use ybx::{CycleSet, LeftBrace, ZGroupBraceSpec};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn run(id: usize, name: &str, limit: Duration, check: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(check))
        .unwrap_or_else(|e| outcome(false, format!("panicked: {:?}", e.downcast_ref::<String>())));
    let elapsed = start.elapsed();
    let in_time = elapsed <= limit;
    let ok = result.ok && in_time;
    println!(
        "[{}] criterion {id:>2}: {name} ({:.2?} of {:?}{}) {}",
        if ok { "PASS" } else { "FAIL" },
        elapsed,
        limit,
        if in_time { "" } else { ", too slow" },
        result.detail
    );
    ok
}

fn odd_specs_up_to(n: u64) -> Vec<ZGroupBraceSpec> {
    (1..=n).step_by(2).flat_map(|k| all_specs(k).unwrap()).collect()
}

fn base_points_of(brace: &LeftBrace) -> Vec<usize> {
    ybx::classify::base_points(brace).unwrap()
}

fn c1_bpkt_levels() -> Outcome {
    let mut checked = 0;
    for p in [3u64, 5, 7] {
        for k in 1..=6u32 {
            if p.pow(k) > 343 {
                break;
            }
            for t in 1..=k {
                let b = LeftBrace::bpkt(p, k, t).unwrap();
                let expected = ceil_div(k as u64, t as u64) as usize;
                if b.mpl() != Some(expected) {
                    return outcome(false, format!("B({p},{k},{t}) mpl {:?}, expected {expected}", b.mpl()));
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} braces"))
}

fn c2_tower_coincidence() -> Outcome {
    let specs = odd_specs_up_to(81);
    let failures: Vec<String> = specs
        .par_iter()
        .flat_map_iter(|spec| {
            let brace = spec.build().unwrap();
            let decomposable = CycleSet::from_brace_decomposable(&brace).retraction_tower();
            let stages = decomposable.canonical_partitions();
            base_points_of(&brace)
                .into_iter()
                .filter_map(|g| {
                    let tower = CycleSet::from_brace_uniconnected(&brace, g).unwrap().retraction_tower();
                    (tower.canonical_partitions() != stages || tower.mpl() != decomposable.mpl())
                        .then(|| format!("order {} g={g}", spec.order()))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    outcome(failures.is_empty(), format!("{} specs, failures {:?}", specs.len(), failures))
}

fn specs_for(orders: &[u64]) -> Vec<ZGroupBraceSpec> {
    orders.iter().flat_map(|&n| all_specs(n).unwrap()).collect()
}

fn c3_partitions() -> Outcome {
    let specs = specs_for(&[9, 21, 27, 45, 63]);
    let bad: Vec<String> = specs
        .iter()
        .filter(|s| theorem_partition(s).unwrap() != bruteforce_partition(s).unwrap())
        .map(|s| serde_json::to_string(s).unwrap())
        .collect();
    outcome(bad.is_empty(), format!("{} specs, mismatches {bad:?}", specs.len()))
}

fn order21() -> ZGroupBraceSpec {
    ZGroupBraceSpec {
        acting: vec![BraceFactorSpec::new(3, 1, 1)],
        acted: vec![ActedFactor { p: 7, beta: 1 }],
        action: vec![ActionEntry { i: 0, j: 0, u: 2 }],
        ..Default::default()
    }
}

fn order63() -> ZGroupBraceSpec {
    ZGroupBraceSpec { acting: vec![BraceFactorSpec::new(3, 2, 1)], ..order21() }
}

fn c4_counts() -> Outcome {
    let specs = specs_for(&[9, 21, 27, 45, 63]);
    for s in &specs {
        let brute = bruteforce_partition(s).unwrap().len();
        let formula = count_classes(s).unwrap();
        if brute != formula {
            return outcome(false, format!("{}: formula {formula}, search {brute}", serde_json::to_string(s).unwrap()));
        }
    }
    let per_brace_9: Vec<usize> = enumerate_order(9).unwrap().iter().map(|f| f.count).collect();
    let mut sorted9 = per_brace_9.clone();
    sorted9.sort();
    let c21 = count_classes(&order21()).unwrap();
    let c63 = count_classes(&order63()).unwrap();
    let ok = sorted9 == [1, 2] && c21 == 2 && c63 == 2;
    outcome(ok, format!("{} specs; order 9 {per_brace_9:?}, order 21 {c21}, order 63 {c63}", specs.len()))
}

fn c5_square_free() -> Outcome {
    for n in [15u64, 21, 33, 105] {
        for fam in squarefree_enumerate(n).unwrap() {
            for (g, x) in &fam.representatives {
                let mpl = x.mpl();
                let abelian = x.permutation_group().is_abelian();
                if mpl.is_none_or(|m| m > 2) || (mpl == Some(1)) != abelian {
                    return outcome(false, format!("n={n} g={g}: mpl {mpl:?}, abelian {abelian}"));
                }
            }
            let acting: u64 = fam.spec.acting.iter().map(BraceFactorSpec::order).product();
            let expected = if fam.spec.acting.is_empty() { 1 } else { euler_phi(acting) as usize };
            if fam.count != expected {
                return outcome(false, format!("n={n}: {} classes, expected φ({acting}) = {expected}", fam.count));
            }
        }
    }
    let nonabelian21: Vec<usize> =
        squarefree_enumerate(21).unwrap().iter().filter(|f| f.mpl == 2).map(|f| f.count).collect();
    outcome(nonabelian21 == [2], format!("non-abelian counts at 21: {nonabelian21:?}"))
}

fn c6_prime_uniqueness() -> Outcome {
    let r3 = census(3, None).unwrap();
    let counts: Vec<usize> =
        [3u64, 5, 7].iter().map(|&p| enumerate_order(p).unwrap().iter().map(|f| f.count).sum()).collect();
    outcome(r3.uniconnected_classes == 1 && counts == [1, 1, 1], format!("census(3) {}, brace-driven {counts:?}", r3.uniconnected_classes))
}

/// Every constructed cycle set of odd order ≤ 63: decomposable and
/// uniconnected at every base point.
fn constructed_up_to_63() -> Vec<(LeftBrace, Vec<CycleSet>)> {
    odd_specs_up_to(63)
        .par_iter()
        .map(|s| {
            let brace = s.build().unwrap();
            let mut sets = vec![CycleSet::from_brace_decomposable(&brace)];
            for g in base_points_of(&brace) {
                sets.push(CycleSet::from_brace_uniconnected(&brace, g).unwrap());
            }
            (brace, sets)
        })
        .collect()
}

fn c7_solutions(data: &[(LeftBrace, Vec<CycleSet>)]) -> Outcome {
    let all: Vec<&CycleSet> = data.iter().flat_map(|(_, s)| s).collect();
    let bad = all
        .par_iter()
        .filter(|x| {
            let sol = x.to_solution();
            sol.check().is_err() || CycleSet::from_solution(&sol) != ***x
        })
        .count();
    outcome(bad == 0, format!("{} cycle sets, {bad} failures", all.len()))
}

fn c8_regularity(data: &[(LeftBrace, Vec<CycleSet>)]) -> Outcome {
    let pairs: Vec<(&LeftBrace, &CycleSet)> = data.iter().flat_map(|(b, s)| s[1..].iter().map(move |x| (b, x))).collect();
    let bad = pairs
        .par_iter()
        .filter(|(b, x)| {
            let g = x.permutation_group();
            !(g.is_regular() && g.order() == b.order() && g.table().find_isomorphism(&b.mul_group()).is_some())
        })
        .count();
    outcome(bad == 0, format!("{} cycle sets, {bad} failures", pairs.len()))
}

fn c9_dedekind() -> Outcome {
    let q = LeftBrace::from_operations(8, |a, b| (a + b) % 8, |a, b| (a + 3usize.pow(a as u32) * b) % 8).unwrap();
    let h = stabilizer_h(&q, 1).unwrap();
    let soc = q.socle().elements().to_vec();
    let uni = CycleSet::from_brace_uniconnected(&q, 1).unwrap().mpl();
    let dec = CycleSet::from_brace_decomposable(&q).mpl();
    let dedekind = q.mul_group().is_dedekind().unwrap();
    outcome(h == soc && uni == dec && uni.is_some() && dedekind, format!("H = {h:?}, Soc = {soc:?}, mpl {uni:?} / {dec:?}"))
}

fn c10_census() -> Outcome {
    let two = enumerate_all_cycle_sets(2, None).unwrap().len();
    let plain = census(4, None).unwrap();
    let seeded: Vec<_> = [1u64, 2, 3].iter().map(|&s| census(4, Some(s)).unwrap()).collect();
    let ok = two == 2 && plain.iso_classes == 23 && seeded.iter().all(|r| *r == plain);
    outcome(ok, format!("n=2: {two}; n=4: {} tables, {} classes", plain.total_cycle_sets, plain.iso_classes))
}

fn main() {
    let mins = |m: u64| Duration::from_secs(60 * m);
    let secs = Duration::from_secs;
    let mut results = vec![
        run(1, "B(p,k,t) level equals ceil(k/t)", secs(5), c1_bpkt_levels),
        run(2, "retraction towers of A and A_g coincide", secs(60), c2_tower_coincidence),
        run(3, "residue criterion matches isomorphism search", mins(10), c3_partitions),
        run(4, "class counts match search", mins(10), c4_counts),
        run(5, "square-free orders", mins(5), c5_square_free),
        run(6, "one uniconnected class per prime size", mins(1), c6_prime_uniqueness),
    ];
    let data = constructed_up_to_63();
    results.push(run(7, "solution correspondence", mins(5), || c7_solutions(&data)));
    results.push(run(8, "permutation groups are regular copies of (A,∘)", mins(5), || c8_regularity(&data)));
    results.push(run(9, "Dedekind case on Z/8", secs(1), c9_dedekind));
    results.push(run(10, "exhaustive census", mins(2), c10_census));
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiling_lab::constructions::{
    gen_balanced_multipartite, gen_matching_in_parts, gen_multipartite_plus_stars, gen_planted, gen_section6,
    predicted_count_balanced,
};
use tiling_lab::factor::{has_kr_factor_within, multipartite_kr_factor};
use tiling_lab::pipeline::{run_pipeline, vertex_cover_sweep, PipelineConfig, Stage};
use tiling_lab::robustness::{
    binomial_interval_prob, count_factor_subsets, estimate_factor_probability, normal_cdf, RobustnessEstimate,
    SamplingConfig,
};
use tiling_lab::{has_kr_factor, Graph, LabeledPartition, SearchBudget, Verdict, VertexSet};

use common::{balanced_count_nonempty, exact_binomial_interval, is_factor_of, naive_has_factor, random_graph};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn budget() -> SearchBudget {
    SearchBudget::default()
}

/// Histograms from every exact enumeration, checked by criterion 4.
type Histograms = Vec<(String, RobustnessEstimate)>;

fn count_balanced(hist: &mut Histograms) -> Outcome {
    let cases = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (3, 4)];
    let mut bad = Vec::new();
    for (r, n) in cases {
        let (g, _) = gen_balanced_multipartite(r, n).unwrap();
        let est = count_factor_subsets(&g, r, &budget()).unwrap();
        let formula = predicted_count_balanced(r, n);
        let direct = balanced_count_nonempty(r, n);
        let ok = est.unknown_trials == 0
            && formula == est.count_with_empty.into()
            && direct == est.count_without_empty.into();
        if !ok {
            bad.push(format!(
                "(r={r}, n={n}): counted {} vs predicted {formula}",
                est.count_with_empty
            ));
        }
        hist.push((format!("K_{{{n} x {r}}}"), est));
    }
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} cases exact", cases.len())
        } else {
            bad.join("; ")
        },
    )
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut yes, mut no, mut bad) = (0, 0, Vec::new());
    for i in 0..500u64 {
        let r = rng.random_range(2..=4usize);
        let v = rng.random_range(r..=12usize);
        let density = rng.random_range(0.3..0.95);
        let g = random_graph(v, density, 1000 + i);
        let all: Vec<usize> = (0..v).collect();
        let want = naive_has_factor(&g, &all, r);
        let res = has_kr_factor(&g, r, &budget()).unwrap();
        let got = match res.exists {
            Verdict::Yes => res
                .factor
                .as_ref()
                .is_some_and(|t| is_factor_of(&g, &all, &t.to_vecs(), r)),
            Verdict::No => false,
            Verdict::Unknown => {
                bad.push(format!("instance {i}: unknown"));
                continue;
            }
        };
        if res.exists.is_yes() && !got {
            bad.push(format!("instance {i}: invalid factor"));
        } else if got != want {
            bad.push(format!("instance {i}: library {got}, oracle {want}"));
        }
        if want {
            yes += 1;
        } else {
            no += 1;
        }
    }
    let detail = format!(
        "500 graphs ({yes} with factor, {no} without), {} disagreements",
        bad.len()
    );
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            detail
        } else {
            format!("{detail}: {}", bad.join("; "))
        },
    )
}

fn monte_carlo(hist: &mut Histograms) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut within = 0;
    let mut worst = 0.0f64;
    for i in 0..20u64 {
        let r = if i % 2 == 0 { 2 } else { 3 };
        let v = rng.random_range(12..=16usize);
        let density = rng.random_range(0.6..0.9);
        let g = random_graph(v, density, 3000 + i);
        let exact = count_factor_subsets(&g, r, &budget()).unwrap();
        let est = estimate_factor_probability(&g, r, &SamplingConfig::new(0.5, 10_000, 30 + i)).unwrap();
        let dev = (est.fraction - exact.fraction).abs();
        let z = if est.std_error > 0.0 {
            dev / est.std_error
        } else if dev == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(z);
        if exact.unknown_trials == 0 && est.unknown_trials == 0 && z <= 4.0 {
            within += 1;
        }
        hist.push((format!("random graph {i}"), exact));
    }
    outcome(
        within >= 19,
        format!("{within}/20 within 4 standard errors (largest deviation {worst:.2} se)"),
    )
}

fn divisibility(hist: &Histograms) -> Outcome {
    let bad: Vec<String> = hist
        .iter()
        .filter_map(|(name, est)| {
            let v = est.divisibility_violations();
            (!v.is_empty()).then(|| format!("{name}: sizes {v:?}"))
        })
        .collect();
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} enumerated instances, no violations", hist.len())
        } else {
            bad.join("; ")
        },
    )
}

fn direction_check(hist: &mut Histograms) -> Outcome {
    let floor = 1.0 / (40.0f64 * 9.0).powi(3);
    let mut parts = Vec::new();
    let mut pass = true;
    for (name, (g, _)) in [
        ("section6(3,4)", gen_section6(3, 4).unwrap()),
        ("stars(3,4)", gen_multipartite_plus_stars(3, 4).unwrap()),
    ] {
        let est = count_factor_subsets(&g, 3, &budget()).unwrap();
        pass &= est.unknown_trials == 0 && est.fraction >= floor;
        parts.push(format!("{name} fraction {:.4e}", est.fraction));
        hist.push((name.to_string(), est));
    }
    outcome(pass, format!("{} (floor {floor:.4e})", parts.join(", ")))
}

fn section6_conditions() -> Outcome {
    let (g, p) = gen_section6(3, 4).unwrap();
    let r = 3;
    let (mut good, mut violations) = (0, 0);
    for mask in 0u64..(1 << g.n()) {
        let s = VertexSet::from_mask(mask);
        let res = has_kr_factor_within(&g, &s, r, &budget()).unwrap();
        if !res.exists.is_yes() {
            continue;
        }
        good += 1;
        let size = s.len();
        let meets = |i: usize| p.class(i).iter().filter(|&v| s.contains(v)).count();
        let a1 = meets(0);
        let ok = size.is_multiple_of(r) && size / r <= a1 && a1 <= 2 * size / r && (1..r).all(|i| meets(i) <= size / r);
        if !ok {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{good} good subsets of 4096, {violations} violations"),
    )
}

/// Random r-partite graph with every cross degree at least `floor`.
fn dense_multipartite(r: usize, n: usize, floor: usize, seed: u64) -> (Graph, LabeledPartition) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = LabeledPartition::consecutive(&vec![n; r]).unwrap();
    let class = |v: usize| v / n;
    let mut adj = vec![vec![false; r * n]; r * n];
    let mut edges = Vec::new();
    for a in 0..r * n {
        for b in a + 1..r * n {
            if class(a) != class(b) {
                adj[a][b] = true;
                adj[b][a] = true;
                edges.push((a, b));
            }
        }
    }
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.random_range(0..=i));
    }
    let cross = |adj: &Vec<Vec<bool>>, v: usize, j: usize| (j * n..(j + 1) * n).filter(|&w| adj[v][w]).count();
    for &(a, b) in &edges {
        if cross(&adj, a, class(b)) > floor && cross(&adj, b, class(a)) > floor {
            adj[a][b] = false;
            adj[b][a] = false;
        }
    }
    let kept: Vec<(usize, usize)> = edges.into_iter().filter(|&(a, b)| adj[a][b]).collect();
    (Graph::from_edges(r * n, &kept).unwrap(), p)
}

fn min_cross_degree(g: &Graph, p: &LabeledPartition) -> usize {
    let mut m = usize::MAX;
    for (i, ci) in p.classes().iter().enumerate() {
        for (j, cj) in p.classes().iter().enumerate() {
            if i != j {
                for v in ci.iter() {
                    m = m.min(g.degree_into(v, cj));
                }
            }
        }
    }
    m
}

fn multipartite_degree_floor() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    for i in 0..200u64 {
        let r = rng.random_range(2..=3usize);
        let n = if r == 2 {
            rng.random_range(2..=6usize)
        } else {
            rng.random_range(3..=6usize)
        };
        let floor = ((r - 1) * n).div_ceil(r) + 1;
        let (g, p) = dense_multipartite(r, n, floor, 7000 + i);
        if min_cross_degree(&g, &p) < floor {
            bad.push(format!("instance {i}: generator missed the degree floor"));
            continue;
        }
        let res = multipartite_kr_factor(&g, &p, &budget()).unwrap();
        let all: Vec<usize> = (0..r * n).collect();
        let valid = res.factor.as_ref().is_some_and(|t| {
            is_factor_of(&g, &all, &t.to_vecs(), r)
                && t.to_vecs()
                    .iter()
                    .all(|c| (0..r).all(|j| c.iter().filter(|&&v| v / n == j).count() == 1))
        });
        if !(res.exists.is_yes() && valid) {
            bad.push(format!("instance {i} (r={r}, n={n}): {}", res.exists.as_str()));
        }
    }
    // Three classes of three; each pair spans K_{3,3} minus a perfect
    // matching, so every cross degree is exactly 2.
    let missing = [(0, 3), (1, 4), (2, 5), (0, 6), (1, 7), (2, 8), (3, 6), (4, 8), (5, 7)];
    let mut edges = Vec::new();
    for a in 0..9 {
        for b in a + 1..9 {
            if a / 3 != b / 3 && !missing.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
    }
    let g = Graph::from_edges(9, &edges).unwrap();
    let p = LabeledPartition::consecutive(&[3, 3, 3]).unwrap();
    let degree_two = min_cross_degree(&g, &p) == 2 && g.is_regular(4);
    let sharp = multipartite_kr_factor(&g, &p, &budget()).unwrap();
    let oracle = naive_has_factor(&g, &(0..9).collect::<Vec<_>>(), 3);
    let sharp_ok = degree_two && sharp.exists == Verdict::No && !oracle;
    if !sharp_ok {
        bad.push(format!(
            "sharpness instance: library {}, oracle {oracle}",
            sharp.exists.as_str()
        ));
    }
    let detail = "200 instances with factors, sharpness instance has none".to_string();
    outcome(bad.is_empty(), if bad.is_empty() { detail } else { bad.join("; ") })
}

fn cover_sweep() -> Outcome {
    let (g, _) = gen_matching_in_parts(3, 4).unwrap();
    if !(g.n() == 12 && g.is_regular(9)) {
        return outcome(false, "K_{4,4,4} plus matchings is not 9-regular on 12 vertices".into());
    }
    let rep = vertex_cover_sweep(&g, 3, 4, 100, 8, false, &budget()).unwrap();
    let pass = rep.trials == 100 && rep.exact && rep.max_min_cover.iter().all(|&c| c as f64 >= 2.0 / 3.0);
    outcome(
        pass,
        format!("100 partitions, smallest max_i minVC = {}", rep.min_over_trials),
    )
}

fn pipeline_end_to_end() -> Outcome {
    let configs = [
        (2, 5, 1),
        (2, 6, 2),
        (3, 4, 1),
        (3, 4, 2),
        (3, 4, 3),
        (4, 4, 2),
        (4, 4, 3),
        (3, 7, 2),
        (4, 6, 2),
        (4, 5, 1),
    ];
    let (mut done, mut failed, mut invalid, mut errors) = (0, 0, 0, Vec::new());
    let mut oracle_yes = 0;
    let mut instances = 0;
    for (k, &(r, n, s)) in configs.iter().cycle().take(50).enumerate() {
        let seed = 9000 + k as u64;
        let pl = match gen_planted(r, n, s, seed) {
            Ok(pl) => pl,
            Err(e) => {
                errors.push(format!("generate ({r},{n},{s}) seed {seed}: {e}"));
                continue;
            }
        };
        instances += 1;
        let oracle = has_kr_factor(&pl.graph, r, &budget()).unwrap().exists;
        if oracle.is_yes() {
            oracle_yes += 1;
        }
        match run_pipeline(&pl.graph, &pl.partition, &pl.params, PipelineConfig::default()) {
            Ok(st) if st.stage == Stage::Done => {
                let all: Vec<usize> = (0..pl.graph.n()).collect();
                let ok = st
                    .factor
                    .as_ref()
                    .is_some_and(|t| is_factor_of(&pl.graph, &all, &t.to_vecs(), r) && t.is_kr_factor_of(&pl.graph, r));
                if ok && oracle != Verdict::No {
                    done += 1;
                } else {
                    invalid += 1;
                }
            }
            Ok(st) if st.stage == Stage::Failed && st.failure.is_some() => failed += 1,
            Ok(st) => errors.push(format!(
                "seed {seed}: stopped at {:?} without a failure record",
                st.stage
            )),
            Err(e) => errors.push(format!("seed {seed}: {e}")),
        }
    }
    let detail = format!(
        "{instances} instances: {done} valid factors, {failed} named-stage failures, {invalid} invalid; oracle finds a factor in {oracle_yes}"
    );
    let pass = instances == 50 && invalid == 0 && errors.is_empty();
    outcome(
        pass,
        if errors.is_empty() {
            detail
        } else {
            format!("{detail}; {}", errors.join("; "))
        },
    )
}

fn probability_utilities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst_exact = 0.0f64;
    for _ in 0..200 {
        let n = rng.random_range(1..=400u64);
        let num = rng.random_range(1..64u64);
        let lo = rng.random_range(0..=n);
        let hi = rng.random_range(lo..=n);
        let got = binomial_interval_prob(n, num as f64 / 64.0, lo, hi).unwrap();
        let want = exact_binomial_interval(n, num, 64, lo, hi);
        worst_exact = worst_exact.max((got - want).abs());
    }
    let (mut worst_normal, mut worst_at) = (0.0f64, (0u64, 0.0, 0.0));
    let windows = [
        (-2.0, 2.0),
        (-1.0, 1.0),
        (0.0, 1.0),
        (1.0, 2.0),
        (-3.0, -1.0),
        (0.5, 2.5),
        (-1.5, 0.5),
    ];
    for n in [100u64, 144, 256, 400, 1000, 2500] {
        let sd = (n as f64).sqrt() / 2.0;
        let half = n as f64 / 2.0;
        for (a, b) in windows {
            let lo = (half + a * sd).ceil().max(0.0) as u64;
            let hi = (half + b * sd).floor().min(n as f64) as u64;
            let exact = binomial_interval_prob(n, 0.5, lo, hi).unwrap();
            let gap = (exact - (normal_cdf(b) - normal_cdf(a))).abs();
            if gap > worst_normal {
                (worst_normal, worst_at) = (gap, (n, a, b));
            }
        }
    }
    outcome(
        worst_exact <= 1e-12 && worst_normal <= 0.05,
        format!(
            "max error vs exact {worst_exact:.2e} (200 cases), max normal gap {worst_normal:.4} at n = {}, window ({}, {})",
            worst_at.0, worst_at.1, worst_at.2
        ),
    )
}

fn main() -> ExitCode {
    let mut hist = Histograms::new();
    let mut lines: Vec<(usize, &str, Outcome, f64)> = Vec::new();
    let mut run = |k: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        lines.push((k, name, o, t.elapsed().as_secs_f64()));
    };
    run(1, "balanced count formula", &mut || count_balanced(&mut hist));
    run(2, "factor search vs brute force", &mut oracle_equivalence);
    run(3, "Monte Carlo vs exact fraction", &mut || monte_carlo(&mut hist));
    run(5, "good-subset fraction floor", &mut || direction_check(&mut hist));
    run(4, "no good subsets of size not divisible by r", &mut || {
        divisibility(&hist)
    });
    run(6, "extremal construction subset conditions", &mut section6_conditions);
    run(7, "multipartite degree condition", &mut multipartite_degree_floor);
    run(8, "vertex cover sweep", &mut cover_sweep);
    run(9, "pipeline end to end", &mut pipeline_end_to_end);
    run(10, "binomial and normal utilities", &mut probability_utilities);
    lines.sort_by_key(|l| l.0);
    for (k, name, o, secs) in &lines {
        println!(
            "criterion {k:>2} {}: {name}: {} [{secs:.1}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    if lines.iter().all(|l| l.2.pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

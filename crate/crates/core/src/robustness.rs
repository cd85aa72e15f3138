//! How many induced subgraphs keep a K_r-factor.
//!
//! Exact mode enumerates every subset of a small graph; sampled mode keeps
//! each vertex independently with probability `p`. The empty set always has
//! a vacuous factor, so both counts (with and without it) are reported.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor::{has_kr_factor_within, FactorError, SearchBudget, Verdict};
use crate::graph::{Graph, VertexSet};

/// Default ceiling on the order of graphs counted exactly.
pub const EXACT_CEILING: usize = 30;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RobustnessError {
    #[error("graph has {n} vertices, above the exact ceiling of {ceiling}; use sampled mode")]
    TooLarge { n: usize, ceiling: usize },
    #[error("factor search ran out of budget on subset {0:?}; raise the budget")]
    Unknown(Vec<usize>),
    #[error("invalid sampling config: {0}")]
    InvalidConfig(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateMode {
    Exact,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub p: f64,
    pub trials: u64,
    pub seed: u64,
    pub budget_per_trial: SearchBudget,
}

impl SamplingConfig {
    pub fn new(p: f64, trials: u64, seed: u64) -> Self {
        Self {
            p,
            trials,
            seed,
            budget_per_trial: SearchBudget::default(),
        }
    }

    pub fn validate(&self) -> Result<(), RobustnessError> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(RobustnessError::InvalidConfig(format!("p = {} not in (0, 1)", self.p)));
        }
        if self.trials == 0 {
            return Err(RobustnessError::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Exact count or Monte Carlo estimate of the subsets inducing a factor.
///
/// In exact mode `trials` is `2^|V|`, the number of subsets enumerated,
/// and `fraction = count_with_empty / trials`. In sampled mode the counts
/// are hits and `fraction` is taken over trials with a definite answer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobustnessEstimate {
    pub mode: EstimateMode,
    pub r: usize,
    pub n_vertices: usize,
    pub p: f64,
    pub seed: Option<u64>,
    pub trials: u64,
    pub count_with_empty: u64,
    pub count_without_empty: u64,
    pub fraction: f64,
    pub std_error: f64,
    pub unknown_trials: u64,
    /// `histogram[m]` = good subsets (or hits) of size `m`.
    pub histogram: Vec<u64>,
}

impl RobustnessEstimate {
    pub const CSV_HEADER: &'static str =
        "graph_id,r,mode,p,trials,count_with_empty,count_without_empty,fraction,std_error,unknown_trials,histogram";

    /// One CSV row; the histogram is `;`-separated.
    pub fn csv_row(&self, graph_id: &str) -> String {
        let mut s = String::new();
        let mode = match self.mode {
            EstimateMode::Exact => "exact",
            EstimateMode::Sampled => "sampled",
        };
        let hist: Vec<String> = self.histogram.iter().map(u64::to_string).collect();
        let _ = write!(
            s,
            "{graph_id},{},{mode},{:.16e},{},{},{},{:.16e},{:.16e},{},{}",
            self.r,
            self.p,
            self.trials,
            self.count_with_empty,
            self.count_without_empty,
            self.fraction,
            self.std_error,
            self.unknown_trials,
            hist.join(";")
        );
        s
    }

    /// Sizes `m > 0` with `r ∤ m` that still have a good subset.
    pub fn divisibility_violations(&self) -> Vec<usize> {
        self.histogram
            .iter()
            .enumerate()
            .filter(|&(m, &c)| m > 0 && m % self.r != 0 && c > 0)
            .map(|(m, _)| m)
            .collect()
    }
}

fn subset_of_mask(mask: u64) -> VertexSet {
    VertexSet::from_mask(mask)
}

/// Exact count with the default ceiling of [`EXACT_CEILING`] vertices.
pub fn count_factor_subsets(g: &Graph, r: usize, budget: &SearchBudget) -> Result<RobustnessEstimate, RobustnessError> {
    count_factor_subsets_capped(g, r, budget, EXACT_CEILING)
}

/// Exact count of `S ⊆ V(g)` such that `G[S]` has a K_r-factor.
///
/// Subsets are visited in Gray-code order inside shards split on the high
/// bits; shards run in parallel and their histograms are added.
pub fn count_factor_subsets_capped(
    g: &Graph,
    r: usize,
    budget: &SearchBudget,
    ceiling: usize,
) -> Result<RobustnessEstimate, RobustnessError> {
    if r < 2 {
        return Err(FactorError::InvalidR(r).into());
    }
    let n = g.n();
    if n > ceiling.min(63) {
        return Err(RobustnessError::TooLarge {
            n,
            ceiling: ceiling.min(63),
        });
    }
    let shard_bits = n.min(8);
    let per_shard = 1u64 << (n - shard_bits);
    let results: Vec<Result<Vec<u64>, RobustnessError>> = (0..1u64 << shard_bits)
        .into_par_iter()
        .map(|shard| {
            let mut hist = vec![0u64; n + 1];
            let start = shard * per_shard;
            for i in start..start + per_shard {
                let mask = i ^ (i >> 1);
                let size = mask.count_ones() as usize;
                if !size.is_multiple_of(r) {
                    continue;
                }
                let s = subset_of_mask(mask);
                match has_kr_factor_within(g, &s, r, budget)?.exists {
                    Verdict::Yes => hist[size] += 1,
                    Verdict::No => {}
                    Verdict::Unknown => return Err(RobustnessError::Unknown(s.to_vec())),
                }
            }
            Ok(hist)
        })
        .collect();
    let mut histogram = vec![0u64; n + 1];
    for res in results {
        for (h, x) in histogram.iter_mut().zip(res?) {
            *h += x;
        }
    }
    let count: u64 = histogram.iter().sum();
    let total = 1u64 << n;
    Ok(RobustnessEstimate {
        mode: EstimateMode::Exact,
        r,
        n_vertices: n,
        p: 0.5,
        seed: None,
        trials: total,
        count_with_empty: count,
        count_without_empty: count - histogram[0],
        fraction: count as f64 / total as f64,
        std_error: 0.0,
        unknown_trials: 0,
        histogram,
    })
}

/// The vertex subset drawn for one trial; a pure function of
/// `(seed, trial, p, n)`.
pub fn sample_subset(n: usize, p: f64, seed: u64, trial: u64) -> VertexSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut s = VertexSet::EMPTY;
    for v in 0..n {
        if rng.random_bool(p) {
            s.insert(v);
        }
    }
    s
}

#[derive(Default, Clone, Copy)]
struct Tally {
    hits: u64,
    hits_nonempty: u64,
    unknown: u64,
}

/// Monte Carlo estimate of `P[G[p] has a K_r-factor]`.
pub fn estimate_factor_probability(
    g: &Graph,
    r: usize,
    cfg: &SamplingConfig,
) -> Result<RobustnessEstimate, RobustnessError> {
    cfg.validate()?;
    if r < 2 {
        return Err(FactorError::InvalidR(r).into());
    }
    let n = g.n();
    let outcomes: Vec<(usize, Verdict)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let s = sample_subset(n, cfg.p, cfg.seed, t);
            let v = has_kr_factor_within(g, &s, r, &cfg.budget_per_trial)
                .map(|res| res.exists)
                .unwrap_or(Verdict::Unknown);
            (s.len(), v)
        })
        .collect();
    let mut histogram = vec![0u64; n + 1];
    let mut tally = Tally::default();
    for (size, v) in outcomes {
        match v {
            Verdict::Yes => {
                tally.hits += 1;
                histogram[size] += 1;
                if size > 0 {
                    tally.hits_nonempty += 1;
                }
            }
            Verdict::No => {}
            Verdict::Unknown => tally.unknown += 1,
        }
    }
    let decided = cfg.trials - tally.unknown;
    let (fraction, std_error) = if decided == 0 {
        (f64::NAN, f64::NAN)
    } else {
        let f = tally.hits as f64 / decided as f64;
        (f, (f * (1.0 - f) / decided as f64).sqrt())
    };
    Ok(RobustnessEstimate {
        mode: EstimateMode::Sampled,
        r,
        n_vertices: n,
        p: cfg.p,
        seed: Some(cfg.seed),
        trials: cfg.trials,
        count_with_empty: tally.hits,
        count_without_empty: tally.hits_nonempty,
        fraction,
        std_error,
        unknown_trials: tally.unknown,
        histogram,
    })
}

/// Compensated (Neumaier) sum.
fn neumaier(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// `P(lo ≤ X ≤ hi)` for `X ~ Bin(n, p)`.
///
/// Terms are built as ratios relative to the mode, so nothing overflows,
/// and normalised by their own total.
pub fn binomial_interval_prob(n: u64, p: f64, lo: u64, hi: u64) -> Result<f64, RobustnessError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(RobustnessError::InvalidArgument(format!("p = {p} not in [0, 1]")));
    }
    if lo > hi || hi > n {
        return Err(RobustnessError::InvalidArgument(format!(
            "need 0 <= lo <= hi <= n, got lo = {lo}, hi = {hi}, n = {n}"
        )));
    }
    if p == 0.0 {
        return Ok(if lo == 0 { 1.0 } else { 0.0 });
    }
    if p == 1.0 {
        return Ok(if hi == n { 1.0 } else { 0.0 });
    }
    let mode = (((n + 1) as f64) * p).floor().min(n as f64) as u64;
    let len = (n + 1) as usize;
    let mut terms = vec![0.0f64; len];
    terms[mode as usize] = 1.0;
    let odds = p / (1.0 - p);
    for k in mode..n {
        let prev = terms[k as usize];
        if prev == 0.0 {
            break;
        }
        terms[k as usize + 1] = prev * ((n - k) as f64 / (k + 1) as f64) * odds;
    }
    for k in (1..=mode).rev() {
        let prev = terms[k as usize];
        if prev == 0.0 {
            break;
        }
        terms[k as usize - 1] = prev * (k as f64 / (n - k + 1) as f64) / odds;
    }
    let total = neumaier(terms.iter().copied());
    let part = neumaier(terms[lo as usize..=hi as usize].iter().copied());
    Ok((part / total).clamp(0.0, 1.0))
}

/// Standard normal CDF.
pub fn normal_cdf(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    0.5 * statrs::function::erf::erfc(-z / std::f64::consts::SQRT_2)
}

/// `2·exp(−δ²·mean/(2+δ))`, the two-sided Chernoff tail bound.
pub fn chernoff_bound(mean: f64, delta: f64) -> Result<f64, RobustnessError> {
    if !(mean > 0.0 && delta > 0.0) {
        return Err(RobustnessError::InvalidArgument(format!(
            "mean and delta must be positive, got {mean}, {delta}"
        )));
    }
    Ok(2.0 * (-delta * delta * mean / (2.0 + delta)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn complete_multipartite(r: usize, n: usize) -> Graph {
        let mut b = GraphBuilder::new(r * n).unwrap();
        for u in 0..r * n {
            for v in u + 1..r * n {
                if u / n != v / n {
                    b.add_edge(u, v).unwrap();
                }
            }
        }
        b.build()
    }

    #[test]
    fn exact_examples() {
        let b = SearchBudget::default();
        let e = count_factor_subsets(&complete_multipartite(3, 3), 3, &b).unwrap();
        assert_eq!(e.count_with_empty, 56);
        assert_eq!(e.count_without_empty, 55);
        assert_eq!(e.histogram, vec![1, 0, 0, 27, 0, 0, 27, 0, 0, 1]);
        assert_eq!(e.trials, 512);
        let c4 = complete_multipartite(2, 2);
        assert_eq!(count_factor_subsets(&c4, 2, &b).unwrap().count_with_empty, 6);
        let empty = Graph::empty(4).unwrap();
        assert_eq!(count_factor_subsets(&empty, 2, &b).unwrap().count_with_empty, 1);
    }

    #[test]
    fn exact_refuses_large_graphs() {
        let g = Graph::empty(31).unwrap();
        assert!(matches!(
            count_factor_subsets(&g, 2, &SearchBudget::default()),
            Err(RobustnessError::TooLarge { n: 31, ceiling: 30 })
        ));
        let g = Graph::empty(5).unwrap();
        assert!(count_factor_subsets_capped(&g, 2, &SearchBudget::default(), 4).is_err());
    }

    #[test]
    fn exact_unknown_is_an_error() {
        let g = Graph::complete(12).unwrap();
        assert!(matches!(
            count_factor_subsets(&g, 3, &SearchBudget::nodes(1)),
            Err(RobustnessError::Unknown(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic_and_close() {
        let g = complete_multipartite(2, 2);
        let cfg = SamplingConfig::new(0.5, 10_000, 42);
        let a = estimate_factor_probability(&g, 2, &cfg).unwrap();
        let b = estimate_factor_probability(&g, 2, &cfg).unwrap();
        assert_eq!(a, b);
        assert!((a.fraction - 0.375).abs() <= 3.0 * a.std_error);
        assert_eq!(a.unknown_trials, 0);
    }

    #[test]
    fn sampling_counts_unknown_separately() {
        let g = Graph::complete(12).unwrap();
        let mut cfg = SamplingConfig::new(0.5, 50, 1);
        cfg.budget_per_trial = SearchBudget::nodes(1);
        let e = estimate_factor_probability(&g, 3, &cfg).unwrap();
        assert!(e.unknown_trials > 0);
        assert!(e.count_with_empty + e.unknown_trials <= 50);
    }

    #[test]
    fn sampling_config_validation() {
        let g = Graph::empty(3).unwrap();
        assert!(estimate_factor_probability(&g, 2, &SamplingConfig::new(0.0, 10, 0)).is_err());
        assert!(estimate_factor_probability(&g, 2, &SamplingConfig::new(0.5, 0, 0)).is_err());
    }

    #[test]
    fn probability_utilities() {
        assert!((binomial_interval_prob(4, 0.5, 2, 2).unwrap() - 0.375).abs() < 1e-15);
        assert!((binomial_interval_prob(37, 0.3, 0, 37).unwrap() - 1.0).abs() < 1e-12);
        assert!(binomial_interval_prob(4, 0.5, 3, 2).is_err());
        assert!(binomial_interval_prob(4, 0.5, 0, 5).is_err());
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!(normal_cdf(8.0) >= 1.0 - 1e-15);
        assert!((normal_cdf(2.0) - 0.97725).abs() < 1e-5);
        let c = chernoff_bound(100.0, 1.0).unwrap();
        assert!((c - 2.0 * (-100.0f64 / 3.0).exp()).abs() < 1e-25);
        assert!((chernoff_bound(50.0, 0.5).unwrap() - 2.0 * (-5.0f64).exp()).abs() < 1e-15);
        assert!(chernoff_bound(200.0, 1.0).unwrap() < c);
        assert!(chernoff_bound(0.0, 1.0).is_err());
    }

    #[test]
    fn csv_row_has_every_field() {
        let g = complete_multipartite(2, 2);
        let e = count_factor_subsets(&g, 2, &SearchBudget::default()).unwrap();
        let row = e.csv_row("c4");
        assert_eq!(
            row.split(',').count(),
            RobustnessEstimate::CSV_HEADER.split(',').count()
        );
        assert!(row.starts_with("c4,2,exact,"));
    }
}

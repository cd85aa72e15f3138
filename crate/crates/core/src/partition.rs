//! Sparse sets, vertex classification and good partitions.
//!
//! A partition `{A_1, ..., A_s, B}` of an `rn`-vertex graph is *good* for
//! parameters `(α, β, β', γ)` when conditions A1 to A7 hold; see
//! [`verify_good_partition`] for the exact list.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor::{maximum_matching_within, FactorError, Meter, SearchBudget, Verdict};
use crate::graph::{Graph, GraphError, LabeledPartition, Role, VertexSet};

const EPS: f64 = 1e-9;

/// Above this many candidate vertices the sparse-set search is heuristic.
pub const EXACT_SPARSE_CEILING: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PartitionError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("graph has {found} vertices but r·n = {expected}")]
    Order { found: usize, expected: usize },
    #[error("partition ground set does not match the graph")]
    GroundMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionParams {
    pub alpha: f64,
    pub beta: f64,
    pub beta_prime: f64,
    pub gamma: f64,
    pub n: usize,
    pub r: usize,
}

impl PartitionParams {
    pub fn new(alpha: f64, beta: f64, beta_prime: f64, gamma: f64, n: usize, r: usize) -> Result<Self, PartitionError> {
        let p = Self {
            alpha,
            beta,
            beta_prime,
            gamma,
            n,
            r,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), PartitionError> {
        for (name, x) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("beta_prime", self.beta_prime),
            ("gamma", self.gamma),
        ] {
            if !(x > 0.0 && x < 1.0) {
                return Err(PartitionError::InvalidParams(format!("{name} = {x} not in (0, 1)")));
            }
        }
        if self.n == 0 {
            return Err(PartitionError::InvalidParams("n must be at least 1".into()));
        }
        if self.r < 2 {
            return Err(PartitionError::InvalidParams("r must be at least 2".into()));
        }
        Ok(())
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    /// `α^{1/5}·n`, the threshold used for good and exceptional vertices.
    pub fn good_threshold(&self) -> f64 {
        self.alpha.powf(0.2) * self.nf()
    }
}

// ---------------------------------------------------------------------------
// Sparse sets

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseSetResult {
    pub set: VertexSet,
    pub edges_inside: usize,
    pub is_exact: bool,
}

struct SparseSearch<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    size: usize,
    meter: Meter,
    best: (usize, VertexSet),
}

impl SparseSearch<'_> {
    fn go(&mut self, idx: usize, chosen: VertexSet, edges: usize) {
        if edges >= self.best.0 {
            return;
        }
        if chosen.len() == self.size {
            self.best = (edges, chosen);
            return;
        }
        if self.order.len() - idx < self.size - chosen.len() || !self.meter.tick() {
            return;
        }
        let v = self.order[idx];
        let add = self.g.degree_into(v, &chosen);
        self.go(idx + 1, chosen | VertexSet::singleton(v), edges + add);
        self.go(idx + 1, chosen, edges);
    }
}

fn greedy_sparse(g: &Graph, within: &VertexSet, size: usize, start: usize) -> VertexSet {
    let mut s = VertexSet::singleton(start);
    while s.len() < size {
        let pick = (*within - s)
            .iter()
            .min_by_key(|&v| (g.degree_into(v, &s), g.degree_into(v, within), v))
            .expect("enough vertices");
        s.insert(pick);
    }
    // Best-improvement swaps until none lowers the edge count.
    loop {
        let mut best: Option<(isize, usize, usize)> = None;
        for u in s.iter() {
            let rest = s - VertexSet::singleton(u);
            let du = g.degree_into(u, &rest) as isize;
            for v in (*within - s).iter() {
                let delta = g.degree_into(v, &rest) as isize - du;
                if delta < 0 && best.is_none_or(|b| delta < b.0) {
                    best = Some((delta, u, v));
                }
            }
        }
        match best {
            Some((_, u, v)) => {
                s.remove(u);
                s.insert(v);
            }
            None => return s,
        }
    }
}

/// The `size`-subset of `within` spanning the fewest edges.
///
/// Exact by branch and bound when `|within| ≤ 24` and the budget suffices;
/// otherwise the best of several greedy starts refined by swaps.
pub fn min_edges_subset_within(
    g: &Graph,
    within: &VertexSet,
    size: usize,
    budget: &SearchBudget,
) -> Result<SparseSetResult, PartitionError> {
    g.check_subset(within)?;
    if size > within.len() {
        return Err(PartitionError::InvalidParams(format!(
            "size {size} exceeds the {} available vertices",
            within.len()
        )));
    }
    if size == 0 {
        return Ok(SparseSetResult {
            set: VertexSet::EMPTY,
            edges_inside: 0,
            is_exact: true,
        });
    }
    // Low-degree vertices first so good sets are met early.
    let mut order: Vec<usize> = within.iter().collect();
    order.sort_by_key(|&v| (g.degree_into(v, within), v));

    let starts: Vec<usize> = order.iter().copied().take(8).collect();
    let heuristic = starts
        .par_iter()
        .map(|&s| {
            let set = greedy_sparse(g, within, size, s);
            (g.edges_within(&set), set)
        })
        .min()
        .expect("at least one start");

    if within.len() > EXACT_SPARSE_CEILING {
        return Ok(SparseSetResult {
            set: heuristic.1,
            edges_inside: heuristic.0,
            is_exact: false,
        });
    }
    let mut search = SparseSearch {
        g,
        order,
        size,
        meter: Meter::new(budget),
        best: (heuristic.0 + 1, heuristic.1),
    };
    search.go(0, VertexSet::EMPTY, 0);
    let exact = !search.meter.exhausted();
    let (edges, set) = if search.best.0 <= heuristic.0 {
        search.best
    } else {
        heuristic
    };
    Ok(SparseSetResult {
        set,
        edges_inside: edges,
        is_exact: exact,
    })
}

pub fn min_edges_subset(g: &Graph, size: usize, budget: &SearchBudget) -> Result<SparseSetResult, PartitionError> {
    min_edges_subset_within(g, &g.vertices(), size, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependentSetAnswer {
    pub verdict: Verdict,
    pub witness: Option<VertexSet>,
    pub min_edges: SparseSetResult,
    pub limit: f64,
}

/// Is there a `size`-subset of `within` with at most `γ·n_scale²` edges?
pub fn has_gamma_independent_set_within(
    g: &Graph,
    within: &VertexSet,
    size: usize,
    gamma: f64,
    n_scale: usize,
    budget: &SearchBudget,
) -> Result<IndependentSetAnswer, PartitionError> {
    let res = min_edges_subset_within(g, within, size, budget)?;
    let limit = gamma * (n_scale * n_scale) as f64;
    let hit = res.edges_inside as f64 <= limit + EPS;
    let verdict = if hit {
        Verdict::Yes
    } else if res.is_exact {
        Verdict::No
    } else {
        Verdict::Unknown
    };
    Ok(IndependentSetAnswer {
        verdict,
        witness: hit.then_some(res.set),
        min_edges: res,
        limit,
    })
}

pub fn has_gamma_independent_set(
    g: &Graph,
    size: usize,
    gamma: f64,
    n_scale: usize,
    budget: &SearchBudget,
) -> Result<IndependentSetAnswer, PartitionError> {
    has_gamma_independent_set_within(g, &g.vertices(), size, gamma, n_scale, budget)
}

// ---------------------------------------------------------------------------
// Classification

/// Good, bad and exceptional flags for one threshold `t = α·n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexClassification {
    pub threshold: f64,
    /// `good[i]`: vertices of class `i` with at most `t` neighbours in it.
    pub good: Vec<VertexSet>,
    /// `bad[i]`: vertices outside class `i` with at most `t` neighbours in it.
    pub bad: Vec<VertexSet>,
    /// `exceptional[i]`: vertices of class `i` missing at least `t`
    /// neighbours of some other class.
    pub exceptional: Vec<VertexSet>,
}

/// Classification with a caller-supplied `α` (threshold `α·n_scale`).
pub fn classify_vertices_raw(g: &Graph, p: &LabeledPartition, alpha: f64, n_scale: usize) -> VertexClassification {
    let t = alpha * n_scale as f64;
    let k = p.num_classes();
    let mut good = vec![VertexSet::EMPTY; k];
    let mut bad = vec![VertexSet::EMPTY; k];
    let mut exceptional = vec![VertexSet::EMPTY; k];
    for v in p.ground().iter() {
        let own = p.class_of(v).expect("v in ground");
        for j in 0..k {
            let cj = p.class(j);
            let d = g.degree_into(v, cj) as f64;
            if j == own {
                if d <= t + EPS {
                    good[j].insert(v);
                }
            } else {
                if d <= t + EPS {
                    bad[j].insert(v);
                }
                if d <= cj.len() as f64 - t + EPS {
                    exceptional[own].insert(v);
                }
            }
        }
    }
    VertexClassification {
        threshold: t,
        good,
        bad,
        exceptional,
    }
}

/// Classification at the `α^{1/5}·n` threshold used by A3 and A6.
pub fn classify_vertices(g: &Graph, p: &LabeledPartition, params: &PartitionParams) -> VertexClassification {
    classify_vertices_raw(g, p, params.alpha.powf(0.2), params.n)
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    pub value: f64,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub set: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionVerdict {
    pub condition: String,
    pub pass: bool,
    /// Set when the check could not be completed; `pass` is then `false`.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub inconclusive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GoodPartitionReport {
    pub conditions: Vec<ConditionVerdict>,
    pub params: PartitionParams,
}

impl GoodPartitionReport {
    pub fn is_good(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn is_inconclusive(&self) -> bool {
        self.conditions.iter().any(|c| c.inconclusive)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.condition.as_str())
            .collect()
    }

    pub fn get(&self, condition: &str) -> Option<&ConditionVerdict> {
        self.conditions.iter().find(|c| c.condition == condition)
    }
}

struct Check {
    name: &'static str,
    witness: Option<Witness>,
    inconclusive: bool,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            witness: None,
            inconclusive: false,
        }
    }

    fn fail(&mut self, vertex: Option<usize>, class: Option<String>, value: f64, threshold: f64) {
        if self.witness.is_none() {
            self.witness = Some(Witness {
                vertex,
                class,
                value,
                threshold,
                set: None,
            });
        }
    }

    fn done(self) -> ConditionVerdict {
        ConditionVerdict {
            condition: self.name.into(),
            pass: self.witness.is_none() && !self.inconclusive,
            inconclusive: self.inconclusive,
            witness: self.witness,
        }
    }
}

fn class_name(p: &LabeledPartition, i: usize) -> Option<String> {
    Some(p.role(i).to_string())
}

/// Evaluates A1 to A7 with witnesses for every failure.
///
/// When `s = r` there is no `B` and the `B` parts of A1, A5, A6 and A7 hold
/// vacuously. A7 is decided exactly when `|B| ≤ 24`; otherwise a heuristic
/// miss makes the condition inconclusive.
pub fn verify_good_partition(
    g: &Graph,
    p: &LabeledPartition,
    params: &PartitionParams,
    budget: &SearchBudget,
) -> Result<GoodPartitionReport, PartitionError> {
    params.validate()?;
    let (r, n) = (params.r, params.n);
    let nf = n as f64;
    if g.n() != r * n {
        return Err(PartitionError::Order {
            found: g.n(),
            expected: r * n,
        });
    }
    if p.ground() != g.vertices() {
        return Err(PartitionError::GroundMismatch);
    }
    let s = p.s();
    let (alpha, beta) = (params.alpha, params.beta);
    let b = p.b();
    let b_idx = p.b_index();
    let cls = classify_vertices(g, p, params);
    let mut out = Vec::with_capacity(7);

    // A1
    let mut c = Check::new("A1");
    if s > r {
        c.fail(None, None, s as f64, r as f64);
    }
    for i in 0..s {
        let sz = p.a(i).len() as f64;
        if sz > nf + alpha * nf + EPS {
            c.fail(None, class_name(p, i), sz, nf + alpha * nf);
        }
    }
    let rs = r.saturating_sub(s) as f64;
    let bl = b.len() as f64;
    let (lo, hi) = (rs * nf - r as f64 * alpha * nf, rs * nf + r as f64 * alpha * nf);
    if bl < lo - EPS {
        c.fail(None, Some("B".into()), bl, lo);
    } else if bl > hi + EPS {
        c.fail(None, Some("B".into()), bl, hi);
    }
    out.push(c.done());

    // A2
    let mut c = Check::new("A2");
    for i in 0..s {
        let a = p.a(i);
        let sz = a.len();
        if sz > n {
            let maxd = g.max_degree_within(a) as f64;
            if maxd > params.beta_prime * nf + EPS {
                let v = a
                    .iter()
                    .find(|&v| g.degree_into(v, a) as f64 == maxd)
                    .expect("vertex of max degree");
                c.fail(Some(v), class_name(p, i), maxd, params.beta_prime * nf);
            }
            let nu = maximum_matching_within(g, a).len();
            let need = sz - n + r;
            if nu < need {
                c.fail(None, class_name(p, i), nu as f64, need as f64);
            }
        } else if sz == n && g.edges_within(a) == 0 {
            c.fail(None, class_name(p, i), 0.0, 1.0);
        }
    }
    out.push(c.done());

    // A3
    let mut c = Check::new("A3");
    for i in 0..s {
        let a = p.a(i);
        let good = cls.good[i].len() as f64;
        let need = a.len() as f64 - 2.0 * alpha * nf;
        if good < need - EPS {
            c.fail(None, class_name(p, i), good, need);
        }
    }
    out.push(c.done());

    // A4
    let mut c = Check::new("A4");
    'a4: for i in 0..s {
        let a = p.a(i);
        for v in (g.vertices() - *a).iter() {
            let d = g.degree_into(v, a) as f64;
            if d < beta * nf - EPS {
                c.fail(Some(v), class_name(p, i), d, beta * nf);
                break 'a4;
            }
        }
    }
    out.push(c.done());

    // A5
    let mut c = Check::new("A5");
    if s < r {
        for v in (g.vertices() - b).iter() {
            let d = g.degree_into(v, &b) as f64;
            if d < beta * nf - EPS {
                c.fail(Some(v), Some("B".into()), d, beta * nf);
                break;
            }
        }
        let need = (r - s - 1) as f64 * nf - r as f64 * alpha * nf;
        if let Some(v) = b.iter().min_by_key(|&v| (g.degree_into(v, &b), v)) {
            let d = g.degree_into(v, &b) as f64;
            if d < need - EPS {
                c.fail(Some(v), Some("B".into()), d, need);
            }
        }
    }
    out.push(c.done());

    // A6
    let mut c = Check::new("A6");
    if let Some(bi) = b_idx {
        let count = cls.exceptional[bi].len() as f64;
        let lim = r as f64 * alpha * nf;
        if count > lim + EPS {
            c.fail(None, Some("B".into()), count, lim);
            if let Some(w) = c.witness.as_mut() {
                w.set = Some(cls.exceptional[bi].to_vec());
            }
        }
    }
    out.push(c.done());

    // A7
    let mut c = Check::new("A7");
    if s < r && !b.is_empty() {
        let size = b.len().div_ceil(r - s);
        let ans = has_gamma_independent_set_within(g, &b, size, params.gamma, n, budget)?;
        match ans.verdict {
            Verdict::No => {}
            Verdict::Yes => {
                c.fail(None, Some("B".into()), ans.min_edges.edges_inside as f64, ans.limit);
                if let Some(w) = c.witness.as_mut() {
                    w.set = ans.witness.map(|s| s.to_vec());
                }
            }
            Verdict::Unknown => c.inconclusive = true,
        }
    }
    out.push(c.done());

    Ok(GoodPartitionReport {
        conditions: out,
        params: params.clone(),
    })
}

// ---------------------------------------------------------------------------
// Construction

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BuildStatus {
    Built,
    Failed,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Move {
    pub vertex: usize,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildTrace {
    pub gammas: Vec<f64>,
    /// Edge counts of the extracted sparse `n`-sets.
    pub extracted_edges: Vec<usize>,
    pub relocations: Vec<Move>,
    pub cleaning_moves: Vec<Move>,
    /// No vertex was `(2β)`-bad for two A-classes at once.
    pub mutual_exclusion: bool,
    /// After relocation every vertex had at least `1.5·β·n` neighbours in
    /// every other nonempty class. Recorded, not required.
    pub relocation_slack: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildOutcome {
    pub status: BuildStatus,
    /// Phase that produced a failure or unknown: "extraction",
    /// "relocation", "cleaning" or "verification".
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip)]
    pub partition: Option<LabeledPartition>,
    pub report: Option<GoodPartitionReport>,
    pub trace: BuildTrace,
}

/// Default escalating schedule `γ_i = γ·10^i` for `i = 1..=r`.
pub fn default_gamma_schedule(gamma: f64, r: usize) -> Vec<f64> {
    (1..=r).map(|i| gamma * 10f64.powi(i as i32)).collect()
}

fn role_name(s: usize, i: usize) -> String {
    if i < s {
        Role::A(i + 1).to_string()
    } else {
        Role::B.to_string()
    }
}

/// Builds a good partition in three phases: greedy extraction of sparse
/// `n`-sets, relocation of `(2β)`-bad vertices, and degree cleaning of
/// oversized classes. The result is re-verified before it is returned.
pub fn build_good_partition(
    g: &Graph,
    params: &PartitionParams,
    gammas: Option<&[f64]>,
    budget: &SearchBudget,
) -> Result<BuildOutcome, PartitionError> {
    params.validate()?;
    let (r, n) = (params.r, params.n);
    let nf = n as f64;
    if g.n() != r * n {
        return Err(PartitionError::Order {
            found: g.n(),
            expected: r * n,
        });
    }
    let gammas: Vec<f64> = match gammas {
        Some(gs) => {
            if gs.len() < r || gs.windows(2).any(|w| w[0] > w[1]) {
                return Err(PartitionError::InvalidParams(
                    "gamma schedule needs r non-decreasing entries".into(),
                ));
            }
            gs.to_vec()
        }
        None => default_gamma_schedule(params.gamma, r),
    };
    let mut trace = BuildTrace {
        gammas: gammas.clone(),
        mutual_exclusion: true,
        relocation_slack: true,
        ..Default::default()
    };
    let stop = |status, phase: &str, reason: String, trace: BuildTrace| BuildOutcome {
        status,
        phase: Some(phase.into()),
        reason: Some(reason),
        partition: None,
        report: None,
        trace,
    };

    // Phase 1: greedy sparse n-sets.
    let mut rest = g.vertices();
    let mut a_sets: Vec<VertexSet> = Vec::new();
    while a_sets.len() < r && rest.len() >= n {
        let gi = gammas[a_sets.len()];
        let ans = has_gamma_independent_set_within(g, &rest, n, gi, n, budget)?;
        match ans.verdict {
            Verdict::Yes => {
                let set = ans.witness.expect("witness on yes");
                trace.extracted_edges.push(ans.min_edges.edges_inside);
                rest = rest - set;
                a_sets.push(set);
            }
            Verdict::No => break,
            Verdict::Unknown => {
                return Ok(stop(
                    BuildStatus::Unknown,
                    "extraction",
                    format!("sparse-set search for A_{} was inconclusive", a_sets.len() + 1),
                    trace,
                ))
            }
        }
    }
    if a_sets.is_empty() {
        return Ok(stop(
            BuildStatus::Failed,
            "extraction",
            format!("no {}-independent set of size {n}", gammas[0]),
            trace,
        ));
    }
    let s = a_sets.len();
    let has_b = s < r;
    let mut classes: Vec<VertexSet> = a_sets.clone();
    if has_b {
        classes.push(rest);
    }

    // Phase 2: move (2β, D)-bad vertices into D, judged against P_0.
    let k = classes.len();
    let mut bad_for: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, d) in classes.iter().enumerate() {
        if d.is_empty() {
            continue;
        }
        for v in (g.vertices() - *d).iter() {
            if g.degree_into(v, d) as f64 <= 2.0 * params.beta * nf + EPS {
                bad_for.entry(v).or_default().push(i);
            }
        }
    }
    let mut next = classes.clone();
    for (&v, targets) in &bad_for {
        if targets.iter().filter(|&&i| i < s).count() > 1 {
            trace.mutual_exclusion = false;
        }
        let to = targets[0];
        let from = classes.iter().position(|c| c.contains(v)).expect("v classified");
        for c in next.iter_mut() {
            c.remove(v);
        }
        next[to].insert(v);
        trace.relocations.push(Move {
            vertex: v,
            from: role_name(s, from),
            to: role_name(s, to),
        });
    }
    classes = next;
    for v in g.vertices().iter() {
        for c in &classes {
            if !c.contains(v) && !c.is_empty() && (g.degree_into(v, c) as f64) < 1.5 * params.beta * nf - EPS {
                trace.relocation_slack = false;
            }
        }
    }

    // Phase 3: clean oversized A-classes of high internal degree.
    let target_size = |i: usize| if i < s { n } else { (r - s) * n };
    let mut guard = 0;
    loop {
        guard += 1;
        if guard > 4 * g.n() + 4 {
            return Ok(stop(
                BuildStatus::Failed,
                "cleaning",
                "degree cleaning did not terminate".into(),
                trace,
            ));
        }
        let offender = (0..s).find_map(|i| {
            let a = classes[i];
            if a.len() <= n {
                return None;
            }
            let (d, v) = a
                .iter()
                .map(|v| (g.degree_into(v, &a), v))
                .max_by_key(|&(d, v)| (d, std::cmp::Reverse(v)))?;
            (d as f64 > params.beta * nf + EPS).then_some((i, v))
        });
        let Some((i, v)) = offender else { break };
        let dest = (0..k)
            .filter(|&j| j != i && classes[j].len() < target_size(j))
            .min_by_key(|&j| (classes[j].len(), j));
        let Some(j) = dest else { break };
        classes[i].remove(v);
        classes[j].insert(v);
        trace.cleaning_moves.push(Move {
            vertex: v,
            from: role_name(s, i),
            to: role_name(s, j),
        });
    }

    let a = classes[..s].to_vec();
    let b = has_b.then(|| classes[s]);
    let p = LabeledPartition::new(g.n(), a, b)?;
    let report = verify_good_partition(g, &p, params, budget)?;
    if report.is_good() {
        Ok(BuildOutcome {
            status: BuildStatus::Built,
            phase: None,
            reason: None,
            partition: Some(p),
            report: Some(report),
            trace,
        })
    } else {
        let status = if report.is_inconclusive() {
            BuildStatus::Unknown
        } else {
            BuildStatus::Failed
        };
        let reason = format!("conditions {} do not hold", report.failed().join(", "));
        Ok(BuildOutcome {
            status,
            phase: Some("verification".into()),
            reason: Some(reason),
            partition: Some(p),
            report: Some(report),
            trace,
        })
    }
}

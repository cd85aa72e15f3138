//! Extremal-case factor construction from a good partition.
//!
//! Given `G` on `rn` vertices with a verified good partition
//! `{A_1, ..., A_s, B}`, the pipeline
//!
//! 1. covers bad and exceptional vertices with cliques of index vector
//!    `(1, ..., 1, r-s)` (tilings `Q` and `T`, together `K`);
//! 2. fixes divisibility of `B` with cliques `H`, rebalances with cliques
//!    `R` through reserved matching edges, and reserves `K_{r-s+1}` copies `F`;
//! 3. finds a `K_{r-s}`-factor of what is left of `B`;
//! 4. contracts that factor and `F` into an auxiliary graph `G*`;
//! 5. finds a `K_{s+1}`-factor of `G*` by balancing and a transversal search;
//! 6. lifts it back and validates the result against `G`.
//!
//! Every existence step is an exact bounded search; when one comes up empty
//! the state moves to [`Stage::Failed`] and names the step.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor::{
    extend_clique_with_index_vector, greedy_clique_tiling, has_kr_factor_within, maximum_matching_within,
    min_vertex_cover_within, mixed_clique_factor, multipartite_kr_factor, FactorError, FactorResult, SearchBudget,
    Verdict,
};
use crate::graph::{Clique, Graph, GraphBuilder, GraphError, IndexVector, LabeledPartition, Tiling, VertexSet};
use crate::partition::{
    classify_vertices, verify_good_partition, GoodPartitionReport, PartitionError, PartitionParams,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("partition is not good: {} fail", failed.join(", "))]
    NotGood {
        failed: Vec<String>,
        report: Box<GoodPartitionReport>,
    },
    #[error("partition check was inconclusive")]
    Inconclusive(Box<GoodPartitionReport>),
    #[error("stage {found:?} reached out of order; expected {expected:?}")]
    WrongStage { expected: Stage, found: Stage },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage {
    Init,
    Covered,
    DivisibilityFixed,
    Contracted,
    Balanced,
    Done,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct PipelineConfig {
    pub budget: SearchBudget,
    /// Allow clique extensions to fall back to non-good vertices.
    pub relaxed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityLedger {
    /// `|B \ V(K)| mod (r-s)`.
    pub q: usize,
    /// `|Ĝ|/r - |B̂|/(r-s)`.
    pub a: i64,
    /// `|B'|/(r-s) - |G'|/r`.
    pub b: i64,
    pub q_i: Vec<usize>,
    pub p_i: Vec<usize>,
    /// `|A_i| - n` for the sorted A-classes.
    pub k_i: Vec<i64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tilings {
    #[serde(rename = "K")]
    pub k: Tiling,
    #[serde(rename = "H")]
    pub h: Tiling,
    #[serde(rename = "R")]
    pub r: Tiling,
    #[serde(rename = "F")]
    pub f: Tiling,
    #[serde(rename = "Q")]
    pub q: Tiling,
    #[serde(rename = "T")]
    pub t: Tiling,
}

impl Tilings {
    /// Vertices used by `K ∪ H ∪ R ∪ F`.
    pub fn used(&self) -> VertexSet {
        self.k.covered() | self.h.covered() | self.r.covered() | self.f.covered()
    }

    pub fn sizes(&self) -> BTreeMap<String, usize> {
        [
            ("K", self.k.len()),
            ("H", self.h.len()),
            ("R", self.r.len()),
            ("F", self.f.len()),
            ("Q", self.q.len()),
            ("T", self.t.len()),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: String,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub stage: Stage,
    pub ledger: DivisibilityLedger,
    pub tilings: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// What a vertex of `B*` stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BStarOrigin {
    /// `w_i`: the `i`-th clique of the `K_{r-s}`-factor.
    Single(usize),
    /// One end of the edge `w_j w_j'` standing for the `j`-th clique of `F`.
    Pair(usize, u8),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContractedGraph {
    pub graph: Graph,
    /// `{A_1', ..., A_s', B*}` in `G*` ids.
    pub partition: LabeledPartition,
    /// Original id of each A-vertex of `G*`; `None` for `B*` vertices.
    pub original: Vec<Option<usize>>,
    /// Origin of each `B*` vertex; `None` for A-vertices.
    pub origin: Vec<Option<BStarOrigin>>,
    /// Cliques of the `K_{r-s}`-factor, original ids.
    pub singles: Vec<Clique>,
    /// Cliques of `F`, original ids.
    pub pairs: Vec<Clique>,
    /// `G*` ids of `(w_j, w_j')`.
    pub pair_ends: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceOutcome {
    /// `K_{s+1}`-factor of `G*`, in `G*` ids.
    pub factor: Tiling,
    pub step_cliques: usize,
    pub class_size: usize,
    /// `max |V_i| / (|G*|/(s+1))`.
    pub size_ratio: f64,
    /// `min d(v, V_j) / |V_j|` over `v ∉ V_j`.
    pub cross_degree_ratio: f64,
    pub nodes: u64,
}

#[derive(Clone, Debug)]
pub struct PipelineState {
    pub stage: Stage,
    pub r: usize,
    pub s: usize,
    pub n: usize,
    /// Working partition with A-classes sorted by size.
    pub partition: LabeledPartition,
    /// `class_order[i]` is the input index of the `i`-th sorted A-class.
    pub class_order: Vec<usize>,
    pub matchings: Vec<Tiling>,
    pub u: VertexSet,
    pub u_prime: VertexSet,
    pub good: Vec<VertexSet>,
    pub exceptional_b: VertexSet,
    pub tilings: Tilings,
    pub ledger: DivisibilityLedger,
    pub residual_partition: Option<LabeledPartition>,
    pub b_factor: Option<Tiling>,
    pub contracted: Option<ContractedGraph>,
    pub balance: Option<BalanceOutcome>,
    pub factor: Option<Tiling>,
    pub failure: Option<StageFailure>,
    pub trace: Vec<TraceRecord>,
    pub notes: Vec<String>,
    cfg: PipelineConfig,
}

fn ones(len: usize) -> Vec<usize> {
    vec![1; len]
}

impl PipelineState {
    /// Sorts the A-classes, picks the matchings `M_i` and the set `U`.
    pub fn new(
        g: &Graph,
        p: &LabeledPartition,
        params: &PartitionParams,
        cfg: PipelineConfig,
    ) -> Result<Self, PipelineError> {
        params.validate()?;
        let (r, n) = (params.r, params.n);
        let s = p.s();
        if g.n() != r * n || p.ground() != g.vertices() {
            return Err(PipelineError::Input(format!(
                "graph order {} and partition must cover r·n = {} vertices",
                g.n(),
                r * n
            )));
        }
        if s > r || (s < r && !p.has_b()) {
            return Err(PipelineError::Input(format!(
                "need s ≤ r and a B-class when s < r (s = {s})"
            )));
        }
        let mut class_order: Vec<usize> = (0..s).collect();
        class_order.sort_by_key(|&i| (p.a(i).len(), i));
        let a: Vec<VertexSet> = class_order.iter().map(|&i| *p.a(i)).collect();
        let b = (s < r).then(|| p.b());
        if s == r && !p.b().is_empty() {
            return Err(PipelineError::Input("s = r leaves no room for a nonempty B".into()));
        }
        let partition = LabeledPartition::new(g.n(), a, b)?;
        let cls = classify_vertices(g, &partition, params);
        let exceptional_b = partition.b_index().map_or(VertexSet::EMPTY, |bi| cls.exceptional[bi]);

        let mut matchings = Vec::with_capacity(s);
        for i in 0..s {
            let ai = *partition.a(i);
            let mut m = Tiling::new();
            if ai.len() > n {
                let need = ai.len() - n + r;
                let mm = maximum_matching_within(g, &ai);
                if mm.len() < need {
                    return Err(PipelineError::Invariant(format!(
                        "A_{} has matching number {} < {need}",
                        i + 1,
                        mm.len()
                    )));
                }
                for c in mm.cliques().iter().take(need) {
                    m.push(c.clone())?;
                }
            } else if i + 1 == s && ai.len() == n {
                let good = cls.good[i];
                let mut best: Option<(usize, (usize, usize))> = None;
                for (x, y) in g.edges() {
                    if ai.contains(x) && ai.contains(y) {
                        let bad = usize::from(!good.contains(x)) + usize::from(!good.contains(y));
                        if best.is_none_or(|b| bad < b.0) {
                            best = Some((bad, (x, y)));
                        }
                    }
                }
                match best {
                    Some((bad, (x, y))) if bad <= 1 || cfg.relaxed => m.push(Clique::new(g, vec![x, y])?)?,
                    _ => {
                        return Err(PipelineError::Invariant(format!(
                            "A_{} has no edge with at most one non-good end",
                            i + 1
                        )))
                    }
                }
            }
            matchings.push(m);
        }
        let u = matchings.iter().fold(VertexSet::EMPTY, |acc, m| acc | m.covered());
        let ledger = DivisibilityLedger {
            k_i: (0..s).map(|i| partition.a(i).len() as i64 - n as i64).collect(),
            ..Default::default()
        };
        let mut st = Self {
            stage: Stage::Init,
            r,
            s,
            n,
            partition,
            class_order,
            matchings,
            u,
            u_prime: VertexSet::EMPTY,
            good: cls.good,
            exceptional_b,
            tilings: Tilings::default(),
            ledger,
            residual_partition: None,
            b_factor: None,
            contracted: None,
            balance: None,
            factor: None,
            failure: None,
            trace: Vec::new(),
            notes: Vec::new(),
            cfg,
        };
        st.record(None);
        Ok(st)
    }

    fn has_b(&self) -> bool {
        self.s < self.r
    }

    fn t(&self) -> usize {
        self.r - self.s
    }

    fn b(&self) -> VertexSet {
        self.partition.b()
    }

    /// `(1, ..., 1, r-s)`, or all ones when there is no B.
    fn base_target(&self) -> Vec<usize> {
        let mut t = ones(self.s);
        if self.has_b() {
            t.push(self.t());
        }
        t
    }

    fn record(&mut self, note: Option<String>) {
        self.trace.push(TraceRecord {
            stage: self.stage,
            ledger: self.ledger.clone(),
            tilings: self.tilings.sizes(),
            note,
        });
    }

    fn fail(&mut self, stage: &str, reason: String) {
        self.stage = Stage::Failed;
        self.failure = Some(StageFailure {
            stage: stage.into(),
            reason: reason.clone(),
        });
        self.record(Some(format!("{stage}: {reason}")));
    }

    fn expect(&self, expected: Stage) -> Result<(), PipelineError> {
        if self.stage != expected {
            return Err(PipelineError::WrongStage {
                expected,
                found: self.stage,
            });
        }
        Ok(())
    }

    /// Good A-vertices and the given B pool, minus `avoid`.
    fn pools(&self, b_pool: VertexSet, avoid: VertexSet) -> Vec<VertexSet> {
        let mut p: Vec<VertexSet> = (0..self.s).map(|i| self.good[i] - avoid).collect();
        if self.has_b() {
            p.push(b_pool - avoid);
        }
        p
    }

    /// Strict extension from the given pools, then the relaxed retry.
    fn extend(
        &self,
        g: &Graph,
        seed: &[usize],
        target: Vec<usize>,
        forbidden: VertexSet,
        pools: Vec<VertexSet>,
    ) -> Result<Option<Clique>, PipelineError> {
        let seed = Clique::new(g, seed.to_vec())?;
        let target = IndexVector(target);
        if let Some(c) = extend_clique_with_index_vector(g, &self.partition, &seed, &target, &forbidden, Some(&pools))?
        {
            return Ok(Some(c));
        }
        if self.cfg.relaxed {
            return Ok(extend_clique_with_index_vector(
                g,
                &self.partition,
                &seed,
                &target,
                &forbidden,
                None,
            )?);
        }
        Ok(None)
    }
}

// ---------------------------------------------------------------------------
// Step 1

/// Covers every Type-1 vertex (a non-good vertex of a class with
/// `|A_i| ≤ n`, outside `U`) and every Type-2 vertex (an exceptional vertex
/// of `B`) by a clique of index vector `(1, ..., 1, r-s)` avoiding `U`.
pub fn cover_bad_and_exceptional(g: &Graph, st: &mut PipelineState) -> Result<(), PipelineError> {
    st.expect(Stage::Init)?;
    let n = st.n;
    let mut type1 = VertexSet::EMPTY;
    for i in 0..st.s {
        let ai = *st.partition.a(i);
        if ai.len() <= n {
            type1 |= ai - st.u - st.good[i];
        }
    }
    let type2 = st.exceptional_b;
    let targets = type1 | type2;
    for (v, is_type1) in type1.iter().map(|v| (v, true)).chain(type2.iter().map(|v| (v, false))) {
        let used = st.tilings.used();
        if used.contains(v) {
            return Err(PipelineError::Invariant(format!("target {v} already covered")));
        }
        let forbidden = st.u | used | (targets - VertexSet::singleton(v));
        let b_pool = if is_type1 { st.b() } else { st.b() - st.exceptional_b };
        let pools = st.pools(b_pool, forbidden);
        match st.extend(g, &[v], st.base_target(), forbidden, pools)? {
            Some(c) => {
                st.tilings.k.push(c.clone())?;
                if is_type1 {
                    st.tilings.q.push(c)?;
                } else {
                    st.tilings.t.push(c)?;
                }
            }
            None => {
                let kind = if is_type1 { "Type-1" } else { "Type-2" };
                st.fail(
                    "cover",
                    format!(
                        "no clique with index vector {:?} through {kind} vertex {v}",
                        st.base_target()
                    ),
                );
                return Ok(());
            }
        }
    }
    st.stage = Stage::Covered;
    st.record(None);
    Ok(())
}

// ---------------------------------------------------------------------------
// Step 2.1

/// Greedy water-filling: `min(rest, cap_i)` in index order.
fn water_fill(total: usize, caps: &[usize]) -> Option<Vec<usize>> {
    let mut rest = total;
    let out: Vec<usize> = caps
        .iter()
        .map(|&c| {
            let x = rest.min(c);
            rest -= x;
            x
        })
        .collect();
    (rest == 0).then_some(out)
}

/// Builds `H`, `R` and `F` and the divisibility ledger.
pub fn fix_divisibility(g: &Graph, st: &mut PipelineState) -> Result<(), PipelineError> {
    st.expect(Stage::Covered)?;
    let (r, s, n) = (st.r, st.s, st.n);
    if !st.has_b() {
        st.residual_partition = Some(st.partition.restrict(&(g.vertices() - st.tilings.used())));
        st.stage = Stage::DivisibilityFixed;
        st.record(Some("s = r: no B-class".into()));
        return Ok(());
    }
    let t = st.t();
    let b = st.b();
    let brem = b - st.tilings.used();
    let q = brem.len() % t;
    st.ledger.q = q;

    // H: q copies of K_{t+1} in B, each completed by one good vertex from
    // every A-class but one.
    let last_large = st.partition.a(s - 1).len() > n;
    let skips: Vec<usize> = if last_large {
        st.ledger.q_i = vec![0; s];
        vec![s - 1; q]
    } else {
        let caps: Vec<usize> = (0..s).map(|i| n.saturating_sub(st.partition.a(i).len())).collect();
        let Some(qi) = water_fill(q, &caps) else {
            st.fail(
                "divisibility",
                format!("cannot split q = {q} over classes with room {caps:?}"),
            );
            return Ok(());
        };
        st.ledger.q_i = qi.clone();
        qi.iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i, c))
            .collect()
    };
    for j in skips {
        let forbidden = st.u | st.tilings.used();
        let mut target = ones(s);
        target[j] = 0;
        target.push(t + 1);
        let pools = st.pools(b, forbidden);
        match st.extend(g, &[], target.clone(), forbidden, pools)? {
            Some(c) => st.tilings.h.push(c)?,
            None => {
                st.fail("divisibility", format!("no clique with index vector {target:?} for H"));
                return Ok(());
            }
        }
    }

    let hat = g.vertices() - st.tilings.used();
    let b_hat = b & hat;
    if !hat.len().is_multiple_of(r) || !b_hat.len().is_multiple_of(t) {
        return Err(PipelineError::Invariant(format!(
            "after H: |Ĝ| = {}, |B̂| = {}",
            hat.len(),
            b_hat.len()
        )));
    }
    let a = (hat.len() / r) as i64 - (b_hat.len() / t) as i64;
    st.ledger.a = a;
    st.ledger.p_i = vec![0; s];

    if a > 0 {
        let want = t * a as usize;
        let per = hat.len() / r;
        let caps: Vec<usize> = (0..s)
            .map(|i| {
                let ai = *st.partition.a(i);
                if ai.len() > n {
                    (ai & hat).len().saturating_sub(per)
                } else {
                    0
                }
            })
            .collect();
        let Some(pi) = water_fill(want, &caps) else {
            st.fail(
                "divisibility",
                format!("cannot split (r-s)a = {want} over large classes with room {caps:?}"),
            );
            return Ok(());
        };
        st.ledger.p_i = pi.clone();
        let mut edges: Vec<(usize, Vec<usize>)> = Vec::new();
        for (i, &c) in pi.iter().enumerate() {
            let avail: Vec<Vec<usize>> = st.matchings[i]
                .cliques()
                .iter()
                .filter(|e| e.vertices().iter().all(|&v| hat.contains(v)))
                .map(|e| e.vertices().to_vec())
                .collect();
            if avail.len() < c {
                st.fail(
                    "divisibility",
                    format!("A_{} has {} free matching edges, R needs {c}", i + 1, avail.len()),
                );
                return Ok(());
            }
            for e in avail.into_iter().take(c) {
                st.u_prime |= e.iter().collect::<VertexSet>();
                edges.push((i, e));
            }
        }
        for (i, e) in edges {
            let own: VertexSet = e.iter().collect();
            let forbidden = st.tilings.used() | (st.u - own);
            let mut target = ones(s);
            target[i] = 2;
            target.push(t - 1);
            let pools = st.pools(b, forbidden);
            match st.extend(g, &e, target.clone(), forbidden, pools)? {
                Some(c) => st.tilings.r.push(c)?,
                None => {
                    st.fail(
                        "divisibility",
                        format!("no clique with index vector {target:?} through edge {e:?} for R"),
                    );
                    return Ok(());
                }
            }
        }
    }

    let gp = g.vertices() - st.tilings.used();
    let bp = b & gp;
    if !bp.len().is_multiple_of(t) || !gp.len().is_multiple_of(r) {
        return Err(PipelineError::Invariant(format!(
            "after R: |G'| = {}, |B'| = {}",
            gp.len(),
            bp.len()
        )));
    }
    let bb = (bp.len() / t) as i64 - (gp.len() / r) as i64;
    st.ledger.b = bb;
    if bb < 0 {
        st.fail("divisibility", format!("b = {bb} < 0"));
        return Ok(());
    }
    let want = t * bb as usize;
    if want > 0 {
        let pack = greedy_clique_tiling(g, t + 1, &(g.vertices() - bp), want, &st.cfg.budget);
        if pack.tiling.len() < want {
            st.fail(
                "divisibility",
                format!(
                    "F needs {want} disjoint K_{} in B', found {}{}",
                    t + 1,
                    pack.tiling.len(),
                    if pack.exhaustive { "" } else { " (budget exhausted)" }
                ),
            );
            return Ok(());
        }
        st.tilings.f = pack.tiling;
    }
    let bpp = bp - st.tilings.f.covered();
    if !bpp.len().is_multiple_of(t) {
        return Err(PipelineError::Invariant(format!(
            "|B''| = {} not divisible by {t}",
            bpp.len()
        )));
    }
    st.residual_partition = Some(st.partition.restrict(&gp));
    st.stage = Stage::DivisibilityFixed;
    st.record(None);
    Ok(())
}

// ---------------------------------------------------------------------------
// Step 2.2

fn perfect_matching(g: &Graph, within: &VertexSet) -> Option<Tiling> {
    let m = maximum_matching_within(g, within);
    (2 * m.len() == within.len()).then_some(m)
}

fn triangles_in(g: &Graph, within: &VertexSet) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for x in within.iter() {
        let nx = g.neighbors(x) & within.above(x);
        for y in nx.iter() {
            for z in (nx & g.neighbors(y)).above(y).iter() {
                out.push([x, y, z]);
            }
        }
    }
    out
}

impl PipelineState {
    /// `V(G) \ V(K ∪ H ∪ R)`; the cliques of `F` stay inside.
    fn g_prime(&self, g: &Graph) -> VertexSet {
        g.vertices() - self.tilings.k.covered() - self.tilings.h.covered() - self.tilings.r.covered()
    }

    fn b_double_prime(&self, g: &Graph) -> VertexSet {
        (self.b() & self.g_prime(g)) - self.tilings.f.covered()
    }

    /// Two-odd-component repair when `|A_s| ≥ n`: an edge of `M_s` plus
    /// one vertex of `B''` in one component, a triangle of the other
    /// component, each completed to `K_r`.
    fn repair_case1(&mut self, g: &Graph, comps: [VertexSet; 2]) -> Result<bool, PipelineError> {
        let s = self.s;
        let gp = self.g_prime(g);
        let bpp = self.b_double_prime(g);
        let edges: Vec<Vec<usize>> = self.matchings[s - 1]
            .cliques()
            .iter()
            .filter(|e| {
                e.vertices().iter().all(|&v| gp.contains(v)) && !e.vertices().iter().any(|&v| self.u_prime.contains(v))
            })
            .map(|e| e.vertices().to_vec())
            .collect();
        for e in edges {
            let own: VertexSet = e.iter().collect();
            for w in (bpp & g.common_neighborhood(&e, &bpp)).iter() {
                let seed: Vec<usize> = e.iter().copied().chain([w]).collect();
                let forbidden = (g.vertices() - gp) | self.tilings.f.covered() | (self.u - own);
                let mut target = ones(s);
                target[s - 1] = 2;
                target.push(1);
                let pools = self.pools(bpp, forbidden);
                let Some(k1) = self.extend(g, &seed, target, forbidden, pools)? else {
                    continue;
                };
                let y = if comps[0].contains(w) { comps[1] } else { comps[0] };
                let forbidden2 = forbidden | k1.to_set();
                let mut target2 = ones(s);
                target2[s - 1] = 0;
                target2.push(3);
                for tri in triangles_in(g, &(y - forbidden2)) {
                    let pools2 = self.pools(y, forbidden2);
                    let Some(k2) = self.extend(g, &tri, target2.clone(), forbidden2, pools2)? else {
                        continue;
                    };
                    let rest = bpp - k1.to_set() - k2.to_set();
                    if perfect_matching(g, &rest).is_some() {
                        self.tilings.k.push(k1)?;
                        self.tilings.k.push(k2)?;
                        self.notes
                            .push("two odd components repaired with an M_s edge and a triangle".into());
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }

    /// Two-odd-component repair when `|A_s| < n`: swap a triangle of `F`
    /// (or the B-part of an `H` clique) with a triangle of one component.
    fn repair_case2(&mut self, g: &Graph, comps: [VertexSet; 2]) -> Result<bool, PipelineError> {
        let bpp = self.b_double_prime(g);
        for idx in 0..self.tilings.f.len() {
            let w = self.tilings.f.cliques()[idx].to_set();
            for (x, y) in [(0, 1), (1, 0)] {
                if !w.iter().any(|v| !(g.neighbors(v) & comps[x]).is_empty()) {
                    continue;
                }
                for tri in triangles_in(g, &comps[y]) {
                    let ts: VertexSet = tri.iter().collect();
                    let rest = (bpp - ts) | w;
                    if perfect_matching(g, &rest).is_some() {
                        self.tilings.f.replace(idx, Clique::new(g, tri.to_vec())?);
                        self.notes
                            .push("two odd components repaired by swapping an F triangle".into());
                        return Ok(true);
                    }
                }
            }
        }
        let b = self.b();
        for idx in 0..self.tilings.h.len() {
            let old = self.tilings.h.cliques()[idx].clone();
            let w = old.to_set() & b;
            let a_part = old.to_set() - b;
            let target = self.partition.index_vector(old.vertices()).0;
            for (x, y) in [(0, 1), (1, 0)] {
                if !w.iter().any(|v| !(g.neighbors(v) & comps[x]).is_empty()) {
                    continue;
                }
                for tri in triangles_in(g, &comps[y]) {
                    let ts: VertexSet = tri.iter().collect();
                    let rest = (bpp - ts) | w;
                    if perfect_matching(g, &rest).is_none() {
                        continue;
                    }
                    let free = self.g_prime(g) | a_part;
                    let forbidden = (g.vertices() - free) | self.u | (b - ts);
                    let pools = self.pools(ts, forbidden);
                    if let Some(c) = self.extend(g, &tri, target.clone(), forbidden, pools)? {
                        self.tilings.h.replace(idx, c);
                        self.notes
                            .push("two odd components repaired by swapping an H clique".into());
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Finds the `K_{r-s}`-factor of `B''`, with the two-odd-component repair
/// when `r - s = 2` and a joint `{K_{r-s}, K_{r-s+1}}` search over `B'` as
/// the last resort.
pub fn factor_residual_b(g: &Graph, st: &mut PipelineState) -> Result<(), PipelineError> {
    st.expect(Stage::DivisibilityFixed)?;
    if !st.has_b() {
        st.b_factor = Some(Tiling::new());
        return Ok(());
    }
    let t = st.t();
    let bpp = st.b_double_prime(g);
    let direct = match t {
        1 => {
            let mut tl = Tiling::new();
            for v in bpp.iter() {
                tl.push(Clique::new(g, vec![v])?)?;
            }
            Some(tl)
        }
        2 => match perfect_matching(g, &bpp) {
            Some(m) => Some(m),
            None => {
                let comps = g.components_within(&bpp);
                let mut fixed = None;
                if comps.len() == 2 && comps.iter().all(|c| c.len() % 2 == 1) {
                    let pair = [comps[0], comps[1]];
                    let large_or_full = st.partition.a(st.s - 1).len() >= st.n;
                    let ok = if large_or_full {
                        st.repair_case1(g, pair)?
                    } else {
                        st.repair_case2(g, pair)?
                    };
                    if ok {
                        let nb = st.b_double_prime(g);
                        fixed = perfect_matching(g, &nb);
                    }
                }
                fixed
            }
        },
        _ => {
            let res = has_kr_factor_within(g, &bpp, t, &st.cfg.budget)?;
            if res.exists == Verdict::Yes {
                res.factor
            } else {
                None
            }
        }
    };
    let factor = match direct {
        Some(f) => f,
        None => {
            let bp = bpp | st.tilings.f.covered();
            let out = mixed_clique_factor(g, &bp, t, t + 1, st.tilings.f.len(), &st.cfg.budget);
            match out.result {
                Some(Some(mf)) => {
                    st.tilings.f = mf.big;
                    st.notes.push("B-factor found by joint search over B'".into());
                    mf.small
                }
                Some(None) => {
                    st.fail(
                        "b-factor",
                        format!(
                            "G[B'] has no tiling by K_{t} and {} copies of K_{}",
                            st.tilings.f.len(),
                            t + 1
                        ),
                    );
                    return Ok(());
                }
                None => {
                    st.fail("b-factor", "search budget exhausted".into());
                    return Ok(());
                }
            }
        }
    };
    let gp = st.g_prime(g);
    st.residual_partition = Some(st.partition.restrict(&gp));
    st.b_factor = Some(factor);
    st.record(Some("B-factor".into()));
    Ok(())
}

// ---------------------------------------------------------------------------
// Step 2.3

/// Contracts each clique of the `K_{r-s}`-factor to a vertex and each
/// clique of `F` to an edge. Edges of `G*` are the edges of `G` between
/// A-vertices (inside a class as well as across), a `B*` vertex is joined
/// to the A-vertices adjacent to its whole clique, and `w_j w_j'` are joined.
pub fn contract(g: &Graph, st: &mut PipelineState) -> Result<ContractedGraph, PipelineError> {
    st.expect(Stage::DivisibilityFixed)?;
    let b_factor = st
        .b_factor
        .clone()
        .ok_or_else(|| PipelineError::Invariant("contract before the B-factor".into()))?;
    let gp = st.g_prime(g);
    let s = st.s;
    let mut original = Vec::new();
    let mut a_new = Vec::with_capacity(s);
    for i in 0..s {
        let mut set = VertexSet::EMPTY;
        for v in (*st.partition.a(i) & gp).iter() {
            set.insert(original.len());
            original.push(Some(v));
        }
        a_new.push(set);
    }
    let n_a = original.len();
    let singles: Vec<Clique> = b_factor.cliques().to_vec();
    let pairs: Vec<Clique> = st.tilings.f.cliques().to_vec();
    let mut origin: Vec<Option<BStarOrigin>> = vec![None; n_a];
    for i in 0..singles.len() {
        origin.push(Some(BStarOrigin::Single(i)));
    }
    let mut pair_ends = Vec::new();
    for j in 0..pairs.len() {
        let w = origin.len();
        origin.push(Some(BStarOrigin::Pair(j, 0)));
        origin.push(Some(BStarOrigin::Pair(j, 1)));
        pair_ends.push((w, w + 1));
    }
    let total = origin.len();
    original.resize(total, None);
    let mut b = GraphBuilder::new(total)?;
    for x in 0..n_a {
        for y in x + 1..n_a {
            if g.has_edge(original[x].unwrap(), original[y].unwrap()) {
                b.add_edge(x, y)?;
            }
        }
    }
    let clique_of = |o: BStarOrigin| -> &Clique {
        match o {
            BStarOrigin::Single(i) => &singles[i],
            BStarOrigin::Pair(j, _) => &pairs[j],
        }
    };
    for w in n_a..total {
        let c = clique_of(origin[w].unwrap());
        for y in 0..n_a {
            if c.vertices().iter().all(|&v| g.has_edge(v, original[y].unwrap())) {
                b.add_edge(w, y)?;
            }
        }
    }
    for &(x, y) in &pair_ends {
        b.add_edge(x, y)?;
    }
    let graph = b.build();
    let b_star = st.has_b().then(|| (n_a..total).collect::<VertexSet>());
    let partition = LabeledPartition::new(total, a_new, b_star)?;

    // Size identities.
    if st.has_b() {
        let (r, t) = (st.r, st.t());
        let bb = st.ledger.b as usize;
        let b_len = total - n_a;
        if b_len != singles.len() + 2 * t * bb
            || total * r != (s + 1) * gp.len()
            || b_len * (s + 1) != total + (s + 1) * t * bb
        {
            return Err(PipelineError::Invariant(format!(
                "contraction sizes: |B*| = {b_len}, |G*| = {total}, |G'| = {}, b = {bb}",
                gp.len()
            )));
        }
    } else if total != gp.len() {
        return Err(PipelineError::Invariant("G* must equal G' when s = r".into()));
    }
    let cg = ContractedGraph {
        graph,
        partition,
        original,
        origin,
        singles,
        pairs,
        pair_ends,
    };
    st.contracted = Some(cg.clone());
    st.stage = Stage::Contracted;
    st.record(Some(format!("|G*| = {total}")));
    Ok(cg)
}

// ---------------------------------------------------------------------------
// Balancing

/// A `K_k`-factor of `G*` (with `k` classes) in which every clique is
/// transversal or uses exactly one edge of the supplied matchings.
///
/// `matchings[i]` must hold at least `|V_i| - |G*|/k` edges inside class
/// `i`; the first that many are used, and all of them end up inside
/// cliques of the factor.
pub fn balance_factor(
    gstar: &ContractedGraph,
    matchings: &[Tiling],
    budget: &SearchBudget,
) -> Result<Result<BalanceOutcome, StageFailure>, PipelineError> {
    let g = &gstar.graph;
    let p = &gstar.partition;
    let k = p.num_classes();
    let fail = |reason: String| {
        Ok(Err(StageFailure {
            stage: "balance".into(),
            reason,
        }))
    };
    if matchings.len() != k {
        return Err(PipelineError::Input(format!(
            "{} matchings for {k} classes",
            matchings.len()
        )));
    }
    let total = g.n();
    if !total.is_multiple_of(k) {
        return Err(PipelineError::Invariant(format!("|G*| = {total} not divisible by {k}")));
    }
    let nstar = total / k;
    let sizes: Vec<usize> = p.classes().iter().map(|c| c.len()).collect();
    let size_ratio = sizes.iter().copied().max().unwrap_or(0) as f64 / nstar.max(1) as f64;
    let mut cross = f64::INFINITY;
    for v in g.vertices().iter() {
        let own = p.class_of(v).expect("covered");
        for j in 0..k {
            let cj = p.class(j);
            if j != own && !cj.is_empty() {
                cross = cross.min(g.degree_into(v, cj) as f64 / cj.len() as f64);
            }
        }
    }
    if !cross.is_finite() {
        cross = 1.0;
    }

    // Matching supply.
    let mut avail: Vec<Vec<Vec<usize>>> = vec![Vec::new(); k];
    let mut matching_vertices = VertexSet::EMPTY;
    for i in 0..k {
        if sizes[i] <= nstar {
            continue;
        }
        let need = sizes[i] - nstar;
        let edges: Vec<Vec<usize>> = matchings[i]
            .cliques()
            .iter()
            .filter(|e| e.len() == 2 && e.vertices().iter().all(|&v| p.class(i).contains(v)))
            .take(need)
            .map(|e| e.vertices().to_vec())
            .collect();
        if edges.len() < need || !edges.iter().all(|e| g.has_edge(e[0], e[1])) {
            return fail(format!(
                "class {i} needs a matching of {need} edges, has {}",
                edges.len()
            ));
        }
        for e in &edges {
            matching_vertices |= e.iter().collect::<VertexSet>();
        }
        avail[i] = edges;
    }
    if matching_vertices.len() != 2 * avail.iter().map(Vec::len).sum::<usize>() {
        return Err(PipelineError::Input("matchings overlap".into()));
    }

    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&i| (sizes[i], i));
    let small = order.iter().filter(|&&i| sizes[i] <= nstar).count();
    let large: Vec<usize> = order[small..].to_vec();
    let mut used = VertexSet::EMPTY;
    let mut steps = Tiling::new();

    let mut take = |used: &mut VertexSet,
                    avail: &mut Vec<Vec<Vec<usize>>>,
                    missing: usize,
                    cands: &[usize]|
     -> Result<bool, PipelineError> {
        for &l in cands {
            for idx in 0..avail[l].len() {
                let e = avail[l][idx].clone();
                let own: VertexSet = e.iter().collect();
                let forbidden = *used | (matching_vertices - own);
                let mut target = ones(k);
                target[missing] = 0;
                target[l] = 2;
                let seed = Clique::new(g, e)?;
                if let Some(c) = extend_clique_with_index_vector(g, p, &seed, &IndexVector(target), &forbidden, None)? {
                    *used |= c.to_set();
                    steps.push(c)?;
                    avail[l].remove(idx);
                    return Ok(true);
                }
            }
        }
        Ok(false)
    };

    // Step (1): top up every small class but the smallest.
    for &i in order.iter().take(small).skip(1) {
        for _ in 0..nstar - sizes[i] {
            let open: Vec<usize> = large.iter().copied().filter(|&l| !avail[l].is_empty()).collect();
            if !take(&mut used, &mut avail, i, &open)? {
                return fail(format!("step (1): no clique missing class {i} through a matching edge"));
            }
        }
    }
    // Step (2): spend the remaining matching edges against the smallest class.
    let smallest = order[0];
    for &l in &large {
        while !avail[l].is_empty() {
            if !take(&mut used, &mut avail, smallest, &[l])? {
                return fail(format!(
                    "step (2): no clique missing class {smallest} through an edge of class {l}"
                ));
            }
        }
    }

    let rest = g.vertices() - used;
    let residual = p.restrict(&rest);
    let rs: Vec<usize> = residual.classes().iter().map(|c| c.len()).collect();
    if rs.windows(2).any(|w| w[0] != w[1]) {
        return Err(PipelineError::Invariant(format!("residual classes unbalanced: {rs:?}")));
    }
    let class_size = rs[0];
    let (factor, nodes) = if class_size == 0 {
        (Tiling::new(), 0)
    } else {
        let res: FactorResult = multipartite_kr_factor(g, &residual, budget)?;
        match res.exists {
            Verdict::Yes => (res.factor.expect("factor on yes"), res.nodes_explored),
            Verdict::No => return fail("no transversal factor of the balanced residual".into()),
            Verdict::Unknown => return fail("transversal factor search ran out of budget".into()),
        }
    };
    let step_cliques = steps.len();
    let mut all = steps;
    all.extend_from(&factor)?;
    Ok(Ok(BalanceOutcome {
        factor: all,
        step_cliques,
        class_size,
        size_ratio,
        cross_degree_ratio: cross,
        nodes,
    }))
}

/// Matchings for `G*`: the unused `M_i` edges of each large A-class (topped
/// up from a maximum matching of `G*[A_i']` when short) and the pairs
/// `w_j w_j'` for `B*`.
fn gstar_matchings(g: &Graph, st: &PipelineState, cg: &ContractedGraph) -> Result<Vec<Tiling>, PipelineError> {
    let k = cg.partition.num_classes();
    let nstar = cg.graph.n() / k;
    let mut new_id = vec![usize::MAX; g.n()];
    for (x, o) in cg.original.iter().enumerate() {
        if let Some(v) = o {
            new_id[*v] = x;
        }
    }
    let mut out = Vec::with_capacity(k);
    for i in 0..st.s {
        let class = *cg.partition.class(i);
        let need = class.len().saturating_sub(nstar);
        let mut m = Tiling::new();
        for e in st.matchings[i].cliques() {
            if m.len() == need {
                break;
            }
            let (x, y) = (new_id[e.vertices()[0]], new_id[e.vertices()[1]]);
            if x != usize::MAX && y != usize::MAX && class.contains(x) && class.contains(y) {
                m.push(Clique::new(&cg.graph, vec![x, y])?)?;
            }
        }
        if m.len() < need {
            m = maximum_matching_within(&cg.graph, &class);
        }
        out.push(m);
    }
    if st.has_b() {
        let mut m = Tiling::new();
        for &(x, y) in &cg.pair_ends {
            m.push(Clique::new(&cg.graph, vec![x, y])?)?;
        }
        out.push(m);
    }
    Ok(out)
}

/// Runs [`balance_factor`] on the contracted graph held by the state.
pub fn balance(g: &Graph, st: &mut PipelineState) -> Result<(), PipelineError> {
    st.expect(Stage::Contracted)?;
    let cg = st.contracted.clone().expect("contracted");
    let ms = gstar_matchings(g, st, &cg)?;
    match balance_factor(&cg, &ms, &st.cfg.budget)? {
        Ok(out) => {
            let note = format!(
                "{} step cliques; max class / (|G*|/(s+1)) = {:.4}; min cross-degree ratio = {:.4}",
                out.step_cliques, out.size_ratio, out.cross_degree_ratio
            );
            st.balance = Some(out);
            st.stage = Stage::Balanced;
            st.record(Some(note));
        }
        Err(f) => st.fail(&f.stage, f.reason),
    }
    Ok(())
}

/// Expands the `G*` factor back into `G`, adds `K ∪ H ∪ R`, and validates
/// the union as a K_r-factor of `G`.
pub fn lift_and_assemble(g: &Graph, st: &mut PipelineState) -> Result<FactorResult, PipelineError> {
    st.expect(Stage::Balanced)?;
    let cg = st.contracted.as_ref().expect("contracted");
    let bal = st.balance.as_ref().expect("balanced");
    let mut cliques: Vec<Vec<usize>> = Vec::new();
    for c in bal.factor.cliques() {
        let mut out = Vec::new();
        let mut pair_hits: BTreeMap<usize, u8> = BTreeMap::new();
        for &x in c.vertices() {
            match (cg.original[x], cg.origin[x]) {
                (Some(v), _) => out.push(v),
                (None, Some(BStarOrigin::Single(i))) => out.extend_from_slice(cg.singles[i].vertices()),
                (None, Some(BStarOrigin::Pair(j, _))) => *pair_hits.entry(j).or_default() += 1,
                (None, None) => return Err(PipelineError::Invariant(format!("G* vertex {x} has no origin"))),
            }
        }
        for (j, hits) in pair_hits {
            if hits != 2 {
                return Err(PipelineError::Invariant(format!(
                    "clique {:?} splits the pair of F clique {j}",
                    c.vertices()
                )));
            }
            out.extend_from_slice(cg.pairs[j].vertices());
        }
        cliques.push(out);
    }
    for t in [&st.tilings.k, &st.tilings.h, &st.tilings.r] {
        cliques.extend(t.to_vecs());
    }
    let tiling = Tiling::from_cliques(g, cliques)
        .map_err(|e| PipelineError::Invariant(format!("lifted tiling invalid: {e}")))?;
    if !tiling.is_kr_factor_of(g, st.r) {
        return Err(PipelineError::Invariant("lifted tiling is not a K_r-factor".into()));
    }
    let nodes = bal.nodes;
    st.factor = Some(tiling.clone());
    st.stage = Stage::Done;
    st.record(None);
    Ok(FactorResult {
        exists: Verdict::Yes,
        factor: Some(tiling),
        nodes_explored: nodes,
        timed_out: false,
    })
}

// ---------------------------------------------------------------------------
// Invariants and the driver

impl PipelineState {
    /// Per-clique and aggregate index-vector checks on the named tilings.
    pub fn check_invariants(&self, g: &Graph) -> Result<(), String> {
        let p = &self.partition;
        let (s, t) = (self.s, self.r - self.s);
        let bi = p.b_index();
        let bcoord = |c: &Clique| bi.map_or(0, |b| p.index_vector(c.vertices()).0[b]);
        for c in self.tilings.q.cliques().iter().chain(self.tilings.t.cliques()) {
            let iv = p.index_vector(c.vertices()).0;
            if iv[..s].iter().any(|&x| x != 1) || bcoord(c) != t {
                return Err(format!("Q/T clique {:?} has index vector {iv:?}", c.vertices()));
            }
        }
        for c in self.tilings.h.cliques() {
            if bcoord(c) != t + 1 {
                return Err(format!("H clique {:?} has B-coordinate {}", c.vertices(), bcoord(c)));
            }
        }
        for c in self.tilings.r.cliques() {
            let iv = p.index_vector(c.vertices()).0;
            if bcoord(c) + 1 != t || iv[..s].iter().filter(|&&x| x == 2).count() != 1 {
                return Err(format!("R clique {:?} has index vector {iv:?}", c.vertices()));
            }
        }
        // K in aggregate: |K|·(1, ..., 1, r-s).
        let mut agg = vec![0usize; p.num_classes()];
        for c in self.tilings.k.cliques() {
            for (a, x) in agg.iter_mut().zip(p.index_vector(c.vertices()).0) {
                *a += x;
            }
        }
        let kk = self.tilings.k.len();
        let want: Vec<usize> = (0..p.num_classes())
            .map(|i| if Some(i) == bi { t * kk } else { kk })
            .collect();
        if agg != want {
            return Err(format!("K has aggregate index vector {agg:?}, expected {want:?}"));
        }
        // At most one edge of G[U \ U'] inside K ∪ H ∪ R.
        let spare = self.u - self.u_prime;
        let mut count = 0;
        for c in self
            .tilings
            .k
            .cliques()
            .iter()
            .chain(self.tilings.h.cliques())
            .chain(self.tilings.r.cliques())
        {
            let inside: Vec<usize> = c.vertices().iter().copied().filter(|&v| spare.contains(v)).collect();
            for (i, &x) in inside.iter().enumerate() {
                for &y in &inside[i + 1..] {
                    if g.has_edge(x, y) {
                        count += 1;
                    }
                }
            }
        }
        if count > 1 {
            return Err(format!("K ∪ H ∪ R uses {count} edges inside U \\ U'"));
        }
        Ok(())
    }

    /// Trace as JSON lines, one record per stage transition.
    pub fn trace_jsonl(&self) -> String {
        let mut out = String::new();
        for rec in &self.trace {
            out.push_str(&crate::report::canonical_string(rec).expect("trace serialises"));
        }
        out
    }
}

/// Verifies the partition, then runs every stage until `Done` or `Failed`.
pub fn run_pipeline(
    g: &Graph,
    p: &LabeledPartition,
    params: &PartitionParams,
    cfg: PipelineConfig,
) -> Result<PipelineState, PipelineError> {
    let report = verify_good_partition(g, p, params, &cfg.budget)?;
    if report.is_inconclusive() {
        return Err(PipelineError::Inconclusive(Box::new(report)));
    }
    if !report.is_good() {
        return Err(PipelineError::NotGood {
            failed: report.failed().into_iter().map(String::from).collect(),
            report: Box::new(report),
        });
    }
    let mut st = PipelineState::new(g, p, params, cfg)?;
    cover_bad_and_exceptional(g, &mut st)?;
    if st.stage == Stage::Failed {
        return Ok(st);
    }
    fix_divisibility(g, &mut st)?;
    if st.stage == Stage::Failed {
        return Ok(st);
    }
    factor_residual_b(g, &mut st)?;
    if st.stage == Stage::Failed {
        return Ok(st);
    }
    st.check_invariants(g).map_err(PipelineError::Invariant)?;
    contract(g, &mut st)?;
    balance(g, &mut st)?;
    if st.stage == Stage::Failed {
        return Ok(st);
    }
    lift_and_assemble(g, &mut st)?;
    Ok(st)
}

// ---------------------------------------------------------------------------
// Vertex-cover sweep

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexCoverSweepReport {
    pub r: usize,
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    /// `max_i τ(G[A_i])` for each partition.
    pub max_min_cover: Vec<usize>,
    pub min_over_trials: usize,
    /// `√n / r`.
    pub bound: f64,
    pub bound_ceil: usize,
    pub holds: bool,
    pub exact: bool,
    pub relaxed: bool,
}

/// `max_i τ(G[A_i])` over the classes of `p`, and whether all covers were exact.
pub fn max_class_cover(g: &Graph, p: &LabeledPartition, budget: &SearchBudget) -> (usize, bool) {
    p.classes()
        .iter()
        .map(|c| {
            let res = min_vertex_cover_within(g, c, budget);
            (res.cover.len(), res.exact)
        })
        .fold((0, true), |(m, e), (x, ex)| (m.max(x), e && ex))
}

/// A uniformly shuffled balanced partition into `r` classes of `n`.
pub fn random_balanced_partition(r: usize, n: usize, seed: u64, trial: u64) -> LabeledPartition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let mut perm: Vec<usize> = (0..r * n).collect();
    perm.shuffle(&mut rng);
    let classes = perm.chunks(n).map(|c| c.iter().collect()).collect();
    LabeledPartition::new(r * n, classes, None).expect("balanced partition")
}

/// Min over seeded random balanced partitions of `max_i τ(G[A_i])`,
/// compared with `√n / r`.
pub fn vertex_cover_sweep(
    g: &Graph,
    r: usize,
    n: usize,
    partitions: usize,
    seed: u64,
    relaxed: bool,
    budget: &SearchBudget,
) -> Result<VertexCoverSweepReport, PipelineError> {
    if r < 2 || n == 0 || g.n() != r * n {
        return Err(PipelineError::Input(format!(
            "need a graph on r·n = {} vertices",
            r * n
        )));
    }
    let d = (r - 1) * n + 1;
    let regular = g.is_regular(d);
    let relaxed_ok = g.min_degree() >= d && (g.max_degree() as f64) <= ((r - 1) * n) as f64 + (n as f64).sqrt();
    if !(regular || (relaxed && relaxed_ok)) {
        return Err(PipelineError::Input(format!(
            "graph is not {d}-regular (δ = {}, Δ = {})",
            g.min_degree(),
            g.max_degree()
        )));
    }
    let results: Vec<(usize, bool)> = (0..partitions as u64)
        .into_par_iter()
        .map(|t| max_class_cover(g, &random_balanced_partition(r, n, seed, t), budget))
        .collect();
    let bound = (n as f64).sqrt() / r as f64;
    let max_min_cover: Vec<usize> = results.iter().map(|x| x.0).collect();
    let min_over = max_min_cover.iter().copied().min().unwrap_or(0);
    Ok(VertexCoverSweepReport {
        r,
        n,
        seed,
        trials: partitions,
        holds: max_min_cover.iter().all(|&m| m as f64 >= bound),
        max_min_cover,
        min_over_trials: min_over,
        bound,
        bound_ceil: bound.ceil() as usize,
        exact: results.iter().all(|x| x.1),
        relaxed: !regular,
    })
}

//! Exact K_r-factor decision and construction.
//!
//! Everything here is an exact search bounded by a [`SearchBudget`]. A
//! search that runs out of budget reports [`Verdict::Unknown`]; it never
//! guesses.

mod cliques;
mod cover;
mod matching;
mod multipartite;
mod search;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, Tiling, VertexSet};

pub use cliques::{
    extend_clique_with_index_vector, find_clique, greedy_clique_tiling, max_clique_packing, CliquePacking,
};
pub use cover::{min_vertex_cover, min_vertex_cover_within, VertexCoverResult};
pub use matching::{matching_number_within, maximum_matching, maximum_matching_within};
pub use multipartite::multipartite_kr_factor;
pub use search::{mixed_clique_factor, MixedFactor, SearchOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FactorError {
    #[error("clique order r = {0} must be at least 2")]
    InvalidR(usize),
    #[error("search budget must be positive")]
    InvalidBudget,
    #[error("partition classes have unequal sizes {0:?}")]
    UnequalClasses(Vec<usize>),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Node and wall-clock limits for one exact search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
    pub deadline: Duration,
}

impl SearchBudget {
    pub fn new(max_nodes: u64, deadline: Duration) -> Result<Self, FactorError> {
        if max_nodes == 0 || deadline.is_zero() {
            return Err(FactorError::InvalidBudget);
        }
        Ok(Self { max_nodes, deadline })
    }

    pub fn nodes(max_nodes: u64) -> Self {
        Self::new(max_nodes, Duration::from_secs(3600)).expect("positive budget")
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            max_nodes: 50_000_000,
            deadline: Duration::from_secs(600),
        }
    }
}

/// Counts search nodes against a budget.
#[derive(Debug)]
pub(crate) struct Meter {
    start: Instant,
    budget: SearchBudget,
    nodes: u64,
    exhausted: bool,
}

impl Meter {
    pub(crate) fn new(budget: &SearchBudget) -> Self {
        Self {
            start: Instant::now(),
            budget: *budget,
            nodes: 0,
            exhausted: false,
        }
    }

    /// Records one node; `false` once the budget is spent.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes & 0xfff == 0 && self.start.elapsed() > self.budget.deadline)
        {
            self.exhausted = true;
        }
        !self.exhausted
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    pub(crate) fn exhausted(&self) -> bool {
        self.exhausted
    }
}

/// Tri-state answer of a bounded exact search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    #[serde(rename = "true")]
    Yes,
    #[serde(rename = "false")]
    No,
    #[serde(rename = "unknown")]
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Yes
        } else {
            Verdict::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == Verdict::Yes
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "true",
            Verdict::No => "false",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorResult {
    pub exists: Verdict,
    pub factor: Option<Tiling>,
    pub nodes_explored: u64,
    pub timed_out: bool,
}

impl FactorResult {
    pub(crate) fn no(nodes: u64) -> Self {
        Self {
            exists: Verdict::No,
            factor: None,
            nodes_explored: nodes,
            timed_out: false,
        }
    }

    pub(crate) fn yes(t: Tiling, nodes: u64) -> Self {
        Self {
            exists: Verdict::Yes,
            factor: Some(t),
            nodes_explored: nodes,
            timed_out: false,
        }
    }

    pub(crate) fn unknown(nodes: u64) -> Self {
        Self {
            exists: Verdict::Unknown,
            factor: None,
            nodes_explored: nodes,
            timed_out: true,
        }
    }
}

/// Serialised form `{"r": 3, "cliques": [[0, 1, 2], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingJson {
    pub r: usize,
    pub cliques: Vec<Vec<usize>>,
}

impl TilingJson {
    pub fn new(r: usize, t: &Tiling) -> Self {
        Self {
            r,
            cliques: t.to_vecs(),
        }
    }
}

/// Decides whether `g` has a K_r-factor.
///
/// `r = 2` is answered by maximum matching and never times out. When
/// `r ∤ |V|` and `|V| > 0` the answer is `No` without search.
pub fn has_kr_factor(g: &Graph, r: usize, budget: &SearchBudget) -> Result<FactorResult, FactorError> {
    has_kr_factor_within(g, &g.vertices(), r, budget)
}

/// [`has_kr_factor`] on `G[within]` without building the induced subgraph.
pub fn has_kr_factor_within(
    g: &Graph,
    within: &VertexSet,
    r: usize,
    budget: &SearchBudget,
) -> Result<FactorResult, FactorError> {
    if r < 2 {
        return Err(FactorError::InvalidR(r));
    }
    g.check_subset(within)?;
    let n = within.len();
    if !n.is_multiple_of(r) {
        return Ok(FactorResult::no(0));
    }
    if n == 0 {
        return Ok(FactorResult::yes(Tiling::new(), 0));
    }
    if r == 2 {
        let m = maximum_matching_within(g, within);
        return Ok(if 2 * m.len() == n {
            FactorResult::yes(m, 1)
        } else {
            FactorResult::no(1)
        });
    }
    let out = mixed_clique_factor(g, within, r, r + 1, 0, budget);
    Ok(match out.result {
        Some(Some(f)) => FactorResult::yes(f.small, out.nodes),
        Some(None) => FactorResult::no(out.nodes),
        None => FactorResult::unknown(out.nodes),
    })
}

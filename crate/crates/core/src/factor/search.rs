use std::collections::HashSet;

use crate::graph::{Clique, Graph, Tiling, VertexSet};

use super::{Meter, SearchBudget};

const MEMO_LIMIT: usize = 1 << 20;

/// A perfect tiling of some vertex set by two clique sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedFactor {
    pub small: Tiling,
    pub big: Tiling,
}

/// Outcome of a budgeted search: `result` is `None` when the budget ran out.
#[derive(Clone, Debug)]
pub struct SearchOutcome<T> {
    pub result: Option<T>,
    pub nodes: u64,
}

struct Search<'a> {
    g: &'a Graph,
    small_k: usize,
    big_k: usize,
    meter: Meter,
    failed: HashSet<(VertexSet, usize)>,
    small: Vec<Vec<usize>>,
    big: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn solve(&mut self, alive: VertexSet, big_left: usize) -> Option<bool> {
        if alive.is_empty() {
            return Some(big_left == 0);
        }
        let m = alive.len();
        let big_total = self.big_k * big_left;
        if m < big_total || !(m - big_total).is_multiple_of(self.small_k) {
            return Some(false);
        }
        if self.failed.contains(&(alive, big_left)) {
            return Some(false);
        }
        if !self.meter.tick() {
            return None;
        }

        // Fail-first: the vertex with the fewest remaining neighbours.
        let need = if big_left > 0 && m > big_total {
            self.small_k.min(self.big_k) - 1
        } else if big_left > 0 {
            self.big_k - 1
        } else {
            self.small_k - 1
        };
        let mut best = (usize::MAX, usize::MAX);
        for v in alive.iter() {
            let d = self.g.degree_into(v, &alive);
            if d < need {
                self.remember(alive, big_left);
                return Some(false);
            }
            if d < best.0 {
                best = (d, v);
            }
        }
        let v = best.1;
        let cand = self.g.neighbors(v) & alive;
        let mut chosen = vec![v];
        if big_left > 0 && self.extend(alive, big_left, &mut chosen, cand, self.big_k - 1, true)? {
            return Some(true);
        }
        if m > big_total && self.extend(alive, big_left, &mut chosen, cand, self.small_k - 1, false)? {
            return Some(true);
        }
        self.remember(alive, big_left);
        Some(false)
    }

    fn remember(&mut self, alive: VertexSet, big_left: usize) {
        if self.failed.len() < MEMO_LIMIT {
            self.failed.insert((alive, big_left));
        }
    }

    fn extend(
        &mut self,
        alive: VertexSet,
        big_left: usize,
        chosen: &mut Vec<usize>,
        cand: VertexSet,
        need: usize,
        is_big: bool,
    ) -> Option<bool> {
        if need == 0 {
            let rest = alive - chosen.iter().collect();
            let left = big_left - usize::from(is_big);
            let ok = self.solve(rest, left)?;
            if ok {
                if is_big {
                    self.big.push(chosen.clone());
                } else {
                    self.small.push(chosen.clone());
                }
            }
            return Some(ok);
        }
        for u in cand.iter() {
            let next = cand.above(u) & self.g.neighbors(u);
            if next.len() + 1 < need {
                continue;
            }
            chosen.push(u);
            let r = self.extend(alive, big_left, chosen, next, need - 1, is_big);
            chosen.pop();
            if r? {
                return Some(true);
            }
        }
        Some(false)
    }
}

fn to_tiling(mut cliques: Vec<Vec<usize>>) -> Tiling {
    cliques.reverse();
    let mut t = Tiling::new();
    for c in cliques {
        t.push_unchecked(Clique::from_sorted_unchecked(c));
    }
    t
}

/// Perfect tiling of `G[within]` by `K_small_k` copies plus exactly
/// `big_count` copies of `K_big_k`. `Some(None)` proves none exists.
pub fn mixed_clique_factor(
    g: &Graph,
    within: &VertexSet,
    small_k: usize,
    big_k: usize,
    big_count: usize,
    budget: &SearchBudget,
) -> SearchOutcome<Option<MixedFactor>> {
    assert!(small_k >= 1 && big_k >= 1);
    let mut s = Search {
        g,
        small_k,
        big_k,
        meter: Meter::new(budget),
        failed: HashSet::new(),
        small: Vec::new(),
        big: Vec::new(),
    };
    let r = s.solve(*within, big_count);
    let nodes = s.meter.nodes();
    SearchOutcome {
        result: r.map(|ok| {
            ok.then(|| MixedFactor {
                small: to_tiling(std::mem::take(&mut s.small)),
                big: to_tiling(std::mem::take(&mut s.big)),
            })
        }),
        nodes,
    }
}

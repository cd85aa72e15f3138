use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexSet};

use super::{Meter, SearchBudget};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexCoverResult {
    pub cover: VertexSet,
    /// `false` when the budget ran out; `cover` is then only an upper bound.
    pub exact: bool,
    pub nodes: u64,
}

struct Bnb<'a> {
    g: &'a Graph,
    meter: Meter,
    best: VertexSet,
}

impl Bnb<'_> {
    fn greedy_matching_size(&self, alive: VertexSet) -> usize {
        let mut free = alive;
        let mut m = 0;
        while let Some(v) = free.first() {
            free.remove(v);
            if let Some(u) = (self.g.neighbors(v) & free).first() {
                free.remove(u);
                m += 1;
            }
        }
        m
    }

    fn go(&mut self, mut alive: VertexSet, mut cover: VertexSet) {
        if !self.meter.tick() {
            return;
        }
        loop {
            let mut changed = false;
            for v in alive.iter() {
                let nb = self.g.neighbors(v) & alive;
                match nb.len() {
                    0 => {
                        alive.remove(v);
                        changed = true;
                    }
                    1 => {
                        let u = nb.first().expect("one neighbour");
                        cover.insert(u);
                        alive.remove(u);
                        alive.remove(v);
                        changed = true;
                        break;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        if cover.len() + self.greedy_matching_size(alive) >= self.best.len() {
            return;
        }
        if alive.is_empty() {
            self.best = cover;
            return;
        }
        let mut pick = (0, usize::MAX);
        for v in alive.iter() {
            let d = self.g.degree_into(v, &alive);
            if d > pick.0 {
                pick = (d, v);
            }
        }
        let v = pick.1;
        let nb = self.g.neighbors(v) & alive;
        self.go(alive - VertexSet::singleton(v), cover | VertexSet::singleton(v));
        self.go(alive - nb - VertexSet::singleton(v), cover | nb);
    }
}

/// Minimum vertex cover of `G[within]` by branch and bound.
pub fn min_vertex_cover_within(g: &Graph, within: &VertexSet, budget: &SearchBudget) -> VertexCoverResult {
    let within = *within & g.vertices();
    // Both ends of a maximal matching form a cover; the search must beat it.
    let mut start = VertexSet::EMPTY;
    let mut free = within;
    while let Some(v) = free.first() {
        free.remove(v);
        if let Some(u) = (g.neighbors(v) & free).first() {
            free.remove(u);
            start.insert(u);
            start.insert(v);
        }
    }
    let mut b = Bnb {
        g,
        meter: Meter::new(budget),
        best: start,
    };
    b.go(within, VertexSet::EMPTY);
    VertexCoverResult {
        cover: b.best,
        exact: !b.meter.exhausted(),
        nodes: b.meter.nodes(),
    }
}

pub fn min_vertex_cover(g: &Graph, budget: &SearchBudget) -> VertexCoverResult {
    min_vertex_cover_within(g, &g.vertices(), budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::maximum_matching;

    fn is_cover(g: &Graph, c: &VertexSet) -> bool {
        g.edges().all(|(u, v)| c.contains(u) || c.contains(v))
    }

    fn brute(g: &Graph) -> usize {
        let n = g.n();
        (0u64..1 << n)
            .filter(|&m| is_cover(g, &VertexSet::from_mask(m)))
            .map(|m| m.count_ones() as usize)
            .min()
            .unwrap()
    }

    #[test]
    fn spec_examples() {
        let b = SearchBudget::default();
        let pm = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(min_vertex_cover(&pm, &b).cover.len(), 2);
        let c5 = Graph::cycle(5).unwrap();
        let r = min_vertex_cover(&c5, &b);
        assert!(r.exact);
        assert_eq!(r.cover.len(), 3);
        assert!(min_vertex_cover(&Graph::empty(5).unwrap(), &b).cover.is_empty());
    }

    #[test]
    fn agrees_with_brute_force_and_matching_bounds() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.random_range(1..=12);
            let p = rng.random_range(0.1..0.8);
            let mut bl = crate::graph::GraphBuilder::new(n).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        bl.add_edge(u, v).unwrap();
                    }
                }
            }
            let g = bl.build();
            let r = min_vertex_cover(&g, &SearchBudget::default());
            assert!(r.exact);
            assert!(is_cover(&g, &r.cover));
            assert_eq!(r.cover.len(), brute(&g));
            let m = maximum_matching(&g).len();
            assert!(m <= r.cover.len() && r.cover.len() <= 2 * m);
        }
    }
}

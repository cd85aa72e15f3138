use std::collections::VecDeque;

use crate::graph::{Clique, Graph, Tiling, VertexSet};

const NONE: usize = usize::MAX;

/// Edmonds' blossom algorithm restricted to `G[within]`.
struct Blossom<'a> {
    g: &'a Graph,
    within: VertexSet,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    blossom: Vec<bool>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph, within: VertexSet) -> Self {
        let n = g.n();
        Self {
            g,
            within,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            blossom: vec![false; n],
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.g.n()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.blossom[self.base[v]] = true;
            self.blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> usize {
        self.used.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut q = VecDeque::from([root]);
        while let Some(v) = q.pop_front() {
            for to in (self.g.neighbors(v) & self.within).iter() {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in self.within.iter() {
                        if self.blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                q.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return to;
                    }
                    self.used[self.mate[to]] = true;
                    q.push_back(self.mate[to]);
                }
            }
        }
        NONE
    }

    fn run(mut self) -> Vec<usize> {
        // Greedy start, lowest ids first.
        for v in self.within.iter() {
            if self.mate[v] != NONE {
                continue;
            }
            if let Some(u) = (self.g.neighbors(v) & self.within)
                .iter()
                .find(|&u| self.mate[u] == NONE)
            {
                self.mate[v] = u;
                self.mate[u] = v;
            }
        }
        for root in self.within.iter() {
            if self.mate[root] != NONE {
                continue;
            }
            let mut v = self.find_path(root);
            while v != NONE {
                let pv = self.parent[v];
                let ppv = self.mate[pv];
                self.mate[v] = pv;
                self.mate[pv] = v;
                v = ppv;
            }
        }
        self.mate
    }
}

/// Maximum-cardinality matching of `G[within]` as a tiling by edges.
pub fn maximum_matching_within(g: &Graph, within: &VertexSet) -> Tiling {
    let mate = Blossom::new(g, *within & g.vertices()).run();
    let mut t = Tiling::new();
    for (v, &u) in mate.iter().enumerate() {
        if u != NONE && v < u {
            t.push_unchecked(Clique::from_sorted_unchecked(vec![v, u]));
        }
    }
    t
}

pub fn maximum_matching(g: &Graph) -> Tiling {
    maximum_matching_within(g, &g.vertices())
}

pub fn matching_number_within(g: &Graph, within: &VertexSet) -> usize {
    maximum_matching_within(g, within).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(g: &Graph, avail: VertexSet) -> usize {
        let Some(v) = avail.first() else { return 0 };
        let rest = avail - VertexSet::singleton(v);
        let mut best = brute(g, rest);
        for u in (g.neighbors(v) & rest).iter() {
            best = best.max(1 + brute(g, rest - VertexSet::singleton(u)));
        }
        best
    }

    #[test]
    fn spec_examples() {
        let pm = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(maximum_matching(&pm).len(), 2);
        assert_eq!(maximum_matching(&Graph::cycle(5).unwrap()).len(), 2);
        let mut b = crate::graph::GraphBuilder::new(6).unwrap();
        b.add_join(&[0, 1, 2].iter().collect(), &[3, 4, 5].iter().collect())
            .unwrap();
        let k33 = b.build();
        let m = maximum_matching(&k33);
        assert_eq!(m.len(), 3);
        m.validate(&k33).unwrap();
    }

    #[test]
    fn blossom_needed() {
        // Two triangles joined by a path; greedy alone gets stuck.
        let g = Graph::from_edges(
            8,
            &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (5, 7)],
        )
        .unwrap();
        assert_eq!(maximum_matching(&g).len(), 4);
    }

    #[test]
    fn agrees_with_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let n = rng.random_range(1..=11);
            let p = rng.random_range(0.1..0.7);
            let mut b = crate::graph::GraphBuilder::new(n).unwrap();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(p) {
                        b.add_edge(u, v).unwrap();
                    }
                }
            }
            let g = b.build();
            let m = maximum_matching(&g);
            m.validate(&g).unwrap();
            assert_eq!(m.len(), brute(&g, g.vertices()));
        }
    }
}

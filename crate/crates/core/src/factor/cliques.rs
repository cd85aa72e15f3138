use std::collections::HashSet;

use crate::graph::{Clique, Graph, IndexVector, LabeledPartition, Tiling, VertexSet};

use super::{FactorError, Meter, SearchBudget};

/// Lexicographically first `K_k` inside `within`.
pub fn find_clique(g: &Graph, k: usize, within: &VertexSet) -> Option<Clique> {
    fn go(g: &Graph, cand: VertexSet, need: usize, chosen: &mut Vec<usize>) -> bool {
        if need == 0 {
            return true;
        }
        if cand.len() < need {
            return false;
        }
        for u in cand.iter() {
            chosen.push(u);
            if go(g, cand.above(u) & g.neighbors(u), need - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::with_capacity(k);
    go(g, *within & g.vertices(), k, &mut chosen).then(|| Clique::from_sorted_unchecked(chosen))
}

/// Result of a packing search. `exhaustive` is `true` when the search
/// finished, so a short tiling proves no larger packing exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliquePacking {
    pub tiling: Tiling,
    pub exhaustive: bool,
}

struct Packer<'a> {
    g: &'a Graph,
    k: usize,
    want: usize,
    meter: Meter,
    failed: HashSet<(VertexSet, usize)>,
    cur: Vec<Vec<usize>>,
    best: Vec<Vec<usize>>,
}

impl Packer<'_> {
    /// `true` once `want` cliques are packed.
    fn go(&mut self, avail: VertexSet) -> Option<bool> {
        if self.cur.len() > self.best.len() {
            self.best = self.cur.clone();
        }
        let need = self.want - self.cur.len();
        if need == 0 {
            return Some(true);
        }
        if avail.len() < need * self.k || self.failed.contains(&(avail, need)) {
            return Some(false);
        }
        if !self.meter.tick() {
            return None;
        }
        let v = avail.first().expect("non-empty");
        let rest = avail - VertexSet::singleton(v);
        let cand = self.g.neighbors(v) & rest;
        let mut chosen = vec![v];
        if self.extend(rest, cand, &mut chosen)? {
            return Some(true);
        }
        if self.go(rest)? {
            return Some(true);
        }
        if self.failed.len() < 1 << 20 {
            self.failed.insert((avail, need));
        }
        Some(false)
    }

    fn extend(&mut self, rest: VertexSet, cand: VertexSet, chosen: &mut Vec<usize>) -> Option<bool> {
        if chosen.len() == self.k {
            let left = rest - chosen.iter().collect();
            self.cur.push(chosen.clone());
            let r = self.go(left);
            self.cur.pop();
            return r;
        }
        for u in cand.iter() {
            let next = cand.above(u) & self.g.neighbors(u);
            if next.len() + chosen.len() + 1 < self.k {
                continue;
            }
            chosen.push(u);
            let r = self.extend(rest, next, chosen);
            chosen.pop();
            if r? {
                return Some(true);
            }
        }
        Some(false)
    }
}

fn to_tiling(cliques: &[Vec<usize>]) -> Tiling {
    let mut t = Tiling::new();
    for c in cliques {
        t.push_unchecked(Clique::from_sorted_unchecked(c.clone()));
    }
    t
}

/// Exact search for `want` vertex-disjoint copies of `K_k` inside `within`.
/// Returns the largest packing seen.
pub fn max_clique_packing(
    g: &Graph,
    k: usize,
    within: &VertexSet,
    want: usize,
    budget: &SearchBudget,
) -> CliquePacking {
    assert!(k >= 1);
    let mut p = Packer {
        g,
        k,
        want,
        meter: Meter::new(budget),
        failed: HashSet::new(),
        cur: Vec::new(),
        best: Vec::new(),
    };
    let r = p.go(*within & g.vertices());
    CliquePacking {
        tiling: to_tiling(&p.best),
        exhaustive: r.is_some(),
    }
}

/// Up to `want` disjoint copies of `K_k` avoiding `forbidden`.
///
/// Greedy first; if it stalls short of `want`, an exact packing search
/// takes over and either succeeds or proves the shortfall.
pub fn greedy_clique_tiling(
    g: &Graph,
    k: usize,
    forbidden: &VertexSet,
    want: usize,
    budget: &SearchBudget,
) -> CliquePacking {
    assert!(k >= 1);
    let mut avail = g.vertices() - *forbidden;
    let mut t = Tiling::new();
    while t.len() < want {
        match find_clique(g, k, &avail) {
            Some(c) => {
                avail = avail - c.to_set();
                t.push_unchecked(c);
            }
            None => break,
        }
    }
    if t.len() == want {
        return CliquePacking {
            tiling: t,
            exhaustive: true,
        };
    }
    let exact = max_clique_packing(g, k, &(g.vertices() - *forbidden), want, budget);
    if exact.tiling.len() >= t.len() {
        exact
    } else {
        CliquePacking {
            tiling: t,
            exhaustive: exact.exhaustive,
        }
    }
}

/// Extends `seed` to a clique with index vector exactly `target` under `p`.
///
/// New vertices avoid `forbidden` and, when `good_only` is given, come from
/// `good_only[i]` for class `i`. The search is exhaustive, so `Ok(None)`
/// means no such clique exists.
pub fn extend_clique_with_index_vector(
    g: &Graph,
    p: &LabeledPartition,
    seed: &Clique,
    target: &IndexVector,
    forbidden: &VertexSet,
    good_only: Option<&[VertexSet]>,
) -> Result<Option<Clique>, FactorError> {
    let t = p.num_classes();
    if target.0.len() != t {
        return Err(FactorError::Precondition(format!(
            "target has {} entries, partition has {t} classes",
            target.0.len()
        )));
    }
    if let Some(go) = good_only {
        if go.len() != t {
            return Err(FactorError::Precondition(
                "good_only must list one set per class".into(),
            ));
        }
    }
    for &v in seed.vertices() {
        g.check_vertex(v)?;
    }
    if !g.is_clique(seed.vertices()) {
        return Err(crate::graph::GraphError::NotAClique(seed.vertices().to_vec()).into());
    }
    let have = p.index_vector(seed.vertices());
    if have.total() != seed.len() {
        return Err(FactorError::Precondition(
            "seed leaves the partition's ground set".into(),
        ));
    }
    if !have.le(target) {
        return Err(FactorError::Precondition(format!(
            "seed index vector {:?} exceeds target {:?}",
            have.0, target.0
        )));
    }
    let deficit: Vec<usize> = target.0.iter().zip(&have.0).map(|(a, b)| a - b).collect();
    let common = g.common_neighborhood(seed.vertices(), &(g.vertices() - *forbidden));
    let pools: Vec<VertexSet> = (0..t)
        .map(|i| {
            let mut s = *p.class(i) & common;
            if let Some(go) = good_only {
                s &= go[i];
            }
            s
        })
        .collect();

    fn fill(
        g: &Graph,
        pools: &[VertexSet],
        deficit: &[usize],
        class: usize,
        need: usize,
        cand: VertexSet,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if class == pools.len() {
            return true;
        }
        if need == 0 {
            let next = class + 1;
            let nd = deficit.get(next).copied().unwrap_or(0);
            return fill(g, pools, deficit, next, nd, cand, chosen);
        }
        let here = cand & pools[class];
        if here.len() < need {
            return false;
        }
        for u in here.iter() {
            chosen.push(u);
            let next = (cand & g.neighbors(u)) - (pools[class] - here.above(u));
            if fill(g, pools, deficit, class, need - 1, next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = seed.vertices().to_vec();
    let all = pools.iter().fold(VertexSet::EMPTY, |a, s| a | *s);
    if fill(g, &pools, &deficit, 0, deficit[0], all, &mut chosen) {
        Ok(Some(Clique::from_sorted_unchecked(chosen)))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;

    fn octahedron() -> (Graph, LabeledPartition) {
        let p = LabeledPartition::consecutive(&[2, 2, 2]).unwrap();
        let mut b = GraphBuilder::new(6).unwrap();
        for i in 0..3 {
            for j in i + 1..3 {
                b.add_join(p.class(i), p.class(j)).unwrap();
            }
        }
        (b.build(), p)
    }

    #[test]
    fn greedy_tiling_examples() {
        let b = SearchBudget::default();
        let k9 = Graph::complete(9).unwrap();
        let t = greedy_clique_tiling(&k9, 3, &VertexSet::EMPTY, 3, &b);
        assert_eq!(t.tiling.len(), 3);
        t.tiling.validate(&k9).unwrap();

        let c6 = Graph::cycle(6).unwrap();
        let t = greedy_clique_tiling(&c6, 3, &VertexSet::EMPTY, 1, &b);
        assert!(t.tiling.is_empty() && t.exhaustive);

        let (oct, _) = octahedron();
        let t = greedy_clique_tiling(&oct, 3, &VertexSet::singleton(0), 1, &b);
        assert_eq!(t.tiling.len(), 1);
        assert!(!t.tiling.covered().contains(0));
        assert!(oct.is_clique(t.tiling.cliques()[0].vertices()));
    }

    #[test]
    fn exact_fallback_beats_greedy() {
        // Greedy takes {0,1,2} and is stuck; {0,3,4} + {1,5,6} packs two.
        let g = Graph::from_edges(
            7,
            &[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4), (1, 5), (1, 6), (5, 6)],
        )
        .unwrap();
        assert_eq!(find_clique(&g, 3, &g.vertices()).unwrap().vertices(), &[0, 1, 2]);
        let t = greedy_clique_tiling(&g, 3, &VertexSet::EMPTY, 2, &SearchBudget::default());
        assert_eq!(t.tiling.len(), 2);
        t.tiling.validate(&g).unwrap();
    }

    #[test]
    fn extension_examples() {
        let (g, p) = octahedron();
        let seed = Clique::new(&g, vec![0]).unwrap();
        let c = extend_clique_with_index_vector(&g, &p, &seed, &IndexVector(vec![1, 1, 1]), &VertexSet::EMPTY, None)
            .unwrap()
            .unwrap();
        assert_eq!(c.vertices(), &[0, 2, 4]);

        let c5 = Graph::cycle(5).unwrap();
        let p1 = LabeledPartition::consecutive(&[5]).unwrap();
        let seed = Clique::new(&c5, vec![0, 1]).unwrap();
        let none =
            extend_clique_with_index_vector(&c5, &p1, &seed, &IndexVector(vec![3]), &VertexSet::EMPTY, None).unwrap();
        assert!(none.is_none());
    }

    #[test]
    fn extension_respects_good_only_and_forbidden() {
        let (g, p) = octahedron();
        let seed = Clique::new(&g, vec![0]).unwrap();
        let good = vec![*p.class(0), VertexSet::singleton(3), *p.class(2)];
        let c = extend_clique_with_index_vector(
            &g,
            &p,
            &seed,
            &IndexVector(vec![1, 1, 1]),
            &VertexSet::singleton(4),
            Some(&good),
        )
        .unwrap()
        .unwrap();
        assert_eq!(c.vertices(), &[0, 3, 5]);
    }

    #[test]
    fn extension_with_two_in_a_class() {
        // Class 0 = {0,1,2} with edge 0-1, class 1 = {3,4} joined to class 0.
        let p = LabeledPartition::consecutive(&[3, 2]).unwrap();
        let mut b = GraphBuilder::new(5).unwrap();
        b.add_join(p.class(0), p.class(1)).unwrap();
        b.add_edge(0, 1).unwrap();
        let g = b.build();
        let seed = Clique::new(&g, vec![0, 1]).unwrap();
        let c = extend_clique_with_index_vector(&g, &p, &seed, &IndexVector(vec![2, 1]), &VertexSet::EMPTY, None)
            .unwrap()
            .unwrap();
        assert_eq!(c.vertices(), &[0, 1, 3]);
        let err = extend_clique_with_index_vector(&g, &p, &seed, &IndexVector(vec![1, 1]), &VertexSet::EMPTY, None);
        assert!(err.is_err());
    }
}

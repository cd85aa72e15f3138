use crate::graph::{Graph, GraphBuilder, LabeledPartition};

use super::{mixed_clique_factor, FactorError, FactorResult, SearchBudget};

/// Keeps only the edges between different classes.
fn cross_edges(g: &Graph, p: &LabeledPartition) -> Graph {
    let mut b = GraphBuilder::new(g.n()).expect("same order as g");
    for (u, v) in g.edges() {
        match (p.class_of(u), p.class_of(v)) {
            (Some(a), Some(c)) if a != c => {
                b.add_edge(u, v).expect("valid edge");
            }
            _ => {}
        }
    }
    b.build()
}

/// A factor of `G[ground(p)]` by transversal cliques, one vertex per class.
///
/// Every class of `p` (including `B` when present) must have the same size.
pub fn multipartite_kr_factor(
    g: &Graph,
    p: &LabeledPartition,
    budget: &SearchBudget,
) -> Result<FactorResult, FactorError> {
    let sizes: Vec<usize> = p.classes().iter().map(|c| c.len()).collect();
    if sizes.windows(2).any(|w| w[0] != w[1]) {
        return Err(FactorError::UnequalClasses(sizes));
    }
    let r = sizes.len();
    if r < 2 {
        return Err(FactorError::InvalidR(r));
    }
    let ground = p.ground();
    g.check_subset(&ground)?;
    let h = cross_edges(g, p);
    let out = mixed_clique_factor(&h, &ground, r, r + 1, 0, budget);
    Ok(match out.result {
        Some(Some(f)) => FactorResult::yes(f.small, out.nodes),
        Some(None) => FactorResult::no(out.nodes),
        None => FactorResult::unknown(out.nodes),
    })
}

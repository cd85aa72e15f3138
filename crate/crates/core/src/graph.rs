//! Dense undirected simple graphs over a fixed-width vertex bitset.
//!
//! Vertex ids are dense and 0-based. Every subset of vertices is a
//! [`VertexSet`], a 256-bit value type, so set algebra never allocates and
//! adjacency rows can be intersected directly.

use std::fmt;
use std::ops::{BitAnd, BitAndAssign, BitOr, BitOrAssign, Not, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

const WORDS: usize = 4;

/// Largest graph order representable by [`VertexSet`].
pub const MAX_VERTICES: usize = WORDS * 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph order {0} exceeds the supported maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertices {0:?} do not form a clique")]
    NotAClique(Vec<usize>),
    #[error("cliques overlap at vertex {0}")]
    Overlap(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A subset of `0..MAX_VERTICES` stored as a bitset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet([u64; WORDS]);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet([0; WORDS]);

    pub fn new() -> Self {
        Self::EMPTY
    }

    /// `{0, 1, ..., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_VERTICES);
        let mut s = Self::EMPTY;
        for (w, word) in s.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        s
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = Self::EMPTY;
        s.insert(v);
        s
    }

    /// Builds a set from the low bits of `mask`.
    pub fn from_mask(mask: u64) -> Self {
        let mut s = Self::EMPTY;
        s.0[0] = mask;
        s
    }

    /// The low 64 bits.
    pub fn low_mask(&self) -> u64 {
        self.0[0]
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.0[v >> 6] |= 1u64 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.0[v >> 6] &= !(1u64 << (v & 63));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < MAX_VERTICES && self.0[v >> 6] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// Smallest member.
    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Largest member.
    pub fn last(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    #[inline]
    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & !b == 0)
    }

    #[inline]
    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a & b == 0)
    }

    /// Members strictly greater than `v`.
    pub fn above(&self, v: usize) -> VertexSet {
        let mut s = *self & !VertexSet::full((v + 1).min(MAX_VERTICES));
        if v + 1 >= MAX_VERTICES {
            s = Self::EMPTY;
        }
        s
    }

    pub fn iter(&self) -> VertexSetIter {
        VertexSetIter { set: *self }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = v.iter().find(|&&x| x >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} exceeds {MAX_VERTICES}")));
        }
        Ok(v.into_iter().collect())
    }
}

pub struct VertexSetIter {
    set: VertexSet,
}

impl Iterator for VertexSetIter {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        let v = self.set.first()?;
        self.set.remove(v);
        Some(v)
    }
}

macro_rules! bitop {
    ($tr:ident, $f:ident, $atr:ident, $af:ident, $op:tt) => {
        impl $tr for VertexSet {
            type Output = VertexSet;
            #[inline]
            fn $f(self, rhs: VertexSet) -> VertexSet {
                let mut out = self;
                for i in 0..WORDS {
                    out.0[i] = self.0[i] $op rhs.0[i];
                }
                out
            }
        }
        impl $atr for VertexSet {
            #[inline]
            fn $af(&mut self, rhs: VertexSet) {
                for i in 0..WORDS {
                    self.0[i] = self.0[i] $op rhs.0[i];
                }
            }
        }
    };
}

bitop!(BitAnd, bitand, BitAndAssign, bitand_assign, &);
bitop!(BitOr, bitor, BitOrAssign, bitor_assign, |);

impl Sub for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn sub(self, rhs: VertexSet) -> VertexSet {
        let mut out = self;
        for i in 0..WORDS {
            out.0[i] &= !rhs.0[i];
        }
        out
    }
}

impl Not for VertexSet {
    type Output = VertexSet;
    #[inline]
    fn not(self) -> VertexSet {
        let mut out = self;
        for w in out.0.iter_mut() {
            *w = !*w;
        }
        out
    }
}

/// Immutable simple undirected graph with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<VertexSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Accumulates edges, then freezes into a [`Graph`].
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    rows: Vec<VertexSet>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Self {
            rows: vec![VertexSet::EMPTY; n],
        })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Adds `{u, v}`; repeated edges are idempotent.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<&mut Self, GraphError> {
        let n = self.rows.len();
        for x in [u, v] {
            if x >= n {
                return Err(GraphError::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        Ok(self)
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.rows.len() && v < self.rows.len() {
            self.rows[u].remove(v);
            self.rows[v].remove(u);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows.get(u).is_some_and(|r| r.contains(v))
    }

    /// Makes every pair inside `set` adjacent.
    pub fn add_clique_on(&mut self, set: &VertexSet) -> Result<&mut Self, GraphError> {
        let vs = set.to_vec();
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                self.add_edge(u, v)?;
            }
        }
        Ok(self)
    }

    /// Joins every vertex of `a` to every vertex of `b` (`a`, `b` disjoint).
    pub fn add_join(&mut self, a: &VertexSet, b: &VertexSet) -> Result<&mut Self, GraphError> {
        for u in a.iter() {
            for v in b.iter() {
                if u != v {
                    self.add_edge(u, v)?;
                }
            }
        }
        Ok(self)
    }

    pub fn build(self) -> Graph {
        let g = Graph { rows: self.rows };
        debug_assert!(g.is_well_formed());
        g
    }
}

impl Graph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n)?;
        for &(u, v) in edges {
            b.add_edge(u, v)?;
        }
        Ok(b.build())
    }

    pub fn empty(n: usize) -> Result<Self, GraphError> {
        Ok(GraphBuilder::new(n)?.build())
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n)?;
        b.add_clique_on(&VertexSet::full(n))?;
        Ok(b.build())
    }

    /// Cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Result<Self, GraphError> {
        let mut b = GraphBuilder::new(n)?;
        if n >= 3 {
            for i in 0..n {
                b.add_edge(i, (i + 1) % n)?;
            }
        }
        Ok(b.build())
    }

    pub fn to_builder(&self) -> GraphBuilder {
        GraphBuilder {
            rows: self.rows.clone(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n())
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        self.rows[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.rows[u].contains(v)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].len()
    }

    /// `|N(v) ∩ within|`. Panics if `v` is out of range.
    #[inline]
    pub fn degree_into(&self, v: usize, within: &VertexSet) -> usize {
        (self.rows[v] & *within).len()
    }

    /// Range-checked [`Graph::degree_into`].
    pub fn try_degree_into(&self, v: usize, within: &VertexSet) -> Result<usize, GraphError> {
        self.check_vertex(v)?;
        Ok(self.degree_into(v, within))
    }

    /// Vertices of `within` adjacent to every vertex of `clique`.
    /// The empty clique yields `within` itself.
    pub fn common_neighborhood(&self, clique: &[usize], within: &VertexSet) -> VertexSet {
        clique.iter().fold(*within, |acc, &v| acc & self.rows[v])
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Minimum degree of `G[within]` (0 for the empty set).
    pub fn min_degree_within(&self, within: &VertexSet) -> usize {
        within.iter().map(|v| self.degree_into(v, within)).min().unwrap_or(0)
    }

    pub fn max_degree_within(&self, within: &VertexSet) -> usize {
        within.iter().map(|v| self.degree_into(v, within)).max().unwrap_or(0)
    }

    pub fn is_regular(&self, d: usize) -> bool {
        (0..self.n()).all(|v| self.degree(v) == d)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum::<usize>() / 2
    }

    /// `e(G[within])`.
    pub fn edges_within(&self, within: &VertexSet) -> usize {
        within.iter().map(|v| self.degree_into(v, within)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| self.rows[u].above(u).iter().map(move |v| (u, v)))
    }

    pub fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    pub fn check_subset(&self, s: &VertexSet) -> Result<(), GraphError> {
        match s.last() {
            Some(v) if v >= self.n() => Err(GraphError::VertexOutOfRange { vertex: v, n: self.n() }),
            _ => Ok(()),
        }
    }

    /// `G[s]`, relabelled to `0..|s|` in increasing id order. The returned
    /// vector maps new ids to old ids.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<(Graph, Vec<usize>), GraphError> {
        self.check_subset(s)?;
        let old: Vec<usize> = s.to_vec();
        let mut pos = vec![usize::MAX; self.n()];
        for (i, &v) in old.iter().enumerate() {
            pos[v] = i;
        }
        let rows = old
            .iter()
            .map(|&v| (self.rows[v] & *s).iter().map(|u| pos[u]).collect())
            .collect();
        Ok((Graph { rows }, old))
    }

    pub fn is_clique(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(i, &u)| u < self.n() && vs[i + 1..].iter().all(|&v| u != v && self.has_edge(u, v)))
    }

    /// Whether `G[within]` contains a triangle.
    pub fn has_triangle_within(&self, within: &VertexSet) -> bool {
        within.iter().any(|u| {
            let nu = self.rows[u] & within.above(u);
            nu.iter().any(|v| !(nu & self.rows[v]).above(v).is_empty())
        })
    }

    /// Symmetric and irreflexive adjacency.
    pub fn is_well_formed(&self) -> bool {
        let n = self.n();
        (0..n).all(|u| {
            !self.rows[u].contains(u)
                && self.rows[u].last().is_none_or(|m| m < n)
                && self.rows[u].iter().all(|v| self.rows[v].contains(u))
        })
    }

    /// Connected components of `G[within]`, each ordered by smallest member.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        let mut left = *within;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for v in frontier.iter() {
                    next |= self.rows[v];
                }
                next &= *within - comp;
                comp |= next;
                frontier = next;
            }
            left = left - comp;
            out.push(comp);
        }
        out
    }
}

/// A complete subgraph, stored as a sorted vertex list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Clique(Vec<usize>);

impl Clique {
    pub fn new(g: &Graph, mut vertices: Vec<usize>) -> Result<Self, GraphError> {
        vertices.sort_unstable();
        for &v in &vertices {
            g.check_vertex(v)?;
        }
        if !g.is_clique(&vertices) {
            return Err(GraphError::NotAClique(vertices));
        }
        Ok(Clique(vertices))
    }

    /// Sorts without checking adjacency; callers must have verified it.
    pub(crate) fn from_sorted_unchecked(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        Clique(vertices)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_set(&self) -> VertexSet {
        self.0.iter().collect()
    }
}

/// Pairwise vertex-disjoint cliques of a host graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Tiling {
    cliques: Vec<Clique>,
}

impl Tiling {
    pub fn new() -> Self {
        Self::default()
    }

    /// Validates cliques and disjointness against `g`.
    pub fn from_cliques(g: &Graph, cliques: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let mut t = Tiling::new();
        for c in cliques {
            t.push(Clique::new(g, c)?)?;
        }
        Ok(t)
    }

    /// Appends a clique, rejecting overlap with existing members.
    pub fn push(&mut self, c: Clique) -> Result<(), GraphError> {
        let covered = self.covered();
        if let Some(v) = c.vertices().iter().find(|&&v| covered.contains(v)) {
            return Err(GraphError::Overlap(*v));
        }
        self.cliques.push(c);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, c: Clique) {
        self.cliques.push(c);
    }

    pub fn extend_from(&mut self, other: &Tiling) -> Result<(), GraphError> {
        for c in &other.cliques {
            self.push(c.clone())?;
        }
        Ok(())
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn covered(&self) -> VertexSet {
        self.cliques.iter().flat_map(|c| c.vertices().iter()).collect()
    }

    pub fn remove(&mut self, idx: usize) -> Clique {
        self.cliques.remove(idx)
    }

    pub fn replace(&mut self, idx: usize, c: Clique) -> Clique {
        std::mem::replace(&mut self.cliques[idx], c)
    }

    /// Re-checks every clique against `g` and pairwise disjointness.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        let mut seen = VertexSet::EMPTY;
        for c in &self.cliques {
            for &v in c.vertices() {
                g.check_vertex(v)?;
                if seen.contains(v) {
                    return Err(GraphError::Overlap(v));
                }
                seen.insert(v);
            }
            if !g.is_clique(c.vertices()) {
                return Err(GraphError::NotAClique(c.vertices().to_vec()));
            }
        }
        Ok(())
    }

    /// Valid, spanning, and every clique has exactly `r` vertices.
    pub fn is_kr_factor_of(&self, g: &Graph, r: usize) -> bool {
        self.validate(g).is_ok() && self.cliques.iter().all(|c| c.len() == r) && self.covered() == g.vertices()
    }

    pub fn to_vecs(&self) -> Vec<Vec<usize>> {
        self.cliques.iter().map(|c| c.0.clone()).collect()
    }
}

/// Per-class role tag of a [`LabeledPartition`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    /// `A_i` with a 1-based index.
    A(usize),
    B,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::A(i) => write!(f, "A_{i}"),
            Role::B => write!(f, "B"),
        }
    }
}

/// Ordered partition `{A_1, ..., A_s, B}` of a vertex set; `B` is optional
/// and may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPartition {
    classes: Vec<VertexSet>,
    has_b: bool,
}

impl LabeledPartition {
    /// Checks disjointness and that the union is exactly `0..n`.
    pub fn new(n: usize, a: Vec<VertexSet>, b: Option<VertexSet>) -> Result<Self, GraphError> {
        if a.is_empty() {
            return Err(GraphError::InvalidPartition("needs at least one A-class".into()));
        }
        let has_b = b.is_some();
        let mut classes = a;
        if let Some(b) = b {
            classes.push(b);
        }
        let mut seen = VertexSet::EMPTY;
        for (i, c) in classes.iter().enumerate() {
            if !seen.is_disjoint(c) {
                return Err(GraphError::InvalidPartition(format!(
                    "class {i} overlaps an earlier class"
                )));
            }
            seen |= *c;
        }
        if seen != VertexSet::full(n) {
            return Err(GraphError::InvalidPartition(format!(
                "classes cover {} of {n} vertices",
                (seen & VertexSet::full(n)).len()
            )));
        }
        Ok(Self { classes, has_b })
    }

    /// Partition into consecutive blocks of the given sizes, all A-classes.
    pub fn consecutive(sizes: &[usize]) -> Result<Self, GraphError> {
        let mut start = 0;
        let mut a = Vec::new();
        for &s in sizes {
            a.push((start..start + s).collect());
            start += s;
        }
        Self::new(start, a, None)
    }

    /// Number of A-classes.
    pub fn s(&self) -> usize {
        self.classes.len() - usize::from(self.has_b)
    }

    pub fn has_b(&self) -> bool {
        self.has_b
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn classes(&self) -> &[VertexSet] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &VertexSet {
        &self.classes[i]
    }

    /// `A_{i+1}` for 0-based `i`.
    pub fn a(&self, i: usize) -> &VertexSet {
        assert!(i < self.s());
        &self.classes[i]
    }

    pub fn a_classes(&self) -> &[VertexSet] {
        &self.classes[..self.s()]
    }

    /// `B`, or the empty set when the partition has no B-class.
    pub fn b(&self) -> VertexSet {
        if self.has_b {
            *self.classes.last().unwrap()
        } else {
            VertexSet::EMPTY
        }
    }

    /// Index of `B` among the classes.
    pub fn b_index(&self) -> Option<usize> {
        self.has_b.then(|| self.classes.len() - 1)
    }

    pub fn role(&self, i: usize) -> Role {
        if Some(i) == self.b_index() {
            Role::B
        } else {
            Role::A(i + 1)
        }
    }

    pub fn ground(&self) -> VertexSet {
        self.classes.iter().fold(VertexSet::EMPTY, |a, c| a | *c)
    }

    pub fn class_of(&self, v: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(v))
    }

    pub fn index_vector(&self, vertices: &[usize]) -> IndexVector {
        IndexVector(
            self.classes
                .iter()
                .map(|c| vertices.iter().filter(|&&v| c.contains(v)).count())
                .collect(),
        )
    }

    /// Copy with every class intersected with `keep`; the ground set shrinks.
    pub fn restrict(&self, keep: &VertexSet) -> LabeledPartition {
        LabeledPartition {
            classes: self.classes.iter().map(|c| *c & *keep).collect(),
            has_b: self.has_b,
        }
    }

    /// Moves `v` into class `to`.
    pub fn move_vertex(&mut self, v: usize, to: usize) {
        for c in self.classes.iter_mut() {
            c.remove(v);
        }
        self.classes[to].insert(v);
    }
}

/// Per-class intersection counts of a vertex set under a partition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexVector(pub Vec<usize>);

impl IndexVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &IndexVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

/// Convenience: `index_vector` as a free function.
pub fn index_vector(p: &LabeledPartition, c: &Clique) -> IndexVector {
    p.index_vector(c.vertices())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().collect()
    }

    #[test]
    fn bitset_basics() {
        let s = VertexSet::full(130);
        assert_eq!(s.len(), 130);
        assert_eq!(s.last(), Some(129));
        assert_eq!(VertexSet::full(64).len(), 64);
        assert_eq!(VertexSet::full(256).len(), 256);
        let a = set(&[1, 5, 70, 200]);
        assert_eq!(a.to_vec(), vec![1, 5, 70, 200]);
        assert_eq!(a.above(5).to_vec(), vec![70, 200]);
        assert_eq!(a.above(255), VertexSet::EMPTY);
        assert_eq!((a - set(&[5])).len(), 3);
        assert!(set(&[1, 70]).is_subset(&a));
    }

    #[test]
    fn induced_subgraph_examples() {
        let k4 = Graph::complete(4).unwrap();
        let (k3, map) = k4.induced_subgraph(&set(&[0, 1, 2])).unwrap();
        assert_eq!(k3, Graph::complete(3).unwrap());
        assert_eq!(map, vec![0, 1, 2]);

        let (e, map) = k4.induced_subgraph(&VertexSet::EMPTY).unwrap();
        assert_eq!(e.n(), 0);
        assert!(map.is_empty());

        let c5 = Graph::cycle(5).unwrap();
        let (h, map) = c5.induced_subgraph(&set(&[0, 1, 3])).unwrap();
        assert_eq!(map, vec![0, 1, 3]);
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(h.degree(2), 0);

        assert!(matches!(
            c5.induced_subgraph(&set(&[7])),
            Err(GraphError::VertexOutOfRange { vertex: 7, n: 5 })
        ));
    }

    #[test]
    fn degree_queries() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!(k4.degree_into(0, &set(&[1, 2, 3])), 3);
        assert_eq!(k4.degree_into(0, &set(&[0])), 0);
        let c5 = Graph::cycle(5).unwrap();
        assert_eq!(c5.degree_into(0, &set(&[1, 2, 3, 4])), 2);
        assert!(c5.try_degree_into(9, &set(&[1])).is_err());
    }

    #[test]
    fn common_neighborhood_examples() {
        let k5 = Graph::complete(5).unwrap();
        assert_eq!(k5.common_neighborhood(&[0, 1], &k5.vertices()), set(&[2, 3, 4]));
        let c5 = Graph::cycle(5).unwrap();
        assert!(c5.common_neighborhood(&[0, 1], &c5.vertices()).is_empty());
        let u = set(&[1, 3]);
        assert_eq!(c5.common_neighborhood(&[], &u), u);
    }

    #[test]
    fn regularity() {
        let k4 = Graph::complete(4).unwrap();
        assert!(k4.is_regular(3));
        assert!(!k4.is_regular(2));
    }

    #[test]
    fn index_vectors() {
        // K_{2,2,2} with parts {0,1},{2,3},{4,5}
        let p = LabeledPartition::consecutive(&[2, 2, 2]).unwrap();
        assert_eq!(p.index_vector(&[0, 2, 4]), IndexVector(vec![1, 1, 1]));
        let p = LabeledPartition::new(4, vec![set(&[0, 1])], Some(set(&[2, 3]))).unwrap();
        assert_eq!(p.index_vector(&[0, 1]), IndexVector(vec![2, 0]));
        assert_eq!(p.role(1), Role::B);
        assert_eq!(p.s(), 1);
    }

    #[test]
    fn partition_validation() {
        assert!(LabeledPartition::new(4, vec![set(&[0, 1])], Some(set(&[1, 2, 3]))).is_err());
        assert!(LabeledPartition::new(4, vec![set(&[0, 1])], Some(set(&[2]))).is_err());
        assert!(LabeledPartition::new(0, vec![], None).is_err());
    }

    #[test]
    fn builder_rejects_bad_edges() {
        let mut b = GraphBuilder::new(3).unwrap();
        assert_eq!(b.add_edge(1, 1).unwrap_err(), GraphError::SelfLoop(1));
        assert!(b.add_edge(0, 3).is_err());
        assert!(GraphBuilder::new(MAX_VERTICES + 1).is_err());
    }

    #[test]
    fn tiling_validation() {
        let k4 = Graph::complete(4).unwrap();
        let t = Tiling::from_cliques(&k4, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert!(t.is_kr_factor_of(&k4, 2));
        assert!(Tiling::from_cliques(&k4, vec![vec![0, 1], vec![1, 2]]).is_err());
        let c5 = Graph::cycle(5).unwrap();
        assert!(Tiling::from_cliques(&c5, vec![vec![0, 2]]).is_err());
    }

    #[test]
    fn components() {
        let g = Graph::from_edges(6, &[(0, 1), (2, 3), (3, 4)]).unwrap();
        let comps = g.components_within(&g.vertices());
        assert_eq!(comps, vec![set(&[0, 1]), set(&[2, 3, 4]), set(&[5])]);
    }
}

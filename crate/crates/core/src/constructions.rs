//! Graph families used as examples, extremal witnesses and test beds.
//!
//! Every generator audits its own output; a failed audit is an error, never
//! a silently wrong graph.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::factor::SearchBudget;
use crate::graph::{Graph, GraphBuilder, GraphError, LabeledPartition, VertexSet, MAX_VERTICES};
use crate::partition::{verify_good_partition, PartitionError, PartitionParams};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("bad family spec: {0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "balanced")]
    BalancedCompleteMultipartite,
    #[serde(rename = "stars")]
    MultipartitePlusStars,
    #[serde(rename = "section6")]
    Section6Construction,
    #[serde(rename = "bip2factor")]
    BipartitePlusTwoFactor,
    #[serde(rename = "random-regular")]
    RandomRegular,
    #[serde(rename = "matching-in-parts")]
    MatchingInParts,
    /// Random instance with a planted good partition.
    #[serde(rename = "planted")]
    Planted,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::BalancedCompleteMultipartite => "balanced",
            Family::MultipartitePlusStars => "stars",
            Family::Section6Construction => "section6",
            Family::BipartitePlusTwoFactor => "bip2factor",
            Family::RandomRegular => "random-regular",
            Family::MatchingInParts => "matching-in-parts",
            Family::Planted => "planted",
        }
    }
}

impl FromStr for Family {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "balanced" => Family::BalancedCompleteMultipartite,
            "stars" => Family::MultipartitePlusStars,
            "section6" => Family::Section6Construction,
            "bip2factor" => Family::BipartitePlusTwoFactor,
            "random-regular" => Family::RandomRegular,
            "matching-in-parts" => Family::MatchingInParts,
            "planted" => Family::Planted,
            _ => return Err(ConstructionError::Parse(format!("unknown family '{s}'"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub r: usize,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Degree for `random-regular`; defaults to `(r-1)n + 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    /// Number of A-classes for `planted`; defaults to `r - 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
}

impl FamilySpec {
    pub fn new(family: Family, r: usize, n: usize) -> Self {
        Self {
            family,
            r,
            n,
            seed: None,
            d: None,
            s: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Parses JSON (when the text starts with `{`) or `family:key=value,...`.
    pub fn parse(text: &str) -> Result<Self, ConstructionError> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text).map_err(|e| ConstructionError::Parse(e.to_string()));
        }
        text.parse()
    }
}

impl FromStr for FamilySpec {
    type Err = ConstructionError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (fam, rest) = text.split_once(':').unwrap_or((text, ""));
        let family: Family = fam.trim().parse()?;
        let mut spec = FamilySpec::new(family, 0, 0);
        let mut r = None;
        for kv in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| ConstructionError::Parse(format!("expected key=value, got '{kv}'")))?;
            let num = |v: &str| -> Result<u64, ConstructionError> {
                v.trim()
                    .parse()
                    .map_err(|_| ConstructionError::Parse(format!("'{k}' needs a non-negative integer, got '{v}'")))
            };
            match k.trim() {
                "r" => r = Some(num(v)? as usize),
                "n" => spec.n = num(v)? as usize,
                "seed" => spec.seed = Some(num(v)?),
                "d" => spec.d = Some(num(v)? as usize),
                "s" => spec.s = Some(num(v)? as usize),
                other => return Err(ConstructionError::Parse(format!("unknown key '{other}'"))),
            }
        }
        spec.r = match (family, r) {
            (_, Some(r)) => r,
            (Family::BipartitePlusTwoFactor, None) => 2,
            _ => return Err(ConstructionError::Parse("missing r".into())),
        };
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:r={},n={}", self.family.name(), self.r, self.n)?;
        if let Some(d) = self.d {
            write!(f, ",d={d}")?;
        }
        if let Some(s) = self.s {
            write!(f, ",s={s}")?;
        }
        if let Some(seed) = self.seed {
            write!(f, ",seed={seed}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    pub spec: FamilySpec,
    pub graph: Graph,
    pub partition: Option<LabeledPartition>,
    /// Parameters the planted partition was verified against.
    pub params: Option<PartitionParams>,
    /// Header comment lines for emitted files.
    pub provenance: Vec<String>,
}

/// Builds the graph described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<Generated, ConstructionError> {
    let (r, n) = (spec.r, spec.n);
    let seed = spec.seed.unwrap_or(0);
    let mut params = None;
    let (graph, partition, mut notes) = match spec.family {
        Family::BalancedCompleteMultipartite => {
            let (g, p) = gen_balanced_multipartite(r, n)?;
            (g, Some(p), vec![])
        }
        Family::MultipartitePlusStars => {
            let (g, p) = gen_multipartite_plus_stars(r, n)?;
            (g, Some(p), vec![])
        }
        Family::Section6Construction => {
            let (g, p, template) = gen_section6_with_template(r, n)?;
            (g, Some(p), vec![format!("G[A_1] template: {template}")])
        }
        Family::BipartitePlusTwoFactor => (gen_bipartite_plus_two_factor(n)?, None, vec![]),
        Family::RandomRegular => {
            let d = spec.d.unwrap_or((r.max(1) - 1) * n + 1);
            let g = gen_random_regular(r * n, d, seed)?;
            let note = format!("{d}-regular, {} double-edge swaps attempted", 100 * g.edge_count());
            (g, None, vec![note])
        }
        Family::MatchingInParts => {
            let (g, p) = gen_matching_in_parts(r, n)?;
            (g, Some(p), vec![])
        }
        Family::Planted => {
            let s = spec.s.unwrap_or(r.saturating_sub(1));
            let pl = gen_planted(r, n, s, seed)?;
            params = Some(pl.params);
            (
                pl.graph,
                Some(pl.partition),
                vec![format!("planted after {} attempt(s)", pl.attempts)],
            )
        }
    };
    let mut provenance = vec![format!("tiling-lab gen {spec}")];
    provenance.append(&mut notes);
    Ok(Generated {
        spec: spec.clone(),
        graph,
        partition,
        params,
        provenance,
    })
}

fn check_order(v: usize) -> Result<(), ConstructionError> {
    if v > MAX_VERTICES {
        return Err(ConstructionError::Infeasible(format!(
            "{v} vertices exceed the limit of {MAX_VERTICES}"
        )));
    }
    Ok(())
}

fn audit(ok: bool, what: impl FnOnce() -> String) -> Result<(), ConstructionError> {
    if ok {
        Ok(())
    } else {
        Err(ConstructionError::Audit(what()))
    }
}

fn multipartite_builder(sizes: &[usize]) -> Result<(GraphBuilder, LabeledPartition), ConstructionError> {
    let total: usize = sizes.iter().sum();
    check_order(total)?;
    let p = LabeledPartition::consecutive(sizes)?;
    let mut b = GraphBuilder::new(total)?;
    for i in 0..sizes.len() {
        for j in i + 1..sizes.len() {
            b.add_join(p.class(i), p.class(j))?;
        }
    }
    Ok((b, p))
}

/// `K_{n,...,n}` with `r` parts and its canonical partition.
pub fn gen_balanced_multipartite(r: usize, n: usize) -> Result<(Graph, LabeledPartition), ConstructionError> {
    if r < 2 || n < 1 {
        return Err(ConstructionError::Infeasible(format!(
            "need r ≥ 2 and n ≥ 1, got r = {r}, n = {n}"
        )));
    }
    let (b, p) = multipartite_builder(&vec![n; r])?;
    let g = b.build();
    audit(g.is_regular((r - 1) * n), || format!("not {}-regular", (r - 1) * n))?;
    for c in p.classes() {
        audit(g.edges_within(c) == 0, || "part spans an edge".into())?;
    }
    Ok((g, p))
}

/// `K_{n,...,n}` plus a spanning star in each part, centred on the part's
/// first vertex.
pub fn gen_multipartite_plus_stars(r: usize, n: usize) -> Result<(Graph, LabeledPartition), ConstructionError> {
    if r < 2 || n < 2 {
        return Err(ConstructionError::Infeasible(format!(
            "a star needs n ≥ 2 (r = {r}, n = {n})"
        )));
    }
    let (mut b, p) = multipartite_builder(&vec![n; r])?;
    for c in p.classes() {
        let centre = c.first().expect("nonempty part");
        for v in c.iter().skip(1) {
            b.add_edge(centre, v)?;
        }
    }
    let g = b.build();
    let d = (r - 1) * n + 1;
    audit(g.min_degree() == d, || {
        format!("minimum degree {} != {d}", g.min_degree())
    })?;
    for c in p.classes() {
        let centre = c.first().unwrap();
        audit(g.degree(centre) == (r - 1) * n + n - 1, || {
            format!("centre {centre} has degree {}", g.degree(centre))
        })?;
    }
    Ok((g, p))
}

/// Lexicographically first connection set `S ⊆ {1, ..., m/2}` whose
/// circulant `C(m; ±S)` is `r`-regular and triangle-free.
fn triangle_free_circulant(m: usize, r: usize) -> Option<Vec<usize>> {
    fn degree_of(d: usize, m: usize) -> usize {
        if 2 * d == m {
            1
        } else {
            2
        }
    }
    fn closed(set: &[usize], m: usize) -> Vec<usize> {
        let mut out: Vec<usize> = set.iter().flat_map(|&d| [d, m - d]).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
    fn triangle_free(set: &[usize], m: usize) -> bool {
        let full = closed(set, m);
        full.iter()
            .all(|&a| full.iter().all(|&b| (a + b) % m == 0 || !full.contains(&((a + b) % m))))
    }
    fn rec(start: usize, m: usize, left: usize, cur: &mut Vec<usize>) -> bool {
        if left == 0 {
            return true;
        }
        for d in start..=m / 2 {
            let deg = degree_of(d, m);
            if deg > left {
                continue;
            }
            cur.push(d);
            if triangle_free(cur, m) && rec(d + 1, m, left - deg, cur) {
                return true;
            }
            cur.pop();
        }
        false
    }
    if m == 0 || r >= m {
        return None;
    }
    let mut cur = Vec::new();
    rec(1, m, r, &mut cur).then_some(cur)
}

/// The extremal construction: complete multipartite with parts of sizes
/// `n + r - 1, n - 1, ..., n - 1` and an `r`-regular triangle-free graph
/// inside the first part. The partition has `r` A-classes.
pub fn gen_section6(r: usize, n: usize) -> Result<(Graph, LabeledPartition), ConstructionError> {
    gen_section6_with_template(r, n).map(|(g, p, _)| (g, p))
}

fn gen_section6_with_template(r: usize, n: usize) -> Result<(Graph, LabeledPartition, String), ConstructionError> {
    if r < 2 || n < 2 {
        return Err(ConstructionError::Infeasible(format!(
            "need r ≥ 2 and n ≥ 2, got r = {r}, n = {n}"
        )));
    }
    let m = n + r - 1;
    if r * m % 2 == 1 {
        return Err(ConstructionError::Infeasible(format!(
            "a {r}-regular graph on {m} vertices has odd degree sum {}",
            r * m
        )));
    }
    if 2 * r > m {
        return Err(ConstructionError::Infeasible(format!(
            "a triangle-free {r}-regular graph needs at least {} vertices, A_1 has {m}",
            2 * r
        )));
    }
    let mut sizes = vec![n - 1; r];
    sizes[0] = m;
    let (mut b, p) = multipartite_builder(&sizes)?;
    let a1 = p.class(0).to_vec();
    let template = if m == 2 * r {
        for i in 0..r {
            for j in r..m {
                b.add_edge(a1[i], a1[j])?;
            }
        }
        format!("K_{{{r},{r}}}")
    } else {
        let set = triangle_free_circulant(m, r).ok_or_else(|| {
            ConstructionError::Infeasible(format!("no triangle-free {r}-regular circulant on {m} vertices"))
        })?;
        for i in 0..m {
            for &d in &set {
                b.add_edge(a1[i], a1[(i + d) % m])?;
            }
        }
        format!("circulant C({m}; {set:?})")
    };
    let g = b.build();
    let d = (r - 1) * n + 1;
    audit(g.is_regular(d), || format!("not {d}-regular"))?;
    for i in 1..r {
        audit(g.edges_within(p.class(i)) == 0, || format!("A_{} spans an edge", i + 1))?;
    }
    let a1s = *p.class(0);
    audit(a1s.iter().all(|v| g.degree_into(v, &a1s) == r), || {
        format!("G[A_1] is not {r}-regular")
    })?;
    audit(!g.has_triangle_within(&a1s), || "G[A_1] has a triangle".into())?;
    Ok((g, p, template))
}

/// `K_{n-1,n+1}` with a Hamilton cycle on the larger side. Vertices
/// `0..n-1` form the smaller side.
pub fn gen_bipartite_plus_two_factor(n: usize) -> Result<Graph, ConstructionError> {
    if n < 3 {
        return Err(ConstructionError::Infeasible(format!(
            "the cycle needs n + 1 ≥ 4 vertices, got n = {n}"
        )));
    }
    check_order(2 * n)?;
    let small: VertexSet = (0..n - 1).collect();
    let large: VertexSet = (n - 1..2 * n).collect();
    let mut b = GraphBuilder::new(2 * n)?;
    b.add_join(&small, &large)?;
    let l = large.to_vec();
    for i in 0..l.len() {
        b.add_edge(l[i], l[(i + 1) % l.len()])?;
    }
    let g = b.build();
    audit(g.is_regular(n + 1), || format!("not {}-regular", n + 1))?;
    Ok(g)
}

/// A `d`-regular graph on `v` vertices: a circulant followed by `100·|E|`
/// seeded double-edge swaps. Not a uniform sample.
pub fn gen_random_regular(v: usize, d: usize, seed: u64) -> Result<Graph, ConstructionError> {
    if d >= v.max(1) {
        return Err(ConstructionError::Infeasible(format!(
            "degree {d} needs more than {v} vertices"
        )));
    }
    if d * v % 2 == 1 {
        return Err(ConstructionError::Infeasible(format!("d·v = {} is odd", d * v)));
    }
    check_order(v)?;
    let mut b = GraphBuilder::new(v)?;
    for i in 0..v {
        for k in 1..=d / 2 {
            b.add_edge(i, (i + k) % v)?;
        }
        if d % 2 == 1 {
            b.add_edge(i, (i + v / 2) % v)?;
        }
    }
    let mut edges: Vec<(usize, usize)> = b.clone().build().edges().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if edges.len() >= 2 {
        for _ in 0..100 * edges.len() {
            let i = rng.random_range(0..edges.len());
            let j = rng.random_range(0..edges.len());
            if i == j {
                continue;
            }
            let (a, bb) = edges[i];
            let (mut c, mut e) = edges[j];
            if rng.random_bool(0.5) {
                std::mem::swap(&mut c, &mut e);
            }
            // (a,bb),(c,e) -> (a,c),(bb,e)
            if a == c || a == e || bb == c || bb == e || b.has_edge(a, c) || b.has_edge(bb, e) {
                continue;
            }
            b.remove_edge(a, bb);
            b.remove_edge(c, e);
            b.add_edge(a, c)?;
            b.add_edge(bb, e)?;
            edges[i] = (a.min(c), a.max(c));
            edges[j] = (bb.min(e), bb.max(e));
        }
    }
    let g = b.build();
    audit(g.is_regular(d), || format!("not {d}-regular"))?;
    audit(g.is_well_formed(), || "not a simple graph".into())?;
    Ok(g)
}

/// `K_{n,...,n}` plus a perfect matching inside every part.
pub fn gen_matching_in_parts(r: usize, n: usize) -> Result<(Graph, LabeledPartition), ConstructionError> {
    if r < 2 || n < 2 || n % 2 == 1 {
        return Err(ConstructionError::Infeasible(format!(
            "a perfect matching in each part needs even n ≥ 2 (r = {r}, n = {n})"
        )));
    }
    let (mut b, p) = multipartite_builder(&vec![n; r])?;
    for c in p.classes() {
        let vs = c.to_vec();
        for pair in vs.chunks(2) {
            b.add_edge(pair[0], pair[1])?;
        }
    }
    let g = b.build();
    audit(g.is_regular((r - 1) * n + 1), || {
        format!("not {}-regular", (r - 1) * n + 1)
    })?;
    Ok((g, p))
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Σ_{k=0}^{n} C(n,k)^r`, the number of vertex sets of `K_{n,...,n}`
/// (empty set included) whose induced subgraph has a `K_r`-factor.
pub fn predicted_count_balanced(r: usize, n: usize) -> BigUint {
    (0..=n as u64).map(|k| binomial(n as u64, k).pow(r as u32)).sum()
}

// ---------------------------------------------------------------------------
// Planted good partitions

#[derive(Clone, Debug, PartialEq)]
pub struct Planted {
    pub graph: Graph,
    pub partition: LabeledPartition,
    pub params: PartitionParams,
    pub attempts: u64,
}

/// Parameters the planted instances are built against.
pub fn planted_params(r: usize, n: usize) -> Result<PartitionParams, ConstructionError> {
    Ok(PartitionParams::new(0.15, 0.25, 0.75, 0.05, n, r)?)
}

const PLANTED_ATTEMPTS: u64 = 256;

/// A random graph on `rn` vertices with a partition into `s` A-classes and
/// (when `s < r`) a class `B` that passes the good-partition check.
///
/// A-classes carry a near-perfect matching and sometimes a star making one
/// vertex bad; class sizes deviate from `n` by at most one where the
/// conditions allow; `B` is dense and sometimes holds one exceptional vertex;
/// cross edges are present with probability 0.9. Attempts are drawn from
/// successive streams of the seed until the check passes.
pub fn gen_planted(r: usize, n: usize, s: usize, seed: u64) -> Result<Planted, ConstructionError> {
    if r < 2 || n < 2 || s == 0 || s > r {
        return Err(ConstructionError::Infeasible(format!(
            "need r ≥ 2, n ≥ 2, 1 ≤ s ≤ r (r = {r}, n = {n}, s = {s})"
        )));
    }
    check_order(r * n)?;
    let params = planted_params(r, n)?;
    let budget = SearchBudget::default();
    for attempt in 0..PLANTED_ATTEMPTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let (g, p) = planted_attempt(r, n, s, &params, &mut rng)?;
        let rep = verify_good_partition(&g, &p, &params, &budget)?;
        if rep.is_good() {
            return Ok(Planted {
                graph: g,
                partition: p,
                params,
                attempts: attempt + 1,
            });
        }
    }
    Err(ConstructionError::Infeasible(format!(
        "no planted good partition for r = {r}, n = {n}, s = {s} in {PLANTED_ATTEMPTS} attempts"
    )))
}

fn planted_attempt(
    r: usize,
    n: usize,
    s: usize,
    params: &PartitionParams,
    rng: &mut ChaCha8Rng,
) -> Result<(Graph, LabeledPartition), ConstructionError> {
    let nf = n as f64;
    let slack = params.alpha * nf;
    let thr = params.good_threshold();
    let can_grow = slack >= 1.0 && n.div_ceil(2) > r;
    let mut sizes = vec![n; s];
    for sz in sizes.iter_mut() {
        match rng.random_range(0..3) {
            0 => *sz = n - 1,
            1 if can_grow => *sz = n + 1,
            _ => {}
        }
    }
    let a_total: usize = sizes.iter().sum();
    let b_size = (r * n) as i64 - a_total as i64;
    let target = ((r - s) * n) as f64;
    let b_ok = if s == r {
        b_size == 0
    } else {
        b_size >= 1 && (b_size as f64 - target).abs() <= r as f64 * slack + 1e-9
    };
    if !b_ok {
        sizes = vec![n; s];
    }
    let b_size = r * n - sizes.iter().sum::<usize>();
    let mut all = sizes.clone();
    if s < r {
        all.push(b_size);
    }
    let p0 = LabeledPartition::consecutive(&all)?;
    let a: Vec<VertexSet> = (0..s).map(|i| *p0.class(i)).collect();
    let b = (s < r).then(|| *p0.class(s));
    let p = LabeledPartition::new(r * n, a, b)?;

    let mut gb = GraphBuilder::new(r * n)?;
    let k = p.num_classes();
    for i in 0..k {
        for j in i + 1..k {
            for x in p.class(i).iter() {
                for y in p.class(j).iter() {
                    if rng.random_bool(0.9) {
                        gb.add_edge(x, y)?;
                    }
                }
            }
        }
    }
    for i in 0..s {
        let vs = p.a(i).to_vec();
        for pair in vs.chunks(2).filter(|c| c.len() == 2) {
            gb.add_edge(pair[0], pair[1])?;
        }
        let star = thr.floor() as usize + 1;
        if vs.len() <= n && vs.len() > star && rng.random_bool(0.5) {
            let centre = vs[rng.random_range(0..vs.len())];
            for &v in vs.iter().filter(|&&v| v != centre).take(star) {
                gb.add_edge(centre, v)?;
            }
        }
    }
    if let Some(bs) = b {
        let bv = bs.to_vec();
        for (i, &x) in bv.iter().enumerate() {
            for &y in &bv[i + 1..] {
                if rng.random_bool(0.85) {
                    gb.add_edge(x, y)?;
                }
            }
        }
        let a1 = *p.a(0);
        let keep = (params.beta * nf).ceil() as usize;
        if r as f64 * slack >= 1.0 && keep as f64 <= a1.len() as f64 - thr && rng.random_bool(0.5) {
            let w = bv[rng.random_range(0..bv.len())];
            for (c, x) in a1.iter().enumerate() {
                if c < keep {
                    gb.add_edge(w, x)?;
                } else {
                    gb.remove_edge(w, x);
                }
            }
        }
    }
    Ok((gb.build(), p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn balanced_small_cases() {
        let (g, _) = gen_balanced_multipartite(2, 2).unwrap();
        let c4 = Graph::from_edges(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(g, c4);
        let (g, _) = gen_balanced_multipartite(3, 3).unwrap();
        assert!(g.is_regular(6));
        assert_eq!(g.n(), 9);
        let (g, _) = gen_balanced_multipartite(3, 2).unwrap();
        assert!(g.is_regular(4));
        assert_eq!(g.edge_count(), 12);
    }

    #[test]
    fn stars_degrees() {
        let (g, _) = gen_multipartite_plus_stars(2, 3).unwrap();
        assert_eq!(g.min_degree(), 4);
        let (g, _) = gen_multipartite_plus_stars(3, 2).unwrap();
        assert!(g.is_regular(5));
        assert!(gen_multipartite_plus_stars(3, 1).is_err());
    }

    #[test]
    fn section6_cases() {
        let (g, p) = gen_section6(3, 4).unwrap();
        assert_eq!(g.n(), 12);
        assert!(g.is_regular(9));
        assert_eq!(p.a(0).len(), 6);
        assert_eq!(p.s(), 3);
        let err = gen_section6(3, 5).unwrap_err();
        assert!(err.to_string().contains("odd"), "{err}");
        // Circulant branch: 2-regular triangle-free on 5 vertices is C_5.
        let (g, p) = gen_section6(2, 4).unwrap();
        assert!(g.is_regular(5));
        assert!(!g.has_triangle_within(p.a(0)));
        let (g, _) = gen_section6(4, 5).unwrap();
        assert!(g.is_regular(16));
    }

    #[test]
    fn circulant_search_respects_triangle_freeness() {
        for m in 3..=16 {
            for r in 1..m {
                if let Some(set) = triangle_free_circulant(m, r) {
                    let mut b = GraphBuilder::new(m).unwrap();
                    for i in 0..m {
                        for &d in &set {
                            b.add_edge(i, (i + d) % m).unwrap();
                        }
                    }
                    let g = b.build();
                    assert!(g.is_regular(r), "m={m} r={r} {set:?}");
                    assert!(!g.has_triangle_within(&g.vertices()));
                }
            }
        }
    }

    #[test]
    fn bip2factor_cases() {
        assert!(gen_bipartite_plus_two_factor(3).unwrap().is_regular(4));
        let g = gen_bipartite_plus_two_factor(4).unwrap();
        assert!(g.is_regular(5));
        assert_eq!(g.n(), 8);
        assert!(gen_bipartite_plus_two_factor(2).is_err());
    }

    #[test]
    fn random_regular_cases() {
        assert_eq!(gen_random_regular(8, 7, 3).unwrap(), Graph::complete(8).unwrap());
        let g = gen_random_regular(12, 9, 1).unwrap();
        assert!(g.is_regular(9));
        assert_eq!(g, gen_random_regular(12, 9, 1).unwrap());
        assert!(gen_random_regular(9, 7, 0).is_err());
        let a = gen_random_regular(20, 3, 1).unwrap();
        let b = gen_random_regular(20, 3, 2).unwrap();
        assert!(a.is_regular(3) && b.is_regular(3));
        assert_ne!(a, b);
    }

    #[test]
    fn matching_in_parts_is_regular() {
        let (g, _) = gen_matching_in_parts(3, 4).unwrap();
        assert!(g.is_regular(9));
        assert!(gen_matching_in_parts(3, 3).is_err());
    }

    #[test]
    fn predicted_counts() {
        assert_eq!(predicted_count_balanced(3, 3), BigUint::from(56u32));
        assert_eq!(predicted_count_balanced(4, 0), BigUint::one());
        for n in 0..12u64 {
            assert_eq!(predicted_count_balanced(2, n as usize), binomial(2 * n, n));
        }
    }

    #[test]
    fn family_spec_round_trip() {
        let s: FamilySpec = "balanced:r=3,n=3".parse().unwrap();
        assert_eq!(s, FamilySpec::new(Family::BalancedCompleteMultipartite, 3, 3));
        assert_eq!(s.to_string(), "balanced:r=3,n=3");
        let j = FamilySpec::parse(r#"{"family":"random-regular","r":3,"n":4,"seed":7}"#).unwrap();
        assert_eq!(j.seed, Some(7));
        assert_eq!(FamilySpec::parse(&j.to_string()).unwrap(), j);
        assert_eq!(FamilySpec::parse("bip2factor:n=4").unwrap().r, 2);
        assert!(FamilySpec::parse("nope:r=2").is_err());
        assert!(FamilySpec::parse("balanced:r=x,n=2").is_err());
        assert!(FamilySpec::parse("balanced:n=2").is_err());
    }

    #[test]
    fn generate_carries_provenance() {
        let g = generate(&FamilySpec::parse("section6:r=3,n=4").unwrap()).unwrap();
        assert!(g.provenance[0].starts_with("tiling-lab gen section6"));
        assert!(g.provenance[1].contains("K_{3,3}"));
    }

    #[test]
    fn planted_partitions_verify() {
        let budget = SearchBudget::default();
        for (r, n, s) in [(3, 4, 2), (3, 4, 1), (3, 4, 3), (2, 5, 1), (3, 7, 2)] {
            let pl = gen_planted(r, n, s, 11).unwrap();
            let rep = verify_good_partition(&pl.graph, &pl.partition, &pl.params, &budget).unwrap();
            assert!(rep.is_good(), "r={r} n={n} s={s}: {:?}", rep.failed());
            assert_eq!(pl.partition.s(), s);
            assert_eq!(pl, gen_planted(r, n, s, 11).unwrap());
        }
    }
}

//! Brute-force reference implementations used to check the library.
#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tiling_lab::Graph;

/// Uniform random graph on `v` vertices with edge probability `density`.
pub fn random_graph(v: usize, density: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for a in 0..v {
        for b in a + 1..v {
            if rng.random_bool(density) {
                edges.push((a, b));
            }
        }
    }
    Graph::from_edges(v, &edges).unwrap()
}

fn is_clique(g: &Graph, vs: &[usize]) -> bool {
    vs.iter()
        .enumerate()
        .all(|(i, &a)| vs[i + 1..].iter().all(|&b| g.has_edge(a, b)))
}

/// Tries every way of grouping `vertices` into r-sets: the smallest
/// remaining vertex is placed with each (r-1)-subset of the rest.
pub fn naive_has_factor(g: &Graph, vertices: &[usize], r: usize) -> bool {
    if vertices.is_empty() {
        return true;
    }
    if !vertices.len().is_multiple_of(r) {
        return false;
    }
    let head = vertices[0];
    let rest = &vertices[1..];
    let mut pick = Vec::with_capacity(r);
    pick.push(head);
    choose(g, rest, r, 0, &mut pick)
}

fn choose(g: &Graph, rest: &[usize], r: usize, from: usize, pick: &mut Vec<usize>) -> bool {
    if pick.len() == r {
        if !is_clique(g, pick) {
            return false;
        }
        let left: Vec<usize> = rest.iter().copied().filter(|v| !pick.contains(v)).collect();
        return naive_has_factor(g, &left, r);
    }
    for i in from..rest.len() {
        pick.push(rest[i]);
        let ok = choose(g, rest, r, i + 1, pick);
        pick.pop();
        if ok {
            return true;
        }
    }
    false
}

/// Checks that `cliques` are disjoint r-cliques of `g` covering exactly
/// `vertices`.
pub fn is_factor_of(g: &Graph, vertices: &[usize], cliques: &[Vec<usize>], r: usize) -> bool {
    let mut seen = vec![false; g.n()];
    for c in cliques {
        if c.len() != r || !is_clique(g, c) {
            return false;
        }
        for &v in c {
            if v >= g.n() || seen[v] {
                return false;
            }
            seen[v] = true;
        }
    }
    let covered = seen.iter().filter(|&&x| x).count();
    covered == vertices.len() && vertices.iter().all(|&v| seen[v])
}

fn binom(n: u64, k: u64) -> BigUint {
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `Σ_{k=1}^{n} C(n,k)^r` by direct summation.
pub fn balanced_count_nonempty(r: usize, n: usize) -> BigUint {
    (1..=n as u64).map(|k| binom(n as u64, k).pow(r as u32)).sum()
}

/// Exact `P(lo ≤ X ≤ hi)` for `X ~ Bin(n, num/den)` computed in integers and
/// rounded once.
pub fn exact_binomial_interval(n: u64, num: u64, den: u64, lo: u64, hi: u64) -> f64 {
    let q = den - num;
    let mut top = BigUint::zero();
    let mut c = BigUint::one();
    for k in 0..=hi {
        if k > 0 {
            c = c * (n - k + 1) / k;
        }
        if k >= lo {
            top += &c * BigUint::from(num).pow(k as u32) * BigUint::from(q).pow((n - k) as u32);
        }
    }
    let bottom = BigUint::from(den).pow(n as u32);
    ratio_to_f64(&top, &bottom)
}

fn ratio_to_f64(top: &BigUint, bottom: &BigUint) -> f64 {
    // Scale so the integer quotient carries 64 significant bits.
    let shift = 64i64 + bottom.bits() as i64 - top.bits() as i64;
    let q = if shift >= 0 {
        (top << shift as usize) / bottom
    } else {
        (top >> (-shift) as usize) / bottom
    };
    q.to_f64().unwrap() * 2f64.powi(-shift as i32)
}

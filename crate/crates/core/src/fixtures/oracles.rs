//! Brute-force checkers for graph classes and exhaustive graph censuses.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::hypergraph::{Edge, GraphError, Hypergraph, Label, Symbol};

/// The only label of binary graph languages, `∗` of rank 2.
pub fn star() -> Symbol {
    Symbol::new("*", 2)
}

fn binary_edges<L>(g: &Hypergraph<L>) -> Result<Vec<(usize, usize)>, GraphError> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(i, e)| if e.att.len() == 2 { Ok((e.att[0], e.att[1])) } else { Err(GraphError::NotBinary(i)) })
        .collect()
}

/// Some split of the nodes into `V1`, `V2` has every edge going from `V1`
/// to `V2`, tried over all `2^n` colorings.
pub fn is_bipartite<L>(g: &Hypergraph<L>) -> Result<bool, GraphError> {
    let edges = binary_edges(g)?;
    let n = g.node_count();
    assert!(n < 31, "exhaustive colorings need fewer than 31 nodes");
    Ok((0u32..1 << n).any(|side| edges.iter().all(|&(u, v)| side >> u & 1 == 0 && side >> v & 1 == 1)))
}

/// Some `k` is the indegree and the outdegree of every node.
pub fn is_regular<L>(g: &Hypergraph<L>) -> Result<bool, GraphError> {
    let edges = binary_edges(g)?;
    let mut indeg = vec![0usize; g.node_count()];
    let mut outdeg = vec![0usize; g.node_count()];
    for (u, v) in edges {
        outdeg[u] += 1;
        indeg[v] += 1;
    }
    Ok(match indeg.first() {
        None => true,
        Some(&k) => indeg.iter().chain(&outdeg).all(|&d| d == k),
    })
}

/// Nonempty, no external nodes, no isolated nodes, every edge binary.
pub fn in_l1<L>(g: &Hypergraph<L>) -> bool {
    g.node_count() > 0
        && g.ext().is_empty()
        && g.edges().iter().all(|e| e.att.len() == 2)
        && g.degrees().iter().all(|&d| d > 0)
}

/// `g` with one more node that no edge touches.
pub fn with_isolated_node<L: Clone>(g: &Hypergraph<L>) -> Hypergraph<L> {
    let mut h = g.clone();
    h.add_node();
    h
}

/// Every `∗`-labeled binary graph with exactly `edges` edges, no external
/// and no isolated nodes, one per isomorphism class.
pub fn binary_census(edges: usize) -> Vec<Hypergraph<Symbol>> {
    let mut out: BTreeMap<Vec<u8>, Hypergraph<Symbol>> = BTreeMap::new();
    for n in 2..=2 * edges {
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect();
        // Non-decreasing index sequences are the multisets of edges.
        let mut idx = vec![0usize; edges];
        loop {
            let mut covered = vec![false; n];
            for &i in &idx {
                covered[pairs[i].0] = true;
                covered[pairs[i].1] = true;
            }
            if covered.iter().all(|&c| c) {
                let es = idx.iter().map(|&i| Edge { label: star(), att: vec![pairs[i].0, pairs[i].1] }).collect();
                let g = Hypergraph::from_parts(n, es, vec![]);
                out.entry(g.canonical_code()).or_insert_with(|| g.canonical_graph());
            }
            let Some(k) = (0..edges).rev().find(|&k| idx[k] + 1 < pairs.len()) else { break };
            idx[k] += 1;
            for j in k + 1..edges {
                idx[j] = idx[k];
            }
        }
    }
    out.into_values().collect()
}

/// A random graph in `L1` with between 1 and `max_edges` edges: nodes are
/// first covered pairwise, the remaining edges are arbitrary.
pub fn random_l1_graph(rng: &mut impl Rng, max_edges: usize) -> Hypergraph<Symbol> {
    let m = rng.gen_range(1..=max_edges.max(1));
    let n = rng.gen_range(2..=2 * m);
    let mut nodes: Vec<usize> = (0..n).collect();
    nodes.shuffle(rng);
    let mut pairs: Vec<(usize, usize)> = nodes.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect();
    if n % 2 == 1 {
        pairs.push((nodes[n - 1], nodes[rng.gen_range(0..n - 1)]));
    }
    while pairs.len() < m {
        let u = rng.gen_range(0..n);
        let v = (u + rng.gen_range(1..n)) % n;
        pairs.push((u, v));
    }
    let edges = pairs
        .into_iter()
        .map(|(u, v)| Edge { label: star(), att: if rng.gen_bool(0.5) { vec![u, v] } else { vec![v, u] } })
        .collect();
    Hypergraph::from_parts(n, edges, vec![])
}

/// A random hypergraph over `labels` with up to `max_nodes` nodes (at least
/// one) and up to `max_edges` edges, some of its nodes external.
pub fn random_hypergraph(rng: &mut impl Rng, labels: &[Symbol], max_nodes: usize, max_edges: usize) -> Hypergraph<Symbol> {
    let n = rng.gen_range(1..=max_nodes.max(1));
    let usable: Vec<&Symbol> = labels.iter().filter(|l| l.rank() <= n).collect();
    let mut g = Hypergraph::discrete(n, vec![]);
    if !usable.is_empty() {
        for _ in 0..rng.gen_range(0..=max_edges) {
            let label = (*usable.choose(rng).unwrap()).clone();
            let mut att: Vec<usize> = (0..n).collect();
            att.shuffle(rng);
            att.truncate(label.rank());
            g.add_edge(label, att);
        }
    }
    let mut ext: Vec<usize> = (0..n).collect();
    ext.shuffle(rng);
    ext.truncate(rng.gen_range(0..=n.min(3)));
    g.set_ext(ext);
    g
}

/// `g` with nodes renamed by `node_perm` (old to new) and edges listed in
/// the order `edge_order`.
pub fn permuted<L: Clone>(g: &Hypergraph<L>, node_perm: &[usize], edge_order: &[usize]) -> Hypergraph<L> {
    let edges = edge_order
        .iter()
        .map(|&e| Edge { label: g.label(e).clone(), att: g.att(e).iter().map(|&v| node_perm[v]).collect() })
        .collect();
    Hypergraph::from_parts(g.node_count(), edges, g.ext().iter().map(|&v| node_perm[v]).collect())
}

/// Isomorphism by trying every node bijection and matching edge multisets.
pub fn brute_force_isomorphic<L: Label>(g: &Hypergraph<L>, h: &Hypergraph<L>) -> bool {
    if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() || g.rank() != h.rank() {
        return false;
    }
    let row = |l: &L, att: Vec<usize>| (l.key().into_owned(), att);
    let mut target: Vec<(Vec<u8>, Vec<usize>)> = h.edges().iter().map(|e| row(&e.label, e.att.clone())).collect();
    target.sort();
    let mut perm: Vec<usize> = (0..g.node_count()).collect();
    loop {
        if g.ext().iter().map(|&v| perm[v]).eq(h.ext().iter().copied()) {
            let mut rows: Vec<(Vec<u8>, Vec<usize>)> =
                g.edges().iter().map(|e| row(&e.label, e.att.iter().map(|&v| perm[v]).collect())).collect();
            rows.sort();
            if rows == target {
                return true;
            }
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

//! Canonical labeling of hypergraphs.
//!
//! Each connected component is refined by colour refinement on nodes
//! (edge signature = label and attached colours, node signature = own colour
//! and the multiset of `(edge colour, position)`), then made discrete by
//! individualization-refinement with automorphism pruning. Components are
//! sorted by their local codes and concatenated. Edges are never
//! individualized: once the nodes are ordered, edges are sorted by
//! `(label, attachment)`.

use std::borrow::Cow;
use std::collections::BTreeMap;

use super::{push_bytes, push_u32, EdgeId, Hypergraph, Label, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    code: Vec<u8>,
    node_order: Vec<NodeId>,
    edge_order: Vec<EdgeId>,
}

impl CanonicalForm {
    pub fn code(&self) -> &[u8] {
        &self.code
    }

    pub fn into_code(self) -> Vec<u8> {
        self.code
    }

    /// `node_order()[i]` is the node placed at canonical position `i`.
    pub fn node_order(&self) -> &[NodeId] {
        &self.node_order
    }

    pub fn edge_order(&self) -> &[EdgeId] {
        &self.edge_order
    }

    pub(crate) fn apply<L: Clone>(&self, g: &Hypergraph<L>) -> Hypergraph<L> {
        let mut pos = vec![0; g.node_count()];
        for (i, &v) in self.node_order.iter().enumerate() {
            pos[v] = i;
        }
        let edges = self
            .edge_order
            .iter()
            .map(|&e| super::Edge {
                label: g.label(e).clone(),
                att: g.att(e).iter().map(|&v| pos[v]).collect(),
            })
            .collect();
        let ext = g.ext().iter().map(|&v| pos[v]).collect();
        Hypergraph::from_parts(g.node_count(), edges, ext)
    }
}

/// An isomorphism `G → H`: `node_map[v]` is the image of node `v`,
/// `edge_map[e]` the image of edge `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoWitness {
    pub node_map: Vec<NodeId>,
    pub edge_map: Vec<EdgeId>,
}

impl IsoWitness {
    /// Checks that the maps are bijections preserving labels (by key),
    /// attachment sequences and the external sequence.
    pub fn verify<L: Label, K: Label>(&self, g: &Hypergraph<L>, h: &Hypergraph<K>) -> bool {
        if g.node_count() != h.node_count()
            || g.edge_count() != h.edge_count()
            || self.node_map.len() != g.node_count()
            || self.edge_map.len() != g.edge_count()
            || g.ext().len() != h.ext().len()
        {
            return false;
        }
        if !is_permutation(&self.node_map) || !is_permutation(&self.edge_map) {
            return false;
        }
        let ext_ok = g.ext().iter().zip(h.ext()).all(|(&a, &b)| self.node_map[a] == b);
        ext_ok
            && (0..g.edge_count()).all(|e| {
                let f = self.edge_map[e];
                g.label(e).key() == h.label(f).key()
                    && g.att(e).len() == h.att(f).len()
                    && g.att(e).iter().zip(h.att(f)).all(|(&a, &b)| self.node_map[a] == b)
            })
    }
}

fn is_permutation(map: &[usize]) -> bool {
    let mut seen = vec![false; map.len()];
    for &x in map {
        if x >= map.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub(super) fn isomorphism<L: Label, K: Label>(g: &Hypergraph<L>, h: &Hypergraph<K>) -> Option<IsoWitness> {
    if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() || g.rank() != h.rank() {
        return None;
    }
    let cg = canonical_form(g);
    let ch = canonical_form(h);
    if cg.code != ch.code {
        return None;
    }
    let mut node_map = vec![0; g.node_count()];
    for (&a, &b) in cg.node_order.iter().zip(&ch.node_order) {
        node_map[a] = b;
    }
    let mut edge_map = vec![0; g.edge_count()];
    for (&a, &b) in cg.edge_order.iter().zip(&ch.edge_order) {
        edge_map[a] = b;
    }
    let w = IsoWitness { node_map, edge_map };
    debug_assert!(w.verify(g, h));
    Some(w)
}

pub(super) fn canonical_form<L: Label>(g: &Hypergraph<L>) -> CanonicalForm {
    let keys: Vec<Cow<'_, [u8]>> = g.edges().iter().map(|e| e.label.key()).collect();
    let mut distinct: BTreeMap<&[u8], u32> = BTreeMap::new();
    for k in &keys {
        distinct.insert(k.as_ref(), 0);
    }
    for (i, slot) in distinct.values_mut().enumerate() {
        *slot = i as u32;
    }
    let label_of: Vec<u32> = keys.iter().map(|k| distinct[k.as_ref()]).collect();

    let n = g.node_count();
    let mut ext_pos = vec![0u32; n];
    for (i, &v) in g.ext().iter().enumerate() {
        ext_pos[v] = i as u32 + 1;
    }

    // Connected components over nodes.
    let mut uf: Vec<usize> = (0..n).collect();
    for edge in g.edges() {
        for w in edge.att.windows(2) {
            let (a, b) = (find(&mut uf, w[0]), find(&mut uf, w[1]));
            if a != b {
                uf[a.max(b)] = a.min(b);
            }
        }
    }
    let mut comp_index = vec![usize::MAX; n];
    let mut comps: Vec<Component> = Vec::new();
    for v in 0..n {
        let r = find(&mut uf, v);
        if comp_index[r] == usize::MAX {
            comp_index[r] = comps.len();
            comps.push(Component::default());
        }
        let c = comp_index[r];
        comp_index[v] = c;
        comps[c].local.push(v);
    }
    let mut local_id = vec![0usize; n];
    for c in &comps {
        for (i, &v) in c.local.iter().enumerate() {
            local_id[v] = i;
        }
    }
    for (e, edge) in g.edges().iter().enumerate() {
        if let Some(&first) = edge.att.first() {
            let c = comp_index[first];
            comps[c].edges.push((label_of[e], edge.att.iter().map(|&v| local_id[v]).collect()));
        }
    }

    let mut coded: Vec<(Vec<u32>, Vec<NodeId>)> = comps
        .iter()
        .map(|c| {
            let ext: Vec<u32> = c.local.iter().map(|&v| ext_pos[v]).collect();
            let (code, order) = c.canonize(&ext);
            (code, order.into_iter().map(|i| c.local[i]).collect())
        })
        .collect();
    coded.sort_by(|a, b| a.0.cmp(&b.0));
    let node_order: Vec<NodeId> = coded.into_iter().flat_map(|(_, order)| order).collect();

    let mut pos = vec![0u32; n];
    for (i, &v) in node_order.iter().enumerate() {
        pos[v] = i as u32;
    }
    let mut edge_rows: Vec<(Vec<u32>, EdgeId)> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            let mut row = Vec::with_capacity(edge.att.len() + 2);
            row.push(label_of[e]);
            row.push(edge.att.len() as u32);
            row.extend(edge.att.iter().map(|&v| pos[v]));
            (row, e)
        })
        .collect();
    edge_rows.sort();

    let mut code = Vec::new();
    push_u32(&mut code, distinct.len() as u32);
    for k in distinct.keys() {
        push_bytes(&mut code, k);
    }
    push_u32(&mut code, n as u32);
    push_u32(&mut code, g.ext().len() as u32);
    for &v in g.ext() {
        push_u32(&mut code, pos[v]);
    }
    push_u32(&mut code, edge_rows.len() as u32);
    for (row, _) in &edge_rows {
        for &x in row {
            push_u32(&mut code, x);
        }
    }
    CanonicalForm { code, node_order, edge_order: edge_rows.into_iter().map(|(_, e)| e).collect() }
}

fn find(uf: &mut [usize], mut v: usize) -> usize {
    while uf[v] != v {
        uf[v] = uf[uf[v]];
        v = uf[v];
    }
    v
}

#[derive(Default)]
struct Component {
    local: Vec<NodeId>,
    edges: Vec<(u32, Vec<usize>)>,
}

struct Search<'a> {
    comp: &'a Component,
    ext: &'a [u32],
    inc: Vec<Vec<(usize, u32)>>,
    best: Option<(Vec<u32>, Vec<usize>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl Component {
    fn canonize(&self, ext: &[u32]) -> (Vec<u32>, Vec<usize>) {
        let k = self.local.len();
        if k == 1 {
            let mut s = Search { comp: self, ext, inc: Vec::new(), best: None, automorphisms: Vec::new() };
            return (s.leaf_code(&[0]), vec![0]);
        }
        let mut inc = vec![Vec::new(); k];
        for (e, (_, att)) in self.edges.iter().enumerate() {
            for (i, &v) in att.iter().enumerate() {
                inc[v].push((e, i as u32));
            }
        }
        let mut s = Search { comp: self, ext, inc, best: None, automorphisms: Vec::new() };
        let initial = rank_by(ext.iter().map(|&x| vec![x]).collect());
        s.search(initial, &mut Vec::new());
        s.best.expect("search visits at least one leaf")
    }
}

impl Search<'_> {
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_classes(&colors);
        loop {
            let edge_sigs: Vec<Vec<u32>> = self
                .comp
                .edges
                .iter()
                .map(|(label, att)| {
                    let mut s = Vec::with_capacity(att.len() + 1);
                    s.push(*label);
                    s.extend(att.iter().map(|&v| colors[v]));
                    s
                })
                .collect();
            let edge_colors = rank_by(edge_sigs);
            let node_sigs: Vec<Vec<u32>> = (0..colors.len())
                .map(|v| {
                    let mut around: Vec<(u32, u32)> =
                        self.inc[v].iter().map(|&(e, p)| (edge_colors[e], p)).collect();
                    around.sort_unstable();
                    let mut s = Vec::with_capacity(2 * around.len() + 1);
                    s.push(colors[v]);
                    for (c, p) in around {
                        s.push(c);
                        s.push(p);
                    }
                    s
                })
                .collect();
            let next = rank_by(node_sigs);
            let next_classes = count_classes(&next);
            colors = next;
            if next_classes == classes {
                return colors;
            }
            classes = next_classes;
        }
    }

    fn search(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let colors = self.refine(colors);
        let k = colors.len();
        // Smallest colour shared by more than one node.
        let mut size = vec![0usize; k];
        for &c in &colors {
            size[c as usize] += 1;
        }
        let Some(target) = (0..k).find(|&c| size[c] > 1) else {
            let mut order = vec![0; k];
            for (v, &c) in colors.iter().enumerate() {
                order[c as usize] = v;
            }
            self.leaf(order);
            return;
        };
        let cell: Vec<usize> = (0..k).filter(|&v| colors[v] as usize == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit(prefix, v, &explored) {
                continue;
            }
            let child: Vec<u32> =
                colors.iter().enumerate().map(|(u, &c)| 2 * c + u32::from(u != v)).collect();
            prefix.push(v);
            self.search(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Whether some stored automorphism fixing `prefix` pointwise links `v`
    /// to an explored node.
    fn same_orbit(&self, prefix: &[usize], v: usize, explored: &[usize]) -> bool {
        let k = self.comp.local.len();
        let mut uf: Vec<usize> = (0..k).collect();
        let mut any = false;
        for aut in &self.automorphisms {
            if prefix.iter().all(|&p| aut[p] == p) {
                any = true;
                for (a, &b) in aut.iter().enumerate() {
                    let (x, y) = (find(&mut uf, a), find(&mut uf, b));
                    if x != y {
                        uf[x.max(y)] = x.min(y);
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rv = find(&mut uf, v);
        explored.iter().any(|&u| find(&mut uf, u) == rv)
    }

    fn leaf(&mut self, order: Vec<usize>) {
        let code = self.leaf_code(&order);
        match &self.best {
            None => self.best = Some((code, order)),
            Some((best, best_order)) => match code.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((code, order)),
                std::cmp::Ordering::Equal => {
                    let mut aut = vec![0; order.len()];
                    for (i, &v) in order.iter().enumerate() {
                        aut[v] = best_order[i];
                    }
                    if aut.iter().enumerate().any(|(a, &b)| a != b) {
                        self.automorphisms.push(aut);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }

    fn leaf_code(&mut self, order: &[usize]) -> Vec<u32> {
        let mut pos = vec![0u32; order.len()];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i as u32;
        }
        let mut code = Vec::with_capacity(2 + order.len() + 4 * self.comp.edges.len());
        code.push(order.len() as u32);
        code.extend(order.iter().map(|&v| self.ext[v]));
        let mut rows: Vec<Vec<u32>> = self
            .comp
            .edges
            .iter()
            .map(|(label, att)| {
                let mut r = Vec::with_capacity(att.len() + 2);
                r.push(*label);
                r.push(att.len() as u32);
                r.extend(att.iter().map(|&v| pos[v]));
                r
            })
            .collect();
        rows.sort_unstable();
        code.push(rows.len() as u32);
        for r in rows {
            code.extend(r);
        }
        code
    }
}

/// Dense ranks of `sigs` in sorted order.
fn rank_by(sigs: Vec<Vec<u32>>) -> Vec<u32> {
    let mut idx: Vec<usize> = (0..sigs.len()).collect();
    idx.sort_by(|&a, &b| sigs[a].cmp(&sigs[b]));
    let mut out = vec![0u32; sigs.len()];
    let mut r = 0u32;
    for w in 0..idx.len() {
        if w > 0 && sigs[idx[w]] != sigs[idx[w - 1]] {
            r += 1;
        }
        out[idx[w]] = r;
    }
    out
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

#[cfg(test)]
mod tests {
    use super::super::{Edge, Symbol};
    use super::*;

    fn graph(n: usize, edges: &[(&str, &[usize])], ext: &[usize]) -> Hypergraph<Symbol> {
        Hypergraph::try_new(
            n,
            edges.iter().map(|(l, att)| Edge { label: Symbol::new(*l, att.len()), att: att.to_vec() }).collect(),
            ext.to_vec(),
        )
        .unwrap()
    }

    /// Independent oracle: try every node bijection.
    fn brute_iso(g: &Hypergraph<Symbol>, h: &Hypergraph<Symbol>) -> bool {
        if g.node_count() != h.node_count() || g.edge_count() != h.edge_count() || g.rank() != h.rank() {
            return false;
        }
        let mut target: Vec<(Symbol, Vec<usize>)> =
            h.edges().iter().map(|e| (e.label.clone(), e.att.clone())).collect();
        target.sort();
        let mut perm: Vec<usize> = (0..g.node_count()).collect();
        loop {
            let ext_ok = g.ext().iter().zip(h.ext()).all(|(&a, &b)| perm[a] == b);
            if ext_ok {
                let mut mapped: Vec<(Symbol, Vec<usize>)> = g
                    .edges()
                    .iter()
                    .map(|e| (e.label.clone(), e.att.iter().map(|&v| perm[v]).collect()))
                    .collect();
                mapped.sort();
                if mapped == target {
                    return true;
                }
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    fn next_permutation(p: &mut [usize]) -> bool {
        if p.len() < 2 {
            return false;
        }
        let mut i = p.len() - 1;
        while i > 0 && p[i - 1] >= p[i] {
            i -= 1;
        }
        if i == 0 {
            return false;
        }
        let mut j = p.len() - 1;
        while p[j] <= p[i - 1] {
            j -= 1;
        }
        p.swap(i - 1, j);
        p[i..].reverse();
        true
    }

    #[test]
    fn witness_is_valid() {
        let g = graph(3, &[("a", &[0, 1]), ("b", &[1, 2])], &[0, 2]);
        let h = graph(3, &[("b", &[0, 2]), ("a", &[1, 0])], &[1, 2]);
        let w = g.isomorphism(&h).expect("isomorphic");
        assert!(w.verify(&g, &h));
        assert_eq!(w.node_map, vec![1, 0, 2]);
    }

    #[test]
    fn ext_order_matters() {
        let g = graph(2, &[("a", &[0, 1])], &[0, 1]);
        let h = graph(2, &[("a", &[0, 1])], &[1, 0]);
        assert!(!g.is_isomorphic(&h));
        assert!(!brute_iso(&g, &h));
    }

    #[test]
    fn symmetric_graphs() {
        // Directed 6-cycle against two directed 3-cycles.
        let c6: Vec<(&str, Vec<usize>)> = (0..6).map(|i| ("a", vec![i, (i + 1) % 6])).collect();
        let c33: Vec<(&str, Vec<usize>)> =
            (0..6).map(|i| ("a", vec![i, if i % 3 == 2 { i - 2 } else { i + 1 }])).collect();
        let mk = |es: &[(&str, Vec<usize>)]| {
            let refs: Vec<(&str, &[usize])> = es.iter().map(|(l, a)| (*l, a.as_slice())).collect();
            graph(6, &refs, &[])
        };
        let (a, b) = (mk(&c6), mk(&c33));
        assert!(!a.is_isomorphic(&b));
        let rotated: Vec<(&str, Vec<usize>)> = (0..6).map(|i| ("a", vec![(i + 2) % 6, (i + 3) % 6])).collect();
        assert!(a.is_isomorphic(&mk(&rotated)));
        assert_eq!(a.canonical_code(), mk(&rotated).canonical_code());
    }

    #[test]
    fn agrees_with_brute_force_on_small_graphs() {
        // Exhaustive over two edges with labels {a, b} on three nodes, with
        // and without an external node.
        let atts: Vec<Vec<usize>> = (0..3)
            .flat_map(|x| (0..3).filter(move |&y| y != x).map(move |y| vec![x, y]))
            .collect();
        let mut graphs = Vec::new();
        for l1 in ["a", "b"] {
            for l2 in ["a", "b"] {
                for a1 in &atts {
                    for a2 in &atts {
                        for ext in [vec![], vec![0], vec![2, 1]] {
                            graphs.push(graph(3, &[(l1, a1), (l2, a2)], &ext));
                        }
                    }
                }
            }
        }
        for g in &graphs {
            for h in &graphs {
                assert_eq!(g.is_isomorphic(h), brute_iso(g, h), "{g} vs {h}");
            }
        }
    }
}

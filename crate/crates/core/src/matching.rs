//! Enumerators behind backward proof search.
//!
//! A *decomposition* writes a host graph as `M[m1/H1, …, ml/Hl]` for a given
//! pattern `M`. A *context extraction* writes a host as
//! `H[e/D][d0 ≔ N÷D][d1/H1, …, dk/Hk]` around a pivot edge labeled `N÷D`.
//!
//! Both search an injective map `φ` from pattern nodes to host nodes. Once
//! `φ` is fixed with image `B`, host edges that share a node outside `B` must
//! stay together, which splits the remaining edges into blocks. Each block
//! is owned by one part (or by the context) whose boundary contains every
//! `B`-node it touches; the enumerators range over all such owner choices.

use std::collections::HashSet;
use std::ops::ControlFlow;

use crate::hypergraph::{EdgeId, Hypergraph, Label, NodeId};
use crate::types::Type;

/// What to do with host nodes outside the image of `φ` that no edge touches.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Apportionment {
    /// Parts contain only nodes touched by their own edges plus their
    /// external nodes. Such isolated nodes stay in the context of an
    /// extraction and rule out a decomposition.
    #[default]
    Minimal,
    /// Isolated nodes may additionally be placed inside any part.
    Exhaustive,
}

/// A part of an embedding: the host edges and isolated interior nodes given
/// to one pattern edge, glued at `ext`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartSpec {
    pub ext: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub isolated: Vec<NodeId>,
}

impl PartSpec {
    pub fn build<L: Clone>(&self, host: &Hypergraph<L>) -> Hypergraph<L> {
        host.induced(&self.edges, &self.isolated, &self.ext).0
    }
}

/// The context of an extraction: the host edges kept around the contracted
/// region, every kept node, and where the new edge attaches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContextSpec {
    pub edges: Vec<EdgeId>,
    pub nodes: Vec<NodeId>,
    pub attach: Vec<NodeId>,
}

impl ContextSpec {
    /// The premise antecedent: kept edges plus a fresh edge labeled `label`
    /// attached at `attach`. The fresh edge is the last edge.
    pub fn build<L: Clone>(&self, host: &Hypergraph<L>, label: L) -> Hypergraph<L> {
        let (mut g, back) = host.induced(&self.edges, &self.nodes, host.ext());
        let mut fwd = vec![usize::MAX; host.node_count()];
        for (new, &old) in back.iter().enumerate() {
            fwd[old] = new;
        }
        g.add_edge(label, self.attach.iter().map(|&v| fwd[v]).collect());
        g
    }
}

/// One way of matching a pattern inside a host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// Image of each pattern node.
    pub node_map: Vec<NodeId>,
    /// One entry per pattern edge; the hole of an extraction gets `None`.
    pub parts: Vec<Option<PartSpec>>,
    /// Present for extractions.
    pub context: Option<ContextSpec>,
}

struct Engine<'a, H, P> {
    host: &'a Hypergraph<H>,
    pattern: &'a Hypergraph<P>,
    hole: Option<(EdgeId, EdgeId)>,
    mode: Apportionment,
    order: Vec<NodeId>,
    phi: Vec<NodeId>,
    used: Vec<bool>,
    host_deg: Vec<usize>,
    host_ext: Vec<bool>,
    pattern_ext: Vec<bool>,
    /// Pattern node touches a pattern edge other than the hole.
    pattern_covered: Vec<bool>,
    host_inc: Vec<Vec<EdgeId>>,
}

const UNSET: usize = usize::MAX;

/// Calls `visit` for every decomposition of `host` along `pattern`
/// (`φ(ext_M) = ext_G`). Isomorphic duplicates are not removed.
pub fn for_each_decomposition<H: Label, P: Label>(
    host: &Hypergraph<H>,
    pattern: &Hypergraph<P>,
    mode: Apportionment,
    mut visit: impl FnMut(&Embedding) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if host.rank() != pattern.rank() || pattern.node_count() > host.node_count() {
        return ControlFlow::Continue(());
    }
    let mut eng = Engine::new(host, pattern, None, mode);
    let fixed: Vec<(NodeId, NodeId)> = pattern.ext().iter().copied().zip(host.ext().iter().copied()).collect();
    eng.run(&fixed, &mut visit)
}

/// Calls `visit` for every extraction of a denominator `den` (hole edge
/// `hole`) around host edge `pivot`: `φ(att(hole)) = att(pivot)`.
pub fn for_each_extraction<H: Label, P: Label>(
    host: &Hypergraph<H>,
    pivot: EdgeId,
    den: &Hypergraph<P>,
    hole: EdgeId,
    mode: Apportionment,
    mut visit: impl FnMut(&Embedding) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if host.att(pivot).len() != den.att(hole).len() || den.node_count() > host.node_count() {
        return ControlFlow::Continue(());
    }
    let mut eng = Engine::new(host, den, Some((hole, pivot)), mode);
    let fixed: Vec<(NodeId, NodeId)> =
        den.att(hole).iter().copied().zip(host.att(pivot).iter().copied()).collect();
    eng.run(&fixed, &mut visit)
}

impl<'a, H: Label, P: Label> Engine<'a, H, P> {
    fn new(host: &'a Hypergraph<H>, pattern: &'a Hypergraph<P>, hole: Option<(EdgeId, EdgeId)>, mode: Apportionment) -> Self {
        let mut host_ext = vec![false; host.node_count()];
        for &v in host.ext() {
            host_ext[v] = true;
        }
        let mut pattern_ext = vec![false; pattern.node_count()];
        for &v in pattern.ext() {
            pattern_ext[v] = true;
        }
        let mut pattern_covered = vec![false; pattern.node_count()];
        for (e, edge) in pattern.edges().iter().enumerate() {
            if hole.is_none_or(|(h, _)| h != e) {
                for &v in &edge.att {
                    pattern_covered[v] = true;
                }
            }
        }
        let mut host_inc = vec![Vec::new(); host.node_count()];
        for (e, edge) in host.edges().iter().enumerate() {
            for &v in &edge.att {
                host_inc[v].push(e);
            }
        }
        // Most constrained first: nodes of high-rank pattern edges, then the rest.
        let mut edges_by_rank: Vec<EdgeId> = (0..pattern.edge_count()).collect();
        edges_by_rank.sort_by_key(|&e| std::cmp::Reverse(pattern.att(e).len()));
        let mut order = Vec::with_capacity(pattern.node_count());
        let mut seen = vec![false; pattern.node_count()];
        for e in edges_by_rank {
            for &v in pattern.att(e) {
                if !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            }
        }
        order.extend((0..pattern.node_count()).filter(|&v| !seen[v]));
        Engine {
            host,
            pattern,
            hole,
            mode,
            order,
            phi: vec![UNSET; pattern.node_count()],
            used: vec![false; host.node_count()],
            host_deg: host.degrees(),
            host_ext,
            pattern_ext,
            pattern_covered,
            host_inc,
        }
    }

    fn is_extraction(&self) -> bool {
        self.hole.is_some()
    }

    /// Whether pattern node `v` may be sent to host node `h`.
    fn allowed(&self, v: NodeId, h: NodeId) -> bool {
        if self.used[h] {
            return false;
        }
        let erased = self.is_extraction() && !self.pattern_ext[v];
        if erased && self.host_ext[h] {
            return false;
        }
        if !self.pattern_covered[v] && !(self.is_extraction() && self.pattern_ext[v]) {
            // Nothing but the pivot may touch the image.
            let pivot_touch = self
                .hole
                .map_or(0, |(_, pivot)| usize::from(self.host.att(pivot).contains(&h)));
            if self.host_deg[h] != pivot_touch {
                return false;
            }
        }
        true
    }

    fn run(&mut self, fixed: &[(NodeId, NodeId)], visit: &mut dyn FnMut(&Embedding) -> ControlFlow<()>) -> ControlFlow<()> {
        for &(v, h) in fixed {
            if self.phi[v] != UNSET || !self.allowed(v, h) {
                return ControlFlow::Continue(());
            }
            self.phi[v] = h;
            self.used[h] = true;
        }
        self.order.retain(|&v| !fixed.iter().any(|&(f, _)| f == v));
        self.assign(0, visit)
    }

    fn assign(&mut self, idx: usize, visit: &mut dyn FnMut(&Embedding) -> ControlFlow<()>) -> ControlFlow<()> {
        if idx == self.order.len() {
            return self.finish(visit);
        }
        let v = self.order[idx];
        for h in 0..self.host.node_count() {
            if !self.allowed(v, h) {
                continue;
            }
            self.phi[v] = h;
            self.used[h] = true;
            let flow = self.assign(idx + 1, visit);
            self.used[h] = false;
            self.phi[v] = UNSET;
            flow?;
        }
        ControlFlow::Continue(())
    }

    fn finish(&mut self, visit: &mut dyn FnMut(&Embedding) -> ControlFlow<()>) -> ControlFlow<()> {
        let host = self.host;
        let pivot = self.hole.map(|(_, p)| p);
        let n = host.node_count();

        // Blocks: host edges (without the pivot) linked through non-image nodes.
        let mut uf: Vec<usize> = (0..host.edge_count()).collect();
        for v in 0..n {
            if self.used[v] {
                continue;
            }
            let mut first = None;
            for &e in &self.host_inc[v] {
                match first {
                    None => first = Some(e),
                    Some(f) => union(&mut uf, f, e),
                }
            }
        }
        let mut block_of = vec![UNSET; host.edge_count()];
        let mut blocks: Vec<Block> = Vec::new();
        for e in 0..host.edge_count() {
            if Some(e) == pivot {
                continue;
            }
            let r = find(&mut uf, e);
            if block_of[r] == UNSET {
                block_of[r] = blocks.len();
                blocks.push(Block::default());
            }
            let b = block_of[r];
            blocks[b].edges.push(e);
            for &v in host.att(e) {
                if self.used[v] {
                    if !blocks[b].touched.contains(&v) {
                        blocks[b].touched.push(v);
                    }
                } else if self.host_ext[v] {
                    blocks[b].has_ext = true;
                }
            }
        }
        for v in 0..n {
            if !self.used[v] && self.host_deg[v] == 0 {
                blocks.push(Block { isolated: Some(v), has_ext: self.host_ext[v], ..Block::default() });
            }
        }

        // Candidate owners; `None` is the context.
        let part_edges: Vec<EdgeId> =
            (0..self.pattern.edge_count()).filter(|&e| self.hole.is_none_or(|(h, _)| h != e)).collect();
        let part_bounds: Vec<Vec<NodeId>> =
            part_edges.iter().map(|&m| self.pattern.att(m).iter().map(|&v| self.phi[v]).collect()).collect();
        let attach: Vec<NodeId> = self.pattern.ext().iter().map(|&v| self.phi[v]).collect();
        let mut owners: Vec<Vec<Option<usize>>> = Vec::with_capacity(blocks.len());
        for b in &blocks {
            let mut cands = Vec::new();
            let to_context = self.is_extraction() && b.touched.iter().all(|v| attach.contains(v));
            if b.isolated.is_some() {
                if self.is_extraction() && (self.mode == Apportionment::Minimal || b.has_ext) {
                    cands.push(None);
                } else if self.mode == Apportionment::Exhaustive {
                    if self.is_extraction() {
                        cands.push(None);
                    }
                    cands.extend((0..part_edges.len()).map(Some));
                }
            } else {
                if to_context {
                    cands.push(None);
                }
                if !b.has_ext {
                    for (j, bound) in part_bounds.iter().enumerate() {
                        if b.touched.iter().all(|v| bound.contains(v)) {
                            cands.push(Some(j));
                        }
                    }
                }
            }
            if cands.is_empty() {
                return ControlFlow::Continue(());
            }
            owners.push(cands);
        }

        let mut choice = vec![0usize; blocks.len()];
        loop {
            let emb = self.embedding(&blocks, &owners, &choice, &part_edges, &part_bounds, &attach);
            visit(&emb)?;
            // Odometer over owner choices.
            let mut i = 0;
            loop {
                if i == choice.len() {
                    return ControlFlow::Continue(());
                }
                choice[i] += 1;
                if choice[i] < owners[i].len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }

    fn embedding(
        &self,
        blocks: &[Block],
        owners: &[Vec<Option<usize>>],
        choice: &[usize],
        part_edges: &[EdgeId],
        part_bounds: &[Vec<NodeId>],
        attach: &[NodeId],
    ) -> Embedding {
        let mut parts: Vec<PartSpec> = part_bounds
            .iter()
            .map(|b| PartSpec { ext: b.clone(), edges: Vec::new(), isolated: Vec::new() })
            .collect();
        let mut ctx_edges = Vec::new();
        let mut in_part = vec![false; self.host.node_count()];
        for (b, block) in blocks.iter().enumerate() {
            match owners[b][choice[b]] {
                None => ctx_edges.extend_from_slice(&block.edges),
                Some(j) => {
                    parts[j].edges.extend_from_slice(&block.edges);
                    if let Some(v) = block.isolated {
                        parts[j].isolated.push(v);
                        in_part[v] = true;
                    }
                    for &e in &block.edges {
                        for &v in self.host.att(e) {
                            if !self.used[v] {
                                in_part[v] = true;
                            }
                        }
                    }
                }
            }
        }
        for p in &mut parts {
            p.edges.sort_unstable();
        }
        let mut full: Vec<Option<PartSpec>> = vec![None; self.pattern.edge_count()];
        for (j, p) in parts.into_iter().enumerate() {
            full[part_edges[j]] = Some(p);
        }
        let context = self.hole.map(|_| {
            let mut erased = vec![false; self.host.node_count()];
            for v in 0..self.pattern.node_count() {
                if !self.pattern_ext[v] {
                    erased[self.phi[v]] = true;
                }
            }
            ctx_edges.sort_unstable();
            ContextSpec {
                edges: ctx_edges,
                nodes: (0..self.host.node_count()).filter(|&v| !erased[v] && !in_part[v]).collect(),
                attach: attach.to_vec(),
            }
        });
        Embedding { node_map: self.phi.clone(), parts: full, context }
    }
}

#[derive(Default)]
struct Block {
    edges: Vec<EdgeId>,
    touched: Vec<NodeId>,
    has_ext: bool,
    isolated: Option<NodeId>,
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

fn union(uf: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(uf, a), find(uf, b));
    if ra != rb {
        uf[ra.max(rb)] = ra.min(rb);
    }
}

/// `host ≅ M[m1/H1, …, ml/Hl]`.
#[derive(Clone, Debug)]
pub struct Decomposition<L> {
    pub node_map: Vec<NodeId>,
    pub parts: Vec<Hypergraph<L>>,
}

impl<L: Label> Decomposition<L> {
    /// `M[m1/H1, …]` with `M`'s labels forgotten.
    pub fn reassemble<P: Label>(&self, pattern: &Hypergraph<P>) -> Hypergraph<L> {
        let refs: Vec<&Hypergraph<L>> = self.parts.iter().collect();
        pattern.instantiate(&refs).expect("parts match the pattern's ranks")
    }
}

/// All decompositions of `host` along `pattern`, without isomorphic
/// duplicates of the part tuple.
pub fn enumerate_decompositions<H: Label, P: Label>(
    host: &Hypergraph<H>,
    pattern: &Hypergraph<P>,
    mode: Apportionment,
) -> Vec<Decomposition<H>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let _ = for_each_decomposition(host, pattern, mode, |emb| {
        let parts: Vec<Hypergraph<H>> = emb.parts.iter().map(|p| p.as_ref().unwrap().build(host)).collect();
        if seen.insert(tuple_key(parts.iter())) {
            out.push(Decomposition { node_map: emb.node_map.clone(), parts });
        }
        ControlFlow::Continue(())
    });
    out
}

/// `host ≅ contracted[e/D][d0 ≔ N÷D][d1/H1, …]`.
#[derive(Clone, Debug)]
pub struct ContextExtraction {
    pub pivot: EdgeId,
    pub node_map: Vec<NodeId>,
    /// Aligned with the denominator's edges; the hole has `None`.
    pub parts: Vec<Option<Hypergraph<Type>>>,
    /// Premise antecedent; its last edge is the new `N` edge.
    pub contracted: Hypergraph<Type>,
}

impl ContextExtraction {
    pub fn new_edge(&self) -> EdgeId {
        self.contracted.edge_count() - 1
    }

    /// Rebuilds the conclusion antecedent from the premises.
    pub fn reassemble(&self, division: &Type, contracted: &Hypergraph<Type>, new_edge: EdgeId) -> Hypergraph<Type> {
        reassemble_div_left(division, contracted, new_edge, &self.parts)
    }
}

/// `H[e/D][d0 ≔ N÷D][d1/H1, …, dk/Hk]`. `parts` is aligned with the edges of
/// the stored (canonical) denominator of `division`.
pub fn reassemble_div_left(
    division: &Type,
    context: &Hypergraph<Type>,
    e: EdgeId,
    parts: &[Option<Hypergraph<Type>>],
) -> Hypergraph<Type> {
    let (_, den, hole) = division.as_division().expect("a division type");
    let handle = Hypergraph::handle(division.clone());
    let refs: Vec<&Hypergraph<Type>> =
        (0..den.edge_count()).map(|d| if d == hole { &handle } else { parts[d].as_ref().unwrap() }).collect();
    let region = den.instantiate(&refs).expect("part ranks match the denominator");
    context.replace(e, &region).expect("contracted edge has the numerator's rank")
}

/// All extractions around `pivot`, whose label must be `division`.
pub fn enumerate_extractions(
    host: &Hypergraph<Type>,
    pivot: EdgeId,
    division: &Type,
    mode: Apportionment,
) -> Vec<ContextExtraction> {
    let (num, den, hole) = division.as_division().expect("a division type");
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let _ = for_each_extraction(host, pivot, den, hole, mode, |emb| {
        let contracted = emb.context.as_ref().unwrap().build(host, num.clone());
        let parts: Vec<Option<Hypergraph<Type>>> =
            emb.parts.iter().map(|p| p.as_ref().map(|p| p.build(host))).collect();
        let mut key = contracted.canonical_code();
        key.push(b'/');
        key.extend(tuple_key(parts.iter().flatten()));
        if seen.insert(key) {
            out.push(ContextExtraction { pivot, node_map: emb.node_map.clone(), parts, contracted });
        }
        ControlFlow::Continue(())
    });
    out
}

fn tuple_key<'a, L: Label + 'a>(parts: impl Iterator<Item = &'a Hypergraph<L>>) -> Vec<u8> {
    let mut k = Vec::new();
    for p in parts {
        let c = p.canonical_code();
        k.extend_from_slice(&(c.len() as u32).to_le_bytes());
        k.extend(c);
    }
    k
}

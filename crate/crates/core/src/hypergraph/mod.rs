//! Hypergraphs with ordered attachment and external nodes, together with the
//! algebra used everywhere else in the crate: relabeling, hyperedge
//! replacement, sub-hypergraph extraction and canonical forms.
//!
//! Nodes and edges are dense local indices (`0..node_count`, `0..edge_count`).
//! Identifiers carry no meaning across graphs; two graphs are only ever
//! compared through [`Hypergraph::isomorphism`] or [`Hypergraph::canonical_code`].

mod canon;
mod flowerbed;

pub use canon::{CanonicalForm, IsoWitness};
pub use flowerbed::{flowerbed, multiset_count, FlowerbedError};

use std::borrow::Cow;
use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

pub type NodeId = usize;
pub type EdgeId = usize;

/// Anything that can label a hyperedge.
///
/// `key` must be injective: two labels with the same key are the same label.
/// Canonical forms order labels by their keys.
pub trait Label: Clone + fmt::Debug {
    fn rank(&self) -> usize;
    fn key(&self) -> Cow<'_, [u8]>;
}

/// A ranked terminal symbol. The name `$` is reserved for the placeholder
/// edge of a division denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: String,
    rank: usize,
}

pub const HOLE_NAME: &str = "$";

impl Symbol {
    pub fn new(name: impl Into<String>, rank: usize) -> Self {
        Symbol { name: name.into(), rank }
    }

    pub fn hole(rank: usize) -> Self {
        Symbol::new(HOLE_NAME, rank)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_hole(&self) -> bool {
        self.name == HOLE_NAME
    }
}

impl Label for Symbol {
    fn rank(&self) -> usize {
        self.rank
    }

    fn key(&self) -> Cow<'_, [u8]> {
        let mut k = Vec::with_capacity(self.name.len() + 9);
        k.push(b'S');
        push_bytes(&mut k, self.name.as_bytes());
        push_u32(&mut k, self.rank as u32);
        Cow::Owned(k)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.rank)
    }
}

pub(crate) fn push_u32(buf: &mut Vec<u8>, v: u32) {
    buf.extend_from_slice(&v.to_le_bytes());
}

pub(crate) fn push_bytes(buf: &mut Vec<u8>, bytes: &[u8]) {
    push_u32(buf, bytes.len() as u32);
    buf.extend_from_slice(bytes);
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge<L> {
    pub label: L,
    pub att: Vec<NodeId>,
}

/// First violated well-formedness clause of a hypergraph.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("rank mismatch: edge {edge} has {attached} attachment nodes but its label has rank {rank}")]
    RankMismatch { edge: EdgeId, rank: usize, attached: usize },
    #[error("repeated attachment: node {node} occurs more than once in the attachment of edge {edge}")]
    RepeatedAttachment { edge: EdgeId, node: NodeId },
    #[error("repeated external node {node}")]
    RepeatedExternal { node: NodeId },
    #[error("edge {edge} is attached to unknown node {node}")]
    DanglingAttachment { edge: EdgeId, node: NodeId },
    #[error("unknown external node {node}")]
    DanglingExternal { node: NodeId },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("rank mismatch at edge {edge}: expected {expected}, found {found}")]
    RankMismatch { edge: EdgeId, expected: usize, found: usize },
    #[error("edge {0} is replaced more than once")]
    DuplicateEdge(EdgeId),
    #[error("string graphs need rank-2 labels, got rank {0}")]
    NotBinary(usize),
    #[error(transparent)]
    Invalid(#[from] Violation),
}

/// A finite hypergraph `⟨V, E, att, lab, ext⟩` over labels `L`.
///
/// `==` compares representations; use [`Hypergraph::is_isomorphic`] for
/// equality of graphs.
#[derive(Clone, Debug)]
pub struct Hypergraph<L> {
    node_count: usize,
    edges: Vec<Edge<L>>,
    ext: Vec<NodeId>,
}

impl<L> Default for Hypergraph<L> {
    fn default() -> Self {
        Hypergraph { node_count: 0, edges: Vec::new(), ext: Vec::new() }
    }
}

impl<L> Hypergraph<L> {
    /// Builds a graph without checking it; see [`Hypergraph::validate`].
    pub fn from_parts(node_count: usize, edges: Vec<Edge<L>>, ext: Vec<NodeId>) -> Self {
        Hypergraph { node_count, edges, ext }
    }

    /// `n` nodes, no edges.
    pub fn discrete(node_count: usize, ext: Vec<NodeId>) -> Self {
        Hypergraph { node_count, edges: Vec::new(), ext }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.node_count
    }

    pub fn edges(&self) -> &[Edge<L>] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge<L> {
        &self.edges[e]
    }

    pub fn label(&self, e: EdgeId) -> &L {
        &self.edges[e].label
    }

    pub fn att(&self, e: EdgeId) -> &[NodeId] {
        &self.edges[e].att
    }

    pub fn ext(&self) -> &[NodeId] {
        &self.ext
    }

    /// `rank(G) = |ext_G|`.
    pub fn rank(&self) -> usize {
        self.ext.len()
    }

    pub fn add_node(&mut self) -> NodeId {
        self.node_count += 1;
        self.node_count - 1
    }

    pub fn add_edge(&mut self, label: L, att: Vec<NodeId>) -> EdgeId {
        self.edges.push(Edge { label, att });
        self.edges.len() - 1
    }

    pub fn set_ext(&mut self, ext: Vec<NodeId>) {
        self.ext = ext;
    }

    /// For every node, the `(edge, position)` pairs attaching it.
    pub fn incidence(&self) -> Vec<Vec<(EdgeId, usize)>> {
        let mut inc = vec![Vec::new(); self.node_count];
        for (e, edge) in self.edges.iter().enumerate() {
            for (i, &v) in edge.att.iter().enumerate() {
                inc[v].push((e, i));
            }
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for edge in &self.edges {
            for &v in &edge.att {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Nodes attached to no edge (external or not).
    pub fn isolated_nodes(&self) -> Vec<NodeId> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(v, _)| v)
            .collect()
    }

    /// `isize(H)`.
    pub fn isolated_node_count(&self) -> usize {
        self.degrees().iter().filter(|&&d| d == 0).count()
    }

    /// Applies `f` to every label without rank checks.
    pub fn map_labels<K>(&self, mut f: impl FnMut(EdgeId, &L) -> K) -> Hypergraph<K> {
        Hypergraph {
            node_count: self.node_count,
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(e, edge)| Edge { label: f(e, &edge.label), att: edge.att.clone() })
                .collect(),
            ext: self.ext.clone(),
        }
    }

    pub fn try_map_labels<K, E>(
        &self,
        mut f: impl FnMut(EdgeId, &L) -> Result<K, E>,
    ) -> Result<Hypergraph<K>, E> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (e, edge) in self.edges.iter().enumerate() {
            edges.push(Edge { label: f(e, &edge.label)?, att: edge.att.clone() });
        }
        Ok(Hypergraph { node_count: self.node_count, edges, ext: self.ext.clone() })
    }
}

impl<L: Clone> Hypergraph<L> {
    /// The sub-hypergraph spanned by `edges`, the nodes they touch, `ext` and
    /// `extra_nodes`, re-indexed from zero. Nodes are numbered in the order
    /// ext, then edge attachments, then extra nodes. Returns the graph and the
    /// old id of every new node.
    pub fn induced(
        &self,
        edges: &[EdgeId],
        extra_nodes: &[NodeId],
        ext: &[NodeId],
    ) -> (Hypergraph<L>, Vec<NodeId>) {
        let mut map = vec![usize::MAX; self.node_count];
        let mut back = Vec::new();
        let touch = |v: NodeId, map: &mut Vec<usize>, back: &mut Vec<NodeId>| {
            if map[v] == usize::MAX {
                map[v] = back.len();
                back.push(v);
            }
            map[v]
        };
        let new_ext: Vec<NodeId> = ext.iter().map(|&v| touch(v, &mut map, &mut back)).collect();
        let mut new_edges = Vec::with_capacity(edges.len());
        for &e in edges {
            let att = self.edges[e].att.iter().map(|&v| touch(v, &mut map, &mut back)).collect();
            new_edges.push(Edge { label: self.edges[e].label.clone(), att });
        }
        for &v in extra_nodes {
            touch(v, &mut map, &mut back);
        }
        (Hypergraph { node_count: back.len(), edges: new_edges, ext: new_ext }, back)
    }

    /// Glues a fresh copy of `h` onto the nodes `at`: the i-th external node of
    /// `h` is fused with `at[i]`, every other node of `h` becomes new. Edges of
    /// `h` are appended. Returns the image of every node of `h`.
    fn glue(&mut self, at: &[NodeId], h: &Hypergraph<L>) -> Vec<NodeId> {
        debug_assert_eq!(at.len(), h.ext.len());
        let mut map = vec![usize::MAX; h.node_count];
        for (i, &x) in h.ext.iter().enumerate() {
            map[x] = at[i];
        }
        for slot in map.iter_mut() {
            if *slot == usize::MAX {
                *slot = self.node_count;
                self.node_count += 1;
            }
        }
        for edge in &h.edges {
            self.edges.push(Edge {
                label: edge.label.clone(),
                att: edge.att.iter().map(|&v| map[v]).collect(),
            });
        }
        map
    }
}

impl<L: Label> Hypergraph<L> {
    /// Checks every clause of the hypergraph definition and reports the first
    /// one that fails.
    pub fn validate(&self) -> Result<(), Violation> {
        for (e, edge) in self.edges.iter().enumerate() {
            for &v in &edge.att {
                if v >= self.node_count {
                    return Err(Violation::DanglingAttachment { edge: e, node: v });
                }
            }
            let rank = edge.label.rank();
            if rank != edge.att.len() {
                return Err(Violation::RankMismatch { edge: e, rank, attached: edge.att.len() });
            }
            if let Some(node) = first_repeat(&edge.att) {
                return Err(Violation::RepeatedAttachment { edge: e, node });
            }
        }
        for &v in &self.ext {
            if v >= self.node_count {
                return Err(Violation::DanglingExternal { node: v });
            }
        }
        if let Some(node) = first_repeat(&self.ext) {
            return Err(Violation::RepeatedExternal { node });
        }
        Ok(())
    }

    pub fn try_new(node_count: usize, edges: Vec<Edge<L>>, ext: Vec<NodeId>) -> Result<Self, Violation> {
        let g = Hypergraph { node_count, edges, ext };
        g.validate()?;
        Ok(g)
    }

    /// The handle `a•`: `rank(a)` external nodes and one edge attached to all
    /// of them in order.
    pub fn handle(label: L) -> Self {
        let n = label.rank();
        Hypergraph {
            node_count: n,
            edges: vec![Edge { label, att: (0..n).collect() }],
            ext: (0..n).collect(),
        }
    }

    /// Whether this graph is a handle, i.e. a single edge whose attachment is
    /// exactly the external sequence and no other nodes.
    pub fn as_handle(&self) -> Option<&L> {
        match self.edges.as_slice() {
            [edge] if self.node_count == self.ext.len() && edge.att == self.ext => Some(&edge.label),
            _ => None,
        }
    }

    /// `SG(w)`: a chain `v0 → v1 → … → vn` with external nodes `v0 vn`.
    /// The empty word gives two external nodes and no edges.
    pub fn string_graph(word: impl IntoIterator<Item = L>) -> Result<Self, GraphError> {
        let mut g = Hypergraph { node_count: 1, edges: Vec::new(), ext: Vec::new() };
        for label in word {
            if label.rank() != 2 {
                return Err(GraphError::NotBinary(label.rank()));
            }
            let prev = g.node_count - 1;
            let next = g.add_node();
            g.edges.push(Edge { label, att: vec![prev, next] });
        }
        if g.edges.is_empty() {
            g.node_count = 2;
        }
        g.ext = vec![0, g.node_count - 1];
        Ok(g)
    }

    /// `f(H)`: replaces every label. Ranks must be preserved.
    pub fn relabel<K: Label>(&self, mut f: impl FnMut(EdgeId, &L) -> K) -> Result<Hypergraph<K>, GraphError> {
        self.try_map_labels(|e, old| {
            let new = f(e, old);
            if new.rank() != old.rank() {
                return Err(GraphError::RankMismatch { edge: e, expected: old.rank(), found: new.rank() });
            }
            Ok(new)
        })
    }

    /// `H[e0 ≔ a]`.
    pub fn relabel_one(&self, e0: EdgeId, label: L) -> Result<Self, GraphError> {
        let old = self.edges.get(e0).ok_or(GraphError::UnknownEdge(e0))?;
        if old.label.rank() != label.rank() {
            return Err(GraphError::RankMismatch { edge: e0, expected: old.label.rank(), found: label.rank() });
        }
        let mut g = self.clone();
        g.edges[e0].label = label;
        Ok(g)
    }

    /// `G[e0/H]`: removes `e0`, inserts a fresh copy of `h` and fuses the i-th
    /// external node of `h` with the i-th attachment node of `e0`.
    ///
    /// Surviving edges of `G` keep their relative order and come first; the
    /// edges of `h` follow.
    pub fn replace(&self, e0: EdgeId, h: &Hypergraph<L>) -> Result<Self, GraphError> {
        self.replace_all(&[(e0, h)])
    }

    /// Simultaneous replacement `G[e1/H1, …, ek/Hk]`.
    pub fn replace_all(&self, assignment: &[(EdgeId, &Hypergraph<L>)]) -> Result<Self, GraphError> {
        let mut replaced = vec![false; self.edges.len()];
        for &(e, h) in assignment {
            let edge = self.edges.get(e).ok_or(GraphError::UnknownEdge(e))?;
            if replaced[e] {
                return Err(GraphError::DuplicateEdge(e));
            }
            if edge.att.len() != h.rank() {
                return Err(GraphError::RankMismatch { edge: e, expected: edge.att.len(), found: h.rank() });
            }
            replaced[e] = true;
        }
        let mut out = Hypergraph {
            node_count: self.node_count,
            edges: self
                .edges
                .iter()
                .enumerate()
                .filter(|(e, _)| !replaced[*e])
                .map(|(_, edge)| edge.clone())
                .collect(),
            ext: self.ext.clone(),
        };
        for &(e, h) in assignment {
            out.glue(&self.edges[e].att, h);
        }
        Ok(out)
    }

    /// Replaces every edge of `self` at once, `parts[i]` going into edge `i`.
    /// The labels of `self` only contribute their ranks, so the result may use
    /// a different label type.
    pub fn instantiate<K: Clone>(&self, parts: &[&Hypergraph<K>]) -> Result<Hypergraph<K>, GraphError> {
        if parts.len() != self.edges.len() {
            return Err(GraphError::UnknownEdge(parts.len().min(self.edges.len())));
        }
        let mut out: Hypergraph<K> = Hypergraph::discrete(self.node_count, self.ext.clone());
        for (e, (edge, part)) in self.edges.iter().zip(parts).enumerate() {
            if edge.att.len() != part.rank() {
                return Err(GraphError::RankMismatch { edge: e, expected: edge.att.len(), found: part.rank() });
            }
            out.glue(&edge.att, part);
        }
        Ok(out)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        canon::canonical_form(self)
    }

    /// Byte string that is equal for two graphs iff they are isomorphic.
    pub fn canonical_code(&self) -> Vec<u8> {
        canon::canonical_form(self).into_code()
    }

    /// The isomorphic copy whose nodes and edges are numbered in canonical order.
    pub fn canonical_graph(&self) -> Hypergraph<L> {
        let cf = canon::canonical_form(self);
        cf.apply(self)
    }

    pub fn isomorphism<K: Label>(&self, other: &Hypergraph<K>) -> Option<IsoWitness> {
        canon::isomorphism(self, other)
    }

    pub fn is_isomorphic<K: Label>(&self, other: &Hypergraph<K>) -> bool {
        self.isomorphism(other).is_some()
    }
}

/// Identical representation, not isomorphism: same node count, same ext and
/// the same edges in the same order.
impl<L: PartialEq> PartialEq for Hypergraph<L> {
    fn eq(&self, other: &Self) -> bool {
        self.node_count == other.node_count && self.ext == other.ext && self.edges == other.edges
    }
}

impl<L: Eq> Eq for Hypergraph<L> {}

impl<L: Label> fmt::Display for Hypergraph<L>
where
    L: fmt::Display,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{nodes:")?;
        for v in 0..self.node_count {
            write!(f, " n{v}")?;
        }
        write!(f, "; ext:")?;
        for v in &self.ext {
            write!(f, " n{v}")?;
        }
        for (e, edge) in self.edges.iter().enumerate() {
            write!(f, "; edge e{e} {} :", edge.label)?;
            for v in &edge.att {
                write!(f, " n{v}")?;
            }
        }
        write!(f, "}}")
    }
}

fn first_repeat(seq: &[NodeId]) -> Option<NodeId> {
    let mut seen = HashSet::with_capacity(seq.len());
    seq.iter().copied().find(|&v| !seen.insert(v))
}

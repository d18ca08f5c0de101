//! Reference grammars, graph-class oracles and the string Lambek calculus.

mod lambek;
mod oracles;

pub use lambek::{lambek_derive, lambek_sequents, random_lambek_sequent, translate_lambek, translate_sequent, LSequent, LType};
pub use oracles::{
    binary_census, brute_force_isomorphic, in_l1, is_bipartite, is_regular, permuted, random_hypergraph, random_l1_graph, star,
    with_isolated_node,
};

use thiserror::Error;

use crate::grammar::{HlGrammar, Hrg};
use crate::hypergraph::{Edge, EdgeId, Hypergraph, NodeId, Symbol};
use crate::types::{string_denominator, Sequent, Slot, Type};

fn sym2(n: &str) -> Symbol {
    Symbol::new(n, 2)
}

fn edge<L>(label: L, att: &[NodeId]) -> Edge<L> {
    Edge { label, att: att.to_vec() }
}

/// `a ▷ s ÷ SG($ s p)`, `b ▷ p`, `b ▷ s`.
pub fn sgr() -> HlGrammar {
    let (s, p) = (Type::primitive("s", 2), Type::primitive("p", 2));
    let q = Type::division(s.clone(), string_denominator(&[None, Some(s.clone()), Some(p.clone())]).unwrap()).unwrap();
    HlGrammar::new(vec![sym2("a"), sym2("b")], s.clone(), vec![(sym2("a"), q), (sym2("b"), p), (sym2("b"), s)]).unwrap()
}

/// `S → SG(a S P)`, `S → SG(b)`, `P → SG(b)`.
pub fn sgr_hrg() -> Hrg {
    let sg = |w: &[&str]| Hypergraph::string_graph(w.iter().map(|x| sym2(x))).unwrap();
    Hrg::new(
        vec![sym2("S"), sym2("P")],
        vec![sym2("a"), sym2("b")],
        vec![],
        vec![(sym2("S"), sg(&["a", "S", "P"])), (sym2("S"), sg(&["b"])), (sym2("P"), sg(&["b"]))],
        sym2("S"),
    )
    .unwrap()
}

/// The tree grammar for "the cat sleeps", with `l` and `r` fixed.
pub fn syntree_hrg() -> Hrg {
    let s1 = |n: &str| Symbol::new(n, 1);
    // Middle node external, `l` and `r` out of it, `left` on the left node
    // and `right` on the right node.
    let branch = |left: &str, right: &str| {
        Hypergraph::from_parts(
            3,
            vec![edge(s1(left), &[0]), edge(s1(right), &[2]), edge(sym2("l"), &[1, 0]), edge(sym2("r"), &[1, 2])],
            vec![1],
        )
    };
    Hrg::new(
        vec![s1("S"), s1("NP"), s1("N")],
        vec![s1("the"), s1("cat"), s1("sleeps"), sym2("l"), sym2("r")],
        vec![sym2("l"), sym2("r")],
        vec![
            (s1("S"), branch("NP", "sleeps")),
            (s1("NP"), branch("the", "N")),
            (s1("N"), Hypergraph::handle(s1("cat"))),
        ],
        s1("S"),
    )
    .unwrap()
}

/// The tree of "the cat sleeps" rooted at its only external node.
pub fn syntree() -> Hypergraph<Symbol> {
    let s1 = |n: &str| Symbol::new(n, 1);
    Hypergraph::from_parts(
        5,
        vec![
            edge(sym2("l"), &[0, 1]),
            edge(sym2("r"), &[0, 2]),
            edge(s1("sleeps"), &[2]),
            edge(sym2("l"), &[1, 3]),
            edge(sym2("r"), &[1, 4]),
            edge(s1("the"), &[3]),
            edge(s1("cat"), &[4]),
        ],
        vec![0],
    )
}

fn hgr1_s() -> Type {
    Type::primitive("s", 0)
}

fn hgr1_p() -> Type {
    Type::primitive("p", 1)
}

/// `Q1 = p`, `Q2 = p ÷ ($ at (1), p apart)`, `Q3 = s ÷ ($, p apart)`.
pub fn hgr1_q(i: usize) -> Type {
    let p = hgr1_p();
    let den = |ext: Vec<NodeId>| Hypergraph::from_parts(2, vec![edge(Slot::Hole(1), &[0]), edge(Slot::Ty(p.clone()), &[1])], ext);
    match i {
        1 => p.clone(),
        2 => Type::division(p.clone(), den(vec![0])).unwrap(),
        3 => Type::division(hgr1_s(), den(vec![])).unwrap(),
        _ => panic!("Q{i} is not defined"),
    }
}

/// The two-external-node product with the given rank-1 types at `(1)` and
/// `(2)`.
fn two_point(first: Option<Type>, second: Option<Type>) -> Type {
    let mut m = Hypergraph::discrete(2, vec![0, 1]);
    if let Some(t) = first {
        m.add_edge(t, vec![0]);
    }
    if let Some(t) = second {
        m.add_edge(t, vec![1]);
    }
    Type::product(m).unwrap()
}

pub fn hgr1_m11(i: usize, j: usize) -> Type {
    two_point(Some(hgr1_q(i)), Some(hgr1_q(j)))
}

pub fn hgr1_m12(i: usize) -> Type {
    two_point(Some(hgr1_q(i)), None)
}

pub fn hgr1_m21(j: usize) -> Type {
    two_point(None, Some(hgr1_q(j)))
}

pub fn hgr1_m22() -> Type {
    two_point(None, None)
}

/// All binary graphs without isolated and external nodes.
pub fn hgr1() -> HlGrammar {
    let mut types = Vec::new();
    for i in 1..=3 {
        for j in 1..=3 {
            types.push(hgr1_m11(i, j));
        }
    }
    for i in 1..=3 {
        types.push(hgr1_m12(i));
    }
    for j in 1..=3 {
        types.push(hgr1_m21(j));
    }
    types.push(hgr1_m22());
    HlGrammar::new(vec![star()], hgr1_s(), types.into_iter().map(|t| (star(), t)).collect()).unwrap()
}

/// `R1(r) = r`; `R2`, `R3`, `R4` divide `r` by `$` at the external node
/// together with another `r` there, elsewhere, or both.
pub fn hgr2_r(i: usize, r: &Type) -> Type {
    let (hole, here, apart) = (edge(Slot::Hole(1), &[0]), edge(Slot::Ty(r.clone()), &[0]), edge(Slot::Ty(r.clone()), &[1]));
    let den = match i {
        1 => return r.clone(),
        2 => Hypergraph::from_parts(1, vec![hole, here], vec![0]),
        3 => Hypergraph::from_parts(2, vec![hole, apart], vec![0]),
        4 => Hypergraph::from_parts(2, vec![hole, here, apart], vec![0]),
        _ => panic!("R{i} is not defined"),
    };
    Type::division(r.clone(), den).unwrap()
}

pub fn hgr2_m(i: usize, j: usize) -> Type {
    let (p, q) = (Type::primitive("p", 1), Type::primitive("q", 1));
    two_point(Some(hgr2_r(i, &p)), Some(hgr2_r(j, &q)))
}

/// `S = ×(p on one node, q on another)`, rank 0.
pub fn hgr2_start() -> Type {
    let (p, q) = (Type::primitive("p", 1), Type::primitive("q", 1));
    Type::product(Hypergraph::from_parts(2, vec![edge(p, &[0]), edge(q, &[1])], vec![])).unwrap()
}

/// Bipartite binary graphs without isolated and external nodes.
pub fn hgr2() -> HlGrammar {
    let mut pairs = Vec::new();
    for i in 1..=4 {
        for j in 1..=4 {
            pairs.push((star(), hgr2_m(i, j)));
        }
    }
    HlGrammar::new(vec![star()], hgr2_start(), pairs).unwrap()
}

/// The four-node, four-edge graph with edges 0→1, 0→2, 1→2, 3→2.
pub fn hgr1_example_graph() -> Hypergraph<Symbol> {
    Hypergraph::from_parts(
        4,
        vec![edge(star(), &[0, 1]), edge(star(), &[0, 2]), edge(star(), &[1, 2]), edge(star(), &[3, 2])],
        vec![],
    )
}

/// `f_H(H) → s` for [`hgr1_example_graph`] relabeled by
/// `M11^32, M21^2, M22, M12^1`.
pub fn hgr1_example_sequent() -> Sequent {
    let f = [hgr1_m11(3, 2), hgr1_m21(2), hgr1_m22(), hgr1_m12(1)];
    let g = hgr1_example_graph().map_labels(|e, _| f[e].clone());
    Sequent::new(g, hgr1_s()).unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("the graph is not in L1: {0}")]
    NotInL1(&'static str),
    #[error("edge {edge} assigned to node {node} is not attached to it")]
    BadChoice { node: NodeId, edge: EdgeId },
    #[error("begin and end nodes must be distinct nodes of the graph")]
    BadEnds,
}

/// The relabeling with `h(v)` the first edge attached to `v` and `v_b`, `v_e`
/// the canonically first and last nodes.
pub fn hgr1_witness(g: &Hypergraph<Symbol>) -> Result<Vec<Type>, WitnessError> {
    check_l1(g)?;
    let inc = g.incidence();
    let h: Vec<EdgeId> = inc.iter().map(|i| i[0].0).collect();
    let order = g.canonical_form().node_order().to_vec();
    hgr1_witness_with(g, &h, order[0], order[order.len() - 1])
}

/// The relabeling for a given choice of `h`, `v_b` and `v_e`: `c(v_b) = 1`,
/// `c(v_e) = 3`, `c(v) = 2` otherwise, and an edge `v1 → v2` gets `M11`,
/// `M12`, `M21` or `M22` by which of `h(v1) = e`, `h(v2) = e` hold.
pub fn hgr1_witness_with(g: &Hypergraph<Symbol>, h: &[EdgeId], vb: NodeId, ve: NodeId) -> Result<Vec<Type>, WitnessError> {
    check_l1(g)?;
    if vb == ve || vb >= g.node_count() || ve >= g.node_count() || h.len() != g.node_count() {
        return Err(WitnessError::BadEnds);
    }
    for (v, &e) in h.iter().enumerate() {
        if e >= g.edge_count() || !g.att(e).contains(&v) {
            return Err(WitnessError::BadChoice { node: v, edge: e });
        }
    }
    let c = |v: NodeId| if v == vb { 1 } else if v == ve { 3 } else { 2 };
    Ok((0..g.edge_count())
        .map(|e| {
            let (v1, v2) = (g.att(e)[0], g.att(e)[1]);
            match (h[v1] == e, h[v2] == e) {
                (true, true) => hgr1_m11(c(v1), c(v2)),
                (true, false) => hgr1_m12(c(v1)),
                (false, true) => hgr1_m21(c(v2)),
                (false, false) => hgr1_m22(),
            }
        })
        .collect())
}

fn check_l1(g: &Hypergraph<Symbol>) -> Result<(), WitnessError> {
    if g.edges().iter().any(|e| e.att.len() != 2) {
        return Err(WitnessError::NotInL1("an edge is not binary"));
    }
    if !g.ext().is_empty() {
        return Err(WitnessError::NotInL1("external nodes"));
    }
    if g.node_count() < 2 {
        return Err(WitnessError::NotInL1("fewer than two nodes"));
    }
    if g.isolated_node_count() > 0 {
        return Err(WitnessError::NotInL1("isolated nodes"));
    }
    Ok(())
}

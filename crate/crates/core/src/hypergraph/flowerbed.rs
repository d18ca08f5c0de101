//! Flowerbeds: a path of `b`-edges along which the elements of each multiset
//! dangle as edges attached at one spine node.

use thiserror::Error;

use super::{Hypergraph, Label, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FlowerbedError {
    #[error("a flowerbed needs at least one multiset")]
    Empty,
    #[error("the spine label must have rank 2, got rank {0}")]
    SpineRank(usize),
    #[error("the spine label {0} also occurs in a multiset")]
    SpineReused(String),
    #[error("label {0} has rank 0 and cannot hang from a spine node")]
    NullaryFlower(String),
}

/// Number of occurrences of `a` in `multiset`.
pub fn multiset_count<L: PartialEq>(multiset: &[L], a: &L) -> usize {
    multiset.iter().filter(|x| *x == a).count()
}

/// `FB(b; C1, …, Cn)`.
///
/// Spine nodes are `0..n`. For every element `a` of `Ci` there is an edge
/// labeled `a` attached at spine node `i` followed by `rank(a) - 1` fresh
/// nodes. Edges `b` connect spine node `i` to `i + 1`. No external nodes.
pub fn flowerbed(multisets: &[Vec<Symbol>], spine: &Symbol) -> Result<Hypergraph<Symbol>, FlowerbedError> {
    if multisets.is_empty() {
        return Err(FlowerbedError::Empty);
    }
    if spine.rank() != 2 {
        return Err(FlowerbedError::SpineRank(spine.rank()));
    }
    let n = multisets.len();
    let mut g = Hypergraph::discrete(n, Vec::new());
    for (i, set) in multisets.iter().enumerate() {
        for a in set {
            if a.name() == spine.name() {
                return Err(FlowerbedError::SpineReused(spine.to_string()));
            }
            if a.rank() == 0 {
                return Err(FlowerbedError::NullaryFlower(a.to_string()));
            }
            let mut att = vec![i];
            att.extend((1..a.rank()).map(|_| g.add_node()));
            g.add_edge(a.clone(), att);
        }
    }
    for i in 1..n {
        g.add_edge(spine.clone(), vec![i - 1, i]);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape() {
        let a = Symbol::new("a", 2);
        let c = Symbol::new("c", 1);
        let b = Symbol::new("b", 2);
        let fb = flowerbed(&[vec![a.clone(), c.clone()], vec![a.clone()]], &b).unwrap();
        fb.validate().unwrap();
        // 2 spine nodes + 1 fresh node for each rank-2 flower.
        assert_eq!(fb.node_count(), 4);
        assert_eq!(fb.edge_count(), 4);
        assert_eq!(fb.rank(), 0);
        assert_eq!(fb.isolated_node_count(), 0);
        assert_eq!(multiset_count(&[a.clone(), a.clone(), c.clone()], &a), 2);
    }

    #[test]
    fn preconditions() {
        let b = Symbol::new("b", 2);
        assert_eq!(flowerbed(&[], &b), Err(FlowerbedError::Empty));
        assert!(matches!(flowerbed(&[vec![]], &Symbol::new("b", 1)), Err(FlowerbedError::SpineRank(1))));
        assert!(matches!(flowerbed(&[vec![b.clone()]], &b), Err(FlowerbedError::SpineReused(_))));
        assert!(matches!(
            flowerbed(&[vec![Symbol::new("z", 0)]], &b),
            Err(FlowerbedError::NullaryFlower(_))
        ));
        let single = flowerbed(&[vec![]], &b).unwrap();
        assert_eq!((single.node_count(), single.edge_count()), (1, 0));
    }
}

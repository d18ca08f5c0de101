//! Language models: valuations assigning finite graph languages to
//! primitive types, their extension to all types, and truth of sequents.
//!
//! Denotations are finite sets of canonical graphs. A product is
//! enumerable when its parts are. A division `N ÷ D` is enumerable when
//! `N` is and every denominator type has a nonempty enumerable denotation:
//! each member `G` then occurs as the hole part of a decomposition of some
//! graph in `w̄(N)` along `D`. With an empty denominator denotation the
//! condition is vacuous and the denotation contains every graph of the
//! right rank.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::hypergraph::{Edge, Hypergraph, Label, Symbol};
use crate::matching::{enumerate_decompositions, Apportionment};
use crate::types::{Sequent, Type, TypeKind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{0} is not a primitive type")]
    NotPrimitive(Type),
    #[error("graph of rank {found} assigned to {prim} of rank {}", .prim.rank())]
    RankMismatch { prim: Symbol, found: usize },
    #[error("graph is malformed: {0}")]
    Graph(#[from] crate::hypergraph::Violation),
}

/// Canonical code to canonical graph.
pub type Language = BTreeMap<Vec<u8>, Hypergraph<Symbol>>;

fn language(graphs: impl IntoIterator<Item = Hypergraph<Symbol>>) -> Language {
    graphs.into_iter().map(|g| (g.canonical_code(), g.canonical_graph())).collect()
}

/// `w : Pr → P(H(Σ))` with finite values. Unassigned primitives denote `∅`.
#[derive(Clone, Debug, Default)]
pub struct Valuation {
    assignment: BTreeMap<Symbol, Language>,
}

impl Valuation {
    pub fn new() -> Valuation {
        Valuation::default()
    }

    pub fn set(&mut self, prim: &Type, graphs: Vec<Hypergraph<Symbol>>) -> Result<(), ModelError> {
        let p = prim.as_primitive().ok_or_else(|| ModelError::NotPrimitive(prim.clone()))?;
        for g in &graphs {
            g.validate()?;
            if g.rank() != p.rank() {
                return Err(ModelError::RankMismatch { prim: p.clone(), found: g.rank() });
            }
        }
        self.assignment.insert(p.clone(), language(graphs));
        Ok(())
    }

    pub fn get(&self, prim: &Symbol) -> impl Iterator<Item = &Hypergraph<Symbol>> {
        self.assignment.get(prim).into_iter().flat_map(|l| l.values())
    }

    pub fn primitives(&self) -> impl Iterator<Item = &Symbol> {
        self.assignment.keys()
    }

    fn contains_primitive(&self, prim: &Symbol, code: &[u8]) -> bool {
        self.assignment.get(prim).is_some_and(|l| l.contains_key(code))
    }
}

/// A three-valued verdict; `Undecided` is never conflated with `False`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth {
    True,
    False,
    Undecided,
}

impl Truth {
    pub fn from_bool(b: bool) -> Truth {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Truth::True => Some(true),
            Truth::False => Some(false),
            Truth::Undecided => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NotEnumerable {
    #[error("{0} has an empty denominator denotation, so its denotation is infinite")]
    Vacuous(Type),
}

/// Keyed by type key and canonical graph code.
type ContainsMemo = HashMap<(Vec<u8>, Vec<u8>), Truth>;

/// Evaluates denotations under one valuation, caching results.
pub struct Evaluator<'w> {
    w: &'w Valuation,
    enumerated: RefCell<HashMap<Vec<u8>, Result<Language, NotEnumerable>>>,
    contained: RefCell<ContainsMemo>,
}

impl<'w> Evaluator<'w> {
    pub fn new(w: &'w Valuation) -> Evaluator<'w> {
        Evaluator { w, enumerated: RefCell::default(), contained: RefCell::default() }
    }

    /// `w̄(T)` as canonical graphs.
    pub fn enumerate(&self, t: &Type) -> Result<Language, NotEnumerable> {
        if let Some(r) = self.enumerated.borrow().get(t.key()) {
            return r.clone();
        }
        let r = self.enumerate_uncached(t);
        self.enumerated.borrow_mut().insert(t.key().to_vec(), r.clone());
        r
    }

    fn enumerate_uncached(&self, t: &Type) -> Result<Language, NotEnumerable> {
        match t.kind() {
            TypeKind::Primitive(p) => Ok(self.w.assignment.get(p).cloned().unwrap_or_default()),
            TypeKind::Product(m) => self.instances(m),
            TypeKind::Division { num, den, hole } => {
                for (d, e) in den.edges().iter().enumerate() {
                    if d == *hole {
                        continue;
                    }
                    let lang = self.enumerate(e.label.as_type().expect("only the hole is unlabeled"))?;
                    if lang.is_empty() {
                        return Err(NotEnumerable::Vacuous(t.clone()));
                    }
                }
                let mut out = Language::new();
                for x in self.enumerate(num)?.values() {
                    for dec in enumerate_decompositions(x, den, Apportionment::Exhaustive) {
                        let g = &dec.parts[*hole];
                        let code = g.canonical_code();
                        if out.contains_key(&code) {
                            continue;
                        }
                        if self.contains(t, g) == Truth::True {
                            out.insert(code, g.canonical_graph());
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// All `M[m1/H1, …]` with `Hi ∈ w̄(lab(mi))`.
    pub fn instances(&self, m: &Hypergraph<Type>) -> Result<Language, NotEnumerable> {
        let mut langs = Vec::with_capacity(m.edge_count());
        for e in m.edges() {
            let l = self.enumerate(&e.label)?;
            if l.is_empty() {
                return Ok(Language::new());
            }
            langs.push(l.into_values().collect::<Vec<_>>());
        }
        let mut out = Language::new();
        for_each_tuple(&langs, |tuple| {
            let g = m.instantiate(tuple).expect("denotations are rank-matched");
            out.entry(g.canonical_code()).or_insert_with(|| g.canonical_graph());
        });
        Ok(out)
    }

    /// `G ∈ w̄(T)`.
    pub fn contains(&self, t: &Type, g: &Hypergraph<Symbol>) -> Truth {
        if g.rank() != t.rank() {
            return Truth::False;
        }
        let code = g.canonical_code();
        let key = (t.key().to_vec(), code);
        if let Some(&r) = self.contained.borrow().get(&key) {
            return r;
        }
        let r = self.contains_uncached(t, g, &key.1);
        self.contained.borrow_mut().insert(key, r);
        r
    }

    fn contains_uncached(&self, t: &Type, g: &Hypergraph<Symbol>, code: &[u8]) -> Truth {
        match t.kind() {
            TypeKind::Primitive(p) => Truth::from_bool(self.w.contains_primitive(p, code)),
            TypeKind::Product(m) => {
                let mut verdict = Truth::False;
                for dec in enumerate_decompositions(g, m, Apportionment::Exhaustive) {
                    let mut all = Truth::True;
                    for (e, part) in m.edges().iter().zip(&dec.parts) {
                        match self.contains(&e.label, part) {
                            Truth::True => {}
                            Truth::False => {
                                all = Truth::False;
                                break;
                            }
                            Truth::Undecided => all = Truth::Undecided,
                        }
                    }
                    match all {
                        Truth::True => return Truth::True,
                        Truth::Undecided => verdict = Truth::Undecided,
                        Truth::False => {}
                    }
                }
                verdict
            }
            TypeKind::Division { num, den, hole } => {
                let mut langs = Vec::new();
                for (d, e) in den.edges().iter().enumerate() {
                    if d == *hole {
                        langs.push(vec![g.clone()]);
                        continue;
                    }
                    match self.enumerate(e.label.as_type().expect("only the hole is unlabeled")) {
                        Ok(l) if l.is_empty() => return Truth::True,
                        Ok(l) => langs.push(l.into_values().collect()),
                        Err(_) => return Truth::Undecided,
                    }
                }
                let mut verdict = Truth::True;
                let mut stop = false;
                for_each_tuple(&langs, |tuple| {
                    if stop {
                        return;
                    }
                    let x = den.instantiate(tuple).expect("denotations are rank-matched");
                    match self.contains(num, &x) {
                        Truth::True => {}
                        Truth::False => {
                            verdict = Truth::False;
                            stop = true;
                        }
                        Truth::Undecided => verdict = Truth::Undecided,
                    }
                });
                verdict
            }
        }
    }

    /// `w̄(H → A)`: `w̄(×(H)) ⊆ w̄(A)`.
    pub fn holds(&self, s: &Sequent) -> Truth {
        let Ok(lang) = self.instances(&s.antecedent) else { return Truth::Undecided };
        let mut verdict = Truth::True;
        for g in lang.values() {
            match self.contains(&s.succedent, g) {
                Truth::True => {}
                Truth::False => return Truth::False,
                Truth::Undecided => verdict = Truth::Undecided,
            }
        }
        verdict
    }
}

/// Calls `f` on every tuple of the cartesian product of `sets`.
fn for_each_tuple<T>(sets: &[Vec<T>], mut f: impl FnMut(&[&T])) {
    if sets.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; sets.len()];
    loop {
        let tuple: Vec<&T> = idx.iter().zip(sets).map(|(&i, s)| &s[i]).collect();
        f(&tuple);
        let mut k = 0;
        loop {
            if k == sets.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < sets[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

pub fn denotation_enumerate(w: &Valuation, t: &Type) -> Result<Vec<Hypergraph<Symbol>>, NotEnumerable> {
    Evaluator::new(w).enumerate(t).map(|l| l.into_values().collect())
}

pub fn denotation_contains(w: &Valuation, t: &Type, g: &Hypergraph<Symbol>) -> Truth {
    Evaluator::new(w).contains(t, g)
}

pub fn sequent_holds(w: &Valuation, s: &Sequent) -> Truth {
    Evaluator::new(w).holds(s)
}

/// Shapes of random valuations.
#[derive(Clone, Debug)]
pub struct ValuationShape {
    pub alphabet: Vec<Symbol>,
    /// Graphs per primitive, at least one.
    pub max_graphs: usize,
    pub max_edges: usize,
    /// Nodes beyond the external ones.
    pub max_inner_nodes: usize,
}

impl Default for ValuationShape {
    fn default() -> Self {
        ValuationShape {
            alphabet: vec![Symbol::new("a", 2), Symbol::new("b", 2), Symbol::new("c", 1)],
            max_graphs: 2,
            max_edges: 2,
            max_inner_nodes: 1,
        }
    }
}

impl ValuationShape {
    /// A random graph of rank `rank`. Rank-2 graphs are string graphs over
    /// the rank-2 letters half of the time.
    pub fn random_graph(&self, rank: usize, rng: &mut impl Rng) -> Hypergraph<Symbol> {
        let binary: Vec<&Symbol> = self.alphabet.iter().filter(|s| s.rank() == 2).collect();
        if rank == 2 && !binary.is_empty() && rng.gen_bool(0.5) {
            let len = rng.gen_range(1..=self.max_edges.max(1));
            let word: Vec<Symbol> = (0..len).map(|_| (*binary.choose(rng).unwrap()).clone()).collect();
            return Hypergraph::string_graph(word).expect("binary letters");
        }
        let n = rank + rng.gen_range(0..=self.max_inner_nodes);
        let mut nodes: Vec<usize> = (0..n).collect();
        nodes.shuffle(rng);
        let ext = nodes[..rank].to_vec();
        let usable: Vec<&Symbol> = self.alphabet.iter().filter(|s| s.rank() <= n).collect();
        let mut edges = Vec::new();
        if !usable.is_empty() {
            for _ in 0..rng.gen_range(0..=self.max_edges) {
                let label = (*usable.choose(rng).unwrap()).clone();
                let mut att: Vec<usize> = (0..n).collect();
                att.shuffle(rng);
                att.truncate(label.rank());
                edges.push(Edge { label, att });
            }
        }
        Hypergraph::from_parts(n, edges, ext)
    }

    pub fn random_valuation(&self, prims: &[Symbol], rng: &mut impl Rng) -> Valuation {
        let mut w = Valuation::new();
        for p in prims {
            let k = rng.gen_range(1..=self.max_graphs.max(1));
            let graphs: Vec<_> = (0..k).map(|_| self.random_graph(p.rank(), rng)).collect();
            w.assignment.insert(p.clone(), language(graphs));
        }
        w
    }
}

/// The primitive types occurring in `s`, without repetition.
pub fn sequent_primitives(s: &Sequent) -> Vec<Symbol> {
    let mut out = Vec::new();
    for e in s.antecedent.edges() {
        e.label.primitives(&mut out);
    }
    s.succedent.primitives(&mut out);
    out.sort();
    out.dedup();
    out
}

/// Valuation number `i` of the stream seeded by `seed`.
pub fn seeded_valuation(shape: &ValuationShape, prims: &[Symbol], seed: u64, i: u64) -> Valuation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    shape.random_valuation(prims, &mut rng)
}

/// Truth of `s` under `count` seeded random valuations, evaluated in
/// parallel; results are in stream order.
pub fn holds_under_random(s: &Sequent, shape: &ValuationShape, count: u64, seed: u64) -> Vec<Truth> {
    let prims = sequent_primitives(s);
    (0..count)
        .into_par_iter()
        .map(|i| sequent_holds(&seeded_valuation(shape, &prims, seed, i), s))
        .collect()
}

/// Best effort: the first of `trials` seeded random valuations refuting `s`.
pub fn find_countermodel(s: &Sequent, shape: &ValuationShape, trials: u64, seed: u64) -> Option<Valuation> {
    let prims = sequent_primitives(s);
    (0..trials)
        .into_par_iter()
        .map(|i| seeded_valuation(shape, &prims, seed, i))
        .find_first(|w| sequent_holds(w, s) == Truth::False)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::string_denominator;

    fn sym(n: &str) -> Symbol {
        Symbol::new(n, 2)
    }

    fn sg(w: &str) -> Hypergraph<Symbol> {
        Hypergraph::string_graph(w.chars().map(|c| sym(&c.to_string()))).unwrap()
    }

    fn p2(n: &str) -> Type {
        Type::primitive(n, 2)
    }

    #[test]
    fn primitives_and_products() {
        let mut w = Valuation::new();
        w.set(&p2("p"), vec![sg("a")]).unwrap();
        assert_eq!(denotation_enumerate(&w, &p2("p")).unwrap().len(), 1);
        assert!(w.set(&Type::primitive("q", 1), vec![sg("a")]).is_err());

        let mut w = Valuation::new();
        w.set(&p2("str"), vec![sg("a"), sg("aa")]).unwrap();
        // Two parallel strings between the same two external nodes.
        let mut m = Hypergraph::discrete(2, vec![0, 1]);
        m.add_edge(p2("str"), vec![0, 1]);
        m.add_edge(p2("str"), vec![0, 1]);
        let t = Type::product(m).unwrap();
        assert_eq!(denotation_enumerate(&w, &t).unwrap().len(), 3);

        let empty = Type::product(Hypergraph::discrete(2, vec![0, 1])).unwrap();
        let d = denotation_enumerate(&w, &empty).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].node_count(), d[0].edge_count()), (2, 0));
    }

    #[test]
    fn division_membership() {
        // w(s) = {SG(b), SG(abb)}, w(p) = {SG(b)}.
        let mut w = Valuation::new();
        w.set(&p2("s"), vec![sg("b"), sg("abb")]).unwrap();
        w.set(&p2("p"), vec![sg("b")]).unwrap();
        // s ÷ SG($ p p): the only tuple gives SG(abb) for G = SG(a).
        let q = Type::division(p2("s"), string_denominator(&[None, Some(p2("p")), Some(p2("p"))]).unwrap()).unwrap();
        assert_eq!(denotation_contains(&w, &q, &sg("a")), Truth::True);
        assert_eq!(denotation_contains(&w, &q, &sg("b")), Truth::False);
        let all = denotation_enumerate(&w, &q).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_isomorphic(&sg("a")));
        // s ÷ SG($ s p): the tuple (SG(abb), SG(b)) gives SG(aabbb) ∉ w(s).
        let q = Type::division(p2("s"), string_denominator(&[None, Some(p2("s")), Some(p2("p"))]).unwrap()).unwrap();
        assert_eq!(denotation_contains(&w, &q, &sg("a")), Truth::False);
        assert!(denotation_enumerate(&w, &q).unwrap().is_empty());

        // A division inside a denominator over an empty language.
        let inner = Type::division(p2("r"), string_denominator(&[None, Some(p2("r"))]).unwrap()).unwrap();
        let outer = Type::division(p2("s"), string_denominator(&[None, Some(inner)]).unwrap()).unwrap();
        assert_eq!(denotation_contains(&w, &outer, &sg("a")), Truth::Undecided);
    }

    #[test]
    fn truth_of_sequents() {
        let mut w = Valuation::new();
        w.set(&p2("p"), vec![sg("a")]).unwrap();
        let axiom = Sequent::new(Hypergraph::handle(p2("p")), p2("p")).unwrap();
        assert_eq!(sequent_holds(&w, &axiom), Truth::True);
        let bad = Sequent::new(Hypergraph::handle(p2("p")), p2("q")).unwrap();
        assert_eq!(sequent_holds(&w, &bad), Truth::False);
        assert!(find_countermodel(&bad, &ValuationShape::default(), 20, 0).is_some());
        assert!(holds_under_random(&axiom, &ValuationShape::default(), 10, 3).iter().all(|t| *t == Truth::True));
    }
}

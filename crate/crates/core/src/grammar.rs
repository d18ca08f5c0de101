//! HL-grammars with membership by relabeling and proof search; hyperedge
//! replacement grammars with bounded generation; conversion of HRGs in weak
//! Greibach normal form into HL-grammars.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use thiserror::Error;

use crate::calculus::{Decision, Derivation, Prover, SearchStats, Verdict};
use crate::hypergraph::{Hypergraph, Label, Symbol, Violation};
use crate::types::{Sequent, Slot, Type};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("label {label} has rank {} but is paired with a type of rank {type_rank}", .label.rank())]
    RankMismatch { label: Symbol, type_rank: usize },
    #[error("label {0} is not in the alphabet")]
    UnknownLabel(Symbol),
    #[error("symbol {0} is both terminal and nonterminal")]
    NotDisjoint(Symbol),
    #[error("production {index}: {reason}")]
    BadProduction { index: usize, reason: String },
    #[error("production {0} does not have exactly one designated terminal edge")]
    NotWgnf(usize),
    #[error("graph is malformed: {0}")]
    Graph(#[from] Violation),
}

/// `⟨Σ, S, ▷⟩`.
#[derive(Clone, Debug)]
pub struct HlGrammar {
    alphabet: Vec<Symbol>,
    start: Type,
    pairs: Vec<(Symbol, Type)>,
    by_label: BTreeMap<Symbol, Vec<Type>>,
}

impl HlGrammar {
    pub fn new(alphabet: Vec<Symbol>, start: Type, pairs: Vec<(Symbol, Type)>) -> Result<HlGrammar, GrammarError> {
        let mut by_label: BTreeMap<Symbol, Vec<Type>> = alphabet.iter().map(|a| (a.clone(), Vec::new())).collect();
        for (a, t) in &pairs {
            if a.rank() != t.rank() {
                return Err(GrammarError::RankMismatch { label: a.clone(), type_rank: t.rank() });
            }
            let slot = by_label.get_mut(a).ok_or_else(|| GrammarError::UnknownLabel(a.clone()))?;
            if !slot.contains(t) {
                slot.push(t.clone());
            }
        }
        Ok(HlGrammar { alphabet, start, pairs, by_label })
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn start(&self) -> &Type {
        &self.start
    }

    pub fn pairs(&self) -> &[(Symbol, Type)] {
        &self.pairs
    }

    /// `{T | a ▷ T}`.
    pub fn candidates(&self, a: &Symbol) -> &[Type] {
        self.by_label.get(a).map_or(&[], Vec::as_slice)
    }

    /// `ts(HGr)`, the distinct types in the range of `▷`.
    pub fn type_set(&self) -> Vec<Type> {
        let set: BTreeSet<Type> = self.pairs.iter().map(|(_, t)| t.clone()).collect();
        set.into_iter().collect()
    }

    /// Whether `f` relabels `g` along `▷`.
    pub fn respects(&self, g: &Hypergraph<Symbol>, f: &[Type]) -> bool {
        f.len() == g.edge_count() && g.edges().iter().zip(f).all(|(e, t)| self.candidates(&e.label).contains(t))
    }
}

/// A relabeling `f_G` and a derivation of `f_G(G) → S`.
#[derive(Clone, Debug)]
pub struct Membership {
    pub relabeling: Vec<Type>,
    pub derivation: Derivation,
}

#[derive(Clone, Debug)]
pub enum MemberVerdict {
    Member(Box<Membership>),
    NotMember,
    /// Some relabeling could not be decided within the prover's budget and
    /// none was found derivable.
    BudgetExceeded(SearchStats),
}

impl MemberVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, MemberVerdict::Member(_))
    }
}

/// `G ∈ L(HGr)`: tries every relabeling along `▷`, edges with the fewest
/// candidates first, skipping relabelings whose sequent is unbalanced. The
/// prover's budget applies to each relabeled sequent; its memo is shared.
pub fn hl_member(grammar: &HlGrammar, graph: &Hypergraph<Symbol>, prover: &Prover) -> Result<MemberVerdict, GrammarError> {
    graph.validate()?;
    for e in graph.edges() {
        if !grammar.by_label.contains_key(&e.label) {
            return Err(GrammarError::UnknownLabel(e.label.clone()));
        }
    }
    if graph.rank() != grammar.start.rank() {
        return Ok(MemberVerdict::NotMember);
    }
    let cands: Vec<&[Type]> = graph.edges().iter().map(|e| grammar.candidates(&e.label)).collect();
    if cands.iter().any(|c| c.is_empty()) {
        return Ok(MemberVerdict::NotMember);
    }
    let mut order: Vec<usize> = (0..graph.edge_count()).collect();
    order.sort_by_key(|&e| cands[e].len());

    let mut choice = vec![0usize; order.len()];
    let mut tried = HashSet::new();
    let mut exceeded: Option<SearchStats> = None;
    loop {
        let f: Vec<Type> = {
            let mut f = vec![None; graph.edge_count()];
            for (i, &e) in order.iter().enumerate() {
                f[e] = Some(cands[e][choice[i]].clone());
            }
            f.into_iter().map(Option::unwrap).collect()
        };
        let mut balance = grammar.start.atoms().clone();
        for t in &f {
            balance.sub_all(t.atoms());
        }
        if balance.is_zero() {
            let antecedent = graph.map_labels(|e, _| f[e].clone());
            let seq = Sequent { antecedent, succedent: grammar.start.clone() };
            if tried.insert(seq.key()) {
                match prover.decide(&seq).expect("relabeling preserves ranks") {
                    Decision::Derivable => {
                        let Verdict::Proved(derivation) = prover.derive(&seq).expect("valid") else {
                            unreachable!("derivability is memoized")
                        };
                        return Ok(MemberVerdict::Member(Box::new(Membership { relabeling: f, derivation })));
                    }
                    Decision::NotDerivable => {}
                    Decision::BudgetExceeded(st) => exceeded = Some(st),
                }
            }
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(match exceeded {
                    Some(st) => MemberVerdict::BudgetExceeded(st),
                    None => MemberVerdict::NotMember,
                });
            }
            choice[i] += 1;
            if choice[i] < cands[order[i]].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// A hyperedge replacement grammar. *Fixed* labels are terminals that do
/// not count towards weak Greibach normal form and are translated to
/// dedicated primitive types.
#[derive(Clone, Debug)]
pub struct Hrg {
    nonterminals: Vec<Symbol>,
    terminals: Vec<Symbol>,
    fixed: Vec<Symbol>,
    productions: Vec<(Symbol, Hypergraph<Symbol>)>,
    start: Symbol,
}

impl Hrg {
    /// Fixed labels are added to the terminals if missing.
    pub fn new(
        nonterminals: Vec<Symbol>,
        mut terminals: Vec<Symbol>,
        fixed: Vec<Symbol>,
        productions: Vec<(Symbol, Hypergraph<Symbol>)>,
        start: Symbol,
    ) -> Result<Hrg, GrammarError> {
        for f in &fixed {
            if !terminals.contains(f) {
                terminals.push(f.clone());
            }
        }
        for t in &terminals {
            if nonterminals.iter().any(|n| n.name() == t.name()) {
                return Err(GrammarError::NotDisjoint(t.clone()));
            }
        }
        if !nonterminals.contains(&start) {
            return Err(GrammarError::UnknownLabel(start));
        }
        for (index, (lhs, rhs)) in productions.iter().enumerate() {
            let bad = |reason: String| GrammarError::BadProduction { index, reason };
            if !nonterminals.contains(lhs) {
                return Err(bad(format!("left-hand side {lhs} is not a nonterminal")));
            }
            rhs.validate().map_err(|v| bad(v.to_string()))?;
            if rhs.rank() != lhs.rank() {
                return Err(bad(format!("right-hand side has rank {}, {lhs} has rank {}", rhs.rank(), lhs.rank())));
            }
            for e in rhs.edges() {
                if !nonterminals.contains(&e.label) && !terminals.contains(&e.label) {
                    return Err(bad(format!("label {} is not declared", e.label)));
                }
            }
        }
        Ok(Hrg { nonterminals, terminals, fixed, productions, start })
    }

    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[Symbol] {
        &self.terminals
    }

    pub fn fixed(&self) -> &[Symbol] {
        &self.fixed
    }

    pub fn productions(&self) -> &[(Symbol, Hypergraph<Symbol>)] {
        &self.productions
    }

    pub fn start(&self) -> &Symbol {
        &self.start
    }

    fn is_nonterminal(&self, s: &Symbol) -> bool {
        self.nonterminals.contains(s)
    }

    fn designated(&self, rhs: &Hypergraph<Symbol>) -> Vec<usize> {
        (0..rhs.edge_count())
            .filter(|&e| {
                let l = rhs.label(e);
                self.terminals.contains(l) && !self.fixed.contains(l)
            })
            .collect()
    }

    /// Every right-hand side has exactly one terminal edge that is not fixed.
    pub fn is_wgnf(&self) -> bool {
        self.productions.iter().all(|(_, rhs)| self.designated(rhs).len() == 1)
    }

    fn max_rhs_edges(&self) -> usize {
        self.productions.iter().map(|(_, r)| r.edge_count()).max().unwrap_or(0)
    }
}

/// Limits for [`hrg_generate_with`]; `None` disables a prune.
struct Limits<'a> {
    max_edges: usize,
    max_steps: usize,
    max_nodes: Option<usize>,
    /// Terminal label counts the result may not exceed.
    terminal_budget: Option<&'a BTreeMap<Symbol, usize>>,
}

/// All terminal graphs derivable from the start handle in at most
/// `max_steps` replacements with at most `max_edges` edges at every step,
/// as canonical graphs without duplicates.
pub fn hrg_generate(g: &Hrg, max_edges: usize, max_steps: usize) -> Vec<Hypergraph<Symbol>> {
    hrg_generate_with(g, &Limits { max_edges, max_steps, max_nodes: None, terminal_budget: None })
}

fn hrg_generate_with(g: &Hrg, lim: &Limits<'_>) -> Vec<Hypergraph<Symbol>> {
    let start = Hypergraph::handle(g.start.clone());
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut results: BTreeMap<Vec<u8>, Hypergraph<Symbol>> = BTreeMap::new();
    seen.insert(start.canonical_code());
    let mut frontier = vec![start];
    for _ in 0..lim.max_steps {
        let mut next = Vec::new();
        for form in &frontier {
            for e in 0..form.edge_count() {
                let label = form.label(e);
                if !g.is_nonterminal(label) {
                    continue;
                }
                for (lhs, rhs) in &g.productions {
                    if lhs != label {
                        continue;
                    }
                    let new = form.replace(e, rhs).expect("production ranks match");
                    if new.edge_count() > lim.max_edges || lim.max_nodes.is_some_and(|n| new.node_count() > n) {
                        continue;
                    }
                    if let Some(budget) = lim.terminal_budget {
                        let mut counts: BTreeMap<&Symbol, usize> = BTreeMap::new();
                        for edge in new.edges() {
                            if !g.is_nonterminal(&edge.label) {
                                *counts.entry(&edge.label).or_default() += 1;
                            }
                        }
                        if counts.iter().any(|(l, &c)| budget.get(*l).copied().unwrap_or(0) < c) {
                            continue;
                        }
                    }
                    let code = new.canonical_code();
                    if !seen.insert(code.clone()) {
                        continue;
                    }
                    if new.edges().iter().all(|x| !g.is_nonterminal(&x.label)) {
                        results.insert(code, new.canonical_graph());
                    } else {
                        next.push(new);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    results.into_values().collect()
}

/// Step bound used by [`hrg_member`] for a graph with `n` edges.
pub fn hrg_step_bound(g: &Hrg, n: usize) -> usize {
    if g.is_wgnf() {
        n
    } else {
        n * (1 + g.max_rhs_edges())
    }
}

/// Bounded membership: generation with edge bound `|E_G|`, the step bound
/// of [`hrg_step_bound`], and the exact prunes that replacement never
/// removes nodes or terminal edges.
pub fn hrg_member(g: &Hrg, graph: &Hypergraph<Symbol>) -> bool {
    if graph.edges().iter().any(|e| !g.terminals.contains(&e.label)) {
        return false;
    }
    if graph.rank() != g.start.rank() {
        return false;
    }
    let mut budget: BTreeMap<Symbol, usize> = BTreeMap::new();
    for e in graph.edges() {
        *budget.entry(e.label.clone()).or_default() += 1;
    }
    let n = graph.edge_count();
    let lim = Limits {
        max_edges: n,
        max_steps: hrg_step_bound(g, n),
        max_nodes: Some(graph.node_count()),
        terminal_budget: Some(&budget),
    };
    let code = graph.canonical_code();
    hrg_generate_with(g, &lim).iter().any(|h| h.canonical_code() == code)
}

/// Name of the primitive type standing for a fixed label.
pub fn fixed_primitive_name(l: &Symbol) -> String {
    format!("p_{}", l.name())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConvertOptions {
    /// Emit `a ▷ X ÷ ($-handle)` instead of `a ▷ X` for productions whose
    /// right-hand side is a terminal handle.
    pub divide_by_handles: bool,
}

/// The HL-grammar of an HRG in weak Greibach normal form: a production
/// `X → H` with designated terminal edge `e` labeled `a` gives
/// `a ▷ X ÷ H[e ≔ $]`, nonterminals read as primitive types of the same name
/// and fixed labels `l` as `p_l`. Fixed labels get `l ▷ p_l`.
pub fn wgnf_to_hl(g: &Hrg, opts: ConvertOptions) -> Result<HlGrammar, GrammarError> {
    let prim = |s: &Symbol| -> Type {
        if g.fixed.contains(s) {
            Type::primitive(fixed_primitive_name(s), s.rank())
        } else {
            Type::primitive(s.name(), s.rank())
        }
    };
    let mut pairs = Vec::new();
    for (index, (lhs, rhs)) in g.productions.iter().enumerate() {
        let designated = g.designated(rhs);
        let [e] = designated.as_slice() else { return Err(GrammarError::NotWgnf(index)) };
        let a = rhs.label(*e).clone();
        let den: Hypergraph<Slot> =
            rhs.map_labels(|d, l| if d == *e { Slot::Hole(l.rank()) } else { Slot::Ty(prim(l)) });
        let x = prim(lhs);
        let ty = if den.as_handle().is_some() && !opts.divide_by_handles {
            x
        } else {
            Type::division(x, den).map_err(|v| GrammarError::BadProduction { index, reason: v.to_string() })?
        };
        pairs.push((a, ty));
    }
    for l in &g.fixed {
        pairs.push((l.clone(), prim(l)));
    }
    HlGrammar::new(g.terminals.clone(), prim(&g.start), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2(n: &str) -> Symbol {
        Symbol::new(n, 2)
    }

    fn sg(word: &[&str]) -> Hypergraph<Symbol> {
        Hypergraph::string_graph(word.iter().map(|w| s2(w))).unwrap()
    }

    fn string_hrg() -> Hrg {
        Hrg::new(
            vec![s2("S"), s2("P")],
            vec![s2("a"), s2("b")],
            vec![],
            vec![(s2("S"), sg(&["a", "S", "P"])), (s2("S"), sg(&["b"])), (s2("P"), sg(&["b"]))],
            s2("S"),
        )
        .unwrap()
    }

    #[test]
    fn generation() {
        let out = hrg_generate(&string_hrg(), 7, 20);
        let want = [sg(&["b"]), sg(&["a", "b", "b"]), sg(&["a", "a", "b", "b", "b"]), sg(&["a", "a", "a", "b", "b", "b", "b"])];
        assert_eq!(out.len(), 4);
        for w in &want {
            assert!(out.iter().any(|g| g.is_isomorphic(w)));
        }
        let dead = Hrg::new(vec![s2("S")], vec![s2("a")], vec![], vec![(s2("S"), sg(&["a", "S"]))], s2("S")).unwrap();
        assert!(hrg_generate(&dead, 6, 10).is_empty());
    }

    #[test]
    fn membership_and_normal_form() {
        let g = string_hrg();
        assert!(g.is_wgnf());
        assert!(hrg_member(&g, &sg(&["a", "a", "b", "b", "b"])));
        assert!(!hrg_member(&g, &sg(&["a", "b"])));
        assert!(!hrg_member(&g, &sg(&["c"])));
        let two = Hrg::new(vec![s2("S")], vec![s2("a"), s2("b")], vec![], vec![(s2("S"), sg(&["a", "b"]))], s2("S")).unwrap();
        assert!(!two.is_wgnf());
        assert!(matches!(wgnf_to_hl(&two, ConvertOptions::default()), Err(GrammarError::NotWgnf(0))));
    }

    #[test]
    fn conversion_of_the_string_grammar() {
        let hl = wgnf_to_hl(&string_hrg(), ConvertOptions::default()).unwrap();
        assert_eq!(hl.type_set().len(), 3);
        let b = hl.candidates(&s2("b"));
        assert!(b.contains(&Type::primitive("S", 2)) && b.contains(&Type::primitive("P", 2)));
        let a = &hl.candidates(&s2("a"))[0];
        assert_eq!(a.connectives(), 1);
        let prover = Prover::new();
        assert!(hl_member(&hl, &sg(&["a", "b", "b"]), &prover).unwrap().is_member());
        assert!(!hl_member(&hl, &sg(&["a", "b"]), &prover).unwrap().is_member());
        let flagged = wgnf_to_hl(&string_hrg(), ConvertOptions { divide_by_handles: true }).unwrap();
        assert!(flagged.candidates(&s2("b")).iter().all(|t| t.as_division().is_some()));
        assert!(hl_member(&flagged, &sg(&["a", "b", "b"]), &prover).unwrap().is_member());
    }

    #[test]
    fn grammar_checks() {
        let p = Type::primitive("p", 1);
        assert!(matches!(
            HlGrammar::new(vec![s2("a")], p.clone(), vec![(s2("a"), p.clone())]),
            Err(GrammarError::RankMismatch { .. })
        ));
        let g = HlGrammar::new(vec![s2("a")], Type::primitive("s", 2), vec![]).unwrap();
        assert!(g.type_set().is_empty());
        assert!(matches!(hl_member(&g, &sg(&["z"]), &Prover::new()), Err(GrammarError::UnknownLabel(_))));
        assert!(!hl_member(&g, &sg(&["a"]), &Prover::new()).unwrap().is_member());
    }
}

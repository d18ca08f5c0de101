//! Backward proof search, derivation trees and their verification.
//!
//! Search normalizes eagerly (the rules `(×→)` and `(→÷)` are invertible),
//! then tries the axiom, every `(÷→)` instance and, for a product succedent,
//! every `(→×)` instance. Every backward step removes exactly one connective,
//! so the space is finite. Results of normalized subgoals are memoized on
//! canonical sequent keys in a table that can be shared between provers and
//! threads.

use std::ops::ControlFlow;
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::matching::{for_each_decomposition, for_each_extraction, reassemble_div_left, Apportionment, Embedding};
use crate::types::{Sequent, Type, TypeViolation};

pub const DEFAULT_MAX_NODES: u64 = 1_000_000;

/// Limits on one search. `max_depth: None` uses the connective count of the
/// goal plus its edge count plus two, which the search can never exceed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_depth: Option<usize>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: DEFAULT_MAX_NODES, max_depth: None }
    }
}

impl Budget {
    pub fn depth_for(&self, s: &Sequent) -> usize {
        self.max_depth.unwrap_or(s.connectives() + s.antecedent.edge_count() + 2)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub expanded: u64,
    pub deepest: usize,
    pub memo_entries: usize,
}

/// Which rule concludes a derivation node, with the choices that instantiate it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum RuleData {
    Axiom,
    /// Premises: the context sequent first, then one sequent per non-`$`
    /// denominator edge in denominator order. `new_edge` is the edge of the
    /// context antecedent labeled by the numerator; `node_map` sends
    /// denominator nodes to conclusion nodes.
    DivLeft { pivot: EdgeId, new_edge: EdgeId, node_map: Vec<NodeId> },
    DivRight,
    TimesLeft { edge: EdgeId },
    /// One premise per body edge in body order; `node_map` sends body nodes to
    /// conclusion nodes.
    TimesRight { node_map: Vec<NodeId> },
}

impl RuleData {
    pub fn name(&self) -> &'static str {
        match self {
            RuleData::Axiom => "Axiom",
            RuleData::DivLeft { .. } => "DivLeft",
            RuleData::DivRight => "DivRight",
            RuleData::TimesLeft { .. } => "TimesLeft",
            RuleData::TimesRight { .. } => "TimesRight",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Derivation {
    pub conclusion: Sequent,
    pub rule: RuleData,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Derivation::height).max().unwrap_or(0)
    }

    /// Number of nodes concluded by each rule, in the order Axiom, DivLeft,
    /// DivRight, TimesLeft, TimesRight.
    pub fn rule_counts(&self) -> [usize; 5] {
        let mut c = [0; 5];
        self.count_into(&mut c);
        c
    }

    fn count_into(&self, c: &mut [usize; 5]) {
        let i = match self.rule {
            RuleData::Axiom => 0,
            RuleData::DivLeft { .. } => 1,
            RuleData::DivRight => 2,
            RuleData::TimesLeft { .. } => 3,
            RuleData::TimesRight { .. } => 4,
        };
        c[i] += 1;
        for p in &self.premises {
            p.count_into(c);
        }
    }
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Proved(Derivation),
    NotDerivable,
    BudgetExceeded(SearchStats),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }
}

/// Derivability without a tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Derivable,
    NotDerivable,
    BudgetExceeded(SearchStats),
}

pub type Memo = DashMap<Vec<u8>, bool>;

#[derive(Debug)]
struct Exceeded;

struct Run {
    expanded: u64,
    deepest: usize,
    max_nodes: u64,
    max_depth: usize,
}

/// Proof search with a shareable memo table.
#[derive(Clone)]
pub struct Prover {
    memo: Arc<Memo>,
    budget: Budget,
    mode: Apportionment,
    eager: bool,
}

impl Default for Prover {
    fn default() -> Self {
        Prover::new()
    }
}

impl Prover {
    pub fn new() -> Prover {
        Prover { memo: Arc::new(DashMap::new()), budget: Budget::default(), mode: Apportionment::Minimal, eager: true }
    }

    /// With `false`, `(→÷)` and `(×→)` are searched like the other rules
    /// instead of being applied eagerly. Slower, but independent of their
    /// reversibility. Do not share a memo between the two strategies.
    pub fn with_eager_normalization(mut self, eager: bool) -> Prover {
        self.eager = eager;
        self
    }

    fn goal(&self, s: &Sequent) -> Sequent {
        if self.eager {
            normalize(s)
        } else {
            s.clone()
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Prover {
        self.budget = budget;
        self
    }

    pub fn with_mode(mut self, mode: Apportionment) -> Prover {
        self.mode = mode;
        self
    }

    pub fn with_memo(mut self, memo: Arc<Memo>) -> Prover {
        self.memo = memo;
        self
    }

    pub fn memo(&self) -> &Arc<Memo> {
        &self.memo
    }

    pub fn budget(&self) -> Budget {
        self.budget
    }

    pub fn mode(&self) -> Apportionment {
        self.mode
    }

    pub fn decide(&self, s: &Sequent) -> Result<Decision, TypeViolation> {
        s.validate()?;
        let mut run = Run {
            expanded: 0,
            deepest: 0,
            max_nodes: self.budget.max_nodes,
            max_depth: self.budget.depth_for(s),
        };
        Ok(match self.prove(&self.goal(s), 0, &mut run) {
            Ok(true) => Decision::Derivable,
            Ok(false) => Decision::NotDerivable,
            Err(Exceeded) => Decision::BudgetExceeded(self.stats(&run)),
        })
    }

    pub fn derive(&self, s: &Sequent) -> Result<Verdict, TypeViolation> {
        Ok(match self.decide(s)? {
            Decision::Derivable => Verdict::Proved(self.rebuild(s.clone())),
            Decision::NotDerivable => Verdict::NotDerivable,
            Decision::BudgetExceeded(st) => Verdict::BudgetExceeded(st),
        })
    }

    fn stats(&self, run: &Run) -> SearchStats {
        SearchStats { expanded: run.expanded, deepest: run.deepest, memo_entries: self.memo.len() }
    }

    fn prove(&self, s: &Sequent, depth: usize, run: &mut Run) -> Result<bool, Exceeded> {
        let key = s.key();
        if let Some(v) = self.memo.get(&key) {
            return Ok(*v);
        }
        run.expanded += 1;
        run.deepest = run.deepest.max(depth);
        if run.expanded > run.max_nodes || depth > run.max_depth {
            return Err(Exceeded);
        }
        let result = self.expand(s, depth, run)?;
        self.memo.insert(key, result);
        Ok(result)
    }

    fn expand(&self, s: &Sequent, depth: usize, run: &mut Run) -> Result<bool, Exceeded> {
        if !s.balance().is_zero() {
            return Ok(false);
        }
        if is_axiom(s) {
            return Ok(true);
        }
        let mut outcome: Result<bool, Exceeded> = Ok(false);
        let _ = self.instances(s, &mut |premises: Vec<Sequent>, _: RuleData| {
            assert!(premises.iter().map(Sequent::connectives).sum::<usize>() < s.connectives());
            let mut normal: Vec<Sequent> = premises.iter().map(|p| self.goal(p)).collect();
            normal.sort_by_key(|p| p.antecedent.edge_count());
            for p in &normal {
                match self.prove(p, depth + 1, run) {
                    Ok(true) => {}
                    Ok(false) => return ControlFlow::Continue(()),
                    Err(e) => {
                        outcome = Err(e);
                        return ControlFlow::Break(());
                    }
                }
            }
            outcome = Ok(true);
            ControlFlow::Break(())
        });
        outcome
    }

    /// Every `(÷→)` and `(→×)` instance whose premises satisfy the count
    /// balance, in search order, preceded by the `(→÷)` and `(×→)`
    /// instances when normalization is not eager. Premises are returned
    /// unnormalized; for `(÷→)` the context premise comes first.
    fn instances(
        &self,
        s: &Sequent,
        visit: &mut dyn FnMut(Vec<Sequent>, RuleData) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let ant = &s.antecedent;
        if !self.eager {
            if let Some((num, _, _)) = s.succedent.as_division() {
                let antecedent = s.succedent.plug(ant).expect("ranks agree in a valid sequent");
                visit(vec![Sequent { antecedent, succedent: num.clone() }], RuleData::DivRight)?;
            }
            for edge in 0..ant.edge_count() {
                if let Some(body) = ant.label(edge).as_product() {
                    let antecedent = ant.replace(edge, body).expect("a product has the rank of its body");
                    visit(vec![Sequent { antecedent, succedent: s.succedent.clone() }], RuleData::TimesLeft { edge })?;
                }
            }
        }
        for pivot in 0..ant.edge_count() {
            let t = ant.label(pivot);
            let Some((num, den, hole)) = t.as_division() else { continue };
            for_each_extraction(ant, pivot, den, hole, self.mode, |emb: &Embedding| {
                for (d, part) in emb.parts.iter().enumerate() {
                    if let Some(part) = part {
                        let mut b = den.label(d).as_type().unwrap().atoms().clone();
                        for &e in &part.edges {
                            b.sub_all(ant.label(e).atoms());
                        }
                        if !b.is_zero() {
                            return ControlFlow::Continue(());
                        }
                    }
                }
                let context = emb.context.as_ref().unwrap().build(ant, num.clone());
                let new_edge = context.edge_count() - 1;
                let mut premises = vec![Sequent { antecedent: context, succedent: s.succedent.clone() }];
                for (d, part) in emb.parts.iter().enumerate() {
                    if let Some(part) = part {
                        premises.push(Sequent {
                            antecedent: part.build(ant),
                            succedent: den.label(d).as_type().unwrap().clone(),
                        });
                    }
                }
                visit(premises, RuleData::DivLeft { pivot, new_edge, node_map: emb.node_map.clone() })
            })?;
        }
        if let Some(body) = s.succedent.as_product() {
            for_each_decomposition(ant, body, self.mode, |emb: &Embedding| {
                for (m, part) in emb.parts.iter().enumerate() {
                    let part = part.as_ref().unwrap();
                    let mut b = body.label(m).atoms().clone();
                    for &e in &part.edges {
                        b.sub_all(ant.label(e).atoms());
                    }
                    if !b.is_zero() {
                        return ControlFlow::Continue(());
                    }
                }
                let premises = emb
                    .parts
                    .iter()
                    .enumerate()
                    .map(|(m, part)| Sequent {
                        antecedent: part.as_ref().unwrap().build(ant),
                        succedent: body.label(m).clone(),
                    })
                    .collect();
                visit(premises, RuleData::TimesRight { node_map: emb.node_map.clone() })
            })?;
        }
        ControlFlow::Continue(())
    }

    /// Rebuilds a tree for a sequent already known to be derivable, choosing
    /// rule instances whose normalized premises are recorded as derivable.
    fn rebuild(&self, s: Sequent) -> Derivation {
        if self.eager {
            if let Some((rule, premise)) = normalize_step(&s) {
                let sub = self.rebuild(premise);
                return Derivation { conclusion: s, rule, premises: vec![sub] };
            }
        }
        if is_axiom(&s) {
            return Derivation { conclusion: s, rule: RuleData::Axiom, premises: Vec::new() };
        }
        let mut chosen: Option<(Vec<Sequent>, RuleData)> = None;
        let _ = self.instances(&s, &mut |premises, rule| {
            let all = premises
                .iter()
                .all(|p| self.memo.get(&self.goal(p).key()).is_some_and(|v| *v));
            if all {
                chosen = Some((premises, rule));
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        let (premises, rule) = chosen.expect("a derivable sequent has an instance with derivable premises");
        let premises = premises.into_iter().map(|p| self.rebuild(p)).collect();
        Derivation { conclusion: s, rule, premises }
    }
}

/// `derive` with a fresh memo.
pub fn derive(s: &Sequent, budget: Budget) -> Result<Verdict, TypeViolation> {
    Prover::new().with_budget(budget).derive(s)
}

fn is_axiom(s: &Sequent) -> bool {
    s.succedent.is_primitive() && s.antecedent.as_handle().is_some_and(|l| *l == s.succedent)
}

/// One step of normalization: `(→÷)` read upwards if the succedent is a
/// division, otherwise `(×→)` read upwards on the first product edge.
pub fn normalize_step(s: &Sequent) -> Option<(RuleData, Sequent)> {
    if let Some((num, _, _)) = s.succedent.as_division() {
        let antecedent = s.succedent.plug(&s.antecedent).expect("ranks agree in a valid sequent");
        return Some((RuleData::DivRight, Sequent { antecedent, succedent: num.clone() }));
    }
    let ant = &s.antecedent;
    let edge = (0..ant.edge_count()).find(|&e| ant.label(e).as_product().is_some())?;
    let body = ant.label(edge).as_product().unwrap();
    let antecedent = ant.replace(edge, body).expect("a product has the rank of its body");
    Some((RuleData::TimesLeft { edge }, Sequent { antecedent, succedent: s.succedent.clone() }))
}

/// Applies [`normalize_step`] until neither rule applies. The result has no
/// product-labeled antecedent edge and a succedent that is not a division.
pub fn normalize(s: &Sequent) -> Sequent {
    let mut s = s.clone();
    if let Some((num, _, _)) = s.succedent.as_division() {
        let mut ant = s.succedent.plug(&s.antecedent).expect("valid sequent");
        let mut succ = num.clone();
        while let Some((n, _, _)) = succ.as_division() {
            ant = succ.plug(&ant).expect("valid sequent");
            succ = n.clone();
        }
        s = Sequent { antecedent: ant, succedent: succ };
    }
    if s.antecedent.edges().iter().all(|e| e.label.as_product().is_none()) {
        return s;
    }
    // Expand products, including those uncovered by expanding others.
    let mut ant = s.antecedent;
    loop {
        let products: Vec<EdgeId> = (0..ant.edge_count()).filter(|&e| ant.label(e).as_product().is_some()).collect();
        if products.is_empty() {
            break;
        }
        let bodies: Vec<Hypergraph<Type>> = products.iter().map(|&e| ant.label(e).as_product().unwrap().clone()).collect();
        let assignment: Vec<(EdgeId, &Hypergraph<Type>)> = products.iter().copied().zip(bodies.iter()).collect();
        ant = ant.replace_all(&assignment).expect("valid sequent");
    }
    Sequent { antecedent: ant, succedent: s.succedent }
}

pub fn is_normal(s: &Sequent) -> bool {
    normalize_step(s).is_none()
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid derivation at {}: {reason}", fmt_path(.path))]
pub struct CheckError {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub reason: String,
}

fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        "root".to_string()
    } else {
        path.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(".")
    }
}

/// Re-instantiates each rule schema from the recorded data and compares the
/// reassembled conclusion with the stated one up to isomorphism.
pub fn check_derivation(t: &Derivation) -> Result<(), CheckError> {
    let mut path = Vec::new();
    check_node(t, &mut path)
}

fn check_node(t: &Derivation, path: &mut Vec<usize>) -> Result<(), CheckError> {
    let fail = |reason: String, path: &Vec<usize>| Err(CheckError { path: path.clone(), reason });
    let c = &t.conclusion;
    if let Err(v) = c.validate() {
        return fail(format!("malformed conclusion: {v}"), path);
    }
    let prem = &t.premises;
    let ant = &c.antecedent;
    match &t.rule {
        RuleData::Axiom => {
            if !prem.is_empty() {
                return fail("axiom with premises".into(), path);
            }
            if !c.succedent.is_primitive() {
                return fail(format!("axiom on non-primitive type {}", c.succedent), path);
            }
            if !is_axiom(c) {
                return fail("axiom antecedent is not the handle of its succedent".into(), path);
            }
        }
        RuleData::DivRight => {
            let Some((num, _, _)) = c.succedent.as_division() else {
                return fail("(→÷) needs a division succedent".into(), path);
            };
            let [p] = prem.as_slice() else { return fail("(→÷) needs one premise".into(), path) };
            let expected = c.succedent.plug(ant).expect("valid sequent");
            if p.conclusion.succedent != *num || !p.conclusion.antecedent.is_isomorphic(&expected) {
                return fail("(→÷) premise is not D[d0/F] → N".into(), path);
            }
        }
        RuleData::TimesLeft { edge } => {
            let Some(body) = (*edge < ant.edge_count()).then(|| ant.label(*edge).as_product()).flatten() else {
                return fail(format!("(×→) edge {edge} is not labeled by a product"), path);
            };
            let [p] = prem.as_slice() else { return fail("(×→) needs one premise".into(), path) };
            let expected = ant.replace(*edge, body).expect("valid sequent");
            if p.conclusion.succedent != c.succedent || !p.conclusion.antecedent.is_isomorphic(&expected) {
                return fail("(×→) premise is not G[e/F] → A".into(), path);
            }
        }
        RuleData::TimesRight { .. } => {
            let Some(body) = c.succedent.as_product() else {
                return fail("(→×) needs a product succedent".into(), path);
            };
            if prem.len() != body.edge_count() {
                return fail(format!("(→×) needs {} premises, found {}", body.edge_count(), prem.len()), path);
            }
            for (m, p) in prem.iter().enumerate() {
                if p.conclusion.succedent != *body.label(m) {
                    return fail(format!("(→×) premise {m} has succedent {}, expected {}", p.conclusion.succedent, body.label(m)), path);
                }
            }
            let parts: Vec<&Hypergraph<Type>> = prem.iter().map(|p| &p.conclusion.antecedent).collect();
            match body.instantiate(&parts) {
                Ok(g) if g.is_isomorphic(ant) => {}
                _ => return fail("(→×) reassembly differs from the antecedent".into(), path),
            }
        }
        RuleData::DivLeft { pivot, new_edge, .. } => {
            let Some(div) = (*pivot < ant.edge_count()).then(|| ant.label(*pivot)) else {
                return fail(format!("(÷→) pivot {pivot} out of range"), path);
            };
            let Some((num, den, hole)) = div.as_division() else {
                return fail("(÷→) pivot is not labeled by a division".into(), path);
            };
            if prem.len() != den.edge_count() {
                return fail(format!("(÷→) needs {} premises, found {}", den.edge_count(), prem.len()), path);
            }
            let context = &prem[0].conclusion;
            if context.succedent != c.succedent {
                return fail("(÷→) context premise must keep the succedent".into(), path);
            }
            if *new_edge >= context.antecedent.edge_count() || *context.antecedent.label(*new_edge) != *num {
                return fail("(÷→) new edge is not labeled by the numerator".into(), path);
            }
            let mut parts: Vec<Option<Hypergraph<Type>>> = vec![None; den.edge_count()];
            let mut rest = prem[1..].iter();
            for (d, slot) in parts.iter_mut().enumerate() {
                if d == hole {
                    continue;
                }
                let p = rest.next().unwrap();
                let want = den.label(d).as_type().unwrap();
                if p.conclusion.succedent != *want {
                    return fail(format!("(÷→) premise for denominator edge {d} must have succedent {want}"), path);
                }
                *slot = Some(p.conclusion.antecedent.clone());
            }
            let rebuilt = reassemble_div_left(div, &context.antecedent, *new_edge, &parts);
            if !rebuilt.is_isomorphic(ant) {
                return fail("(÷→) reassembly differs from the antecedent".into(), path);
            }
        }
    }
    let total: usize = prem.iter().map(|p| p.conclusion.connectives()).sum();
    if !prem.is_empty() && total >= c.connectives() {
        return fail("premises do not remove a connective".into(), path);
    }
    for (i, p) in prem.iter().enumerate() {
        path.push(i);
        check_node(p, path)?;
        path.pop();
    }
    Ok(())
}

#[derive(Clone, Debug, Error)]
pub enum CutError {
    #[error("edge {0} of the second antecedent is not labeled by the first succedent")]
    LabelMismatch(EdgeId),
    #[error("input derivation rejected: {0}")]
    BadInput(#[from] CheckError),
    #[error("search budget exhausted on the composed sequent after {} expansions", .0.expanded)]
    BudgetExceeded(SearchStats),
    #[error("composed sequent was refuted; the search is incomplete here")]
    Refuted,
}

/// From derivations of `H → A` and `G → B` with `lab_G(e0) = A`, a derivation
/// of `G[e0/H] → B`, found by a fresh search whose node budget grows with the
/// sizes of the two inputs.
pub fn cut_compose(prover: &Prover, d1: &Derivation, d2: &Derivation, e0: EdgeId) -> Result<Derivation, CutError> {
    check_derivation(d1)?;
    check_derivation(d2)?;
    let g = &d2.conclusion.antecedent;
    if e0 >= g.edge_count() || *g.label(e0) != d1.conclusion.succedent {
        return Err(CutError::LabelMismatch(e0));
    }
    let composed = Sequent {
        antecedent: g.replace(e0, &d1.conclusion.antecedent).expect("labels agree, so ranks agree"),
        succedent: d2.conclusion.succedent.clone(),
    };
    let nodes = prover.budget().max_nodes.max(10_000 * (d1.size() + d2.size()) as u64);
    let p = prover.clone().with_budget(Budget { max_nodes: nodes, max_depth: None });
    match p.derive(&composed).expect("composition of valid sequents is valid") {
        Verdict::Proved(t) => Ok(t),
        Verdict::NotDerivable => Err(CutError::Refuted),
        Verdict::BudgetExceeded(st) => Err(CutError::BudgetExceeded(st)),
    }
}

/// Serializable form of a derivation: sequents as text, rule data inline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DerivationRecord {
    pub conclusion: String,
    #[serde(flatten)]
    pub rule: RuleData,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<DerivationRecord>,
}

impl From<&Derivation> for DerivationRecord {
    fn from(t: &Derivation) -> Self {
        DerivationRecord {
            conclusion: crate::format::print_sequent(&t.conclusion),
            rule: t.rule.clone(),
            premises: t.premises.iter().map(DerivationRecord::from).collect(),
        }
    }
}

impl DerivationRecord {
    pub fn to_derivation(&self) -> Result<Derivation, crate::format::ParseError> {
        Ok(Derivation {
            conclusion: crate::format::parse_sequent(&self.conclusion)?,
            rule: self.rule.clone(),
            premises: self.premises.iter().map(|p| p.to_derivation()).collect::<Result<_, _>>()?,
        })
    }
}

pub fn derivation_to_json(t: &Derivation) -> String {
    serde_json::to_string_pretty(&DerivationRecord::from(t)).expect("records always serialize")
}

pub fn derivation_from_json(text: &str) -> Result<Derivation, crate::format::ParseError> {
    let rec: DerivationRecord =
        serde_json::from_str(text).map_err(|e| crate::format::ParseError::new(e.line(), e.column(), e.to_string()))?;
    rec.to_derivation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::{string_denominator, Slot};

    fn prim(n: &str) -> Type {
        Type::primitive(n, 2)
    }

    fn sg(types: &[Type]) -> Hypergraph<Type> {
        Hypergraph::string_graph(types.iter().cloned()).unwrap()
    }

    fn q() -> Type {
        Type::division(prim("s"), string_denominator(&[None, Some(prim("s")), Some(prim("p"))]).unwrap()).unwrap()
    }

    #[test]
    fn axiom_and_non_axiom() {
        let p1 = Type::primitive("p", 1);
        let ok = Sequent::new(Hypergraph::handle(p1.clone()), p1.clone()).unwrap();
        let Verdict::Proved(t) = derive(&ok, Budget::default()).unwrap() else { panic!() };
        assert_eq!(t.rule, RuleData::Axiom);
        check_derivation(&t).unwrap();

        let bad = Sequent::new(Hypergraph::handle(p1), Type::primitive("q", 1)).unwrap();
        assert!(matches!(derive(&bad, Budget::default()).unwrap(), Verdict::NotDerivable));
    }

    #[test]
    fn string_grammar_sequent() {
        let (s, p) = (prim("s"), prim("p"));
        let seq = Sequent::new(sg(&[q(), q(), s.clone(), p.clone(), p]), s).unwrap();
        let Verdict::Proved(t) = derive(&seq, Budget::default()).unwrap() else { panic!() };
        check_derivation(&t).unwrap();
        assert_eq!(t.rule_counts()[1], 2);
        assert_eq!(t.rule_counts()[0], 5);
    }

    #[test]
    fn normalization() {
        let (p, qq, r, s, u) = (prim("p"), prim("q"), prim("r"), prim("s"), prim("u"));
        let x = Type::product(sg(&[qq.clone(), r.clone()])).unwrap();
        let n = normalize(&Sequent::new(sg(&[p.clone(), x, s.clone()]), u.clone()).unwrap());
        assert!(n.antecedent.is_isomorphic(&sg(&[p.clone(), qq.clone(), r.clone(), s])));

        let div = Type::division(u.clone(), string_denominator(&[None, Some(r.clone())]).unwrap()).unwrap();
        let n = normalize(&Sequent::new(sg(&[p.clone(), qq.clone()]), div).unwrap());
        assert!(n.antecedent.is_isomorphic(&sg(&[p.clone(), qq.clone(), r])));
        assert_eq!(n.succedent, u);

        let already = Sequent::new(sg(std::slice::from_ref(&p)), p).unwrap();
        assert!(is_normal(&already));
        assert_eq!(normalize(&already).key(), already.key());
    }

    #[test]
    fn product_right() {
        let (p, qq) = (prim("p"), prim("q"));
        let x = Type::product(sg(&[p.clone(), qq.clone()])).unwrap();
        let seq = Sequent::new(sg(&[p.clone(), qq.clone()]), x.clone()).unwrap();
        let Verdict::Proved(t) = derive(&seq, Budget::default()).unwrap() else { panic!() };
        check_derivation(&t).unwrap();
        let swapped = Sequent::new(sg(&[qq, p]), x).unwrap();
        assert!(matches!(derive(&swapped, Budget::default()).unwrap(), Verdict::NotDerivable));
    }

    #[test]
    fn mutated_tree_is_rejected() {
        let (s, p) = (prim("s"), prim("p"));
        let seq = Sequent::new(sg(&[q(), s.clone(), p]), s).unwrap();
        let Verdict::Proved(mut t) = derive(&seq, Budget::default()).unwrap() else { panic!() };
        check_derivation(&t).unwrap();
        let RuleData::DivLeft { pivot, .. } = &mut t.rule else { panic!("expected (÷→) at the root") };
        *pivot += 1;
        assert!(check_derivation(&t).is_err());

        let leaf = Derivation {
            conclusion: Sequent::new(Hypergraph::handle(q()), q()).unwrap(),
            rule: RuleData::Axiom,
            premises: vec![],
        };
        let err = check_derivation(&leaf).unwrap_err();
        assert!(err.reason.contains("non-primitive"));
    }

    #[test]
    fn budget_is_reported() {
        let (s, p) = (prim("s"), prim("p"));
        let seq = Sequent::new(sg(&[q(), q(), s.clone(), p.clone(), p]), s).unwrap();
        let tiny = Budget { max_nodes: 1, max_depth: None };
        assert!(matches!(derive(&seq, tiny).unwrap(), Verdict::BudgetExceeded(_)));
        let shallow = Budget { max_nodes: 1000, max_depth: Some(0) };
        assert!(matches!(derive(&seq, shallow).unwrap(), Verdict::BudgetExceeded(_)));
    }

    #[test]
    fn division_by_a_handle() {
        let n = prim("n");
        let t = Type::division(n.clone(), Hypergraph::handle(Slot::Hole(2))).unwrap();
        let seq = Sequent::new(Hypergraph::handle(t.clone()), n).unwrap();
        assert!(derive(&seq, Budget::default()).unwrap().is_proved());
        let id = Sequent::new(Hypergraph::handle(t.clone()), t).unwrap();
        assert!(derive(&id, Budget::default()).unwrap().is_proved());
    }

    #[test]
    fn cut_with_an_axiom() {
        let (s, p) = (prim("s"), prim("p"));
        let prover = Prover::new();
        let seq = Sequent::new(sg(&[q(), s.clone(), p]), s.clone()).unwrap();
        let Verdict::Proved(d1) = prover.derive(&seq).unwrap() else { panic!() };
        let ax = Sequent::new(Hypergraph::handle(s.clone()), s).unwrap();
        let Verdict::Proved(d2) = prover.derive(&ax).unwrap() else { panic!() };
        let t = cut_compose(&prover, &d1, &d2, 0).unwrap();
        assert!(t.conclusion.antecedent.is_isomorphic(&seq.antecedent));
        let t = cut_compose(&prover, &d2, &d1, 1).unwrap();
        assert!(t.conclusion.antecedent.is_isomorphic(&seq.antecedent));
    }
}

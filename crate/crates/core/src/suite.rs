//! Batch experiments with machine-readable reports. Randomized suites are
//! deterministic for a given seed.

use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::calculus::{check_derivation, cut_compose, normalize, normalize_step, CutError, Decision, Derivation, Prover, Verdict};
use crate::fixtures::{
    binary_census, brute_force_isomorphic, hgr1, hgr1_example_graph, hgr1_example_sequent, hgr1_witness, hgr2, in_l1,
    is_bipartite, lambek_derive, lambek_sequents, permuted, random_hypergraph, random_l1_graph, random_lambek_sequent, sgr,
    sgr_hrg, syntree, syntree_hrg, translate_sequent, with_isolated_node, LSequent, LType,
};
use crate::grammar::{hl_member, hrg_member, wgnf_to_hl, ConvertOptions, HlGrammar, MemberVerdict};
use crate::hypergraph::{Edge, EdgeId, Hypergraph, Symbol};
use crate::models::{holds_under_random, Truth, ValuationShape};
use crate::types::{Sequent, Slot, Type};

pub const SUITES: &[&str] = &[
    "sgr",
    "allgraphs",
    "bipartite",
    "witness",
    "cut",
    "reversibility",
    "soundness",
    "embedding",
    "conversion",
    "structural",
];

#[derive(Clone, Debug, Error)]
#[error("unknown suite {name}; expected one of {}", SUITES.join(", "), name = .0)]
pub struct UnknownSuite(pub String);

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub budget_exceeded: usize,
    /// Cases outside the suite's preconditions, not counted as cases.
    pub skipped: usize,
    pub failures: Vec<String>,
    pub counts: BTreeMap<String, usize>,
    pub notes: Vec<String>,
    pub elapsed_ms: u128,
}

impl Report {
    fn new(suite: &str, seed: u64) -> Report {
        Report { suite: suite.into(), seed, ..Report::default() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.budget_exceeded == 0 && self.passed == self.cases
    }

    fn pass(&mut self) {
        self.cases += 1;
        self.passed += 1;
    }

    fn fail(&mut self, what: String) {
        self.cases += 1;
        self.failures.push(what);
    }

    fn exceeded(&mut self, what: String) {
        self.cases += 1;
        self.budget_exceeded += 1;
        self.failures.push(format!("budget exceeded: {what}"));
    }

    fn count(&mut self, key: &str, n: usize) {
        *self.counts.entry(key.into()).or_default() += n;
    }

    fn finish(mut self, start: Instant) -> Report {
        self.elapsed_ms = start.elapsed().as_millis();
        self
    }
}

pub fn run_suite(name: &str, seed: u64, prover: &Prover) -> Result<Report, UnknownSuite> {
    Ok(match name {
        "sgr" => sgr_suite(prover),
        "allgraphs" => allgraphs_suite(prover),
        "bipartite" => bipartite_suite(prover),
        "witness" => witness_suite(seed, 50, prover),
        "cut" => cut_suite(seed, 100, prover),
        "reversibility" => reversibility_suite(seed, 100, prover),
        "soundness" => soundness_suite(seed, 50, prover),
        "embedding" => embedding_suite(seed, prover),
        "conversion" => conversion_suite(seed, prover),
        "structural" => structural_suite(seed, 500),
        other => return Err(UnknownSuite(other.into())),
    })
}

fn word_graph(w: &str) -> Hypergraph<Symbol> {
    Hypergraph::string_graph(w.chars().map(|c| Symbol::new(c.to_string(), 2))).expect("letters are binary")
}

/// Every word over `{a, b}` with length in `1..=max_len`.
pub fn ab_words(max_len: usize) -> Vec<String> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for bits in 0u32..1 << len {
            out.push((0..len).map(|i| if bits >> (len - 1 - i) & 1 == 0 { 'a' } else { 'b' }).collect());
        }
    }
    out
}

/// `a^n b^(n+1)`.
pub fn in_sgr_language(w: &str) -> bool {
    let n = w.chars().take_while(|&c| c == 'a').count();
    w.len() == 2 * n + 1 && w[n..].chars().all(|c| c == 'b')
}

fn membership(grammar: &HlGrammar, g: &Hypergraph<Symbol>, prover: &Prover) -> Option<bool> {
    match hl_member(grammar, g, prover).expect("graphs use the grammar's alphabet") {
        MemberVerdict::Member(_) => Some(true),
        MemberVerdict::NotMember => Some(false),
        MemberVerdict::BudgetExceeded(_) => None,
    }
}

/// Runs membership checks in parallel and compares with `expected`.
fn membership_cases(
    report: &mut Report,
    grammar: &HlGrammar,
    cases: Vec<(String, Hypergraph<Symbol>, bool)>,
    prover: &Prover,
) {
    let results: Vec<(String, bool, Option<bool>)> = cases
        .into_par_iter()
        .map(|(name, g, expected)| (name, expected, membership(grammar, &g, prover)))
        .collect();
    for (name, expected, got) in results {
        match got {
            None => report.exceeded(name),
            Some(v) if v == expected => {
                report.pass();
                if v {
                    report.count("accepted", 1);
                }
            }
            Some(v) => report.fail(format!("{name}: member = {v}, expected {expected}")),
        }
    }
}

pub fn sgr_suite(prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("sgr", 0);
    let g = sgr();
    let cases = ab_words(7).into_iter().map(|w| {
        let expected = in_sgr_language(&w);
        let graph = word_graph(&w);
        (w, graph, expected)
    });
    membership_cases(&mut r, &g, cases.collect(), prover);
    r.finish(start)
}

pub fn allgraphs_suite(prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("allgraphs", 0);
    let mut cases = Vec::new();
    for m in 1..=3 {
        let census = binary_census(m);
        r.count(&format!("census_{m}_edges"), census.len());
        for (i, g) in census.into_iter().enumerate() {
            let expected = in_l1(&g);
            cases.push((format!("{m}-edge graph {i} with an isolated node"), with_isolated_node(&g), false));
            cases.push((format!("{m}-edge graph {i}"), g, expected));
        }
    }
    cases.push(("the four-edge example graph".into(), hgr1_example_graph(), true));
    membership_cases(&mut r, &hgr1(), cases, prover);
    r.finish(start)
}

pub fn bipartite_suite(prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("bipartite", 0);
    let mut cases = Vec::new();
    for m in 1..=3 {
        for (i, g) in binary_census(m).into_iter().enumerate() {
            let expected = in_l1(&g) && is_bipartite(&g).expect("binary");
            if expected {
                r.count("bipartite", 1);
            }
            cases.push((format!("{m}-edge graph {i}"), g, expected));
        }
    }
    membership_cases(&mut r, &hgr2(), cases, prover);
    r.finish(start)
}

pub fn witness_suite(seed: u64, count: usize, prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("witness", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graphs: Vec<Hypergraph<Symbol>> = (0..count).map(|_| random_l1_graph(&mut rng, 5)).collect();
    let results: Vec<Result<(), String>> = graphs
        .par_iter()
        .map(|g| {
            let f = hgr1_witness(g).map_err(|e| e.to_string())?;
            let s = Sequent::new(g.map_labels(|e, _| f[e].clone()), hgr1().start().clone()).map_err(|e| e.to_string())?;
            match prover.derive(&s).map_err(|e| e.to_string())? {
                Verdict::Proved(t) => check_derivation(&t).map_err(|e| e.to_string()),
                Verdict::NotDerivable => Err("not derivable".into()),
                Verdict::BudgetExceeded(_) => Err("budget exceeded".into()),
            }
        })
        .collect();
    for (g, res) in graphs.iter().zip(results) {
        match res {
            Ok(()) => r.pass(),
            Err(e) if e == "budget exceeded" => r.exceeded(format!("{g}")),
            Err(e) => r.fail(format!("{g}: {e}")),
        }
    }
    r.finish(start)
}

/// Derivations of the reference sequents: translated derivable Lambek
/// sequents, grammar memberships and witness relabelings.
pub fn derivable_corpus(prover: &Prover) -> Vec<Derivation> {
    let mut sequents: Vec<Sequent> = Vec::new();
    for s in lambek_sequents(&["p", "q"], 3, 3) {
        if lambek_derive(&s.antecedent, &s.succedent) {
            sequents.push(translate_sequent(&s));
        }
    }
    sequents.extend(textbook_sequents().iter().map(translate_sequent));
    sequents.push(hgr1_example_sequent());
    for g in binary_census(1).into_iter().chain(binary_census(2)) {
        let f = hgr1_witness(&g).expect("census graphs are in L1");
        sequents.push(Sequent::new(g.map_labels(|e, _| f[e].clone()), hgr1().start().clone()).expect("ranks"));
    }
    let mut out: Vec<Derivation> = sequents
        .par_iter()
        .filter_map(|s| match prover.derive(s).expect("valid") {
            Verdict::Proved(t) => Some(t),
            _ => None,
        })
        .collect();
    let grammar = sgr();
    for w in ["b", "abb", "aabbb"] {
        if let MemberVerdict::Member(m) = hl_member(&grammar, &word_graph(w), prover).expect("alphabet") {
            out.push(m.derivation);
        }
    }
    let tree = wgnf_to_hl(&syntree_hrg(), ConvertOptions::default()).expect("normal form");
    if let MemberVerdict::Member(m) = hl_member(&tree, &syntree(), prover).expect("alphabet") {
        out.push(m.derivation);
    }
    out
}

/// `np/n, n, np\s → s`, `np → s/(np\s)` and `p → (p·q)/q`.
pub fn textbook_sequents() -> Vec<LSequent> {
    let p = LType::prim;
    vec![
        LSequent {
            antecedent: vec![LType::over(p("np"), p("n")), p("n"), LType::under(p("np"), p("s"))],
            succedent: p("s"),
        },
        LSequent { antecedent: vec![p("np")], succedent: LType::over(p("s"), LType::under(p("np"), p("s"))) },
        LSequent { antecedent: vec![p("p")], succedent: LType::over(LType::prod(p("p"), p("q")), p("q")) },
    ]
}

pub fn cut_suite(seed: u64, count: usize, prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("cut", seed);
    let corpus = derivable_corpus(prover);
    r.count("corpus", corpus.len());
    let mut by_succedent: HashMap<&[u8], Vec<usize>> = HashMap::new();
    for (i, d) in corpus.iter().enumerate() {
        by_succedent.entry(d.conclusion.succedent.key()).or_default().push(i);
    }
    // (first, second, edge) with the edge of the second antecedent labeled
    // by the first succedent; non-axiom first premises are preferred.
    let mut rich = Vec::new();
    let mut plain = Vec::new();
    for (j, d2) in corpus.iter().enumerate() {
        for e0 in 0..d2.conclusion.antecedent.edge_count() {
            for &i in by_succedent.get(d2.conclusion.antecedent.label(e0).key()).into_iter().flatten() {
                if corpus[i].premises.is_empty() {
                    plain.push((i, j, e0));
                } else {
                    rich.push((i, j, e0));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rich.shuffle(&mut rng);
    plain.shuffle(&mut rng);
    r.count("candidate_pairs", rich.len() + plain.len());
    let chosen: Vec<(usize, usize, EdgeId)> = rich.into_iter().chain(plain).take(count).collect();
    if chosen.len() < count {
        r.notes.push(format!("only {} composable pairs", chosen.len()));
    }
    let results: Vec<Result<(), CutError>> = chosen
        .par_iter()
        .map(|&(i, j, e0)| {
            let t = cut_compose(prover, &corpus[i], &corpus[j], e0)?;
            check_derivation(&t)?;
            Ok(())
        })
        .collect();
    for (&(i, j, e0), res) in chosen.iter().zip(results) {
        let name = format!("{} into edge {e0} of {}", corpus[i].conclusion, corpus[j].conclusion);
        match res {
            Ok(()) => r.pass(),
            Err(CutError::BudgetExceeded(_)) => r.exceeded(name),
            Err(e) => r.fail(format!("{name}: {e}")),
        }
    }
    r.finish(start)
}

/// `H → A` with the edges `edges` folded into one edge labeled by the
/// product of the subgraph they span: the conclusion of `(×→)` whose premise
/// is `H → A`.
pub fn fold_product(s: &Sequent, edges: &[EdgeId]) -> Sequent {
    let g = &s.antecedent;
    let mut inside = vec![false; g.edge_count()];
    for &e in edges {
        inside[e] = true;
    }
    let mut touched_in = vec![false; g.node_count()];
    let mut touched_out = vec![false; g.node_count()];
    for (e, edge) in g.edges().iter().enumerate() {
        for &v in &edge.att {
            if inside[e] {
                touched_in[v] = true;
            } else {
                touched_out[v] = true;
            }
        }
    }
    for &v in g.ext() {
        touched_out[v] = true;
    }
    let boundary: Vec<usize> = g.nodes().filter(|&v| touched_in[v] && touched_out[v]).collect();
    let (body, _) = g.induced(edges, &[], &boundary);
    let product = Type::product(body).expect("subgraphs of valid graphs are valid");
    let kept: Vec<usize> = g.nodes().filter(|&v| !touched_in[v] || touched_out[v]).collect();
    let mut fwd = vec![usize::MAX; g.node_count()];
    for (i, &v) in kept.iter().enumerate() {
        fwd[v] = i;
    }
    let mut out_edges: Vec<Edge<Type>> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(e, _)| !inside[*e])
        .map(|(_, e)| Edge { label: e.label.clone(), att: e.att.iter().map(|&v| fwd[v]).collect() })
        .collect();
    out_edges.push(Edge { label: product, att: boundary.iter().map(|&v| fwd[v]).collect() });
    let antecedent = Hypergraph::from_parts(kept.len(), out_edges, g.ext().iter().map(|&v| fwd[v]).collect());
    Sequent { antecedent, succedent: s.succedent.clone() }
}

/// `lab(e)• → A ÷ D` with `D` the antecedent with `e` relabeled by `$`: the
/// conclusion of `(→÷)` whose premise is `H → A`.
pub fn fold_division(s: &Sequent, e: EdgeId) -> Sequent {
    let g = &s.antecedent;
    let den = g.map_labels(|d, l| if d == e { Slot::Hole(l.rank()) } else { Slot::Ty(l.clone()) });
    let succedent = Type::division(s.succedent.clone(), den).expect("valid sequents give valid denominators");
    Sequent { antecedent: Hypergraph::handle(g.label(e).clone()), succedent }
}

/// Derivability under rewrites by `(→÷)` and `(×→)` in both directions,
/// decided by a search that does not normalize eagerly.
pub fn reversibility_suite(seed: u64, count: usize, prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("reversibility", seed);
    let corpus = derivable_corpus(prover);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked: Vec<&Derivation> = corpus.iter().collect();
    picked.shuffle(&mut rng);
    picked.truncate(count);
    let jobs: Vec<(Sequent, usize, Vec<EdgeId>)> = picked
        .iter()
        .map(|d| {
            let s = d.conclusion.clone();
            let n = s.antecedent.edge_count();
            let e = rng.gen_range(0..n);
            let mut span: Vec<EdgeId> = (0..n).collect();
            span.shuffle(&mut rng);
            span.truncate(rng.gen_range(1..=n.min(2)));
            span.sort();
            (s, e, span)
        })
        .collect();
    let budget = prover.budget();
    let results: Vec<Vec<(String, Decision)>> = jobs
        .par_iter()
        .map(|(s, e, span)| {
            let full = Prover::new().with_budget(budget).with_mode(prover.mode()).with_eager_normalization(false);
            let mut variants = vec![("normal form".to_string(), normalize(s))];
            let mut step = s.clone();
            while let Some((rule, next)) = normalize_step(&step) {
                variants.push((format!("after {}", rule.name()), next.clone()));
                step = next;
            }
            variants.push((format!("edge {e} folded into a division"), fold_division(s, *e)));
            variants.push((format!("edges {span:?} folded into a product"), fold_product(s, span)));
            variants.into_iter().map(|(what, v)| (what, full.decide(&v).expect("rewrites keep validity"))).collect()
        })
        .collect();
    for ((s, _, _), res) in jobs.iter().zip(results) {
        for (what, d) in res {
            let name = format!("{s}, {what}");
            match d {
                Decision::Derivable => r.pass(),
                Decision::NotDerivable => r.fail(format!("{name}: not derivable")),
                Decision::BudgetExceeded(_) => r.exceeded(name),
            }
        }
    }
    r.count("sequents", jobs.len());
    r.finish(start)
}

/// Truth of every derivable corpus sequent under `valuations` seeded random
/// valuations. Sequents with an undecided verdict are skipped.
pub fn soundness_suite(seed: u64, valuations: u64, prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("soundness", seed);
    let corpus = derivable_corpus(prover);
    let shape = ValuationShape::default();
    for (i, d) in corpus.iter().enumerate() {
        let verdicts = holds_under_random(&d.conclusion, &shape, valuations, seed.wrapping_add(i as u64));
        let undecided = verdicts.iter().filter(|t| **t == Truth::Undecided).count();
        let falses = verdicts.iter().filter(|t| **t == Truth::False).count();
        r.count("valuations_checked", verdicts.len() - undecided);
        if undecided > 0 {
            r.count("undecided_valuations", undecided);
        }
        if undecided == verdicts.len() {
            r.skipped += 1;
        } else if falses > 0 {
            r.fail(format!("{}: false under {falses} valuations", d.conclusion));
        } else {
            r.pass();
        }
    }
    r.finish(start)
}

/// Lambek derivability against derivability of the translation: every
/// sequent over `p, q` with at most two connectives and up to three
/// antecedent types, then seeded random sequents with three to six.
pub fn embedding_suite(seed: u64, prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("embedding", seed);
    let mut corpus: Vec<LSequent> = textbook_sequents();
    corpus.extend(lambek_sequents(&["p", "q"], 2, 3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 3..=6 {
        for _ in 0..60 {
            corpus.push(random_lambek_sequent(&["p", "q"], k, 3, &mut rng));
        }
    }
    let results: Vec<(bool, Decision)> = corpus
        .par_iter()
        .map(|s| (lambek_derive(&s.antecedent, &s.succedent), prover.decide(&translate_sequent(s)).expect("valid")))
        .collect();
    for (s, (l, d)) in corpus.iter().zip(results) {
        match (l, d) {
            (_, Decision::BudgetExceeded(_)) => r.exceeded(format!("{s}")),
            (true, Decision::Derivable) | (false, Decision::NotDerivable) => {
                r.pass();
                if l {
                    r.count("derivable", 1);
                }
            }
            _ => r.fail(format!("{s}: Lambek {l}, translation {d:?}")),
        }
    }
    r.finish(start)
}

/// `g` changed in one random way: relabeling, swapping `l` and `r`,
/// reversing, deleting or adding an edge, or moving the root.
fn mutate(g: &Hypergraph<Symbol>, rng: &mut impl Rng) -> Hypergraph<Symbol> {
    let unary = ["the", "cat", "sleeps"].map(|n| Symbol::new(n, 1));
    let mut edges: Vec<Edge<Symbol>> = g.edges().to_vec();
    let mut ext = g.ext().to_vec();
    let mut n = g.node_count();
    let e = rng.gen_range(0..edges.len());
    match rng.gen_range(0..6) {
        0 => {
            let choices: Vec<&Symbol> = unary.iter().filter(|s| **s != edges[e].label).collect();
            if edges[e].att.len() == 1 {
                edges[e].label = (*choices.choose(rng).unwrap()).clone();
            } else {
                edges[e].label = Symbol::new(if edges[e].label.name() == "l" { "r" } else { "l" }, 2);
            }
        }
        1 => {
            let binary: Vec<usize> = (0..edges.len()).filter(|&i| edges[i].att.len() == 2).collect();
            let &b = binary.choose(rng).unwrap();
            edges[b].att.reverse();
        }
        2 => {
            edges.remove(e);
        }
        3 => {
            let v = rng.gen_range(0..n);
            edges.push(Edge { label: unary.choose(rng).unwrap().clone(), att: vec![v] });
        }
        4 => {
            ext = vec![(ext[0] + rng.gen_range(1..n)) % n];
        }
        _ => {
            let v = rng.gen_range(0..n);
            n += 1;
            edges.push(Edge { label: Symbol::new(if rng.gen_bool(0.5) { "l" } else { "r" }, 2), att: vec![v, n - 1] });
            edges.push(Edge { label: unary.choose(rng).unwrap().clone(), att: vec![n - 1] });
        }
    }
    Hypergraph::from_parts(n, edges, ext)
}

/// HRG membership against membership in the converted HL-grammar: all
/// words up to length 7 for the string grammar, the tree and 20 mutated
/// non-members for the tree grammar.
pub fn conversion_suite(seed: u64, prover: &Prover) -> Report {
    let start = Instant::now();
    let mut r = Report::new("conversion", seed);
    let check = |r: &mut Report, hrg: &crate::grammar::Hrg, hl: &HlGrammar, cases: Vec<(String, Hypergraph<Symbol>)>| {
        let results: Vec<(bool, Option<bool>)> =
            cases.par_iter().map(|(_, g)| (hrg_member(hrg, g), membership(hl, g, prover))).collect();
        for ((name, _), (a, b)) in cases.iter().zip(results) {
            match b {
                None => r.exceeded(name.clone()),
                Some(b) if a == b => {
                    r.pass();
                    if a {
                        r.count("members", 1);
                    }
                }
                Some(b) => r.fail(format!("{name}: HRG {a}, HL {b}")),
            }
        }
    };
    let strings = sgr_hrg();
    let hl = wgnf_to_hl(&strings, ConvertOptions::default()).expect("normal form");
    check(&mut r, &strings, &hl, ab_words(7).into_iter().map(|w| (w.clone(), word_graph(&w))).collect());

    let trees = syntree_hrg();
    let hl = wgnf_to_hl(&trees, ConvertOptions::default()).expect("normal form");
    let tree = syntree();
    let mut cases = vec![("tree".to_string(), tree.clone())];
    let mut seen = std::collections::HashSet::new();
    seen.insert(tree.canonical_code());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attempts = 0;
    while cases.len() < 21 && attempts < 10_000 {
        attempts += 1;
        let m = mutate(&tree, &mut rng);
        if m.validate().is_err() || !seen.insert(m.canonical_code()) || hrg_member(&trees, &m) {
            continue;
        }
        cases.push((format!("mutant {}", cases.len()), m));
    }
    r.count("tree_mutants", cases.len() - 1);
    check(&mut r, &trees, &hl, cases);
    r.finish(start)
}

fn structural_labels() -> Vec<Symbol> {
    vec![Symbol::new("a", 1), Symbol::new("b", 2), Symbol::new("c", 2), Symbol::new("d", 3)]
}

/// A random graph with exactly `rank` external nodes.
pub fn random_graph_of_rank(rng: &mut impl Rng, rank: usize, max_nodes: usize, max_edges: usize) -> Hypergraph<Symbol> {
    loop {
        let g = random_hypergraph(rng, &structural_labels(), max_nodes.max(rank), max_edges);
        if g.node_count() < rank {
            continue;
        }
        let mut ext: Vec<usize> = g.nodes().collect();
        ext.shuffle(rng);
        ext.truncate(rank);
        let mut g = g;
        g.set_ext(ext);
        return g;
    }
}

fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// Replacement confluence, node and edge counts of replacement, canonical
/// codes under permutation and isomorphism against brute force.
pub fn structural_suite(seed: u64, cases: usize) -> Report {
    let start = Instant::now();
    let mut r = Report::new("structural", seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let labels = structural_labels();
    for i in 0..cases {
        // Confluence.
        let g = loop {
            let g = random_hypergraph(&mut rng, &labels, 5, 4);
            if g.edge_count() >= 2 {
                break g;
            }
        };
        let (e1, e2) = {
            let p = random_permutation(&mut rng, g.edge_count());
            (p[0], p[1])
        };
        let h1 = random_graph_of_rank(&mut rng, g.att(e1).len(), 4, 3);
        let h2 = random_graph_of_rank(&mut rng, g.att(e2).len(), 4, 3);
        let both = g.replace_all(&[(e1, &h1), (e2, &h2)]).unwrap();
        let shift = |e: EdgeId, gone: EdgeId| if e > gone { e - 1 } else { e };
        let a = g.replace(e1, &h1).unwrap().replace(shift(e2, e1), &h2).unwrap();
        let b = g.replace(e2, &h2).unwrap().replace(shift(e1, e2), &h1).unwrap();
        if a.is_isomorphic(&b) && a.is_isomorphic(&both) {
            r.pass();
        } else {
            r.fail(format!("confluence case {i}: {g}"));
        }

        // Counting.
        let e = rng.gen_range(0..g.edge_count());
        let h = random_graph_of_rank(&mut rng, g.att(e).len(), 4, 3);
        let x = g.replace(e, &h).unwrap();
        if x.node_count() == g.node_count() + h.node_count() - h.rank() && x.edge_count() == g.edge_count() - 1 + h.edge_count() {
            r.pass();
        } else {
            r.fail(format!("counting case {i}: {g} with {h}"));
        }

        // Permutation invariance.
        let p = random_permutation(&mut rng, g.node_count());
        let q = random_permutation(&mut rng, g.edge_count());
        if permuted(&g, &p, &q).canonical_code() == g.canonical_code() {
            r.pass();
        } else {
            r.fail(format!("permutation case {i}: {g}"));
        }

        // Isomorphism against brute force, on isomorphic and on random pairs.
        let u = random_hypergraph(&mut rng, &labels, 5, 4);
        let v = if rng.gen_bool(0.5) {
            let p = random_permutation(&mut rng, u.node_count());
            let q = random_permutation(&mut rng, u.edge_count());
            permuted(&u, &p, &q)
        } else {
            random_hypergraph(&mut rng, &labels, 5, 4)
        };
        let want = brute_force_isomorphic(&u, &v);
        if u.is_isomorphic(&v) == want {
            r.pass();
            if want {
                r.count("isomorphic_pairs", 1);
            }
        } else {
            r.fail(format!("isomorphism case {i}: {u} vs {v}"));
        }
    }
    r.finish(start)
}

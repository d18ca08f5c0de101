//! Randomized properties checked against independent brute-force oracles.

use std::collections::{BTreeSet, HashSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hl_core::calculus::{check_derivation, normalize};
use hl_core::fixtures::*;
use hl_core::grammar::{hrg_generate, hrg_step_bound, Hrg};
use hl_core::matching::enumerate_decompositions;
use hl_core::models::{denotation_enumerate, find_countermodel, sequent_holds, ValuationShape};
use hl_core::suite::random_graph_of_rank;
use hl_core::{hl_member, Apportionment, Decision, Edge, Hypergraph, Label, MemberVerdict, Prover, Sequent, Symbol, Truth, Type, Valuation, Verdict};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn shuffled(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

fn host_labels() -> Vec<Symbol> {
    vec![Symbol::new("a", 1), Symbol::new("b", 2), Symbol::new("c", 2)]
}

/// Part key tuples of every decomposition, found by trying all injective
/// node maps and all assignments of host edges (and, in exhaustive mode,
/// isolated host nodes) to pattern edges.
fn brute_decompositions(host: &Hypergraph<Symbol>, pattern: &Hypergraph<Symbol>, exhaustive: bool) -> BTreeSet<Vec<Vec<u8>>> {
    let mut out = BTreeSet::new();
    if host.rank() != pattern.rank() {
        return out;
    }
    let (np, nh, l, m) = (pattern.node_count(), host.node_count(), pattern.edge_count(), host.edge_count());
    let mut phi = vec![usize::MAX; np];
    for (i, &v) in pattern.ext().iter().enumerate() {
        phi[v] = host.ext()[i];
    }
    let free: Vec<usize> = (0..np).filter(|&v| phi[v] == usize::MAX).collect();
    let mut maps = Vec::new();
    extend_maps(&mut phi, &free, 0, nh, &mut maps);
    for phi in maps {
        let mut image = vec![false; nh];
        for &u in &phi {
            image[u] = true;
        }
        if l == 0 {
            if m == 0 && image.iter().all(|&b| b) {
                out.insert(vec![]);
            }
            continue;
        }
        for code in 0..l.pow(m as u32) {
            let assign: Vec<usize> = (0..m).map(|j| code / l.pow(j as u32) % l).collect();
            let mut owner = vec![usize::MAX; nh];
            let mut ok = true;
            for (j, &i) in assign.iter().enumerate() {
                let ext: Vec<usize> = pattern.att(i).iter().map(|&v| phi[v]).collect();
                for &u in host.att(j) {
                    if image[u] {
                        ok &= ext.contains(&u);
                    } else if owner[u] == usize::MAX || owner[u] == i {
                        owner[u] = i;
                    } else {
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let loose: Vec<usize> = (0..nh).filter(|&u| !image[u] && owner[u] == usize::MAX).collect();
            if !loose.is_empty() && !exhaustive {
                continue;
            }
            for spread in 0..l.pow(loose.len() as u32) {
                let mut owner = owner.clone();
                for (k, &u) in loose.iter().enumerate() {
                    owner[u] = spread / l.pow(k as u32) % l;
                }
                let key: Vec<Vec<u8>> = (0..l).map(|i| part(host, pattern, &phi, &assign, &owner, i).canonical_code()).collect();
                out.insert(key);
            }
        }
    }
    out
}

fn extend_maps(phi: &mut Vec<usize>, free: &[usize], k: usize, nh: usize, out: &mut Vec<Vec<usize>>) {
    if k == free.len() {
        out.push(phi.clone());
        return;
    }
    for u in 0..nh {
        if !phi.contains(&u) {
            phi[free[k]] = u;
            extend_maps(phi, free, k + 1, nh, out);
            phi[free[k]] = usize::MAX;
        }
    }
}

fn part(
    host: &Hypergraph<Symbol>,
    pattern: &Hypergraph<Symbol>,
    phi: &[usize],
    assign: &[usize],
    owner: &[usize],
    i: usize,
) -> Hypergraph<Symbol> {
    let mut nodes: Vec<usize> = pattern.att(i).iter().map(|&v| phi[v]).collect();
    let rank = nodes.len();
    nodes.extend((0..host.node_count()).filter(|&u| owner[u] == i && !phi.contains(&u)));
    let at = |u: usize| nodes.iter().position(|&x| x == u).unwrap();
    let edges = (0..host.edge_count())
        .filter(|&j| assign[j] == i)
        .map(|j| Edge { label: host.label(j).clone(), att: host.att(j).iter().map(|&u| at(u)).collect() })
        .collect();
    Hypergraph::from_parts(nodes.len(), edges, (0..rank).collect())
}

fn engine_keys(host: &Hypergraph<Symbol>, pattern: &Hypergraph<Symbol>, mode: Apportionment) -> BTreeSet<Vec<Vec<u8>>> {
    let ds = enumerate_decompositions(host, pattern, mode);
    for d in &ds {
        assert!(d.reassemble(pattern).is_isomorphic(host), "reassembly must reproduce the host");
    }
    let keys: BTreeSet<Vec<Vec<u8>>> = ds.iter().map(|d| d.parts.iter().map(|p| p.canonical_code()).collect()).collect();
    assert_eq!(keys.len(), ds.len(), "no duplicate part tuples");
    keys
}

/// A pattern with up to three edges and a host that decomposes along it
/// half of the time.
fn matching_case(seed: u64) -> (Hypergraph<Symbol>, Hypergraph<Symbol>) {
    let mut r = rng(seed);
    let pattern_labels = [Symbol::new("x", 1), Symbol::new("y", 2)];
    let rank = r.gen_range(0..=2);
    let pattern = loop {
        let p = random_hypergraph(&mut r, &pattern_labels, 3, 3);
        if p.node_count() >= rank {
            let mut p = p;
            let ext = shuffled(&mut r, p.node_count()).into_iter().take(rank).collect();
            p.set_ext(ext);
            break p;
        }
    };
    let host = if r.gen_bool(0.5) {
        let parts: Vec<Hypergraph<Symbol>> =
            pattern.edges().iter().map(|e| random_graph_of_rank(&mut r, e.att.len(), e.att.len() + 1, 2)).collect();
        let refs: Vec<&Hypergraph<Symbol>> = parts.iter().collect();
        pattern.instantiate(&refs).unwrap()
    } else {
        loop {
            let g = random_hypergraph(&mut r, &host_labels(), 4, 4);
            if g.node_count() >= rank {
                let mut g = g;
                let ext = shuffled(&mut r, g.node_count()).into_iter().take(rank).collect();
                g.set_ext(ext);
                break g;
            }
        }
    };
    (host, pattern)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decompositions_agree_with_brute_force(seed in any::<u64>(), exhaustive in any::<bool>()) {
        let (host, pattern) = matching_case(seed);
        prop_assume!(host.edge_count() <= 4);
        let mode = if exhaustive { Apportionment::Exhaustive } else { Apportionment::Minimal };
        prop_assert_eq!(engine_keys(&host, &pattern, mode), brute_decompositions(&host, &pattern, exhaustive));
    }

    #[test]
    fn decomposition_counts_ignore_host_identifiers(seed in any::<u64>()) {
        let (host, pattern) = matching_case(seed);
        let mut r = rng(seed ^ 0x5eed);
        let moved = permuted(&host, &shuffled(&mut r, host.node_count()), &shuffled(&mut r, host.edge_count()));
        prop_assert_eq!(
            enumerate_decompositions(&host, &pattern, Apportionment::Minimal).len(),
            enumerate_decompositions(&moved, &pattern, Apportionment::Minimal).len()
        );
    }

    #[test]
    fn product_denotations_count_substitution_instances(seed in any::<u64>()) {
        let mut r = rng(seed);
        let prims = [Type::primitive("p", 1), Type::primitive("q", 2), Type::primitive("t", 2)];
        let shape = ValuationShape::default();
        let mut w = Valuation::new();
        for p in &prims {
            let n = r.gen_range(1..=3);
            let graphs = (0..n).map(|_| shape.random_graph(p.rank(), &mut r)).collect();
            w.set(p, graphs).unwrap();
        }
        let mut body: Hypergraph<Type> = Hypergraph::discrete(r.gen_range(2..=4), vec![]);
        for _ in 0..r.gen_range(0..=3) {
            let t = prims.choose(&mut r).unwrap().clone();
            let att = shuffled(&mut r, body.node_count()).into_iter().take(t.rank()).collect();
            body.add_edge(t, att);
        }
        let ext = shuffled(&mut r, body.node_count()).into_iter().take(r.gen_range(0..=2)).collect();
        body.set_ext(ext);
        let product = Type::product(body.clone()).unwrap();

        // Replace the first remaining body edge, one edge at a time.
        let skeleton = body.map_labels(|e, t| Symbol::new(format!("m{e}"), t.rank()));
        let langs: Vec<Vec<Hypergraph<Symbol>>> = body
            .edges()
            .iter()
            .map(|e| w.get(e.label.as_primitive().unwrap()).cloned().collect())
            .collect();
        let mut seen = HashSet::new();
        let total: usize = langs.iter().map(Vec::len).product();
        for code in 0..total {
            let mut g = skeleton.clone();
            let mut rest = code;
            for l in &langs {
                g = g.replace(0, &l[rest % l.len()]).unwrap();
                rest /= l.len();
            }
            seen.insert(g.canonical_code());
        }
        prop_assert_eq!(denotation_enumerate(&w, &product).unwrap().len(), seen.len());
    }
}

fn random_translated(r: &mut ChaCha8Rng) -> Sequent {
    let k = r.gen_range(0..=4);
    translate_sequent(&random_lambek_sequent(&["p", "q"], k, 3, r))
}

fn decide(p: &Prover, s: &Sequent) -> Decision {
    let d = p.decide(s).unwrap();
    assert!(!matches!(d, Decision::BudgetExceeded(_)), "small sequents stay within budget");
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn derivability_ignores_antecedent_identifiers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let s = random_translated(&mut r);
        let g = &s.antecedent;
        let moved = Sequent::new(permuted(g, &shuffled(&mut r, g.node_count()), &shuffled(&mut r, g.edge_count())), s.succedent.clone()).unwrap();
        let p = Prover::new();
        prop_assert_eq!(decide(&p, &s), decide(&Prover::new(), &moved));
    }

    #[test]
    fn normalization_preserves_derivability(seed in any::<u64>()) {
        let s = random_translated(&mut rng(seed));
        let full = Prover::new().with_eager_normalization(false);
        prop_assert_eq!(decide(&full, &s), decide(&Prover::new().with_eager_normalization(false), &normalize(&s)));
        prop_assert_eq!(decide(&full, &s), decide(&Prover::new(), &s));
    }

    #[test]
    fn returned_trees_verify(seed in any::<u64>()) {
        let s = random_translated(&mut rng(seed));
        for eager in [true, false] {
            if let Verdict::Proved(t) = Prover::new().with_eager_normalization(eager).derive(&s).unwrap() {
                prop_assert!(check_derivation(&t).is_ok());
                prop_assert_eq!(t.conclusion.key(), s.key());
            }
        }
    }

    #[test]
    fn membership_ignores_graph_identifiers(seed in any::<u64>()) {
        let mut r = rng(seed);
        let g = random_l1_graph(&mut r, 3);
        let moved = permuted(&g, &shuffled(&mut r, g.node_count()), &shuffled(&mut r, g.edge_count()));
        let p = Prover::new();
        let a = hl_member(&hgr2(), &g, &p).unwrap();
        let b = hl_member(&hgr2(), &moved, &p).unwrap();
        prop_assert_eq!(a.is_member(), b.is_member());
        prop_assert_eq!(a.is_member(), is_bipartite(&g).unwrap());
        if let MemberVerdict::Member(m) = b {
            prop_assert!(hgr2().respects(&moved, &m.relabeling));
            prop_assert!(check_derivation(&m.derivation).is_ok());
        }
    }
}

/// Terminal graphs of leftmost derivations, without any deduplication of
/// sentential forms.
fn naive_language(g: &Hrg, max_edges: usize, max_steps: usize) -> BTreeSet<Vec<u8>> {
    let is_nt = |s: &Symbol| g.nonterminals().contains(s);
    let mut out = BTreeSet::new();
    let mut frontier = vec![Hypergraph::handle(g.start().clone())];
    for _ in 0..=max_steps {
        let mut next = Vec::new();
        for form in frontier {
            let terminals = form.edges().iter().filter(|e| !is_nt(&e.label)).count();
            if terminals > max_edges {
                continue;
            }
            match (0..form.edge_count()).find(|&e| is_nt(form.label(e))) {
                None => {
                    out.insert(form.canonical_code());
                }
                Some(e) => {
                    for (lhs, rhs) in g.productions() {
                        if lhs == form.label(e) {
                            next.push(form.replace(e, rhs).unwrap());
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

#[test]
fn generation_is_closed_under_derivation_steps() {
    for (g, bound) in [(sgr_hrg(), 7), (syntree_hrg(), 7)] {
        let steps = hrg_step_bound(&g, bound);
        let ours: BTreeSet<Vec<u8>> = hrg_generate(&g, bound, steps).iter().map(|h| h.canonical_code()).collect();
        assert_eq!(ours, naive_language(&g, bound, steps));
    }
}

#[test]
fn fixture_type_ranks() {
    for i in 1..=3 {
        assert_eq!(hgr1_q(i).rank(), 1);
    }
    for t in hgr1().type_set().iter().chain(hgr2().type_set().iter()) {
        assert_eq!(t.rank(), 2);
    }
    assert_eq!(hgr1().start().rank(), 0);
    assert_eq!(hgr2_start().rank(), 0);
    let r = Type::primitive("p", 1);
    for i in 1..=4 {
        assert_eq!(hgr2_r(i, &r).rank(), 1);
    }
    assert_eq!(sgr().type_set().len(), 3);
}

/// Non-derivable division-only sequents; a countermodel is searched for
/// each, and misses are reported rather than failed.
#[test]
fn countermodels_for_non_theorems() {
    let candidates: Vec<LSequent> = lambek_sequents(&["p", "q"], 2, 2)
        .into_iter()
        .filter(|s| {
            let has_product = |t: &LType| format!("{t}").contains('·');
            !s.antecedent.iter().any(has_product) && !has_product(&s.succedent) && !lambek_derive(&s.antecedent, &s.succedent)
        })
        .take(24)
        .collect();
    assert!(candidates.len() >= 20);
    let shape = ValuationShape::default();
    let mut found = 0;
    for s in &candidates {
        let t = translate_sequent(s);
        assert_eq!(Prover::new().decide(&t).unwrap(), Decision::NotDerivable, "{s}");
        match find_countermodel(&t, &shape, 200, 0) {
            Some(w) => {
                assert_eq!(sequent_holds(&w, &t), Truth::False, "a countermodel refutes {s}");
                found += 1;
            }
            None => eprintln!("no countermodel found for {s}"),
        }
    }
    eprintln!("countermodels found for {found} of {} non-theorems", candidates.len());
}

#[test]
fn fixture_symbols_are_binary() {
    assert_eq!(star().rank(), 2);
}

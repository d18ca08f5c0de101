//! Inputs shared by the engine benchmarks.

use hl_core::fixtures::{binary_census, hgr1_example_sequent, translate_sequent, LSequent, LType};
use hl_core::{Hypergraph, Sequent, Symbol};

/// The string graph of a word, one binary edge per letter.
pub fn word_graph(w: &str) -> Hypergraph<Symbol> {
    Hypergraph::string_graph(w.chars().map(|c| Symbol::new(c.to_string(), 2))).expect("letters are binary")
}

/// Canonical-form workload: every binary graph with up to three edges.
pub fn census() -> Vec<Hypergraph<Symbol>> {
    (1..=3).flat_map(binary_census).collect()
}

/// Derivation workload: the four-edge membership sequent and a translated
/// Lambek sequent proved by the product rule.
pub fn derive_inputs() -> Vec<(&'static str, Sequent)> {
    let p = LType::prim;
    let lifted = LSequent {
        antecedent: vec![p("np"), LType::under(p("np"), p("s"))],
        succedent: LType::prod(p("np"), LType::under(p("np"), p("s"))),
    };
    vec![("hgr1-example", hgr1_example_sequent()), ("lambek-product", translate_sequent(&lifted))]
}

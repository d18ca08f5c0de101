//! The hypergraph Lambek calculus: hypergraphs with hyperedge replacement,
//! types and sequents, a proof-search engine, HL-grammars, hyperedge
//! replacement grammars and finite language models.

pub mod calculus;
pub mod fixtures;
pub mod format;
pub mod grammar;
pub mod hypergraph;
pub mod matching;
pub mod models;
pub mod suite;
pub mod types;

pub use calculus::{derive, Budget, Decision, Derivation, Prover, RuleData, Verdict};
pub use grammar::{hl_member, HlGrammar, Hrg, MemberVerdict};
pub use hypergraph::{Edge, EdgeId, Hypergraph, Label, NodeId, Symbol};
pub use matching::Apportionment;
pub use models::{Truth, Valuation};
pub use types::{Sequent, Slot, Type, TypeKind};

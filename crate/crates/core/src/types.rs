//! Types and sequents of the hypergraph Lambek calculus.
//!
//! A [`Type`] is an immutable, reference-counted tree. Component graphs are
//! stored in canonical order and every type carries a canonical key, so
//! equality and hashing are structural equality up to isomorphism of the
//! component graphs.

use std::borrow::Cow;
use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::hypergraph::{push_bytes, push_u32, EdgeId, GraphError, Hypergraph, Label, Symbol, Violation};

/// Label of a denominator edge: either the distinguished `$` hole or a type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Hole(usize),
    Ty(Type),
}

impl Slot {
    pub fn as_type(&self) -> Option<&Type> {
        match self {
            Slot::Ty(t) => Some(t),
            Slot::Hole(_) => None,
        }
    }
}

impl Label for Slot {
    fn rank(&self) -> usize {
        match self {
            Slot::Hole(r) => *r,
            Slot::Ty(t) => t.rank(),
        }
    }

    fn key(&self) -> Cow<'_, [u8]> {
        match self {
            Slot::Hole(r) => {
                let mut k = vec![b'H'];
                push_u32(&mut k, *r as u32);
                Cow::Owned(k)
            }
            Slot::Ty(t) => Cow::Borrowed(t.key()),
        }
    }
}

impl From<Type> for Slot {
    fn from(t: Type) -> Self {
        Slot::Ty(t)
    }
}

#[derive(Clone, Debug)]
pub enum TypeKind {
    Primitive(Symbol),
    /// `num ÷ den`; `hole` is the `$` edge of `den`.
    Division { num: Type, den: Hypergraph<Slot>, hole: EdgeId },
    Product(Hypergraph<Type>),
}

#[derive(Debug)]
struct TypeNode {
    kind: TypeKind,
    key: Vec<u8>,
    hash: u64,
    rank: usize,
    connectives: usize,
    atoms: Balance,
}

#[derive(Clone)]
pub struct Type(Arc<TypeNode>);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TypeViolation {
    #[error("malformed component graph: {0}")]
    Graph(#[from] Violation),
    #[error("a division denominator needs exactly one $ edge, found {0}")]
    HoleCount(usize),
    #[error("numerator/denominator rank: numerator has rank {numerator}, denominator graph has rank {denominator}")]
    NumeratorRank { numerator: usize, denominator: usize },
    #[error("$ is only allowed in a division denominator")]
    StrayHole,
    #[error("sequent rank mismatch: antecedent has rank {antecedent}, succedent has rank {succedent}")]
    SequentRank { antecedent: usize, succedent: usize },
    #[error("primitive type names must be nonempty and differ from $")]
    BadPrimitive,
}

impl Type {
    pub fn primitive(name: impl Into<String>, rank: usize) -> Type {
        let sym = Symbol::new(name, rank);
        let mut key = vec![b'P'];
        push_bytes(&mut key, sym.name().as_bytes());
        push_u32(&mut key, rank as u32);
        let mut atoms = Balance::default();
        atoms.add(&sym, 1);
        Type::finish(TypeKind::Primitive(sym), key, rank, 0, atoms)
    }

    /// `num ÷ den`. The denominator must contain exactly one hole and have
    /// the numerator's rank; the type's rank is the rank of the hole.
    pub fn division(num: Type, den: Hypergraph<Slot>) -> Result<Type, TypeViolation> {
        den.validate()?;
        let holes: Vec<EdgeId> =
            (0..den.edge_count()).filter(|&e| matches!(den.label(e), Slot::Hole(_))).collect();
        if holes.len() != 1 {
            return Err(TypeViolation::HoleCount(holes.len()));
        }
        if num.rank() != den.rank() {
            return Err(TypeViolation::NumeratorRank { numerator: num.rank(), denominator: den.rank() });
        }
        let den = den.canonical_graph();
        let hole = (0..den.edge_count()).find(|&e| matches!(den.label(e), Slot::Hole(_))).unwrap();
        let rank = den.att(hole).len();
        let mut key = vec![b'D'];
        push_bytes(&mut key, num.key());
        push_bytes(&mut key, &den.canonical_code());
        let mut connectives = 1 + num.connectives();
        let mut atoms = num.atoms().clone();
        for edge in den.edges() {
            if let Slot::Ty(t) = &edge.label {
                connectives += t.connectives();
                atoms.sub_all(t.atoms());
            }
        }
        Ok(Type::finish(TypeKind::Division { num, den, hole }, key, rank, connectives, atoms))
    }

    /// `×(body)`.
    pub fn product(body: Hypergraph<Type>) -> Result<Type, TypeViolation> {
        body.validate()?;
        let body = body.canonical_graph();
        let mut key = vec![b'X'];
        push_bytes(&mut key, &body.canonical_code());
        let mut connectives = 1;
        let mut atoms = Balance::default();
        for edge in body.edges() {
            connectives += edge.label.connectives();
            atoms.add_all(edge.label.atoms());
        }
        let rank = body.rank();
        Ok(Type::finish(TypeKind::Product(body), key, rank, connectives, atoms))
    }

    fn finish(kind: TypeKind, key: Vec<u8>, rank: usize, connectives: usize, atoms: Balance) -> Type {
        let mut h = DefaultHasher::new();
        key.hash(&mut h);
        Type(Arc::new(TypeNode { kind, hash: h.finish(), key, rank, connectives, atoms }))
    }

    pub fn kind(&self) -> &TypeKind {
        &self.0.kind
    }

    pub fn rank(&self) -> usize {
        self.0.rank
    }

    /// Number of `÷` and `×` constructors.
    pub fn connectives(&self) -> usize {
        self.0.connectives
    }

    /// Signed occurrence counts of primitive types: `+1` for a primitive,
    /// numerator minus denominator types for a division, the sum over the
    /// body for a product.
    pub fn atoms(&self) -> &Balance {
        &self.0.atoms
    }

    pub fn key(&self) -> &[u8] {
        &self.0.key
    }

    pub fn as_primitive(&self) -> Option<&Symbol> {
        match &self.0.kind {
            TypeKind::Primitive(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_primitive(&self) -> bool {
        self.as_primitive().is_some()
    }

    pub fn as_division(&self) -> Option<(&Type, &Hypergraph<Slot>, EdgeId)> {
        match &self.0.kind {
            TypeKind::Division { num, den, hole } => Some((num, den, *hole)),
            _ => None,
        }
    }

    pub fn as_product(&self) -> Option<&Hypergraph<Type>> {
        match &self.0.kind {
            TypeKind::Product(body) => Some(body),
            _ => None,
        }
    }

    /// For a division `N ÷ D`, the graph `D[d0/f]` with the remaining
    /// denominator edges kept as type-labeled edges.
    pub fn plug(&self, f: &Hypergraph<Type>) -> Result<Hypergraph<Type>, GraphError> {
        let (_, den, hole) = self.as_division().expect("plug needs a division type");
        let handles: Vec<Option<Hypergraph<Type>>> = den
            .edges()
            .iter()
            .map(|e| e.label.as_type().map(|t| Hypergraph::handle(t.clone())))
            .collect();
        let parts: Vec<&Hypergraph<Type>> =
            handles.iter().enumerate().map(|(e, h)| if e == hole { f } else { h.as_ref().unwrap() }).collect();
        den.instantiate(&parts)
    }

    /// For a division `N ÷ D`, the graph `D[d0 ≔ N ÷ D]`.
    pub fn unfolded_denominator(&self) -> Hypergraph<Type> {
        let (_, den, _) = self.as_division().expect("needs a division type");
        den.map_labels(|_, s| match s {
            Slot::Hole(_) => self.clone(),
            Slot::Ty(t) => t.clone(),
        })
    }

    /// Every primitive occurring in this type.
    pub fn primitives(&self, out: &mut Vec<Symbol>) {
        match &self.0.kind {
            TypeKind::Primitive(s) => {
                if !out.contains(s) {
                    out.push(s.clone());
                }
            }
            TypeKind::Division { num, den, .. } => {
                num.primitives(out);
                for e in den.edges() {
                    if let Slot::Ty(t) = &e.label {
                        t.primitives(out);
                    }
                }
            }
            TypeKind::Product(body) => {
                for e in body.edges() {
                    e.label.primitives(out);
                }
            }
        }
    }

    /// Whether the type contains no division.
    pub fn is_division_free(&self) -> bool {
        match &self.0.kind {
            TypeKind::Primitive(_) => true,
            TypeKind::Division { .. } => false,
            TypeKind::Product(body) => body.edges().iter().all(|e| e.label.is_division_free()),
        }
    }
}

impl PartialEq for Type {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.hash == other.0.hash && self.0.key == other.0.key)
    }
}

impl Eq for Type {}

impl Hash for Type {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for Type {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Type {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.key.cmp(&other.0.key)
    }
}

impl Label for Type {
    fn rank(&self) -> usize {
        self.0.rank
    }

    fn key(&self) -> Cow<'_, [u8]> {
        Cow::Borrowed(&self.0.key)
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::format::write_type(f, self)
    }
}

/// Multiset of primitive types with integer multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Balance(BTreeMap<Symbol, i64>);

impl Balance {
    pub fn add(&mut self, p: &Symbol, n: i64) {
        let slot = self.0.entry(p.clone()).or_insert(0);
        *slot += n;
        if *slot == 0 {
            self.0.remove(p);
        }
    }

    pub fn add_all(&mut self, other: &Balance) {
        for (p, &n) in &other.0 {
            self.add(p, n);
        }
    }

    pub fn sub_all(&mut self, other: &Balance) {
        for (p, &n) in &other.0 {
            self.add(p, -n);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, p: &Symbol) -> i64 {
        self.0.get(p).copied().unwrap_or(0)
    }
}

/// `H → A`.
#[derive(Clone, Debug)]
pub struct Sequent {
    pub antecedent: Hypergraph<Type>,
    pub succedent: Type,
}

impl Sequent {
    pub fn new(antecedent: Hypergraph<Type>, succedent: Type) -> Result<Sequent, TypeViolation> {
        let s = Sequent { antecedent, succedent };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), TypeViolation> {
        self.antecedent.validate()?;
        if self.antecedent.rank() != self.succedent.rank() {
            return Err(TypeViolation::SequentRank {
                antecedent: self.antecedent.rank(),
                succedent: self.succedent.rank(),
            });
        }
        Ok(())
    }

    pub fn connectives(&self) -> usize {
        self.succedent.connectives() + self.antecedent.edges().iter().map(|e| e.label.connectives()).sum::<usize>()
    }

    /// Succedent atoms minus antecedent atoms. Zero for every derivable sequent.
    pub fn balance(&self) -> Balance {
        let mut b = self.succedent.atoms().clone();
        for e in self.antecedent.edges() {
            b.sub_all(e.label.atoms());
        }
        b
    }

    /// Equal iff the antecedents are isomorphic and the succedents equal.
    pub fn key(&self) -> Vec<u8> {
        let mut k = self.antecedent.canonical_code();
        k.push(b'|');
        k.extend_from_slice(self.succedent.key());
        k
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::format::write_sequent(f, self)
    }
}

/// A type as written, before any well-formedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExpr {
    Primitive(String, usize),
    Division(Box<TypeExpr>, Hypergraph<SlotExpr>),
    Product(Hypergraph<SlotExpr>),
}

/// An edge label as written: `$/r` or a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotExpr {
    Hole(usize),
    Ty(TypeExpr),
}

impl TypeExpr {
    /// Rank as declared by the expression itself.
    pub fn declared_rank(&self) -> usize {
        match self {
            TypeExpr::Primitive(_, r) => *r,
            TypeExpr::Division(_, den) => den
                .edges()
                .iter()
                .find(|e| matches!(e.label, SlotExpr::Hole(_)))
                .map_or(0, |e| e.att.len()),
            TypeExpr::Product(body) => body.rank(),
        }
    }

    /// Checks every clause recursively and builds the type.
    pub fn build(&self) -> Result<Type, TypeViolation> {
        match self {
            TypeExpr::Primitive(name, rank) => {
                if name.is_empty() || name == crate::hypergraph::HOLE_NAME {
                    return Err(TypeViolation::BadPrimitive);
                }
                Ok(Type::primitive(name.clone(), *rank))
            }
            TypeExpr::Division(num, den) => {
                let num = num.build()?;
                let den = den.try_map_labels(|_, s| match s {
                    SlotExpr::Hole(r) => Ok(Slot::Hole(*r)),
                    SlotExpr::Ty(t) => t.build().map(Slot::Ty),
                })?;
                Type::division(num, den)
            }
            TypeExpr::Product(body) => Type::product(build_graph(body)?),
        }
    }

    pub fn validate(&self) -> Result<(), TypeViolation> {
        self.build().map(|_| ())
    }
}

/// Builds a type-labeled graph, rejecting `$` edges.
pub fn build_graph(g: &Hypergraph<SlotExpr>) -> Result<Hypergraph<Type>, TypeViolation> {
    g.try_map_labels(|_, s| match s {
        SlotExpr::Hole(_) => Err(TypeViolation::StrayHole),
        SlotExpr::Ty(t) => t.build(),
    })
}

impl Label for SlotExpr {
    fn rank(&self) -> usize {
        match self {
            SlotExpr::Hole(r) => *r,
            SlotExpr::Ty(t) => t.declared_rank(),
        }
    }

    fn key(&self) -> Cow<'_, [u8]> {
        Cow::Owned(format!("{self:?}").into_bytes())
    }
}

impl From<&Type> for TypeExpr {
    fn from(t: &Type) -> Self {
        match t.kind() {
            TypeKind::Primitive(s) => TypeExpr::Primitive(s.name().to_string(), s.rank()),
            TypeKind::Division { num, den, .. } => TypeExpr::Division(
                Box::new(num.into()),
                den.map_labels(|_, s| match s {
                    Slot::Hole(r) => SlotExpr::Hole(*r),
                    Slot::Ty(t) => SlotExpr::Ty(t.into()),
                }),
            ),
            TypeKind::Product(body) => TypeExpr::Product(body.map_labels(|_, t| SlotExpr::Ty(t.into()))),
        }
    }
}

/// Denominator `SG(l1 … ln)` where `None` marks the hole. Rank-2 only.
pub fn string_denominator(items: &[Option<Type>]) -> Result<Hypergraph<Slot>, GraphError> {
    Hypergraph::string_graph(items.iter().map(|t| match t {
        Some(t) => Slot::Ty(t.clone()),
        None => Slot::Hole(2),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::Edge;

    fn p(name: &str, rank: usize) -> Type {
        Type::primitive(name, rank)
    }

    fn sg(types: &[Type]) -> Hypergraph<Type> {
        Hypergraph::string_graph(types.iter().cloned()).unwrap()
    }

    #[test]
    fn ranks() {
        assert_eq!(p("s", 0).rank(), 0);

        // p ÷ (one node u1 external, carrying $; u2 carrying p)
        let q2_den = Hypergraph::from_parts(
            2,
            vec![
                Edge { label: Slot::Hole(1), att: vec![0] },
                Edge { label: Slot::Ty(p("p", 1)), att: vec![1] },
            ],
            vec![0],
        );
        let q2 = Type::division(p("p", 1), q2_den).unwrap();
        assert_eq!(q2.rank(), 1);
        assert_eq!(q2.connectives(), 1);

        // Two parallel strings.
        let str_ = p("str", 2);
        let par = Hypergraph::from_parts(
            2,
            vec![Edge { label: str_.clone(), att: vec![0, 1] }, Edge { label: str_, att: vec![0, 1] }],
            vec![0, 1],
        );
        assert_eq!(Type::product(par).unwrap().rank(), 2);
    }

    #[test]
    fn division_checks() {
        let s = p("s", 2);
        let two_holes = Hypergraph::string_graph([Slot::Hole(2), Slot::Hole(2)]).unwrap();
        assert!(matches!(Type::division(s.clone(), two_holes), Err(TypeViolation::HoleCount(2))));
        let den = Hypergraph::from_parts(1, vec![Edge { label: Slot::Hole(1), att: vec![0] }], vec![0]);
        let err = Type::division(s, den).unwrap_err();
        assert!(err.to_string().contains("numerator/denominator rank"));
    }

    #[test]
    fn sgr_sequent() {
        let (s, pp) = (p("s", 2), p("p", 2));
        let q = Type::division(s.clone(), string_denominator(&[None, Some(s.clone()), Some(pp.clone())]).unwrap()).unwrap();
        let seq = Sequent::new(sg(&[q.clone(), q.clone(), s.clone(), pp.clone(), pp.clone()]), s.clone()).unwrap();
        assert_eq!(seq.connectives(), 2);
        assert!(seq.balance().is_zero());
        let one = Sequent::new(sg(&[q, s.clone(), pp]), s).unwrap();
        assert_eq!(one.connectives(), 1);
    }

    #[test]
    fn sequent_rank_checked() {
        let err = Sequent::new(Hypergraph::handle(p("p", 1)), p("q", 2)).unwrap_err();
        assert!(matches!(err, TypeViolation::SequentRank { antecedent: 1, succedent: 2 }));
    }

    #[test]
    fn equality_is_up_to_isomorphism() {
        let (a, b) = (p("a", 2), p("b", 2));
        // Same path built with different node numbering.
        let g1 = sg(&[a.clone(), b.clone()]);
        let g2 = Hypergraph::from_parts(
            3,
            vec![Edge { label: b.clone(), att: vec![0, 2] }, Edge { label: a.clone(), att: vec![1, 0] }],
            vec![1, 2],
        );
        assert_eq!(Type::product(g1.clone()).unwrap(), Type::product(g2).unwrap());
        assert_ne!(Type::product(g1).unwrap(), Type::product(sg(&[b, a])).unwrap());
        assert_ne!(p("p", 1), p("p", 2));
    }

    #[test]
    fn expressions_reject_stray_holes() {
        let body = Hypergraph::handle(SlotExpr::Hole(1));
        assert_eq!(TypeExpr::Product(body).validate(), Err(TypeViolation::StrayHole));
        assert_eq!(TypeExpr::Primitive("$".into(), 1).validate(), Err(TypeViolation::BadPrimitive));
    }
}

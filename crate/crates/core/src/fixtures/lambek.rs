//! The Lambek calculus over strings and its translation into string-graph
//! sequents.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::hypergraph::Hypergraph;
use crate::types::{string_denominator, Sequent, Type};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LType {
    Prim(String),
    /// `A \ B`, stored as `(A, B)`.
    Under(Box<LType>, Box<LType>),
    /// `B / A`, stored as `(B, A)`.
    Over(Box<LType>, Box<LType>),
    /// `A · B`.
    Prod(Box<LType>, Box<LType>),
}

impl LType {
    pub fn prim(name: &str) -> LType {
        LType::Prim(name.into())
    }

    /// `a \ b`.
    pub fn under(a: LType, b: LType) -> LType {
        LType::Under(Box::new(a), Box::new(b))
    }

    /// `b / a`.
    pub fn over(b: LType, a: LType) -> LType {
        LType::Over(Box::new(b), Box::new(a))
    }

    pub fn prod(a: LType, b: LType) -> LType {
        LType::Prod(Box::new(a), Box::new(b))
    }

    pub fn connectives(&self) -> usize {
        match self {
            LType::Prim(_) => 0,
            LType::Under(a, b) | LType::Over(a, b) | LType::Prod(a, b) => 1 + a.connectives() + b.connectives(),
        }
    }
}

impl fmt::Display for LType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LType::Prim(p) => write!(f, "{p}"),
            LType::Under(a, b) => write!(f, "({a} \\ {b})"),
            LType::Over(b, a) => write!(f, "({b} / {a})"),
            LType::Prod(a, b) => write!(f, "({a} · {b})"),
        }
    }
}

/// `Γ → C` with `Γ` nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LSequent {
    pub antecedent: Vec<LType>,
    pub succedent: LType,
}

impl LSequent {
    pub fn connectives(&self) -> usize {
        self.antecedent.iter().map(LType::connectives).sum::<usize>() + self.succedent.connectives()
    }
}

impl fmt::Display for LSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ante: Vec<String> = self.antecedent.iter().map(ToString::to_string).collect();
        write!(f, "{} → {}", ante.join(", "), self.succedent)
    }
}

type LMemo = HashMap<(Vec<LType>, LType), bool>;

/// Exhaustive backward search in the calculus with nonempty antecedents.
/// Every rule removes a connective, so the search terminates.
pub fn lambek_derive(antecedent: &[LType], succedent: &LType) -> bool {
    assert!(!antecedent.is_empty(), "antecedents are nonempty");
    let memo = RefCell::new(LMemo::new());
    prove(antecedent, succedent, &memo)
}

fn prove(g: &[LType], c: &LType, memo: &RefCell<LMemo>) -> bool {
    let key = (g.to_vec(), c.clone());
    if let Some(&r) = memo.borrow().get(&key) {
        return r;
    }
    let r = search(g, c, memo);
    memo.borrow_mut().insert(key, r);
    r
}

fn splice(g: &[LType], from: usize, to: usize, mid: &[LType]) -> Vec<LType> {
    let mut out = g[..from].to_vec();
    out.extend_from_slice(mid);
    out.extend_from_slice(&g[to..]);
    out
}

fn search(g: &[LType], c: &LType, memo: &RefCell<LMemo>) -> bool {
    if g.len() == 1 && &g[0] == c {
        return true;
    }
    match c {
        LType::Under(a, b) => {
            if prove(&splice(g, 0, 0, &[(**a).clone()]), b, memo) {
                return true;
            }
        }
        LType::Over(b, a) => {
            if prove(&splice(g, g.len(), g.len(), &[(**a).clone()]), b, memo) {
                return true;
            }
        }
        LType::Prod(a, b) => {
            if (1..g.len()).any(|k| prove(&g[..k], a, memo) && prove(&g[k..], b, memo)) {
                return true;
            }
        }
        LType::Prim(_) => {}
    }
    for (i, t) in g.iter().enumerate() {
        match t {
            LType::Prod(a, b) => {
                if prove(&splice(g, i, i + 1, &[(**a).clone(), (**b).clone()]), c, memo) {
                    return true;
                }
            }
            // Π, A\B with Π = g[j..i] nonempty.
            LType::Under(a, b) => {
                for j in 0..i {
                    if prove(&g[j..i], a, memo) && prove(&splice(g, j, i + 1, &[(**b).clone()]), c, memo) {
                        return true;
                    }
                }
            }
            // B/A, Π with Π = g[i+1..k] nonempty.
            LType::Over(b, a) => {
                for k in i + 2..=g.len() {
                    if prove(&g[i + 1..k], a, memo) && prove(&splice(g, i, k, &[(**b).clone()]), c, memo) {
                        return true;
                    }
                }
            }
            LType::Prim(_) => {}
        }
    }
    false
}

/// Primitives become rank-2 primitives, `A\B ↦ B ÷ SG(A $)`,
/// `B/A ↦ B ÷ SG($ A)` and `A·B ↦ ×(SG(A B))`.
pub fn translate_lambek(t: &LType) -> Type {
    match t {
        LType::Prim(p) => Type::primitive(p.as_str(), 2),
        LType::Under(a, b) => Type::division(
            translate_lambek(b),
            string_denominator(&[Some(translate_lambek(a)), None]).expect("binary slots"),
        )
        .expect("string denominators have rank 2"),
        LType::Over(b, a) => Type::division(
            translate_lambek(b),
            string_denominator(&[None, Some(translate_lambek(a))]).expect("binary slots"),
        )
        .expect("string denominators have rank 2"),
        LType::Prod(a, b) => {
            Type::product(Hypergraph::string_graph([translate_lambek(a), translate_lambek(b)]).expect("binary types"))
                .expect("string graphs are valid")
        }
    }
}

pub fn translate_sequent(s: &LSequent) -> Sequent {
    let g = Hypergraph::string_graph(s.antecedent.iter().map(translate_lambek)).expect("binary types");
    Sequent::new(g, translate_lambek(&s.succedent)).expect("rank 2 on both sides")
}

/// All types over `prims` with exactly `k` connectives.
fn types_with(prims: &[&str], k: usize, cache: &mut Vec<Vec<LType>>) -> Vec<LType> {
    while cache.len() <= k {
        let n = cache.len();
        let mut level = Vec::new();
        if n == 0 {
            level.extend(prims.iter().map(|p| LType::prim(p)));
        } else {
            for i in 0..n {
                let (left, right) = (cache[i].clone(), cache[n - 1 - i].clone());
                for a in &left {
                    for b in &right {
                        level.push(LType::under(a.clone(), b.clone()));
                        level.push(LType::over(a.clone(), b.clone()));
                        level.push(LType::prod(a.clone(), b.clone()));
                    }
                }
            }
        }
        cache.push(level);
    }
    cache[k].clone()
}

/// Every sequent over `prims` with at most `max_len` antecedent types and at
/// most `max_connectives` connectives in total.
pub fn lambek_sequents(prims: &[&str], max_connectives: usize, max_len: usize) -> Vec<LSequent> {
    let mut cache = Vec::new();
    let by_count: Vec<Vec<LType>> = (0..=max_connectives).map(|k| types_with(prims, k, &mut cache)).collect();
    let mut out = Vec::new();
    for len in 1..=max_len {
        // Distribute the connective budget over len + 1 positions.
        let mut counts = vec![0usize; len + 1];
        'next: loop {
            let mut partial: Vec<Vec<LType>> = vec![Vec::new()];
            for &k in &counts {
                partial = partial
                    .into_iter()
                    .flat_map(|p| {
                        by_count[k].iter().map(move |t| {
                            let mut q = p.clone();
                            q.push(t.clone());
                            q
                        })
                    })
                    .collect();
            }
            for mut seq in partial {
                let succedent = seq.pop().unwrap();
                out.push(LSequent { antecedent: seq, succedent });
            }
            let mut i = 0;
            loop {
                if i == counts.len() {
                    break 'next;
                }
                counts[i] += 1;
                if counts.iter().sum::<usize>() <= max_connectives {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
        }
    }
    out
}

fn random_type(prims: &[&str], k: usize, rng: &mut impl Rng) -> LType {
    if k == 0 {
        return LType::prim(prims[rng.gen_range(0..prims.len())]);
    }
    let left = rng.gen_range(0..k);
    let (a, b) = (random_type(prims, left, rng), random_type(prims, k - 1 - left, rng));
    match rng.gen_range(0..3) {
        0 => LType::under(a, b),
        1 => LType::over(a, b),
        _ => LType::prod(a, b),
    }
}

/// A random sequent with exactly `connectives` connectives and at most
/// `max_len` antecedent types.
pub fn random_lambek_sequent(prims: &[&str], connectives: usize, max_len: usize, rng: &mut impl Rng) -> LSequent {
    let len = rng.gen_range(1..=max_len.max(1));
    let mut counts = vec![0usize; len + 1];
    for _ in 0..connectives {
        let i = rng.gen_range(0..counts.len());
        counts[i] += 1;
    }
    let mut types: Vec<LType> = counts.iter().map(|&k| random_type(prims, k, rng)).collect();
    let succedent = types.pop().unwrap();
    LSequent { antecedent: types, succedent }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> LType {
        LType::prim(n)
    }

    #[test]
    fn textbook_sequents() {
        let (np, n, s) = (p("np"), p("n"), p("s"));
        assert!(lambek_derive(&[LType::over(np.clone(), n.clone()), n.clone(), LType::under(np.clone(), s.clone())], &s));
        assert!(lambek_derive(std::slice::from_ref(&np), &LType::over(s.clone(), LType::under(np.clone(), s.clone()))));
        assert!(lambek_derive(&[p("p")], &LType::over(LType::prod(p("p"), p("q")), p("q"))));
        assert!(!lambek_derive(&[p("p")], &p("q")));
        assert!(!lambek_derive(&[p("p"), p("q")], &LType::prod(p("q"), p("p"))));
    }

    #[test]
    fn translations() {
        let t = translate_lambek(&LType::under(p("np"), p("s")));
        let (num, den, hole) = t.as_division().unwrap();
        assert_eq!(num, &Type::primitive("s", 2));
        assert_eq!(den.edge_count(), 2);
        // The hole is the second edge of the string.
        let second = den.edges().iter().position(|e| e.att[0] != den.ext()[0]).unwrap();
        assert_eq!(hole, second);
        assert_eq!(translate_lambek(&LType::prod(p("p"), p("q"))).connectives(), 1);
    }

    #[test]
    fn sequent_enumeration() {
        let all = lambek_sequents(&["p"], 0, 2);
        assert_eq!(all.len(), 2);
        let one = lambek_sequents(&["p", "q"], 1, 1);
        // 4 without connectives; with one, 12 compound types in either
        // position against 2 primitives.
        assert_eq!(one.len(), 4 + 2 * 12 * 2);
        assert!(one.iter().all(|s| s.connectives() <= 1));
    }
}

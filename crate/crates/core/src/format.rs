//! Text formats.
//!
//! Graphs (`.hgf`) are statements separated by newlines or `;`:
//!
//! ```text
//! nodes: u v w
//! ext: u w
//! edge e0 a/2 : u v
//! edge e1 b/2 : v w
//! ```
//!
//! Inline graphs put the same statements in braces:
//! `{nodes: u v; ext: u v; edge e0 a/2 : u v}`. Types are `name/rank` (or
//! `prim name/rank`), `div(N ; {graph})` and `prod({graph})`; the hole of a
//! denominator is `$/rank`. Sequents are `SEQ {graph} |- type`.
//!
//! HL-grammars (`.hlg`) have a `start: <type>` line, an optional
//! `alphabet: a/2 b/2` line and lines `map a/2 -> <type>`. HRGs (`.hrg`) have
//! `start: S`, `nonterminal: …`, `terminal: …`, optional `fixed: …` and lines
//! `prod S -> {graph}`. Valuations (`.val`) have lines `p/1 = {g.hgf, {graph}}`
//! with paths relative to the valuation file. `#` starts a comment.
//!
//! Printers emit node names `n0 n1 …` and edge names `e0 e1 …` in storage
//! order; the `canonical` printers first bring graphs into canonical order,
//! so their output is byte-identical for isomorphic inputs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::path::Path;

use thiserror::Error;

use crate::grammar::{HlGrammar, Hrg};
use crate::hypergraph::{Edge, Hypergraph, Label, Symbol, Violation, HOLE_NAME};
use crate::models::Valuation;
use crate::types::{build_graph, Sequent, Slot, SlotExpr, Type, TypeExpr, TypeKind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Punct(char),
    Arrow,
    Turnstile,
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Turnstile => write!(f, "`|-`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '\'' | '*' | '.' | '+' | '^' | '!' | '?' | '@' | '~') || (!c.is_ascii() && !c.is_whitespace())
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push((Tok::Arrow, li + 1, col));
                i += 2;
            } else if c == '|' && chars.get(i + 1) == Some(&'-') {
                out.push((Tok::Turnstile, li + 1, col));
                i += 2;
            } else if "{}();:/,=$".contains(c) {
                out.push((Tok::Punct(c), li + 1, col));
                i += 1;
            } else if is_word_char(c) || c == '-' {
                let start = i;
                while i < chars.len() && (is_word_char(chars[i]) || (chars[i] == '-' && chars.get(i + 1) != Some(&'>'))) {
                    i += 1;
                }
                out.push((Tok::Word(chars[start..i].iter().collect()), li + 1, col));
            } else {
                return Err(ParseError::new(li + 1, col, format!("unexpected character `{c}`")));
            }
        }
        out.push((Tok::Newline, li + 1, chars.len() + 1));
    }
    let (l, c) = out.last().map_or((1, 1), |t| (t.1, t.2));
    out.push((Tok::Eof, l, c));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

/// A parsed graph with the source position of each edge.
type Located = (Hypergraph<SlotExpr>, Vec<(usize, usize)>);

impl Parser {
    fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: tokenize(text)?, pos: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        (self.toks[self.pos].1, self.toks[self.pos].2)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        let (l, c) = self.here();
        Err(ParseError::new(l, c, msg))
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while *self.peek() == Tok::Newline {
            self.pos += 1;
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_newlines();
        if *self.peek() == Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`, found {}", self.peek()))
        }
    }

    fn word(&mut self) -> Result<String, ParseError> {
        self.skip_newlines();
        match self.bump() {
            Tok::Word(w) => Ok(w),
            t => {
                self.pos -= usize::from(t != Tok::Eof);
                self.err(format!("expected a name, found {t}"))
            }
        }
    }

    fn number(&mut self) -> Result<usize, ParseError> {
        let (l, c) = {
            self.skip_newlines();
            self.here()
        };
        let w = self.word()?;
        w.parse().map_err(|_| ParseError::new(l, c, format!("expected a rank, found `{w}`")))
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        self.skip_newlines();
        match self.peek() {
            Tok::Word(w) if w == kw => {
                self.bump();
                Ok(())
            }
            t => self.err(format!("expected `{kw}`, found {t}")),
        }
    }

    fn at_word(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Word(w) if w == kw)
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Newline | Tok::Eof => {
                self.skip_newlines();
                Ok(())
            }
            t => self.err(format!("expected end of line, found {t}")),
        }
    }

    /// `name/rank`.
    fn symbol(&mut self) -> Result<Symbol, ParseError> {
        self.skip_newlines();
        let name = if *self.peek() == Tok::Punct('$') {
            self.bump();
            HOLE_NAME.to_string()
        } else {
            self.word()?
        };
        self.expect_punct('/')?;
        Ok(Symbol::new(name, self.number()?))
    }

    fn slot(&mut self) -> Result<SlotExpr, ParseError> {
        self.skip_newlines();
        if *self.peek() == Tok::Punct('$') {
            self.bump();
            self.expect_punct('/')?;
            return Ok(SlotExpr::Hole(self.number()?));
        }
        Ok(SlotExpr::Ty(self.type_expr()?))
    }

    fn type_expr(&mut self) -> Result<TypeExpr, ParseError> {
        self.skip_newlines();
        let next_is_paren = matches!(self.toks.get(self.pos + 1), Some((Tok::Punct('('), _, _)));
        if self.at_word("div") && next_is_paren {
            self.bump();
            self.expect_punct('(')?;
            let num = self.type_expr()?;
            self.expect_punct(';')?;
            let den = self.inline_graph()?;
            self.expect_punct(')')?;
            return Ok(TypeExpr::Division(Box::new(num), den.0));
        }
        if self.at_word("prod") && next_is_paren {
            self.bump();
            self.expect_punct('(')?;
            let body = self.inline_graph()?;
            self.expect_punct(')')?;
            return Ok(TypeExpr::Product(body.0));
        }
        let next_is_word = matches!(self.toks.get(self.pos + 1), Some((Tok::Word(_), _, _)));
        if self.at_word("prim") && next_is_word {
            self.bump();
        }
        let name = self.word()?;
        self.expect_punct('/')?;
        Ok(TypeExpr::Primitive(name, self.number()?))
    }

    /// A type, checked.
    fn ty(&mut self) -> Result<Type, ParseError> {
        self.skip_newlines();
        let (l, c) = self.here();
        let e = self.type_expr()?;
        e.build().map_err(|v| ParseError::new(l, c, v.to_string()))
    }

    fn inline_graph(&mut self) -> Result<Located, ParseError> {
        self.expect_punct('{')?;
        let g = self.graph_body(true)?;
        self.expect_punct('}')?;
        Ok(g)
    }

    /// Statements up to `}` (inline) or end of input.
    fn graph_body(&mut self, inline: bool) -> Result<Located, ParseError> {
        let mut names: HashMap<String, usize> = HashMap::new();
        let mut node_count = 0;
        let mut ext = Vec::new();
        let mut edges = Vec::new();
        let mut edge_names: HashMap<String, (usize, usize)> = HashMap::new();
        let mut positions = Vec::new();
        let mut seen_nodes = false;
        let mut seen_ext = false;
        loop {
            self.skip_newlines();
            match self.peek().clone() {
                Tok::Punct('}') if inline => break,
                Tok::Eof if !inline => break,
                Tok::Punct(';') => {
                    self.bump();
                    continue;
                }
                Tok::Word(w) if w == "nodes" => {
                    if seen_nodes {
                        return self.err("duplicate `nodes:` statement");
                    }
                    seen_nodes = true;
                    self.bump();
                    self.expect_punct(':')?;
                    while let Tok::Word(n) = self.peek().clone() {
                        if names.insert(n.clone(), node_count).is_some() {
                            return self.err(format!("node `{n}` declared twice"));
                        }
                        node_count += 1;
                        self.bump();
                    }
                }
                Tok::Word(w) if w == "ext" => {
                    if seen_ext {
                        return self.err("duplicate `ext:` statement");
                    }
                    seen_ext = true;
                    self.bump();
                    self.expect_punct(':')?;
                    while let Tok::Word(n) = self.peek().clone() {
                        match names.get(&n) {
                            Some(&v) => ext.push(v),
                            None => return self.err(format!("unknown node `{n}`")),
                        }
                        self.bump();
                    }
                }
                Tok::Word(w) if w == "edge" => {
                    let pos = self.here();
                    self.bump();
                    let name = self.word()?;
                    if edge_names.insert(name.clone(), pos).is_some() {
                        return self.err(format!("edge `{name}` declared twice"));
                    }
                    let label = self.slot()?;
                    self.expect_punct(':')?;
                    let mut att = Vec::new();
                    while let Tok::Word(n) = self.peek().clone() {
                        match names.get(&n) {
                            Some(&v) => att.push(v),
                            None => return self.err(format!("unknown node `{n}`")),
                        }
                        self.bump();
                    }
                    edges.push(Edge { label, att });
                    positions.push(pos);
                }
                t => return self.err(format!("expected `nodes:`, `ext:` or `edge`, found {t}")),
            }
            match self.peek() {
                Tok::Punct(';') | Tok::Newline => {
                    self.bump();
                }
                Tok::Punct('}') if inline => {}
                Tok::Eof => {}
                t => return self.err(format!("expected `;` or end of line, found {t}")),
            }
        }
        let g = Hypergraph::from_parts(node_count, edges, ext);
        if let Err(v) = g.validate() {
            let at = match &v {
                Violation::RankMismatch { edge, .. }
                | Violation::RepeatedAttachment { edge, .. }
                | Violation::DanglingAttachment { edge, .. } => positions[*edge],
                _ => self.here(),
            };
            let hint = match v {
                Violation::RepeatedAttachment { .. } => " (attachment nodes of a hyperedge must be distinct)",
                Violation::RepeatedExternal { .. } => " (external nodes must be distinct)",
                Violation::RankMismatch { .. } => " (the attachment length must equal the label's rank)",
                _ => "",
            };
            return Err(ParseError::new(at.0, at.1, format!("{v}{hint}")));
        }
        Ok((g, positions))
    }
}

fn to_symbols(g: Hypergraph<SlotExpr>, positions: &[(usize, usize)]) -> Result<Hypergraph<Symbol>, ParseError> {
    g.try_map_labels(|e, s| match s {
        SlotExpr::Hole(r) => Ok(Symbol::hole(*r)),
        SlotExpr::Ty(TypeExpr::Primitive(n, r)) => Ok(Symbol::new(n.clone(), *r)),
        SlotExpr::Ty(_) => {
            let (l, c) = positions[e];
            Err(ParseError::new(l, c, "expected a plain label `name/rank`"))
        }
    })
}

fn to_types(g: &Hypergraph<SlotExpr>, at: (usize, usize)) -> Result<Hypergraph<Type>, ParseError> {
    build_graph(g).map_err(|v| ParseError::new(at.0, at.1, v.to_string()))
}

/// A `.hgf` graph over plain labels.
pub fn parse_graph(text: &str) -> Result<Hypergraph<Symbol>, ParseError> {
    let mut p = Parser::new(text)?;
    let (g, pos) = p.graph_body(false)?;
    to_symbols(g, &pos)
}

/// `{…}` over plain labels.
pub fn parse_inline_graph(text: &str) -> Result<Hypergraph<Symbol>, ParseError> {
    let mut p = Parser::new(text)?;
    let (g, pos) = p.inline_graph()?;
    p.skip_newlines();
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {}", p.peek()));
    }
    to_symbols(g, &pos)
}

pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(text)?;
    let t = p.ty()?;
    p.skip_newlines();
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {}", p.peek()));
    }
    Ok(t)
}

/// The text form of a type without checking it.
pub fn parse_type_expr(text: &str) -> Result<TypeExpr, ParseError> {
    let mut p = Parser::new(text)?;
    p.type_expr()
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    p.keyword("SEQ")?;
    p.skip_newlines();
    let at = p.here();
    let (g, _) = p.inline_graph()?;
    let antecedent = to_types(&g, at)?;
    p.skip_newlines();
    if *p.peek() != Tok::Turnstile {
        return p.err(format!("expected `|-`, found {}", p.peek()));
    }
    p.bump();
    let succedent = p.ty()?;
    p.skip_newlines();
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {}", p.peek()));
    }
    Sequent::new(antecedent, succedent).map_err(|v| ParseError::new(at.0, at.1, v.to_string()))
}

pub fn parse_hl_grammar(text: &str) -> Result<HlGrammar, ParseError> {
    let mut p = Parser::new(text)?;
    let mut start = None;
    let mut alphabet: Option<Vec<Symbol>> = None;
    let mut pairs = Vec::new();
    loop {
        p.skip_newlines();
        if *p.peek() == Tok::Eof {
            break;
        }
        let at = p.here();
        let kw = p.word()?;
        match kw.as_str() {
            "start" => {
                p.expect_punct(':')?;
                start = Some(p.ty()?);
            }
            "alphabet" => {
                p.expect_punct(':')?;
                let mut syms = Vec::new();
                while matches!(p.peek(), Tok::Word(_)) {
                    syms.push(p.symbol()?);
                }
                alphabet = Some(syms);
            }
            "map" => {
                let a = p.symbol()?;
                p.skip_newlines();
                if *p.peek() != Tok::Arrow {
                    return p.err(format!("expected `->`, found {}", p.peek()));
                }
                p.bump();
                let t = p.ty()?;
                if t.rank() != a.rank() {
                    return Err(ParseError::new(
                        at.0,
                        at.1,
                        format!("label {a} has rank {} but its type has rank {}", a.rank(), t.rank()),
                    ));
                }
                pairs.push((a, t));
            }
            other => return Err(ParseError::new(at.0, at.1, format!("unknown statement `{other}`"))),
        }
        p.end_of_statement()?;
    }
    let Some(start) = start else { return Err(ParseError::new(1, 1, "missing `start:` line")) };
    let alphabet = alphabet.unwrap_or_else(|| {
        let mut seen = Vec::new();
        for (a, _) in &pairs {
            if !seen.contains(a) {
                seen.push(a.clone());
            }
        }
        seen
    });
    HlGrammar::new(alphabet, start, pairs).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

pub fn parse_hrg(text: &str) -> Result<Hrg, ParseError> {
    let mut p = Parser::new(text)?;
    let mut start = None;
    let mut nonterminals = Vec::new();
    let mut terminals = Vec::new();
    let mut fixed = Vec::new();
    let mut prods = Vec::new();
    loop {
        p.skip_newlines();
        if *p.peek() == Tok::Eof {
            break;
        }
        let at = p.here();
        let kw = p.word()?;
        match kw.as_str() {
            "start" => {
                p.expect_punct(':')?;
                start = Some((p.word()?, at));
            }
            "nonterminal" | "terminal" | "fixed" => {
                p.expect_punct(':')?;
                let mut syms = Vec::new();
                while matches!(p.peek(), Tok::Word(_)) {
                    syms.push(p.symbol()?);
                }
                match kw.as_str() {
                    "nonterminal" => nonterminals.extend(syms),
                    "terminal" => terminals.extend(syms),
                    _ => fixed.extend(syms),
                }
            }
            "prod" => {
                let lhs = p.word()?;
                p.skip_newlines();
                if *p.peek() != Tok::Arrow {
                    return p.err(format!("expected `->`, found {}", p.peek()));
                }
                p.bump();
                let (g, pos) = p.inline_graph()?;
                prods.push((lhs, to_symbols(g, &pos)?, at));
            }
            other => return Err(ParseError::new(at.0, at.1, format!("unknown statement `{other}`"))),
        }
        p.end_of_statement()?;
    }
    let Some((start, sat)) = start else { return Err(ParseError::new(1, 1, "missing `start:` line")) };
    let find_nt = |name: &str, at: (usize, usize)| {
        nonterminals
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| ParseError::new(at.0, at.1, format!("`{name}` is not a declared nonterminal")))
    };
    let start = find_nt(&start, sat)?;
    let mut productions = Vec::new();
    for (lhs, rhs, at) in prods {
        productions.push((find_nt(&lhs, at)?, rhs));
    }
    Hrg::new(nonterminals.clone(), terminals, fixed, productions, start).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

/// `.val` text; relative graph paths are resolved against `base`.
pub fn parse_valuation(text: &str, base: &Path) -> Result<Valuation, ParseError> {
    let mut p = Parser::new(text)?;
    let mut val = Valuation::new();
    loop {
        p.skip_newlines();
        if *p.peek() == Tok::Eof {
            break;
        }
        let at = p.here();
        let name = p.word()?;
        p.expect_punct('/')?;
        let rank = p.number()?;
        p.expect_punct('=')?;
        p.expect_punct('{')?;
        let mut graphs = Vec::new();
        loop {
            p.skip_newlines();
            match p.peek().clone() {
                Tok::Punct('}') => {
                    p.bump();
                    break;
                }
                Tok::Punct(',') => {
                    p.bump();
                }
                Tok::Punct('{') => {
                    let (g, pos) = p.inline_graph()?;
                    graphs.push(to_symbols(g, &pos)?);
                }
                Tok::Word(_) => {
                    let gat = p.here();
                    let mut path = String::new();
                    // Paths may contain `/`, which the tokenizer splits off.
                    loop {
                        match p.peek().clone() {
                            Tok::Word(w) => path.push_str(&w),
                            Tok::Punct('/') => path.push('/'),
                            _ => break,
                        }
                        p.bump();
                    }
                    let full = base.join(&path);
                    let text = std::fs::read_to_string(&full)
                        .map_err(|e| ParseError::new(gat.0, gat.1, format!("cannot read {}: {e}", full.display())))?;
                    let g = parse_graph(&text)
                        .map_err(|e| ParseError::new(gat.0, gat.1, format!("in {}: {e}", full.display())))?;
                    graphs.push(g);
                }
                t => return p.err(format!("expected a graph, a path or `}}`, found {t}")),
            }
        }
        let prim = Type::primitive(name, rank);
        val.set(&prim, graphs).map_err(|e| ParseError::new(at.0, at.1, e.to_string()))?;
        p.end_of_statement()?;
    }
    Ok(val)
}

fn write_graph_body<L: Label>(
    out: &mut dyn fmt::Write,
    g: &Hypergraph<L>,
    sep: &str,
    label: &mut dyn FnMut(&mut dyn fmt::Write, &L) -> fmt::Result,
) -> fmt::Result {
    out.write_str("nodes:")?;
    for v in g.nodes() {
        write!(out, " n{v}")?;
    }
    out.write_str(sep)?;
    out.write_str("ext:")?;
    for v in g.ext() {
        write!(out, " n{v}")?;
    }
    for (e, edge) in g.edges().iter().enumerate() {
        out.write_str(sep)?;
        write!(out, "edge e{e} ")?;
        label(out, &edge.label)?;
        out.write_str(" :")?;
        for v in &edge.att {
            write!(out, " n{v}")?;
        }
    }
    Ok(())
}

fn write_symbol(out: &mut dyn fmt::Write, s: &Symbol) -> fmt::Result {
    write!(out, "{}/{}", s.name(), s.rank())
}

fn write_type_dyn(out: &mut dyn fmt::Write, t: &Type) -> fmt::Result {
    match t.kind() {
        TypeKind::Primitive(s) => write_symbol(out, s),
        TypeKind::Division { num, den, .. } => {
            out.write_str("div(")?;
            write_type_dyn(out, num)?;
            out.write_str(" ; {")?;
            write_graph_body(out, den, "; ", &mut |o, s| match s {
                Slot::Hole(r) => write!(o, "$/{r}"),
                Slot::Ty(t) => write_type_dyn(o, t),
            })?;
            out.write_str("})")
        }
        TypeKind::Product(body) => {
            out.write_str("prod({")?;
            write_graph_body(out, body, "; ", &mut |o, t| write_type_dyn(o, t))?;
            out.write_str("})")
        }
    }
}

pub(crate) fn write_type(f: &mut fmt::Formatter<'_>, t: &Type) -> fmt::Result {
    write_type_dyn(f, t)
}

pub(crate) fn write_sequent(f: &mut fmt::Formatter<'_>, s: &Sequent) -> fmt::Result {
    f.write_str(&print_sequent(s))
}

pub fn print_type(t: &Type) -> String {
    let mut s = String::new();
    write_type_dyn(&mut s, t).unwrap();
    s
}

/// `{…}` in storage order.
pub fn print_inline_types(g: &Hypergraph<Type>) -> String {
    let mut s = String::from("{");
    write_graph_body(&mut s, g, "; ", &mut |o, t| write_type_dyn(o, t)).unwrap();
    s.push('}');
    s
}

pub fn print_inline_graph(g: &Hypergraph<Symbol>) -> String {
    let mut s = String::from("{");
    write_graph_body(&mut s, g, "; ", &mut |o, l| write_symbol(o, l)).unwrap();
    s.push('}');
    s
}

/// The sequent with its antecedent in storage order, so that edge ids in
/// derivation records stay meaningful.
pub fn print_sequent(s: &Sequent) -> String {
    format!("SEQ {} |- {}", print_inline_types(&s.antecedent), print_type(&s.succedent))
}

pub fn print_sequent_canonical(s: &Sequent) -> String {
    let c = Sequent { antecedent: s.antecedent.canonical_graph(), succedent: s.succedent.clone() };
    print_sequent(&c)
}

/// `.hgf` in storage order.
pub fn print_graph(g: &Hypergraph<Symbol>) -> String {
    let mut s = String::new();
    write_graph_body(&mut s, g, "\n", &mut |o, l| write_symbol(o, l)).unwrap();
    s.push('\n');
    s
}

pub fn print_graph_canonical(g: &Hypergraph<Symbol>) -> String {
    print_graph(&g.canonical_graph())
}

pub fn print_hl_grammar(g: &HlGrammar) -> String {
    let mut out = String::new();
    writeln!(out, "start: {}", print_type(g.start())).unwrap();
    let alphabet: BTreeSet<String> = g.alphabet().iter().map(|a| a.to_string()).collect();
    writeln!(out, "alphabet: {}", alphabet.into_iter().collect::<Vec<_>>().join(" ")).unwrap();
    let mut lines: Vec<String> = g.pairs().iter().map(|(a, t)| format!("map {a} -> {}", print_type(t))).collect();
    lines.sort();
    lines.dedup();
    for l in lines {
        writeln!(out, "{l}").unwrap();
    }
    out
}

pub fn print_hrg(g: &Hrg) -> String {
    let mut out = String::new();
    let join = |syms: &[Symbol]| {
        let set: BTreeSet<String> = syms.iter().map(|s| s.to_string()).collect();
        set.into_iter().collect::<Vec<_>>().join(" ")
    };
    writeln!(out, "start: {}", g.start().name()).unwrap();
    writeln!(out, "nonterminal: {}", join(g.nonterminals())).unwrap();
    writeln!(out, "terminal: {}", join(g.terminals())).unwrap();
    if !g.fixed().is_empty() {
        writeln!(out, "fixed: {}", join(g.fixed())).unwrap();
    }
    let mut by_lhs: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (lhs, rhs) in g.productions() {
        by_lhs.entry(lhs.name().to_string()).or_default().push(print_inline_graph(&rhs.canonical_graph()));
    }
    for (lhs, mut rhss) in by_lhs {
        rhss.sort();
        for r in rhss {
            writeln!(out, "prod {lhs} -> {r}").unwrap();
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let text = "nodes: u v w\next: u w\nedge x a/2 : u v\nedge y b/2 : v w  # tail\n";
        let g = parse_graph(text).unwrap();
        assert_eq!((g.node_count(), g.edge_count(), g.ext()), (3, 2, &[0, 2][..]));
        let printed = print_graph(&g);
        let again = parse_graph(&printed).unwrap();
        assert_eq!(g, again);
        assert_eq!(print_graph_canonical(&g), print_graph_canonical(&again));
    }

    #[test]
    fn repeated_attachment_diagnostic() {
        let err = parse_graph("nodes: u v\next:\nedge e a/2 : u u\n").unwrap_err();
        assert_eq!((err.line, err.col), (3, 1));
        assert!(err.message.contains("repeated attachment"));
        assert!(err.message.contains("distinct"));
        let err = parse_graph("nodes: u\nedge e a/2 : u\n").unwrap_err();
        assert!(err.message.contains("rank mismatch"));
        let err = parse_graph("nodes: u\nedge e a/1 : z\n").unwrap_err();
        assert!(err.message.contains("unknown node"));
    }

    #[test]
    fn types_and_sequents() {
        let q = parse_type("div(s/2 ; {nodes: a b c d; ext: a d; edge e0 $/2 : a b; edge e1 s/2 : b c; edge e2 p/2 : c d})")
            .unwrap();
        assert_eq!(q.rank(), 2);
        assert_eq!(parse_type(&print_type(&q)).unwrap(), q);
        let prod = parse_type("prod({nodes: a b; ext: a b})").unwrap();
        assert_eq!(prod.rank(), 2);

        let seq = parse_sequent(&format!(
            "SEQ {{nodes: a b c d; ext: a d; edge x {q} : a b; edge y s/2 : b c; edge z p/2 : c d}} |- s/2"
        ))
        .unwrap();
        assert_eq!(seq.antecedent.edge_count(), 3);
        let again = parse_sequent(&print_sequent(&seq)).unwrap();
        assert_eq!(again.key(), seq.key());
        assert_eq!(print_sequent(&again), print_sequent(&seq));

        let err = parse_type("div(s/2 ; {nodes: a b; ext: a b; edge e $/2 : a b; edge f $/2 : a b})").unwrap_err();
        assert!(err.message.contains("exactly one $"));
        let err = parse_type("div(s/1 ; {nodes: a b; ext: a b; edge e $/2 : a b})").unwrap_err();
        assert!(err.message.contains("numerator/denominator rank"));
        assert!(parse_sequent("SEQ {nodes: a; ext: a; edge e p/1 : a} |- q/2").is_err());
    }

    #[test]
    fn prim_keyword_and_names() {
        assert_eq!(parse_type("prim p/1").unwrap(), Type::primitive("p", 1));
        assert_eq!(parse_type("p_l/2").unwrap(), Type::primitive("p_l", 2));
        assert_eq!(parse_type("*/2").unwrap(), Type::primitive("*", 2));
    }
}

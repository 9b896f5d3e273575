//! The cograph expression language.
//!
//! ```text
//! expr   := term ('+' term)*          disjoint union
//! term   := factor ('*' factor)*      join
//! factor := INT factor | prefix       n-fold disjoint union
//! prefix := '~' prefix | atom | '(' expr ')'
//! atom   := 'K' INT | 'P' INT | 'C' INT | 'K' '{' INT ',' INT '}'
//! ```
//!
//! Complement binds tightest, then repetition, then join, then union, so
//! `2K2 + K1 * C4` reads as `(2K2) + (K1 * C4)`.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::cotree::{CanonicalCode, Cotree, Op};
use crate::graph::{Graph, GraphError};

/// Largest integer literal accepted; nothing larger fits in a graph anyway.
const MAX_LITERAL: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: &'static str },
    #[error("invalid atom at byte {offset}: {message}")]
    Atom { offset: usize, message: String },
}

impl ExprError {
    pub fn offset(&self) -> usize {
        match self {
            ExprError::Syntax { offset, .. } | ExprError::Atom { offset, .. } => *offset,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `Kn`, the complete graph.
    Complete(u32),
    /// `Pn`, restricted to n ≤ 3.
    Path(u32),
    /// `Cn`, restricted to n ∈ {3, 4}.
    Cycle(u32),
    /// `K{a,b}`, the complete bipartite graph.
    Biclique(u32, u32),
}

impl Atom {
    fn check(self) -> Result<Self, String> {
        match self {
            Atom::Complete(0) => Err("K0 has no vertices".to_string()),
            Atom::Path(0) => Err("P0 has no vertices".to_string()),
            Atom::Path(n) if n >= 4 => Err(alloc::format!("P{n} is not a cograph")),
            Atom::Cycle(n) if n < 3 => Err(alloc::format!("C{n} is not a cycle")),
            Atom::Cycle(n) if n >= 5 => Err(alloc::format!("C{n} is not a cograph")),
            Atom::Biclique(a, b) if a == 0 || b == 0 => {
                Err(alloc::format!("K{{{a},{b}}} needs two nonempty sides"))
            }
            ok => Ok(ok),
        }
    }

    fn eval(self) -> Result<Graph, GraphError> {
        match self {
            Atom::Complete(n) => Graph::complete(n as usize),
            Atom::Path(n) => Graph::path(n as usize),
            Atom::Cycle(n) => Graph::cycle(n as usize),
            Atom::Biclique(a, b) => {
                Graph::edgeless(a as usize)?.join(&Graph::edgeless(b as usize)?)
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Complete(n) => write!(f, "K{n}"),
            Atom::Path(n) => write!(f, "P{n}"),
            Atom::Cycle(n) => write!(f, "C{n}"),
            Atom::Biclique(a, b) => write!(f, "K{{{a},{b}}}"),
        }
    }
}

/// Abstract syntax of a cograph expression.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CographExpr {
    Atom(Atom),
    Union(Vec<CographExpr>),
    Join(Vec<CographExpr>),
    Repeat(u32, Box<CographExpr>),
    Complement(Box<CographExpr>),
}

impl CographExpr {
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.syntax("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn eval(&self) -> Result<Graph, GraphError> {
        match self {
            CographExpr::Atom(a) => a.eval(),
            CographExpr::Union(xs) => fold(xs, Graph::disjoint_union),
            CographExpr::Join(xs) => fold(xs, Graph::join),
            CographExpr::Repeat(n, x) => {
                let g = x.eval()?;
                (1..*n).try_fold(g.clone(), |acc, _| acc.disjoint_union(&g))
            }
            CographExpr::Complement(x) => Ok(x.eval()?.complement()),
        }
    }

    /// Drops unit repetitions and splices nested unions and joins.
    pub fn normalize(&self) -> CographExpr {
        match self {
            CographExpr::Atom(a) => CographExpr::Atom(*a),
            CographExpr::Repeat(1, x) => x.normalize(),
            CographExpr::Repeat(n, x) => CographExpr::Repeat(*n, Box::new(x.normalize())),
            CographExpr::Complement(x) => CographExpr::Complement(Box::new(x.normalize())),
            CographExpr::Union(xs) => {
                let mut out = Vec::new();
                for x in xs.iter().map(CographExpr::normalize) {
                    match x {
                        CographExpr::Union(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                CographExpr::Union(out)
            }
            CographExpr::Join(xs) => {
                let mut out = Vec::new();
                for x in xs.iter().map(CographExpr::normalize) {
                    match x {
                        CographExpr::Join(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                CographExpr::Join(out)
            }
        }
    }

    /// A readable expression for the cograph a cotree represents.
    pub fn describe(t: &Cotree) -> CographExpr {
        match t {
            Cotree::Leaf(_) => CographExpr::Atom(Atom::Complete(1)),
            Cotree::Node(_, ch) if ch.is_empty() => CographExpr::Atom(Atom::Complete(0)),
            Cotree::Node(Op::Union, ch) => describe_union(ch),
            Cotree::Node(Op::Join, ch) => describe_join(ch),
        }
    }

    fn print_into(&self, out: &mut String) {
        match self {
            CographExpr::Atom(a) => out.push_str(&a.to_string()),
            CographExpr::Union(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" + ");
                    }
                    x.print_wrapped(out, matches!(x, CographExpr::Union(_) | CographExpr::Join(_)));
                }
            }
            CographExpr::Join(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(" * ");
                    }
                    x.print_wrapped(out, matches!(x, CographExpr::Union(_) | CographExpr::Join(_)));
                }
            }
            CographExpr::Repeat(n, x) => {
                out.push_str(&n.to_string());
                x.print_wrapped(
                    out,
                    !matches!(**x, CographExpr::Atom(_) | CographExpr::Complement(_)),
                );
            }
            CographExpr::Complement(x) => {
                out.push('~');
                x.print_wrapped(
                    out,
                    !matches!(**x, CographExpr::Atom(_) | CographExpr::Complement(_)),
                );
            }
        }
    }

    fn print_wrapped(&self, out: &mut String, parens: bool) {
        if parens {
            out.push('(');
        }
        self.print_into(out);
        if parens {
            out.push(')');
        }
    }
}

fn fold(
    xs: &[CographExpr],
    op: fn(&Graph, &Graph) -> Result<Graph, GraphError>,
) -> Result<Graph, GraphError> {
    let mut it = xs.iter();
    let first = match it.next() {
        Some(x) => x.eval()?,
        None => return Graph::edgeless(0),
    };
    it.try_fold(first, |acc, x| op(&acc, &x.eval()?))
}

/// Canonical printing of the normalized expression; `parse` inverts it.
impl fmt::Display for CographExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.normalize().print_into(&mut out);
        f.write_str(&out)
    }
}

fn repeat(count: usize, e: CographExpr) -> CographExpr {
    if count == 1 {
        e
    } else {
        CographExpr::Repeat(count as u32, Box::new(e))
    }
}

fn describe_union(children: &[Cotree]) -> CographExpr {
    let mut groups: BTreeMap<CanonicalCode, (usize, &Cotree)> = BTreeMap::new();
    for c in children {
        groups.entry(c.canonical_code()).or_insert((0, c)).0 += 1;
    }
    let terms: Vec<_> = groups
        .into_values()
        .map(|(count, c)| repeat(count, CographExpr::describe(c)))
        .collect();
    if terms.len() == 1 {
        terms.into_iter().next().unwrap()
    } else {
        CographExpr::Union(terms)
    }
}

fn describe_join(children: &[Cotree]) -> CographExpr {
    let leaves = children.iter().filter(|c| matches!(c, Cotree::Leaf(_))).count() as u32;
    // Union children whose members are all leaves are independent parts.
    let mut parts: Vec<u32> = children
        .iter()
        .filter(|c| c.op() == Some(Op::Union) && c.children().iter().all(|g| g.op().is_none()))
        .map(|c| c.children().len() as u32)
        .collect();
    parts.sort_unstable();
    let mut rest: Vec<&Cotree> = children
        .iter()
        .filter(|c| c.op() == Some(Op::Union) && c.children().iter().any(|g| g.op().is_some()))
        .collect();
    rest.sort_by_cached_key(|c| c.canonical_code());

    let mut terms = Vec::new();
    match (leaves, parts.as_slice()) {
        (0, [a, b]) => terms.push(biclique(*a, *b)),
        (1, [2]) => terms.push(CographExpr::Atom(Atom::Path(3))),
        _ => {
            if leaves > 0 {
                terms.push(CographExpr::Atom(Atom::Complete(leaves)));
            }
            if let [a, b] = parts.as_slice() {
                terms.push(biclique(*a, *b));
            } else {
                terms.extend(
                    parts
                        .iter()
                        .map(|&p| repeat(p as usize, CographExpr::Atom(Atom::Complete(1)))),
                );
            }
        }
    }
    terms.extend(rest.into_iter().map(CographExpr::describe));
    if terms.len() == 1 {
        terms.pop().unwrap()
    } else {
        CographExpr::Join(terms)
    }
}

fn biclique(a: u32, b: u32) -> CographExpr {
    match (a, b) {
        (2, 2) => CographExpr::Atom(Atom::Cycle(4)),
        (1, 2) => CographExpr::Atom(Atom::Path(3)),
        _ => CographExpr::Atom(Atom::Biclique(a, b)),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn syntax(&self, message: &'static str) -> ExprError {
        ExprError::Syntax {
            offset: self.pos,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8, message: &'static str) -> Result<(), ExprError> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.syntax(message))
        }
    }

    fn int(&mut self) -> Result<u32, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(d) = self.src.get(self.pos).filter(|b| b.is_ascii_digit()) {
            value = value.saturating_mul(10).saturating_add((d - b'0') as u32);
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.syntax("expected an integer"));
        }
        if value > MAX_LITERAL {
            return Err(ExprError::Syntax {
                offset: start,
                message: "integer literal too large",
            });
        }
        Ok(value)
    }

    fn expr(&mut self) -> Result<CographExpr, ExprError> {
        let mut terms = alloc::vec![self.term()?];
        while self.eat(b'+') {
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            CographExpr::Union(terms)
        })
    }

    fn term(&mut self) -> Result<CographExpr, ExprError> {
        let mut factors = alloc::vec![self.factor()?];
        while self.eat(b'*') {
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            CographExpr::Join(factors)
        })
    }

    fn factor(&mut self) -> Result<CographExpr, ExprError> {
        match self.peek() {
            Some(b'0'..=b'9') => {
                let start = self.pos;
                let n = self.int()?;
                if n == 0 {
                    return Err(ExprError::Syntax {
                        offset: start,
                        message: "repetition count must be positive",
                    });
                }
                Ok(CographExpr::Repeat(n, Box::new(self.factor()?)))
            }
            _ => self.prefix(),
        }
    }

    fn prefix(&mut self) -> Result<CographExpr, ExprError> {
        match self.peek() {
            Some(b'~') => {
                self.pos += 1;
                Ok(CographExpr::Complement(Box::new(self.prefix()?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')', "expected ')'")?;
                Ok(e)
            }
            Some(b'K' | b'P' | b'C') => self.atom(),
            None => Err(self.syntax("unexpected end of input")),
            Some(_) => Err(self.syntax("expected an atom, '~' or '('")),
        }
    }

    fn atom(&mut self) -> Result<CographExpr, ExprError> {
        let start = self.pos;
        let kind = self.src[self.pos];
        self.pos += 1;
        let atom = if kind == b'K' && self.eat(b'{') {
            let a = self.int()?;
            self.expect(b',', "expected ','")?;
            let b = self.int()?;
            self.expect(b'}', "expected '}'")?;
            Atom::Biclique(a, b)
        } else {
            let n = self.int()?;
            match kind {
                b'K' => Atom::Complete(n),
                b'P' => Atom::Path(n),
                _ => Atom::Cycle(n),
            }
        };
        atom.check()
            .map(CographExpr::Atom)
            .map_err(|message| ExprError::Atom {
                offset: start,
                message,
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cotree::{is_isomorphic, recognize};

    fn eval(text: &str) -> Graph {
        CographExpr::parse(text).unwrap().eval().unwrap()
    }

    #[test]
    fn join_of_vertex_and_square() {
        let e = CographExpr::parse("K1 * C4").unwrap();
        assert_eq!(
            e,
            CographExpr::Join(alloc::vec![
                CographExpr::Atom(Atom::Complete(1)),
                CographExpr::Atom(Atom::Cycle(4))
            ])
        );
        let g = e.eval().unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.edge_count(), 8);
    }

    #[test]
    fn precedence_and_repetition() {
        let e = CographExpr::parse("3K1 + (K1 * C4)").unwrap();
        let g = e.eval().unwrap();
        assert_eq!(g.order(), 8);
        assert_eq!(g.components().len(), 4);
        // repetition binds one factor, join binds tighter than union
        let a = CographExpr::parse("2K2 + K1 * C4").unwrap();
        let b = CographExpr::parse("(2K2) + (K1 * C4)").unwrap();
        assert_eq!(a, b);
        assert_eq!(CographExpr::parse(" 2 K 2+K1 ").unwrap().eval().unwrap().order(), 5);
    }

    #[test]
    fn atom_validity_errors() {
        let err = CographExpr::parse("P4").unwrap_err();
        assert_eq!(
            err,
            ExprError::Atom {
                offset: 0,
                message: "P4 is not a cograph".into()
            }
        );
        assert_eq!(CographExpr::parse("K1 + C5").unwrap_err().offset(), 5);
        assert!(CographExpr::parse("K0").is_err());
        assert!(CographExpr::parse("K{0,2}").is_err());
        assert!(CographExpr::parse("0K1").is_err());
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(CographExpr::parse("K1 +").unwrap_err().offset(), 4);
        assert_eq!(CographExpr::parse("(K1 * K2").unwrap_err().offset(), 8);
        assert_eq!(CographExpr::parse("K1 K2").unwrap_err().offset(), 3);
        assert_eq!(CographExpr::parse("Kx").unwrap_err().offset(), 1);
        assert!(CographExpr::parse("").is_err());
        assert!(CographExpr::parse("~2P3").is_err());
        assert!(CographExpr::parse("K999").is_err());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval("2K2"), Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap());
        assert!(is_isomorphic(&eval("K{3,3}"), &eval("3K1 * 3K1")));
        let co2p3 = eval("~(2P3)");
        assert_eq!(co2p3.order(), 6);
        assert_eq!(co2p3.edge_count(), 15 - 4);
        assert!(is_isomorphic(&eval("K{2,2}"), &eval("C4")));
        assert!(is_isomorphic(&eval("C3"), &eval("K3")));
        assert!(is_isomorphic(&eval("~K2"), &eval("2K1")));
    }

    #[test]
    fn printing() {
        let e = CographExpr::parse("K1 * (K2 + P3)").unwrap();
        assert_eq!(e.to_string(), "K1 * (K2 + P3)");
        let unit = CographExpr::Repeat(1, Box::new(CographExpr::Atom(Atom::Complete(2))));
        assert_eq!(unit.to_string(), "K2");
        assert_eq!(CographExpr::parse("~(2P3)").unwrap().to_string(), "~(2P3)");
        assert_eq!(CographExpr::parse("2(K1 * 2K2)").unwrap().to_string(), "2(K1 * 2K2)");
        assert_eq!(CographExpr::parse("P3 + (P3 + 2K2)").unwrap().to_string(), "P3 + P3 + 2K2");
        assert_eq!(CographExpr::parse("K{3,3}").unwrap().to_string(), "K{3,3}");
        assert_eq!(CographExpr::parse("2(3K1)").unwrap().to_string(), "2(3K1)");
    }

    #[test]
    fn describe_readable_forms() {
        for (text, expect) in [
            ("K1 * C4", "K1 * C4"),
            ("3K1 + (K1 * C4)", "3K1 + (K1 * C4)"),
            ("P3 + C4", "P3 + C4"),
            ("K{3,3}", "K{3,3}"),
            ("K4", "K4"),
            ("K1 + 3K2", "K1 + 3K2"),
        ] {
            let t = recognize(&eval(text)).cotree().unwrap();
            assert_eq!(CographExpr::describe(&t).to_string(), expect);
        }
    }
}

//! Linear expressions over named variables, parsed from text such as
//! `5 - 2.5*y0 < (1 - y1) + 5*min(y1, y2/2)`.
//!
//! `min(...)` may only appear with a positive coefficient on the larger side
//! of a relation; each argument then yields its own row.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::parse_rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("unexpected `{found}` at offset {at}")]
    Unexpected { found: String, at: usize },
    #[error("unexpected end of expression")]
    Eof,
    #[error("product of two non-constant expressions")]
    Nonlinear,
    #[error("division by a non-constant or zero")]
    BadDivision,
    #[error("min() under a negative coefficient or on the smaller side")]
    MinNotMonotone,
    #[error("expected one relation `<`, `<=`, `>` or `>=`")]
    Relation,
}

/// `Σ coeff·var + constant`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinExpr {
    pub terms: BTreeMap<String, BigRational>,
    pub constant: BigRational,
}

impl LinExpr {
    pub fn constant(c: BigRational) -> Self {
        Self { terms: BTreeMap::new(), constant: c }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), BigRational::one());
        Self { terms, constant: BigRational::zero() }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &LinExpr) -> LinExpr {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let e = out.terms.entry(k.clone()).or_insert_with(BigRational::zero);
            *e += v;
        }
        out.terms.retain(|_, v| !v.is_zero());
        out.constant += &other.constant;
        out
    }

    pub fn scale(&self, c: &BigRational) -> LinExpr {
        let mut out = LinExpr::constant(&self.constant * c);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect();
        }
        out
    }

    pub fn sub(&self, other: &LinExpr) -> LinExpr {
        self.add(&other.scale(&-BigRational::one()))
    }
}

impl fmt::Display for LinExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, v) in &self.terms {
            let sign = if v.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = v.abs();
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{sign}")?;
            if !first {
                write!(f, " ")?;
            }
            if mag.is_one() {
                write!(f, "{k}")?;
            } else {
                write!(f, "{mag}*{k}")?;
            }
            first = false;
        }
        if first {
            write!(f, "{}", self.constant)
        } else if !self.constant.is_zero() {
            let sign = if self.constant.is_negative() { "-" } else { "+" };
            write!(f, " {sign} {}", self.constant.abs())
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Num(BigRational),
    Var(String),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Min(Vec<Node>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    Rel(String),
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push((Tok::Num(chars[start..i].iter().collect()), start));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), start));
        } else if c == '<' || c == '>' {
            let start = i;
            i += 1;
            let mut r = c.to_string();
            if i < chars.len() && chars[i] == '=' {
                r.push('=');
                i += 1;
            }
            out.push((Tok::Rel(r), start));
        } else if "+-*/(),".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(ExprError::Unexpected { found: c.to_string(), at: i });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn unexpected(&self) -> ExprError {
        match self.toks.get(self.pos) {
            Some((t, at)) => ExprError::Unexpected { found: format!("{t:?}"), at: *at },
            None => ExprError::Eof,
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.product()?;
        loop {
            if self.eat('+') {
                lhs = Node::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat('-') {
                lhs = Node::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Node::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat('/') {
                lhs = Node::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.eat('-') {
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Node, ExprError> {
        let tok = self.peek().cloned().ok_or(ExprError::Eof)?;
        match tok {
            Tok::Num(s) => {
                let v = parse_rational(&s).ok_or_else(|| self.unexpected())?;
                self.pos += 1;
                Ok(Node::Num(v))
            }
            Tok::Ident(name) => {
                self.pos += 1;
                if name == "min" && self.eat('(') {
                    let mut args = vec![self.sum()?];
                    while self.eat(',') {
                        args.push(self.sum()?);
                    }
                    if !self.eat(')') {
                        return Err(self.unexpected());
                    }
                    Ok(Node::Min(args))
                } else {
                    Ok(Node::Var(name))
                }
            }
            Tok::Sym('(') => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(self.unexpected());
                }
                Ok(inner)
            }
            _ => Err(self.unexpected()),
        }
    }
}

/// Every linear expression the node can equal; `min` contributes one
/// alternative per argument. `positive` tracks the sign of the context.
fn alternatives(node: &Node, positive: bool) -> Result<Vec<LinExpr>, ExprError> {
    Ok(match node {
        Node::Num(v) => vec![LinExpr::constant(v.clone())],
        Node::Var(n) => vec![LinExpr::var(n)],
        Node::Add(a, b) | Node::Sub(a, b) => {
            let is_sub = matches!(node, Node::Sub(..));
            let left = alternatives(a, positive)?;
            let right = alternatives(b, positive != is_sub)?;
            let mut out = Vec::new();
            for l in &left {
                for r in &right {
                    out.push(if is_sub { l.sub(r) } else { l.add(r) });
                }
            }
            out
        }
        Node::Neg(a) => alternatives(a, !positive)?
            .into_iter()
            .map(|e| e.scale(&-BigRational::one()))
            .collect(),
        Node::Mul(a, b) => {
            let (k, other) = match (constant_of(a), constant_of(b)) {
                (Some(k), _) => (k, b),
                (_, Some(k)) => (k, a),
                _ => return Err(ExprError::Nonlinear),
            };
            let pos = if k.is_negative() { !positive } else { positive };
            alternatives(other, pos)?.into_iter().map(|e| e.scale(&k)).collect()
        }
        Node::Div(a, b) => {
            let k = constant_of(b).filter(|k| !k.is_zero()).ok_or(ExprError::BadDivision)?;
            let pos = if k.is_negative() { !positive } else { positive };
            let inv = k.recip();
            alternatives(a, pos)?.into_iter().map(|e| e.scale(&inv)).collect()
        }
        Node::Min(args) => {
            if !positive {
                return Err(ExprError::MinNotMonotone);
            }
            let mut out = Vec::new();
            for a in args {
                out.extend(alternatives(a, positive)?);
            }
            out
        }
    })
}

fn constant_of(node: &Node) -> Option<BigRational> {
    match alternatives(node, true) {
        Ok(v) if v.len() == 1 && v[0].is_constant() => Some(v[0].constant.clone()),
        _ => None,
    }
}

fn parse_node(s: &str) -> Result<(Node, Parser), ExprError> {
    let mut p = Parser { toks: tokenize(s)?, pos: 0 };
    let n = p.sum()?;
    Ok((n, p))
}

/// A single linear expression without `min`.
pub fn parse_expr(s: &str) -> Result<LinExpr, ExprError> {
    let (node, p) = parse_node(s)?;
    if p.pos != p.toks.len() {
        return Err(p.unexpected());
    }
    let mut alts = alternatives(&node, true)?;
    if alts.len() != 1 {
        return Err(ExprError::MinNotMonotone);
    }
    Ok(alts.remove(0))
}

/// `lhs REL rhs` as rows `expr ≤ 0` or `expr < 0`, one per `min` argument.
pub fn parse_relation(s: &str) -> Result<Vec<(LinExpr, bool)>, ExprError> {
    let toks = tokenize(s)?;
    let rels: Vec<usize> = toks
        .iter()
        .enumerate()
        .filter(|(_, (t, _))| matches!(t, Tok::Rel(_)))
        .map(|(i, _)| i)
        .collect();
    let [at] = rels[..] else {
        return Err(ExprError::Relation);
    };
    let Tok::Rel(rel) = &toks[at].0 else { unreachable!() };
    let strict = !rel.ends_with('=');
    let (small, large) = if rel.starts_with('<') { (0..at, at + 1..toks.len()) } else { (at + 1..toks.len(), 0..at) };
    let side = |r: std::ops::Range<usize>| -> Result<Node, ExprError> {
        let mut p = Parser { toks: toks[r].to_vec(), pos: 0 };
        let n = p.sum()?;
        if p.pos != p.toks.len() {
            return Err(p.unexpected());
        }
        Ok(n)
    };
    // small ≤ min(...) holds iff it holds against every argument
    let lhs = alternatives(&side(small)?, false)?;
    if lhs.len() != 1 {
        return Err(ExprError::MinNotMonotone);
    }
    let rhs = alternatives(&side(large)?, true)?;
    Ok(rhs.iter().map(|r| (lhs[0].sub(r), strict)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_linear() {
        let e = parse_expr("5 - 2.5*y0 + (1 - y1)/2").unwrap();
        assert_eq!(e.constant, q(11, 2));
        assert_eq!(e.terms["y0"], q(-5, 2));
        assert_eq!(e.terms["y1"], q(-1, 2));
    }

    #[test]
    fn expands_min() {
        let rows = parse_relation("L < C + 5*min(a, b/2)").unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|(_, s)| *s));
        assert_eq!(rows[1].0.terms["b"], q(-5, 2));
        assert_eq!(rows[0].0.terms["L"], q(1, 1));
    }

    #[test]
    fn rejects_bad_min() {
        assert_eq!(parse_relation("x <= -min(a, b)"), Err(ExprError::MinNotMonotone));
        assert_eq!(parse_relation("min(a, b) <= x"), Err(ExprError::MinNotMonotone));
        assert_eq!(parse_relation("x*y <= 1"), Err(ExprError::Nonlinear));
        assert_eq!(parse_relation("x <= 1 <= 2"), Err(ExprError::Relation));
    }

    #[test]
    fn greater_than_flips() {
        let rows = parse_relation("Y5 >= y0").unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].0.terms["y0"], q(1, 1));
        assert_eq!(rows[0].0.terms["Y5"], q(-1, 1));
        assert!(!rows[0].1);
    }
}

//! A small expression language over the ring of a directed tree.
//!
//! ```text
//! expr  := union ("==" union)?
//! union := diff (("|" | "^") diff)*
//! diff  := inter ("-" inter)*
//! inter := atom ("&" atom)*
//! atom  := "V(" vertex (";" label ("," label)*)? ")" | "empty" | "(" union ")"
//! ```
//!
//! Vertices and labels are names in the tree; for a cover fiber a vertex is
//! a path string and a label an edge instance such as `a#2`.

use std::collections::BTreeSet;

use crate::cover::Fiber;
use crate::error::{Error, Result};
use crate::tree::{BasicSet, DirectedTree, FiniteTree, RingSet};

/// A tree whose vertices and labels can be named in expressions.
pub trait NamedTree: DirectedTree {
    fn parse_vertex(&self, text: &str) -> Result<Self::Vertex>;
    fn parse_label(&self, v: &Self::Vertex, text: &str) -> Result<Self::Label>;
}

impl NamedTree for FiniteTree {
    fn parse_vertex(&self, text: &str) -> Result<usize> {
        self.vertex_index(text).ok_or_else(|| Error::UnknownVertex(text.to_string()))
    }

    fn parse_label(&self, _v: &usize, text: &str) -> Result<usize> {
        self.edge_index(text).ok_or_else(|| Error::UnknownEdge(text.to_string()))
    }
}

impl NamedTree for Fiber<'_> {
    fn parse_vertex(&self, text: &str) -> Result<Self::Vertex> {
        let p = self.graph().parse_path(text)?;
        if p.origin() != self.base() {
            return Err(Error::Expression(format!(
                "`{text}` does not start at {}",
                self.graph().vertex_name(self.base())
            )));
        }
        Ok(p)
    }

    fn parse_label(&self, _v: &Self::Vertex, text: &str) -> Result<Self::Label> {
        self.graph().parse_instance(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value<V, L> {
    Set(RingSet<V, L>),
    Bool(bool),
}

impl<V: Clone + Ord + std::hash::Hash, L: Clone + Ord> Value<V, L> {
    pub fn display<T: DirectedTree<Vertex = V, Label = L>>(&self, tree: &T) -> String {
        match self {
            Value::Set(s) => s.display(tree),
            Value::Bool(b) => b.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Semi,
    Comma,
    And,
    Minus,
    Or,
    Xor,
    EqEq,
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let simple = match c {
            '(' => Some(Tok::Open),
            ')' => Some(Tok::Close),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '&' => Some(Tok::And),
            '-' => Some(Tok::Minus),
            '|' => Some(Tok::Or),
            '^' => Some(Tok::Xor),
            _ => None,
        };
        if let Some(t) = simple {
            chars.next();
            out.push(t);
        } else if c == '=' {
            chars.next();
            if chars.next() != Some('=') {
                return Err(Error::Expression("expected `==`".into()));
            }
            out.push(Tok::EqEq);
        } else if c.is_whitespace() {
            chars.next();
        } else if c.is_alphanumeric() || "_.~#".contains(c) {
            let mut w = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_alphanumeric() || "_.~#".contains(c) {
                    w.push(c);
                    chars.next();
                } else {
                    break;
                }
            }
            out.push(Tok::Word(w));
        } else {
            return Err(Error::Expression(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'t, T: NamedTree> {
    tree: &'t T,
    toks: Vec<Tok>,
    pos: usize,
}

type Set<T> = RingSet<<T as DirectedTree>::Vertex, <T as DirectedTree>::Label>;

impl<T: NamedTree> Parser<'_, T> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.toks.get(self.pos) {
            Some(x) if *x == t => {
                self.pos += 1;
                Ok(())
            }
            other => Err(Error::Expression(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn word(&mut self) -> Result<String> {
        match self.toks.get(self.pos) {
            Some(Tok::Word(w)) => {
                self.pos += 1;
                Ok(w.clone())
            }
            other => Err(Error::Expression(format!("expected a name, found {other:?}"))),
        }
    }

    fn atom(&mut self) -> Result<Set<T>> {
        match self.peek() {
            Some(Tok::Open) => {
                self.pos += 1;
                let x = self.union()?;
                self.expect(Tok::Close)?;
                Ok(x)
            }
            Some(Tok::Word(w)) if w == "empty" => {
                self.pos += 1;
                Ok(RingSet::empty())
            }
            Some(Tok::Word(w)) if w == "V" => {
                self.pos += 1;
                self.expect(Tok::Open)?;
                let v = self.tree.parse_vertex(&self.word()?)?;
                let mut excluded = BTreeSet::new();
                if self.peek() == Some(&Tok::Semi) {
                    self.pos += 1;
                    loop {
                        excluded.insert(self.tree.parse_label(&v, &self.word()?)?);
                        if self.peek() != Some(&Tok::Comma) {
                            break;
                        }
                        self.pos += 1;
                    }
                }
                self.expect(Tok::Close)?;
                Ok(RingSet::basic(BasicSet::new(self.tree, v, excluded)?))
            }
            other => Err(Error::Expression(format!("expected a set, found {other:?}"))),
        }
    }

    fn inter(&mut self) -> Result<Set<T>> {
        let mut x = self.atom()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            x = x.intersect(self.tree, &self.atom()?);
        }
        Ok(x)
    }

    fn diff(&mut self) -> Result<Set<T>> {
        let mut x = self.inter()?;
        while self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            x = x.diff(self.tree, &self.inter()?);
        }
        Ok(x)
    }

    fn union(&mut self) -> Result<Set<T>> {
        let mut x = self.diff()?;
        loop {
            match self.peek() {
                Some(Tok::Or) => {
                    self.pos += 1;
                    x = x.union(self.tree, &self.diff()?);
                }
                Some(Tok::Xor) => {
                    self.pos += 1;
                    x = x.symmdiff(self.tree, &self.diff()?);
                }
                _ => return Ok(x),
            }
        }
    }
}

pub fn evaluate<T: NamedTree>(tree: &T, text: &str) -> Result<Value<T::Vertex, T::Label>> {
    let mut p = Parser { tree, toks: tokenize(text)?, pos: 0 };
    let x = p.union()?;
    let value = if p.peek() == Some(&Tok::EqEq) {
        p.pos += 1;
        let y = p.union()?;
        Value::Bool(x.equals(tree, &y))
    } else {
        Value::Set(x)
    };
    if p.pos != p.toks.len() {
        return Err(Error::Expression(format!("trailing input at {:?}", p.toks[p.pos])));
    }
    Ok(value)
}

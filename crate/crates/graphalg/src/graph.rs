//! Directed graphs with edge multiplicities in `1, 2, ..` or `omega`.
//!
//! Vertex and bundle names share one namespace, so a bare name inside a
//! path string is unambiguous: a vertex name denotes the unit at that
//! vertex, a bundle name denotes an edge.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BundleId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Multiplicity {
    Finite(u32),
    Omega,
}

impl Multiplicity {
    pub fn admits(self, index: u32) -> bool {
        match self {
            Multiplicity::Finite(k) => index < k,
            Multiplicity::Omega => true,
        }
    }

    pub fn is_omega(self) -> bool {
        matches!(self, Multiplicity::Omega)
    }

    /// `self <= other` in the order `1 < 2 < .. < omega`.
    pub fn fits_in(self, other: Multiplicity) -> bool {
        match (self, other) {
            (_, Multiplicity::Omega) => true,
            (Multiplicity::Omega, Multiplicity::Finite(_)) => false,
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => a <= b,
        }
    }
}

/// A single positive edge: instance `index` of a bundle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeInstance {
    pub bundle: BundleId,
    pub index: u32,
}

impl EdgeInstance {
    pub fn new(bundle: BundleId, index: u32) -> Self {
        EdgeInstance { bundle, index }
    }

    pub fn forward(self) -> SignedEdge {
        SignedEdge { edge: self, dir: Direction::Forward }
    }

    pub fn reversed(self) -> SignedEdge {
        SignedEdge { edge: self, dir: Direction::Reversed }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Reversed,
}

/// An element of `E^1`: a positive edge or its formal reverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedEdge {
    pub edge: EdgeInstance,
    pub dir: Direction,
}

impl SignedEdge {
    pub fn inverse(self) -> SignedEdge {
        let dir = match self.dir {
            Direction::Forward => Direction::Reversed,
            Direction::Reversed => Direction::Forward,
        };
        SignedEdge { edge: self.edge, dir }
    }

    pub fn is_forward(self) -> bool {
        self.dir == Direction::Forward
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBundle {
    pub name: String,
    pub origin: VertexId,
    pub terminus: VertexId,
    pub multiplicity: Multiplicity,
}

/// The positive edges leaving a vertex. Omega bundles are kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta1 {
    pub finite: Vec<EdgeInstance>,
    pub omega: Vec<BundleId>,
}

impl Delta1 {
    pub fn is_infinite(&self) -> bool {
        !self.omega.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.finite.is_empty() && self.omega.is_empty()
    }

    pub fn contains(&self, e: EdgeInstance) -> bool {
        self.omega.contains(&e.bundle) || self.finite.contains(&e)
    }

    /// Lazily enumerates every instance: finite bundles first, then the
    /// omega bundles interleaved by index.
    pub fn instances(&self) -> impl Iterator<Item = EdgeInstance> + '_ {
        let omega = (0u32..).flat_map(move |i| self.omega.iter().map(move |&b| EdgeInstance::new(b, i)));
        self.finite.iter().copied().chain(omega)
    }

    /// The finite instances together with indices `0..k` of every omega bundle.
    pub fn truncated(&self, k: u32) -> Vec<EdgeInstance> {
        let mut out = self.finite.clone();
        for &b in &self.omega {
            out.extend((0..k).map(|i| EdgeInstance::new(b, i)));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    /// No outgoing edges.
    Sink,
    /// Finitely many, but at least one, outgoing edges.
    Sigma,
    /// Infinitely many outgoing edges.
    InfiniteEmitter,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivedSets {
    pub sinks: BTreeSet<VertexId>,
    pub sigma: BTreeSet<VertexId>,
    pub infinite_emitters: BTreeSet<VertexId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    vertex_names: Vec<String>,
    bundles: Vec<EdgeBundle>,
    names: HashMap<String, Name>,
    out: Vec<Vec<BundleId>>,
    incoming: Vec<Vec<BundleId>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Name {
    Vertex(VertexId),
    Bundle(BundleId),
}

fn valid_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        if !valid_identifier(name) {
            return Err(Error::Syntax { line: 0, message: format!("invalid name `{name}`") });
        }
        if self.names.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        let id = VertexId(self.vertex_names.len());
        self.vertex_names.push(name.to_string());
        self.names.insert(name.to_string(), Name::Vertex(id));
        self.out.push(Vec::new());
        self.incoming.push(Vec::new());
        Ok(id)
    }

    pub fn add_bundle(
        &mut self,
        name: &str,
        origin: &str,
        terminus: &str,
        multiplicity: Multiplicity,
    ) -> Result<BundleId> {
        if !valid_identifier(name) {
            return Err(Error::Syntax { line: 0, message: format!("invalid name `{name}`") });
        }
        if self.names.contains_key(name) {
            return Err(Error::DuplicateName(name.to_string()));
        }
        if multiplicity == Multiplicity::Finite(0) {
            return Err(Error::Syntax { line: 0, message: format!("bundle `{name}` has multiplicity 0") });
        }
        let o = self.vertex(origin).map_err(|_| Error::UndeclaredEndpoint(origin.to_string()))?;
        let t = self.vertex(terminus).map_err(|_| Error::UndeclaredEndpoint(terminus.to_string()))?;
        let id = BundleId(self.bundles.len());
        self.bundles.push(EdgeBundle { name: name.to_string(), origin: o, terminus: t, multiplicity });
        self.names.insert(name.to_string(), Name::Bundle(id));
        self.out[o.0].push(id);
        self.incoming[t.0].push(id);
        Ok(id)
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        match self.names.get(name) {
            Some(Name::Vertex(v)) => Ok(*v),
            _ => Err(Error::UnknownVertex(name.to_string())),
        }
    }

    pub fn bundle(&self, name: &str) -> Result<BundleId> {
        match self.names.get(name) {
            Some(Name::Bundle(b)) => Ok(*b),
            _ => Err(Error::UnknownEdge(name.to_string())),
        }
    }

    pub fn has_vertex_name(&self, name: &str) -> bool {
        matches!(self.names.get(name), Some(Name::Vertex(_)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_names.len()).map(VertexId)
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn bundle_count(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundles(&self) -> impl Iterator<Item = (BundleId, &EdgeBundle)> + '_ {
        self.bundles.iter().enumerate().map(|(i, b)| (BundleId(i), b))
    }

    pub fn bundle_data(&self, b: BundleId) -> &EdgeBundle {
        &self.bundles[b.0]
    }

    pub fn out_bundles(&self, v: VertexId) -> &[BundleId] {
        &self.out[v.0]
    }

    pub fn in_bundles(&self, v: VertexId) -> &[BundleId] {
        &self.incoming[v.0]
    }

    pub fn contains_instance(&self, e: EdgeInstance) -> bool {
        e.bundle.0 < self.bundles.len() && self.bundles[e.bundle.0].multiplicity.admits(e.index)
    }

    pub fn edge_origin(&self, e: EdgeInstance) -> VertexId {
        self.bundles[e.bundle.0].origin
    }

    pub fn edge_terminus(&self, e: EdgeInstance) -> VertexId {
        self.bundles[e.bundle.0].terminus
    }

    pub fn origin(&self, e: SignedEdge) -> VertexId {
        match e.dir {
            Direction::Forward => self.edge_origin(e.edge),
            Direction::Reversed => self.edge_terminus(e.edge),
        }
    }

    pub fn terminus(&self, e: SignedEdge) -> VertexId {
        self.origin(e.inverse())
    }

    pub fn delta1(&self, v: VertexId) -> Delta1 {
        let mut finite = Vec::new();
        let mut omega = Vec::new();
        for &b in &self.out[v.0] {
            match self.bundles[b.0].multiplicity {
                Multiplicity::Finite(k) => finite.extend((0..k).map(|i| EdgeInstance::new(b, i))),
                Multiplicity::Omega => omega.push(b),
            }
        }
        Delta1 { finite, omega }
    }

    /// Number of positive edges leaving `v`, `None` when infinite.
    pub fn out_valence(&self, v: VertexId) -> Option<u64> {
        let mut n = 0u64;
        for &b in &self.out[v.0] {
            match self.bundles[b.0].multiplicity {
                Multiplicity::Finite(k) => n += u64::from(k),
                Multiplicity::Omega => return None,
            }
        }
        Some(n)
    }

    pub fn class(&self, v: VertexId) -> VertexClass {
        match self.out_valence(v) {
            None => VertexClass::InfiniteEmitter,
            Some(0) => VertexClass::Sink,
            Some(_) => VertexClass::Sigma,
        }
    }

    pub fn derived_sets(&self) -> DerivedSets {
        let mut d = DerivedSets::default();
        for v in self.vertices() {
            match self.class(v) {
                VertexClass::Sink => d.sinks.insert(v),
                VertexClass::Sigma => d.sigma.insert(v),
                VertexClass::InfiniteEmitter => d.infinite_emitters.insert(v),
            };
        }
        d
    }

    pub fn sigma(&self) -> BTreeSet<VertexId> {
        self.vertices().filter(|&v| self.class(v) == VertexClass::Sigma).collect()
    }

    /// `V(v)`: vertices reachable from `v` by directed paths, `v` included.
    pub fn reachable(&self, v: VertexId) -> BTreeSet<VertexId> {
        let mut seen = BTreeSet::from([v]);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            for &b in &self.out[x.0] {
                let t = self.bundles[b.0].terminus;
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// `V(v; F)`: `v` together with everything reachable through an edge of
    /// `Delta1(v)` outside `excluded`.
    pub fn reachable_avoiding(&self, v: VertexId, excluded: &BTreeSet<EdgeInstance>) -> BTreeSet<VertexId> {
        let mut out = BTreeSet::from([v]);
        for &b in &self.out[v.0] {
            let bundle = &self.bundles[b.0];
            let all_excluded = match bundle.multiplicity {
                Multiplicity::Finite(k) => (0..k).all(|i| excluded.contains(&EdgeInstance::new(b, i))),
                Multiplicity::Omega => false,
            };
            if !all_excluded {
                out.extend(self.reachable(bundle.terminus));
            }
        }
        out
    }

    /// The subgraph on the kept vertices and bundles, keeping names.
    /// `keep_bundle` may lower a multiplicity; bundles whose endpoints are
    /// dropped are dropped too.
    pub fn restrict(
        &self,
        keep_vertex: impl Fn(VertexId) -> bool,
        keep_bundle: impl Fn(BundleId) -> Option<Multiplicity>,
    ) -> Graph {
        let mut sub = Graph::new();
        for v in self.vertices().filter(|&v| keep_vertex(v)) {
            sub.add_vertex(self.vertex_name(v)).expect("names are unique");
        }
        for (b, data) in self.bundles() {
            if !(keep_vertex(data.origin) && keep_vertex(data.terminus)) {
                continue;
            }
            if let Some(m) = keep_bundle(b) {
                let origin = self.vertex_name(data.origin);
                let terminus = self.vertex_name(data.terminus);
                sub.add_bundle(&data.name, origin, terminus, m).expect("endpoints were kept");
            }
        }
        sub
    }

    pub fn instance_name(&self, e: EdgeInstance) -> String {
        let b = &self.bundles[e.bundle.0];
        if b.multiplicity == Multiplicity::Finite(1) && e.index == 0 {
            b.name.clone()
        } else {
            format!("{}#{}", b.name, e.index)
        }
    }

    /// Parses `name` or `name#k`.
    pub fn parse_instance(&self, token: &str) -> Result<EdgeInstance> {
        let (name, index) = match token.split_once('#') {
            Some((n, i)) => {
                let i: u32 = i.trim().parse().map_err(|_| Error::UnknownEdge(token.to_string()))?;
                (n.trim(), i)
            }
            None => (token.trim(), 0),
        };
        let b = self.bundle(name)?;
        let e = EdgeInstance::new(b, index);
        if !self.contains_instance(e) {
            return Err(Error::UnknownEdge(token.to_string()));
        }
        Ok(e)
    }

    pub fn signed_name(&self, e: SignedEdge) -> String {
        match e.dir {
            Direction::Forward => self.instance_name(e.edge),
            Direction::Reversed => format!("~{}", self.instance_name(e.edge)),
        }
    }

    pub fn parse_signed(&self, token: &str) -> Result<SignedEdge> {
        let token = token.trim();
        match token.strip_prefix('~') {
            Some(rest) => Ok(self.parse_instance(rest)?.reversed()),
            None => Ok(self.parse_instance(token)?.forward()),
        }
    }

    pub fn parse_vertex_set(&self, list: &str) -> Result<BTreeSet<VertexId>> {
        list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| self.vertex(s)).collect()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for name in &self.vertex_names {
            writeln!(f, "vertex {name}")?;
        }
        for b in &self.bundles {
            write!(f, "edge {} : {} -> {}", b.name, self.vertex_names[b.origin.0], self.vertex_names[b.terminus.0])?;
            match b.multiplicity {
                Multiplicity::Finite(1) => writeln!(f)?,
                Multiplicity::Finite(k) => writeln!(f, " * {k}")?,
                Multiplicity::Omega => writeln!(f, " * omega")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_graph(s)
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Number(u32),
    Colon,
    Arrow,
    Star,
}

fn tokenize(stmt: &str, line: usize) -> Result<Vec<Tok<'_>>> {
    let err = |message: String| Error::Syntax { line, message };
    let bytes = stmt.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b':' {
            toks.push(Tok::Colon);
            i += 1;
        } else if c == b'*' {
            toks.push(Tok::Star);
            i += 1;
        } else if c == b'-' && bytes.get(i + 1) == Some(&b'>') {
            toks.push(Tok::Arrow);
            i += 2;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = stmt[start..i].parse().map_err(|_| err(format!("number out of range `{}`", &stmt[start..i])))?;
            toks.push(Tok::Number(n));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            toks.push(Tok::Ident(&stmt[start..i]));
        } else {
            return Err(err(format!("unexpected character `{}`", stmt[i..].chars().next().unwrap())));
        }
    }
    Ok(toks)
}

/// Parses the line-oriented graph format. `;` may separate statements on
/// one line and `#` starts a comment.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut g = Graph::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        for stmt in content.split(';') {
            let toks = tokenize(stmt, line)?;
            let at_line = |e: Error| match e {
                Error::Syntax { message, .. } => Error::Syntax { line, message },
                other => other,
            };
            match toks.as_slice() {
                [] => {}
                [Tok::Ident("vertex"), Tok::Ident(name)] => {
                    g.add_vertex(name).map_err(at_line)?;
                }
                [Tok::Ident("edge"), Tok::Ident(name), Tok::Colon, Tok::Ident(o), Tok::Arrow, Tok::Ident(t), rest @ ..] =>
                {
                    let mult = match rest {
                        [] => Multiplicity::Finite(1),
                        [Tok::Star, Tok::Number(k)] if *k > 0 => Multiplicity::Finite(*k),
                        [Tok::Star, Tok::Ident("omega")] => Multiplicity::Omega,
                        _ => {
                            return Err(Error::Syntax {
                                line,
                                message: "expected `* <k>` or `* omega` after edge".into(),
                            })
                        }
                    };
                    g.add_bundle(name, o, t, mult).map_err(at_line)?;
                }
                _ => {
                    return Err(Error::Syntax { line, message: format!("cannot parse statement `{}`", stmt.trim()) });
                }
            }
        }
    }
    Ok(g)
}

/// A subgraph relation `sub ⊆ sup`, matched by names.
#[derive(Clone, Debug)]
pub struct Inclusion {
    vertex_map: Vec<VertexId>,
    bundle_map: Vec<BundleId>,
}

impl Inclusion {
    pub fn new(sub: &Graph, sup: &Graph) -> Result<Self> {
        let mut vertex_map = Vec::with_capacity(sub.vertex_count());
        for v in sub.vertices() {
            let name = sub.vertex_name(v);
            vertex_map.push(sup.vertex(name).map_err(|_| Error::NotSubgraph(format!("vertex `{name}` missing")))?);
        }
        let mut bundle_map = Vec::with_capacity(sub.bundle_count());
        for (_, b) in sub.bundles() {
            let target = sup.bundle(&b.name).map_err(|_| Error::NotSubgraph(format!("edge `{}` missing", b.name)))?;
            let tb = sup.bundle_data(target);
            if vertex_map[b.origin.0] != tb.origin || vertex_map[b.terminus.0] != tb.terminus {
                return Err(Error::NotSubgraph(format!("edge `{}` has different endpoints", b.name)));
            }
            if !b.multiplicity.fits_in(tb.multiplicity) {
                return Err(Error::NotSubgraph(format!("edge `{}` has larger multiplicity", b.name)));
            }
            bundle_map.push(target);
        }
        Ok(Inclusion { vertex_map, bundle_map })
    }

    pub fn map_vertex(&self, v: VertexId) -> VertexId {
        self.vertex_map[v.0]
    }

    pub fn map_instance(&self, e: EdgeInstance) -> EdgeInstance {
        EdgeInstance::new(self.bundle_map[e.bundle.0], e.index)
    }

    pub fn map_signed(&self, e: SignedEdge) -> SignedEdge {
        SignedEdge { edge: self.map_instance(e.edge), dir: e.dir }
    }

    /// Whether every vertex and every edge instance of `sup` is hit.
    pub fn is_onto(&self, sub: &Graph, sup: &Graph) -> bool {
        if sub.vertex_count() != sup.vertex_count() || sub.bundle_count() != sup.bundle_count() {
            return false;
        }
        sub.bundles().all(|(b, data)| data.multiplicity == sup.bundle_data(self.bundle_map[b.0]).multiplicity)
    }

    /// The preimage of an edge instance of `sup`, if it lies in `sub`.
    pub fn preimage_instance(&self, sub: &Graph, e: EdgeInstance) -> Option<EdgeInstance> {
        let b = self.bundle_map.iter().position(|&x| x == e.bundle)?;
        let candidate = EdgeInstance::new(BundleId(b), e.index);
        sub.contains_instance(candidate).then_some(candidate)
    }

    pub fn preimage_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.vertex_map.iter().position(|&x| x == v).map(VertexId)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_semicolon_separated_statements() {
        let g = parse_graph("vertex u; vertex v; edge e: u -> v").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.bundle_count(), 1);
    }

    #[test]
    fn omega_marks_infinite_emitter() {
        let g = parse_graph("vertex u; edge a: u -> u * omega").unwrap();
        let u = g.vertex("u").unwrap();
        assert_eq!(g.derived_sets().infinite_emitters, BTreeSet::from([u]));
        let d = g.delta1(u);
        assert!(d.is_infinite());
        let first: Vec<_> = d.instances().take(3).map(|e| e.index).collect();
        assert_eq!(first, vec![0, 1, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_graph("edge e: u -> v"), Err(Error::UndeclaredEndpoint("u".into())));
        assert_eq!(parse_graph("vertex u\nvertex u"), Err(Error::DuplicateName("u".into())));
        assert!(matches!(parse_graph("vertex u\nedge e u -> u"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_graph("vertex u\n\nedge e : u -> u * 0"), Err(Error::Syntax { line: 3, .. })));
        assert!(matches!(parse_graph("vertex 9u"), Err(Error::Syntax { line: 1, .. })));
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_graph("# a graph\nvertex u  # the only vertex\n\nedge a : u -> u * 3\n").unwrap();
        assert_eq!(g.delta1(VertexId(0)).finite.len(), 3);
        assert_eq!(g.instance_name(EdgeInstance::new(BundleId(0), 2)), "a#2");
    }

    #[test]
    fn display_round_trips() {
        let g = parse_graph("vertex u; vertex v; edge e: u -> v * 2; edge f : v -> u * omega; edge g: u -> u").unwrap();
        let again = parse_graph(&g.to_string()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn derived_sets_partition() {
        let g = parse_graph("vertex u; vertex v; vertex w; edge e: u -> v; edge f: w -> w * omega").unwrap();
        let d = g.derived_sets();
        assert_eq!(d.sinks.len() + d.sigma.len() + d.infinite_emitters.len(), 3);
        assert!(d.sigma.contains(&g.vertex("u").unwrap()));
        assert!(d.sinks.contains(&g.vertex("v").unwrap()));
    }

    #[test]
    fn inclusion_checks_endpoints_and_multiplicity() {
        let big = parse_graph("vertex u; vertex v; edge e: u -> v * 2; edge f: u -> u * omega").unwrap();
        let small = parse_graph("vertex u; vertex v; edge e: u -> v; edge f: u -> u * 5").unwrap();
        assert!(Inclusion::new(&small, &big).is_ok());
        assert!(Inclusion::new(&big, &small).is_err());
        let twisted = parse_graph("vertex u; vertex v; edge e: v -> u").unwrap();
        assert!(Inclusion::new(&twisted, &big).is_err());
    }
}

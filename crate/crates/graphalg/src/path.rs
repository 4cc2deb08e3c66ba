//! Reduced paths: the elements of the path groupoid and the vertices of
//! the universal cover.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{EdgeInstance, Graph, Multiplicity, SignedEdge, VertexId};

/// A reduced word of signed edges with explicit endpoints. The empty word
/// is the unit at `origin`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    origin: VertexId,
    terminus: VertexId,
    word: Vec<SignedEdge>,
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.origin
            .cmp(&other.origin)
            .then(self.word.len().cmp(&other.word.len()))
            .then_with(|| self.word.cmp(&other.word))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Path {
    pub fn unit(v: VertexId) -> Path {
        Path { origin: v, terminus: v, word: Vec::new() }
    }

    pub fn edge(g: &Graph, e: SignedEdge) -> Path {
        Path { origin: g.origin(e), terminus: g.terminus(e), word: vec![e] }
    }

    /// Builds a path from `origin` by successive multiplication, so the
    /// result is reduced even if `edges` is not.
    pub fn from_edges(g: &Graph, origin: VertexId, edges: impl IntoIterator<Item = SignedEdge>) -> Result<Path> {
        let mut p = Path::unit(origin);
        for e in edges {
            p = p.push(g, e)?;
        }
        Ok(p)
    }

    pub fn origin(&self) -> VertexId {
        self.origin
    }

    pub fn terminus(&self) -> VertexId {
        self.terminus
    }

    pub fn word(&self) -> &[SignedEdge] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_unit(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn is_directed(&self) -> bool {
        self.word.iter().all(|e| e.is_forward())
    }

    pub fn last(&self) -> Option<SignedEdge> {
        self.word.last().copied()
    }

    pub fn first(&self) -> Option<SignedEdge> {
        self.word.first().copied()
    }

    /// Right multiplication by one edge, cancelling if it undoes the last one.
    pub fn push(&self, g: &Graph, e: SignedEdge) -> Result<Path> {
        if g.origin(e) != self.terminus {
            return Err(Error::NotComposable(format!(
                "{} ends at {}, {} starts at {}",
                self.display(g),
                g.vertex_name(self.terminus),
                g.signed_name(e),
                g.vertex_name(g.origin(e))
            )));
        }
        let mut word = self.word.clone();
        if word.last() == Some(&e.inverse()) {
            word.pop();
        } else {
            word.push(e);
        }
        Ok(Path { origin: self.origin, terminus: g.terminus(e), word })
    }

    /// Groupoid product together with the number of cancelled pairs `r`, so
    /// that `len = self.len() + other.len() - 2r`.
    pub fn concat_counting(&self, other: &Path) -> Result<(Path, usize)> {
        if self.terminus != other.origin {
            return Err(Error::NotComposable(format!(
                "terminus {:?} differs from origin {:?}",
                self.terminus, other.origin
            )));
        }
        let n = self.word.len();
        let max = n.min(other.word.len());
        let r = (0..max).take_while(|&i| self.word[n - 1 - i] == other.word[i].inverse()).count();
        let mut word = Vec::with_capacity(n + other.word.len() - 2 * r);
        word.extend_from_slice(&self.word[..n - r]);
        word.extend_from_slice(&other.word[r..]);
        Ok((Path { origin: self.origin, terminus: other.terminus, word }, r))
    }

    pub fn concat(&self, other: &Path) -> Result<Path> {
        self.concat_counting(other).map(|(p, _)| p)
    }

    pub fn inverse(&self) -> Path {
        Path {
            origin: self.terminus,
            terminus: self.origin,
            word: self.word.iter().rev().map(|e| e.inverse()).collect(),
        }
    }

    /// The first `k` letters.
    pub fn prefix(&self, g: &Graph, k: usize) -> Path {
        let k = k.min(self.word.len());
        let terminus = if k == 0 { self.origin } else { g.terminus(self.word[k - 1]) };
        Path { origin: self.origin, terminus, word: self.word[..k].to_vec() }
    }

    /// Everything after the first `k` letters.
    pub fn suffix(&self, g: &Graph, k: usize) -> Path {
        let k = k.min(self.word.len());
        let origin = if k == 0 { self.origin } else { g.terminus(self.word[k - 1]) };
        Path { origin, terminus: self.terminus, word: self.word[k..].to_vec() }
    }

    /// Whether the word is free of adjacent `e, ~e` pairs and composable.
    pub fn is_reduced_in(&self, g: &Graph) -> bool {
        let mut at = self.origin;
        for (i, &e) in self.word.iter().enumerate() {
            if g.origin(e) != at || (i > 0 && self.word[i - 1] == e.inverse()) {
                return false;
            }
            at = g.terminus(e);
        }
        at == self.terminus
    }

    pub fn display(&self, g: &Graph) -> String {
        if self.word.is_empty() {
            g.vertex_name(self.origin).to_string()
        } else {
            self.word.iter().map(|&e| g.signed_name(e)).collect::<Vec<_>>().join(".")
        }
    }
}

impl Graph {
    /// Directed paths from `v` of length at most `max_len`, in shortlex
    /// order; omega bundles contribute their first `truncate` instances.
    pub fn directed_paths_from(&self, v: VertexId, max_len: usize, truncate: u32) -> Vec<Path> {
        let mut out = vec![Path::unit(v)];
        let mut frontier = 0;
        for _ in 0..max_len {
            let end = out.len();
            for i in frontier..end {
                let p = out[i].clone();
                for e in self.delta1(p.terminus()).truncated(truncate) {
                    out.push(p.push(self, e.forward()).expect("edge leaves the terminus"));
                }
            }
            if out.len() == end {
                break;
            }
            frontier = end;
        }
        out
    }

    /// All directed paths of length at most `max_len`, ordered by length,
    /// then origin, then word.
    pub fn directed_paths(&self, max_len: usize, truncate: u32) -> Vec<Path> {
        let mut all: Vec<Path> = self.vertices().flat_map(|v| self.directed_paths_from(v, max_len, truncate)).collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    /// Signed edges leaving `v`: forward out-edges and reversed in-edges.
    pub fn signed_edges_at(&self, v: VertexId, truncate: u32) -> Vec<SignedEdge> {
        let mut out: Vec<SignedEdge> = self.delta1(v).truncated(truncate).into_iter().map(|e| e.forward()).collect();
        for &b in self.in_bundles(v) {
            let count = match self.bundle_data(b).multiplicity {
                Multiplicity::Finite(k) => k,
                Multiplicity::Omega => truncate,
            };
            out.extend((0..count).map(|i| EdgeInstance::new(b, i).reversed()));
        }
        out
    }

    /// Reduced paths from `v` of length at most `max_len` (the cover fiber
    /// over `v`, truncated), in shortlex order.
    pub fn reduced_paths_from(&self, v: VertexId, max_len: usize, truncate: u32) -> Vec<Path> {
        let mut out = vec![Path::unit(v)];
        let mut frontier = 0;
        for _ in 0..max_len {
            let end = out.len();
            for i in frontier..end {
                let p = out[i].clone();
                for s in self.signed_edges_at(p.terminus(), truncate) {
                    if p.last() != Some(s.inverse()) {
                        out.push(p.push(self, s).expect("edge leaves the terminus"));
                    }
                }
            }
            if out.len() == end {
                break;
            }
            frontier = end;
        }
        out
    }
}

impl Graph {
    /// Parses `e.f.~g` (edges, `~` for reversal, `#k` for instances) or a
    /// bare vertex name for a unit.
    pub fn parse_path(&self, text: &str) -> Result<Path> {
        let text = text.trim();
        if text.is_empty() {
            return Err(Error::MalformedPath("empty path string".into()));
        }
        if self.has_vertex_name(text) {
            return Ok(Path::unit(self.vertex(text)?));
        }
        let edges = text
            .split('.')
            .map(|t| self.parse_signed(t).map_err(|e| Error::MalformedPath(format!("`{text}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let origin = self.origin(edges[0]);
        Path::from_edges(self, origin, edges).map_err(|e| Error::MalformedPath(format!("`{text}`: {e}")))
    }
}

//! Computable points of the cover spectrum: finite reduced paths and
//! eventually periodic infinite words `beta gamma gamma ...`.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, SignedEdge, VertexId};
use crate::path::Path;

/// The infinite reduced word `stem cycle cycle ...`, with the cycle a
/// directed circuit at `stem.terminus()`.
///
/// Kept in a normal form: the cycle is primitive and is the least of its
/// rotations, and the stem is the shortest one compatible with that.
/// Two lassos with the same origin are the same point iff they are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    stem: Path,
    cycle: Vec<SignedEdge>,
}

impl Lasso {
    pub fn new(g: &Graph, stem: Path, cycle: &Path) -> Result<Lasso> {
        if cycle.is_empty() || !cycle.is_directed() || cycle.origin() != cycle.terminus() {
            return Err(Error::MalformedPath(format!("`{}` is not a directed circuit", cycle.display(g))));
        }
        if stem.terminus() != cycle.origin() {
            return Err(Error::NotComposable(format!(
                "stem `{}` does not end where `{}` starts",
                stem.display(g),
                cycle.display(g)
            )));
        }
        Ok(Self::normalized(g, stem, cycle.word().to_vec()))
    }

    fn normalized(g: &Graph, mut stem: Path, mut cycle: Vec<SignedEdge>) -> Lasso {
        // Cancel reversed stem edges against the periodic part.
        while let Some(last) = stem.last() {
            if last != cycle[0].inverse() {
                break;
            }
            stem = stem.prefix(g, stem.len() - 1);
            cycle.rotate_left(1);
        }
        let n = cycle.len();
        let period = (1..=n).find(|&p| n.is_multiple_of(p) && (p..n).all(|i| cycle[i] == cycle[i - p])).unwrap_or(n);
        cycle.truncate(period);
        while let Some(last) = stem.last() {
            if Some(&last) != cycle.last() {
                break;
            }
            stem = stem.prefix(g, stem.len() - 1);
            cycle.rotate_right(1);
        }
        let k = (0..cycle.len())
            .min_by(|&i, &j| {
                let ri = cycle[i..].iter().chain(&cycle[..i]);
                let rj = cycle[j..].iter().chain(&cycle[..j]);
                ri.cmp(rj)
            })
            .unwrap_or(0);
        for &e in &cycle[..k] {
            stem = stem.push(g, e).expect("cycle letters compose");
        }
        cycle.rotate_left(k);
        Lasso { stem, cycle }
    }

    pub fn stem(&self) -> &Path {
        &self.stem
    }

    pub fn cycle(&self) -> &[SignedEdge] {
        &self.cycle
    }

    pub fn cycle_path(&self, g: &Graph) -> Path {
        Path::from_edges(g, self.stem.terminus(), self.cycle.iter().copied()).expect("cycle is a circuit")
    }

    pub fn origin(&self) -> VertexId {
        self.stem.origin()
    }

    pub fn letter(&self, i: usize) -> SignedEdge {
        let s = self.stem.len();
        if i < s {
            self.stem.word()[i]
        } else {
            self.cycle[(i - s) % self.cycle.len()]
        }
    }

    /// Whether both lassos have the same eventual tail, ignoring stems.
    pub fn tail_equivalent(&self, other: &Lasso) -> bool {
        self.cycle == other.cycle
    }
}

/// A point of the cover spectrum over one fiber: a vertex of the cover (a
/// reduced path) or an end represented by a lasso.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Finite(Path),
    Lasso(Lasso),
}

/// A symbolic word `prefix period period ...`; finite when `period` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    pub prefix: Vec<SignedEdge>,
    pub period: Vec<SignedEdge>,
}

impl Word {
    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn len(&self) -> Option<usize> {
        self.is_finite().then_some(self.prefix.len())
    }

    pub fn is_empty(&self) -> bool {
        self.prefix.is_empty() && self.period.is_empty()
    }

    pub fn letter(&self, i: usize) -> Option<SignedEdge> {
        if i < self.prefix.len() {
            Some(self.prefix[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.prefix.len()) % self.period.len()])
        }
    }

    /// At most `n` leading letters.
    pub fn take(&self, n: usize) -> Vec<SignedEdge> {
        (0..n).map_while(|i| self.letter(i)).collect()
    }

    pub fn is_directed(&self) -> bool {
        self.prefix.iter().chain(&self.period).all(|e| e.is_forward())
    }
}

impl Point {
    pub fn vertex(v: VertexId) -> Point {
        Point::Finite(Path::unit(v))
    }

    /// The fiber the point lives over, `lambda(x)`.
    pub fn origin(&self) -> VertexId {
        match self {
            Point::Finite(p) => p.origin(),
            Point::Lasso(l) => l.origin(),
        }
    }

    pub fn underline(&self) -> Word {
        match self {
            Point::Finite(p) => Word { prefix: p.word().to_vec(), period: Vec::new() },
            Point::Lasso(l) => Word { prefix: l.stem.word().to_vec(), period: l.cycle.clone() },
        }
    }

    /// Left action of the groupoid element `alpha`, defined when `alpha`
    /// ends where the point starts.
    pub fn act(&self, g: &Graph, alpha: &Path) -> Result<Point> {
        match self {
            Point::Finite(p) => Ok(Point::Finite(alpha.concat(p)?)),
            Point::Lasso(l) => {
                let stem = alpha.concat(&l.stem)?;
                Ok(Point::Lasso(Lasso::normalized(g, stem, l.cycle.clone())))
            }
        }
    }

    /// The point obtained by deleting the first `r` letters of the
    /// underline; it lives over the vertex those letters lead to.
    pub fn drop_letters(&self, g: &Graph, r: usize) -> Point {
        match self {
            Point::Finite(p) => Point::Finite(p.suffix(g, r)),
            Point::Lasso(l) => {
                let s = l.stem.len();
                if r <= s {
                    Point::Lasso(Lasso::normalized(g, l.stem.suffix(g, r), l.cycle.clone()))
                } else {
                    let mut cycle = l.cycle.clone();
                    let shift = (r - s) % cycle.len();
                    cycle.rotate_left(shift);
                    let at = g.origin(cycle[0]);
                    Point::Lasso(Lasso::normalized(g, Path::unit(at), cycle))
                }
            }
        }
    }

    pub fn is_lasso(&self) -> bool {
        matches!(self, Point::Lasso(_))
    }

    pub fn display(&self, g: &Graph) -> String {
        match self {
            Point::Finite(p) => p.display(g),
            Point::Lasso(l) => {
                let stem = if l.stem.is_unit() { String::new() } else { l.stem.display(g) };
                let cycle = l.cycle.iter().map(|&e| g.signed_name(e)).collect::<Vec<_>>().join(".");
                format!("{stem}@{cycle}")
            }
        }
    }
}

impl Graph {
    /// Parses a finite path, or `beta@gamma` for a lasso (`beta` may be empty).
    pub fn parse_point(&self, text: &str) -> Result<Point> {
        match text.split_once('@') {
            None => Ok(Point::Finite(self.parse_path(text)?)),
            Some((stem, cycle)) => {
                let cycle = self.parse_path(cycle)?;
                let stem = if stem.trim().is_empty() { Path::unit(cycle.origin()) } else { self.parse_path(stem)? };
                Ok(Point::Lasso(Lasso::new(self, stem, &cycle)?))
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})^inf", self.prefix, self.period)
    }
}

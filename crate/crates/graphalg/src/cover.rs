//! The universal cover: fibers as directed trees, the groupoid action on
//! points, standard forms, the length cocycle, the transversal and the
//! finite pieces of the AF core.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graph::{EdgeInstance, Graph, Inclusion, VertexClass, VertexId};
use crate::path::Path;
use crate::point::Point;
use crate::tree::{BasicSet, DirectedTree, RingSet, Step, TreeMap, Valence};

/// The fiber of the cover over `base`: reduced paths starting at `base`,
/// with an edge `p -> p·e` for every positive edge `e` at `t(p)`.
#[derive(Clone, Copy, Debug)]
pub struct Fiber<'g> {
    graph: &'g Graph,
    base: VertexId,
}

pub type FiberSet = RingSet<Path, EdgeInstance>;
pub type FiberBlock = BasicSet<Path, EdgeInstance>;

impl<'g> Fiber<'g> {
    pub fn new(graph: &'g Graph, base: VertexId) -> Self {
        Fiber { graph, base }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn root(&self) -> Path {
        Path::unit(self.base)
    }

    /// The whole fiber as a ring element.
    pub fn whole(&self) -> FiberSet {
        RingSet::basic(BasicSet::cone(self.root()))
    }

    /// Fiber vertices up to word length `depth`.
    pub fn vertices(&self, depth: usize, truncate: u32) -> Vec<Path> {
        self.graph.reduced_paths_from(self.base, depth, truncate)
    }
}

/// Directed cover edges leaving `p`, as the paths they lead to.
pub fn cover_delta1(g: &Graph, p: &Path, truncate: u32) -> Vec<Path> {
    g.delta1(p.terminus())
        .truncated(truncate)
        .into_iter()
        .map(|e| p.push(g, e.forward()).expect("edge leaves the terminus"))
        .collect()
}

impl DirectedTree for Fiber<'_> {
    type Vertex = Path;
    type Label = EdgeInstance;

    fn has_vertex(&self, v: &Path) -> bool {
        v.origin() == self.base && v.is_reduced_in(self.graph)
    }

    fn valence(&self, v: &Path) -> Valence {
        match self.graph.out_valence(v.terminus()) {
            Some(n) => Valence::Finite(n as usize),
            None => Valence::Infinite,
        }
    }

    fn has_label(&self, v: &Path, label: &EdgeInstance) -> bool {
        self.graph.contains_instance(*label) && self.graph.edge_origin(*label) == v.terminus()
    }

    fn target(&self, v: &Path, label: &EdgeInstance) -> Path {
        v.push(self.graph, label.forward()).expect("label leaves the terminus")
    }

    fn out_labels(&self, v: &Path, truncate: u32) -> Vec<EdgeInstance> {
        self.graph.delta1(v.terminus()).truncated(truncate)
    }

    fn geodesic(&self, from: &Path, to: &Path) -> Option<Vec<Step<Path, EdgeInstance>>> {
        if from.origin() != to.origin() {
            return None;
        }
        let between = from.inverse().concat(to).ok()?;
        let mut at = from.clone();
        let mut steps = Vec::with_capacity(between.len());
        for &s in between.word() {
            let next = at.push(self.graph, s).expect("geodesic letters compose");
            steps.push(Step { from: at, to: next.clone(), label: s.edge, forward: s.is_forward() });
            at = next;
        }
        Some(steps)
    }

    fn vertex_name(&self, v: &Path) -> String {
        v.display(self.graph)
    }

    fn label_name(&self, _v: &Path, label: &EdgeInstance) -> String {
        self.graph.instance_name(*label)
    }
}

/// Left translation by `gamma`, from the fiber over `t(gamma)` to the
/// fiber over `o(gamma)`.
pub struct Translation<'g> {
    pub graph: &'g Graph,
    pub gamma: Path,
}

impl<'g> TreeMap<Fiber<'g>, Fiber<'g>> for Translation<'g> {
    fn map_vertex(&self, v: &Path) -> Option<Path> {
        self.gamma.concat(v).ok()
    }

    fn map_label(&self, v: &Path, label: &EdgeInstance) -> Option<EdgeInstance> {
        (v.origin() == self.gamma.terminus()).then_some(*label)
    }
}

/// The fiber map induced by a subgraph inclusion.
pub struct FiberInclusion<'g> {
    pub sub: &'g Graph,
    pub sup: &'g Graph,
    pub inclusion: Inclusion,
}

impl<'g> FiberInclusion<'g> {
    pub fn new(sub: &'g Graph, sup: &'g Graph) -> Result<Self> {
        Ok(FiberInclusion { sub, sup, inclusion: Inclusion::new(sub, sup)? })
    }

    pub fn map_path(&self, p: &Path) -> Path {
        let origin = self.inclusion.map_vertex(p.origin());
        Path::from_edges(self.sup, origin, p.word().iter().map(|&s| self.inclusion.map_signed(s)))
            .expect("subgraph paths stay composable")
    }
}

impl<'g> TreeMap<Fiber<'g>, Fiber<'g>> for FiberInclusion<'g> {
    fn map_vertex(&self, v: &Path) -> Option<Path> {
        Some(self.map_path(v))
    }

    fn map_label(&self, _v: &Path, label: &EdgeInstance) -> Option<EdgeInstance> {
        Some(self.inclusion.map_instance(*label))
    }
}

/// An arrow `(alpha, y)` of the groupoid acting on points: it sends `y`
/// to `alpha·y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub alpha: Path,
    pub y: Point,
}

impl Arrow {
    pub fn new(alpha: Path, y: Point) -> Result<Arrow> {
        if alpha.terminus() != y.origin() {
            return Err(Error::NotComposable("arrow element must end where the point starts".into()));
        }
        Ok(Arrow { alpha, y })
    }

    pub fn unit(y: Point) -> Arrow {
        Arrow { alpha: Path::unit(y.origin()), y }
    }

    pub fn range(&self, g: &Graph) -> Point {
        self.y.act(g, &self.alpha).expect("arrow is composable")
    }

    /// `self ∘ other`, defined when `self` starts where `other` lands.
    pub fn compose(&self, g: &Graph, other: &Arrow) -> Result<Arrow> {
        if other.range(g) != self.y {
            return Err(Error::NotComposable("range of the right factor differs from the source of the left".into()));
        }
        Ok(Arrow { alpha: self.alpha.concat(&other.alpha)?, y: other.y.clone() })
    }

    pub fn inverse(&self, g: &Graph) -> Arrow {
        Arrow { alpha: self.alpha.inverse(), y: self.range(g) }
    }
}

/// `(alpha, y) = (beta1 beta2^-1, beta2 x)` with no cancellation anywhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    pub beta1: Path,
    pub beta2: Path,
    pub x: Point,
}

impl StandardForm {
    pub fn cocycle(&self) -> i64 {
        self.beta1.len() as i64 - self.beta2.len() as i64
    }
}

/// Splits `(alpha, y)` at the letters of `alpha` that cancel against the
/// start of the underline of `y`.
pub fn standard_form(g: &Graph, alpha: &Path, y: &Point) -> Result<StandardForm> {
    if alpha.terminus() != y.origin() {
        return Err(Error::NotComposable(format!(
            "`{}` ends at {} but the point lies over {}",
            alpha.display(g),
            g.vertex_name(alpha.terminus()),
            g.vertex_name(y.origin())
        )));
    }
    let w = y.underline();
    let k = alpha.len();
    let r = (0..k).take_while(|&i| w.letter(i) == Some(alpha.word()[k - 1 - i].inverse())).count();
    let beta1 = alpha.prefix(g, k - r);
    let beta2 = Path::from_edges(g, y.origin(), w.take(r)).expect("underline prefix is a path");
    Ok(StandardForm { beta1, beta2, x: y.drop_letters(g, r) })
}

pub fn cocycle(g: &Graph, alpha: &Path, y: &Point) -> Result<i64> {
    standard_form(g, alpha, y).map(|sf| sf.cocycle())
}

fn check_sigma(g: &Graph, s: &BTreeSet<VertexId>) -> Result<()> {
    match s.iter().find(|&&v| g.class(v) != VertexClass::Sigma) {
        Some(&v) => Err(Error::NotInSigma(g.vertex_name(v).to_string())),
        None => Ok(()),
    }
}

/// Whether `x` has a directed underline and lies in the boundary relative
/// to `s`: a lasso, or a finite path ending outside `s` at a vertex that is
/// a sink, an infinite emitter, or in Sigma.
pub fn in_transversal(g: &Graph, x: &Point, s: &BTreeSet<VertexId>) -> Result<bool> {
    check_sigma(g, s)?;
    if !x.underline().is_directed() {
        return Ok(false);
    }
    Ok(match x {
        Point::Lasso(_) => true,
        Point::Finite(p) => !s.contains(&p.terminus()),
    })
}

/// Moves `x` into the transversal by stripping the part of its underline
/// before the directed tail: returns `(alpha, alpha^-1 x)`.
pub fn transversal_translate(g: &Graph, x: &Point) -> (Path, Point) {
    let w = x.underline();
    let cut = w.prefix.iter().rposition(|e| !e.is_forward()).map_or(0, |i| i + 1);
    let alpha = Path::from_edges(g, x.origin(), w.prefix[..cut].iter().copied()).expect("underline prefix is a path");
    (alpha, x.drop_letters(g, cut))
}

/// A family of arrows `(beta1 beta2^-1, beta2 x)` with `x` ranging over the
/// directed points of `region`, a cone in the fiber over `t(beta)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArrowBlock {
    pub beta1: Path,
    pub beta2: Path,
    pub region: FiberSet,
}

/// Directed paths of the subgraph `f`, mapped into `g`, of length at most `n`.
fn sub_paths(g: &Graph, f: &Graph, n: usize, truncate: u32) -> Result<Vec<Path>> {
    let inc = FiberInclusion::new(f, g)?;
    Ok(f.directed_paths(n, truncate).iter().map(|p| inc.map_path(p)).collect())
}

/// Blocks covering the arrows of the AF core whose standard form uses
/// directed paths of `f` of equal length at most `n`.
pub fn af_block_enumerate(g: &Graph, f: &Graph, n: usize, truncate: u32) -> Result<Vec<ArrowBlock>> {
    let paths = sub_paths(g, f, n, truncate)?;
    let mut groups: BTreeMap<(usize, VertexId), Vec<Path>> = BTreeMap::new();
    for p in paths {
        groups.entry((p.len(), p.terminus())).or_default().push(p);
    }
    let mut out = Vec::new();
    for ((_, t), group) in &groups {
        let region = RingSet::basic(BasicSet::cone(Path::unit(*t)));
        for b1 in group {
            for b2 in group {
                out.push(ArrowBlock { beta1: b1.clone(), beta2: b2.clone(), region: region.clone() });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// The pairs `(beta1, beta2)` that occur as standard forms of arrows of
/// length at most `n` in `f` with source `y`.
pub fn af_matrix_units(g: &Graph, f: &Graph, n: usize, y: &Point, truncate: u32) -> Result<Vec<(Path, Path)>> {
    let w = y.underline();
    if !w.is_directed() {
        return Err(Error::MalformedPath("source point must have a directed underline".into()));
    }
    let paths = sub_paths(g, f, n, truncate)?;
    let in_f: BTreeSet<&Path> = paths.iter().collect();
    let mut out = Vec::new();
    for l in 0..=n {
        let letters = w.take(l);
        if letters.len() < l {
            break;
        }
        let beta2 = Path::from_edges(g, y.origin(), letters).expect("underline prefix is a path");
        if !in_f.contains(&beta2) {
            break;
        }
        for beta1 in paths.iter().filter(|p| p.len() == l && p.terminus() == beta2.terminus()) {
            if (l == 0 && beta1 == &beta2) || (l > 0 && beta1.last() != beta2.last()) {
                out.push((beta1.clone(), beta2.clone()));
            }
        }
    }
    Ok(out)
}

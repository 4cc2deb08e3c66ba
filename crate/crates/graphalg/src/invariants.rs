//! Invariants `(N, F)` of a graph: validation, enumeration, the order, the
//! correspondence with open sets of the boundary, and quotient data.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cover::{Fiber, FiberBlock, FiberSet};
use crate::error::{Error, Result};
use crate::graph::{BundleId, EdgeInstance, Graph, Multiplicity, VertexClass, VertexId};
use crate::path::Path;
use crate::tree::{basic_member, boundary_empty, BasicSet, DirectedTree, RingSet, Valence};

/// A vertex set `N` with finite exclusion sets `F_u` for `u` in `N`.
/// Empty exclusion sets are not stored, so equal invariants compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Invariant {
    pub n: BTreeSet<VertexId>,
    pub f: BTreeMap<VertexId, BTreeSet<EdgeInstance>>,
}

impl Invariant {
    pub fn new(n: BTreeSet<VertexId>, f: BTreeMap<VertexId, BTreeSet<EdgeInstance>>) -> Self {
        let f = f.into_iter().filter(|(_, s)| !s.is_empty()).collect();
        Invariant { n, f }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// All vertices, nothing excluded.
    pub fn full(g: &Graph) -> Self {
        Invariant { n: g.vertices().collect(), f: BTreeMap::new() }
    }

    pub fn excluded(&self, u: VertexId) -> &BTreeSet<EdgeInstance> {
        static EMPTY: BTreeSet<EdgeInstance> = BTreeSet::new();
        self.f.get(&u).unwrap_or(&EMPTY)
    }

    /// `R(N, F)`: the vertices with a nonempty exclusion set.
    pub fn r(&self) -> BTreeSet<VertexId> {
        self.f.keys().copied().collect()
    }

    /// `u` is in `N` with nothing excluded.
    fn saturated_at(&self, u: VertexId) -> bool {
        self.n.contains(&u) && self.excluded(u).is_empty()
    }

    pub fn display(&self, g: &Graph) -> String {
        let n: Vec<String> = self
            .n
            .iter()
            .map(|&u| {
                let f = self.excluded(u);
                if f.is_empty() {
                    g.vertex_name(u).to_string()
                } else {
                    let names: Vec<String> = f.iter().map(|&e| g.instance_name(e)).collect();
                    format!("{}[{}]", g.vertex_name(u), names.join(","))
                }
            })
            .collect();
        format!("{{{}}}", n.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    /// `F_u` must be empty when `u` emits finitely many edges.
    FiniteValence,
    /// An edge outside `F_u` must lead to a vertex of `N` with empty `F`.
    ForcedTarget,
    /// An edge inside `F_u` must not lead to a vertex of `N` with empty `F`.
    ExcludedTarget,
    /// A vertex all of whose (finitely many) edges lead into `N` with empty
    /// `F` must itself be in `N`.
    Saturation,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub vertex: VertexId,
    pub edge: Option<EdgeInstance>,
}

impl Violation {
    pub fn describe(&self, g: &Graph) -> String {
        let u = g.vertex_name(self.vertex);
        let e = self.edge.map(|e| g.instance_name(e)).unwrap_or_default();
        match self.clause {
            Clause::FiniteValence => format!("F_{u} is nonempty but {u} has finite valence"),
            Clause::ForcedTarget => {
                format!("edge {e} is not excluded at {u}, so its terminus must be in N with empty F")
            }
            Clause::ExcludedTarget => format!("edge {e} is excluded at {u} but its terminus is in N with empty F"),
            Clause::Saturation => format!("every edge of {u} leads into N with empty F, so {u} must be in N"),
        }
    }
}

fn check_shape(g: &Graph, inv: &Invariant) -> Result<()> {
    if let Some(v) = inv.n.iter().find(|v| v.0 >= g.vertex_count()) {
        return Err(Error::InvalidInvariant(format!("{v:?} is not a vertex")));
    }
    for (&u, f) in &inv.f {
        if !inv.n.contains(&u) {
            return Err(Error::InvalidInvariant(format!("F is given at {} which is not in N", g.vertex_name(u))));
        }
        if let Some(&e) = f.iter().find(|&&e| !g.contains_instance(e) || g.edge_origin(e) != u) {
            return Err(Error::InvalidInvariant(format!("{e:?} is not an edge leaving {}", g.vertex_name(u))));
        }
    }
    Ok(())
}

/// Checks the invariant conditions and returns the first violation, in
/// vertex order and clause order. Omega bundles are handled bundle-wise:
/// a finite `F_u` always misses some instance of an omega bundle.
pub fn check_invariant(g: &Graph, inv: &Invariant) -> Result<Option<Violation>> {
    check_shape(g, inv)?;
    for u in g.vertices() {
        let fu = inv.excluded(u);
        let viol = |clause, edge| Some(Violation { clause, vertex: u, edge });
        if !inv.n.contains(&u) {
            let d = g.delta1(u);
            if !d.is_empty() && !d.is_infinite() && d.finite.iter().all(|&e| inv.saturated_at(g.edge_terminus(e))) {
                return Ok(viol(Clause::Saturation, None));
            }
            continue;
        }
        if !fu.is_empty() && g.class(u) != VertexClass::InfiniteEmitter {
            return Ok(viol(Clause::FiniteValence, fu.first().copied()));
        }
        for &b in g.out_bundles(u) {
            let data = g.bundle_data(b);
            let outside = match data.multiplicity {
                Multiplicity::Omega => {
                    Some((0..).map(|i| EdgeInstance::new(b, i)).find(|e| !fu.contains(e)).expect("F is finite"))
                }
                Multiplicity::Finite(k) => (0..k).map(|i| EdgeInstance::new(b, i)).find(|e| !fu.contains(e)),
            };
            if let Some(e) = outside {
                if !inv.saturated_at(data.terminus) {
                    return Ok(viol(Clause::ForcedTarget, Some(e)));
                }
            }
        }
        for &e in fu {
            if inv.saturated_at(g.edge_terminus(e)) {
                return Ok(viol(Clause::ExcludedTarget, Some(e)));
            }
        }
    }
    Ok(None)
}

pub fn is_invariant(g: &Graph, inv: &Invariant) -> bool {
    matches!(check_invariant(g, inv), Ok(None))
}

/// `a <= b`: `N_a ⊆ N_b` and `F_a,u ⊇ F_b,u` on `N_a`.
pub fn invariant_leq(a: &Invariant, b: &Invariant) -> bool {
    a.n.is_subset(&b.n) && a.n.iter().all(|&u| a.excluded(u).is_superset(b.excluded(u)))
}

/// An excluded edge whose terminus is in `N`, emits infinitely many edges
/// and has a nonempty exclusion set itself. Nothing in the examples
/// exercises this configuration, so enumeration reports it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaTargetFlag {
    pub invariant: usize,
    pub vertex: VertexId,
    pub edge: EdgeInstance,
}

/// A place where adding one more omega instance to `F_u` would still give
/// an invariant, i.e. an infinite family the enumeration cut off.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfiniteFamilyFlag {
    pub invariant: usize,
    pub vertex: VertexId,
    pub bundle: BundleId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Enumeration {
    pub invariants: Vec<Invariant>,
    pub infinite_families: Vec<InfiniteFamilyFlag>,
    pub omega_targets: Vec<OmegaTargetFlag>,
}

const MAX_ENUM_VERTICES: usize = 24;

/// All invariants of `g`, sorted by `|N|` then lexicographically.
///
/// Once `N` and the set `R ⊆ N ∩ D` of vertices with nonempty `F` are
/// fixed, the conditions force `F_u` to be exactly the edges of `u` whose
/// terminus is not in `N ∖ R`. So it suffices to run over pairs `(N, R)`.
/// Omega instances can never lie in a valid `F_u`, so `omega_bound` only
/// affects the infinite-family probe.
pub fn enumerate_invariants(g: &Graph, omega_bound: u32) -> Result<Enumeration> {
    let n = g.vertex_count();
    if n > MAX_ENUM_VERTICES {
        return Err(Error::TooLarge(n));
    }
    let d: Vec<VertexId> = g.vertices().filter(|&v| g.class(v) == VertexClass::InfiniteEmitter).collect();
    let mut found = BTreeSet::new();
    for nmask in 0u64..(1 << n) {
        let nset: BTreeSet<VertexId> = g.vertices().filter(|v| nmask >> v.0 & 1 == 1).collect();
        let dn: Vec<VertexId> = d.iter().copied().filter(|v| nset.contains(v)).collect();
        'r: for rmask in 0u64..(1 << dn.len()) {
            let r: BTreeSet<VertexId> =
                dn.iter().enumerate().filter(|(i, _)| rmask >> i & 1 == 1).map(|(_, &v)| v).collect();
            let mut f = BTreeMap::new();
            for &u in &r {
                let mut fu = BTreeSet::new();
                for &b in g.out_bundles(u) {
                    let data = g.bundle_data(b);
                    if nset.contains(&data.terminus) && !r.contains(&data.terminus) {
                        continue;
                    }
                    match data.multiplicity {
                        Multiplicity::Omega => continue 'r,
                        Multiplicity::Finite(k) => fu.extend((0..k).map(|i| EdgeInstance::new(b, i))),
                    }
                }
                if fu.is_empty() {
                    continue 'r;
                }
                f.insert(u, fu);
            }
            let inv = Invariant::new(nset.clone(), f);
            if is_invariant(g, &inv) {
                found.insert(inv);
            }
        }
    }
    let mut invariants: Vec<Invariant> = found.into_iter().collect();
    invariants.sort_by(|a, b| a.n.len().cmp(&b.n.len()).then_with(|| a.cmp(b)));

    let mut out = Enumeration { invariants, ..Default::default() };
    for (i, inv) in out.invariants.iter().enumerate() {
        for (&u, fu) in &inv.f {
            for &e in fu {
                let t = g.edge_terminus(e);
                if inv.n.contains(&t) && g.class(t) == VertexClass::InfiniteEmitter && !inv.excluded(t).is_empty() {
                    out.omega_targets.push(OmegaTargetFlag { invariant: i, vertex: u, edge: e });
                }
            }
        }
        for &u in inv.n.iter().filter(|&&u| g.class(u) == VertexClass::InfiniteEmitter) {
            for &b in g.delta1(u).omega.iter() {
                let mut probe = inv.clone();
                let fu = probe.f.entry(u).or_default();
                fu.extend((0..=omega_bound).map(|k| EdgeInstance::new(b, k)));
                if is_invariant(g, &probe) {
                    out.infinite_families.push(InfiniteFamilyFlag { invariant: i, vertex: u, bundle: b });
                }
            }
        }
    }
    Ok(out)
}

/// Covering pairs `(i, j)` of the order on `invs`: `invs[i] < invs[j]`
/// with nothing strictly between.
pub fn hasse_edges(invs: &[Invariant]) -> Vec<(usize, usize)> {
    let lt = |a: &Invariant, b: &Invariant| a != b && invariant_leq(a, b);
    let mut out = Vec::new();
    for (i, a) in invs.iter().enumerate() {
        for (j, b) in invs.iter().enumerate() {
            if lt(a, b) && !invs.iter().any(|c| lt(a, c) && lt(c, b)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// The lift of an invariant to the cover: a fiber vertex `p` is in `Ñ`
/// iff `t(p)` is in `N`, with `F̃_p = F_{t(p)}`.
#[derive(Clone, Copy, Debug)]
pub struct LiftedInvariant<'a> {
    pub graph: &'a Graph,
    pub invariant: &'a Invariant,
}

impl<'a> LiftedInvariant<'a> {
    pub fn new(graph: &'a Graph, invariant: &'a Invariant) -> Self {
        LiftedInvariant { graph, invariant }
    }

    pub fn contains(&self, p: &Path) -> bool {
        self.invariant.n.contains(&p.terminus())
    }

    pub fn excluded(&self, p: &Path) -> &BTreeSet<EdgeInstance> {
        self.invariant.excluded(p.terminus())
    }

    pub fn block(&self, p: &Path) -> Option<FiberBlock> {
        self.contains(p).then(|| BasicSet { apex: p.clone(), excluded: self.excluded(p).clone() })
    }
}

/// The union of the blocks `V(p; F̃_p)` over fiber vertices `p` with word
/// length at most `depth` and `t(p)` in `N`.
pub fn open_set_of(g: &Graph, inv: &Invariant, base: VertexId, depth: usize, truncate: u32) -> FiberSet {
    let fiber = Fiber::new(g, base);
    let lift = LiftedInvariant::new(g, inv);
    let mut acc = FiberSet::empty();
    for p in fiber.vertices(depth, truncate) {
        if let Some(b) = lift.block(&p) {
            let single = RingSet::basic(b);
            if !single.is_subset(&fiber, &acc) {
                acc = acc.union(&fiber, &single);
            }
        }
    }
    acc
}

/// The smallest `F ⊆ Δ₁(u)` with `[V(u; F)]∂ ⊆ W`, or `None` if no finite
/// `F` works. Decided exactly from the block structure of `W`; no depth
/// bound is involved.
pub fn boundary_exclusions<T: DirectedTree>(
    tree: &T,
    u: &T::Vertex,
    w: &RingSet<T::Vertex, T::Label>,
) -> Option<BTreeSet<T::Label>> {
    match tree.valence(u) {
        Valence::Finite(0) => basic_member_any(tree, u, w).then(BTreeSet::new),
        Valence::Finite(_) => {
            let mut f = BTreeSet::new();
            for l in tree.out_labels(u, 0) {
                let cone = RingSet::basic(BasicSet::cone(tree.target(u, &l)));
                if !boundary_empty(tree, &cone.diff(tree, w)) {
                    f.insert(l);
                }
            }
            Some(f)
        }
        Valence::Infinite => {
            // `u` is itself a boundary point, so it must lie in W. Below the
            // block holding it, W contains everything except the cones on
            // that block's excluded edges.
            let block = w.blocks().iter().find(|b| basic_member(tree, u, b))?;
            if &block.apex != u {
                return Some(BTreeSet::new());
            }
            let mut f = BTreeSet::new();
            for l in &block.excluded {
                let cone = RingSet::basic(BasicSet::cone(tree.target(u, l)));
                if !boundary_empty(tree, &cone.diff(tree, w)) {
                    f.insert(l.clone());
                }
            }
            Some(f)
        }
    }
}

fn basic_member_any<T: DirectedTree>(tree: &T, u: &T::Vertex, w: &RingSet<T::Vertex, T::Label>) -> bool {
    w.blocks().iter().any(|b| basic_member(tree, u, b))
}

/// `L(W)` restricted to the given vertices: `u` is in `N` when some finite
/// `F` has `[V(u; F)]∂ ⊆ W` and either `u` is not in Sigma or `F = ∅`
/// works; `F_u` is the least such `F`.
pub fn invariant_of_open<T: DirectedTree>(
    tree: &T,
    w: &RingSet<T::Vertex, T::Label>,
    vertices: impl IntoIterator<Item = T::Vertex>,
) -> BTreeMap<T::Vertex, BTreeSet<T::Label>> {
    let mut out = BTreeMap::new();
    for u in vertices {
        let Some(f) = boundary_exclusions(tree, &u, w) else { continue };
        let sigma = matches!(tree.valence(&u), Valence::Finite(n) if n > 0);
        if !sigma || f.is_empty() {
            out.insert(u, f);
        }
    }
    out
}

/// `U∂` for tree invariants given as `vertex -> F`.
pub fn open_set_of_tree<T: DirectedTree>(
    tree: &T,
    inv: &BTreeMap<T::Vertex, BTreeSet<T::Label>>,
) -> RingSet<T::Vertex, T::Label> {
    RingSet::union_of(tree, inv.iter().map(|(u, f)| BasicSet { apex: u.clone(), excluded: f.clone() }))
}

/// The data of the quotient by an invariant.
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub r: BTreeSet<VertexId>,
    /// The subgraph on `(E⁰ ∖ N) ∪ R` with every edge between those vertices.
    pub graph: Graph,
    /// `S(N, F)` as vertices of `graph`.
    pub s: BTreeSet<VertexId>,
    /// Vertex of `graph` to vertex of the original graph.
    pub embedding: Vec<VertexId>,
}

pub fn quotient_data(g: &Graph, inv: &Invariant) -> Result<QuotientData> {
    if let Some(v) = check_invariant(g, inv)? {
        return Err(Error::InvalidInvariant(v.describe(g)));
    }
    let r = inv.r();
    let keep = |v: VertexId| !inv.n.contains(&v) || r.contains(&v);
    let graph = g.restrict(keep, |b| Some(g.bundle_data(b).multiplicity));
    let embedding: Vec<VertexId> = g.vertices().filter(|&v| keep(v)).collect();
    let s = embedding
        .iter()
        .enumerate()
        .filter(|&(_, &v)| r.contains(&v) || (!inv.n.contains(&v) && g.class(v) == VertexClass::Sigma))
        .map(|(i, _)| VertexId(i))
        .collect();
    Ok(QuotientData { r, graph, s, embedding })
}

/// On the fiber over `base`, up to `depth`: the open set `U(N, F)` and the
/// part `P(N, F) = ⋃ V(p)` over `p` with `t(p) ∈ N ∖ R`.
pub fn quotient_blocks(
    g: &Graph,
    inv: &Invariant,
    base: VertexId,
    depth: usize,
    truncate: u32,
) -> (FiberSet, FiberSet) {
    let fiber = Fiber::new(g, base);
    let u = open_set_of(g, inv, base, depth, truncate);
    let r = inv.r();
    let cones = fiber
        .vertices(depth, truncate)
        .into_iter()
        .filter(|p| inv.n.contains(&p.terminus()) && !r.contains(&p.terminus()))
        .map(BasicSet::cone);
    (u, RingSet::union_of(&fiber, cones))
}

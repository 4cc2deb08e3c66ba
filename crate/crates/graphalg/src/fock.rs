//! Path-space representations: operators `S_e`, `P_u` on the span of
//! directed paths, checked against the defining relations with exact
//! rational arithmetic.
//!
//! `S_e` sends the basis vector of a path `p` to that of `e p`. The basis
//! consists of the directed paths that end outside `S`, up to a depth.
//! When the graph has cycles or omega bundles the basis is cut off, and
//! relations are only checked on the interior: vectors supported on paths
//! shorter than the depth.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeInstance, Graph, VertexClass, VertexId};
use crate::path::Path;
use crate::structure::components;

pub const DEFAULT_CYCLIC_DEPTH: usize = 4;
pub const DEFAULT_OMEGA_TRUNCATE: u32 = 3;

/// Length of the longest directed path, or `None` if there are arbitrarily
/// long ones (a cycle).
pub fn longest_path(g: &Graph) -> Option<usize> {
    let comps = components(g);
    if comps.cyclic.iter().any(|&c| c) {
        return None;
    }
    // Components are singletons numbered sinks first.
    let mut order: Vec<VertexId> = g.vertices().collect();
    order.sort_by_key(|v| comps.of[v.0]);
    let mut height = vec![0usize; g.vertex_count()];
    for v in order {
        height[v.0] = g.out_bundles(v).iter().map(|&b| height[g.bundle_data(b).terminus.0] + 1).max().unwrap_or(0);
    }
    Some(height.into_iter().max().unwrap_or(0))
}

#[derive(Clone, Debug)]
pub struct PathBasis {
    paths: Vec<Path>,
    index: HashMap<Path, usize>,
    pub s: BTreeSet<VertexId>,
    pub depth: usize,
    pub exact: bool,
    pub truncate: u32,
}

impl PathBasis {
    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn index_of(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// Indices of the basis vectors on which relations are checked.
    pub fn interior(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.exact || self.paths[i].len() < self.depth).collect()
    }
}

/// Directed paths ending outside `s`, of length at most `depth`, in
/// shortlex order. `depth = None` means the longest path of an acyclic
/// graph, or [`DEFAULT_CYCLIC_DEPTH`] otherwise.
pub fn build_basis(g: &Graph, s: &BTreeSet<VertexId>, depth: Option<usize>, truncate: u32) -> Result<PathBasis> {
    if let Some(&v) = s.iter().find(|&&v| g.class(v) != VertexClass::Sigma) {
        return Err(Error::NotInSigma(g.vertex_name(v).to_string()));
    }
    let longest = longest_path(g);
    let depth = depth.or(longest).unwrap_or(DEFAULT_CYCLIC_DEPTH);
    let has_omega = g.bundles().any(|(_, b)| b.multiplicity.is_omega());
    let exact = !has_omega && longest.is_some_and(|l| depth >= l);
    let mut paths: Vec<Path> =
        g.directed_paths(depth, truncate).into_iter().filter(|p| !s.contains(&p.terminus())).collect();
    paths.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index = paths.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
    Ok(PathBasis { paths, index, s: s.clone(), depth, exact, truncate })
}

/// A finitely supported matrix with rational entries; zero entries are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), BigRational>,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        SparseOperator { dim, entries: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries.insert((i, i), BigRational::one());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize), BigRational> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> BigRational {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigRational) {
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    fn add_entry(&mut self, row: usize, col: usize, value: BigRational) {
        let v = self.get(row, col) + value;
        self.set(row, col, v);
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn adjoint(&self) -> Self {
        // Entries are rational, so the adjoint is the transpose.
        let entries = self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect();
        SparseOperator { dim: self.dim, entries }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut by_row: BTreeMap<usize, Vec<(usize, &BigRational)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zero(self.dim);
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.add_entry(r, c, a * b);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_entry(r, c, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(r, c), v) in &other.entries {
            out.add_entry(r, c, -v.clone());
        }
        out
    }

    /// The first of `cols` on which the two operators differ.
    pub fn first_difference(&self, other: &Self, cols: &[usize]) -> Option<usize> {
        let wanted: BTreeSet<usize> = cols.iter().copied().collect();
        let diff = self.sub(other);
        diff.entries.keys().map(|&(_, c)| c).filter(|c| wanted.contains(c)).min()
    }
}

impl fmt::Display for SparseOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (&(r, c), v) in &self.entries {
            writeln!(f, "({r},{c}) = {v}")?;
        }
        Ok(())
    }
}

/// The operators `S_e` (finite instances plus the first `truncate` of each
/// omega bundle) and `P_u`.
#[derive(Clone, Debug)]
pub struct Generators {
    pub s: BTreeMap<EdgeInstance, SparseOperator>,
    pub p: BTreeMap<VertexId, SparseOperator>,
}

pub fn generator_matrices(g: &Graph, basis: &PathBasis) -> Generators {
    let n = basis.len();
    let mut s = BTreeMap::new();
    for v in g.vertices() {
        for e in g.delta1(v).truncated(basis.truncate) {
            let mut m = SparseOperator::zero(n);
            let edge = Path::edge(g, e.forward());
            for (j, p) in basis.paths().iter().enumerate() {
                if p.origin() == g.edge_terminus(e) {
                    if let Some(i) = basis.index_of(&edge.concat(p).expect("composable")) {
                        m.set(i, j, BigRational::one());
                    }
                }
            }
            s.insert(e, m);
        }
    }
    let mut p = BTreeMap::new();
    for v in g.vertices() {
        let mut m = SparseOperator::zero(n);
        for (j, q) in basis.paths().iter().enumerate() {
            if q.origin() == v {
                m.set(j, j, BigRational::one());
            }
        }
        p.insert(v, m);
    }
    Generators { s, p }
}

/// `S_alpha S_beta^*`: sends `beta p` to `alpha p`.
pub fn word_operator(g: &Graph, basis: &PathBasis, alpha: &Path, beta: &Path) -> SparseOperator {
    let mut m = SparseOperator::zero(basis.len());
    for (j, q) in basis.paths().iter().enumerate() {
        if q.origin() != beta.origin() || q.len() < beta.len() || q.word()[..beta.len()] != *beta.word() {
            continue;
        }
        let rest = q.suffix(g, beta.len());
        if let Some(i) = alpha.concat(&rest).ok().and_then(|p| basis.index_of(&p)) {
            m.set(i, j, BigRational::one());
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// The Toeplitz relations with an inequality at every vertex.
    Toeplitz,
    /// The Toeplitz relations with equality at the vertices of `S`.
    ToeplitzS,
    /// The Cuntz-Krieger relations.
    Ck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationCheck {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// The rank, on the interior, of `P_u - sum S_f S_f^*` for a vertex where
/// only the inequality is imposed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gap {
    pub vertex: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RelationReport {
    pub family: Family,
    pub basis_size: usize,
    pub exact: bool,
    pub depth: usize,
    /// What "holds" means for this basis.
    pub scope: String,
    pub relations: Vec<RelationCheck>,
    pub gaps: Vec<Gap>,
}

impl RelationReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.status != Status::Fail)
    }
}

struct Checker<'a> {
    g: &'a Graph,
    basis: &'a PathBasis,
    cols: Vec<usize>,
    out: Vec<RelationCheck>,
}

impl Checker<'_> {
    /// Records one relation made of several instances `(label, lhs, rhs)`.
    fn relation(&mut self, name: &str, instances: impl IntoIterator<Item = (String, SparseOperator, SparseOperator)>) {
        let mut status = Status::Skipped;
        let mut witness = None;
        for (label, lhs, rhs) in instances {
            status = Status::Pass;
            if let Some(c) = lhs.first_difference(&rhs, &self.cols) {
                let at = self.basis.paths()[c].display(self.g);
                witness = Some(format!("{label} on basis vector {at}"));
                status = Status::Fail;
                break;
            }
        }
        self.out.push(RelationCheck { name: name.to_string(), status, witness });
    }
}

fn range_sum(gens: &Generators, g: &Graph, u: VertexId, dim: usize) -> SparseOperator {
    gens.s
        .iter()
        .filter(|(e, _)| g.edge_origin(**e) == u)
        .fold(SparseOperator::zero(dim), |acc, (_, s)| acc.add(&s.mul(&s.adjoint())))
}

pub fn verify_relations(g: &Graph, basis: &PathBasis, family: Family) -> RelationReport {
    let gens = generator_matrices(g, basis);
    let n = basis.len();
    let cols = basis.interior();
    let mut ck = Checker { g, basis, cols: cols.clone(), out: Vec::new() };
    let name = |e: &EdgeInstance| g.instance_name(*e);
    let vname = |u: &VertexId| g.vertex_name(*u).to_string();

    ck.relation(
        "S_e are partial isometries: S_e S_e* S_e = S_e",
        gens.s.iter().map(|(e, s)| (name(e), s.mul(&s.adjoint()).mul(s), s.clone())),
    );
    ck.relation(
        "P_u are projections: P_u P_u = P_u = P_u*",
        gens.p.iter().flat_map(|(u, p)| [(vname(u), p.mul(p), p.clone()), (vname(u), p.adjoint(), p.clone())]),
    );
    ck.relation(
        "P_u P_v = 0 for u != v",
        gens.p.iter().flat_map(|(u, p)| {
            gens.p
                .iter()
                .filter(move |(v, _)| *v != u)
                .map(move |(v, q)| (format!("{},{}", vname(u), vname(v)), p.mul(q), SparseOperator::zero(n)))
        }),
    );
    let total = gens.p.values().fold(SparseOperator::zero(n), |acc, p| acc.add(p));
    ck.relation("sum of P_u = 1", [("sum".to_string(), total, SparseOperator::identity(n))]);
    ck.relation(
        "S_e* S_e = P_t(e)",
        gens.s.iter().map(|(e, s)| (name(e), s.adjoint().mul(s), gens.p[&g.edge_terminus(*e)].clone())),
    );

    let sigma: Vec<VertexId> = g.vertices().filter(|&u| g.class(u) == VertexClass::Sigma).collect();
    let d: Vec<VertexId> = g.vertices().filter(|&u| g.class(u) == VertexClass::InfiniteEmitter).collect();
    match family {
        Family::Toeplitz | Family::ToeplitzS => {
            // P_u - sum S_f S_f^* is a projection iff the inequality holds,
            // since the summands are projections under P_u.
            ck.relation(
                "P_u >= sum of S_f S_f* over o(f) = u",
                g.vertices().map(|u| {
                    let q = gens.p[&u].sub(&range_sum(&gens, g, u, n));
                    (vname(&u), q.mul(&q), q)
                }),
            );
            if family == Family::ToeplitzS {
                ck.relation(
                    "P_u = sum of S_f S_f* for u in S",
                    basis.s.iter().map(|u| (vname(u), gens.p[u].clone(), range_sum(&gens, g, *u, n))),
                );
            }
        }
        Family::Ck => {
            ck.relation(
                "P_o(e) S_e = S_e for o(e) in D",
                gens.s
                    .iter()
                    .filter(|(e, _)| d.contains(&g.edge_origin(**e)))
                    .map(|(e, s)| (name(e), gens.p[&g.edge_origin(*e)].mul(s), s.clone())),
            );
            let d = &d;
            ck.relation(
                "S_e* S_f = 0 for e != f with o(e) = o(f) in D",
                gens.s.iter().flat_map(|(e, se)| {
                    gens.s
                        .iter()
                        .filter(move |(f, _)| {
                            *f != e && g.edge_origin(**f) == g.edge_origin(*e) && d.contains(&g.edge_origin(*e))
                        })
                        .map(move |(f, sf)| {
                            (format!("{},{}", name(e), name(f)), se.adjoint().mul(sf), SparseOperator::zero(n))
                        })
                }),
            );
            // Read literally for every u outside D this would also demand
            // P_u = 0 at sinks; the equality belongs to the vertices of Sigma.
            ck.relation(
                "P_u = sum of S_f S_f* for u in Sigma",
                sigma.iter().map(|u| (vname(u), gens.p[u].clone(), range_sum(&gens, g, *u, n))),
            );
        }
    }

    let mut gaps = Vec::new();
    for &u in sigma.iter().filter(|u| !basis.s.contains(u)) {
        let q = gens.p[&u].sub(&range_sum(&gens, g, u, n));
        let rank = cols.iter().filter(|&&c| !q.get(c, c).is_zero()).count();
        gaps.push(Gap { vertex: vname(&u), rank });
    }
    let scope = if basis.exact {
        "exact: relations checked on the whole path space".to_string()
    } else {
        format!(
            "truncated: relations checked on vectors supported on paths of length <= {}",
            basis.depth.saturating_sub(1)
        )
    };
    RelationReport { family, basis_size: n, exact: basis.exact, depth: basis.depth, scope, relations: ck.out, gaps }
}

/// Incremental row reduction over the rationals.
#[derive(Default)]
struct Span {
    rows: Vec<(usize, BTreeMap<usize, BigRational>)>,
}

impl Span {
    /// Adds `v` and reports whether it enlarged the span.
    fn insert(&mut self, mut v: BTreeMap<usize, BigRational>) -> bool {
        for (pivot, row) in &self.rows {
            if let Some(c) = v.get(pivot).cloned() {
                for (k, x) in row {
                    let y = v.get(k).cloned().unwrap_or_else(BigRational::zero) - &c * x;
                    if y.is_zero() {
                        v.remove(k);
                    } else {
                        v.insert(*k, y);
                    }
                }
            }
        }
        let Some((&pivot, lead)) = v.iter().next() else { return false };
        let lead = lead.clone();
        for x in v.values_mut() {
            *x = &*x / &lead;
        }
        self.rows.push((pivot, v));
        true
    }
}

/// Dimension of the span of all `S_alpha S_beta^*` with `alpha`, `beta`
/// directed paths ending at the same vertex. Only defined on exact bases.
pub fn algebra_dimension(g: &Graph, basis: &PathBasis) -> Result<usize> {
    if !basis.exact {
        return Err(Error::NonExactBasis(format!("depth {} on a graph with cycles or omega bundles", basis.depth)));
    }
    let n = basis.len();
    let paths = g.directed_paths(basis.depth, 0);
    let mut by_end: BTreeMap<VertexId, Vec<&Path>> = BTreeMap::new();
    for p in &paths {
        by_end.entry(p.terminus()).or_default().push(p);
    }
    let mut span = Span::default();
    for group in by_end.values() {
        for a in group {
            for b in group {
                let m = word_operator(g, basis, a, b);
                let v = m.entries().iter().map(|(&(r, c), x)| (r * n + c, x.clone())).collect();
                span.insert(v);
            }
        }
    }
    Ok(span.rows.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn edge() -> Graph {
        parse_graph("vertex u; vertex v; edge e: u -> v").unwrap()
    }

    fn names(g: &Graph, b: &PathBasis) -> Vec<String> {
        b.paths().iter().map(|p| p.display(g)).collect()
    }

    #[test]
    fn bases_of_the_edge_graph() {
        let g = edge();
        let t = build_basis(&g, &BTreeSet::new(), None, 0).unwrap();
        assert_eq!(names(&g, &t), ["u", "v", "e"]);
        assert!(t.exact);
        let sigma = g.sigma();
        let c = build_basis(&g, &sigma, None, 0).unwrap();
        assert_eq!(names(&g, &c), ["v", "e"]);
    }

    #[test]
    fn loop_basis_is_truncated() {
        let g = parse_graph("vertex u; edge a: u -> u").unwrap();
        let b = build_basis(&g, &BTreeSet::new(), Some(3), 0).unwrap();
        assert_eq!(names(&g, &b), ["u", "a", "a.a", "a.a.a"]);
        assert!(!b.exact);
        let r = verify_relations(&g, &b, Family::Toeplitz);
        assert!(r.all_pass(), "{r:?}");
        assert!(matches!(algebra_dimension(&g, &b), Err(Error::NonExactBasis(_))));
    }

    #[test]
    fn edge_graph_relations_and_dimensions() {
        let g = edge();
        let sigma = g.sigma();
        let ck = build_basis(&g, &sigma, None, 0).unwrap();
        let r = verify_relations(&g, &ck, Family::Ck);
        assert!(r.relations.iter().all(|c| c.status != Status::Fail), "{r:?}");
        assert_eq!(algebra_dimension(&g, &ck).unwrap(), 4);
        let t = build_basis(&g, &BTreeSet::new(), None, 0).unwrap();
        let r = verify_relations(&g, &t, Family::Toeplitz);
        assert!(r.all_pass());
        assert_eq!(r.gaps, vec![Gap { vertex: "u".into(), rank: 1 }]);
        assert_eq!(algebra_dimension(&g, &t).unwrap(), 5);
    }

    #[test]
    fn two_sinks_dimension() {
        let g = parse_graph("vertex u; vertex v; vertex w; edge e: u -> v; edge f: u -> w").unwrap();
        let b = build_basis(&g, &g.sigma(), None, 0).unwrap();
        assert!(verify_relations(&g, &b, Family::Ck).all_pass());
        assert_eq!(algebra_dimension(&g, &b).unwrap(), 8);
    }

    #[test]
    fn word_operator_matches_products() {
        let g = parse_graph("vertex u; vertex v; vertex w; edge a: u -> v; edge b: v -> w").unwrap();
        let basis = build_basis(&g, &BTreeSet::new(), None, 0).unwrap();
        let gens = generator_matrices(&g, &basis);
        let (a, b) = (EdgeInstance::new(g.bundle("a").unwrap(), 0), EdgeInstance::new(g.bundle("b").unwrap(), 0));
        let ab = gens.s[&a].mul(&gens.s[&b]);
        let w = g.vertex("w").unwrap();
        assert_eq!(word_operator(&g, &basis, &g.parse_path("a.b").unwrap(), &Path::unit(w)), ab);
        let m = word_operator(&g, &basis, &g.parse_path("a").unwrap(), &g.parse_path("v").unwrap());
        assert_eq!(m.adjoint(), word_operator(&g, &basis, &g.parse_path("v").unwrap(), &g.parse_path("a").unwrap()));
    }

    #[test]
    fn sink_equality_would_fail() {
        // The literal reading (every vertex outside D) fails at the sink v.
        let g = edge();
        let b = build_basis(&g, &g.sigma(), None, 0).unwrap();
        let gens = generator_matrices(&g, &b);
        let v = g.vertex("v").unwrap();
        assert!(!gens.p[&v].is_zero());
        assert!(range_sum(&gens, &g, v, b.len()).is_zero());
    }
}

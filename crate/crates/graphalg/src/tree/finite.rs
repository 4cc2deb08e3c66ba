use std::collections::BTreeMap;

use super::{DirectedTree, Step, Valence};
use crate::error::{Error, Result};
use crate::graph::{Graph, Multiplicity};

/// An explicit finite directed forest. Vertices and edges are indices.
#[derive(Clone, Debug)]
pub struct FiniteTree {
    vertex_names: Vec<String>,
    edge_names: Vec<String>,
    edges: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    // Parent in a BFS forest of the underlying undirected graph: (parent, edge).
    parent: Vec<Option<(usize, usize)>>,
    depth: Vec<usize>,
    root: Vec<usize>,
}

impl FiniteTree {
    /// Builds a forest on `n` vertices from directed edges `(origin, terminus)`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let vertex_names = (0..n).map(|i| format!("n{i}")).collect();
        let edge_names = (0..edges.len()).map(|i| format!("e{i}")).collect();
        Self::with_names(vertex_names, edge_names, edges)
    }

    pub fn with_names(vertex_names: Vec<String>, edge_names: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = vertex_names.len();
        let mut out = vec![Vec::new(); n];
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (i, &(o, t)) in edges.iter().enumerate() {
            if o >= n || t >= n {
                return Err(Error::NotATree(format!("edge {i} has an endpoint out of range")));
            }
            out[o].push(i);
            adj[o].push((t, i));
            adj[t].push((o, i));
        }
        let mut parent = vec![None; n];
        let mut depth = vec![0; n];
        let mut root = vec![usize::MAX; n];
        for r in 0..n {
            if root[r] != usize::MAX {
                continue;
            }
            root[r] = r;
            let mut stack = vec![r];
            while let Some(x) = stack.pop() {
                for &(y, e) in &adj[x] {
                    if parent[x].map(|(_, pe)| pe) == Some(e) {
                        continue;
                    }
                    if root[y] != usize::MAX {
                        return Err(Error::NotATree(format!("edge {} closes a cycle", edge_names[e])));
                    }
                    root[y] = r;
                    parent[y] = Some((x, e));
                    depth[y] = depth[x] + 1;
                    stack.push(y);
                }
            }
        }
        Ok(FiniteTree { vertex_names, edge_names, edges, out, parent, depth, root })
    }

    /// Reads a tree from a graph file; every bundle must have multiplicity 1.
    pub fn from_graph(g: &Graph) -> Result<Self> {
        let mut edges = Vec::new();
        let mut names = Vec::new();
        for (_, b) in g.bundles() {
            if b.multiplicity != Multiplicity::Finite(1) {
                return Err(Error::NotATree(format!("edge `{}` has multiplicity other than 1", b.name)));
            }
            edges.push((b.origin.0, b.terminus.0));
            names.push(b.name.clone());
        }
        let vertex_names = g.vertices().map(|v| g.vertex_name(v).to_string()).collect();
        Self::with_names(vertex_names, names, edges)
    }

    pub fn len(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_names.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[usize] {
        &self.out[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    /// Vertices grouped by component, for callers that want a root per tree.
    pub fn components(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut m: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.len() {
            m.entry(self.root[v]).or_default().push(v);
        }
        m
    }

    fn climb(&self, v: usize) -> Step<usize, usize> {
        let (p, e) = self.parent[v].expect("non-root vertex has a parent");
        let forward = self.edges[e].0 == v;
        Step { from: v, to: p, label: e, forward }
    }
}

impl DirectedTree for FiniteTree {
    type Vertex = usize;
    type Label = usize;

    fn has_vertex(&self, v: &usize) -> bool {
        *v < self.len()
    }

    fn valence(&self, v: &usize) -> Valence {
        Valence::Finite(self.out[*v].len())
    }

    fn has_label(&self, v: &usize, label: &usize) -> bool {
        self.edges.get(*label).is_some_and(|&(o, _)| o == *v)
    }

    fn target(&self, _v: &usize, label: &usize) -> usize {
        self.edges[*label].1
    }

    fn out_labels(&self, v: &usize, _truncate: u32) -> Vec<usize> {
        self.out[*v].clone()
    }

    fn geodesic(&self, from: &usize, to: &usize) -> Option<Vec<Step<usize, usize>>> {
        let (mut a, mut b) = (*from, *to);
        if self.root[a] != self.root[b] {
            return None;
        }
        let mut up = Vec::new();
        let mut down = Vec::new();
        while self.depth[a] > self.depth[b] {
            up.push(self.climb(a));
            a = up.last().unwrap().to;
        }
        while self.depth[b] > self.depth[a] {
            down.push(self.climb(b));
            b = down.last().unwrap().to;
        }
        while a != b {
            up.push(self.climb(a));
            a = up.last().unwrap().to;
            down.push(self.climb(b));
            b = down.last().unwrap().to;
        }
        for s in down.into_iter().rev() {
            up.push(Step { from: s.to, to: s.from, label: s.label, forward: !s.forward });
        }
        Some(up)
    }

    fn vertex_name(&self, v: &usize) -> String {
        self.vertex_names[*v].clone()
    }

    fn label_name(&self, _v: &usize, label: &usize) -> String {
        self.edge_names[*label].clone()
    }
}

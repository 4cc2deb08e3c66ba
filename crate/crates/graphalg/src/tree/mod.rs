//! Directed trees and the Boolean ring of sets generated by the basic sets
//! `V(v; F)`.

mod finite;
mod morphism;
mod ring;

use std::fmt::Debug;
use std::hash::Hash;

pub use finite::FiniteTree;
pub use morphism::{induced_s, pushforward, Compose, IdentityMap, TreeMap};
pub use ring::{
    basic_contains, basic_diff, basic_intersect, basic_member, boundary_empty, boundary_vertex, quotient_kernel_member,
    quotient_kernel_member_in, relate, vertex_member, BasicSet, Relation, RingSet,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valence {
    Finite(usize),
    Infinite,
}

/// One edge traversed by a reduced path in a tree. When `forward` the edge
/// runs `from -> to`; otherwise it runs `to -> from`. `label` names the edge
/// among the out-edges of its own origin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step<V, L> {
    pub from: V,
    pub to: V,
    pub label: L,
    pub forward: bool,
}

/// A directed graph whose underlying undirected graph is a forest. Edges
/// are addressed by `(origin, label)`.
///
/// Implementations may be infinite; every method only looks at finitely
/// many vertices.
pub trait DirectedTree {
    type Vertex: Clone + Ord + Hash + Debug;
    type Label: Clone + Ord + Hash + Debug;

    fn has_vertex(&self, v: &Self::Vertex) -> bool;

    fn valence(&self, v: &Self::Vertex) -> Valence;

    fn has_label(&self, v: &Self::Vertex, label: &Self::Label) -> bool;

    fn target(&self, v: &Self::Vertex, label: &Self::Label) -> Self::Vertex;

    /// Out-labels of `v`; when the valence is infinite only the first
    /// `truncate` instances of each infinite family are listed.
    fn out_labels(&self, v: &Self::Vertex, truncate: u32) -> Vec<Self::Label>;

    /// The unique reduced path from `from` to `to`, or `None` if they lie
    /// in different components.
    fn geodesic(&self, from: &Self::Vertex, to: &Self::Vertex) -> Option<Vec<Step<Self::Vertex, Self::Label>>>;

    fn vertex_name(&self, v: &Self::Vertex) -> String;

    fn label_name(&self, v: &Self::Vertex, label: &Self::Label) -> String;
}

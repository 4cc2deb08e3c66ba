use std::collections::BTreeSet;
use std::marker::PhantomData;

use super::{BasicSet, DirectedTree, RingSet};
use crate::error::{Error, Result};
use crate::graph::{Graph, Inclusion, VertexClass, VertexId};

/// An injective map of trees that sends each out-edge of `v` to an
/// out-edge of the image of `v`.
pub trait TreeMap<S: DirectedTree, T: DirectedTree> {
    fn map_vertex(&self, v: &S::Vertex) -> Option<T::Vertex>;
    fn map_label(&self, v: &S::Vertex, label: &S::Label) -> Option<T::Label>;
}

pub struct IdentityMap;

impl<S: DirectedTree> TreeMap<S, S> for IdentityMap {
    fn map_vertex(&self, v: &S::Vertex) -> Option<S::Vertex> {
        Some(v.clone())
    }

    fn map_label(&self, _v: &S::Vertex, label: &S::Label) -> Option<S::Label> {
        Some(label.clone())
    }
}

/// `second ∘ first`.
pub struct Compose<'a, A, B, M> {
    pub first: &'a A,
    pub second: &'a B,
    middle: PhantomData<M>,
}

impl<'a, A, B, M> Compose<'a, A, B, M> {
    pub fn new(first: &'a A, second: &'a B) -> Self {
        Compose { first, second, middle: PhantomData }
    }
}

impl<S, M, T, A, B> TreeMap<S, T> for Compose<'_, A, B, M>
where
    S: DirectedTree,
    M: DirectedTree,
    T: DirectedTree,
    A: TreeMap<S, M>,
    B: TreeMap<M, T>,
{
    fn map_vertex(&self, v: &S::Vertex) -> Option<T::Vertex> {
        self.second.map_vertex(&self.first.map_vertex(v)?)
    }

    fn map_label(&self, v: &S::Vertex, label: &S::Label) -> Option<T::Label> {
        let mv = self.first.map_vertex(v)?;
        let ml = self.first.map_label(v, label)?;
        self.second.map_label(&mv, &ml)
    }
}

/// Sends each block `V(v; F)` to `V(α(v); α(F))` in the target tree.
pub fn pushforward<S, T, A>(
    target: &T,
    map: &A,
    x: &RingSet<S::Vertex, S::Label>,
) -> Result<RingSet<T::Vertex, T::Label>>
where
    S: DirectedTree,
    T: DirectedTree,
    A: TreeMap<S, T>,
{
    let mut blocks = Vec::with_capacity(x.blocks().len());
    for b in x.blocks() {
        let apex = map.map_vertex(&b.apex).ok_or_else(|| Error::UndefinedMorphism(format!("apex {:?}", b.apex)))?;
        let excluded = b
            .excluded
            .iter()
            .map(|e| map.map_label(&b.apex, e).ok_or_else(|| Error::UndefinedMorphism(format!("edge {e:?}"))))
            .collect::<Result<BTreeSet<_>>>()?;
        blocks.push(BasicSet { apex, excluded });
    }
    Ok(RingSet::canonical(target, blocks))
}

/// For `sub ⊆ sup` and `s2 ⊆ Σ(sup)`: the vertices of `sub` lying in `s2`
/// whose out-edges in `sup` all belong to `sub`.
pub fn induced_s(sub: &Graph, sup: &Graph, s2: &BTreeSet<VertexId>) -> Result<BTreeSet<VertexId>> {
    if let Some(&bad) = s2.iter().find(|&&v| v.0 >= sup.vertex_count() || sup.class(v) != VertexClass::Sigma) {
        return Err(Error::NotInSigma(if bad.0 < sup.vertex_count() {
            sup.vertex_name(bad).to_string()
        } else {
            format!("{bad:?}")
        }));
    }
    let inc = Inclusion::new(sub, sup)?;
    Ok(sub
        .vertices()
        .filter(|&v| {
            let image = inc.map_vertex(v);
            s2.contains(&image) && sub.out_valence(v) == sup.out_valence(image)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn induced_s_drops_vertices_with_missing_edges() {
        let two = parse_graph("vertex u; vertex v; vertex w; edge e: u -> v; edge f: u -> w").unwrap();
        let edge = parse_graph("vertex u; vertex v; edge e: u -> v").unwrap();
        let u = two.vertex("u").unwrap();
        assert!(induced_s(&edge, &two, &BTreeSet::from([u])).unwrap().is_empty());
        assert_eq!(induced_s(&two, &two, &BTreeSet::from([u])).unwrap(), BTreeSet::from([u]));
        let v = two.vertex("v").unwrap();
        assert!(matches!(induced_s(&two, &two, &BTreeSet::from([v])), Err(Error::NotInSigma(_))));
    }

    #[test]
    fn partial_multiplicity_is_not_all_edges() {
        let big = parse_graph("vertex u; vertex v; edge e: u -> v * 2").unwrap();
        let small = parse_graph("vertex u; vertex v; edge e: u -> v").unwrap();
        let u = big.vertex("u").unwrap();
        assert!(induced_s(&small, &big, &BTreeSet::from([u])).unwrap().is_empty());
    }
}

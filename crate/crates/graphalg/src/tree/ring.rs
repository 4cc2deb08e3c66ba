use std::collections::{BTreeSet, HashMap};

use super::{DirectedTree, Step, Valence};
use crate::error::{Error, Result};

/// `V(apex; excluded)`: the apex plus everything below it that is not
/// reached through one of the excluded out-edges.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicSet<V, L> {
    pub apex: V,
    pub excluded: BTreeSet<L>,
}

impl<V: Clone + Ord, L: Clone + Ord> BasicSet<V, L> {
    pub fn cone(apex: V) -> Self {
        BasicSet { apex, excluded: BTreeSet::new() }
    }

    pub fn new<T>(tree: &T, apex: V, excluded: BTreeSet<L>) -> Result<Self>
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        if !tree.has_vertex(&apex) {
            return Err(Error::InvalidBasicSet(format!("{} is not a vertex", tree.vertex_name(&apex))));
        }
        if let Some(bad) = excluded.iter().find(|l| !tree.has_label(&apex, l)) {
            return Err(Error::InvalidBasicSet(format!(
                "{} is not an out-edge of {}",
                tree.label_name(&apex, bad),
                tree.vertex_name(&apex)
            )));
        }
        Ok(BasicSet { apex, excluded })
    }
}

/// An element of the ring: a finite disjoint union of basic sets, stored
/// sorted and with no mergeable pair of blocks. The empty set has no blocks.
///
/// The derived `==` compares blocks. It is extensional only when no vertex
/// of the set has two in-edges from inside it; otherwise the shared part
/// can be cut from either parent's block. Use [`RingSet::equals`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingSet<V, L> {
    blocks: Vec<BasicSet<V, L>>,
}

/// How two apexes sit relative to each other.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Relation<V, L> {
    Same,
    /// The second apex lies below the first; the directed path between them.
    Below(Vec<Step<V, L>>),
    /// The first apex lies below the second; the directed path from the second.
    Above(Vec<Step<V, L>>),
    /// Neither is below the other but they have a common descendant `meet`;
    /// `left` and `right` are the directed paths down from each apex.
    Meet {
        left: Vec<Step<V, L>>,
        right: Vec<Step<V, L>>,
        meet: V,
    },
    Apart,
}

fn reverse_steps<V: Clone, L: Clone>(steps: &[Step<V, L>]) -> Vec<Step<V, L>> {
    steps
        .iter()
        .rev()
        .map(|s| Step { from: s.to.clone(), to: s.from.clone(), label: s.label.clone(), forward: !s.forward })
        .collect()
}

pub fn relate<T: DirectedTree>(tree: &T, u: &T::Vertex, v: &T::Vertex) -> Relation<T::Vertex, T::Label> {
    let Some(steps) = tree.geodesic(u, v) else {
        return Relation::Apart;
    };
    if steps.is_empty() {
        return Relation::Same;
    }
    let down = steps.iter().take_while(|s| s.forward).count();
    if down == steps.len() {
        return Relation::Below(steps);
    }
    if steps[down..].iter().any(|s| s.forward) {
        return Relation::Apart;
    }
    if down == 0 {
        return Relation::Above(reverse_steps(&steps));
    }
    let meet = steps[down - 1].to.clone();
    Relation::Meet { left: steps[..down].to_vec(), right: reverse_steps(&steps[down..]), meet }
}

type Block<T> = BasicSet<<T as DirectedTree>::Vertex, <T as DirectedTree>::Label>;
type Ring<T> = RingSet<<T as DirectedTree>::Vertex, <T as DirectedTree>::Label>;

/// Whether `c ⊆ b`.
pub fn basic_contains<T: DirectedTree>(tree: &T, b: &Block<T>, c: &Block<T>) -> bool {
    match relate(tree, &b.apex, &c.apex) {
        Relation::Same => c.excluded.is_superset(&b.excluded),
        Relation::Below(path) => !b.excluded.contains(&path[0].label),
        _ => false,
    }
}

pub fn basic_member<T: DirectedTree>(tree: &T, v: &T::Vertex, b: &Block<T>) -> bool {
    match relate(tree, &b.apex, v) {
        Relation::Same => true,
        Relation::Below(path) => !b.excluded.contains(&path[0].label),
        _ => false,
    }
}

fn cone_at<T: DirectedTree>(tree: &T, v: &T::Vertex, label: &T::Label) -> Block<T> {
    BasicSet::cone(tree.target(v, label))
}

/// The pieces of `V(u; F) ∖ V(v; G)` when `v` lies below `u` along `path`
/// and the first edge of `path` is not excluded.
fn diff_below<T: DirectedTree>(
    tree: &T,
    b: &Block<T>,
    path: &[Step<T::Vertex, T::Label>],
    c: &Block<T>,
) -> Vec<Block<T>> {
    let mut out = Vec::with_capacity(path.len() + c.excluded.len());
    let mut top = b.excluded.clone();
    top.insert(path[0].label.clone());
    out.push(BasicSet { apex: b.apex.clone(), excluded: top });
    for s in &path[1..] {
        out.push(BasicSet { apex: s.from.clone(), excluded: BTreeSet::from([s.label.clone()]) });
    }
    out.extend(c.excluded.iter().map(|e| cone_at(tree, &c.apex, e)));
    out
}

fn intersect_blocks<T: DirectedTree>(tree: &T, b: &Block<T>, c: &Block<T>) -> Option<Block<T>> {
    match relate(tree, &b.apex, &c.apex) {
        Relation::Same => {
            Some(BasicSet { apex: b.apex.clone(), excluded: b.excluded.union(&c.excluded).cloned().collect() })
        }
        Relation::Below(path) => (!b.excluded.contains(&path[0].label)).then(|| c.clone()),
        Relation::Above(path) => (!c.excluded.contains(&path[0].label)).then(|| b.clone()),
        Relation::Meet { left, right, meet } => (!b.excluded.contains(&left[0].label)
            && !c.excluded.contains(&right[0].label))
        .then(|| BasicSet::cone(meet)),
        Relation::Apart => None,
    }
}

fn diff_blocks<T: DirectedTree>(tree: &T, b: &Block<T>, c: &Block<T>) -> Vec<Block<T>> {
    match relate(tree, &b.apex, &c.apex) {
        Relation::Same => c.excluded.difference(&b.excluded).map(|e| cone_at(tree, &b.apex, e)).collect(),
        Relation::Below(path) => {
            if b.excluded.contains(&path[0].label) {
                vec![b.clone()]
            } else {
                diff_below(tree, b, &path, c)
            }
        }
        Relation::Above(path) => {
            if c.excluded.contains(&path[0].label) {
                vec![b.clone()]
            } else {
                Vec::new()
            }
        }
        Relation::Meet { left, right, meet } => {
            if b.excluded.contains(&left[0].label) || c.excluded.contains(&right[0].label) {
                vec![b.clone()]
            } else {
                diff_below(tree, b, &left, &BasicSet::cone(meet))
            }
        }
        Relation::Apart => vec![b.clone()],
    }
}

pub fn basic_intersect<T: DirectedTree>(tree: &T, b: &Block<T>, c: &Block<T>) -> Ring<T> {
    RingSet::canonical(tree, intersect_blocks(tree, b, c).into_iter().collect())
}

pub fn basic_diff<T: DirectedTree>(tree: &T, b: &Block<T>, c: &Block<T>) -> Ring<T> {
    RingSet::canonical(tree, diff_blocks(tree, b, c))
}

impl<V: Clone + Ord + std::hash::Hash, L: Clone + Ord> RingSet<V, L> {
    pub fn empty() -> Self {
        RingSet { blocks: Vec::new() }
    }

    pub fn blocks(&self) -> &[BasicSet<V, L>] {
        &self.blocks
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn basic(b: BasicSet<V, L>) -> Self {
        RingSet { blocks: vec![b] }
    }

    /// Sorts pairwise disjoint blocks and merges `V(v; F ∪ {e})` with
    /// `V(t(e))` until no merge applies.
    pub fn canonical<T>(tree: &T, mut blocks: Vec<BasicSet<V, L>>) -> Self
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        loop {
            let full: HashMap<V, usize> = blocks
                .iter()
                .enumerate()
                .filter(|(_, b)| b.excluded.is_empty())
                .map(|(i, b)| (b.apex.clone(), i))
                .collect();
            let mut merge = None;
            'search: for (i, b) in blocks.iter().enumerate() {
                for e in &b.excluded {
                    if let Some(&j) = full.get(&tree.target(&b.apex, e)) {
                        merge = Some((i, e.clone(), j));
                        break 'search;
                    }
                }
            }
            let Some((i, e, j)) = merge else { break };
            blocks[i].excluded.remove(&e);
            blocks.swap_remove(j);
        }
        blocks.sort();
        RingSet { blocks }
    }

    /// Any finite union of basic sets, overlapping or not.
    pub fn union_of<T>(tree: &T, blocks: impl IntoIterator<Item = BasicSet<V, L>>) -> Self
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        blocks.into_iter().fold(Self::empty(), |acc, b| acc.union(tree, &RingSet::basic(b)))
    }

    pub fn intersect<T>(&self, tree: &T, other: &Self) -> Self
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        let mut out = Vec::new();
        for b in &self.blocks {
            for c in &other.blocks {
                out.extend(intersect_blocks(tree, b, c));
            }
        }
        Self::canonical(tree, out)
    }

    pub fn diff<T>(&self, tree: &T, other: &Self) -> Self
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        Self::canonical(tree, self.diff_blocks(tree, other))
    }

    fn diff_blocks<T>(&self, tree: &T, other: &Self) -> Vec<BasicSet<V, L>>
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        let mut out = Vec::new();
        for b in &self.blocks {
            let mut pieces = vec![b.clone()];
            for c in &other.blocks {
                pieces = pieces.iter().flat_map(|p| diff_blocks(tree, p, c)).collect();
                if pieces.is_empty() {
                    break;
                }
            }
            out.extend(pieces);
        }
        out
    }

    pub fn union<T>(&self, tree: &T, other: &Self) -> Self
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.diff_blocks(tree, self));
        Self::canonical(tree, blocks)
    }

    pub fn symmdiff<T>(&self, tree: &T, other: &Self) -> Self
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        let mut blocks = self.diff_blocks(tree, other);
        blocks.extend(other.diff_blocks(tree, self));
        Self::canonical(tree, blocks)
    }

    pub fn is_subset<T>(&self, tree: &T, other: &Self) -> bool
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        self.diff_blocks(tree, other).is_empty()
    }

    /// Extensional equality, decided by the two differences.
    pub fn equals<T>(&self, tree: &T, other: &Self) -> bool
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        self.is_subset(tree, other) && other.is_subset(tree, self)
    }

    pub fn display<T>(&self, tree: &T) -> String
    where
        T: DirectedTree<Vertex = V, Label = L>,
    {
        if self.blocks.is_empty() {
            return "empty".to_string();
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let apex = tree.vertex_name(&b.apex);
                if b.excluded.is_empty() {
                    format!("V({apex})")
                } else {
                    let ex: Vec<String> = b.excluded.iter().map(|e| tree.label_name(&b.apex, e)).collect();
                    format!("V({apex}; {})", ex.join(", "))
                }
            })
            .collect();
        parts.join(" | ")
    }
}

pub fn vertex_member<T: DirectedTree>(tree: &T, v: &T::Vertex, x: &Ring<T>) -> bool {
    x.blocks.iter().any(|b| basic_member(tree, v, b))
}

/// Whether `v` is a boundary vertex: it emits no edges or infinitely many.
pub fn boundary_vertex<T: DirectedTree>(tree: &T, v: &T::Vertex) -> bool {
    matches!(tree.valence(v), Valence::Infinite | Valence::Finite(0))
}

/// Whether `x` contains no boundary point at all. A block carries boundary
/// points unless it is the singleton `{v}` of a vertex with finite nonzero
/// valence, since every full cone contains a sink or an infinite path.
pub fn boundary_empty<T: DirectedTree>(tree: &T, x: &Ring<T>) -> bool {
    x.blocks.iter().all(|b| is_sigma_singleton(tree, b))
}

fn is_sigma_singleton<T: DirectedTree>(tree: &T, b: &Block<T>) -> bool {
    matches!(tree.valence(&b.apex), Valence::Finite(n) if n > 0 && b.excluded.len() == n)
}

/// Whether `x` is a finite union of singletons `{u}` with `u` in `s`.
/// `s` is a predicate so that infinite lifted sets can be passed.
pub fn quotient_kernel_member<T: DirectedTree>(tree: &T, x: &Ring<T>, s: impl Fn(&T::Vertex) -> bool) -> bool {
    x.blocks.iter().all(|b| is_sigma_singleton(tree, b) && s(&b.apex))
}

/// [`quotient_kernel_member`] for an explicit set, which must lie in Sigma.
pub fn quotient_kernel_member_in<T: DirectedTree>(tree: &T, x: &Ring<T>, s: &BTreeSet<T::Vertex>) -> Result<bool> {
    if let Some(bad) = s.iter().find(|u| !matches!(tree.valence(u), Valence::Finite(n) if n > 0)) {
        return Err(Error::NotInSigma(tree.vertex_name(bad)));
    }
    Ok(quotient_kernel_member(tree, x, |u| s.contains(u)))
}

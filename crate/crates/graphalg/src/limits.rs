//! Coherence checks along an increasing chain of subgraphs `F_1 ⊆ F_2 ⊆
//! ... ⊆ E`: the induced sets `S_i` compose, pushforwards of sets along the
//! fiber inclusions respect the quotient kernels, and for finite acyclic
//! chains the algebra dimensions grow.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::cover::{Fiber, FiberInclusion, FiberSet};
use crate::error::{Error, Result};
use crate::fock::{algebra_dimension, build_basis, longest_path};
use crate::graph::{Graph, Inclusion, Multiplicity, VertexId};
use crate::tree::{induced_s, pushforward, quotient_kernel_member, BasicSet, DirectedTree, RingSet, Valence};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub samples: usize,
}

impl Check {
    fn new() -> Self {
        Check { holds: true, witness: None, samples: 0 }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.samples += 1;
        if !ok && self.holds {
            self.holds = false;
            self.witness = Some(witness());
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainReport {
    /// `S_i` for every stage, the last being `E` itself.
    pub induced_s: Vec<Vec<String>>,
    pub composition: Check,
    pub kernel: Check,
    pub pushforward: Check,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimensions: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone: Option<bool>,
}

impl ChainReport {
    pub fn all_hold(&self) -> bool {
        self.composition.holds && self.kernel.holds && self.pushforward.holds && self.monotone != Some(false)
    }
}

fn names(g: &Graph, s: &BTreeSet<VertexId>) -> Vec<String> {
    s.iter().map(|&v| g.vertex_name(v).to_string()).collect()
}

/// Sample sets in a fiber: for each vertex up to `depth`, its cone, its
/// singleton when the valence is finite, and the cone minus each edge.
fn sample_sets(fiber: &Fiber<'_>, depth: usize, truncate: u32) -> Vec<FiberSet> {
    let mut out = Vec::new();
    for p in fiber.vertices(depth, truncate) {
        let labels = fiber.out_labels(&p, truncate);
        out.push(RingSet::basic(BasicSet::cone(p.clone())));
        if let Valence::Finite(n) = fiber.valence(&p) {
            if n > 0 {
                out.push(RingSet::basic(BasicSet { apex: p.clone(), excluded: labels.iter().copied().collect() }));
            }
        }
        for &l in labels.iter().take(2) {
            out.push(RingSet::basic(BasicSet { apex: p.clone(), excluded: BTreeSet::from([l]) }));
        }
    }
    out
}

/// Checks a chain of stages ending in `e` (pass `[e]` alone for the trivial
/// chain). `s` is a subset of Sigma of `e`.
pub fn limit_check(
    stages: &[Graph],
    e: &Graph,
    s: &BTreeSet<VertexId>,
    depth: usize,
    truncate: u32,
) -> Result<ChainReport> {
    if stages.is_empty() {
        return Err(Error::InvalidChain("no stages".into()));
    }
    for w in stages.windows(2) {
        Inclusion::new(&w[0], &w[1]).map_err(|err| Error::InvalidChain(format!("stages are not nested: {err}")))?;
    }
    let last = Inclusion::new(&stages[stages.len() - 1], e).map_err(|err| Error::InvalidChain(err.to_string()))?;
    if !last.is_onto(&stages[stages.len() - 1], e) {
        return Err(Error::InvalidChain("the union of the stages is not the whole graph".into()));
    }

    let induced: Vec<BTreeSet<VertexId>> = stages.iter().map(|f| induced_s(f, e, s)).collect::<Result<_>>()?;
    let mut composition = Check::new();
    for i in 0..stages.len() {
        for j in i..stages.len() {
            let via = induced_s(&stages[i], &stages[j], &induced[j])?;
            composition.record(via == induced[i], || format!("stages {} and {}", i + 1, j + 1));
        }
    }

    let mut kernel = Check::new();
    let mut push = Check::new();
    let mut all: Vec<&Graph> = stages.iter().collect();
    all.push(e);
    let mut all_s = induced.clone();
    all_s.push(s.clone());
    for i in 0..all.len() - 1 {
        let (small, big) = (all[i], all[i + 1]);
        let inc = FiberInclusion::new(small, big)?;
        let graph_inc = Inclusion::new(small, big)?;
        for v in small.vertices() {
            let a = Fiber::new(small, v);
            let b = Fiber::new(big, graph_inc.map_vertex(v));
            let samples = sample_sets(&a, depth, truncate);
            let images: Vec<FiberSet> = samples.iter().map(|x| pushforward(&b, &inc, x)).collect::<Result<_>>()?;
            let (s1, s2) = (&all_s[i], &all_s[i + 1]);
            for (x, px) in samples.iter().zip(&images) {
                let lhs = quotient_kernel_member(&a, x, |p| s1.contains(&p.terminus()));
                let rhs = quotient_kernel_member(&b, px, |p| s2.contains(&p.terminus()));
                kernel.record(lhs == rhs, || {
                    format!("{} over {} in stage {}", x.display(&a), small.vertex_name(v), i + 1)
                });
            }
            for (k, x) in samples.iter().enumerate() {
                for (y, py) in samples.iter().zip(&images).skip(k).take(6) {
                    let px = &images[k];
                    let meet = pushforward(&b, &inc, &x.intersect(&a, y))?;
                    let minus = pushforward(&b, &inc, &x.diff(&a, y))?;
                    let ok = meet.equals(&b, &px.intersect(&b, py)) && minus.equals(&b, &px.diff(&b, py));
                    push.record(ok, || {
                        format!("{} and {} over {}", x.display(&a), y.display(&a), small.vertex_name(v))
                    });
                }
            }
        }
    }

    let finite = longest_path(e).is_some() && !e.bundles().any(|(_, b)| b.multiplicity.is_omega());
    let (dimensions, monotone) = if finite {
        let mut dims = Vec::new();
        for (g, si) in all.iter().zip(&all_s) {
            dims.push(algebra_dimension(g, &build_basis(g, si, None, 0)?)?);
        }
        let mono = dims.windows(2).all(|w| w[0] <= w[1]);
        (Some(dims), Some(mono))
    } else {
        (None, None)
    };

    Ok(ChainReport {
        induced_s: stages.iter().zip(&induced).map(|(f, s)| names(f, s)).collect(),
        composition,
        kernel,
        pushforward: push,
        dimensions,
        monotone,
    })
}

/// Three chains ending in `g`: the trivial one, one that adds bundles in
/// declaration order, and one that adds vertices in declaration order
/// while raising multiplicities stage by stage.
pub fn standard_chains(g: &Graph) -> Vec<Vec<Graph>> {
    let nb = g.bundle_count();
    let nv = g.vertex_count();
    let by_bundles = (1..=3)
        .map(|k| {
            let keep = (nb * k).div_ceil(3);
            g.restrict(|_| true, |b| (b.0 < keep).then(|| g.bundle_data(b).multiplicity))
        })
        .collect();
    let by_vertices = (1..=3)
        .map(|k| {
            let keep = (nv * k).div_ceil(3);
            g.restrict(
                |v| v.0 < keep,
                |b| {
                    let m = g.bundle_data(b).multiplicity;
                    if k == 3 {
                        return Some(m);
                    }
                    Some(match m {
                        Multiplicity::Finite(x) => Multiplicity::Finite(x.min(k as u32)),
                        Multiplicity::Omega => Multiplicity::Finite(k as u32),
                    })
                },
            )
        })
        .collect();
    vec![vec![g.clone()], by_bundles, by_vertices]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    #[test]
    fn edge_inside_two_sinks() {
        let two = parse_graph("vertex u; vertex v; vertex w; edge e: u -> v; edge f: u -> w").unwrap();
        let f1 = parse_graph("vertex u; vertex v; edge e: u -> v").unwrap();
        let r = limit_check(&[f1, two.clone()], &two, &two.sigma(), 2, 0).unwrap();
        assert_eq!(r.induced_s[0], Vec::<String>::new());
        assert_eq!(r.induced_s[1], vec!["u".to_string()]);
        assert!(r.all_hold(), "{r:?}");
        // The Toeplitz algebra of the edge, then the graph algebra of `two`.
        assert_eq!(r.dimensions, Some(vec![5, 8, 8]));
    }

    #[test]
    fn o2_by_loops() {
        let o2 = parse_graph("vertex u; edge a: u -> u; edge b: u -> u").unwrap();
        let stage1 = parse_graph("vertex u").unwrap();
        let stage2 = parse_graph("vertex u; edge a: u -> u").unwrap();
        let r = limit_check(&[stage1, stage2, o2.clone()], &o2, &o2.sigma(), 2, 0).unwrap();
        assert!(r.all_hold(), "{r:?}");
        assert_eq!(r.dimensions, None);
    }

    #[test]
    fn rejects_bad_chains() {
        let two = parse_graph("vertex u; vertex v; vertex w; edge e: u -> v; edge f: u -> w").unwrap();
        let f1 = parse_graph("vertex u; vertex v; edge e: u -> v").unwrap();
        assert!(matches!(limit_check(&[f1], &two, &BTreeSet::new(), 1, 0), Err(Error::InvalidChain(_))));
    }

    #[test]
    fn standard_chains_are_nested() {
        let g = parse_graph("vertex u; vertex v; edge a: u -> u * omega; edge e: u -> v * 2").unwrap();
        for chain in standard_chains(&g) {
            let r = limit_check(&chain, &g, &BTreeSet::new(), 1, 2).unwrap();
            assert!(r.all_hold(), "{r:?}");
        }
    }
}

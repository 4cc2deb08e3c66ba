//! Helpers shared by the integration tests: random inputs, the corpus, and
//! brute-force oracles that only use the public graph and tree accessors.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::PathBuf;

use graphalg::graph::{EdgeInstance, Multiplicity};
use graphalg::invariants::Invariant;
use graphalg::point::Lasso;
use graphalg::structure::find_cycles;
use graphalg::tree::{BasicSet, FiniteTree, RingSet};
use graphalg::{parse_graph, Graph, Path, Point, VertexId};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// Every `.graph` file of the corpus, by file stem.
pub fn corpus() -> Vec<(String, Graph)> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "graph"))
        .collect();
    files.sort();
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            let g = parse_graph(&std::fs::read_to_string(&p).unwrap()).unwrap();
            (name, g)
        })
        .collect()
}

pub fn corpus_graph(name: &str) -> Graph {
    corpus().into_iter().find(|(n, _)| n == name).unwrap_or_else(|| panic!("no corpus graph {name}")).1
}

/// A random graph with up to `max_vertices` vertices; multiplicities are
/// mostly 1, sometimes 2, and occasionally omega when `omega` is set.
pub fn random_graph<R: Rng>(rng: &mut R, max_vertices: usize, omega: bool) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("vertex v{i}\n"));
    }
    let m = rng.gen_range(0..=2 * n);
    for j in 0..m {
        let (o, t) = (rng.gen_range(0..n), rng.gen_range(0..n));
        let mult = match rng.gen_range(0..10) {
            0 if omega => " * omega",
            1 | 2 => " * 2",
            _ => "",
        };
        text.push_str(&format!("edge e{j} : v{o} -> v{t}{mult}\n"));
    }
    parse_graph(&text).unwrap()
}

/// A random finite directed forest: each vertex after the first hangs off
/// an earlier one (or starts a new component) with a random orientation.
pub fn random_tree<R: Rng>(rng: &mut R, max_vertices: usize) -> FiniteTree {
    let n = rng.gen_range(1..=max_vertices);
    let down = if rng.gen_bool(0.3) { 1.0 } else { 0.75 };
    let mut edges = Vec::new();
    for i in 1..n {
        if rng.gen_bool(0.05) {
            continue;
        }
        let p = rng.gen_range(0..i);
        edges.push(if rng.gen_bool(down) { (p, i) } else { (i, p) });
    }
    FiniteTree::new(n, edges).unwrap()
}

pub fn random_block<R: Rng>(rng: &mut R, t: &FiniteTree) -> BasicSet<usize, usize> {
    let apex = rng.gen_range(0..t.len());
    let excluded = t.out_edges(apex).iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
    BasicSet { apex, excluded }
}

pub fn random_ring<R: Rng>(rng: &mut R, t: &FiniteTree) -> RingSet<usize, usize> {
    let k = rng.gen_range(0..=3);
    RingSet::union_of(t, (0..k).map(|_| random_block(rng, t)))
}

/// The vertices of `V(apex; excluded)` by breadth-first search along
/// directed edges.
pub fn block_vertices(t: &FiniteTree, b: &BasicSet<usize, usize>) -> BTreeSet<usize> {
    let mut seen = BTreeSet::from([b.apex]);
    let mut queue = VecDeque::new();
    for &e in t.out_edges(b.apex) {
        if !b.excluded.contains(&e) {
            queue.push_back(t.edges()[e].1);
        }
    }
    while let Some(x) = queue.pop_front() {
        if seen.insert(x) {
            queue.extend(t.out_edges(x).iter().map(|&e| t.edges()[e].1));
        }
    }
    seen
}

pub fn ring_vertices(t: &FiniteTree, x: &RingSet<usize, usize>) -> BTreeSet<usize> {
    x.blocks().iter().flat_map(|b| block_vertices(t, b)).collect()
}

/// Whether the blocks of `x` are pairwise disjoint.
pub fn blocks_disjoint(t: &FiniteTree, x: &RingSet<usize, usize>) -> bool {
    let sets: Vec<_> = x.blocks().iter().map(|b| block_vertices(t, b)).collect();
    let total: usize = sets.iter().map(|s| s.len()).sum();
    total == sets.iter().flatten().collect::<BTreeSet<_>>().len()
}

/// A random reduced path starting at `v`.
pub fn random_reduced_path<R: Rng>(rng: &mut R, g: &Graph, v: VertexId, max_len: usize, truncate: u32) -> Path {
    let mut p = Path::unit(v);
    let len = rng.gen_range(0..=max_len);
    for _ in 0..len {
        let choices: Vec<_> =
            g.signed_edges_at(p.terminus(), truncate).into_iter().filter(|&s| p.last() != Some(s.inverse())).collect();
        match choices.choose(rng) {
            Some(&s) => p = p.push(g, s).unwrap(),
            None => break,
        }
    }
    p
}

/// A random point over `v`: a reduced path, or a lasso built from a
/// directed cycle of the graph reached by a random stem.
pub fn random_point<R: Rng>(rng: &mut R, g: &Graph, cycles: &[Path], v: VertexId, truncate: u32) -> Point {
    if !cycles.is_empty() && rng.gen_bool(0.5) {
        for _ in 0..20 {
            let stem = random_reduced_path(rng, g, v, 4, truncate);
            let fitting: Vec<&Path> = cycles.iter().filter(|c| c.origin() == stem.terminus()).collect();
            if let Some(c) = fitting.choose(rng) {
                let reps = rng.gen_range(1..=2);
                let mut cyc = (*c).clone();
                for _ in 1..reps {
                    cyc = cyc.concat(c).unwrap();
                }
                return Point::Lasso(Lasso::new(g, stem, &cyc).unwrap());
            }
        }
    }
    Point::Finite(random_reduced_path(rng, g, v, 5, truncate))
}

/// Directed cycles of `g`, rotated to start at each of their vertices.
pub fn cycle_paths(g: &Graph) -> Vec<Path> {
    let mut out = Vec::new();
    for c in find_cycles(g, 1000).unwrap_or_default() {
        let p = c.path(g);
        for k in 0..p.len() {
            let rotated = p.suffix(g, k).concat(&p.prefix(g, k)).unwrap();
            out.push(rotated);
        }
    }
    out
}

/// Every invariant, by checking every candidate `(N, F)` with `F_u` any
/// subset of the out-edges of `u` (omega bundles cut to `truncate`
/// instances).
pub fn brute_force_invariants(g: &Graph, truncate: u32) -> Vec<Invariant> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << vs.len()) {
        let n: Vec<VertexId> = vs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
        let options: Vec<Vec<EdgeInstance>> = n.iter().map(|&u| g.delta1(u).truncated(truncate)).collect();
        let total: usize = options.iter().map(|o| o.len()).sum();
        assert!(total <= 20, "brute force too large");
        for fmask in 0u64..(1 << total) {
            let mut f = BTreeMap::new();
            let mut bit = 0;
            for (&u, opts) in n.iter().zip(&options) {
                let mut fu = BTreeSet::new();
                for &e in opts {
                    if fmask >> bit & 1 == 1 {
                        fu.insert(e);
                    }
                    bit += 1;
                }
                if !fu.is_empty() {
                    f.insert(u, fu);
                }
            }
            let cand = Invariant::new(n.iter().copied().collect(), f);
            if satisfies_definition(g, &cand, truncate + 1) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out
}

/// The invariant conditions read literally, over the first `check`
/// instances of every omega bundle. With `F` drawn from fewer instances
/// than that, some instance of each omega bundle is always outside `F`.
pub fn satisfies_definition(g: &Graph, inv: &Invariant, check: u32) -> bool {
    let empty = BTreeSet::new();
    let f = |u: VertexId| inv.f.get(&u).unwrap_or(&empty);
    let clean = |v: VertexId| inv.n.contains(&v) && f(v).is_empty();
    for u in g.vertices() {
        let d = g.delta1(u);
        let edges = d.truncated(check);
        if inv.n.contains(&u) {
            if !d.is_infinite() && !f(u).is_empty() {
                return false;
            }
            for &e in &edges {
                let t = g.edge_terminus(e);
                if !f(u).contains(&e) && !clean(t) {
                    return false;
                }
                if f(u).contains(&e) && inv.n.contains(&t) && f(t).is_empty() {
                    return false;
                }
            }
        } else if !d.is_infinite() && !edges.is_empty() && edges.iter().all(|&e| clean(g.edge_terminus(e))) {
            return false;
        }
    }
    true
}

/// Number of directed paths ending at each vertex of a finite acyclic
/// graph, counted by walking backwards.
pub fn paths_into_count(g: &Graph, u: VertexId) -> u64 {
    let mut count = 1;
    for &b in g.in_bundles(u) {
        let k = match g.bundle_data(b).multiplicity {
            Multiplicity::Finite(k) => k as u64,
            Multiplicity::Omega => panic!("omega bundle"),
        };
        count += k * paths_into_count(g, g.bundle_data(b).origin);
    }
    count
}

/// Cycles with no exit, found directly: a strongly connected set of
/// vertices on a cycle where every vertex emits exactly one edge.
pub fn has_cycle_without_exit(g: &Graph) -> bool {
    g.vertices().any(|v| {
        let reach = g.reachable(v);
        let on_cycle = g.out_bundles(v).iter().any(|&b| g.reachable(g.bundle_data(b).terminus).contains(&v));
        on_cycle && reach.iter().all(|&w| g.out_valence(w) == Some(1) && g.reachable(w).contains(&v))
    })
}

pub fn has_cycle(g: &Graph) -> bool {
    g.vertices().any(|v| g.out_bundles(v).iter().any(|&b| g.reachable(g.bundle_data(b).terminus).contains(&v)))
}

/// A random finite acyclic graph: edges only run from lower to higher
/// vertex numbers.
pub fn random_acyclic_graph<R: Rng>(rng: &mut R, max_vertices: usize) -> Graph {
    let n = rng.gen_range(1..=max_vertices);
    let mut text = String::new();
    for i in 0..n {
        text.push_str(&format!("vertex v{i}\n"));
    }
    let mut j = 0;
    for o in 0..n {
        for t in o + 1..n {
            if rng.gen_bool(0.4) {
                let mult = if rng.gen_bool(0.2) { " * 2" } else { "" };
                text.push_str(&format!("edge e{j} : v{o} -> v{t}{mult}\n"));
                j += 1;
            }
        }
    }
    parse_graph(&text).unwrap()
}

/// Total number of candidate exclusions the brute-force search would try.
pub fn brute_force_width(g: &Graph, truncate: u32) -> usize {
    g.vertices().map(|u| g.delta1(u).truncated(truncate).len()).sum()
}

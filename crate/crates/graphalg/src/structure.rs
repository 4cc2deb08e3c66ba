//! Cycle taxonomy and the structural verdicts decided from it.
//!
//! Everything here works on the condensation of the graph into strongly
//! connected components. A component is cyclic if it has more than one
//! vertex or a loop. In a finite graph every infinite directed path
//! eventually stays inside one cyclic component, so "reaches every
//! infinite path" can be checked as "reaches every cyclic component".

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{BundleId, EdgeInstance, Graph, Multiplicity, VertexClass, VertexId};
use crate::path::Path;
use crate::point::Point;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    /// No exit.
    Terminal,
    /// Has exits, none of which leads back to the cycle.
    Transitory,
    /// Some exit leads back.
    Returning,
}

/// A vertex-simple directed cycle, recorded once per sequence of bundles.
/// `instances` counts the parallel copies (omega if any bundle is omega).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cycle {
    pub bundles: Vec<BundleId>,
    pub instances: Multiplicity,
    pub kind: CycleKind,
    /// An exit (an edge leaving a cycle vertex that is not the cycle edge
    /// there), preferring one that leads back.
    pub exit: Option<EdgeInstance>,
}

impl Cycle {
    /// The representative using instance 0 of every bundle.
    pub fn edges(&self) -> Vec<EdgeInstance> {
        self.bundles.iter().map(|&b| EdgeInstance::new(b, 0)).collect()
    }

    pub fn path(&self, g: &Graph) -> Path {
        let start = g.bundle_data(self.bundles[0]).origin;
        Path::from_edges(g, start, self.edges().into_iter().map(|e| e.forward())).expect("cycle is a circuit")
    }

    pub fn vertices(&self, g: &Graph) -> Vec<VertexId> {
        self.bundles.iter().map(|&b| g.bundle_data(b).origin).collect()
    }

    pub fn display(&self, g: &Graph) -> String {
        self.path(g).display(g)
    }
}

/// Strongly connected components and what is known about each.
#[derive(Clone, Debug)]
pub struct Components {
    /// Component index of each vertex; components are numbered in reverse
    /// topological order (sinks of the condensation first).
    pub of: Vec<usize>,
    pub members: Vec<Vec<VertexId>>,
    pub cyclic: Vec<bool>,
    /// Cyclic components that consist of one simple cycle and nothing else.
    pub bare_cycle: Vec<bool>,
    /// Whether some edge leaves the component.
    pub has_exit: Vec<bool>,
}

pub fn components(g: &Graph) -> Components {
    let n = g.vertex_count();
    // Tarjan, iterative.
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut of = vec![usize::MAX; n];
    let mut members: Vec<Vec<VertexId>> = Vec::new();
    let mut next = 0;
    let succ =
        |v: usize| -> Vec<usize> { g.out_bundles(VertexId(v)).iter().map(|&b| g.bundle_data(b).terminus.0).collect() };
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut work: Vec<(usize, Vec<usize>, usize)> = vec![(root, succ(root), 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(top) = work.last_mut() {
            let v = top.0;
            if top.2 < top.1.len() {
                let w = top.1[top.2];
                top.2 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, succ(w), 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                work.pop();
                if let Some((p, _, _)) = work.last() {
                    low[*p] = low[*p].min(low[v]);
                }
                if low[v] == index[v] {
                    let c = members.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("v is on the stack");
                        on_stack[w] = false;
                        of[w] = c;
                        comp.push(VertexId(w));
                        if w == v {
                            break;
                        }
                    }
                    comp.sort();
                    members.push(comp);
                }
            }
        }
    }
    let k = members.len();
    let mut internal = vec![0u64; k];
    let mut omega_inside = vec![false; k];
    let mut has_exit = vec![false; k];
    for (_, b) in g.bundles() {
        let (co, ct) = (of[b.origin.0], of[b.terminus.0]);
        if co == ct {
            match b.multiplicity {
                Multiplicity::Finite(m) => internal[co] += m as u64,
                Multiplicity::Omega => omega_inside[co] = true,
            }
        } else {
            has_exit[co] = true;
        }
    }
    let cyclic: Vec<bool> = (0..k).map(|c| members[c].len() > 1 || internal[c] > 0 || omega_inside[c]).collect();
    let bare_cycle = (0..k).map(|c| cyclic[c] && !omega_inside[c] && internal[c] == members[c].len() as u64).collect();
    Components { of, members, cyclic, bare_cycle, has_exit }
}

impl Components {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_cyclic_vertex(&self, v: VertexId) -> bool {
        self.cyclic[self.of[v.0]]
    }

    /// A bare cycle with no exit is a terminal cycle; with an exit, the
    /// exits cannot come back (the component would be bigger), so it is
    /// transitory. Cycles in any other cyclic component return.
    pub fn terminal(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&c| self.bare_cycle[c] && !self.has_exit[c])
    }

    pub fn transitory(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&c| self.bare_cycle[c] && self.has_exit[c])
    }
}

/// Shortest directed path from `from` to any vertex satisfying `goal`,
/// staying inside `allowed`. Ties are broken by bundle order.
fn bfs_path(
    g: &Graph,
    from: VertexId,
    goal: impl Fn(VertexId) -> bool,
    allowed: impl Fn(VertexId) -> bool,
) -> Option<Path> {
    let mut prev: BTreeMap<VertexId, EdgeInstance> = BTreeMap::new();
    let mut seen = BTreeSet::from([from]);
    let mut queue = VecDeque::from([from]);
    let mut hit = None;
    while let Some(v) = queue.pop_front() {
        if goal(v) {
            hit = Some(v);
            break;
        }
        for &b in g.out_bundles(v) {
            let t = g.bundle_data(b).terminus;
            if allowed(t) && seen.insert(t) {
                prev.insert(t, EdgeInstance::new(b, 0));
                queue.push_back(t);
            }
        }
    }
    let mut v = hit?;
    let mut edges = Vec::new();
    while v != from {
        let e = prev[&v];
        edges.push(e);
        v = g.edge_origin(e);
    }
    edges.reverse();
    Some(Path::from_edges(g, from, edges.into_iter().map(|e| e.forward())).expect("bfs path composes"))
}

/// A cycle through `v` inside its component, using instance 0 of each bundle.
fn cycle_through(g: &Graph, comps: &Components, v: VertexId) -> Option<Path> {
    let c = comps.of[v.0];
    let inside = |w: VertexId| comps.of[w.0] == c;
    let mut best: Option<Path> = None;
    for &b in g.out_bundles(v) {
        let t = g.bundle_data(b).terminus;
        if !inside(t) {
            continue;
        }
        let first = Path::edge(g, EdgeInstance::new(b, 0).forward());
        let rest = if t == v { Some(Path::unit(v)) } else { bfs_path(g, t, |w| w == v, inside) };
        if let Some(rest) = rest {
            let p = first.concat(&rest).expect("composable");
            if best.as_ref().is_none_or(|q| p.len() < q.len()) {
                best = Some(p);
            }
        }
    }
    best
}

fn classify(g: &Graph, bundles: &[BundleId], comps: &Components) -> (CycleKind, Option<EdgeInstance>) {
    let mut exits = Vec::new();
    for &cb in bundles {
        let v = g.bundle_data(cb).origin;
        for &b in g.out_bundles(v) {
            let data = g.bundle_data(b);
            if b == cb {
                if data.multiplicity != Multiplicity::Finite(1) {
                    exits.push(EdgeInstance::new(b, 1));
                }
            } else {
                exits.push(EdgeInstance::new(b, 0));
            }
        }
    }
    // An exit leads back iff its terminus is in the cycle's component.
    let home = comps.of[g.bundle_data(bundles[0]).origin.0];
    let returning = exits.iter().copied().find(|&e| comps.of[g.edge_terminus(e).0] == home);
    match (exits.first(), returning) {
        (None, _) => (CycleKind::Terminal, None),
        (Some(_), Some(e)) => (CycleKind::Returning, Some(e)),
        (Some(&e), None) => (CycleKind::Transitory, Some(e)),
    }
}

/// All vertex-simple cycles, one per sequence of bundles, each listed from
/// its least vertex. Fails once more than `cap` cycles have been found.
pub fn find_cycles(g: &Graph, cap: usize) -> Result<Vec<Cycle>> {
    let comps = components(g);
    let mut raw: Vec<Vec<BundleId>> = Vec::new();
    for s in g.vertices() {
        if !comps.is_cyclic_vertex(s) {
            continue;
        }
        // Simple paths from s through vertices > s in the same component.
        let c = comps.of[s.0];
        let mut path: Vec<BundleId> = Vec::new();
        let mut visited = BTreeSet::from([s]);
        let mut stack: Vec<(VertexId, usize)> = vec![(s, 0)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let out = g.out_bundles(v);
            if *i >= out.len() {
                stack.pop();
                if let Some(b) = path.pop() {
                    visited.remove(&g.bundle_data(b).terminus);
                }
                continue;
            }
            let b = out[*i];
            *i += 1;
            let t = g.bundle_data(b).terminus;
            if t == s {
                let mut cyc = path.clone();
                cyc.push(b);
                raw.push(cyc);
                if raw.len() > cap {
                    return Err(Error::CycleCapExceeded(cap));
                }
            } else if t > s && comps.of[t.0] == c && !visited.contains(&t) {
                visited.insert(t);
                path.push(b);
                stack.push((t, 0));
            }
        }
    }
    Ok(raw
        .into_iter()
        .map(|bundles| {
            let instances =
                bundles.iter().fold(Multiplicity::Finite(1), |acc, &b| match (acc, g.bundle_data(b).multiplicity) {
                    (Multiplicity::Finite(x), Multiplicity::Finite(y)) => Multiplicity::Finite(x.saturating_mul(y)),
                    _ => Multiplicity::Omega,
                });
            let (kind, exit) = classify(g, &bundles, &comps);
            Cycle { bundles, instances, kind, exit }
        })
        .collect())
}

/// A verdict with the evidence behind it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    /// Why the verdict fails (or, for cyclicity, which cycle exists).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub criterion: String,
}

fn verdict(holds: bool, witness: Option<String>, criterion: &'static str) -> Verdict {
    Verdict { holds, witness, criterion: criterion.to_string() }
}

fn component_cycle(g: &Graph, comps: &Components, c: usize) -> String {
    let v = comps.members[c][0];
    cycle_through(g, comps, v).map(|p| p.display(g)).unwrap_or_default()
}

fn first_terminal(g: &Graph, comps: &Components) -> Option<String> {
    comps.terminal().next().map(|c| component_cycle(g, comps, c))
}

fn first_transitory(g: &Graph, comps: &Components) -> Option<String> {
    comps.transitory().next().map(|c| component_cycle(g, comps, c))
}

pub fn is_af(g: &Graph) -> Verdict {
    let comps = components(g);
    let w = (0..comps.len()).find(|&c| comps.cyclic[c]).map(|c| format!("cycle {}", component_cycle(g, &comps, c)));
    verdict(w.is_none(), w, "AF iff the graph has no cycles")
}

pub fn is_locally_contractive(g: &Graph) -> Verdict {
    let comps = components(g);
    let w = first_terminal(g, &comps).map(|c| format!("terminal cycle {c}")).or_else(|| {
        g.vertices()
            .find(|&u| !g.reachable(u).iter().any(|&v| comps.is_cyclic_vertex(v)))
            .map(|u| format!("no cycle reachable from {}", g.vertex_name(u)))
    });
    verdict(w.is_none(), w, "locally contractive iff no terminal cycles and every vertex reaches a cycle")
}

/// Every vertex reaches every cyclic component and every vertex outside
/// Sigma (sinks and infinite emitters).
pub fn is_cofinal(g: &Graph) -> Verdict {
    let comps = components(g);
    let targets: Vec<VertexId> =
        g.vertices().filter(|&v| comps.is_cyclic_vertex(v) || g.class(v) != VertexClass::Sigma).collect();
    let mut w = None;
    'outer: for u in g.vertices() {
        let reach = g.reachable(u);
        for &v in &targets {
            let ok = if g.class(v) != VertexClass::Sigma {
                reach.contains(&v)
            } else {
                reach.iter().any(|x| comps.of[x.0] == comps.of[v.0])
            };
            if !ok {
                let what = if g.class(v) != VertexClass::Sigma {
                    format!("vertex {}", g.vertex_name(v))
                } else {
                    format!("cycle {}", component_cycle(g, &comps, comps.of[v.0]))
                };
                w = Some(format!("{} does not reach {what}", g.vertex_name(u)));
                break 'outer;
            }
        }
    }
    verdict(w.is_none(), w, "cofinal: every vertex reaches every infinite path and every vertex outside Sigma")
}

pub fn is_essentially_free(g: &Graph) -> Verdict {
    let comps = components(g);
    let w = first_terminal(g, &comps).map(|c| format!("terminal cycle {c}"));
    verdict(w.is_none(), w, "essentially free iff no terminal cycles")
}

pub fn is_essentially_principal(g: &Graph) -> Verdict {
    let comps = components(g);
    let w = first_terminal(g, &comps)
        .map(|c| format!("terminal cycle {c}"))
        .or_else(|| first_transitory(g, &comps).map(|c| format!("transitory cycle {c}")));
    verdict(w.is_none(), w, "essentially principal iff no terminal or transitory cycles")
}

pub fn is_simple(g: &Graph) -> Verdict {
    let cof = is_cofinal(g);
    let free = is_essentially_free(g);
    let w = cof.witness.or(free.witness);
    verdict(cof.holds && free.holds, w, "simple iff cofinal with no terminal cycles")
}

pub fn is_purely_infinite_simple(g: &Graph) -> Verdict {
    let simple = is_simple(g);
    let comps = components(g);
    let w = simple.witness.or_else(|| {
        g.vertices()
            .find(|&u| !g.reachable(u).iter().any(|&v| comps.is_cyclic_vertex(v)))
            .map(|u| format!("no cycle reachable from {}", g.vertex_name(u)))
    });
    verdict(w.is_none(), w, "purely infinite simple iff simple and every vertex reaches a cycle")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleReport {
    pub cycle: String,
    pub kind: CycleKind,
    pub instances: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exit: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StructureReport {
    pub cycles: Vec<CycleReport>,
    pub is_af: Verdict,
    pub is_locally_contractive: Verdict,
    pub is_cofinal: Verdict,
    pub is_essentially_free: Verdict,
    pub is_essentially_principal: Verdict,
    pub is_simple: Verdict,
    pub is_purely_infinite_simple: Verdict,
}

pub fn analyze(g: &Graph, cap: usize) -> Result<StructureReport> {
    let cycles = find_cycles(g, cap)?
        .iter()
        .map(|c| CycleReport {
            cycle: c.display(g),
            kind: c.kind,
            instances: match c.instances {
                Multiplicity::Finite(k) => k.to_string(),
                Multiplicity::Omega => "omega".into(),
            },
            exit: c.exit.map(|e| g.instance_name(e)),
        })
        .collect();
    Ok(StructureReport {
        cycles,
        is_af: is_af(g),
        is_locally_contractive: is_locally_contractive(g),
        is_cofinal: is_cofinal(g),
        is_essentially_free: is_essentially_free(g),
        is_essentially_principal: is_essentially_principal(g),
        is_simple: is_simple(g),
        is_purely_infinite_simple: is_purely_infinite_simple(g),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Isotropy {
    Trivial,
    /// `beta gamma beta^-1` for the lasso `beta gamma^inf`.
    Nontrivial(Path),
}

pub fn isotropy(g: &Graph, x: &Point) -> Isotropy {
    match x {
        Point::Finite(_) => Isotropy::Trivial,
        Point::Lasso(l) => {
            let w = l.stem().concat(&l.cycle_path(g)).and_then(|p| p.concat(&l.stem().inverse()));
            Isotropy::Nontrivial(w.expect("stem ends where the cycle starts"))
        }
    }
}

/// The infinite word `alpha (beta gamma) delta gamma (beta gamma)^2 delta
/// gamma (beta gamma)^3 ...`, where `beta gamma` is a cycle and `delta`
/// leaves it through an exit and comes back to the start of `gamma`.
/// Never eventually periodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AperiodicWord {
    pub alpha: Path,
    pub beta: Path,
    pub gamma: Path,
    pub delta: Path,
}

impl AperiodicWord {
    /// The first `n` letters.
    pub fn prefix(&self, g: &Graph, n: usize) -> Path {
        let cycle = self.beta.concat(&self.gamma).expect("beta gamma composes");
        let detour = self.delta.concat(&self.gamma).expect("delta gamma composes");
        let mut letters = self.alpha.word().to_vec();
        let mut k = 1;
        while letters.len() < n {
            for _ in 0..k {
                letters.extend_from_slice(cycle.word());
            }
            letters.extend_from_slice(detour.word());
            k += 1;
        }
        letters.truncate(n);
        Path::from_edges(g, self.alpha.origin(), letters).expect("letters compose")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FreePoint {
    Finite(Path),
    Aperiodic(AperiodicWord),
}

/// A boundary point over `u` with trivial isotropy: a shortest path to a
/// sink or infinite emitter when there is one, otherwise an aperiodic word
/// running through a returning cycle.
pub fn free_point_from(g: &Graph, u: VertexId) -> Result<FreePoint> {
    let comps = components(g);
    if let Some(c) = comps.terminal().next() {
        return Err(Error::TerminalCycle(component_cycle(g, &comps, c)));
    }
    if let Some(p) = bfs_path(g, u, |v| g.class(v) != VertexClass::Sigma, |_| true) {
        return Ok(FreePoint::Finite(p));
    }
    // Every vertex reachable from u emits edges, so some reachable
    // component is a sink of the condensation; it is cyclic and, having no
    // terminal cycle, not a bare cycle.
    let reach = g.reachable(u);
    let x = *reach.iter().filter(|v| !comps.has_exit[comps.of[v.0]]).min().expect("a bottom component is reachable");
    let cycle = cycle_through(g, &comps, x).expect("bottom component is cyclic");
    let verts: Vec<VertexId> = std::iter::once(x).chain(cycle.word().iter().map(|&e| g.terminus(e))).collect();
    let m = cycle.len();
    for i in 0..m {
        let here = verts[i];
        let on_cycle = cycle.word()[i].edge;
        for &b in g.out_bundles(here) {
            let data = g.bundle_data(b);
            let f = if b == on_cycle.bundle {
                if data.multiplicity == Multiplicity::Finite(1) {
                    continue;
                }
                EdgeInstance::new(b, 1)
            } else {
                EdgeInstance::new(b, 0)
            };
            let t = data.terminus;
            let back = bfs_path(g, t, |w| verts[..m].contains(&w), |w| comps.of[w.0] == comps.of[x.0])
                .expect("bottom component");
            let j = verts[..m].iter().position(|&w| w == back.terminus()).expect("ends on the cycle");
            let alpha = bfs_path(g, u, |w| w == here, |_| true).expect("here is reachable");
            let rotated: Vec<_> = cycle.word()[i..].iter().chain(&cycle.word()[..i]).copied().collect();
            let split = (j + m - i) % m;
            let split = if split == 0 { m } else { split };
            let beta = Path::from_edges(g, here, rotated[..split].iter().copied()).expect("cycle segment");
            let gamma = Path::from_edges(g, beta.terminus(), rotated[split..].iter().copied()).expect("cycle segment");
            let delta = Path::edge(g, f.forward()).concat(&back).expect("composable");
            return Ok(FreePoint::Aperiodic(AperiodicWord { alpha, beta, gamma, delta }));
        }
    }
    unreachable!("a cycle in a non-bare component has an exit")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cardinality {
    Finite(u128),
    Omega,
}

/// For each `u` in `Sigma ∖ s`, the number of directed paths ending at `u`.
pub fn toeplitz_ideal_report(g: &Graph, s: &BTreeSet<VertexId>) -> Result<Vec<(VertexId, Cardinality)>> {
    if let Some(&v) = s.iter().find(|&&v| g.class(v) != VertexClass::Sigma) {
        return Err(Error::NotInSigma(g.vertex_name(v).to_string()));
    }
    g.vertices()
        .filter(|v| g.class(*v) == VertexClass::Sigma && !s.contains(v))
        .map(|u| Ok((u, paths_into(g, u)?)))
        .collect()
}

/// Number of directed paths (including the unit) ending at `u`.
pub fn paths_into(g: &Graph, u: VertexId) -> Result<Cardinality> {
    let comps = components(g);
    let ancestors: BTreeSet<VertexId> = g.vertices().filter(|&v| g.reachable(v).contains(&u)).collect();
    let omega_feed = g.bundles().any(|(_, b)| b.multiplicity.is_omega() && ancestors.contains(&b.terminus));
    if omega_feed || ancestors.iter().any(|&v| comps.is_cyclic_vertex(v)) {
        return Ok(Cardinality::Omega);
    }
    // Acyclic above u: components are singletons in reverse topological
    // order, so count from u upwards.
    let mut order: Vec<VertexId> = ancestors.iter().copied().collect();
    order.sort_by_key(|v| comps.of[v.0]);
    let mut count: BTreeMap<VertexId, u128> = BTreeMap::new();
    let mut total: u128 = 0;
    for v in order {
        let mut c: u128 = u128::from(v == u);
        for &b in g.out_bundles(v) {
            let data = g.bundle_data(b);
            if let (Some(&k), Multiplicity::Finite(m)) = (count.get(&data.terminus), data.multiplicity) {
                c = k
                    .checked_mul(m as u128)
                    .and_then(|x| x.checked_add(c))
                    .ok_or_else(|| Error::Overflow(format!("paths into {}", g.vertex_name(u))))?;
            }
        }
        count.insert(v, c);
        total = total.checked_add(c).ok_or_else(|| Error::Overflow(format!("paths into {}", g.vertex_name(u))))?;
    }
    Ok(Cardinality::Finite(total))
}

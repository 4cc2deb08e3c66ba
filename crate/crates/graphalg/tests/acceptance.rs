//! The acceptance suite: one PASS/FAIL line per criterion, exit status 1 if
//! any criterion fails. Runs without the test harness so the lines always
//! show up under `cargo test`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use graphalg::cover::{cocycle, standard_form, Arrow, Fiber, FiberBlock, FiberSet};
use graphalg::fock::{algebra_dimension, build_basis, longest_path, verify_relations, Family};
use graphalg::graph::VertexClass;
use graphalg::invariants::{enumerate_invariants, invariant_of_open, open_set_of, open_set_of_tree, quotient_data};
use graphalg::limits::{limit_check, standard_chains};
use graphalg::structure::{analyze, components, StructureReport};
use graphalg::tree::{boundary_empty, BasicSet, DirectedTree, RingSet};
use graphalg::{Graph, Path, Point, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const TRUNCATE: u32 = 2;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1. Ring operations against vertex sets.

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut checks = 0usize;
    for round in 0..1000 {
        let t = random_tree(&mut rng, 200);
        let mut indegree = vec![0; t.len()];
        t.edges().iter().for_each(|&(_, v)| indegree[v] += 1);
        let out_forest = indegree.iter().all(|&d| d <= 1);
        for _ in 0..4 {
            let (a, b) = (random_ring(&mut rng, &t), random_ring(&mut rng, &t));
            let (va, vb) = (ring_vertices(&t, &a), ring_vertices(&t, &b));
            let ops: [(&str, RingSet<usize, usize>, BTreeSet<usize>); 4] = [
                ("intersect", a.intersect(&t, &b), va.intersection(&vb).copied().collect()),
                ("diff", a.diff(&t, &b), va.difference(&vb).copied().collect()),
                ("union", a.union(&t, &b), va.union(&vb).copied().collect()),
                ("symmdiff", a.symmdiff(&t, &b), va.symmetric_difference(&vb).copied().collect()),
            ];
            for (name, got, want) in &ops {
                ensure(ring_vertices(&t, got) == *want, || format!("tree {round}: {name} of {a:?} and {b:?}"))?;
                ensure(blocks_disjoint(&t, got), || format!("tree {round}: {name} has overlapping blocks"))?;
                checks += 1;
            }
            let swapped = b.union(&t, &a);
            ensure(ops[2].1.equals(&t, &swapped), || format!("tree {round}: union does not commute"))?;
            ensure(!out_forest || ops[2].1 == swapped, || format!("tree {round}: union is not canonical"))?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{checks} operations on 1000 trees in {:.1}s", elapsed.as_secs_f64()))
}

// 2. Round trips between invariants and open sets on the fibers.

fn children(fiber: &Fiber<'_>, p: &Path) -> Vec<Path> {
    fiber.out_labels(p, TRUNCATE).iter().map(|l| fiber.target(p, l)).collect()
}

/// Fiber vertices where `L(W)` can matter for a union of these blocks: the
/// apexes and two levels below them.
fn nearby(fiber: &Fiber<'_>, blocks: &[&FiberBlock]) -> BTreeSet<Path> {
    let mut out = BTreeSet::new();
    for b in blocks {
        out.insert(b.apex.clone());
        for c in children(fiber, &b.apex) {
            for d in children(fiber, &c) {
                out.insert(d);
            }
            out.insert(c);
        }
    }
    out
}

fn boundary_equal(fiber: &Fiber<'_>, a: &FiberSet, b: &FiberSet) -> bool {
    boundary_empty(fiber, &a.symmdiff(fiber, b))
}

fn check_open_set(fiber: &Fiber<'_>, g: &Graph, blocks: &[&FiberBlock]) -> Result<(), String> {
    let w = RingSet::union_of(fiber, blocks.iter().map(|b| (*b).clone()));
    let verts = nearby(fiber, blocks);
    let l = invariant_of_open(fiber, &w, verts.iter().cloned());
    let back = open_set_of_tree(fiber, &l);
    ensure(boundary_equal(fiber, &back, &w), || format!("U(L(W)) differs from W = {}", w.display(fiber)))?;
    let again = invariant_of_open(fiber, &back, verts.iter().cloned());
    ensure(again == l, || {
        format!("L(U(L(W))) differs from L(W) for W = {} over {}", w.display(fiber), g.vertex_name(fiber.base()))
    })
}

fn block_pool(fiber: &Fiber<'_>, depth: usize) -> Vec<FiberBlock> {
    let mut pool = Vec::new();
    for p in fiber.vertices(depth, TRUNCATE) {
        let labels = fiber.out_labels(&p, TRUNCATE);
        let k = labels.len().min(4);
        for mask in 0u32..(1 << k) {
            let excluded = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| labels[i]).collect();
            pool.push(BasicSet { apex: p.clone(), excluded });
        }
    }
    pool
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut inv_checks, mut set_checks) = (0usize, 0usize);
    for (name, g) in corpus() {
        let invariants = enumerate_invariants(&g, 0).map_err(|e| e.to_string())?.invariants;
        for base in g.vertices() {
            let fiber = Fiber::new(&g, base);
            let verts = fiber.vertices(4, TRUNCATE);
            for inv in &invariants {
                let w = open_set_of(&g, inv, base, 4, TRUNCATE);
                let l = invariant_of_open(&fiber, &w, verts.iter().cloned());
                let lift: BTreeMap<Path, _> = verts
                    .iter()
                    .filter(|p| inv.n.contains(&p.terminus()))
                    .map(|p| (p.clone(), inv.excluded(p.terminus()).clone()))
                    .collect();
                ensure(l == lift, || {
                    format!("{name}: L(U({})) over {} is not the lift", inv.display(&g), g.vertex_name(base))
                })?;
                let back = open_set_of_tree(&fiber, &l);
                ensure(boundary_equal(&fiber, &back, &w), || {
                    format!("{name}: U(L(U)) differs for {}", inv.display(&g))
                })?;
                inv_checks += 1;
            }

            let deep = block_pool(&fiber, 4);
            for b in &deep {
                check_open_set(&fiber, &g, &[b]).map_err(|e| format!("{name}: {e}"))?;
                set_checks += 1;
            }
            let shallow = block_pool(&fiber, 1);
            for i in 0..shallow.len() {
                for j in i..shallow.len() {
                    check_open_set(&fiber, &g, &[&shallow[i], &shallow[j]]).map_err(|e| format!("{name}: {e}"))?;
                    for k in j..shallow.len() {
                        check_open_set(&fiber, &g, &[&shallow[i], &shallow[j], &shallow[k]])
                            .map_err(|e| format!("{name}: {e}"))?;
                        set_checks += 1;
                    }
                }
            }
            for _ in 0..3000 {
                let picks: Vec<&FiberBlock> = (0..3).map(|_| deep.choose(&mut rng).unwrap()).collect();
                check_open_set(&fiber, &g, &picks).map_err(|e| format!("{name}: {e}"))?;
                set_checks += 1;
            }
        }
    }
    Ok(format!("{inv_checks} invariant round trips, {set_checks} open-set round trips"))
}

// 3. Groupoid laws and the cocycle.

fn random_arrow_to(rng: &mut ChaCha8Rng, g: &Graph, y: &Point) -> Arrow {
    let back = random_reduced_path(rng, g, y.origin(), 5, TRUNCATE);
    Arrow::new(back.inverse(), y.clone()).unwrap()
}

fn check_pair(g: &Graph, a: &Arrow, b: &Arrow, c: &Arrow) -> Result<(), String> {
    let show = |x: &Arrow| format!("({}, {})", x.alpha.display(g), x.y.display(g));
    let err = |what: &str| format!("{what} at {} {} {}", show(a), show(b), show(c));
    let ba = b.compose(g, a).map_err(|e| e.to_string())?;
    let cb = c.compose(g, b).map_err(|e| e.to_string())?;
    let left = c.compose(g, &ba).map_err(|e| e.to_string())?;
    let right = cb.compose(g, a).map_err(|e| e.to_string())?;
    ensure(left == right, || err("associativity"))?;
    ensure(a.inverse(g).compose(g, a).map_err(|e| e.to_string())? == Arrow::unit(a.y.clone()), || err("inverse"))?;

    let sf = standard_form(g, &a.alpha, &a.y).map_err(|e| e.to_string())?;
    ensure(sf.beta1.concat(&sf.beta2.inverse()).ok() == Some(a.alpha.clone()), || err("alpha = beta1 beta2^-1"))?;
    ensure(sf.x.act(g, &sf.beta2).ok().as_ref() == Some(&a.y), || err("y = beta2 x"))?;
    let (_, c1) = sf.beta1.concat_counting(&sf.beta2.inverse()).map_err(|e| e.to_string())?;
    let xw = sf.x.underline();
    let no_cancel = |b: &Path| b.last().is_none_or(|l| xw.letter(0) != Some(l.inverse()));
    ensure(c1 == 0 && no_cancel(&sf.beta1) && no_cancel(&sf.beta2), || err("cancellation in the standard form"))?;
    let again = standard_form(g, &sf.beta1.concat(&sf.beta2.inverse()).unwrap(), &sf.x.act(g, &sf.beta2).unwrap())
        .map_err(|e| e.to_string())?;
    ensure(again == sf, || err("standard form is not unique"))?;

    let cy = |x: &Arrow| cocycle(g, &x.alpha, &x.y).map_err(|e| e.to_string());
    ensure(cy(&Arrow::unit(a.y.clone()))? == 0, || err("cocycle on a unit"))?;
    ensure(cy(&a.inverse(g))? == -cy(a)?, || err("cocycle on an inverse"))?;
    ensure(cy(&ba)? == cy(a)? + cy(b)?, || err("cocycle additivity"))?;
    Ok(())
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut total = 0;
    for (name, g) in corpus() {
        let cycles = cycle_paths(&g);
        let vs: Vec<VertexId> = g.vertices().collect();
        for _ in 0..10_000 {
            let v = *vs.choose(&mut rng).unwrap();
            let y = random_point(&mut rng, &g, &cycles, v, TRUNCATE);
            let a = random_arrow_to(&mut rng, &g, &y);
            let b = random_arrow_to(&mut rng, &g, &a.range(&g));
            let c = random_arrow_to(&mut rng, &g, &b.range(&g));
            check_pair(&g, &a, &b, &c).map_err(|e| format!("{name}: {e}"))?;
            total += 1;
        }
    }
    Ok(format!("{total} composable triples"))
}

// 4. Invariant enumeration.

fn criterion_4() -> Outcome {
    for (name, want) in [("edge", 2), ("two-sinks", 4), ("o2", 2), ("oinf", 2), ("loop", 2)] {
        let got = enumerate_invariants(&corpus_graph(name), 0).map_err(|e| e.to_string())?.invariants.len();
        ensure(got == want, || format!("{name}: {got} invariants, expected {want}"))?;
    }
    let lp = corpus_graph("loop");
    ensure(components(&lp).terminal().next().is_some(), || "loop: no caveat, but its cycle has no exit".into())?;
    let mut compared = 0;
    for (name, g) in corpus() {
        let mut fast = enumerate_invariants(&g, 0).map_err(|e| e.to_string())?.invariants;
        fast.sort();
        let slow = brute_force_invariants(&g, 1);
        ensure(fast == slow, || {
            format!("{name}: enumeration gives {} invariants, brute force {}", fast.len(), slow.len())
        })?;
        compared += 1;
    }
    Ok(format!("named counts reproduce; {compared} corpus graphs agree with brute force"))
}

// 5. Structure verdicts.

pub fn implications(r: &StructureReport) -> bool {
    let imp = |a: bool, b: bool| !a || b;
    imp(r.is_purely_infinite_simple.holds, r.is_simple.holds)
        && imp(r.is_simple.holds, r.is_cofinal.holds && r.is_essentially_free.holds)
        && imp(r.is_essentially_principal.holds, r.is_essentially_free.holds)
        && imp(r.is_af.holds, r.is_essentially_principal.holds)
}

fn criterion_5() -> Outcome {
    let report = |n: &str| analyze(&corpus_graph(n), 10_000).map_err(|e| e.to_string());
    let o2 = report("o2")?;
    ensure(o2.is_simple.holds && o2.is_purely_infinite_simple.holds, || "o2 is not simple and purely infinite".into())?;
    let edge = report("edge")?;
    ensure(edge.is_simple.holds && !edge.is_purely_infinite_simple.holds && edge.is_af.holds, || {
        "edge verdicts".into()
    })?;
    ensure(!report("loop")?.is_essentially_free.holds, || "loop is essentially free".into())?;
    let trans = report("trans")?;
    ensure(trans.is_essentially_free.holds && !trans.is_essentially_principal.holds, || "trans verdicts".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..1000 {
        let g = random_graph(&mut rng, 8, true);
        let r = analyze(&g, 100_000).map_err(|e| format!("random graph {i}: {e}"))?;
        ensure(implications(&r), || format!("random graph {i}: implications fail"))?;
        ensure(r.is_af.holds == !has_cycle(&g), || {
            format!("random graph {i}: AF verdict disagrees with cycle search")
        })?;
        ensure(r.is_essentially_free.holds == !has_cycle_without_exit(&g), || {
            format!("random graph {i}: essential freeness disagrees with exit search")
        })?;
    }
    Ok("named verdicts hold; lattice and oracles agree on 1000 random graphs".into())
}

// 6. The path-space representation.

fn finite_acyclic(g: &Graph) -> bool {
    longest_path(g).is_some() && !g.bundles().any(|(_, b)| b.multiplicity.is_omega())
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut graphs = 0;
    for (name, g) in corpus() {
        if !finite_acyclic(&g) {
            continue;
        }
        graphs += 1;
        let sigma = g.sigma();
        let dim = |s: &BTreeSet<VertexId>, family| -> Result<usize, String> {
            let basis = build_basis(&g, s, None, 0).map_err(|e| e.to_string())?;
            let report = verify_relations(&g, &basis, family);
            ensure(report.all_pass(), || format!("{name}: {family:?} relations fail: {report:?}"))?;
            algebra_dimension(&g, &basis).map_err(|e| e.to_string())
        };
        let ck = dim(&sigma, Family::Ck)?;
        let sinks_oracle: u64 =
            g.vertices().filter(|v| !sigma.contains(v)).map(|v| paths_into_count(&g, v).pow(2)).sum();
        ensure(ck as u64 == sinks_oracle, || format!("{name}: ck dimension {ck}, path count gives {sinks_oracle}"))?;
        let mut subsets = vec![BTreeSet::new()];
        for _ in 0..4 {
            subsets.push(sigma.iter().copied().filter(|_| rng.gen_bool(0.5)).collect());
        }
        for s in subsets {
            let family = if s.is_empty() { Family::Toeplitz } else { Family::ToeplitzS };
            let t = dim(&s, family)?;
            let gap: u64 = sigma.difference(&s).map(|&u| paths_into_count(&g, u).pow(2)).sum();
            ensure((t - ck) as u64 == gap, || {
                format!("{name}: rank identity fails for S = {s:?}: {t} - {ck} != {gap}")
            })?;
        }
        match name.as_str() {
            "edge" => ensure(ck == 4 && dim(&BTreeSet::new(), Family::Toeplitz)? == 5, || "edge dimensions".into())?,
            "two-sinks" => ensure(ck == 8, || "two-sinks dimension".into())?,
            _ => {}
        }
    }
    Ok(format!("relations, dimensions and rank identity on {graphs} acyclic corpus graphs"))
}

// 7. Simplicity against the invariant lattice, and cycles in quotients.

fn quotient_has_terminal_cycle(g: &Graph) -> Result<bool, String> {
    for inv in enumerate_invariants(g, 0).map_err(|e| e.to_string())?.invariants {
        let q = quotient_data(g, &inv).map_err(|e| e.to_string())?;
        if components(&q.graph).terminal().next().is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut graphs: Vec<(String, Graph)> = corpus();
    for i in 0..300 {
        graphs.push((format!("random graph {i}"), random_graph(&mut rng, 6, true)));
    }
    let mut lattice_checked = 0;
    for (name, g) in &graphs {
        let comps = components(g);
        let terminal = comps.terminal().next().is_some();
        let transitory = comps.transitory().next().is_some();
        ensure(quotient_has_terminal_cycle(g)? == (terminal || transitory), || {
            format!("{name}: a quotient has a terminal cycle iff the graph has a terminal or transitory one, fails")
        })?;
        if !terminal && !transitory {
            let simple = analyze(g, 100_000).map_err(|e| e.to_string())?.is_simple.holds;
            let count = enumerate_invariants(g, 0).map_err(|e| e.to_string())?.invariants.len();
            ensure(simple == (count == 2), || format!("{name}: simple = {simple} but {count} invariants"))?;
            lattice_checked += 1;
        }
    }
    Ok(format!("{} graphs for quotient cycles, {lattice_checked} for simplicity", graphs.len()))
}

// 8. Chains of subgraphs.

fn criterion_8() -> Outcome {
    let mut chains = 0;
    for (name, g) in corpus() {
        let sigma: BTreeSet<VertexId> = g.vertices().filter(|&v| g.class(v) == VertexClass::Sigma).collect();
        for (k, chain) in standard_chains(&g).into_iter().enumerate() {
            let r = limit_check(&chain, &g, &sigma, 2, TRUNCATE).map_err(|e| format!("{name} chain {k}: {e}"))?;
            ensure(r.all_hold(), || format!("{name} chain {k}: {r:?}"))?;
            ensure(r.dimensions.is_some() == finite_acyclic(&g), || {
                format!("{name} chain {k}: dimensions not checked")
            })?;
            chains += 1;
        }
    }
    Ok(format!("{chains} chains coherent"))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("ring calculus matches vertex sets", criterion_1),
        ("invariants and open sets round trip", criterion_2),
        ("groupoid laws, standard forms, cocycle", criterion_3),
        ("invariant enumeration", criterion_4),
        ("structure verdicts", criterion_5),
        ("representation relations and dimensions", criterion_6),
        ("simplicity and quotient cycles via invariants", criterion_7),
        ("inductive limit coherence", criterion_8),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match std::panic::catch_unwind(f) {
            Ok(Ok(d)) => ("PASS", d),
            Ok(Err(d)) => ("FAIL", d),
            Err(_) => ("FAIL", "panicked".to_string()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} criterion {}: {title} ({detail}) [{:.1}s]", i + 1, start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
}

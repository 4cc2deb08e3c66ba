use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path as FsPath, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use graphalg::cover::{af_block_enumerate, af_matrix_units, standard_form, Fiber};
use graphalg::fock::{algebra_dimension, build_basis, verify_relations, Family, Status, DEFAULT_OMEGA_TRUNCATE};
use graphalg::invariants::{enumerate_invariants, hasse_edges, quotient_data, Invariant};
use graphalg::limits::limit_check;
use graphalg::setexpr::{evaluate, Value};
use graphalg::structure::{
    analyze, components, free_point_from, toeplitz_ideal_report, Cardinality, FreePoint, StructureReport,
};
use graphalg::tree::FiniteTree;
use graphalg::{parse_graph, Error, Graph, VertexId};
use serde::Serialize;

use crate::corpus;
use crate::reports::*;
use crate::Outcome;

#[derive(Parser, Debug)]
#[command(name = "graphalg", version, about = "Combinatorial analysis of graph algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Path depth: basis depth for rep-verify, sample depth for limit-check.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Maximum number of cycles to enumerate.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub cap: usize,
    /// How many instances of each omega bundle to materialize.
    #[arg(long, global = true, default_value_t = DEFAULT_OMEGA_TRUNCATE)]
    pub omega_truncate: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Cycles and structural verdicts.
    Analyze { graph: PathBuf },
    /// Invariants, their order and quotient data.
    Ideals {
        graph: PathBuf,
        /// Emit the Hasse diagram in DOT.
        #[arg(long)]
        dot: bool,
        /// Omega instances allowed in exclusion sets when probing for
        /// infinite families.
        #[arg(long, default_value_t = 0)]
        omega_bound: u32,
    },
    /// Build the path-space representation and check its relations.
    RepVerify {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Ck)]
        mode: Mode,
        /// Comma-separated vertices where equality is imposed. Defaults to
        /// all of Sigma for `ck` and to nothing for `toeplitz`.
        #[arg(long = "S", value_name = "VERTICES")]
        s: Option<String>,
    },
    /// Evaluate a set expression on a tree or on a cover fiber.
    Setcalc {
        /// A graph file describing a tree (all multiplicities 1).
        #[arg(long, conflicts_with_all = ["graph", "fiber"])]
        tree: Option<PathBuf>,
        #[arg(long, requires = "fiber")]
        graph: Option<PathBuf>,
        /// Base vertex of the fiber.
        #[arg(long, requires = "graph")]
        fiber: Option<String>,
        expr: String,
    },
    /// Standard form of the arrow (alpha, y).
    StandardForm { graph: PathBuf, alpha: String, point: String },
    /// The length cocycle of the arrow (alpha, y).
    Cocycle { graph: PathBuf, alpha: String, point: String },
    /// Blocks of the AF core built from a subgraph, for paths of length
    /// up to `--depth` (default 2).
    AfBlocks {
        graph: PathBuf,
        /// The finite subgraph F.
        #[arg(long, alias = "sub")]
        subgraph: PathBuf,
        /// Also list the matrix units with this source point.
        #[arg(long)]
        point: Option<String>,
    },
    /// Coherence along a chain of subgraphs ending in the graph.
    LimitCheck {
        graph: PathBuf,
        /// Subgraph files in increasing order.
        #[arg(long = "stage")]
        stages: Vec<PathBuf>,
        #[arg(long = "S", value_name = "VERTICES")]
        s: Option<String>,
    },
    /// Recompute the corpus and compare with its expected results.
    CorpusRun {
        #[arg(default_value = "corpus")]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Ck,
    Toeplitz,
}

/// A failure carrying its exit code.
pub struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CycleCapExceeded(_) | Error::TooLarge(_) | Error::Overflow(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure { code: 1, message: message.into() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::usage(message)
}

type CmdResult = Result<Outcome, Failure>;

pub fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let result = match &cli.command {
        Command::Analyze { graph } => cmd_analyze(g, graph),
        Command::Ideals { graph, dot, omega_bound } => cmd_ideals(g, graph, *dot, *omega_bound),
        Command::RepVerify { graph, mode, s } => cmd_rep_verify(g, graph, *mode, s.as_deref()),
        Command::Setcalc { tree, graph, fiber, expr } => {
            cmd_setcalc(g, tree.as_deref(), graph.as_deref(), fiber.as_deref(), expr)
        }
        Command::StandardForm { graph, alpha, point } => cmd_standard_form(g, graph, alpha, point),
        Command::Cocycle { graph, alpha, point } => cmd_cocycle(g, graph, alpha, point),
        Command::AfBlocks { graph, subgraph, point } => {
            cmd_af_blocks(g, graph, subgraph, g.depth.unwrap_or(2), point.as_deref())
        }
        Command::LimitCheck { graph, stages, s } => cmd_limit_check(g, graph, stages, s.as_deref()),
        Command::CorpusRun { dir } => corpus::run(g, dir),
    };
    result.unwrap_or_else(|f| Outcome::fail(f.code, String::new(), format!("error: {}\n", f.message)))
}

pub fn load_graph(path: &FsPath) -> Result<Graph, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn vertex_list(g: &Graph, text: &str) -> Result<BTreeSet<VertexId>, Failure> {
    Ok(g.parse_vertex_set(text)?)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn names(g: &Graph, set: impl IntoIterator<Item = VertexId>) -> Vec<String> {
    set.into_iter().map(|v| g.vertex_name(v).to_string()).collect()
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// The implications between verdicts that hold for every graph.
pub fn implications_hold(r: &StructureReport) -> bool {
    let imp = |a: bool, b: bool| !a || b;
    imp(r.is_purely_infinite_simple.holds, r.is_simple.holds)
        && imp(r.is_simple.holds, r.is_cofinal.holds && r.is_essentially_free.holds)
        && imp(r.is_essentially_principal.holds, r.is_essentially_free.holds)
        && imp(r.is_af.holds, r.is_essentially_principal.holds)
}

pub fn analyze_out(g: &Graph, cap: usize) -> Result<AnalyzeOut, Failure> {
    let report = analyze(g, cap)?;
    let free_points = if report.is_essentially_free.holds {
        let mut m = BTreeMap::new();
        for u in g.vertices() {
            let text = match free_point_from(g, u)? {
                FreePoint::Finite(p) => p.display(g),
                FreePoint::Aperiodic(w) => format!("aperiodic {}...", w.prefix(g, 12).display(g)),
            };
            m.insert(g.vertex_name(u).to_string(), text);
        }
        Some(m)
    } else {
        None
    };
    let toeplitz_ideal = toeplitz_ideal_report(g, &BTreeSet::new())?
        .into_iter()
        .map(|(u, c)| PathCount {
            vertex: g.vertex_name(u).to_string(),
            paths: match c {
                Cardinality::Finite(k) => k.to_string(),
                Cardinality::Omega => "omega".into(),
            },
        })
        .collect();
    Ok(AnalyzeOut { implications_hold: implications_hold(&report), report, free_points, toeplitz_ideal })
}

fn cmd_analyze(gl: &Global, path: &FsPath) -> CmdResult {
    let g = load_graph(path)?;
    let out = analyze_out(&g, gl.cap)?;
    let text = if gl.json {
        to_json(&out)
    } else {
        let r = &out.report;
        let mut s = String::new();
        writeln!(s, "graph {}: {} vertices, {} bundles", path.display(), g.vertex_count(), g.bundle_count()).unwrap();
        writeln!(s, "cycles: {}", r.cycles.len()).unwrap();
        for c in &r.cycles {
            let exit = c.exit.as_deref().map(|e| format!(", exit {e}")).unwrap_or_default();
            writeln!(s, "  {} ({:?}, {} copies{exit})", c.cycle, c.kind, c.instances).unwrap();
        }
        for (name, v) in [
            ("AF", &r.is_af),
            ("locally contractive", &r.is_locally_contractive),
            ("cofinal", &r.is_cofinal),
            ("essentially free", &r.is_essentially_free),
            ("essentially principal", &r.is_essentially_principal),
            ("simple", &r.is_simple),
            ("purely infinite simple", &r.is_purely_infinite_simple),
        ] {
            let w = v.witness.as_deref().map(|w| format!(" [{w}]")).unwrap_or_default();
            writeln!(s, "{name:<24} {:<4}{w}  ({})", yes(v.holds), v.criterion).unwrap();
        }
        if let Some(fp) = &out.free_points {
            for (u, p) in fp {
                writeln!(s, "free point over {u}: {p}").unwrap();
            }
        }
        for pc in &out.toeplitz_ideal {
            writeln!(s, "Toeplitz ideal summand at {}: {} paths", pc.vertex, pc.paths).unwrap();
        }
        s
    };
    if out.implications_hold {
        Ok(Outcome::ok(text))
    } else {
        Ok(Outcome::fail(3, text, "error: verdict implications violated\n".into()))
    }
}

fn quotient_out(g: &Graph, inv: &Invariant) -> Result<QuotientOut, Failure> {
    let q = quotient_data(g, inv)?;
    let has_terminal_cycle = components(&q.graph).terminal().next().is_some();
    Ok(QuotientOut {
        r: names(g, q.r.iter().copied()),
        vertices: names(&q.graph, q.graph.vertices()),
        edges: q.graph.bundles().map(|(_, b)| b.name.clone()).collect(),
        s: names(&q.graph, q.s.iter().copied()),
        has_terminal_cycle,
    })
}

pub fn ideals_out(g: &Graph, omega_bound: u32) -> Result<IdealsOut, Failure> {
    let e = enumerate_invariants(g, omega_bound)?;
    let comps = components(g);
    let terminal = comps.terminal().next().is_some();
    let transitory = comps.transitory().next().is_some();
    let correspondence = !terminal && !transitory;
    let caveat = (!correspondence).then(|| {
        "the graph has terminal or transitory cycles, so invariants describe the gauge-invariant ideals only; \
         other ideals exist"
            .to_string()
    });
    let mut invariants = Vec::new();
    for inv in &e.invariants {
        let f = inv
            .f
            .iter()
            .map(|(&u, fu)| (g.vertex_name(u).to_string(), fu.iter().map(|&x| g.instance_name(x)).collect()))
            .collect();
        invariants.push(InvariantOut { n: names(g, inv.n.iter().copied()), f, quotient: quotient_out(g, inv)? });
    }
    Ok(IdealsOut {
        hasse: hasse_edges(&e.invariants),
        invariants,
        ideal_correspondence: correspondence,
        caveat,
        infinite_families: e
            .infinite_families
            .iter()
            .map(|x| {
                format!(
                    "invariant {} at {}: bundle {}",
                    x.invariant,
                    g.vertex_name(x.vertex),
                    g.bundle_data(x.bundle).name
                )
            })
            .collect(),
        omega_targets: e
            .omega_targets
            .iter()
            .map(|x| {
                format!("invariant {} at {}: edge {}", x.invariant, g.vertex_name(x.vertex), g.instance_name(x.edge))
            })
            .collect(),
    })
}

fn invariant_label(inv: &InvariantOut) -> String {
    let parts: Vec<String> = inv
        .n
        .iter()
        .map(|u| match inv.f.get(u) {
            Some(f) => format!("{u}[{}]", f.join(",")),
            None => u.clone(),
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

fn cmd_ideals(gl: &Global, path: &FsPath, dot: bool, omega_bound: u32) -> CmdResult {
    let g = load_graph(path)?;
    let out = ideals_out(&g, omega_bound)?;
    let text = if dot {
        let mut s = String::from("digraph invariants {\n  rankdir=BT;\n");
        for (i, inv) in out.invariants.iter().enumerate() {
            writeln!(s, "  n{i} [label=\"{}\"];", invariant_label(inv)).unwrap();
        }
        for (a, b) in &out.hasse {
            writeln!(s, "  n{a} -> n{b};").unwrap();
        }
        s.push_str("}\n");
        s
    } else if gl.json {
        to_json(&out)
    } else {
        let mut s = String::new();
        writeln!(s, "{} invariants", out.invariants.len()).unwrap();
        for (i, inv) in out.invariants.iter().enumerate() {
            let q = &inv.quotient;
            writeln!(
                s,
                "  [{i}] {}  quotient: vertices {{{}}}, edges {{{}}}, S {{{}}}",
                invariant_label(inv),
                q.vertices.join(", "),
                q.edges.join(", "),
                q.s.join(", ")
            )
            .unwrap();
        }
        let hasse: Vec<String> = out.hasse.iter().map(|(a, b)| format!("{a}<{b}")).collect();
        writeln!(s, "covering pairs: {}", hasse.join(" ")).unwrap();
        writeln!(s, "invariants match ideals: {}", yes(out.ideal_correspondence)).unwrap();
        if let Some(c) = &out.caveat {
            writeln!(s, "caveat: {c}").unwrap();
        }
        for f in out.infinite_families.iter().chain(&out.omega_targets) {
            writeln!(s, "flag: {f}").unwrap();
        }
        s
    };
    Ok(Outcome::ok(text))
}

pub fn rep_out(g: &Graph, mode: Mode, s: Option<&str>, depth: Option<usize>, truncate: u32) -> Result<RepOut, Failure> {
    let s = match s {
        Some(text) => vertex_list(g, text)?,
        None if mode == Mode::Ck => g.sigma(),
        None => BTreeSet::new(),
    };
    let family = if mode == Mode::Ck && s == g.sigma() {
        Family::Ck
    } else if s.is_empty() {
        Family::Toeplitz
    } else {
        Family::ToeplitzS
    };
    let basis = build_basis(g, &s, depth, truncate)?;
    let report = verify_relations(g, &basis, family);
    let dimension = if basis.exact { Some(algebra_dimension(g, &basis)?) } else { None };
    let names = basis.paths().iter().map(|p| p.display(g)).collect();
    Ok(RepOut { report, basis: names, dimension })
}

fn cmd_rep_verify(gl: &Global, path: &FsPath, mode: Mode, s: Option<&str>) -> CmdResult {
    let g = load_graph(path)?;
    let out = rep_out(&g, mode, s, gl.depth, gl.omega_truncate)?;
    let text = if gl.json {
        to_json(&out)
    } else {
        let r = &out.report;
        let mut t = String::new();
        writeln!(t, "relations: {:?}; basis of {} paths, {}", r.family, r.basis_size, r.scope).unwrap();
        for c in &r.relations {
            let w = c.witness.as_deref().map(|w| format!("  ({w})")).unwrap_or_default();
            writeln!(t, "  {:<7} {}{w}", format!("{:?}", c.status).to_lowercase(), c.name).unwrap();
        }
        for gap in &r.gaps {
            writeln!(t, "  strict at {}: P_u - sum S_f S_f* has rank {}", gap.vertex, gap.rank).unwrap();
        }
        match out.dimension {
            Some(d) => writeln!(t, "dimension: {d}").unwrap(),
            None => writeln!(t, "dimension: not computed (basis is truncated)").unwrap(),
        }
        t
    };
    if out.report.relations.iter().any(|c| c.status == Status::Fail) {
        Ok(Outcome::fail(3, text, "error: a relation failed\n".into()))
    } else {
        Ok(Outcome::ok(text))
    }
}

fn set_out<V: Clone + Ord + std::hash::Hash, L: Clone + Ord, T>(tree: &T, v: Value<V, L>) -> SetOut
where
    T: graphalg::tree::DirectedTree<Vertex = V, Label = L>,
{
    let kind = match v {
        Value::Set(_) => "set",
        Value::Bool(_) => "bool",
    };
    SetOut { kind: kind.into(), value: v.display(tree) }
}

fn cmd_setcalc(
    gl: &Global,
    tree: Option<&FsPath>,
    graph: Option<&FsPath>,
    fiber: Option<&str>,
    expr: &str,
) -> CmdResult {
    let out = match (tree, graph, fiber) {
        (Some(t), _, _) => {
            let t = FiniteTree::from_graph(&load_graph(t)?)?;
            set_out(&t, evaluate(&t, expr)?)
        }
        (None, Some(gp), Some(base)) => {
            let g = load_graph(gp)?;
            let f = Fiber::new(&g, g.vertex(base)?);
            set_out(&f, evaluate(&f, expr)?)
        }
        _ => return Err(usage("give --tree FILE, or --graph FILE with --fiber VERTEX")),
    };
    Ok(Outcome::ok(if gl.json { to_json(&out) } else { format!("{}\n", out.value) }))
}

fn standard_form_out(g: &Graph, alpha: &str, point: &str) -> Result<StandardFormOut, Failure> {
    let a = g.parse_path(alpha)?;
    let y = g.parse_point(point)?;
    let sf = standard_form(g, &a, &y)?;
    Ok(StandardFormOut {
        beta1: sf.beta1.display(g),
        beta2: sf.beta2.display(g),
        x: sf.x.display(g),
        cocycle: sf.cocycle(),
    })
}

fn cmd_standard_form(gl: &Global, path: &FsPath, alpha: &str, point: &str) -> CmdResult {
    let g = load_graph(path)?;
    let out = standard_form_out(&g, alpha, point)?;
    Ok(Outcome::ok(if gl.json {
        to_json(&out)
    } else {
        format!("beta1 = {}\nbeta2 = {}\nx = {}\ncocycle = {}\n", out.beta1, out.beta2, out.x, out.cocycle)
    }))
}

fn cmd_cocycle(gl: &Global, path: &FsPath, alpha: &str, point: &str) -> CmdResult {
    let g = load_graph(path)?;
    let out = standard_form_out(&g, alpha, point)?;
    Ok(Outcome::ok(if gl.json { to_json(&out.cocycle) } else { format!("{}\n", out.cocycle) }))
}

fn cmd_af_blocks(gl: &Global, path: &FsPath, sub: &FsPath, n: usize, point: Option<&str>) -> CmdResult {
    let g = load_graph(path)?;
    let f = load_graph(sub)?;
    let fiber_of = |b: &graphalg::Path| Fiber::new(&g, b.terminus());
    let blocks = af_block_enumerate(&g, &f, n, gl.omega_truncate)?
        .into_iter()
        .map(|b| BlockOut {
            beta1: b.beta1.display(&g),
            beta2: b.beta2.display(&g),
            region: b.region.display(&fiber_of(&b.beta1)),
        })
        .collect();
    let matrix_units = match point {
        Some(p) => {
            let y = g.parse_point(p)?;
            let units = af_matrix_units(&g, &f, n, &y, gl.omega_truncate)?;
            Some(units.into_iter().map(|(a, b)| (a.display(&g), b.display(&g))).collect())
        }
        None => None,
    };
    let out = AfBlocksOut { blocks, matrix_units };
    let text = if gl.json {
        to_json(&out)
    } else {
        let mut s = String::new();
        writeln!(s, "{} blocks", out.blocks.len()).unwrap();
        for b in &out.blocks {
            writeln!(s, "  ({}, {}) on {}", b.beta1, b.beta2, b.region).unwrap();
        }
        if let Some(units) = &out.matrix_units {
            writeln!(s, "{} matrix units", units.len()).unwrap();
            for (a, b) in units {
                writeln!(s, "  ({a}, {b})").unwrap();
            }
        }
        s
    };
    Ok(Outcome::ok(text))
}

fn cmd_limit_check(gl: &Global, path: &FsPath, stage_files: &[PathBuf], s: Option<&str>) -> CmdResult {
    let g = load_graph(path)?;
    let mut stages = stage_files.iter().map(|p| load_graph(p)).collect::<Result<Vec<_>, _>>()?;
    if stages.last().is_none_or(|last| last != &g) {
        stages.push(g.clone());
    }
    let s = match s {
        Some(text) => vertex_list(&g, text)?,
        None => g.sigma(),
    };
    let report = limit_check(&stages, &g, &s, gl.depth.unwrap_or(2), gl.omega_truncate)?;
    let ok = report.all_hold();
    let out = LimitOut { stages: stages.len(), report };
    let text = if gl.json {
        to_json(&out)
    } else {
        let r = &out.report;
        let mut t = String::new();
        writeln!(t, "{} stages", out.stages).unwrap();
        for (i, si) in r.induced_s.iter().enumerate() {
            writeln!(t, "  S_{} = {{{}}}", i + 1, si.join(", ")).unwrap();
        }
        for (name, c) in [
            ("induced S composes", &r.composition),
            ("kernels match", &r.kernel),
            ("pushforward is a homomorphism", &r.pushforward),
        ] {
            let w = c.witness.as_deref().map(|w| format!(" ({w})")).unwrap_or_default();
            writeln!(t, "{name}: {} on {} samples{w}", yes(c.holds), c.samples).unwrap();
        }
        if let (Some(d), Some(m)) = (&r.dimensions, r.monotone) {
            let d: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            writeln!(t, "dimensions: {} (monotone: {})", d.join(" <= "), yes(m)).unwrap();
        }
        t
    };
    if ok {
        Ok(Outcome::ok(text))
    } else {
        Ok(Outcome::fail(3, text, "error: chain coherence failed\n".into()))
    }
}

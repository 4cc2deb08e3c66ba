//! The corpus runner: recomputes every graph listed in `expected.toml` and
//! compares against the recorded answers.

use std::fmt::Write as _;
use std::path::Path as FsPath;

use serde::Deserialize;

use crate::commands::{analyze_out, ideals_out, load_graph, rep_out, Failure, Global, Mode};
use crate::reports::CorpusLine;
use crate::Outcome;

#[derive(Debug, Deserialize)]
pub struct Manifest {
    pub graph: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
pub struct Entry {
    pub name: String,
    pub file: String,
    pub invariants: usize,
    pub ideal_correspondence: bool,
    pub dim_ck: Option<usize>,
    pub dim_toeplitz: Option<usize>,
    pub verdicts: Verdicts,
}

#[derive(Debug, Deserialize)]
pub struct Verdicts {
    pub af: bool,
    pub locally_contractive: bool,
    pub cofinal: bool,
    pub essentially_free: bool,
    pub essentially_principal: bool,
    pub simple: bool,
    pub purely_infinite_simple: bool,
}

pub fn load_manifest(dir: &FsPath) -> Result<Manifest, Failure> {
    let path = dir.join("expected.toml");
    let text = std::fs::read_to_string(&path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn check<T: PartialEq + std::fmt::Debug>(out: &mut Vec<String>, what: &str, expected: T, got: T) {
    if expected != got {
        out.push(format!("{what}: expected {expected:?}, got {got:?}"));
    }
}

pub fn check_entry(gl: &Global, dir: &FsPath, entry: &Entry) -> Result<CorpusLine, Failure> {
    let g = load_graph(&dir.join(&entry.file))?;
    let mut m = Vec::new();
    let a = analyze_out(&g, gl.cap)?;
    let r = &a.report;
    let v = &entry.verdicts;
    check(&mut m, "af", v.af, r.is_af.holds);
    check(&mut m, "locally_contractive", v.locally_contractive, r.is_locally_contractive.holds);
    check(&mut m, "cofinal", v.cofinal, r.is_cofinal.holds);
    check(&mut m, "essentially_free", v.essentially_free, r.is_essentially_free.holds);
    check(&mut m, "essentially_principal", v.essentially_principal, r.is_essentially_principal.holds);
    check(&mut m, "simple", v.simple, r.is_simple.holds);
    check(&mut m, "purely_infinite_simple", v.purely_infinite_simple, r.is_purely_infinite_simple.holds);
    check(&mut m, "implications", true, a.implications_hold);

    let ideals = ideals_out(&g, 0)?;
    check(&mut m, "invariants", entry.invariants, ideals.invariants.len());
    check(&mut m, "ideal_correspondence", entry.ideal_correspondence, ideals.ideal_correspondence);

    for (what, mode, expected) in
        [("dim_ck", Mode::Ck, entry.dim_ck), ("dim_toeplitz", Mode::Toeplitz, entry.dim_toeplitz)]
    {
        if let Some(d) = expected {
            let rep = rep_out(&g, mode, None, None, gl.omega_truncate)?;
            check(&mut m, what, Some(d), rep.dimension);
            check(&mut m, &format!("{what} relations"), true, rep.report.all_pass());
        }
    }
    Ok(CorpusLine { name: entry.name.clone(), pass: m.is_empty(), mismatches: m })
}

pub fn run(gl: &Global, dir: &FsPath) -> Result<Outcome, Failure> {
    let manifest = load_manifest(dir)?;
    let lines = manifest.graph.iter().map(|e| check_entry(gl, dir, e)).collect::<Result<Vec<_>, _>>()?;
    let all = lines.iter().all(|l| l.pass);
    let text = if gl.json {
        let mut s = serde_json::to_string_pretty(&lines).expect("corpus lines serialize");
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        for l in &lines {
            writeln!(s, "{} {}", if l.pass { "PASS" } else { "FAIL" }, l.name).unwrap();
            for x in &l.mismatches {
                writeln!(s, "    {x}").unwrap();
            }
        }
        let passed = lines.iter().filter(|l| l.pass).count();
        writeln!(s, "{passed}/{} graphs match", lines.len()).unwrap();
        s
    };
    if all {
        Ok(Outcome::ok(text))
    } else {
        Ok(Outcome::fail(3, text, "error: corpus mismatch\n".into()))
    }
}

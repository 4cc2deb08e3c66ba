//! JSON shapes of the command outputs. Every type here round-trips through
//! serde_json unchanged.

use std::collections::BTreeMap;

use graphalg::fock::RelationReport;
use graphalg::limits::ChainReport;
use graphalg::structure::StructureReport;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PathCount {
    pub vertex: String,
    /// A decimal count, or `omega`.
    pub paths: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalyzeOut {
    #[serde(flatten)]
    pub report: StructureReport,
    /// The implications between verdicts that must always hold.
    pub implications_hold: bool,
    /// A boundary point with trivial isotropy over each vertex; absent when
    /// there is a terminal cycle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub free_points: Option<BTreeMap<String, String>>,
    /// Dimensions of the summands of the Toeplitz ideal for `S = ∅`.
    pub toeplitz_ideal: Vec<PathCount>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuotientOut {
    pub r: Vec<String>,
    pub vertices: Vec<String>,
    pub edges: Vec<String>,
    pub s: Vec<String>,
    pub has_terminal_cycle: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InvariantOut {
    pub n: Vec<String>,
    pub f: BTreeMap<String, Vec<String>>,
    pub quotient: QuotientOut,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IdealsOut {
    pub invariants: Vec<InvariantOut>,
    pub hasse: Vec<(usize, usize)>,
    /// Whether the invariants are known to match the ideals: the graph has
    /// no terminal and no transitory cycles.
    pub ideal_correspondence: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub caveat: Option<String>,
    pub infinite_families: Vec<String>,
    pub omega_targets: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RepOut {
    #[serde(flatten)]
    pub report: RelationReport,
    pub basis: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SetOut {
    pub kind: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StandardFormOut {
    pub beta1: String,
    pub beta2: String,
    pub x: String,
    pub cocycle: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockOut {
    pub beta1: String,
    pub beta2: String,
    pub region: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AfBlocksOut {
    pub blocks: Vec<BlockOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_units: Option<Vec<(String, String)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LimitOut {
    #[serde(flatten)]
    pub report: ChainReport,
    pub stages: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorpusLine {
    pub name: String,
    pub pass: bool,
    pub mismatches: Vec<String>,
}

//! Report structures shared by the subcommands, and their text rendering.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::functional::{FunctionalReport, Method, ModalEntry, PbhVerdict};
use crate::placement::{BoundCertificate, PlacementKind};
use crate::structural::GenericSample;

pub const TOOL_NAME: &str = "funcobs";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub tolerance: f64,
    pub margin: f64,
    pub result: CommandResult,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CommandResult {
    CheckFo(FoResult),
    CheckSfo(SfoResult),
    Place(PlaceResult),
    DesignMin(DesignResult),
    CheckTargetCtrl(TargetResult),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FoResult {
    pub functionally_observable: bool,
    pub functionally_detectable: bool,
    pub rank_o: usize,
    pub rank_of: usize,
    pub observability_method: Method,
    pub detectability_method: Method,
    pub diagonalizable: bool,
    pub eigenvector_condition: Option<f64>,
    pub modal_table: Option<Vec<ModalEntry>>,
    pub modal_consistent: Option<bool>,
    pub pbh: Vec<PbhVerdict>,
    pub notes: Vec<String>,
}

impl From<FunctionalReport> for FoResult {
    fn from(r: FunctionalReport) -> Self {
        let mut notes = Vec::new();
        if !r.diagonalizable {
            notes.push(
                "A is not diagonalizable: the eigenvalue-wise (PBH) test is necessary-only and no modal table is \
                 produced"
                    .to_string(),
            );
        }
        if r.modal_consistent == Some(false) {
            notes.push("modal table disagrees with the rank-identity verdicts; inspect eigenvector conditioning".into());
        }
        Self {
            functionally_observable: r.functionally_observable,
            functionally_detectable: r.functionally_detectable,
            rank_o: r.rank_o,
            rank_of: r.rank_of,
            observability_method: r.observability_method,
            detectability_method: r.detectability_method,
            diagonalizable: r.diagonalizable,
            eigenvector_condition: r.eigenvector_condition,
            modal_table: r.modal_table,
            modal_consistent: r.modal_consistent,
            pbh: r.pbh,
            notes,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateRow {
    /// 1-based.
    pub state: usize,
    pub reached_by_every_max_family: bool,
    pub output_reachable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SfoOracle {
    /// Prime-field rank of `O(A, C)` for one random realization.
    pub field_rank_o: usize,
    /// Prime-field rank of `O(A, [C; F])` for the same realization.
    pub field_rank_of: usize,
    pub agrees: bool,
    pub sample: GenericSample,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SfoResult {
    pub sfo: bool,
    pub generic_rank_o: usize,
    pub generic_rank_of: usize,
    pub per_functional_state: Vec<StateRow>,
    pub fast_path_used: bool,
    pub oracle: Option<SfoOracle>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GainRow {
    /// 1-based.
    pub sensor: usize,
    pub gain: i64,
    pub objective: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaceResult {
    pub mode: PlacementKind,
    pub candidates: Vec<usize>,
    pub selected: Vec<usize>,
    pub gain_trace: Vec<GainRow>,
    pub initial_objective: usize,
    pub residual: usize,
    pub feasible: bool,
    pub bound_certificate: Option<BoundCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignResult {
    pub sensor_count: usize,
    #[serde(rename = "C")]
    pub c: Vec<Vec<f64>>,
    pub basis_condition: f64,
    pub rank_o: usize,
    pub rank_of: usize,
    pub functionally_observable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetOracle {
    pub realizations: usize,
    /// Most frequent prime-field rank of the targeted controllability rows.
    pub majority_rank: usize,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetResult {
    /// 1-based.
    pub targets: Vec<usize>,
    pub generic_rank_c: usize,
    pub rank_lower: usize,
    pub rank_upper: usize,
    /// `true` when the generic rank of the targeted rows is known exactly.
    pub exact: bool,
    pub target_controllable: Option<bool>,
    pub oracle: Option<TargetOracle>,
    pub notes: Vec<String>,
}

/// Aligned `key: value` text, nested objects indented.
pub fn render_text(report: &Report) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut out = String::new();
    render_value(&value, 0, &mut out);
    out
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!(
                "[{}]",
                items
                    .iter()
                    .filter_map(scalar)
                    .collect::<Vec<_>>()
                    .join(", ")
            ))
        }
        Value::Array(items)
            if items.iter().all(|x| {
                x.as_array()
                    .is_some_and(|r| r.iter().all(|y| y.is_number()))
            }) =>
        {
            Some(format!(
                "[{}]",
                items
                    .iter()
                    .filter_map(scalar)
                    .collect::<Vec<_>>()
                    .join("; ")
            ))
        }
        _ => None,
    }
}

fn render_value(v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            let width = map.keys().map(String::len).max().unwrap_or(0);
            for (k, val) in map {
                match scalar(val) {
                    Some(s) => out.push_str(&format!("{pad}{k:<width$}  {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_value(val, indent + 2, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}- [{i}]\n"));
                        render_value(item, indent + 2, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).unwrap_or_default())),
    }
}

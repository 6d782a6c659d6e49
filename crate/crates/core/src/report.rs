//! The versioned report format shared by every command.
//!
//! A report is deterministic for a fixed model, command and seed. Verdicts are
//! named booleans; a failed verdict always carries a witness string.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::exactlinalg::RationalMatrix;
use crate::model::SymplecticModel;

pub const SCHEMA: &str = "leflab.report/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub name: String,
    pub n: usize,
    pub fingerprint: String,
    /// Fault-injection factor on the Poisson bivector; `"1"` for honest runs.
    pub lambda_scale: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TableData {
    Dimensions { values: Vec<usize> },
    /// Row-major rational entries as `"p/q"` strings.
    Matrix { rows: usize, cols: usize, entries: Vec<Vec<String>> },
    Labels { values: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    #[serde(flatten)]
    pub data: TableData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub model: ModelInfo,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub tables: Vec<Table>,
    pub verdicts: Vec<Verdict>,
}

impl Report {
    pub fn new(model: &SymplecticModel, command: &str) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            model: ModelInfo {
                name: model.name().to_string(),
                n: model.n(),
                fingerprint: model.fingerprint(),
                lambda_scale: model.lambda_scale().to_string(),
            },
            command: command.to_string(),
            parameters: BTreeMap::new(),
            tables: Vec::new(),
            verdicts: Vec::new(),
        }
    }

    pub fn parameter(&mut self, name: &str, value: impl Into<Value>) -> &mut Self {
        self.parameters.insert(name.to_string(), value.into());
        self
    }

    pub fn dimensions(&mut self, name: impl Into<String>, values: Vec<usize>) -> &mut Self {
        self.tables.push(Table {
            name: name.into(),
            data: TableData::Dimensions { values },
        });
        self
    }

    pub fn matrix(&mut self, name: impl Into<String>, m: &RationalMatrix) -> &mut Self {
        let entries = (0..m.rows())
            .map(|i| m.row(i).iter().map(ToString::to_string).collect())
            .collect();
        self.tables.push(Table {
            name: name.into(),
            data: TableData::Matrix {
                rows: m.rows(),
                cols: m.cols(),
                entries,
            },
        });
        self
    }

    pub fn labels(&mut self, name: impl Into<String>, values: Vec<String>) -> &mut Self {
        self.tables.push(Table {
            name: name.into(),
            data: TableData::Labels { values },
        });
        self
    }

    /// Records a verdict; `Err(witness)` is a failure.
    pub fn verdict(&mut self, name: impl Into<String>, outcome: Result<(), String>) -> &mut Self {
        let (passed, witness) = match outcome {
            Ok(()) => (true, None),
            Err(w) => (false, Some(w)),
        };
        self.verdicts.push(Verdict {
            name: name.into(),
            passed,
            witness,
        });
        self
    }

    /// `verdict` from a flag and a witness used only on failure.
    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: impl FnOnce() -> String) -> &mut Self {
        let outcome = if passed { Ok(()) } else { Err(witness()) };
        self.verdict(name, outcome)
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    /// Appends another report's tables and verdicts under a name prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut t in other.tables {
            t.name = format!("{prefix}.{}", t.name);
            self.tables.push(t);
        }
        for mut v in other.verdicts {
            v.name = format!("{prefix}.{}", v.name);
            self.verdicts.push(v);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Plain-text rendering for terminals.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} (n = {}, fingerprint {})",
            self.command,
            self.model.name,
            self.model.n,
            &self.model.fingerprint[..12]
        );
        if self.model.lambda_scale != "1" {
            let _ = writeln!(out, "FAULT INJECTION: Lambda scaled by {}", self.model.lambda_scale);
        }
        if !self.parameters.is_empty() {
            let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k} = {v}")).collect();
            let _ = writeln!(out, "parameters: {}", params.join(", "));
        }
        for t in &self.tables {
            match &t.data {
                TableData::Dimensions { values } => {
                    let v: Vec<String> = values.iter().map(ToString::to_string).collect();
                    let _ = writeln!(out, "  {:<40} ({})", t.name, v.join(", "));
                }
                TableData::Labels { values } => {
                    let _ = writeln!(out, "  {:<40} {}", t.name, values.join(", "));
                }
                TableData::Matrix { rows, cols, entries } => {
                    let _ = writeln!(out, "  {} [{rows} x {cols}]", t.name);
                    for row in entries {
                        let _ = writeln!(out, "    [{}]", row.join(", "));
                    }
                }
            }
        }
        let passed = self.verdicts.iter().filter(|v| v.passed).count();
        for v in &self.verdicts {
            match &v.witness {
                None => {
                    let _ = writeln!(out, "  pass  {}", v.name);
                }
                Some(w) => {
                    let _ = writeln!(out, "  FAIL  {}: {w}", v.name);
                }
            }
        }
        let _ = writeln!(out, "{passed}/{} verdicts passed", self.verdicts.len());
        out
    }
}

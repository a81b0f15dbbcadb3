use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{EquationConfig, PrecisionConfig};
use crate::error::Result;
use crate::linforms::LedgerRecord;
use crate::search::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ProofStatus {
    Proved,
    Incomplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StageStatus {
    Ok,
    Disabled,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEntry {
    pub status: StageStatus,
    pub inputs: BTreeMap<String, String>,
    pub constants: BTreeMap<String, String>,
    pub bounds: BTreeMap<String, String>,
    pub cases: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl StageEntry {
    pub fn new(status: StageStatus) -> Self {
        Self {
            status,
            inputs: BTreeMap::new(),
            constants: BTreeMap::new(),
            bounds: BTreeMap::new(),
            cases: BTreeMap::new(),
            error: None,
        }
    }

    pub fn failed(msg: String) -> Self {
        let mut e = Self::new(StageStatus::Failed);
        e.error = Some(msg);
        e
    }

    pub fn input(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.inputs.insert(k.into(), v.to_string());
        self
    }

    pub fn constant(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.constants.insert(k.into(), v.to_string());
        self
    }

    pub fn bound(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.bounds.insert(k.into(), v.to_string());
        self
    }

    pub fn case(&mut self, k: &str, v: impl ToString) -> &mut Self {
        self.cases.insert(k.into(), v.to_string());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageItem {
    pub region: String,
    pub covered_by: String,
    pub established: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub status: ProofStatus,
    pub equation: EquationConfig,
    pub precision: PrecisionConfig,
    pub stages: BTreeMap<String, StageEntry>,
    pub ledger: BTreeMap<String, LedgerRecord>,
    pub solutions: Vec<Solution>,
    pub coverage: Vec<CoverageItem>,
    pub notes: Vec<String>,
    /// Wall-clock seconds per stage; the only nondeterministic field.
    pub timings: BTreeMap<String, f64>,
}

impl ProofReport {
    pub fn is_proved(&self) -> bool {
        self.status == ProofStatus::Proved
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// The report with timings cleared, for byte comparison.
    pub fn to_json_without_timings(&self) -> Result<String> {
        let mut r = self.clone();
        r.timings.clear();
        r.to_json()
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let status = match self.status {
            ProofStatus::Proved => "PROVED",
            ProofStatus::Incomplete => "INCOMPLETE",
        };
        let _ = writeln!(
            s,
            "({}^x1-1)({}^x2-1) = ({}^y1-1)({}^y2-1): {status}",
            self.equation.a, self.equation.a, self.equation.b, self.equation.b
        );
        for (name, e) in &self.stages {
            let t = self.timings.get(name).map(|t| format!(" ({t:.2}s)")).unwrap_or_default();
            let _ = writeln!(s, "\n[{name}] {:?}{t}", e.status);
            if let Some(err) = &e.error {
                let _ = writeln!(s, "  error: {err}");
            }
            for (k, v) in e.constants.iter().chain(&e.bounds) {
                let _ = writeln!(s, "  {k} = {v}");
            }
            for (k, v) in &e.cases {
                let _ = writeln!(s, "  {k}: {v}");
            }
        }
        let _ = writeln!(s, "\nsolutions: {:?}", self.solutions);
        let _ = writeln!(s, "coverage:");
        for c in &self.coverage {
            let mark = if c.established { "ok" } else { "MISSING" };
            let _ = writeln!(s, "  [{mark}] {} <- {}", c.region, c.covered_by);
        }
        if !self.notes.is_empty() {
            let _ = writeln!(s, "notes:");
            for n in &self.notes {
                let _ = writeln!(s, "  - {n}");
            }
        }
        s
    }
}

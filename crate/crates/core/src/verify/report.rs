use std::fmt;

use serde::{Deserialize, Serialize};

use crate::word::GroupConfig;

/// Failures beyond this many are counted but not listed.
pub const MAX_WITNESSES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Every instance needed data beyond the ball.
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub status: Status,
    pub checked: u64,
    pub failed: u64,
    pub inconclusive: u64,
    pub witnesses: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Accumulates instances of one check.
#[derive(Clone, Debug)]
pub struct Check {
    name: String,
    checked: u64,
    failed: u64,
    inconclusive: u64,
    witnesses: Vec<String>,
    note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            checked: 0,
            failed: 0,
            inconclusive: 0,
            witnesses: Vec::new(),
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn pass(&mut self) {
        self.checked += 1;
    }

    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.checked += 1;
        self.failed += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(witness());
        }
    }

    /// Record one instance: pass if `ok`, otherwise a failure with the witness.
    pub fn expect(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass();
        } else {
            self.fail(witness);
        }
    }

    pub fn skip(&mut self) {
        self.inconclusive += 1;
    }

    pub fn merge(&mut self, other: Check) {
        self.checked += other.checked;
        self.failed += other.failed;
        self.inconclusive += other.inconclusive;
        for w in other.witnesses {
            if self.witnesses.len() < MAX_WITNESSES {
                self.witnesses.push(w);
            }
        }
    }

    pub fn finish(self) -> CheckItem {
        let status = if self.failed > 0 {
            Status::Fail
        } else if self.checked == 0 && self.inconclusive > 0 {
            Status::Inconclusive
        } else {
            Status::Pass
        };
        CheckItem {
            name: self.name,
            status,
            checked: self.checked,
            failed: self.failed,
            inconclusive: self.inconclusive,
            witnesses: self.witnesses,
            note: self.note,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config: GroupConfig,
    pub radius: usize,
    pub seed: u64,
    pub items: Vec<CheckItem>,
    pub elapsed_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.status != Status::Fail)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| i.status == Status::Fail)
    }

    /// Share of instances that could not be decided inside the ball.
    pub fn inconclusive_fraction(&self) -> f64 {
        let inc: u64 = self.items.iter().map(|i| i.inconclusive).sum();
        let total: u64 = self.items.iter().map(|i| i.inconclusive + i.checked).sum();
        if total == 0 {
            0.0
        } else {
            inc as f64 / total as f64
        }
    }

    /// Share of items with no decided instance at all.
    pub fn inconclusive_item_fraction(&self) -> f64 {
        if self.items.is_empty() {
            return 0.0;
        }
        let inc = self.items.iter().filter(|i| i.status == Status::Inconclusive).count();
        inc as f64 / self.items.len() as f64
    }

    /// Plain-text table, one row per item.
    pub fn render_table(&self) -> String {
        let width = self.items.iter().map(|i| i.name.len()).max().unwrap_or(4).max(4);
        let mut out = format!(
            "suite {} {} radius {} seed {}\n",
            self.suite, self.config, self.radius, self.seed
        );
        for i in &self.items {
            out.push_str(&format!(
                "  {:<width$}  {:<12}  checked {:>8}  failed {:>5}  inconclusive {:>6}\n",
                i.name,
                i.status.to_string(),
                i.checked,
                i.failed,
                i.inconclusive,
            ));
            for w in &i.witnesses {
                out.push_str(&format!("      {w}\n"));
            }
            if let Some(n) = &i.note {
                out.push_str(&format!("      note: {n}\n"));
            }
        }
        out
    }
}

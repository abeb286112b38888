use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub witness: Option<String>,
}

/// Named pass/fail checks, ordered by name so reports are byte-stable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VerdictMap(BTreeMap<String, Verdict>);

impl VerdictMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.0.insert(
            name.into(),
            Verdict {
                pass: true,
                witness: None,
            },
        );
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: impl Into<String>) {
        self.0.insert(
            name.into(),
            Verdict {
                pass: false,
                witness: Some(witness.into()),
            },
        );
    }

    /// Records `name` as passing when `witness` is `None`.
    pub fn record(&mut self, name: impl Into<String>, witness: Option<String>) {
        match witness {
            None => self.pass(name),
            Some(w) => self.fail(name, w),
        }
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.0.get(name)
    }

    pub fn passed(&self, name: &str) -> bool {
        self.get(name).is_some_and(|v| v.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.0.values().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &Verdict)> {
        self.0
            .iter()
            .filter(|(_, v)| !v.pass)
            .map(|(k, v)| (k.as_str(), v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Verdict)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds every entry of `other` under `prefix.name`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: &VerdictMap) {
        for (k, v) in &other.0 {
            self.0.insert(format!("{prefix}.{k}"), v.clone());
        }
    }
}

impl fmt::Display for VerdictMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, v) in &self.0 {
            match &v.witness {
                None if v.pass => writeln!(f, "  [pass] {name}")?,
                None => writeln!(f, "  [FAIL] {name}")?,
                Some(w) if v.pass => writeln!(f, "  [pass] {name} ({w})")?,
                Some(w) => writeln!(f, "  [FAIL] {name}: {w}")?,
            }
        }
        Ok(())
    }
}

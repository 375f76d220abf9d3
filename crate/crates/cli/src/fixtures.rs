//! The fixture corpus: operation inputs with expected outputs.
//!
//! The corpus is compiled in; a directory of `*.json` files given by
//! `--fixtures` or `ARTHURLAB_FIXTURES` replaces it.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::ops::run_op_or_error;

pub const ENV_VAR: &str = "ARTHURLAB_FIXTURES";

const EMBEDDED: &[(&str, &str)] = &[
    ("examples.json", include_str!("../fixtures/examples.json")),
    ("ems_chain.json", include_str!("../fixtures/ems_chain.json")),
    ("arthur_steps.json", include_str!("../fixtures/arthur_steps.json")),
];

/// Where an expected value comes from: copied from a published table, or
/// computed by hand or by an independent check.
#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Reference,
    Derived,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FixtureCase {
    pub id: String,
    pub suite: String,
    pub op: String,
    pub provenance: Provenance,
    pub input: Value,
    /// Compared as a subset of the output: listed keys must match.
    pub expected: Value,
}

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{file}: {source}")]
    Syntax { file: String, source: serde_json::Error },
    #[error("duplicate fixture id {0:?}")]
    DuplicateId(String),
    #[error("no fixture files in {0}")]
    Empty(String),
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    pub cases: Vec<FixtureCase>,
}

impl Corpus {
    pub fn embedded() -> Result<Corpus, FixtureError> {
        Corpus::from_sources(EMBEDDED.iter().map(|(n, t)| (n.to_string(), t.to_string())))
    }

    pub fn from_dir(dir: &Path) -> Result<Corpus, FixtureError> {
        let io = |source| FixtureError::Io { path: dir.display().to_string(), source };
        let mut files: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(Result::ok)
            .map(|e| e.path())
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        if files.is_empty() {
            return Err(FixtureError::Empty(dir.display().to_string()));
        }
        let mut sources = Vec::new();
        for f in files {
            let text = std::fs::read_to_string(&f)
                .map_err(|source| FixtureError::Io { path: f.display().to_string(), source })?;
            sources.push((f.display().to_string(), text));
        }
        Corpus::from_sources(sources)
    }

    fn from_sources(sources: impl IntoIterator<Item = (String, String)>) -> Result<Corpus, FixtureError> {
        let mut cases = Vec::new();
        let mut seen = BTreeSet::new();
        for (file, text) in sources {
            let batch: Vec<FixtureCase> =
                serde_json::from_str(&text).map_err(|source| FixtureError::Syntax { file: file.clone(), source })?;
            for c in batch {
                if !seen.insert(c.id.clone()) {
                    return Err(FixtureError::DuplicateId(c.id));
                }
                cases.push(c);
            }
        }
        Ok(Corpus { cases })
    }

    /// The flag wins over the environment, which wins over the compiled-in corpus.
    pub fn locate(flag: Option<&Path>) -> Result<Corpus, FixtureError> {
        if let Some(p) = flag {
            return Corpus::from_dir(p);
        }
        match std::env::var_os(ENV_VAR) {
            Some(p) if !p.is_empty() => Corpus::from_dir(Path::new(&p)),
            _ => Corpus::embedded(),
        }
    }

    pub fn suite(&self, name: &str) -> Vec<&FixtureCase> {
        self.cases.iter().filter(|c| c.suite == name).collect()
    }

    pub fn get(&self, id: &str) -> Option<&FixtureCase> {
        self.cases.iter().find(|c| c.id == id)
    }
}

/// First place where `actual` does not extend `expected`.
pub fn mismatch(expected: &Value, actual: &Value, path: &str) -> Option<String> {
    match (expected, actual) {
        (Value::Object(e), Value::Object(a)) => e.iter().find_map(|(k, v)| match a.get(k) {
            Some(av) => mismatch(v, av, &format!("{path}.{k}")),
            None => Some(format!("{path}.{k}: missing")),
        }),
        (Value::Array(e), Value::Array(a)) => {
            if e.len() != a.len() {
                return Some(format!("{path}: expected {} items, got {}", e.len(), a.len()));
            }
            e.iter().zip(a).enumerate().find_map(|(i, (x, y))| mismatch(x, y, &format!("{path}[{i}]")))
        }
        (e, a) if e == a => None,
        (e, a) => Some(format!("{path}: expected {e}, got {a}")),
    }
}

/// Runs one case.
pub fn check(case: &FixtureCase) -> Result<(), String> {
    let out = run_op_or_error(&case.op, &case.input).map_err(|e| format!("{}: {e}", case.id))?;
    match mismatch(&case.expected, &out, "") {
        None => Ok(()),
        Some(m) => Err(format!("{}: {m}", case.id)),
    }
}

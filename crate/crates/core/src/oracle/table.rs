//! JSON-lines store of solved instances. Records are appended; on load the
//! last record per key wins and every witness is re-verified.

use super::search::{exact_ex, Mode, OracleResult, SearchConfig};
use super::{FamilySpec, OracleError};
use crate::bounds::{binomial, ExactTuran};
use crate::constructions::ExtremalPieces;
use crate::graph::Graph;
use crate::graph6;
use crate::matching::compute_xg;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: malformed record: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{path}:{line}: witness rejected: {reason}")]
    Witness {
        path: PathBuf,
        line: usize,
        reason: String,
    },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TableKey {
    pub n: usize,
    pub spec: FamilySpec,
    pub x: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub n: usize,
    pub spec: FamilySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    pub value: usize,
    pub mode: Mode,
    pub witness_graph6: String,
    pub timestamp: u64,
    pub node_count: u64,
}

impl TableEntry {
    pub fn key(&self) -> TableKey {
        TableKey {
            n: self.n,
            spec: self.spec,
            x: self.x,
        }
    }

    pub fn from_result(r: &OracleResult) -> Self {
        TableEntry {
            n: r.n,
            spec: r.spec,
            x: r.x,
            value: r.value,
            mode: r.mode,
            witness_graph6: r.witness_graph6.clone(),
            timestamp: now(),
            node_count: r.node_count,
        }
    }

    pub fn witness(&self) -> Result<Graph, String> {
        graph6::decode(&self.witness_graph6).map_err(|e| e.to_string())
    }

    /// The witness decodes to an `n`-vertex graph in the family with `value` edges.
    pub fn verify(&self) -> Result<Graph, String> {
        let g = self.witness()?;
        if g.order() != self.n {
            return Err(format!("witness has {} vertices, record says {}", g.order(), self.n));
        }
        if g.edge_count() != self.value {
            return Err(format!("witness has {} edges, record says {}", g.edge_count(), self.value));
        }
        if !self.spec.admits(&g) {
            return Err(format!("witness is not in the family {}", self.spec));
        }
        if let (Some(x), Some(s)) = (self.x, self.spec.forbid_matching) {
            match compute_xg(&g, s) {
                Ok(r) if r.value == x => {}
                Ok(r) => return Err(format!("witness has x(G) = {}, record says {x}", r.value)),
                Err(e) => return Err(e.to_string()),
            }
        }
        Ok(g)
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// In-memory view of the store, optionally backed by a file.
#[derive(Debug, Clone, Default)]
pub struct ExTable {
    path: Option<PathBuf>,
    entries: BTreeMap<TableKey, TableEntry>,
}

impl ExTable {
    pub fn in_memory() -> Self {
        ExTable::default()
    }

    /// Loads `path` (a missing file is an empty table).
    pub fn open(path: impl AsRef<Path>) -> Result<Self, TableError> {
        let path = path.as_ref().to_path_buf();
        let mut table = ExTable {
            path: Some(path.clone()),
            entries: BTreeMap::new(),
        };
        let file = match fs::File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(table),
            Err(source) => return Err(TableError::Io { path, source }),
        };
        for (i, line) in BufReader::new(file).lines().enumerate() {
            let line = line.map_err(|source| TableError::Io {
                path: path.clone(),
                source,
            })?;
            if line.trim().is_empty() {
                continue;
            }
            let entry: TableEntry = serde_json::from_str(&line).map_err(|e| TableError::Parse {
                path: path.clone(),
                line: i + 1,
                reason: e.to_string(),
            })?;
            entry.verify().map_err(|reason| TableError::Witness {
                path: path.clone(),
                line: i + 1,
                reason,
            })?;
            table.entries.insert(entry.key(), entry);
        }
        Ok(table)
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &TableEntry> {
        self.entries.values()
    }

    pub fn get(&self, n: usize, spec: &FamilySpec, x: Option<usize>) -> Option<&TableEntry> {
        self.entries.get(&TableKey { n, spec: *spec, x })
    }

    pub fn exact(&self, n: usize, spec: &FamilySpec) -> Option<&TableEntry> {
        self.get(n, spec, None).filter(|e| e.mode == Mode::Exact)
    }

    /// Verifies and records an entry, appending it to the backing file.
    /// A lower-only record never replaces an exact one.
    pub fn insert(&mut self, entry: TableEntry) -> Result<(), TableError> {
        let path = self.path.clone().unwrap_or_default();
        entry.verify().map_err(|reason| TableError::Witness {
            path: path.clone(),
            line: 0,
            reason,
        })?;
        if entry.mode == Mode::LowerOnly {
            if let Some(old) = self.entries.get(&entry.key()) {
                if old.mode == Mode::Exact || old.value >= entry.value {
                    return Ok(());
                }
            }
        }
        if let Some(p) = &self.path {
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(p)
                .map_err(|source| TableError::Io { path: p.clone(), source })?;
            let line = serde_json::to_string(&entry).expect("serialisable");
            writeln!(f, "{line}").map_err(|source| TableError::Io { path: p.clone(), source })?;
        }
        self.entries.insert(entry.key(), entry);
        Ok(())
    }

    /// Rewrites the backing file with one record per key.
    pub fn compact(&self) -> Result<usize, TableError> {
        let Some(p) = &self.path else {
            return Ok(self.entries.len());
        };
        let tmp = p.with_extension("jsonl.tmp");
        let io_err = |source| TableError::Io { path: tmp.clone(), source };
        let mut f = fs::File::create(&tmp).map_err(io_err)?;
        for e in self.entries.values() {
            writeln!(f, "{}", serde_json::to_string(e).expect("serialisable")).map_err(io_err)?;
        }
        f.sync_all().map_err(io_err)?;
        fs::rename(&tmp, p).map_err(|source| TableError::Io { path: p.clone(), source })?;
        Ok(self.entries.len())
    }

    /// Violations of monotonicity among exact unrestricted entries: in `n`,
    /// in `s`, and under adding a constraint.
    pub fn monotonicity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let exact: Vec<&TableEntry> = self
            .entries
            .values()
            .filter(|e| e.mode == Mode::Exact && e.x.is_none())
            .collect();
        for a in &exact {
            for b in &exact {
                let looser = |a: &FamilySpec, b: &FamilySpec| {
                    // b's family of graphs contains a's
                    let klt_ok = match (a.forbid_klt, b.forbid_klt) {
                        (_, None) => true,
                        (Some(x), Some(y)) => x == y,
                        (None, Some(_)) => false,
                    };
                    let m_ok = match (a.forbid_matching, b.forbid_matching) {
                        (_, None) => true,
                        (Some(x), Some(y)) => x <= y,
                        (None, Some(_)) => false,
                    };
                    klt_ok && m_ok
                };
                if a.n <= b.n && looser(&a.spec, &b.spec) && a.value > b.value {
                    out.push(format!(
                        "ex({}, {}) = {} exceeds ex({}, {}) = {}",
                        a.n, a.spec, a.value, b.n, b.spec, b.value
                    ));
                }
            }
        }
        out
    }
}

impl ExactTuran for ExTable {
    fn exact_klt(&self, m: u64, l: u64, t: u64) -> Option<i128> {
        self.exact(m as usize, &FamilySpec::klt(l as usize, t as usize))
            .map(|e| e.value as i128)
    }
}

impl ExtremalPieces for ExTable {
    fn extremal_klt(&self, m: usize, l: usize, t: usize) -> Option<Graph> {
        self.exact(m, &FamilySpec::klt(l, t)).and_then(|e| e.witness().ok())
    }
}

/// Runs the exact search for each `n`, skipping keys already solved exactly.
/// Pure `K_{l,t}` families with `n < l + t` are filled with `K_n` directly.
pub fn table_fill(
    table: &mut ExTable,
    ns: impl IntoIterator<Item = usize>,
    spec: &FamilySpec,
    cfg: &SearchConfig,
) -> Result<Vec<TableEntry>, TableError> {
    let mut out = Vec::new();
    for n in ns {
        if let Some(e) = table.exact(n, spec) {
            out.push(e.clone());
            continue;
        }
        let entry = match (spec.forbid_klt, spec.forbid_matching) {
            (Some((l, t)), None) if n < l + t => {
                let g = Graph::complete(n);
                TableEntry {
                    n,
                    spec: *spec,
                    x: None,
                    value: binomial(n as u64, 2) as usize,
                    mode: Mode::Exact,
                    witness_graph6: graph6::encode(&g),
                    timestamp: now(),
                    node_count: 0,
                }
            }
            _ => TableEntry::from_result(&exact_ex(n, spec, cfg)?),
        };
        table.insert(entry.clone())?;
        out.push(entry);
    }
    Ok(out)
}

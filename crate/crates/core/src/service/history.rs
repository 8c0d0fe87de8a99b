//! Append-only JSON-lines log of translation records.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::en2ovp::TranslationRecord;

#[derive(Debug, thiserror::Error)]
pub enum HistoryError {
    #[error("history log {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot serialize record: {0}")]
    Serialize(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistoryPage {
    /// Readable records in the whole log.
    pub total: usize,
    pub offset: usize,
    pub limit: usize,
    /// Oldest first.
    pub records: Vec<TranslationRecord>,
}

/// One record per line. Appends go through a single locked writer and are
/// flushed to disk before returning; unreadable lines are skipped on read.
#[derive(Debug, Clone)]
pub struct HistoryStore {
    path: PathBuf,
    writer: Arc<Mutex<File>>,
}

impl HistoryStore {
    pub fn open(path: impl Into<PathBuf>) -> Result<HistoryStore, HistoryError> {
        let path = path.into();
        let io = |source| HistoryError::Io {
            path: path.clone(),
            source,
        };
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(io)?;
        }
        let mut file = OpenOptions::new()
            .read(true)
            .append(true)
            .create(true)
            .open(&path)
            .map_err(io)?;
        // A torn final line from an earlier crash must not swallow the next
        // record.
        let len = file.metadata().map_err(io)?.len();
        if len > 0 {
            let mut last = [0u8];
            file.seek(SeekFrom::Start(len - 1)).map_err(io)?;
            file.read_exact(&mut last).map_err(io)?;
            if last[0] != b'\n' {
                file.write_all(b"\n").map_err(io)?;
            }
        }
        Ok(HistoryStore {
            path,
            writer: Arc::new(Mutex::new(file)),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Durably appends `record`.
    pub fn append(&self, record: &TranslationRecord) -> Result<(), HistoryError> {
        let mut line = serde_json::to_vec(record)?;
        line.push(b'\n');
        let mut file = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        file.write_all(&line)
            .and_then(|_| file.sync_data())
            .map_err(|source| HistoryError::Io {
                path: self.path.clone(),
                source,
            })
    }

    /// Every readable record, oldest first.
    pub fn read_all(&self) -> Result<Vec<TranslationRecord>, HistoryError> {
        let io = |source| HistoryError::Io {
            path: self.path.clone(),
            source,
        };
        let file = File::open(&self.path).map_err(io)?;
        let mut out = Vec::new();
        for (n, line) in BufReader::new(file).lines().enumerate() {
            let line = match line {
                Ok(l) => l,
                Err(e) => {
                    tracing::warn!(line = n + 1, error = %e, "skipping unreadable history line");
                    continue;
                }
            };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str(&line) {
                Ok(r) => out.push(r),
                Err(e) => tracing::warn!(line = n + 1, error = %e, "skipping corrupt history line"),
            }
        }
        Ok(out)
    }

    pub fn page(&self, offset: usize, limit: usize) -> Result<HistoryPage, HistoryError> {
        let all = self.read_all()?;
        Ok(HistoryPage {
            total: all.len(),
            offset,
            limit,
            records: all.into_iter().skip(offset).take(limit).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(input: &str) -> TranslationRecord {
        TranslationRecord {
            input: input.into(),
            simples: vec![],
            simple_english: vec![],
            comparators: vec![],
            ovp_surfaces: vec![],
            backwards: vec![],
            errors: vec![],
            scores: None,
            model_name: "mock".into(),
            timestamp: "2024-01-01T00:00:00+00:00".into(),
        }
    }

    #[test]
    fn appends_and_pages() {
        let dir = tempfile::tempdir().unwrap();
        let store = HistoryStore::open(dir.path().join("sub/h.jsonl")).unwrap();
        for i in 0..5 {
            store.append(&record(&format!("r{i}"))).unwrap();
        }
        let p = store.page(1, 2).unwrap();
        assert_eq!(p.total, 5);
        assert_eq!(p.records.iter().map(|r| r.input.as_str()).collect::<Vec<_>>(), ["r1", "r2"]);
        assert!(store.page(0, 0).unwrap().records.is_empty());
        assert!(store.page(10, 5).unwrap().records.is_empty());
    }

    #[test]
    fn corrupt_and_torn_lines_are_skipped() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.jsonl");
        let good = serde_json::to_string(&record("ok")).unwrap();
        std::fs::write(&path, format!("{good}\nnot json\n{{\"input\": \"torn")).unwrap();
        let store = HistoryStore::open(&path).unwrap();
        store.append(&record("after")).unwrap();
        let all = store.read_all().unwrap();
        assert_eq!(all.iter().map(|r| r.input.as_str()).collect::<Vec<_>>(), ["ok", "after"]);
        // Reopening leaves a clean log alone.
        let again = HistoryStore::open(&path).unwrap();
        assert_eq!(again.read_all().unwrap().len(), 2);
    }
}

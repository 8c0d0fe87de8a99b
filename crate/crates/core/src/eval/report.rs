//! Mean scores per model and sentence type.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::en2ovp::TranslationRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SentenceType {
    SubjectVerb,
    SubjectVerbObject,
    TwoVerb,
    TwoClause,
    Complex,
}

impl SentenceType {
    pub const ALL: [SentenceType; 5] = [
        SentenceType::SubjectVerb,
        SentenceType::SubjectVerbObject,
        SentenceType::TwoVerb,
        SentenceType::TwoClause,
        SentenceType::Complex,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SentenceType::SubjectVerb => "subject-verb",
            SentenceType::SubjectVerbObject => "subject-verb-object",
            SentenceType::TwoVerb => "two-verb",
            SentenceType::TwoClause => "two-clause",
            SentenceType::Complex => "complex",
        }
    }
}

impl fmt::Display for SentenceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SentenceType {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SentenceType::ALL
            .into_iter()
            .find(|t| t.as_str() == s.trim())
            .ok_or_else(|| EvalError::Input(format!("unknown sentence type `{s}`")))
    }
}

/// A translation record tagged with the type of its input sentence; one
/// JSON object per line in record files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypedRecord {
    #[serde(rename = "type")]
    pub sentence_type: SentenceType,
    #[serde(flatten)]
    pub record: TranslationRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub model: String,
    pub sentence_type: SentenceType,
    pub n: usize,
    pub simple: f64,
    pub comparator: f64,
    pub backwards: f64,
    /// Mean of the three score columns.
    pub mean: f64,
}

pub const SUMMARY_HEADER: &str = "model\ttype\tn\tsimple\tcomparator\tbackwards\tmean";

/// Averages scored records per (model, type). Unscored records are skipped
/// with a warning, and combinations without records produce no row.
pub fn summarize_by_type(records: &[TypedRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(String, SentenceType), Vec<[f64; 3]>> = BTreeMap::new();
    for r in records {
        match r.record.scores {
            Some(s) => groups
                .entry((r.record.model_name.clone(), r.sentence_type))
                .or_default()
                .push([s.simple, s.comparator, s.backwards]),
            None => tracing::warn!(input = %r.record.input, "record has no scores; skipped"),
        }
    }
    groups
        .into_iter()
        .map(|((model, sentence_type), rows)| {
            let n = rows.len();
            let col = |i: usize| rows.iter().map(|r| r[i]).sum::<f64>() / n as f64;
            let (simple, comparator, backwards) = (col(0), col(1), col(2));
            SummaryRow {
                model,
                sentence_type,
                n,
                simple,
                comparator,
                backwards,
                mean: (simple + comparator + backwards) / 3.0,
            }
        })
        .collect()
}

pub fn summary_tsv(rows: &[SummaryRow]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for r in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\n",
            r.model, r.sentence_type, r.n, r.simple, r.comparator, r.backwards, r.mean
        ));
    }
    out
}

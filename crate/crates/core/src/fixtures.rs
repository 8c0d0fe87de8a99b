//! Shipped data sets: hand-decomposed example sentences with reference
//! translations, and the typed English evaluation sentences.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::eval::{EvalError, SentenceType};
use crate::grammar::{SentenceSelections, Slot};

/// An OVP sentence, its slot decomposition, an English rendering and whether
/// that rendering was judged correct.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleSentence {
    pub surface: String,
    pub selections: SentenceSelections,
    pub english: String,
    pub correct: bool,
}

const EXAMPLE_COLUMNS: [Slot; 7] = [
    Slot::Subject,
    Slot::SubjectSuffix,
    Slot::Verb,
    Slot::VerbTense,
    Slot::Object,
    Slot::ObjectSuffix,
    Slot::ObjectPronoun,
];

/// Parses `surface, <seven slot ids>, english, label` rows (tab-separated,
/// with header).
pub fn parse_examples(text: &str) -> Result<Vec<ExampleSentence>, EvalError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(EvalError::Input(format!("line {}: expected 10 columns, got {}", n + 1, cols.len())));
        }
        let mut selections = SentenceSelections::default();
        for (slot, id) in EXAMPLE_COLUMNS.iter().zip(&cols[1..8]) {
            if !id.is_empty() {
                selections.set(*slot, Some(id.to_string()));
            }
        }
        out.push(ExampleSentence {
            surface: cols[0].to_string(),
            selections,
            english: cols[8].to_string(),
            correct: match cols[9].trim() {
                "1" => true,
                "0" => false,
                other => return Err(EvalError::Input(format!("line {}: bad label `{other}`", n + 1))),
            },
        });
    }
    Ok(out)
}

/// One hundred builder sentences with their reference English.
pub fn examples() -> &'static [ExampleSentence] {
    static ROWS: OnceLock<Vec<ExampleSentence>> = OnceLock::new();
    ROWS.get_or_init(|| parse_examples(include_str!("../data/appendix_c.tsv")).expect("shipped examples parse"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetEntry {
    #[serde(rename = "type")]
    pub sentence_type: SentenceType,
    pub text: String,
}

/// Parses `type<TAB>text` rows (header optional).
pub fn parse_dataset(text: &str) -> Result<Vec<DatasetEntry>, EvalError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || (n == 0 && line.starts_with("type\t")) {
            continue;
        }
        let (t, s) = line
            .split_once('\t')
            .ok_or_else(|| EvalError::Input(format!("line {}: expected type<TAB>text", n + 1)))?;
        out.push(DatasetEntry {
            sentence_type: t.parse()?,
            text: s.trim().to_string(),
        });
    }
    Ok(out)
}

/// 125 English sentences, 25 of each type.
pub fn dataset() -> &'static [DatasetEntry] {
    static ROWS: OnceLock<Vec<DatasetEntry>> = OnceLock::new();
    ROWS.get_or_init(|| parse_dataset(include_str!("../data/dataset.tsv")).expect("shipped dataset parses"))
}

/// The first five sentences of each type.
pub fn dataset_sample() -> Vec<&'static DatasetEntry> {
    SentenceType::ALL
        .iter()
        .flat_map(|t| dataset().iter().filter(move |e| e.sentence_type == *t).take(5))
        .collect()
}

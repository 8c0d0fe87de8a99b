//! The three translation-quality scores of an English input.

use super::embed::EmbeddingBackend;
use super::metrics::{normalized_cosine, MetricError};
use super::EvalError;
use crate::en2ovp::{Scores, TranslationRecord};

/// Similarity between `reference` and the sentences of `set` joined with
/// single spaces.
pub async fn sentence_set_similarity(
    reference: &str,
    set: &[String],
    backend: &dyn EmbeddingBackend,
) -> Result<f64, EvalError> {
    if set.is_empty() {
        return Err(MetricError::Empty("sentence set").into());
    }
    let texts = [reference.to_string(), set.join(" ")];
    let v = backend.embed(&texts).await?;
    Ok(normalized_cosine(&v[0], &v[1])?)
}

/// Fills in the simple, comparator and backwards scores of `record`.
pub async fn score_record(
    mut record: TranslationRecord,
    backend: &dyn EmbeddingBackend,
) -> Result<TranslationRecord, EvalError> {
    let sets = [record.simple_text(), record.comparator_text(), record.backwards_text()];
    if sets.iter().any(|s| s.trim().is_empty()) {
        return Err(MetricError::Empty("translation record").into());
    }
    let mut texts = vec![record.input.clone()];
    texts.extend(sets);
    let v = backend.embed(&texts).await?;
    record.scores = Some(Scores {
        simple: normalized_cosine(&v[0], &v[1])?,
        comparator: normalized_cosine(&v[0], &v[2])?,
        backwards: normalized_cosine(&v[0], &v[3])?,
    });
    Ok(record)
}

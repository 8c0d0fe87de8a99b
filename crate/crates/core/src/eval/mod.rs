//! Semantic-similarity evaluation: embedding backends, metrics, the ranking
//! benchmark, unrelated-pair baselines and per-type score tables.

pub mod baseline;
pub mod embed;
pub mod metrics;
pub mod ranking;
pub mod report;
pub mod score;

pub use baseline::{baseline, BaselineStats};
pub use embed::{EmbeddingBackend, HttpEmbeddings, MockEmbeddings, OracleEmbeddings};
pub use metrics::{average_displacement, normalized_cosine, rbo, MetricError};
pub use ranking::{evaluate_embedding_model, RankingBenchmark, RankingReport};
pub use report::{summarize_by_type, SentenceType, TypedRecord};
pub use score::{score_record, sentence_set_similarity};

use crate::llm::LlmError;

/// RBO persistence used when none is given.
pub const DEFAULT_RBO_P: f64 = 0.9;

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Backend(#[from] LlmError),
    #[error("invalid input: {0}")]
    Input(String),
}

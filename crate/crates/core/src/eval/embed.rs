//! Sentence-embedding backends.

use std::collections::HashMap;

use async_trait::async_trait;
use serde_json::{json, Value};

use super::ranking::RankingBenchmark;
use crate::english;
use crate::llm::http::{BackendConfig, HttpClient};
use crate::llm::LlmError;

#[async_trait]
pub trait EmbeddingBackend: Send + Sync {
    fn model_name(&self) -> &str;

    /// One vector per text, in input order.
    async fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, LlmError>;
}

fn check_vectors(vectors: &[Vec<f64>], expected: usize) -> Result<(), LlmError> {
    let bad = |message: String| LlmError::Format {
        message,
        raw: String::new(),
    };
    if vectors.len() != expected {
        return Err(bad(format!("expected {expected} embeddings, got {}", vectors.len())));
    }
    if let Some(first) = vectors.first() {
        if vectors.iter().any(|v| v.len() != first.len()) {
            return Err(bad("embeddings differ in length".into()));
        }
    }
    if vectors.iter().flatten().any(|x| !x.is_finite()) {
        return Err(bad("non-finite embedding entry".into()));
    }
    Ok(())
}

/// OpenAI-compatible `/embeddings` endpoint, queried in batches.
#[derive(Debug, Clone)]
pub struct HttpEmbeddings {
    http: HttpClient,
    batch_size: usize,
}

impl HttpEmbeddings {
    pub const DEFAULT_BATCH: usize = 64;

    pub fn new(config: BackendConfig) -> Result<Self, LlmError> {
        Ok(HttpEmbeddings {
            http: HttpClient::new(config)?,
            batch_size: Self::DEFAULT_BATCH,
        })
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        self.batch_size = batch_size.max(1);
        self
    }
}

fn parse_embeddings(response: &Value) -> Result<Vec<Vec<f64>>, LlmError> {
    let format = |message: &str| LlmError::Format {
        message: message.to_string(),
        raw: response.to_string().chars().take(500).collect(),
    };
    let data = response["data"].as_array().ok_or_else(|| format("response has no data array"))?;
    let mut rows: Vec<(usize, Vec<f64>)> = data
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let index = item["index"].as_u64().map_or(i, |x| x as usize);
            let values = item["embedding"]
                .as_array()
                .ok_or_else(|| format("item has no embedding"))?
                .iter()
                .map(|x| x.as_f64().ok_or_else(|| format("embedding entry is not a number")))
                .collect::<Result<Vec<f64>, _>>()?;
            Ok((index, values))
        })
        .collect::<Result<_, LlmError>>()?;
    rows.sort_by_key(|(i, _)| *i);
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

#[async_trait]
impl EmbeddingBackend for HttpEmbeddings {
    fn model_name(&self) -> &str {
        &self.http.config().model
    }

    async fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, LlmError> {
        if texts.is_empty() {
            return Err(LlmError::InvalidRequest("no texts to embed".into()));
        }
        let mut out = Vec::with_capacity(texts.len());
        for batch in texts.chunks(self.batch_size) {
            let body = json!({ "model": self.http.config().model, "input": batch });
            let response = self.http.post_json("embeddings", &body).await?;
            let vectors = parse_embeddings(&response)?;
            check_vectors(&vectors, batch.len())?;
            out.extend(vectors);
        }
        check_vectors(&out, texts.len())?;
        Ok(out)
    }
}

fn fnv1a(text: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in text.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

const STOPWORDS: &[&str] = &[
    "a", "an", "the", "is", "am", "are", "was", "were", "be", "been", "will", "has", "have", "had", "to", "of",
];

/// Offline embeddings by feature hashing: each content word is reduced to a
/// base form and hashed into one of `dims` signed buckets; character
/// trigrams add a weaker signal, and a constant bucket keeps every vector
/// nonzero. Identical texts get identical vectors.
#[derive(Debug, Clone)]
pub struct MockEmbeddings {
    dims: usize,
}

impl Default for MockEmbeddings {
    fn default() -> Self {
        MockEmbeddings { dims: Self::DIMS }
    }
}

impl MockEmbeddings {
    pub const DIMS: usize = 384;
    pub const MODEL: &'static str = "mock-hash-384";

    fn add(&self, v: &mut [f64], feature: &str, weight: f64) {
        let h = fnv1a(feature);
        let i = 1 + (h % (self.dims as u64 - 1)) as usize;
        let sign = if h >> 63 == 0 { 1.0 } else { -1.0 };
        v[i] += sign * weight;
    }

    pub fn vector(&self, text: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.dims];
        v[0] = 1.0;
        let lower = text.to_lowercase();
        for word in lower
            .split(|c: char| !(c.is_alphanumeric() || c == '\''))
            .filter(|w| !w.is_empty() && !STOPWORDS.contains(w))
        {
            let base = english::lemmatize_verb(word).unwrap_or_else(|| english::singularize(word));
            self.add(&mut v, &base, 1.0);
            let chars: Vec<char> = format!("#{base}#").chars().collect();
            for tri in chars.windows(3) {
                self.add(&mut v, &tri.iter().collect::<String>(), 0.25);
            }
        }
        v
    }
}

#[async_trait]
impl EmbeddingBackend for MockEmbeddings {
    fn model_name(&self) -> &str {
        Self::MODEL
    }

    async fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, LlmError> {
        if texts.is_empty() {
            return Err(LlmError::InvalidRequest("no texts to embed".into()));
        }
        Ok(texts.iter().map(|t| self.vector(t)).collect())
    }
}

/// Embeddings that reproduce a ranking benchmark's ground truth exactly.
///
/// Each case owns one dimension. A base sentence has a unit component along
/// its case's dimension; the candidate at rank `r` of `n` gets a small
/// component `ε·(n - r)/n` there. Every vector is then padded in a private
/// dimension to a common norm, so similarity to a base falls strictly with
/// rank. The construction is checked against the benchmark when built.
#[derive(Debug, Clone)]
pub struct OracleEmbeddings {
    dims: usize,
    vectors: HashMap<String, Vec<(usize, f64)>>,
}

impl OracleEmbeddings {
    pub const MODEL: &'static str = "ground-truth-oracle";
    const EPSILON: f64 = 1e-3;

    pub fn from_benchmark(benchmark: &RankingBenchmark) -> Result<Self, String> {
        let mut sparse: HashMap<String, HashMap<usize, f64>> = HashMap::new();
        for (c, case) in benchmark.cases.iter().enumerate() {
            *sparse.entry(case.base.clone()).or_default().entry(c).or_default() += 1.0;
            let n = case.candidates.len();
            for (r, cand) in case.candidates.iter().enumerate() {
                if *cand == case.base {
                    return Err(format!("`{cand}` is a candidate of its own case"));
                }
                let w = Self::EPSILON * (n - r) as f64 / n as f64;
                *sparse.entry(cand.clone()).or_default().entry(c).or_default() += w;
            }
        }
        let norm = |v: &HashMap<usize, f64>| v.values().map(|x| x * x).sum::<f64>().sqrt();
        let target = sparse.values().map(norm).fold(0.0, f64::max) * 2.0;
        let mut texts: Vec<&String> = sparse.keys().collect();
        texts.sort();
        let mut dims = benchmark.cases.len();
        let mut vectors = HashMap::with_capacity(texts.len());
        for text in texts {
            let v = &sparse[text];
            let mut entries: Vec<(usize, f64)> = v.iter().map(|(&i, &x)| (i, x)).collect();
            entries.sort_by_key(|(i, _)| *i);
            entries.push((dims, (target * target - norm(v).powi(2)).sqrt()));
            dims += 1;
            vectors.insert(text.clone(), entries);
        }
        let oracle = OracleEmbeddings { dims, vectors };
        for case in &benchmark.cases {
            let base = oracle.dense(&case.base).expect("base present");
            let sims: Vec<f64> = case
                .candidates
                .iter()
                .map(|c| {
                    let v = oracle.dense(c).expect("candidate present");
                    base.iter().zip(&v).map(|(a, b)| a * b).sum()
                })
                .collect();
            if !sims.windows(2).all(|w| w[0] > w[1]) {
                return Err(format!("cannot separate the candidates of `{}`", case.base));
            }
        }
        Ok(oracle)
    }

    fn dense(&self, text: &str) -> Option<Vec<f64>> {
        let sparse = self.vectors.get(text)?;
        let mut v = vec![0.0; self.dims];
        for &(i, x) in sparse {
            v[i] = x;
        }
        Some(v)
    }
}

#[async_trait]
impl EmbeddingBackend for OracleEmbeddings {
    fn model_name(&self) -> &str {
        Self::MODEL
    }

    async fn embed(&self, texts: &[String]) -> Result<Vec<Vec<f64>>, LlmError> {
        texts
            .iter()
            .map(|t| {
                self.dense(t)
                    .ok_or_else(|| LlmError::InvalidRequest(format!("`{t}` is not in the benchmark")))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::metrics::normalized_cosine;

    fn block<F: std::future::Future>(f: F) -> F::Output {
        tokio::runtime::Builder::new_current_thread().build().unwrap().block_on(f)
    }

    #[test]
    fn mock_is_deterministic_and_fixed_length() {
        let m = MockEmbeddings::default();
        let texts: Vec<String> = ["She sings.", "She sings.", "", "Mountains echo silently."]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let v = block(m.embed(&texts)).unwrap();
        assert_eq!(v[0], v[1]);
        assert!(v.iter().all(|x| x.len() == MockEmbeddings::DIMS));
        assert!(normalized_cosine(&v[2], &v[0]).is_ok());
    }

    #[test]
    fn mock_prefers_shared_words() {
        let m = MockEmbeddings::default();
        let sim = |a: &str, b: &str| normalized_cosine(&m.vector(a), &m.vector(b)).unwrap();
        assert!(sim("She sings.", "He sings.") > sim("She sings.", "Mountains echo silently."));
        assert!(sim("The birds migrated.", "A bird will migrate.") > 0.8);
    }

    #[test]
    fn parses_embedding_responses_by_index() {
        let r = json!({"data": [{"index": 1, "embedding": [0.0, 1.0]}, {"index": 0, "embedding": [1.0, 0.0]}]});
        assert_eq!(parse_embeddings(&r).unwrap(), vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert!(parse_embeddings(&json!({"data": [{"embedding": ["x"]}]})).is_err());
        assert!(check_vectors(&[vec![1.0], vec![1.0, 2.0]], 2).is_err());
    }

    #[test]
    fn oracle_reproduces_ground_truth() {
        let bench = RankingBenchmark::appendix_b();
        let oracle = OracleEmbeddings::from_benchmark(bench).unwrap();
        for case in &bench.cases {
            let mut texts = vec![case.base.clone()];
            texts.extend(case.candidates.iter().cloned());
            let v = block(oracle.embed(&texts)).unwrap();
            let sims: Vec<f64> = v[1..].iter().map(|c| normalized_cosine(&v[0], c).unwrap()).collect();
            assert!(sims.windows(2).all(|w| w[0] > w[1]), "{}", case.base);
        }
        assert!(block(oracle.embed(&["unknown".to_string()])).is_err());
    }
}

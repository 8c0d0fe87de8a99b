//! Similarity of unrelated sentence pairs, used to judge whether a score
//! means anything.

use serde::{Deserialize, Serialize};

use super::embed::EmbeddingBackend;
use super::metrics::{mean_std, normalized_cosine};
use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineStats {
    pub model: String,
    pub pairs: usize,
    pub mean: f64,
    pub std: f64,
    /// `mean + 3·std`: scores above it are unlikely between unrelated
    /// sentences.
    pub threshold: f64,
    pub histogram: Vec<Bin>,
}

impl BaselineStats {
    /// Histogram as `lo<TAB>hi<TAB>count` lines.
    pub fn histogram_tsv(&self) -> String {
        let mut out = String::from("lo\thi\tcount\n");
        for b in &self.histogram {
            out.push_str(&format!("{:.3}\t{:.3}\t{}\n", b.lo, b.hi, b.count));
        }
        out
    }
}

/// Equal-width bins over [0, 1]; the last bin includes 1.
pub fn histogram(values: &[f64], bins: usize) -> Vec<Bin> {
    let bins = bins.max(1);
    let width = 1.0 / bins as f64;
    let mut out: Vec<Bin> = (0..bins)
        .map(|i| Bin {
            lo: i as f64 * width,
            hi: (i + 1) as f64 * width,
            count: 0,
        })
        .collect();
    for &v in values {
        let i = ((v / width).floor() as usize).min(bins - 1);
        out[i].count += 1;
    }
    out
}

/// Statistics over all distinct unordered pairs of `sentences`.
pub async fn baseline(
    sentences: &[String],
    backend: &dyn EmbeddingBackend,
    bins: usize,
) -> Result<BaselineStats, EvalError> {
    if sentences.len() < 2 {
        return Err(EvalError::Input("baseline needs at least two sentences".into()));
    }
    let vectors = backend.embed(sentences).await?;
    let mut sims = Vec::with_capacity(sentences.len() * (sentences.len() - 1) / 2);
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            sims.push(normalized_cosine(&vectors[i], &vectors[j])?);
        }
    }
    let (mean, std) = mean_std(&sims);
    Ok(BaselineStats {
        model: backend.model_name().to_string(),
        pairs: sims.len(),
        mean,
        std,
        threshold: mean + 3.0 * std,
        histogram: histogram(&sims, bins),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::embed::MockEmbeddings;

    fn block<F: std::future::Future>(f: F) -> F::Output {
        tokio::runtime::Builder::new_current_thread().build().unwrap().block_on(f)
    }

    #[test]
    fn identical_pair_is_one() {
        let s = vec!["A dog runs.".to_string(), "A dog runs.".to_string()];
        let b = block(baseline(&s, &MockEmbeddings::default(), 20)).unwrap();
        assert_eq!(b.pairs, 1);
        assert!((b.mean - 1.0).abs() < 1e-12);
        assert_eq!(b.std, 0.0);
        assert_eq!(b.histogram.last().unwrap().count, 1);
    }

    #[test]
    fn counts_all_pairs() {
        let s: Vec<String> = (0..5).map(|i| format!("sentence number {i}")).collect();
        let b = block(baseline(&s, &MockEmbeddings::default(), 10)).unwrap();
        assert_eq!(b.pairs, 10);
        assert_eq!(b.histogram.iter().map(|x| x.count).sum::<usize>(), 10);
        assert!((b.threshold - (b.mean + 3.0 * b.std)).abs() < 1e-12);
        assert!(block(baseline(&s[..1], &MockEmbeddings::default(), 10)).is_err());
    }

    #[test]
    fn histogram_edges() {
        let h = histogram(&[0.0, 0.5, 1.0], 2);
        assert_eq!(h.iter().map(|b| b.count).collect::<Vec<_>>(), [1, 2]);
    }
}

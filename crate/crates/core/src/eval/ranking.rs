//! Ranking benchmark: how well an embedding model orders candidate sentences
//! by similarity to a base sentence.

use std::path::Path;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::embed::EmbeddingBackend;
use super::metrics::{average_displacement, mean_std, normalized_cosine, rbo};
use super::EvalError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingCase {
    pub base: String,
    /// Ground truth, most to least similar.
    pub candidates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankingBenchmark {
    pub cases: Vec<RankingCase>,
}

impl RankingBenchmark {
    /// The shipped twelve-case benchmark.
    pub fn appendix_b() -> &'static RankingBenchmark {
        static BENCH: OnceLock<RankingBenchmark> = OnceLock::new();
        BENCH.get_or_init(|| {
            RankingBenchmark::from_tsv(include_str!("../../data/ranking_benchmark.tsv"))
                .expect("shipped benchmark is valid")
        })
    }

    /// Parses `base<TAB>candidate` rows (header optional). Rows sharing a
    /// base form one case; candidate order is ground-truth order.
    pub fn from_tsv(text: &str) -> Result<RankingBenchmark, EvalError> {
        let mut cases: Vec<RankingCase> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            if line.trim().is_empty() || (n == 0 && line.starts_with("base\t")) {
                continue;
            }
            let (base, cand) = line
                .split_once('\t')
                .ok_or_else(|| EvalError::Input(format!("line {}: expected base<TAB>candidate", n + 1)))?;
            let (base, cand) = (base.trim().to_string(), cand.trim().to_string());
            match cases.iter_mut().find(|c| c.base == base) {
                Some(case) => case.candidates.push(cand),
                None => cases.push(RankingCase {
                    base,
                    candidates: vec![cand],
                }),
            }
        }
        let bench = RankingBenchmark { cases };
        bench.check()?;
        Ok(bench)
    }

    pub fn from_path(path: &Path) -> Result<RankingBenchmark, EvalError> {
        let text = std::fs::read_to_string(path).map_err(|e| EvalError::Input(format!("{}: {e}", path.display())))?;
        Self::from_tsv(&text)
    }

    pub fn check(&self) -> Result<(), EvalError> {
        if self.cases.is_empty() {
            return Err(EvalError::Input("benchmark has no cases".into()));
        }
        for case in &self.cases {
            if case.candidates.len() < 2 {
                return Err(EvalError::Input(format!("case `{}` needs at least two candidates", case.base)));
            }
            let mut seen = std::collections::HashSet::new();
            if !case.candidates.iter().all(|c| seen.insert(c)) {
                return Err(EvalError::Input(format!("case `{}` repeats a candidate", case.base)));
            }
        }
        Ok(())
    }
}

/// Candidate indices ordered by decreasing similarity; ties keep candidate
/// order.
pub fn rank_by_similarity(similarities: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..similarities.len()).collect();
    order.sort_by(|&a, &b| similarities[b].total_cmp(&similarities[a]));
    order
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub base: String,
    pub similarities: Vec<f64>,
    /// Candidate indices as ranked by the model.
    pub computed_order: Vec<usize>,
    pub displacement: f64,
    pub rbo: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    fn of(values: &[f64]) -> Stat {
        let (mean, std) = mean_std(values);
        Stat { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub model: String,
    pub p: f64,
    pub displacement: Stat,
    pub rbo: Stat,
    pub cases: Vec<CaseResult>,
}

impl RankingReport {
    pub const TSV_HEADER: &'static str = "model\tdisplacement_mean\tdisplacement_std\trbo_mean\trbo_std";

    pub fn tsv_row(&self) -> String {
        format!(
            "{}\t{:.3}\t{:.3}\t{:.3}\t{:.3}",
            self.model, self.displacement.mean, self.displacement.std, self.rbo.mean, self.rbo.std
        )
    }
}

/// Scores one case from precomputed similarities.
pub fn score_case(case: &RankingCase, similarities: Vec<f64>, p: f64) -> Result<CaseResult, EvalError> {
    let computed_order = rank_by_similarity(&similarities);
    let target: Vec<usize> = (0..case.candidates.len()).collect();
    Ok(CaseResult {
        base: case.base.clone(),
        displacement: average_displacement(&target, &computed_order)?,
        rbo: rbo(&target, &computed_order, p)?,
        similarities,
        computed_order,
    })
}

/// Ranks every case's candidates by similarity to its base and compares with
/// the ground truth.
pub async fn evaluate_embedding_model(
    benchmark: &RankingBenchmark,
    backend: &dyn EmbeddingBackend,
    p: f64,
) -> Result<RankingReport, EvalError> {
    benchmark.check()?;
    let mut cases = Vec::with_capacity(benchmark.cases.len());
    for case in &benchmark.cases {
        let mut texts = Vec::with_capacity(case.candidates.len() + 1);
        texts.push(case.base.clone());
        texts.extend(case.candidates.iter().cloned());
        let vectors = backend.embed(&texts).await?;
        let similarities = vectors[1..]
            .iter()
            .map(|v| normalized_cosine(&vectors[0], v))
            .collect::<Result<Vec<_>, _>>()?;
        cases.push(score_case(case, similarities, p)?);
    }
    let displacements: Vec<f64> = cases.iter().map(|c| c.displacement).collect();
    let rbos: Vec<f64> = cases.iter().map(|c| c.rbo).collect();
    Ok(RankingReport {
        model: backend.model_name().to_string(),
        p,
        displacement: Stat::of(&displacements),
        rbo: Stat::of(&rbos),
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::embed::{MockEmbeddings, OracleEmbeddings};

    fn block<F: std::future::Future>(f: F) -> F::Output {
        tokio::runtime::Builder::new_current_thread().build().unwrap().block_on(f)
    }

    #[test]
    fn shipped_benchmark_shape() {
        let b = RankingBenchmark::appendix_b();
        assert_eq!(b.cases.len(), 12);
        assert!(b.cases.iter().all(|c| c.candidates.len() == 10));
        assert_eq!(b.cases[0].base, "She sings.");
        assert_eq!(b.cases[0].candidates[0], "He sings.");
    }

    #[test]
    fn ties_keep_candidate_order() {
        assert_eq!(rank_by_similarity(&[0.5, 0.9, 0.5, 0.1]), vec![1, 0, 2, 3]);
    }

    #[test]
    fn oracle_scores_perfectly() {
        let b = RankingBenchmark::appendix_b();
        let oracle = OracleEmbeddings::from_benchmark(b).unwrap();
        let r = block(evaluate_embedding_model(b, &oracle, 0.9)).unwrap();
        assert_eq!(r.displacement.mean, 0.0);
        assert!((r.rbo.mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mock_report_is_finite() {
        let r = block(evaluate_embedding_model(RankingBenchmark::appendix_b(), &MockEmbeddings::default(), 0.9)).unwrap();
        assert!(r.displacement.mean.is_finite() && r.rbo.mean.is_finite());
        assert!(r.rbo.mean > 0.0 && r.rbo.mean <= 1.0);
    }

    #[test]
    fn malformed_benchmarks_are_rejected() {
        assert!(RankingBenchmark::from_tsv("a\tb\n").is_err());
        assert!(RankingBenchmark::from_tsv("no tab here\n").is_err());
        assert!(RankingBenchmark::from_tsv("a\tb\na\tb\n").is_err());
        assert!(RankingBenchmark::from_tsv("a\tb\na\tc\n").is_ok());
    }
}

//! Similarity and ranking metrics.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("zero-norm vector")]
    ZeroVector,
    #[error("non-finite vector entry")]
    NonFinite,
    #[error("rankings do not contain the same elements")]
    MismatchedRankings,
    #[error("ranking contains a duplicate element")]
    DuplicateElement,
    #[error("persistence p must lie strictly between 0 and 1, got {0}")]
    Persistence(f64),
    #[error("empty input: {0}")]
    Empty(&'static str),
}

/// Cosine similarity mapped affinely onto [0, 1]: `(cos + 1) / 2`.
pub fn normalized_cosine(a: &[f64], b: &[f64]) -> Result<f64, MetricError> {
    if a.len() != b.len() {
        return Err(MetricError::LengthMismatch(a.len(), b.len()));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(MetricError::NonFinite);
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(MetricError::ZeroVector);
    }
    let cos = (dot / (na * nb)).clamp(-1.0, 1.0);
    Ok((cos + 1.0) / 2.0)
}

fn positions<T: Eq + Hash>(order: &[T]) -> Result<HashMap<&T, usize>, MetricError> {
    let mut pos = HashMap::with_capacity(order.len());
    for (i, x) in order.iter().enumerate() {
        if pos.insert(x, i).is_some() {
            return Err(MetricError::DuplicateElement);
        }
    }
    Ok(pos)
}

/// Mean absolute difference between each element's index in `target` and
/// its index in `computed`.
pub fn average_displacement<T: Eq + Hash>(target: &[T], computed: &[T]) -> Result<f64, MetricError> {
    if target.is_empty() {
        return Err(MetricError::Empty("ranking"));
    }
    let target_pos = positions(target)?;
    let computed_pos = positions(computed)?;
    if target_pos.len() != computed_pos.len() {
        return Err(MetricError::MismatchedRankings);
    }
    let mut total = 0usize;
    for (x, &i) in &target_pos {
        let j = *computed_pos.get(x).ok_or(MetricError::MismatchedRankings)?;
        total += i.abs_diff(j);
    }
    Ok(total as f64 / target.len() as f64)
}

/// Extrapolated rank-biased overlap of two rankings with persistence `p`.
///
/// Lists of different lengths are handled by assuming the agreement seen at
/// the end of the shorter list continues.
pub fn rbo<T: Eq + Hash>(a: &[T], b: &[T], p: f64) -> Result<f64, MetricError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(MetricError::Persistence(p));
    }
    positions(a)?;
    positions(b)?;
    let (short, long) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let (s, l) = (short.len(), long.len());
    if s == 0 {
        return Ok(if l == 0 { 1.0 } else { 0.0 });
    }

    let mut seen_short: HashSet<&T> = HashSet::with_capacity(s);
    let mut seen_long: HashSet<&T> = HashSet::with_capacity(l);
    let mut overlap = 0usize;
    let mut overlap_at_s = 0usize;
    let mut sum = 0.0;
    let mut weight = 1.0; // p^d
    for d in 1..=l {
        weight *= p;
        let x = &long[d - 1];
        if d <= s {
            let y = &short[d - 1];
            if x == y {
                overlap += 1;
            } else {
                overlap += usize::from(seen_short.contains(x)) + usize::from(seen_long.contains(y));
            }
            seen_short.insert(y);
        } else {
            overlap += usize::from(seen_short.contains(x));
        }
        seen_long.insert(x);
        if d == s {
            overlap_at_s = overlap;
        }
        sum += overlap as f64 / d as f64 * weight;
        if d > s {
            sum += overlap_at_s as f64 * (d - s) as f64 / (s * d) as f64 * weight;
        }
    }
    let tail = ((overlap as f64 - overlap_at_s as f64) / l as f64 + overlap_at_s as f64 / s as f64) * weight;
    Ok(((1.0 - p) / p * sum + tail).clamp(0.0, 1.0))
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

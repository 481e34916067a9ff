use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::EvalError;

/// Mean over relevant items of precision at each relevant hit. Relevant items
/// that were never retrieved contribute zero.
pub fn average_precision<S: AsRef<str>>(ranking: &[S], relevant: &HashSet<String>) -> Result<f64, EvalError> {
    if relevant.is_empty() {
        return Err(EvalError::EmptyRelevant);
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, id) in ranking.iter().enumerate() {
        if relevant.contains(id.as_ref()) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    Ok(sum / relevant.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TopK {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision keeps `k` in the denominator even when fewer than `k` items
/// were retrieved.
pub fn topk_metrics<S: AsRef<str>>(
    ranking: &[S],
    relevant: &HashSet<String>,
    k: usize,
) -> Result<TopK, EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroK);
    }
    if relevant.is_empty() {
        return Err(EvalError::EmptyRelevant);
    }
    let hits = ranking
        .iter()
        .take(k)
        .filter(|id| relevant.contains(id.as_ref()))
        .count();
    let precision = hits as f64 / k as f64;
    let recall = hits as f64 / relevant.len() as f64;
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(TopK { precision, recall, f1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(ids: &[&str]) -> HashSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ap_examples() {
        assert_eq!(average_precision(&["a", "x", "b"], &rel(&["a", "b"])).unwrap(), (1.0 + 2.0 / 3.0) / 2.0);
        assert_eq!(average_precision(&["a", "b", "x"], &rel(&["a", "b"])).unwrap(), 1.0);
        assert_eq!(average_precision(&["x", "y"], &rel(&["a"])).unwrap(), 0.0);
        assert!(average_precision(&["a"], &rel(&[])).is_err());
    }

    #[test]
    fn topk_examples() {
        let m = topk_metrics(&["a", "x", "b", "y", "z"], &rel(&["a", "b", "c", "d"]), 5).unwrap();
        assert_eq!(m.precision, 0.4);
        assert_eq!(m.recall, 0.5);
        assert_eq!(m.f1, 2.0 * 0.4 * 0.5 / 0.9);
        let short = topk_metrics(&["a"], &rel(&["a"]), 5).unwrap();
        assert_eq!(short.precision, 0.2);
        let none = topk_metrics(&["x"], &rel(&["a"]), 1).unwrap();
        assert_eq!(none.f1, 0.0);
        assert!(topk_metrics(&["a"], &rel(&["a"]), 0).is_err());
    }
}

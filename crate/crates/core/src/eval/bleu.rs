use std::collections::HashMap;

use crate::corpus::Tokenizer;

use super::EvalError;

pub const BLEU_VARIANT: &str =
    "sentence-BLEU, max order 4, add-one smoothing on orders 2-4, closest-reference brevity penalty, mean over top-10 candidates";

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *counts.entry(w).or_insert(0) += 1;
        }
    }
    counts
}

/// Smoothed sentence BLEU of one tokenized candidate against a reference set.
///
/// Unigram precision is unsmoothed, so a candidate sharing no token with any
/// reference scores 0. Orders 2 and up use `(matches + 1) / (total + 1)`.
pub fn sentence_bleu(candidate: &[String], references: &[Vec<String>], max_n: usize) -> f64 {
    if candidate.is_empty() || references.is_empty() || max_n == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let cand = ngram_counts(candidate, n);
        let mut max_ref: HashMap<&[String], usize> = HashMap::new();
        for r in references {
            for (g, c) in ngram_counts(r, n) {
                let e = max_ref.entry(g).or_insert(0);
                *e = (*e).max(c);
            }
        }
        let matches: usize = cand
            .iter()
            .map(|(g, c)| (*c).min(max_ref.get(g).copied().unwrap_or(0)))
            .sum();
        let total = candidate.len().saturating_sub(n - 1);
        let p = if n == 1 {
            if matches == 0 {
                return 0.0;
            }
            matches as f64 / total as f64
        } else {
            (matches + 1) as f64 / (total + 1) as f64
        };
        log_sum += p.ln() / max_n as f64;
    }
    let c = candidate.len();
    let r = references
        .iter()
        .map(Vec::len)
        .min_by_key(|&len| (len.abs_diff(c), len))
        .unwrap_or(0);
    let bp = if c > r { 1.0 } else { (1.0 - r as f64 / c as f64).exp() };
    bp * log_sum.exp()
}

/// Mean sentence BLEU of each candidate text against all reference texts.
pub fn bleu(
    candidates: &[&str],
    references: &[&str],
    tokenizer: &dyn Tokenizer,
    max_n: usize,
) -> Result<f64, EvalError> {
    if candidates.is_empty() {
        return Err(EvalError::NoCandidates);
    }
    let refs: Vec<Vec<String>> = references.iter().map(|r| tokenizer.tokenize(r)).collect();
    let sum: f64 = candidates
        .iter()
        .map(|c| sentence_bleu(&tokenizer.tokenize(c), &refs, max_n))
        .sum();
    Ok(sum / candidates.len() as f64)
}

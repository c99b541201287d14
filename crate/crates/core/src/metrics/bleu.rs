//! Sentence and corpus BLEU: clipped n-gram precision, brevity penalty,
//! geometric mean over n-gram orders.

use super::tokenize::TokenSequence;
use std::collections::HashMap;

/// Policy for zero n-gram precisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothing {
    /// Any zero precision collapses the sentence score to 0.
    None,
    /// A zero clipped count is replaced by `epsilon / total`.
    AddEpsilon(f64),
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing::None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BleuParams {
    /// Highest n-gram order; the effective order is capped at the
    /// candidate length.
    pub max_n: usize,
    pub smoothing: Smoothing,
}

impl Default for BleuParams {
    fn default() -> Self {
        BleuParams {
            max_n: 4,
            smoothing: Smoothing::None,
        }
    }
}

/// How corpus BLEU aggregates over sentences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusBleuMode {
    /// Arithmetic mean of sentence scores.
    SentenceAverage,
    /// Counts pooled over the corpus before the formula is applied once.
    Pooled,
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if n == 0 || tokens.len() < n {
        return counts;
    }
    for window in tokens.windows(n) {
        *counts.entry(window).or_insert(0) += 1;
    }
    counts
}

fn clipped_counts(cand: &[String], refr: &[String], n: usize) -> (usize, usize) {
    let cand_counts = ngram_counts(cand, n);
    let ref_counts = ngram_counts(refr, n);
    let mut clipped = 0;
    let mut total = 0;
    for (gram, count) in &cand_counts {
        total += count;
        clipped += count.min(ref_counts.get(gram).unwrap_or(&0));
    }
    (clipped, total)
}

/// Clipped n-gram precision: matched candidate n-grams (capped by their
/// reference counts) over total candidate n-grams. Returns 0 when the
/// candidate has no n-grams of this order.
pub fn ngram_precision(candidate: &TokenSequence, reference: &TokenSequence, n: usize) -> f64 {
    let (clipped, total) = clipped_counts(candidate.tokens(), reference.tokens(), n);
    if total == 0 {
        0.0
    } else {
        clipped as f64 / total as f64
    }
}

/// Brevity penalty: 1 when the candidate is longer than the reference,
/// otherwise `exp(1 - r/c)`; an empty candidate scores 0.
pub fn brevity_penalty(candidate_len: usize, reference_len: usize) -> f64 {
    if candidate_len == 0 {
        0.0
    } else if candidate_len > reference_len {
        1.0
    } else {
        (1.0 - reference_len as f64 / candidate_len as f64).exp()
    }
}

/// Sentence BLEU with uniform weights over orders `1..=min(max_n, |candidate|)`.
pub fn bleu(candidate: &TokenSequence, reference: &TokenSequence, params: &BleuParams) -> f64 {
    let cand = candidate.tokens();
    let refr = reference.tokens();
    if cand.is_empty() {
        return 0.0;
    }
    let n_eff = params.max_n.min(cand.len()).max(1);
    let weight = 1.0 / n_eff as f64;
    let mut log_sum = 0.0;
    for n in 1..=n_eff {
        let (clipped, total) = clipped_counts(cand, refr, n);
        let p = match (clipped, params.smoothing) {
            (0, Smoothing::None) => return 0.0,
            (0, Smoothing::AddEpsilon(eps)) => eps / total as f64,
            (c, _) => c as f64 / total as f64,
        };
        log_sum += weight * p.ln();
    }
    brevity_penalty(cand.len(), refr.len()) * log_sum.exp()
}

/// Corpus BLEU over aligned (candidate, reference) pairs.
pub fn bleu_corpus(
    pairs: &[(TokenSequence, TokenSequence)],
    params: &BleuParams,
    mode: CorpusBleuMode,
) -> f64 {
    if pairs.is_empty() {
        return 0.0;
    }
    match mode {
        CorpusBleuMode::SentenceAverage => {
            pairs.iter().map(|(c, r)| bleu(c, r, params)).sum::<f64>() / pairs.len() as f64
        }
        CorpusBleuMode::Pooled => {
            let cand_len: usize = pairs.iter().map(|(c, _)| c.len()).sum();
            let ref_len: usize = pairs.iter().map(|(_, r)| r.len()).sum();
            if cand_len == 0 {
                return 0.0;
            }
            let weight = 1.0 / params.max_n as f64;
            let mut log_sum = 0.0;
            for n in 1..=params.max_n {
                let mut clipped = 0;
                let mut total = 0;
                for (c, r) in pairs {
                    let (cl, t) = clipped_counts(c.tokens(), r.tokens(), n);
                    clipped += cl;
                    total += t;
                }
                let p = match (clipped, total, params.smoothing) {
                    (0, _, Smoothing::None) | (_, 0, Smoothing::None) => return 0.0,
                    (_, 0, Smoothing::AddEpsilon(eps)) => eps,
                    (0, t, Smoothing::AddEpsilon(eps)) => eps / t as f64,
                    (c, t, _) => c as f64 / t as f64,
                };
                log_sum += weight * p.ln();
            }
            brevity_penalty(cand_len, ref_len) * log_sum.exp()
        }
    }
}

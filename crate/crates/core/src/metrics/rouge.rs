//! ROUGE-L: longest common subsequence recall, precision and weighted F.

use super::tokenize::TokenSequence;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeParams {
    /// Recall weight in the F measure.
    pub beta: f64,
}

impl Default for RougeParams {
    fn default() -> Self {
        RougeParams { beta: 1.2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Length of the longest common subsequence, O(|x|·|y|) time and
/// O(min(|x|,|y|)) space.
pub fn lcs_length(x: &TokenSequence, y: &TokenSequence) -> usize {
    lcs_tokens(x.tokens(), y.tokens())
}

pub(crate) fn lcs_tokens(x: &[String], y: &[String]) -> usize {
    let (short, long) = if x.len() <= y.len() { (x, y) } else { (y, x) };
    if short.is_empty() {
        return 0;
    }
    let mut row = vec![0usize; short.len() + 1];
    for item in long {
        let mut diag = 0;
        for (j, s) in short.iter().enumerate() {
            let up = row[j + 1];
            row[j + 1] = if item == s {
                diag + 1
            } else {
                up.max(row[j])
            };
            diag = up;
        }
    }
    row[short.len()]
}

/// LCS-based precision, recall and weighted F1. Both sequences empty
/// yields (0, 0, 0); any 0/0 inside the formula collapses to 0.
pub fn rouge_l(candidate: &TokenSequence, reference: &TokenSequence, params: &RougeParams) -> RougeScore {
    let m = reference.len();
    let n = candidate.len();
    if m == 0 || n == 0 {
        return RougeScore::default();
    }
    let lcs = lcs_length(candidate, reference) as f64;
    let recall = lcs / m as f64;
    let precision = lcs / n as f64;
    let beta_sq = params.beta * params.beta;
    let denom = recall + beta_sq * precision;
    let f1 = if denom > 0.0 {
        (1.0 + beta_sq) * recall * precision / denom
    } else {
        0.0
    };
    RougeScore { precision, recall, f1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::tokenize::Granularity;

    fn chars(s: &str) -> TokenSequence {
        TokenSequence::tokenize(s, Granularity::Character)
    }

    // Exhaustive oracle: enumerate every subsequence of the shorter side.
    fn lcs_oracle(x: &[String], y: &[String]) -> usize {
        let (short, long) = if x.len() <= y.len() { (x, y) } else { (y, x) };
        let mut best = 0;
        for mask in 0u32..(1 << short.len()) {
            let sub: Vec<&String> = short
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| t)
                .collect();
            if sub.len() <= best {
                continue;
            }
            let mut it = long.iter();
            if sub.iter().all(|s| it.any(|l| l == *s)) {
                best = sub.len();
            }
        }
        best
    }

    #[test]
    fn classic_lcs_case() {
        assert_eq!(lcs_length(&chars("ABCBDAB"), &chars("BDCABA")), 4);
    }

    #[test]
    fn lcs_identity_and_empty() {
        let x = chars("abcde");
        assert_eq!(lcs_length(&x, &x), 5);
        assert_eq!(lcs_length(&x, &chars("")), 0);
        assert_eq!(lcs_length(&chars(""), &chars("")), 0);
    }

    #[test]
    fn lcs_matches_oracle_on_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let alphabet = ["a", "b", "c"];
        for _ in 0..2000 {
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let len = rng.gen_range(0..=8);
                let toks: Vec<String> = (0..len)
                    .map(|_| alphabet[rng.gen_range(0..alphabet.len())].to_string())
                    .collect();
                TokenSequence::from_tokens(toks, Granularity::Character)
            };
            let x = mk(&mut rng);
            let y = mk(&mut rng);
            let got = lcs_length(&x, &y);
            assert_eq!(got, lcs_oracle(x.tokens(), y.tokens()));
            // symmetry and the min-length bound
            assert_eq!(got, lcs_length(&y, &x));
            assert!(got <= x.len().min(y.len()));
        }
    }

    #[test]
    fn rouge_hand_computed_pair() {
        // LCS("ace", "abcde") = 3
        let score = rouge_l(&chars("ace"), &chars("abcde"), &RougeParams { beta: 1.0 });
        assert!((score.precision - 1.0).abs() < 1e-12);
        assert!((score.recall - 0.6).abs() < 1e-12);
        assert!((score.f1 - 0.75).abs() < 1e-12);

        let weighted = rouge_l(&chars("ace"), &chars("abcde"), &RougeParams { beta: 1.2 });
        let expect = (1.0 + 1.44) * 0.6 * 1.0 / (0.6 + 1.44 * 1.0);
        assert!((weighted.f1 - expect).abs() < 1e-12);
        assert!((weighted.f1 - 0.7176).abs() < 5e-4);
    }

    #[test]
    fn rouge_identity_and_empty() {
        let x = chars("平等对待每个人");
        let s = rouge_l(&x, &x, &RougeParams::default());
        assert_eq!((s.precision, s.recall, s.f1), (1.0, 1.0, 1.0));
        let e = rouge_l(&chars(""), &chars(""), &RougeParams::default());
        assert_eq!((e.precision, e.recall, e.f1), (0.0, 0.0, 0.0));
    }

    #[test]
    fn appending_matching_token_never_lowers_recall() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let alphabet = ["a", "b"];
        for _ in 0..500 {
            let len = rng.gen_range(1..=6);
            let refr: Vec<String> = (0..len)
                .map(|_| alphabet[rng.gen_range(0..2)].to_string())
                .collect();
            let cand: Vec<String> = (0..rng.gen_range(0..=4))
                .map(|_| alphabet[rng.gen_range(0..2)].to_string())
                .collect();
            let r_seq = TokenSequence::from_tokens(refr.clone(), Granularity::Character);
            let base = rouge_l(
                &TokenSequence::from_tokens(cand.clone(), Granularity::Character),
                &r_seq,
                &RougeParams::default(),
            );
            let mut extended = cand;
            extended.push(refr.last().unwrap().clone());
            let more = rouge_l(
                &TokenSequence::from_tokens(extended, Granularity::Character),
                &r_seq,
                &RougeParams::default(),
            );
            assert!(more.recall >= base.recall - 1e-12);
        }
    }
}

//! Surface-similarity metrics for description text.
//!
//! All three metrics share one tokenizer: case-folded, split on
//! whitespace, with every punctuation character its own token. They
//! score 1.0 on identical inputs and 0.0 on token-disjoint ones.

use std::collections::HashMap;

/// ROUGE family member to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RougeVariant {
    One,
    Two,
    Lcs,
}

/// Lowercase tokens: alphanumeric runs, plus one token per other
/// non-whitespace character.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut run = String::new();
    for c in text.to_lowercase().chars() {
        if c.is_alphanumeric() {
            run.push(c);
        } else {
            if !run.is_empty() {
                tokens.push(std::mem::take(&mut run));
            }
            if !c.is_whitespace() {
                tokens.push(c.to_string());
            }
        }
    }
    if !run.is_empty() {
        tokens.push(run);
    }
    tokens
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Overlap with reference-clipped counts, as used by both BLEU and ROUGE.
fn clipped_overlap(pred: &HashMap<&[String], usize>, gold: &HashMap<&[String], usize>) -> usize {
    pred.iter()
        .map(|(gram, &count)| count.min(gold.get(gram).copied().unwrap_or(0)))
        .sum()
}

/// BLEU with uniform n-gram weights and the brevity penalty, unsmoothed.
///
/// Orders longer than the candidate contribute no n-grams and are left
/// out of the geometric mean, so short identical strings still score 1.
pub fn bleu(pred: &str, reference: &str, max_n: usize) -> f64 {
    let p = tokenize(pred);
    let r = tokenize(reference);
    if p.is_empty() || r.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    let mut orders = 0;
    for n in 1..=max_n.min(p.len()) {
        let pred_grams = ngram_counts(&p, n);
        let total: usize = pred_grams.values().sum();
        let hit = clipped_overlap(&pred_grams, &ngram_counts(&r, n));
        if hit == 0 {
            return 0.0;
        }
        log_sum += (hit as f64 / total as f64).ln();
        orders += 1;
    }
    if orders == 0 {
        return 0.0;
    }
    let precision = (log_sum / orders as f64).exp();
    let brevity = if p.len() >= r.len() {
        1.0
    } else {
        (1.0 - r.len() as f64 / p.len() as f64).exp()
    };
    precision * brevity
}

fn f1(overlap: usize, pred_total: usize, gold_total: usize) -> f64 {
    if overlap == 0 || pred_total == 0 || gold_total == 0 {
        return 0.0;
    }
    let precision = overlap as f64 / pred_total as f64;
    let recall = overlap as f64 / gold_total as f64;
    2.0 * precision * recall / (precision + recall)
}

fn lcs_len(a: &[String], b: &[String]) -> usize {
    let mut prev = vec![0usize; b.len() + 1];
    let mut cur = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            cur[j + 1] = if x == y { prev[j] + 1 } else { prev[j + 1].max(cur[j]) };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// ROUGE-1, ROUGE-2 (clipped n-gram F1), or ROUGE-L (LCS F1).
pub fn rouge(pred: &str, reference: &str, variant: RougeVariant) -> f64 {
    let p = tokenize(pred);
    let r = tokenize(reference);
    match variant {
        RougeVariant::One | RougeVariant::Two => {
            let n = if variant == RougeVariant::One { 1 } else { 2 };
            let pred_grams = ngram_counts(&p, n);
            let gold_grams = ngram_counts(&r, n);
            let overlap = clipped_overlap(&pred_grams, &gold_grams);
            f1(overlap, pred_grams.values().sum(), gold_grams.values().sum())
        }
        RougeVariant::Lcs => f1(lcs_len(&p, &r), p.len(), r.len()),
    }
}

/// METEOR on exact unigram alignments, without stemming or synonym
/// tables. A single contiguous alignment carries no fragmentation
/// penalty, so identical strings score exactly 1.
pub fn meteor_lite(pred: &str, reference: &str) -> f64 {
    let p = tokenize(pred);
    let r = tokenize(reference);
    if p.is_empty() || r.is_empty() {
        return 0.0;
    }
    // Greedy left-to-right alignment: each candidate token takes the
    // first unused identical reference token.
    let mut used = vec![false; r.len()];
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (i, tok) in p.iter().enumerate() {
        if let Some(j) = r.iter().enumerate().position(|(j, y)| !used[j] && y == tok) {
            used[j] = true;
            pairs.push((i, j));
        }
    }
    let matches = pairs.len();
    if matches == 0 {
        return 0.0;
    }
    let precision = matches as f64 / p.len() as f64;
    let recall = matches as f64 / r.len() as f64;
    let fmean = 10.0 * precision * recall / (recall + 9.0 * precision);
    let mut chunks = 1usize;
    for w in pairs.windows(2) {
        if w[1].0 != w[0].0 + 1 || w[1].1 != w[0].1 + 1 {
            chunks += 1;
        }
    }
    let penalty = if chunks <= 1 {
        0.0
    } else {
        0.5 * (chunks as f64 / matches as f64).powi(3)
    };
    fmean * (1.0 - penalty)
}

//! Exact-match predicates, fingerprint similarity, and the numeric
//! metrics. Matching is always against a set of references; one hit
//! anywhere counts, so adding a reference never breaks a match.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::canon::canonical_smiles;
use crate::eval::extract::{extract_answer, undo_fragment_semicolons, AnswerKind};
use crate::eval::score::Prediction;
use crate::fingerprint::{morgan_fingerprint, path_fingerprint, tanimoto, Fingerprint};
use crate::formula::parse_formula;
use crate::smiles::parse_smiles;
use crate::validity::validate;

/// Fingerprint family used for similarity scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FtsKind {
    Morgan,
    Path,
}

/// Answer kinds that have an exact-match predicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmKind {
    Smiles,
    Formula,
    Iupac,
}

impl EmKind {
    pub fn answer_kind(self) -> AnswerKind {
        match self {
            EmKind::Smiles => AnswerKind::Smiles,
            EmKind::Formula => AnswerKind::Formula,
            EmKind::Iupac => AnswerKind::Iupac,
        }
    }
}

/// Dispatch to the kind's exact-match predicate.
pub fn em_match(pred: &str, refs: &[String], kind: EmKind) -> bool {
    match kind {
        EmKind::Smiles => em_smiles(pred, refs),
        EmKind::Formula => em_formula(pred, refs),
        EmKind::Iupac => em_iupac(pred, refs),
    }
}

/// Fixed fingerprint parameters for scoring, so reported similarities
/// are comparable across runs.
const FTS_WIDTH: usize = 2048;
const FTS_MORGAN_RADIUS: u32 = 2;
const FTS_PATH_MIN: usize = 1;
const FTS_PATH_MAX: usize = 7;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("length mismatch: {preds} predictions against {golds} golds")]
    LengthMismatch { preds: usize, golds: usize },
    #[error("metric needs at least one value")]
    Empty,
}

/// True when the prediction names the same molecule as any reference.
pub fn em_smiles(pred: &str, refs: &[String]) -> bool {
    let Ok(p) = canonical_smiles(&undo_fragment_semicolons(pred)) else {
        return false;
    };
    refs.iter()
        .filter_map(|r| canonical_smiles(&undo_fragment_semicolons(r)).ok())
        .any(|r| r == p)
}

/// True when the prediction has the same atom multiset as any reference.
pub fn em_formula(pred: &str, refs: &[String]) -> bool {
    let Ok(p) = parse_formula(pred.trim()) else {
        return false;
    };
    refs.iter()
        .filter_map(|r| parse_formula(r.trim()).ok())
        .any(|r| r.matches(&p))
}

/// Split a name on semicolons into a case-folded part set.
fn iupac_parts(text: &str) -> BTreeSet<String> {
    text.split(';')
        .map(|p| p.trim().to_lowercase())
        .filter(|p| !p.is_empty())
        .collect()
}

/// True when the prediction's part set equals any reference's.
pub fn em_iupac(pred: &str, refs: &[String]) -> bool {
    let p = iupac_parts(pred);
    if p.is_empty() {
        return false;
    }
    refs.iter().any(|r| iupac_parts(r) == p)
}

fn scoring_fingerprint(text: &str, kind: FtsKind) -> Option<Fingerprint> {
    let mol = parse_smiles(&undo_fragment_semicolons(text)).ok()?;
    Some(match kind {
        FtsKind::Morgan => morgan_fingerprint(&mol, FTS_MORGAN_RADIUS, FTS_WIDTH),
        FtsKind::Path => path_fingerprint(&mol, FTS_PATH_MIN, FTS_PATH_MAX, FTS_WIDTH),
    })
}

/// Fingerprint Tanimoto similarity; an unparseable side scores zero.
pub fn fts(pred: &str, reference: &str, kind: FtsKind) -> f64 {
    let (Some(p), Some(r)) = (scoring_fingerprint(pred, kind), scoring_fingerprint(reference, kind))
    else {
        return 0.0;
    };
    // Same kind and width by construction.
    tanimoto(&p, &r).unwrap()
}

/// Shared validity rule over already-extracted answers. Answers that
/// were never extracted fall out of the denominator.
pub(crate) fn validity_over<'a>(answers: impl Iterator<Item = Option<&'a str>>) -> Option<f64> {
    let mut extractable = 0usize;
    let mut valid = 0usize;
    for answer in answers.flatten() {
        extractable += 1;
        if validate(&undo_fragment_semicolons(answer)).valid {
            valid += 1;
        }
    }
    (extractable > 0).then(|| valid as f64 / extractable as f64)
}

/// Fraction of top-1 outputs with an extractable answer that validates.
///
/// Outputs with no extractable answer are excluded from the denominator;
/// when nothing is extractable there is no rate to report.
pub fn validity_rate(predictions: &[Prediction]) -> Option<f64> {
    let extracted: Vec<Option<String>> = predictions
        .iter()
        .map(|pred| {
            pred.raw_outputs
                .first()
                .and_then(|raw| extract_answer(raw, AnswerKind::Smiles))
        })
        .collect();
    validity_over(extracted.iter().map(Option::as_deref))
}

/// Root-mean-square error over paired values.
pub fn rmse(preds: &[f64], golds: &[f64]) -> Result<f64, MetricError> {
    if preds.len() != golds.len() {
        return Err(MetricError::LengthMismatch { preds: preds.len(), golds: golds.len() });
    }
    if preds.is_empty() {
        return Err(MetricError::Empty);
    }
    let sum: f64 = preds.iter().zip(golds).map(|(p, g)| (p - g) * (p - g)).sum();
    Ok((sum / preds.len() as f64).sqrt())
}

/// Fraction of positions where prediction and gold agree.
pub fn accuracy(preds: &[bool], golds: &[bool]) -> Result<f64, MetricError> {
    if preds.len() != golds.len() {
        return Err(MetricError::LengthMismatch { preds: preds.len(), golds: golds.len() });
    }
    if preds.is_empty() {
        return Err(MetricError::Empty);
    }
    let hits = preds.iter().zip(golds).filter(|(p, g)| p == g).count();
    Ok(hits as f64 / preds.len() as f64)
}

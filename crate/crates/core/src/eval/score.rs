//! Task-level scoring: pair model outputs with gold references and
//! compute the task's metric bundle.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::record::Task;
use crate::eval::extract::{extract_answer, AnswerKind};
use crate::eval::metrics::{
    accuracy, em_match, fts, rmse, validity_over, EmKind, FtsKind, MetricError,
};
use crate::eval::text::{bleu, meteor_lite, rouge, RougeVariant};
use crate::formula::parse_formula;
use crate::validity::validate;

/// Model outputs for one record, best candidate first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub record_id: String,
    #[serde(rename = "outputs")]
    pub raw_outputs: Vec<String>,
}

/// Gold answers for one record. Records sharing an input share all of
/// their gold answers, so this is a list even for single-answer tasks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceSet {
    pub record_id: String,
    pub references: Vec<String>,
}

/// How many predictions were scored directly, how many had no
/// extractable answer, and how many extracted answers failed to parse
/// or validate in their domain. Scored and unextractable always sum to
/// the number of predictions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub scored: usize,
    pub unextractable: usize,
    pub invalid: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub task: Task,
    pub metrics: BTreeMap<String, f64>,
    pub counts: Counts,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("prediction {0} has no outputs")]
    EmptyOutputs(String),
    #[error("reference set {0} is empty")]
    EmptyReferences(String),
    #[error("no reference set for prediction {0}")]
    MissingReference(String),
    #[error("reference {value:?} for {record_id} is not a {expected}")]
    BadReference { record_id: String, value: String, expected: &'static str },
    #[error("nothing to score")]
    NoPredictions,
    #[error("top-k needs k >= 1")]
    ZeroK,
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The answer shape each task's responses carry.
pub fn answer_kind_for(task: Task) -> AnswerKind {
    match task {
        Task::NcI2f | Task::NcS2f => AnswerKind::Formula,
        Task::NcS2i => AnswerKind::Iupac,
        Task::NcI2s | Task::Mg | Task::Fs | Task::Rs => AnswerKind::Smiles,
        Task::PpEsol | Task::PpLipo => AnswerKind::Number,
        Task::PpBbbp | Task::PpClinTox | Task::PpHiv | Task::PpSider => AnswerKind::Boolean,
        Task::Mc => AnswerKind::Text,
    }
}

fn parse_yes_no(text: &str) -> Option<bool> {
    match text.trim().to_lowercase().as_str() {
        "yes" | "true" => Some(true),
        "no" | "false" => Some(false),
        _ => None,
    }
}

/// Pair every prediction with its reference set, sorted by record id so
/// aggregation order never depends on input order.
fn paired<'a>(
    predictions: &'a [Prediction],
    references: &'a [ReferenceSet],
) -> Result<Vec<(&'a Prediction, &'a [String])>, EvalError> {
    let by_id: BTreeMap<&str, &ReferenceSet> =
        references.iter().map(|r| (r.record_id.as_str(), r)).collect();
    let mut rows = Vec::with_capacity(predictions.len());
    for pred in predictions {
        if pred.raw_outputs.is_empty() {
            return Err(EvalError::EmptyOutputs(pred.record_id.clone()));
        }
        let Some(set) = by_id.get(pred.record_id.as_str()) else {
            return Err(EvalError::MissingReference(pred.record_id.clone()));
        };
        if set.references.is_empty() {
            return Err(EvalError::EmptyReferences(pred.record_id.clone()));
        }
        rows.push((pred, set.references.as_slice()));
    }
    if rows.is_empty() {
        return Err(EvalError::NoPredictions);
    }
    rows.sort_by(|a, b| a.0.record_id.cmp(&b.0.record_id));
    Ok(rows)
}

/// Fraction of records where any of the first k outputs is an exact
/// match. Non-decreasing in k; k = 1 is plain exact match.
pub fn top_k_em(
    predictions: &[Prediction],
    references: &[ReferenceSet],
    k: usize,
    kind: EmKind,
) -> Result<f64, EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroK);
    }
    let rows = paired(predictions, references)?;
    let hits = rows
        .iter()
        .filter(|(pred, refs)| {
            pred.raw_outputs.iter().take(k).any(|raw| {
                extract_answer(raw, kind.answer_kind())
                    .is_some_and(|answer| em_match(&answer, refs, kind))
            })
        })
        .count();
    Ok(hits as f64 / rows.len() as f64)
}

/// Score one task's predictions and report its metric bundle.
pub fn score_task(
    predictions: &[Prediction],
    references: &[ReferenceSet],
    task: Task,
) -> Result<TaskReport, EvalError> {
    let rows = paired(predictions, references)?;
    let kind = answer_kind_for(task);
    let n = rows.len() as f64;
    let extracted: Vec<Option<String>> =
        rows.iter().map(|(pred, _)| extract_answer(&pred.raw_outputs[0], kind)).collect();

    let mut metrics = BTreeMap::new();
    let mut counts = Counts::default();
    match kind {
        AnswerKind::Smiles | AnswerKind::Formula | AnswerKind::Iupac => {
            let em_kind = match kind {
                AnswerKind::Smiles => EmKind::Smiles,
                AnswerKind::Formula => EmKind::Formula,
                _ => EmKind::Iupac,
            };
            let mut hits = 0usize;
            let mut fts_morgan = 0.0;
            let mut fts_path = 0.0;
            for ((_, refs), answer) in rows.iter().zip(&extracted) {
                let Some(answer) = answer else {
                    counts.unextractable += 1;
                    continue;
                };
                counts.scored += 1;
                if em_match(answer, refs, em_kind) {
                    hits += 1;
                }
                match kind {
                    AnswerKind::Smiles => {
                        if !validate(&answer.replace(';', ".")).valid {
                            counts.invalid += 1;
                        }
                        let best = |k: FtsKind| {
                            refs.iter().map(|r| fts(answer, r, k)).fold(0.0, f64::max)
                        };
                        fts_morgan += best(FtsKind::Morgan);
                        fts_path += best(FtsKind::Path);
                    }
                    AnswerKind::Formula if parse_formula(answer.trim()).is_err() => {
                        counts.invalid += 1;
                    }
                    _ => {}
                }
            }
            metrics.insert("em".to_string(), hits as f64 / n);
            if kind == AnswerKind::Smiles {
                metrics.insert("fts_morgan".to_string(), fts_morgan / n);
                metrics.insert("fts_path".to_string(), fts_path / n);
                if let Some(rate) = validity_over(extracted.iter().map(Option::as_deref)) {
                    metrics.insert("validity".to_string(), rate);
                }
            }
        }
        AnswerKind::Number => {
            let mut golds = Vec::with_capacity(rows.len());
            let mut parsed: Vec<Option<f64>> = Vec::with_capacity(rows.len());
            for ((pred, refs), answer) in rows.iter().zip(&extracted) {
                let gold: f64 = refs[0].trim().parse().map_err(|_| EvalError::BadReference {
                    record_id: pred.record_id.clone(),
                    value: refs[0].clone(),
                    expected: "number",
                })?;
                golds.push(gold);
                parsed.push(answer.as_deref().and_then(|a| a.trim().parse().ok()));
            }
            counts.scored = parsed.iter().flatten().count();
            counts.unextractable = rows.len() - counts.scored;
            // Records without a usable number are imputed with the gold
            // mean, so refusals still pay a full error term.
            let mean = golds.iter().sum::<f64>() / n;
            let filled: Vec<f64> = parsed.iter().map(|p| p.unwrap_or(mean)).collect();
            metrics.insert("rmse".to_string(), rmse(&filled, &golds)?);
        }
        AnswerKind::Boolean => {
            let mut gold_bools = Vec::with_capacity(rows.len());
            let mut pred_bools = Vec::with_capacity(rows.len());
            for ((pred, refs), answer) in rows.iter().zip(&extracted) {
                let gold = parse_yes_no(&refs[0]).ok_or_else(|| EvalError::BadReference {
                    record_id: pred.record_id.clone(),
                    value: refs[0].clone(),
                    expected: "boolean",
                })?;
                gold_bools.push(gold);
                let parsed = answer.as_deref().and_then(parse_yes_no);
                if parsed.is_some() {
                    counts.scored += 1;
                } else {
                    counts.unextractable += 1;
                }
                // An unreadable answer is simply wrong.
                pred_bools.push(parsed.unwrap_or(!gold));
            }
            metrics.insert("accuracy".to_string(), accuracy(&pred_bools, &gold_bools)?);
        }
        AnswerKind::Text => {
            let mut sums = [0.0f64; 6];
            for ((_, refs), answer) in rows.iter().zip(&extracted) {
                let Some(answer) = answer else {
                    counts.unextractable += 1;
                    continue;
                };
                counts.scored += 1;
                let best = |f: &dyn Fn(&str, &str) -> f64| {
                    refs.iter().map(|r| f(answer, r)).fold(0.0, f64::max)
                };
                sums[0] += best(&|a, b| bleu(a, b, 2));
                sums[1] += best(&|a, b| bleu(a, b, 4));
                sums[2] += best(&|a, b| rouge(a, b, RougeVariant::One));
                sums[3] += best(&|a, b| rouge(a, b, RougeVariant::Two));
                sums[4] += best(&|a, b| rouge(a, b, RougeVariant::Lcs));
                sums[5] += best(&meteor_lite);
            }
            let names = ["bleu2", "bleu4", "rouge1", "rouge2", "rougeL", "meteor_lite"];
            for (name, sum) in names.iter().zip(sums) {
                metrics.insert(name.to_string(), sum / n);
            }
        }
    }
    Ok(TaskReport { task, metrics, counts })
}

/// Aligned plain-text rendering of a set of task reports.
pub fn report_table(reports: &[TaskReport]) -> String {
    let mut rows = vec![[
        "task".to_string(),
        "records".to_string(),
        "unextractable".to_string(),
        "invalid".to_string(),
        "metrics".to_string(),
    ]];
    for report in reports {
        let metrics = report
            .metrics
            .iter()
            .map(|(name, value)| format!("{name}={value:.4}"))
            .collect::<Vec<_>>()
            .join("  ");
        rows.push([
            report.task.code().to_string(),
            (report.counts.scored + report.counts.unextractable).to_string(),
            report.counts.unextractable.to_string(),
            report.counts.invalid.to_string(),
            metrics,
        ]);
    }
    let mut widths = [0usize; 4];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row.iter()) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        for (w, cell) in widths.iter().zip(row.iter()) {
            out.push_str(cell);
            out.push_str(&" ".repeat(w - cell.len() + 2));
        }
        out.push_str(&row[4]);
        out.push('\n');
    }
    out
}

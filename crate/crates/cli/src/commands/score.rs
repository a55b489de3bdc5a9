use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

use molforge::eval::{answer_kind_for, top_k_em, EmKind};
use molforge::{import_jsonl, report_table, score_task, AnswerKind, Prediction, ReferenceSet, Task};

/// Scores one task and writes the report file; the metric table goes
/// to stdout.
pub fn run(
    task_code: &str,
    predictions: &Path,
    references: &Path,
    k: Option<usize>,
    out: &Path,
) -> Result<bool> {
    let task: Task = task_code
        .parse()
        .map_err(|_| anyhow!("unknown task code {task_code:?}"))?;
    let preds: Vec<Prediction> = import_jsonl(predictions)?;
    let refs: Vec<ReferenceSet> = import_jsonl(references)?;
    let mut report = score_task(&preds, &refs, task)?;

    if let Some(k) = k {
        let kind = match answer_kind_for(task) {
            AnswerKind::Smiles => EmKind::Smiles,
            AnswerKind::Formula => EmKind::Formula,
            AnswerKind::Iupac => EmKind::Iupac,
            other => bail!("--k applies only to exact-match tasks, not {other:?} answers"),
        };
        report.metrics.insert(format!("em_top{k}"), top_k_em(&preds, &refs, k, kind)?);
    }

    std::fs::write(out, serde_json::to_string_pretty(&report)? + "\n")
        .with_context(|| format!("writing {}", out.display()))?;
    print!("{}", report_table(std::slice::from_ref(&report)));
    Ok(true)
}

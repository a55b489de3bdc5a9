//! Evaluation of model outputs: answer extraction, exact-match and
//! similarity metrics, and per-task report assembly.

pub mod extract;
pub mod metrics;
pub mod score;
pub mod text;

pub use extract::{extract_answer, AnswerKind};
pub use metrics::{
    accuracy, em_formula, em_iupac, em_match, em_smiles, fts, rmse, validity_rate, EmKind,
    FtsKind, MetricError,
};
pub use score::{
    answer_kind_for, report_table, score_task, top_k_em, Counts, EvalError, Prediction,
    ReferenceSet, TaskReport,
};
pub use text::{bleu, meteor_lite, rouge, tokenize, RougeVariant};

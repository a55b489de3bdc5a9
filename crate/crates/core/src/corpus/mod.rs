//! Corpus pipeline: typed records, source ingestion, deduplication,
//! linkage-aware splitting, and instruction rendering.

pub mod dedup;
pub mod ingest;
pub mod jsonl;
pub mod linkage;
pub mod record;
pub mod render;
pub mod split;
pub mod template;

pub use dedup::{dedup, record_key};
pub use ingest::{
    ingest_source, DescriptionRules, IngestError, IngestOutcome, IngestSettings, Reject,
    SourceFormat, SourceSpec,
};
pub use jsonl::{export_jsonl, import_jsonl, JsonlError};
pub use linkage::{linkage_groups, linkage_keys, LinkageKey, LinkageKind, UnionFind};
pub use record::{CorpusRecord, Payload, Split, Task, ALL_TASKS};
pub use render::{render, InstructionSample, RenderError};
pub use split::{assign_splits, leakage_audit, LeakageAudit, SplitError, SplitOptions, SplitOutcome};
pub use template::{Template, TemplateError, TemplateSet};

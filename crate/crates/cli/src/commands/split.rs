use std::path::Path;

use anyhow::{Context, Result};

use molforge::{assign_splits, export_jsonl, import_jsonl, leakage_audit, CorpusRecord};

use crate::config::PipelineConfig;

/// Assigns splits in place, rewrites records.jsonl, and writes the
/// audit next to it. A failed audit still writes both files but exits
/// nonzero.
pub fn run(config_path: &Path, input: Option<&Path>) -> Result<bool> {
    let config = PipelineConfig::load(config_path)?;
    let in_path = input.map(Path::to_path_buf).unwrap_or_else(|| config.records_path());
    let mut records: Vec<CorpusRecord> = import_jsonl(&in_path)?;
    let outcome = assign_splits(&mut records, &config.split)?;
    for warning in &outcome.warnings {
        eprintln!("warning: {warning}");
    }

    let audit = leakage_audit(&records);
    std::fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("creating {}", config.output_dir.display()))?;
    export_jsonl(&records, &config.records_path())?;
    let audit_path = config.output_dir.join("leakage_audit.json");
    std::fs::write(&audit_path, serde_json::to_string_pretty(&audit)? + "\n")
        .with_context(|| format!("writing {}", audit_path.display()))?;

    if audit.ok {
        eprintln!("split {} records; audit clean", audit.records);
        Ok(true)
    } else {
        eprintln!(
            "leakage audit failed: {} cross-split violations, {} unsplit records",
            audit.cross_split_violations, audit.unsplit_records
        );
        Ok(false)
    }
}

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use molforge::corpus::{IngestOutcome, Reject};
use molforge::{dedup, export_jsonl, ingest_source};

use crate::config::PipelineConfig;

#[derive(Serialize)]
struct SourceStats {
    records: usize,
    rejects: usize,
}

#[derive(Serialize)]
struct BuildStats {
    records: usize,
    duplicates_removed: usize,
    rejects: usize,
    per_task: BTreeMap<String, usize>,
    per_source: BTreeMap<String, SourceStats>,
}

/// Ingests every configured source, concatenates in config order,
/// removes duplicates, and writes records.jsonl, rejects.jsonl, and
/// stats.json under the output directory.
pub fn run(config_path: &Path) -> Result<bool> {
    let config = PipelineConfig::load(config_path)?;
    std::fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("creating {}", config.output_dir.display()))?;
    let settings = config.ingest_settings();

    let outcomes: Vec<(String, IngestOutcome)> = config
        .sources
        .par_iter()
        .map(|spec| Ok((spec.source_name(), ingest_source(spec, &settings)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut records = Vec::new();
    let mut rejects: Vec<Reject> = Vec::new();
    let mut per_source = BTreeMap::new();
    for (name, outcome) in outcomes {
        per_source.insert(
            name,
            SourceStats { records: outcome.records.len(), rejects: outcome.rejects.len() },
        );
        records.extend(outcome.records);
        rejects.extend(outcome.rejects);
    }

    let before = records.len();
    let records = dedup(records);
    let mut per_task: BTreeMap<String, usize> = BTreeMap::new();
    for record in &records {
        *per_task.entry(record.task.code().to_string()).or_insert(0) += 1;
    }
    let stats = BuildStats {
        records: records.len(),
        duplicates_removed: before - records.len(),
        rejects: rejects.len(),
        per_task,
        per_source,
    };

    export_jsonl(&records, &config.records_path())?;
    export_jsonl(&rejects, &config.rejects_path())?;
    let stats_path = config.output_dir.join("stats.json");
    std::fs::write(&stats_path, serde_json::to_string_pretty(&stats)? + "\n")
        .with_context(|| format!("writing {}", stats_path.display()))?;
    eprintln!(
        "built {} records ({} duplicates removed, {} rejects) in {}",
        stats.records,
        stats.duplicates_removed,
        stats.rejects,
        config.output_dir.display()
    );
    Ok(true)
}

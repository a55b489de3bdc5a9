use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;

use molforge::{export_jsonl, import_jsonl, render, CorpusRecord, InstructionSample, TemplateSet};

use crate::config::PipelineConfig;

/// Renders one instruction sample per record into samples.jsonl.
/// Template choice is seeded per record, so output order and content
/// are independent of worker count.
pub fn run(config_path: &Path, input: Option<&Path>) -> Result<bool> {
    let config = PipelineConfig::load(config_path)?;
    let in_path = input.map(Path::to_path_buf).unwrap_or_else(|| config.records_path());
    let records: Vec<CorpusRecord> = import_jsonl(&in_path)?;
    let templates = match &config.templates {
        Some(path) => TemplateSet::load(path)
            .with_context(|| format!("loading templates {}", path.display()))?,
        None => TemplateSet::builtin(),
    };

    let samples: Vec<InstructionSample> = records
        .par_iter()
        .map(|record| render(record, &templates, config.split.seed))
        .collect::<Result<Vec<_>, _>>()?;

    std::fs::create_dir_all(&config.output_dir)
        .with_context(|| format!("creating {}", config.output_dir.display()))?;
    export_jsonl(&samples, &config.samples_path())?;
    eprintln!("rendered {} samples into {}", samples.len(), config.samples_path().display());
    Ok(true)
}

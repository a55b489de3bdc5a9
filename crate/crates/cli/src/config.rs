//! Pipeline configuration shared by build, split, and render. Paths
//! inside the file resolve relative to the file's own directory, so a
//! config can travel with its fixture tree.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use molforge::corpus::{DescriptionRules, SourceSpec};
use molforge::{IngestSettings, SplitOptions};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FingerprintConfig {
    pub radius: u32,
    pub width: usize,
}

impl Default for FingerprintConfig {
    fn default() -> Self {
        FingerprintConfig { radius: 2, width: 2048 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    #[serde(default = "default_min_product_heavy_atoms")]
    pub min_product_heavy_atoms: usize,
}

fn default_min_product_heavy_atoms() -> usize {
    5
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { min_product_heavy_atoms: default_min_product_heavy_atoms() }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub sources: Vec<SourceSpec>,
    pub split: SplitOptions,
    /// Template file; the built-in set is used when absent.
    #[serde(default)]
    pub templates: Option<PathBuf>,
    #[serde(default)]
    pub fingerprint: FingerprintConfig,
    #[serde(default)]
    pub thresholds: Thresholds,
    #[serde(default)]
    pub description_rules: DescriptionRules,
    pub output_dir: PathBuf,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut config: PipelineConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for source in &mut config.sources {
            source.path = resolve(base, Path::new(&source.path)).display().to_string();
        }
        if let Some(templates) = &mut config.templates {
            *templates = resolve(base, templates);
        }
        config.output_dir = resolve(base, &config.output_dir);
        config.check()?;
        Ok(config)
    }

    fn check(&self) -> Result<()> {
        if self.sources.is_empty() {
            bail!("config lists no sources");
        }
        // Record ids embed the source name, so duplicates would collide.
        let mut names: Vec<String> = self.sources.iter().map(|s| s.source_name()).collect();
        names.sort();
        for pair in names.windows(2) {
            if pair[0] == pair[1] {
                bail!("duplicate source name {:?}", pair[0]);
            }
        }
        check_fractions("default", &self.split.default_fractions)?;
        for (task, fractions) in &self.split.per_task {
            check_fractions(task, fractions)?;
        }
        if self.fingerprint.width == 0 {
            bail!("fingerprint width must be positive");
        }
        // Environments saturate to the whole molecule well below this.
        if self.fingerprint.radius > 8 {
            bail!("fingerprint radius {} is out of range (max 8)", self.fingerprint.radius);
        }
        Ok(())
    }

    pub fn ingest_settings(&self) -> IngestSettings {
        IngestSettings {
            description_rules: self.description_rules.clone(),
            min_product_heavy_atoms: self.thresholds.min_product_heavy_atoms,
        }
    }

    pub fn records_path(&self) -> PathBuf {
        self.output_dir.join("records.jsonl")
    }

    pub fn rejects_path(&self) -> PathBuf {
        self.output_dir.join("rejects.jsonl")
    }

    pub fn samples_path(&self) -> PathBuf {
        self.output_dir.join("samples.jsonl")
    }
}

fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}

fn check_fractions(label: &str, fractions: &[f64; 3]) -> Result<()> {
    let sum: f64 = fractions.iter().sum();
    if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) || (sum - 1.0).abs() > 1e-6 {
        bail!("split fractions for {label} must lie in [0, 1] and sum to 1");
    }
    Ok(())
}

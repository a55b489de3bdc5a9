use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use anyhow::{anyhow, Result};
use serde::Serialize;

use molforge::{import_jsonl, mol_stats, parse_smiles, CorpusRecord};

#[derive(Serialize)]
struct Distribution {
    mean: Option<f64>,
    median: Option<f64>,
    /// Counts keyed by value, or by bucket lower bound for weights.
    histogram: BTreeMap<u64, usize>,
}

#[derive(Serialize)]
struct StatsSummary {
    records: usize,
    molecules: usize,
    heavy_atoms: Distribution,
    molecular_weight: Distribution,
    ring_count: Distribution,
}

const WEIGHT_BUCKET_DA: f64 = 25.0;

/// Prints distribution summaries over the distinct subject molecules
/// of a record file. Multi-fragment subjects count as one entry.
pub fn run(input: &Path) -> Result<bool> {
    let records: Vec<CorpusRecord> = import_jsonl(input)?;
    let subjects: BTreeSet<&str> = records.iter().filter_map(|r| r.subject_smiles()).collect();

    let mut heavy = Vec::new();
    let mut weight = Vec::new();
    let mut rings = Vec::new();
    for subject in &subjects {
        let mol = parse_smiles(subject).map_err(|err| anyhow!("subject {subject:?}: {err}"))?;
        let stats = mol_stats(&mol);
        heavy.push(stats.heavy_atom_count as f64);
        weight.push(stats.molecular_weight);
        rings.push(stats.ring_count as f64);
    }

    let summary = StatsSummary {
        records: records.len(),
        molecules: subjects.len(),
        heavy_atoms: distribution(&heavy, |v| v as u64),
        molecular_weight: distribution(&weight, |v| {
            (v / WEIGHT_BUCKET_DA).floor() as u64 * WEIGHT_BUCKET_DA as u64
        }),
        ring_count: distribution(&rings, |v| v as u64),
    };
    println!("{}", serde_json::to_string_pretty(&summary)?);
    Ok(true)
}

fn distribution(values: &[f64], bucket: impl Fn(f64) -> u64) -> Distribution {
    if values.is_empty() {
        return Distribution { mean: None, median: None, histogram: BTreeMap::new() };
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("stats are finite"));
    let mid = sorted.len() / 2;
    let median = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    };
    let mut histogram = BTreeMap::new();
    for &value in values {
        *histogram.entry(bucket(value)).or_insert(0) += 1;
    }
    Distribution {
        mean: Some(sorted.iter().sum::<f64>() / sorted.len() as f64),
        median: Some(median),
        histogram,
    }
}

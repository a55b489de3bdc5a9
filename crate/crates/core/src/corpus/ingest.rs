//! Source-file ingestion: tabular adapters for the molecule tasks and a
//! line adapter for reactions. Rows with invalid chemistry are not errors;
//! they land in the reject log with a reason.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::canonical_smiles;
use crate::corpus::record::{CorpusRecord, Payload, Task};
use crate::formula::parse_formula;
use crate::molecule::Molecule;
use crate::reaction::{
    canonical_chemicals, clean_forward, clean_retro, parse_reaction, relabel_by_atom_maps,
};
use crate::smiles::parse_smiles;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceFormat {
    Csv,
    Tsv,
    ReactionLines,
}

/// One entry in the pipeline config's source list. `task` is a task code,
/// the meta-task "NC" (one record per name-conversion direction), or
/// "REACTION" (FS and RS records from one reaction file). `column_map`
/// renames source columns; unmapped fields use their own name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SourceSpec {
    pub path: String,
    pub format: SourceFormat,
    pub task: String,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub column_map: BTreeMap<String, String>,
}

impl SourceSpec {
    pub fn source_name(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => Path::new(&self.path)
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| self.path.clone()),
        }
    }
}

/// Rule list for MC/MG description quality. Defaults are permissive: the
/// upstream wording rules are not public, so these are knobs, not dogma.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescriptionRules {
    pub min_chars: usize,
    pub max_chars: usize,
    #[serde(default)]
    pub banned_phrases: Vec<String>,
    #[serde(default)]
    pub required_keywords: Vec<String>,
}

impl Default for DescriptionRules {
    fn default() -> Self {
        DescriptionRules {
            min_chars: 10,
            max_chars: 5000,
            banned_phrases: Vec::new(),
            required_keywords: Vec::new(),
        }
    }
}

impl DescriptionRules {
    fn check(&self, text: &str) -> Result<(), String> {
        let n = text.chars().count();
        if n < self.min_chars {
            return Err(format!("description too short ({n} < {} chars)", self.min_chars));
        }
        if n > self.max_chars {
            return Err(format!("description too long ({n} > {} chars)", self.max_chars));
        }
        let folded = text.to_lowercase();
        for phrase in &self.banned_phrases {
            if folded.contains(&phrase.to_lowercase()) {
                return Err(format!("description contains banned phrase {phrase:?}"));
            }
        }
        for keyword in &self.required_keywords {
            if !folded.contains(&keyword.to_lowercase()) {
                return Err(format!("description missing required keyword {keyword:?}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reject {
    pub source_row: String,
    pub reason: String,
}

#[derive(Debug, Default)]
pub struct IngestOutcome {
    pub records: Vec<CorpusRecord>,
    pub rejects: Vec<Reject>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {message}")]
    Unreadable { path: String, message: String },
    #[error("{path}: missing column {column:?}")]
    MissingColumn { path: String, column: String },
    #[error("source task {task:?} is not a task code, NC, or REACTION")]
    BadTask { task: String },
    #[error("task {task:?} requires format {expected}")]
    FormatMismatch { task: String, expected: String },
}

/// Everything ingestion needs beyond the source description itself.
#[derive(Debug, Clone)]
pub struct IngestSettings {
    pub description_rules: DescriptionRules,
    pub min_product_heavy_atoms: usize,
}

impl Default for IngestSettings {
    fn default() -> Self {
        IngestSettings {
            description_rules: DescriptionRules::default(),
            min_product_heavy_atoms: 5,
        }
    }
}

pub fn ingest_source(
    spec: &SourceSpec,
    settings: &IngestSettings,
) -> Result<IngestOutcome, IngestError> {
    match (spec.task.as_str(), spec.format) {
        ("REACTION", SourceFormat::ReactionLines) => ingest_reactions(spec, settings),
        ("REACTION", _) => Err(IngestError::FormatMismatch {
            task: spec.task.clone(),
            expected: "reaction-lines".to_string(),
        }),
        (_, SourceFormat::ReactionLines) => Err(IngestError::FormatMismatch {
            task: spec.task.clone(),
            expected: "csv or tsv".to_string(),
        }),
        ("NC", _) => ingest_table(spec, settings, None),
        (code, _) => {
            let task: Task = code.parse().map_err(|_| IngestError::BadTask {
                task: spec.task.clone(),
            })?;
            ingest_table(spec, settings, Some(task))
        }
    }
}

struct Row {
    values: BTreeMap<String, String>,
}

impl Row {
    fn get(&self, field: &str) -> Option<&str> {
        self.values.get(field).map(|s| s.trim()).filter(|s| !s.is_empty())
    }
}

/// Reads the table once, resolving each needed field through the column
/// map. Only mapped-or-required columns are kept per row.
fn read_rows(
    spec: &SourceSpec,
    fields: &[&str],
    required: &[&str],
) -> Result<Vec<Row>, IngestError> {
    let delimiter = match spec.format {
        SourceFormat::Csv => b',',
        SourceFormat::Tsv => b'\t',
        SourceFormat::ReactionLines => unreachable!("reaction files do not take the table path"),
    };
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .from_path(&spec.path)
        .map_err(|e| IngestError::Unreadable {
            path: spec.path.clone(),
            message: e.to_string(),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| IngestError::Unreadable {
            path: spec.path.clone(),
            message: e.to_string(),
        })?
        .clone();
    let column_of = |field: &str| -> Option<usize> {
        let column = spec
            .column_map
            .get(field)
            .map(String::as_str)
            .unwrap_or(field);
        headers.iter().position(|h| h == column)
    };
    let mut positions: BTreeMap<String, usize> = BTreeMap::new();
    for &field in fields {
        match column_of(field) {
            Some(pos) => {
                positions.insert(field.to_string(), pos);
            }
            None if required.contains(&field) => {
                return Err(IngestError::MissingColumn {
                    path: spec.path.clone(),
                    column: spec
                        .column_map
                        .get(field)
                        .cloned()
                        .unwrap_or_else(|| field.to_string()),
                });
            }
            None => {}
        }
    }
    let mut rows = Vec::new();
    for result in reader.records() {
        let record = result.map_err(|e| IngestError::Unreadable {
            path: spec.path.clone(),
            message: e.to_string(),
        })?;
        let mut values = BTreeMap::new();
        for (field, &pos) in &positions {
            if let Some(v) = record.get(pos) {
                values.insert(field.clone(), v.to_string());
            }
        }
        rows.push(Row { values });
    }
    Ok(rows)
}

fn smiles_payload(s: &str) -> Payload {
    Payload::Smiles(s.to_string())
}

fn parse_boolean(text: &str) -> Option<bool> {
    match text.to_lowercase().as_str() {
        "1" | "true" | "yes" => Some(true),
        "0" | "false" | "no" => Some(false),
        _ => None,
    }
}

/// Molecule tasks: one canonical subject molecule per row, payloads typed
/// by task. `task = None` means the NC meta-task, emitting all four
/// directions per row.
fn ingest_table(
    spec: &SourceSpec,
    settings: &IngestSettings,
    task: Option<Task>,
) -> Result<IngestOutcome, IngestError> {
    let source = spec.source_name();
    let (fields, required): (Vec<&str>, Vec<&str>) = match task {
        None => (vec!["smiles", "iupac", "formula", "selfies"], vec!["smiles", "iupac"]),
        Some(Task::NcS2f) => (vec!["smiles", "formula", "selfies"], vec!["smiles"]),
        Some(t) if t.is_name_conversion() => {
            (vec!["smiles", "iupac", "formula", "selfies"], vec!["smiles", "iupac"])
        }
        Some(Task::Mc) | Some(Task::Mg) => {
            (vec!["smiles", "description", "selfies"], vec!["smiles", "description"])
        }
        Some(_) => (vec!["smiles", "value", "selfies"], vec!["smiles", "value"]),
    };
    let rows = read_rows(spec, &fields, &required)?;

    let mut outcome = IngestOutcome::default();
    for (i, row) in rows.iter().enumerate() {
        let row_no = i + 1;
        let source_row = format!("{source}:{row_no}");
        let reject = |reason: String, rejects: &mut Vec<Reject>| {
            rejects.push(Reject {
                source_row: source_row.clone(),
                reason,
            });
        };

        let Some(raw_smiles) = row.get("smiles") else {
            reject("missing smiles value".to_string(), &mut outcome.rejects);
            continue;
        };
        let canonical = match canonical_smiles(raw_smiles) {
            Ok(c) => c,
            Err(report) => {
                reject(format!("invalid SMILES: {}", report.summary()), &mut outcome.rejects);
                continue;
            }
        };
        let mol = parse_smiles(&canonical).expect("canonical output parses");
        let selfies = row.get("selfies").map(str::to_string);

        match task {
            None => {
                let Some(iupac) = row.get("iupac") else {
                    reject("missing iupac value".to_string(), &mut outcome.rejects);
                    continue;
                };
                let formula = match row_formula(row, &mol) {
                    Ok(f) => f,
                    Err(reason) => {
                        reject(reason, &mut outcome.rejects);
                        continue;
                    }
                };
                for task in [Task::NcI2f, Task::NcI2s, Task::NcS2f, Task::NcS2i] {
                    outcome.records.push(nc_record(
                        &source, row_no, task, &canonical, iupac, &formula, &selfies,
                    ));
                }
            }
            Some(t) if t.is_name_conversion() => {
                let iupac = row.get("iupac");
                if t != Task::NcS2f && iupac.is_none() {
                    reject("missing iupac value".to_string(), &mut outcome.rejects);
                    continue;
                }
                let formula = match row_formula(row, &mol) {
                    Ok(f) => f,
                    Err(reason) => {
                        reject(reason, &mut outcome.rejects);
                        continue;
                    }
                };
                outcome.records.push(nc_record(
                    &source,
                    row_no,
                    t,
                    &canonical,
                    iupac.unwrap_or_default(),
                    &formula,
                    &selfies,
                ));
            }
            Some(t @ (Task::Mc | Task::Mg)) => {
                let Some(description) = row.get("description") else {
                    reject("missing description value".to_string(), &mut outcome.rejects);
                    continue;
                };
                if let Err(reason) = settings.description_rules.check(description) {
                    reject(reason, &mut outcome.rejects);
                    continue;
                }
                let (inputs, outputs) = if t == Task::Mc {
                    (
                        [("smiles", smiles_payload(&canonical))],
                        [("description", Payload::Text(description.to_string()))],
                    )
                } else {
                    (
                        [("description", Payload::Text(description.to_string()))],
                        [("smiles", smiles_payload(&canonical))],
                    )
                };
                outcome.records.push(build_record(
                    &source, row_no, t, &inputs, &outputs, &canonical, &selfies,
                ));
            }
            Some(t) => {
                let Some(raw_value) = row.get("value") else {
                    reject("missing value".to_string(), &mut outcome.rejects);
                    continue;
                };
                let payload = if matches!(t, Task::PpEsol | Task::PpLipo) {
                    match raw_value.parse::<f64>() {
                        Ok(v) if v.is_finite() => Payload::Number(v),
                        _ => {
                            reject(
                                format!("value {raw_value:?} is not a finite number"),
                                &mut outcome.rejects,
                            );
                            continue;
                        }
                    }
                } else {
                    match parse_boolean(raw_value) {
                        Some(b) => Payload::Boolean(b),
                        None => {
                            reject(
                                format!("value {raw_value:?} is not a boolean"),
                                &mut outcome.rejects,
                            );
                            continue;
                        }
                    }
                };
                outcome.records.push(build_record(
                    &source,
                    row_no,
                    t,
                    &[("smiles", smiles_payload(&canonical))],
                    &[("value", payload)],
                    &canonical,
                    &selfies,
                ));
            }
        }
    }
    Ok(outcome)
}

/// The row's formula column when present (normalized), else the formula
/// derived from the molecule itself.
fn row_formula(row: &Row, mol: &Molecule) -> Result<String, String> {
    match row.get("formula") {
        Some(text) => match parse_formula(text) {
            Ok(f) => Ok(f.to_string()),
            Err(e) => Err(format!("invalid formula {text:?}: {e}")),
        },
        None => Ok(crate::formula::molecular_formula(mol).to_string()),
    }
}

fn build_record(
    source: &str,
    row: usize,
    task: Task,
    inputs: &[(&str, Payload)],
    outputs: &[(&str, Payload)],
    subject: &str,
    selfies: &Option<String>,
) -> CorpusRecord {
    CorpusRecord {
        id: format!("{source}:{row}:{}", task.code()),
        task,
        inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        outputs: outputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        selfies: selfies.clone(),
        source: source.to_string(),
        split: None,
        subject: Some(subject.to_string()),
    }
}

fn nc_record(
    source: &str,
    row: usize,
    task: Task,
    smiles: &str,
    iupac: &str,
    formula: &str,
    selfies: &Option<String>,
) -> CorpusRecord {
    let smiles_p = smiles_payload(smiles);
    let iupac_p = Payload::Iupac(iupac.to_string());
    let formula_p = Payload::Formula(formula.to_string());
    let (inputs, outputs) = match task {
        Task::NcI2f => (vec![("iupac", iupac_p)], vec![("formula", formula_p)]),
        Task::NcI2s => (vec![("iupac", iupac_p)], vec![("smiles", smiles_p)]),
        Task::NcS2f => (vec![("smiles", smiles_p)], vec![("formula", formula_p)]),
        Task::NcS2i => (vec![("smiles", smiles_p)], vec![("iupac", iupac_p)]),
        _ => unreachable!("nc_record only builds name-conversion records"),
    };
    build_record(source, row, task, &inputs, &outputs, smiles, selfies)
}

/// Reaction files: one reaction SMILES per line, first whitespace field.
/// Each line yields at most one FS record and any number of RS records.
fn ingest_reactions(
    spec: &SourceSpec,
    settings: &IngestSettings,
) -> Result<IngestOutcome, IngestError> {
    let source = spec.source_name();
    let text = std::fs::read_to_string(&spec.path).map_err(|e| IngestError::Unreadable {
        path: spec.path.clone(),
        message: e.to_string(),
    })?;
    let min_heavy = settings.min_product_heavy_atoms;

    let mut outcome = IngestOutcome::default();
    for (i, line) in text.lines().enumerate() {
        let row_no = i + 1;
        let source_row = format!("{source}:{row_no}");
        let Some(reaction_text) = line.split_whitespace().next() else {
            continue;
        };
        let rxn = match parse_reaction(reaction_text) {
            Ok(r) => r,
            Err(e) => {
                outcome.rejects.push(Reject {
                    source_row,
                    reason: format!("unparseable reaction: {e}"),
                });
                continue;
            }
        };
        let rxn = relabel_by_atom_maps(&rxn);

        let fs = clean_forward(&rxn, min_heavy);
        let rs = clean_retro(&rxn, min_heavy);
        match (fs, rs) {
            (Err(e), _) | (_, Err(e)) => {
                outcome.rejects.push(Reject {
                    source_row,
                    reason: format!("invalid component: {e}"),
                });
            }
            (Ok(fs), Ok(rs)) => {
                let mut emitted = false;
                let mut rejected = false;
                if let Some(record) = fs {
                    match fs_corpus_record(&source, row_no, &rxn, &record) {
                        Ok(r) => {
                            outcome.records.push(r);
                            emitted = true;
                        }
                        Err(reason) => {
                            outcome.rejects.push(Reject {
                                source_row: source_row.clone(),
                                reason,
                            });
                            rejected = true;
                        }
                    }
                }
                for (k, record) in rs.iter().enumerate() {
                    let mut inputs = BTreeMap::new();
                    inputs.insert("product".to_string(), smiles_payload(&record.input_product));
                    let mut outputs = BTreeMap::new();
                    outputs.insert(
                        "reactants".to_string(),
                        smiles_payload(&record.output_reactants.join(".")),
                    );
                    outcome.records.push(CorpusRecord {
                        id: format!("{source}:{row_no}:RS:p{}", k + 1),
                        task: Task::Rs,
                        inputs,
                        outputs,
                        selfies: None,
                        source: source.clone(),
                        split: None,
                        subject: None,
                    });
                    emitted = true;
                }
                if !emitted && !rejected {
                    outcome.rejects.push(Reject {
                        source_row,
                        reason: "cleaning removed every record".to_string(),
                    });
                }
            }
        }
    }
    Ok(outcome)
}

/// FS corpus record, keeping true reactants and reagents in separate
/// fields so the reaction linkage key can be rebuilt from the record.
fn fs_corpus_record(
    source: &str,
    row: usize,
    rxn: &crate::reaction::Reaction,
    record: &crate::reaction::FsRecord,
) -> Result<CorpusRecord, String> {
    let mut reactants =
        canonical_chemicals(&rxn.reactants, "reactant").map_err(|e| e.to_string())?;
    let mut reagents: Vec<String> = canonical_chemicals(&rxn.reagents, "reagent")
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|c| !reactants.contains(c))
        .collect();
    // A line whose inputs all sat in the reagent segment still describes
    // chemicals that react; promote them so the record has reactants.
    if reactants.is_empty() {
        reactants = std::mem::take(&mut reagents);
    }
    let mut inputs = BTreeMap::new();
    inputs.insert("reactants".to_string(), smiles_payload(&reactants.join(".")));
    if !reagents.is_empty() {
        inputs.insert("reagents".to_string(), smiles_payload(&reagents.join(".")));
    }
    let mut outputs = BTreeMap::new();
    outputs.insert(
        "products".to_string(),
        smiles_payload(&record.output_chemicals.join(".")),
    );
    Ok(CorpusRecord {
        id: format!("{source}:{row}:FS"),
        task: Task::Fs,
        inputs,
        outputs,
        selfies: None,
        source: source.to_string(),
        split: None,
        subject: None,
    })
}

//! Turns a corpus record into an instruction sample: seeded template
//! choice, placeholder substitution, and tag wrapping.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::record::{CorpusRecord, Payload, Task};
use crate::corpus::template::TemplateSet;
use crate::hash::stable_hash;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstructionSample {
    pub record_id: String,
    pub query: String,
    pub response: String,
    pub template_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("no templates for task {0}")]
    MissingTemplates(String),
    #[error("record {record}: template references unknown field {field:?}")]
    UnknownField { record: String, field: String },
    #[error("record {record}: unbalanced braces in template")]
    UnbalancedBraces { record: String },
}

/// Tag pair for a payload kind; text renders untagged.
fn wrap(payload_kind: &str, value: &str) -> String {
    match payload_kind {
        "smiles" => format!("<SMILES>{value}</SMILES>"),
        "iupac" => format!("<IUPAC>{value}</IUPAC>"),
        "formula" => format!("<MOLFORMULA>{value}</MOLFORMULA>"),
        "number" => format!("<NUMBER>{value}</NUMBER>"),
        "boolean" => format!("<BOOLEAN>{value}</BOOLEAN>"),
        _ => value.to_string(),
    }
}

fn rendered_payload(task: Task, payload: &Payload) -> String {
    let mut value = payload.render_value();
    if matches!(payload, Payload::Smiles(_)) && task.uses_semicolon_fragments() {
        value = value.replace('.', ";");
    }
    wrap(payload.kind_name(), &value)
}

/// Placeholder values for one record: every input and output field, plus
/// the derived FS `input` field joining reactants and reagents with dots.
fn placeholder_map(record: &CorpusRecord) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    for (name, payload) in record.inputs.iter().chain(record.outputs.iter()) {
        map.insert(name.clone(), rendered_payload(record.task, payload));
    }
    if record.task == Task::Fs {
        let mut chemicals = Vec::new();
        for field in ["reactants", "reagents"] {
            if let Some(Payload::Smiles(s)) = record.inputs.get(field) {
                chemicals.push(s.as_str());
            }
        }
        if !chemicals.is_empty() {
            map.insert("input".to_string(), wrap("smiles", &chemicals.join(".")));
        }
    }
    map
}

fn substitute(
    template: &str,
    map: &BTreeMap<String, String>,
    record_id: &str,
) -> Result<String, RenderError> {
    let mut out = String::with_capacity(template.len() + 64);
    let mut rest = template;
    loop {
        match rest.find('{') {
            None => {
                if rest.contains('}') {
                    return Err(RenderError::UnbalancedBraces {
                        record: record_id.to_string(),
                    });
                }
                out.push_str(rest);
                return Ok(out);
            }
            Some(open) => {
                out.push_str(&rest[..open]);
                let after = &rest[open + 1..];
                let close = after.find('}').ok_or_else(|| RenderError::UnbalancedBraces {
                    record: record_id.to_string(),
                })?;
                let field = &after[..close];
                let value = map.get(field).ok_or_else(|| RenderError::UnknownField {
                    record: record_id.to_string(),
                    field: field.to_string(),
                })?;
                out.push_str(value);
                rest = &after[close + 1..];
            }
        }
    }
}

/// Seeded, order-independent template choice: the draw depends only on the
/// seed and the record id, never on position in the batch.
fn choose_template(seed: u64, record_id: &str, count: usize) -> usize {
    let mut bytes = seed.to_le_bytes().to_vec();
    bytes.extend_from_slice(record_id.as_bytes());
    (stable_hash(&bytes) % count as u64) as usize
}

pub fn render(
    record: &CorpusRecord,
    templates: &TemplateSet,
    seed: u64,
) -> Result<InstructionSample, RenderError> {
    let pairs = templates
        .for_task(record.task)
        .filter(|p| !p.is_empty())
        .ok_or_else(|| RenderError::MissingTemplates(record.task.code().to_string()))?;
    let idx = choose_template(seed, &record.id, pairs.len());
    let (query_t, response_t) = &pairs[idx];
    let map = placeholder_map(record);
    Ok(InstructionSample {
        record_id: record.id.clone(),
        query: substitute(query_t, &map, &record.id)?,
        response: substitute(response_t, &map, &record.id)?,
        template_id: format!("{}:{idx}", record.task.code()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::template::Template;

    fn record(task: Task, inputs: &[(&str, Payload)], outputs: &[(&str, Payload)]) -> CorpusRecord {
        CorpusRecord {
            id: format!("t:0:{}", task.code()),
            task,
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            outputs: outputs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            selfies: None,
            source: "t".into(),
            split: None,
            subject: None,
        }
    }

    #[test]
    fn extraction_recovers_every_rendered_output_payload() {
        use crate::eval::{extract_answer, AnswerKind};

        // (record, answer kind, payload string, expected extraction)
        let cases = [
            (
                record(
                    Task::Mg,
                    &[("description", Payload::Text("a sodium salt".into()))],
                    &[("smiles", Payload::Smiles("CC(=O)[O-].[Na+]".into()))],
                ),
                AnswerKind::Smiles,
                "CC(=O)[O-].[Na+]",
                "CC(=O)[O-];[Na+]",
            ),
            (
                record(
                    Task::Fs,
                    &[("reactants", Payload::Smiles("CCO.CC(=O)O".into()))],
                    &[("products", Payload::Smiles("CCOC(C)=O.O".into()))],
                ),
                AnswerKind::Smiles,
                "CCOC(C)=O.O",
                "CCOC(C)=O.O",
            ),
            (
                record(
                    Task::Rs,
                    &[("product", Payload::Smiles("CCOC(C)=O".into()))],
                    &[("reactants", Payload::Smiles("CCO.CC(=O)O".into()))],
                ),
                AnswerKind::Smiles,
                "CCO.CC(=O)O",
                "CCO.CC(=O)O",
            ),
            (
                record(
                    Task::NcI2s,
                    &[("iupac", Payload::Iupac("ethanol".into()))],
                    &[("smiles", Payload::Smiles("CCO".into()))],
                ),
                AnswerKind::Smiles,
                "CCO",
                "CCO",
            ),
            (
                record(
                    Task::NcS2f,
                    &[("smiles", Payload::Smiles("OCC1OC(O)C(O)C(O)C1O".into()))],
                    &[("formula", Payload::Formula("C6H12O6".into()))],
                ),
                AnswerKind::Formula,
                "C6H12O6",
                "C6H12O6",
            ),
            (
                record(
                    Task::NcS2i,
                    &[("smiles", Payload::Smiles("OC(=O)c1ccccc1".into()))],
                    &[("iupac", Payload::Iupac("benzoic acid; benzenecarboxylic acid".into()))],
                ),
                AnswerKind::Iupac,
                "benzoic acid; benzenecarboxylic acid",
                "benzoic acid; benzenecarboxylic acid",
            ),
            (
                record(
                    Task::PpEsol,
                    &[("smiles", Payload::Smiles("CCO".into()))],
                    &[("value", Payload::Number(-0.74))],
                ),
                AnswerKind::Number,
                "-0.74",
                "-0.74",
            ),
            (
                record(
                    Task::PpBbbp,
                    &[("smiles", Payload::Smiles("CCO".into()))],
                    &[("value", Payload::Boolean(true))],
                ),
                AnswerKind::Boolean,
                "Yes",
                "Yes",
            ),
            (
                record(
                    Task::Mc,
                    &[("smiles", Payload::Smiles("CCO".into()))],
                    &[("description", Payload::Text("A colorless liquid.".into()))],
                ),
                AnswerKind::Text,
                "A colorless liquid.",
                "A colorless liquid.",
            ),
        ];
        let set = TemplateSet::builtin();
        for (r, kind, payload, expected) in &cases {
            for seed in 0..6 {
                let sample = render(r, &set, seed).unwrap();
                let got = extract_answer(&sample.response, *kind);
                assert_eq!(
                    got.as_deref(),
                    Some(*expected),
                    "{} seed {seed}: {:?}",
                    r.task,
                    sample.response,
                );
                // Fragment separators round-trip through the eval transform.
                if *kind == AnswerKind::Smiles {
                    assert_eq!(
                        crate::eval::extract::undo_fragment_semicolons(&got.unwrap()),
                        *payload,
                    );
                } else {
                    assert_eq!(got.as_deref(), Some(*payload));
                }
            }
        }
    }

    #[test]
    fn fs_query_joins_inputs_with_dots() {
        let r = record(
            Task::Fs,
            &[
                ("reactants", Payload::Smiles("CCO.CC(=O)O".into())),
                ("reagents", Payload::Smiles("OS(=O)(=O)O".into())),
            ],
            &[("products", Payload::Smiles("CCOC(C)=O".into()))],
        );
        let sample = render(&r, &TemplateSet::builtin(), 0).unwrap();
        assert!(sample
            .query
            .contains("<SMILES>CCO.CC(=O)O.OS(=O)(=O)O</SMILES>"));
        assert!(sample.response.contains("<SMILES>CCOC(C)=O</SMILES>"));
    }

    #[test]
    fn mc_fragments_use_semicolons() {
        let r = record(
            Task::Mc,
            &[("smiles", Payload::Smiles("CC(=O)[O-].[Na+]".into()))],
            &[("description", Payload::Text("a sodium salt".into()))],
        );
        let sample = render(&r, &TemplateSet::builtin(), 0).unwrap();
        assert!(sample.query.contains("<SMILES>CC(=O)[O-];[Na+]</SMILES>"));
        // Text payloads are not wrapped in tags.
        assert_eq!(sample.response, "a sodium salt");
    }

    #[test]
    fn number_payload_renders_in_tags() {
        let r = record(
            Task::PpEsol,
            &[("smiles", Payload::Smiles("CCO".into()))],
            &[("value", Payload::Number(-0.77))],
        );
        let sample = render(&r, &TemplateSet::builtin(), 0).unwrap();
        assert!(sample.response.contains("<NUMBER>-0.77</NUMBER>"));
    }

    #[test]
    fn boolean_payload_renders_yes_no() {
        let r = record(
            Task::PpBbbp,
            &[("smiles", Payload::Smiles("CCO".into()))],
            &[("value", Payload::Boolean(true))],
        );
        let sample = render(&r, &TemplateSet::builtin(), 3).unwrap();
        assert!(sample.response.contains("<BOOLEAN>Yes</BOOLEAN>"));
    }

    #[test]
    fn template_choice_is_seed_stable() {
        let r = record(
            Task::Mc,
            &[("smiles", Payload::Smiles("CCO".into()))],
            &[("description", Payload::Text("an alcohol".into()))],
        );
        let set = TemplateSet::builtin();
        let a = render(&r, &set, 11).unwrap();
        let b = render(&r, &set, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn unknown_placeholder_is_an_error() {
        let set = TemplateSet::from_templates(&[Template {
            task: "MC".into(),
            query: "Describe {wrong}.".into(),
            response: "{description}".into(),
        }])
        .unwrap();
        let r = record(
            Task::Mc,
            &[("smiles", Payload::Smiles("CCO".into()))],
            &[("description", Payload::Text("x".into()))],
        );
        assert!(matches!(
            render(&r, &set, 0),
            Err(RenderError::UnknownField { .. })
        ));
    }

    #[test]
    fn missing_templates_is_an_error() {
        let set = TemplateSet::from_templates(&[]).unwrap();
        let r = record(
            Task::Mc,
            &[("smiles", Payload::Smiles("CCO".into()))],
            &[("description", Payload::Text("x".into()))],
        );
        assert!(matches!(
            render(&r, &set, 0),
            Err(RenderError::MissingTemplates(_))
        ));
    }
}

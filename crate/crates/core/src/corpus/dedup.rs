//! Duplicate-record removal. The key is (task, inputs, outputs) with every
//! SMILES payload's dot-separated fragments sorted, so records that differ
//! only in chemical list order collapse together.

use std::collections::HashSet;

use crate::corpus::record::{CorpusRecord, Payload};

fn sorted_fragments(smiles: &str) -> String {
    let mut parts: Vec<&str> = smiles.split('.').collect();
    parts.sort_unstable();
    parts.join(".")
}

fn payload_key(name: &str, payload: &Payload) -> String {
    let value = match payload {
        Payload::Smiles(s) => sorted_fragments(s),
        other => other.render_value(),
    };
    format!("{name}={}:{value}", payload.kind_name())
}

/// Canonical content key for one record. Ids, sources, and split labels
/// are excluded: records with the same chemistry are the same sample.
pub fn record_key(record: &CorpusRecord) -> String {
    let mut key = String::from(record.task.code());
    for (name, payload) in &record.inputs {
        key.push('\u{1}');
        key.push_str(&payload_key(name, payload));
    }
    key.push('\u{2}');
    for (name, payload) in &record.outputs {
        key.push('\u{1}');
        key.push_str(&payload_key(name, payload));
    }
    key
}

/// Keeps the first occurrence of each key, preserving order.
pub fn dedup(records: Vec<CorpusRecord>) -> Vec<CorpusRecord> {
    let mut seen = HashSet::new();
    records
        .into_iter()
        .filter(|r| seen.insert(record_key(r)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::record::Task;
    use std::collections::BTreeMap;

    fn fs_record(id: &str, reactants: &str, products: &str) -> CorpusRecord {
        let mut inputs = BTreeMap::new();
        inputs.insert("reactants".to_string(), Payload::Smiles(reactants.into()));
        let mut outputs = BTreeMap::new();
        outputs.insert("products".to_string(), Payload::Smiles(products.into()));
        CorpusRecord {
            id: id.into(),
            task: Task::Fs,
            inputs,
            outputs,
            selfies: None,
            source: "t".into(),
            split: None,
            subject: None,
        }
    }

    #[test]
    fn reactant_order_does_not_distinguish() {
        let records = vec![
            fs_record("a", "CCO.CC(=O)O", "CCOC(C)=O"),
            fs_record("b", "CC(=O)O.CCO", "CCOC(C)=O"),
        ];
        let kept = dedup(records);
        assert_eq!(kept.len(), 1);
        assert_eq!(kept[0].id, "a");
    }

    #[test]
    fn different_outputs_both_survive() {
        let records = vec![
            fs_record("a", "CCO.CC(=O)O", "CCOC(C)=O"),
            fs_record("b", "CCO.CC(=O)O", "CCOCC"),
        ];
        assert_eq!(dedup(records).len(), 2);
    }

    #[test]
    fn idempotent() {
        let records = vec![
            fs_record("a", "CCO", "CCOCC"),
            fs_record("b", "CCO", "CCOCC"),
            fs_record("c", "CCN", "CCNCC"),
        ];
        let once = dedup(records);
        let twice = dedup(once.clone());
        assert_eq!(once, twice);
    }

    #[test]
    fn task_is_part_of_the_key() {
        let mut a = fs_record("a", "CCO", "CCOCC");
        let b = fs_record("b", "CCO", "CCOCC");
        a.task = Task::Rs;
        assert_eq!(dedup(vec![a, b]).len(), 2);
    }
}

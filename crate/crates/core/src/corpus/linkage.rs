//! Cross-task linkage keys and the union-find that groups records which
//! must share a split.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::record::{CorpusRecord, Payload, Task};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkageKind {
    Molecule,
    Reaction,
    IdenticalInput,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinkageKey {
    pub kind: LinkageKind,
    pub value: String,
}

fn reaction_keys(reactants: &str, products: &str) -> Vec<LinkageKey> {
    let mut sorted: Vec<&str> = reactants.split('.').collect();
    sorted.sort_unstable();
    let left = sorted.join(".");
    products
        .split('.')
        .map(|p| LinkageKey {
            kind: LinkageKind::Reaction,
            value: format!("{left}>{p}"),
        })
        .collect()
}

/// Keys a record shares with its relatives. FS/RS records emit one
/// reaction key per product over the sorted true-reactant set; NC, MC, and
/// MG records emit their subject molecule; every record emits an
/// identical-input key so same-input samples travel together.
pub fn linkage_keys(record: &CorpusRecord) -> Vec<LinkageKey> {
    let mut keys = Vec::new();
    match record.task {
        Task::Fs => {
            if let (Some(Payload::Smiles(reactants)), Some(Payload::Smiles(products))) = (
                record.inputs.get("reactants"),
                record.outputs.get("products"),
            ) {
                keys.extend(reaction_keys(reactants, products));
            }
        }
        Task::Rs => {
            if let (Some(Payload::Smiles(product)), Some(Payload::Smiles(reactants))) = (
                record.inputs.get("product"),
                record.outputs.get("reactants"),
            ) {
                keys.extend(reaction_keys(reactants, product));
            }
        }
        Task::Mc | Task::Mg => {
            if let Some(subject) = record.subject_smiles() {
                keys.push(LinkageKey {
                    kind: LinkageKind::Molecule,
                    value: subject.to_string(),
                });
            }
        }
        task if task.is_name_conversion() => {
            if let Some(subject) = record.subject_smiles() {
                keys.push(LinkageKey {
                    kind: LinkageKind::Molecule,
                    value: subject.to_string(),
                });
            }
        }
        _ => {}
    }
    let inputs = serde_json::to_string(&record.inputs).expect("payload maps serialize");
    keys.push(LinkageKey {
        kind: LinkageKind::IdenticalInput,
        value: format!("{}|{inputs}", record.task.code()),
    });
    keys
}

/// Union-find with path halving.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Roots at the smaller index so group identity is input-order stable.
    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Groups record indices so every shared linkage key lands in one group.
/// Output groups are sorted internally and ordered by first member.
pub fn linkage_groups(records: &[CorpusRecord]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(records.len());
    let mut owner: HashMap<LinkageKey, usize> = HashMap::new();
    for (idx, record) in records.iter().enumerate() {
        for key in linkage_keys(record) {
            match owner.get(&key) {
                Some(&first) => uf.union(first, idx),
                None => {
                    owner.insert(key, idx);
                }
            }
        }
    }
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for idx in 0..records.len() {
        groups.entry(uf.find(idx)).or_default().push(idx);
    }
    let mut out: Vec<Vec<usize>> = groups.into_values().collect();
    for group in &mut out {
        group.sort_unstable();
    }
    out.sort_unstable_by_key(|g| g[0]);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn record(id: &str, task: Task, inputs: &[(&str, Payload)], outputs: &[(&str, Payload)]) -> CorpusRecord {
        CorpusRecord {
            id: id.into(),
            task,
            inputs: inputs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect::<BTreeMap<_, _>>(),
            outputs: outputs
                .iter()
                .map(|(k, v)| (k.to_string(), v.clone()))
                .collect::<BTreeMap<_, _>>(),
            selfies: None,
            source: "t".into(),
            split: None,
            subject: None,
        }
    }

    #[test]
    fn fs_and_rs_share_a_reaction_key() {
        let fs = record(
            "fs",
            Task::Fs,
            &[("reactants", Payload::Smiles("CCO.CC(=O)O".into()))],
            &[("products", Payload::Smiles("CCOC(C)=O".into()))],
        );
        let rs = record(
            "rs",
            Task::Rs,
            &[("product", Payload::Smiles("CCOC(C)=O".into()))],
            &[("reactants", Payload::Smiles("CC(=O)O.CCO".into()))],
        );
        let fs_keys = linkage_keys(&fs);
        let rs_keys = linkage_keys(&rs);
        let shared: Vec<_> = fs_keys.iter().filter(|k| rs_keys.contains(k)).collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(shared[0].kind, LinkageKind::Reaction);
        assert_eq!(shared[0].value, "CC(=O)O.CCO>CCOC(C)=O");
    }

    #[test]
    fn nc_directions_share_the_molecule_key() {
        let mut a = record(
            "i2s",
            Task::NcI2s,
            &[("iupac", Payload::Iupac("ethanol".into()))],
            &[("smiles", Payload::Smiles("CCO".into()))],
        );
        a.subject = Some("CCO".into());
        let mut b = record(
            "s2i",
            Task::NcS2i,
            &[("smiles", Payload::Smiles("CCO".into()))],
            &[("iupac", Payload::Iupac("ethanol".into()))],
        );
        b.subject = Some("CCO".into());
        let ka = linkage_keys(&a);
        let kb = linkage_keys(&b);
        assert!(ka.iter().any(|k| kb.contains(k) && k.kind == LinkageKind::Molecule));
    }

    #[test]
    fn identical_inputs_link_within_a_task() {
        let a = record(
            "a",
            Task::Rs,
            &[("product", Payload::Smiles("CCOC(C)=O".into()))],
            &[("reactants", Payload::Smiles("CCO.CC(=O)O".into()))],
        );
        let b = record(
            "b",
            Task::Rs,
            &[("product", Payload::Smiles("CCOC(C)=O".into()))],
            &[("reactants", Payload::Smiles("CCOC(C)=O.O".into()))],
        );
        let groups = linkage_groups(&[a, b]);
        assert_eq!(groups, vec![vec![0, 1]]);
    }

    #[test]
    fn unrelated_records_stay_apart() {
        let a = record(
            "a",
            Task::Mc,
            &[("smiles", Payload::Smiles("CCO".into()))],
            &[("description", Payload::Text("an alcohol".into()))],
        );
        let b = record(
            "b",
            Task::Mc,
            &[("smiles", Payload::Smiles("CCN".into()))],
            &[("description", Payload::Text("an amine".into()))],
        );
        let groups = linkage_groups(&[a, b]);
        assert_eq!(groups.len(), 2);
    }

    #[test]
    fn union_find_is_transitive() {
        let mut uf = UnionFind::new(5);
        uf.union(0, 1);
        uf.union(1, 2);
        uf.union(3, 4);
        assert_eq!(uf.find(2), uf.find(0));
        assert_ne!(uf.find(3), uf.find(0));
    }
}

//! Task-typed corpus records: the chemical content of one query-response
//! pair before any instruction text is attached.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The fourteen tasks. NC converts between name, SMILES, and formula; PP
/// predicts properties; MC/MG caption and generate; FS/RS run reactions
/// forward and backward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Task {
    #[serde(rename = "NC-I2F")]
    NcI2f,
    #[serde(rename = "NC-I2S")]
    NcI2s,
    #[serde(rename = "NC-S2F")]
    NcS2f,
    #[serde(rename = "NC-S2I")]
    NcS2i,
    #[serde(rename = "PP-ESOL")]
    PpEsol,
    #[serde(rename = "PP-Lipo")]
    PpLipo,
    #[serde(rename = "PP-BBBP")]
    PpBbbp,
    #[serde(rename = "PP-ClinTox")]
    PpClinTox,
    #[serde(rename = "PP-HIV")]
    PpHiv,
    #[serde(rename = "PP-SIDER")]
    PpSider,
    #[serde(rename = "MC")]
    Mc,
    #[serde(rename = "MG")]
    Mg,
    #[serde(rename = "FS")]
    Fs,
    #[serde(rename = "RS")]
    Rs,
}

pub const ALL_TASKS: [Task; 14] = [
    Task::NcI2f,
    Task::NcI2s,
    Task::NcS2f,
    Task::NcS2i,
    Task::PpEsol,
    Task::PpLipo,
    Task::PpBbbp,
    Task::PpClinTox,
    Task::PpHiv,
    Task::PpSider,
    Task::Mc,
    Task::Mg,
    Task::Fs,
    Task::Rs,
];

impl Task {
    pub fn code(self) -> &'static str {
        match self {
            Task::NcI2f => "NC-I2F",
            Task::NcI2s => "NC-I2S",
            Task::NcS2f => "NC-S2F",
            Task::NcS2i => "NC-S2I",
            Task::PpEsol => "PP-ESOL",
            Task::PpLipo => "PP-Lipo",
            Task::PpBbbp => "PP-BBBP",
            Task::PpClinTox => "PP-ClinTox",
            Task::PpHiv => "PP-HIV",
            Task::PpSider => "PP-SIDER",
            Task::Mc => "MC",
            Task::Mg => "MG",
            Task::Fs => "FS",
            Task::Rs => "RS",
        }
    }

    pub fn is_property_prediction(self) -> bool {
        matches!(
            self,
            Task::PpEsol | Task::PpLipo | Task::PpBbbp | Task::PpClinTox | Task::PpHiv | Task::PpSider
        )
    }

    pub fn is_name_conversion(self) -> bool {
        matches!(self, Task::NcI2f | Task::NcI2s | Task::NcS2f | Task::NcS2i)
    }

    /// SMILES fragments rendered for these tasks swap dots for semicolons;
    /// FS/RS keep the dot as the chemical separator.
    pub fn uses_semicolon_fragments(self) -> bool {
        !matches!(self, Task::Fs | Task::Rs)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Task {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ALL_TASKS
            .into_iter()
            .find(|t| t.code() == s)
            .ok_or_else(|| format!("unknown task {s:?}"))
    }
}

/// One typed value slot in a record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Payload {
    Smiles(String),
    Iupac(String),
    Formula(String),
    Text(String),
    Number(f64),
    Boolean(bool),
}

impl Payload {
    /// The value as rendered text, before tag wrapping. Numbers print in
    /// shortest round-trip form; booleans as Yes/No.
    pub fn render_value(&self) -> String {
        match self {
            Payload::Smiles(s) | Payload::Iupac(s) | Payload::Formula(s) | Payload::Text(s) => {
                s.clone()
            }
            Payload::Number(v) => v.to_string(),
            Payload::Boolean(true) => "Yes".to_string(),
            Payload::Boolean(false) => "No".to_string(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Payload::Smiles(_) => "smiles",
            Payload::Iupac(_) => "iupac",
            Payload::Formula(_) => "formula",
            Payload::Text(_) => "text",
            Payload::Number(_) => "number",
            Payload::Boolean(_) => "boolean",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

/// The pre-rendering chemical content of one sample. Field order is fixed
/// so serialized records are byte-stable; maps are ordered for the same
/// reason. `subject` carries the canonical SMILES a molecule-level record
/// is about, which linkage and scaffold splitting key on even when the
/// record's input is a name or description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub task: Task,
    pub inputs: BTreeMap<String, Payload>,
    pub outputs: BTreeMap<String, Payload>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selfies: Option<String>,
    pub source: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subject: Option<String>,
}

impl CorpusRecord {
    /// First SMILES payload, inputs before outputs, field order within
    /// each. Fallback subject for records built without one.
    pub fn first_smiles(&self) -> Option<&str> {
        self.inputs
            .values()
            .chain(self.outputs.values())
            .find_map(|p| match p {
                Payload::Smiles(s) => Some(s.as_str()),
                _ => None,
            })
    }

    /// The molecule this record is about, for linkage and scaffold keys.
    pub fn subject_smiles(&self) -> Option<&str> {
        self.subject.as_deref().or_else(|| self.first_smiles())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn task_codes_round_trip() {
        for task in ALL_TASKS {
            assert_eq!(task.code().parse::<Task>().unwrap(), task);
            let json = serde_json::to_string(&task).unwrap();
            assert_eq!(json, format!("\"{}\"", task.code()));
            assert_eq!(serde_json::from_str::<Task>(&json).unwrap(), task);
        }
    }

    #[test]
    fn payload_serialization_shape() {
        let p = Payload::Smiles("CCO".into());
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"kind":"smiles","value":"CCO"}"#
        );
        let n = Payload::Number(-0.77);
        assert_eq!(
            serde_json::to_string(&n).unwrap(),
            r#"{"kind":"number","value":-0.77}"#
        );
    }

    #[test]
    fn payload_rendering() {
        assert_eq!(Payload::Number(-0.77).render_value(), "-0.77");
        assert_eq!(Payload::Number(3.0).render_value(), "3");
        assert_eq!(Payload::Boolean(true).render_value(), "Yes");
        assert_eq!(Payload::Boolean(false).render_value(), "No");
    }

    #[test]
    fn record_serialization_is_stable() {
        let mut inputs = BTreeMap::new();
        inputs.insert("smiles".to_string(), Payload::Smiles("CCO".into()));
        let mut outputs = BTreeMap::new();
        outputs.insert("value".to_string(), Payload::Number(1.5));
        let record = CorpusRecord {
            id: "demo:1:PP-ESOL".into(),
            task: Task::PpEsol,
            inputs,
            outputs,
            selfies: None,
            source: "demo".into(),
            split: None,
            subject: Some("CCO".into()),
        };
        let one = serde_json::to_string(&record).unwrap();
        let back: CorpusRecord = serde_json::from_str(&one).unwrap();
        assert_eq!(back, record);
        assert_eq!(serde_json::to_string(&back).unwrap(), one);
    }
}

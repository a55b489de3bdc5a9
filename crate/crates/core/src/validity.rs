//! Validity checking: grammar, kekulizability, and the valence table, in
//! that order. `validate` is total over arbitrary byte strings; every
//! outcome is a report, never a panic.

use crate::element;
use crate::kekulize::kekulize;
use crate::molecule::Molecule;
use crate::smiles::{parse_smiles, SmilesError, SmilesErrorKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Grammar,
    RingClosure,
    UnknownElement,
    Kekulization,
    Valence,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub message: String,
    /// Byte offset into the input, for parse-stage failures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub offset: Option<usize>,
    /// Offending atom, for molecule-stage failures.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atom: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub failures: Vec<Failure>,
}

impl ValidityReport {
    fn ok() -> ValidityReport {
        ValidityReport { valid: true, failures: Vec::new() }
    }

    fn failed(failures: Vec<Failure>) -> ValidityReport {
        ValidityReport { valid: false, failures }
    }

    pub fn summary(&self) -> String {
        if self.valid {
            "valid".to_string()
        } else {
            self.failures
                .iter()
                .map(|f| f.message.as_str())
                .collect::<Vec<_>>()
                .join("; ")
        }
    }
}

impl From<&SmilesError> for Failure {
    fn from(e: &SmilesError) -> Failure {
        let kind = match e.kind {
            SmilesErrorKind::UnknownElement => FailureKind::UnknownElement,
            SmilesErrorKind::UnmatchedRingClosure
            | SmilesErrorKind::RingBondConflict
            | SmilesErrorKind::SelfRingBond
            | SmilesErrorKind::DuplicateBond => FailureKind::RingClosure,
            _ => FailureKind::Grammar,
        };
        Failure {
            kind,
            message: e.to_string(),
            offset: Some(e.offset),
            atom: None,
        }
    }
}

/// Full pipeline over text: parse, kekulize, check valences.
pub fn validate(text: &str) -> ValidityReport {
    match parse_smiles(text) {
        Err(e) => ValidityReport::failed(vec![Failure::from(&e)]),
        Ok(mol) => validate_molecule(&mol),
    }
}

/// Kekulizability and valence checks for an already-parsed molecule.
pub fn validate_molecule(mol: &Molecule) -> ValidityReport {
    let kek = match kekulize(mol) {
        Ok(kek) => kek,
        Err(e) => {
            let atom = e.atoms.first().copied();
            return ValidityReport::failed(vec![Failure {
                kind: FailureKind::Kekulization,
                message: e.to_string(),
                offset: None,
                atom,
            }]);
        }
    };
    let mut failures = Vec::new();
    for idx in 0..kek.atom_count() {
        let atom = kek.atom(idx);
        let allowed = element::charged_valences(atom.atomic_number, atom.formal_charge);
        if allowed.is_empty() {
            // Element outside the covalent table: any valence passes.
            continue;
        }
        let total = kek.total_valence(idx);
        if !allowed.iter().any(|&v| v as u32 == total) {
            failures.push(Failure {
                kind: FailureKind::Valence,
                message: format!(
                    "atom {} ({}{}): valence {} not in {:?}",
                    idx,
                    atom.element().symbol,
                    charge_suffix(atom.formal_charge),
                    total,
                    allowed,
                ),
                offset: None,
                atom: Some(idx),
            });
        }
    }
    if failures.is_empty() {
        ValidityReport::ok()
    } else {
        ValidityReport::failed(failures)
    }
}

fn charge_suffix(charge: i8) -> String {
    match charge.signum() {
        0 => String::new(),
        1 if charge == 1 => "+".to_string(),
        -1 if charge == -1 => "-".to_string(),
        _ => format!("{:+}", charge),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_molecules_validate() {
        for s in ["C", "CCO", "c1ccccc1", "C(C1C(C(C(C(O1)O)O)O)O)O", "[NH4+]", "O=C=O"] {
            let report = validate(s);
            assert!(report.valid, "{s}: {:?}", report.failures);
        }
    }

    #[test]
    fn grammar_failures_carry_offsets() {
        let report = validate("C(");
        assert!(!report.valid);
        assert_eq!(report.failures[0].kind, FailureKind::Grammar);
        assert_eq!(report.failures[0].offset, Some(1));

        let report = validate("C1CC");
        assert_eq!(report.failures[0].kind, FailureKind::RingClosure);
        assert_eq!(report.failures[0].offset, Some(1));

        let report = validate("Xx");
        assert_eq!(report.failures[0].kind, FailureKind::UnknownElement);

        let report = validate("");
        assert_eq!(report.failures[0].kind, FailureKind::Grammar);
    }

    #[test]
    fn fluorine_cannot_double_bond() {
        let report = validate("F=F");
        assert!(!report.valid);
        assert_eq!(report.failures.len(), 2);
        assert!(report.failures.iter().all(|f| f.kind == FailureKind::Valence));
    }

    #[test]
    fn kekulization_failure_reported() {
        let report = validate("c1cc1");
        assert!(!report.valid);
        assert_eq!(report.failures[0].kind, FailureKind::Kekulization);
        assert_eq!(report.failures[0].atom, Some(0));
    }

    #[test]
    fn pentavalent_nitrogen_uses_second_default() {
        assert!(validate("CN(=O)=O").valid);
        // Five sigma bonds total 5, which the table allows; six do not.
        assert!(validate("C[N](C)(C)(C)C").valid);
        assert!(!validate("C[N](C)(C)(C)(C)C").valid);
    }

    #[test]
    fn charged_valences_apply() {
        assert!(validate("[OH3+]").valid);
        assert!(validate("[O-]C").valid);
        assert!(!validate("[O-]=C").valid);
        assert!(validate("[Cl-]").valid);
        assert!(validate("[Fe+3]").valid);
    }
}

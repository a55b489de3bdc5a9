//! Molecule and reaction toolkit with corpus construction and scoring.
//!
//! The crate is layered: element data and graph primitives at the bottom,
//! the SMILES reader and writer above them, then canonicalization,
//! formulas, fingerprints, and descriptors, and finally the corpus
//! pipeline (ingest, dedup, split, render) and the evaluation side
//! (answer extraction, metrics, task scoring).

pub mod canon;
pub mod corpus;
pub mod descriptors;
pub mod element;
pub mod eval;
pub mod fingerprint;
pub mod formula;
pub mod graph;
pub mod hash;
pub mod kekulize;
pub mod molecule;
pub mod reaction;
pub mod smiles;
pub mod validity;

pub use canon::{canonical_form, canonical_ranks, canonical_smiles, canonical_smiles_of};
pub use corpus::{
    assign_splits, dedup, export_jsonl, import_jsonl, ingest_source, leakage_audit,
    linkage_groups, render, CorpusRecord, IngestOutcome, IngestSettings, InstructionSample,
    LeakageAudit, Payload, Split, SplitOptions, SplitOutcome, Task, TemplateSet, ALL_TASKS,
};
pub use descriptors::{mol_stats, murcko_scaffold, MolStats};
pub use element::{by_atomic_number, by_symbol, charged_valences, Element, ELEMENTS};
pub use eval::{
    extract_answer, report_table, score_task, top_k_em, AnswerKind, EvalError, Prediction,
    ReferenceSet, TaskReport,
};
pub use fingerprint::{
    morgan_fingerprint, path_fingerprint, tanimoto, Fingerprint, FingerprintError,
    FingerprintKind,
};
pub use formula::{molecular_formula, parse_formula, Formula, FormulaError};
pub use kekulize::{kekulize, KekulizeError};
pub use molecule::{Atom, Bond, BondDir, BondOrder, Chirality, Molecule, StructureError};
pub use reaction::{
    clean_forward, clean_retro, parse_reaction, relabel_by_atom_maps, strip_atom_maps,
    FsRecord, InvalidComponent, Reaction, ReactionError, RsRecord,
};
pub use smiles::{parse_smiles, write_smiles, SmilesError, SmilesErrorKind};
pub use validity::{validate, validate_molecule, Failure, FailureKind, ValidityReport};

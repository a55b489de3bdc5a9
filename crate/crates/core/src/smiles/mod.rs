mod parse;
mod write;

pub use parse::{parse_smiles, SmilesError, SmilesErrorKind};
pub use write::write_smiles;

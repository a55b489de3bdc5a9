//! Reaction SMILES: parsing, atom-map-driven relabeling, and the cleaning
//! passes that turn raw reactions into forward-synthesis and retrosynthesis
//! records.

use thiserror::Error;

use crate::canon::canonical_smiles_of;
use crate::molecule::Molecule;
use crate::smiles::{parse_smiles, SmilesError};

#[derive(Debug, Clone)]
pub struct Reaction {
    pub reactants: Vec<Molecule>,
    pub reagents: Vec<Molecule>,
    pub products: Vec<Molecule>,
}

/// Forward-synthesis record: everything on the input side combined, both
/// sides canonical and map-free.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsRecord {
    pub input_chemicals: Vec<String>,
    pub output_chemicals: Vec<String>,
}

/// Retrosynthesis record: one product to decompose, the full reactant list
/// to recover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RsRecord {
    pub input_product: String,
    pub output_reactants: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReactionError {
    #[error("expected 2 '>' separators, found {0}")]
    SeparatorCount(usize),
    #[error("reaction has no products")]
    NoProducts,
    #[error("reaction has no input molecules")]
    NoInputs,
    #[error("{side} {index}: {source}")]
    Component {
        side: &'static str,
        index: usize,
        source: SmilesError,
    },
    #[error("{side} {index}: atom map {map} repeated within one molecule")]
    DuplicateMap {
        side: &'static str,
        index: usize,
        map: u32,
    },
}

/// A cleaning pass hit an invalid component; the record is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{place}: {summary}")]
pub struct InvalidComponent {
    pub place: String,
    pub summary: String,
}

const SIDES: [&str; 3] = ["reactant", "reagent", "product"];

/// Parses `reactants>reagents>products`. Any side may be empty, but the
/// product side and at least one input side must name a molecule. Dots
/// separate molecules; our molecule grammar keeps dots out of branches, so
/// a plain split is exact.
pub fn parse_reaction(text: &str) -> Result<Reaction, ReactionError> {
    let parts: Vec<&str> = text.split('>').collect();
    if parts.len() != 3 {
        return Err(ReactionError::SeparatorCount(parts.len() - 1));
    }
    let mut sides: Vec<Vec<Molecule>> = Vec::with_capacity(3);
    for (side_idx, part) in parts.iter().enumerate() {
        let side = SIDES[side_idx];
        let part = part.trim();
        let mut molecules = Vec::new();
        if !part.is_empty() {
            for (index, chunk) in part.split('.').enumerate() {
                let mol = parse_smiles(chunk).map_err(|source| ReactionError::Component {
                    side,
                    index,
                    source,
                })?;
                check_maps(&mol, side, index)?;
                molecules.push(mol);
            }
        }
        sides.push(molecules);
    }
    let products = sides.pop().expect("three sides were parsed");
    let reagents = sides.pop().expect("three sides were parsed");
    let reactants = sides.pop().expect("three sides were parsed");
    if products.is_empty() {
        return Err(ReactionError::NoProducts);
    }
    if reactants.is_empty() && reagents.is_empty() {
        return Err(ReactionError::NoInputs);
    }
    Ok(Reaction {
        reactants,
        reagents,
        products,
    })
}

fn check_maps(mol: &Molecule, side: &'static str, index: usize) -> Result<(), ReactionError> {
    let mut seen = Vec::new();
    for atom in mol.atoms() {
        if let Some(map) = atom.atom_map {
            if seen.contains(&map) {
                return Err(ReactionError::DuplicateMap { side, index, map });
            }
            seen.push(map);
        }
    }
    Ok(())
}

fn map_set(mol: &Molecule) -> Vec<u32> {
    mol.atoms().iter().filter_map(|a| a.atom_map).collect()
}

/// Rehomes input-side molecules by comparing their atom maps with the
/// product maps: any shared map number makes a molecule a reactant, maps
/// without any shared number make it a reagent, and unmapped molecules
/// keep their original label. Idempotent; the input multiset is unchanged.
pub fn relabel_by_atom_maps(rxn: &Reaction) -> Reaction {
    let product_maps: Vec<u32> = rxn.products.iter().flat_map(map_set).collect();
    let mut reactants = Vec::new();
    let mut reagents = Vec::new();
    for (mol, was_reactant) in rxn
        .reactants
        .iter()
        .map(|m| (m, true))
        .chain(rxn.reagents.iter().map(|m| (m, false)))
    {
        let maps = map_set(mol);
        let to_reactants = if maps.is_empty() {
            was_reactant
        } else {
            maps.iter().any(|m| product_maps.contains(m))
        };
        if to_reactants {
            reactants.push(mol.clone());
        } else {
            reagents.push(mol.clone());
        }
    }
    Reaction {
        reactants,
        reagents,
        products: rxn.products.clone(),
    }
}

/// Clears every atom map; structure is untouched.
pub fn strip_atom_maps(mol: &Molecule) -> Molecule {
    mol.without_atom_maps()
}

/// Canonicalizes one side with maps stripped, keeping the molecule for
/// size checks. Order is preserved; duplicates are dropped after their
/// first occurrence.
fn canonical_side(
    mols: &[Molecule],
    side: &str,
) -> Result<Vec<(String, usize)>, InvalidComponent> {
    let mut out: Vec<(String, usize)> = Vec::with_capacity(mols.len());
    for (index, mol) in mols.iter().enumerate() {
        let stripped = mol.without_atom_maps();
        let text = canonical_smiles_of(&stripped).map_err(|report| InvalidComponent {
            place: format!("{side} {index}"),
            summary: report.summary(),
        })?;
        if !out.iter().any(|(t, _)| *t == text) {
            out.push((text, stripped.heavy_atom_count()));
        }
    }
    Ok(out)
}

/// Canonical, map-free, first-occurrence-deduped strings for a molecule
/// list. The `place` labels error messages.
pub fn canonical_chemicals(
    mols: &[Molecule],
    place: &str,
) -> Result<Vec<String>, InvalidComponent> {
    Ok(canonical_side(mols, place)?
        .into_iter()
        .map(|(t, _)| t)
        .collect())
}

/// Forward-synthesis cleaning: reactants and reagents combine into the
/// input; output chemicals that echo an input chemical or carry fewer than
/// `min_heavy` heavy atoms are dropped. An emptied output voids the record.
pub fn clean_forward(
    rxn: &Reaction,
    min_heavy: usize,
) -> Result<Option<FsRecord>, InvalidComponent> {
    let combined: Vec<Molecule> = rxn
        .reactants
        .iter()
        .chain(rxn.reagents.iter())
        .cloned()
        .collect();
    let input = canonical_side(&combined, "input")?;
    let output = canonical_side(&rxn.products, "product")?;

    let output_chemicals: Vec<String> = output
        .into_iter()
        .filter(|(text, heavy)| {
            *heavy >= min_heavy && !input.iter().any(|(t, _)| t == text)
        })
        .map(|(text, _)| text)
        .collect();
    if output_chemicals.is_empty() {
        return Ok(None);
    }
    Ok(Some(FsRecord {
        input_chemicals: input.into_iter().map(|(t, _)| t).collect(),
        output_chemicals,
    }))
}

/// Retrosynthesis cleaning: reagents are excluded entirely; each product
/// that is not itself a reactant and has at least `min_heavy` heavy atoms
/// becomes one record whose outputs are the full reactant list. An empty
/// reactant list yields no records.
pub fn clean_retro(
    rxn: &Reaction,
    min_heavy: usize,
) -> Result<Vec<RsRecord>, InvalidComponent> {
    let reactants = canonical_side(&rxn.reactants, "reactant")?;
    let products = canonical_side(&rxn.products, "product")?;
    if reactants.is_empty() {
        return Ok(Vec::new());
    }
    let output_reactants: Vec<String> = reactants.iter().map(|(t, _)| t.clone()).collect();
    Ok(products
        .into_iter()
        .filter(|(text, heavy)| {
            *heavy >= min_heavy && !reactants.iter().any(|(t, _)| t == text)
        })
        .map(|(input_product, _)| RsRecord {
            input_product,
            output_reactants: output_reactants.clone(),
        })
        .collect())
}

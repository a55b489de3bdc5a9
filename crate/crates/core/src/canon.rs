//! Canonical atom ranking and canonical SMILES emission.
//!
//! Ranking starts from per-atom invariants, refines by neighbor-rank
//! multisets to a fixpoint, and resolves remaining ties by trying each tied
//! atom and keeping whichever forced choice yields the smallest emitted
//! string. Annotations that do not affect the graph (atom maps, chirality
//! markers) never enter the ranking, but they do appear in the emitted
//! string, so the smallest-string rule still orders automorphic atoms
//! deterministically.

use crate::molecule::Molecule;
use crate::smiles::{parse_smiles, write_smiles};
use crate::validity::{validate_molecule, ValidityReport};

/// Invariant tuple feeding the initial partition. Ordering is significant
/// only in that it is fixed.
fn initial_invariant(mol: &Molecule, idx: usize) -> (u8, u8, u8, i8, u16, bool, bool) {
    let atom = mol.atom(idx);
    (
        atom.atomic_number,
        mol.degree(idx) as u8,
        mol.hydrogens_on(idx),
        atom.formal_charge,
        atom.isotope.map_or(0, |v| v + 1),
        mol.atom_in_ring(idx),
        atom.aromatic,
    )
}

fn dense_ranks<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut ranks = vec![0usize; keys.len()];
    let mut rank = 0usize;
    for (pos, &atom) in order.iter().enumerate() {
        if pos > 0 && keys[order[pos - 1]] != keys[atom] {
            rank = pos;
        }
        ranks[atom] = rank;
    }
    ranks
}

/// One refinement pass: rank plus sorted neighbor ranks.
fn refine(mol: &Molecule, mut ranks: Vec<usize>) -> Vec<usize> {
    loop {
        let keys: Vec<(usize, Vec<usize>)> = (0..mol.atom_count())
            .map(|i| {
                let mut nbrs: Vec<usize> =
                    mol.neighbors(i).iter().map(|&(v, _)| ranks[v]).collect();
                nbrs.sort_unstable();
                (ranks[i], nbrs)
            })
            .collect();
        let next = dense_ranks(&keys);
        if next == ranks {
            return ranks;
        }
        ranks = next;
    }
}

/// Splits the first still-tied class by trying each member as its sole
/// occupant, refining, recursing, and keeping the branch whose final string
/// is smallest.
fn break_ties(mol: &Molecule, ranks: Vec<usize>) -> (String, Vec<usize>) {
    let n = mol.atom_count();
    let mut class_size = vec![0usize; n];
    for &r in &ranks {
        class_size[r] += 1;
    }
    let tied_rank = (0..n).find(|&r| class_size[r] > 1);
    let Some(rank) = tied_rank else {
        let order = order_from_ranks(&ranks);
        return (write_smiles(mol, Some(&order)), ranks);
    };

    let mut best: Option<(String, Vec<usize>)> = None;
    for atom in (0..n).filter(|&a| ranks[a] == rank) {
        let forced: Vec<usize> = (0..n)
            .map(|a| {
                if a != atom && ranks[a] >= rank {
                    ranks[a] + 1
                } else {
                    ranks[a]
                }
            })
            .collect();
        let candidate = break_ties(mol, refine(mol, forced));
        if best.as_ref().is_none_or(|b| candidate.0 < b.0) {
            best = Some(candidate);
        }
    }
    best.expect("tied class is nonempty")
}

fn order_from_ranks(ranks: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..ranks.len()).collect();
    order.sort_unstable_by_key(|&a| ranks[a]);
    order
}

/// Canonical ranks for a single connected fragment.
fn fragment_ranks(mol: &Molecule) -> (String, Vec<usize>) {
    let keys: Vec<_> = (0..mol.atom_count())
        .map(|i| initial_invariant(mol, i))
        .collect();
    let ranks = refine(mol, dense_ranks(&keys));
    break_ties(mol, ranks)
}

/// Canonical ranks over the whole molecule. Within a fragment, rank 0 is
/// the emission root; fragments are ordered by their canonical string (ties
/// by first appearance), matching `canonical_form` output order.
pub fn canonical_ranks(mol: &Molecule) -> Vec<usize> {
    let components = mol.components();
    let mut pieces: Vec<(String, usize, Vec<usize>, Vec<usize>)> = components
        .into_iter()
        .enumerate()
        .map(|(i, atoms)| {
            let sub = mol.induced_subgraph(&atoms);
            let (text, ranks) = fragment_ranks(&sub);
            (text, i, atoms, ranks)
        })
        .collect();
    pieces.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));

    let mut ranks = vec![0usize; mol.atom_count()];
    let mut offset = 0usize;
    for (_, _, atoms, local) in &pieces {
        for (sub_idx, &orig) in atoms.iter().enumerate() {
            ranks[orig] = offset + local[sub_idx];
        }
        offset += atoms.len();
    }
    ranks
}

/// Canonical string for any molecule, valid or not. Fragment strings are
/// emitted independently and joined in sorted order.
pub fn canonical_form(mol: &Molecule) -> String {
    if mol.is_empty() {
        return String::new();
    }
    let components = mol.components();
    let mut texts: Vec<String> = components
        .into_iter()
        .map(|atoms| fragment_ranks(&mol.induced_subgraph(&atoms)).0)
        .collect();
    texts.sort();
    texts.join(".")
}

/// Parses, validates, and emits the canonical form.
pub fn canonical_smiles(text: &str) -> Result<String, ValidityReport> {
    let mol = match parse_smiles(text) {
        Ok(mol) => mol,
        Err(e) => {
            return Err(ValidityReport {
                valid: false,
                failures: vec![(&e).into()],
            })
        }
    };
    canonical_smiles_of(&mol)
}

/// Validates a parsed molecule and emits its canonical form.
pub fn canonical_smiles_of(mol: &Molecule) -> Result<String, ValidityReport> {
    let report = validate_molecule(mol);
    if !report.valid {
        return Err(report);
    }
    Ok(canonical_form(mol))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ethanol_spellings_agree() {
        assert_eq!(canonical_smiles("CCO").unwrap(), canonical_smiles("OCC").unwrap());
        assert_eq!(canonical_smiles("C(O)C").unwrap(), canonical_smiles("CCO").unwrap());
    }

    #[test]
    fn canonicalization_is_idempotent() {
        for s in ["CCO", "c1ccccc1", "CC(=O)Oc1ccccc1C(=O)O", "C1CC1C2CC2", "[13CH4]"] {
            let once = canonical_smiles(s).unwrap();
            let twice = canonical_smiles(&once).unwrap();
            assert_eq!(once, twice, "not stable for {s}");
        }
    }

    #[test]
    fn rank_ordered_invariants_match_across_spellings() {
        let a = parse_smiles("CCO").unwrap();
        let b = parse_smiles("OCC").unwrap();
        let ra = canonical_ranks(&a);
        let rb = canonical_ranks(&b);
        let seq = |mol: &Molecule, ranks: &[usize]| {
            let mut atoms: Vec<usize> = (0..mol.atom_count()).collect();
            atoms.sort_by_key(|&i| ranks[i]);
            atoms
                .into_iter()
                .map(|i| initial_invariant(mol, i))
                .collect::<Vec<_>>()
        };
        assert_eq!(seq(&a, &ra), seq(&b, &rb));
    }

    #[test]
    fn fragments_sort_in_output() {
        let joined = canonical_smiles("[Na+].CC(=O)[O-]").unwrap();
        let flipped = canonical_smiles("CC(=O)[O-].[Na+]").unwrap();
        assert_eq!(joined, flipped);
    }

    #[test]
    fn atom_maps_do_not_shift_ranks() {
        let plain = canonical_smiles("CCO").unwrap();
        let mapped = canonical_smiles("[CH3:3][CH2:1][OH:2]").unwrap();
        let stripped = parse_smiles(&mapped).unwrap().without_atom_maps();
        assert_eq!(canonical_form(&stripped), plain);
    }

    #[test]
    fn benzene_is_stable_under_rotation() {
        let reference = canonical_smiles("c1ccccc1").unwrap();
        for s in ["c1ccccc1", "c1ccc(cc1)", "c1ccccc1"] {
            if let Ok(c) = canonical_smiles(s) {
                assert_eq!(c, reference);
            }
        }
    }
}

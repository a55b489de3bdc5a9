//! Murcko scaffolds and per-molecule summary statistics.

use serde::{Deserialize, Serialize};

use crate::element::by_atomic_number;
use crate::molecule::{BondOrder, Molecule};

/// Ring framework of a molecule: fragments with no ring are dropped, then
/// degree-1 atoms hanging off a single bond are pruned to a fixpoint.
/// Atoms attached through a double or triple bond survive pruning, so an
/// exocyclic carbonyl stays with its ring. Idempotent by construction.
pub fn murcko_scaffold(mol: &Molecule) -> Molecule {
    let mut keep: Vec<bool> = vec![false; mol.atom_count()];
    for fragment in mol.components() {
        if fragment.iter().any(|&a| mol.atom_in_ring(a)) {
            for &a in &fragment {
                keep[a] = true;
            }
        }
    }

    loop {
        let mut changed = false;
        for atom in 0..mol.atom_count() {
            if !keep[atom] {
                continue;
            }
            let live: Vec<usize> = mol
                .neighbors(atom)
                .iter()
                .filter(|&&(v, _)| keep[v])
                .map(|&(_, b)| b)
                .collect();
            if live.len() == 1 && mol.bond(live[0]).order == BondOrder::Single {
                keep[atom] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    let kept: Vec<usize> = (0..mol.atom_count()).filter(|&a| keep[a]).collect();
    mol.induced_subgraph(&kept)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MolStats {
    pub heavy_atom_count: usize,
    pub molecular_weight: f64,
    pub ring_count: usize,
}

/// Heavy atoms, weight in Daltons, and circuit-rank ring count. Weight uses
/// the standard atomic-weight table; an explicit isotope contributes its
/// mass number instead.
pub fn mol_stats(mol: &Molecule) -> MolStats {
    let mut weight = 0.0f64;
    let hydrogen = by_atomic_number(1).expect("hydrogen is tabulated").weight;
    for idx in 0..mol.atom_count() {
        let atom = mol.atom(idx);
        weight += match atom.isotope {
            Some(mass) => f64::from(mass),
            None => {
                by_atomic_number(atom.atomic_number)
                    .expect("molecule atoms carry known elements")
                    .weight
            }
        };
        weight += f64::from(mol.hydrogens_on(idx)) * hydrogen;
    }
    MolStats {
        heavy_atom_count: mol.heavy_atom_count(),
        molecular_weight: weight,
        ring_count: mol.circuit_rank(),
    }
}

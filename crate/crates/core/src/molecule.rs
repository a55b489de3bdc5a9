//! The molecular graph: atoms, bonds, and the hydrogen-deduction model.

use crate::element::{self, Element};
use crate::graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to an atom's bond-order sum. Aromatic bonds count as one;
    /// the extra half-bond is handled by the pending-double rule during
    /// hydrogen deduction and by kekulization everywhere else.
    pub fn numeric(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

/// Cis/trans bond direction markers (`/` and `\`). Preserved verbatim, never
/// interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondDir {
    Up,
    Down,
}

/// Tetrahedral parity markers (`@` and `@@`). Preserved verbatim, never
/// interpreted; canonical ordering ignores them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    Anticlockwise,
    Clockwise,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub atomic_number: u8,
    pub isotope: Option<u16>,
    pub formal_charge: i8,
    /// Fixed hydrogen count, present iff the atom was written in brackets
    /// (or set programmatically). Absent means the count is deduced.
    pub explicit_h: Option<u8>,
    pub aromatic: bool,
    pub atom_map: Option<u32>,
    pub chirality: Option<Chirality>,
}

impl Atom {
    pub fn new(atomic_number: u8) -> Atom {
        Atom {
            atomic_number,
            isotope: None,
            formal_charge: 0,
            explicit_h: None,
            aromatic: false,
            atom_map: None,
            chirality: None,
        }
    }

    pub fn element(&self) -> &'static Element {
        element::by_atomic_number(self.atomic_number).expect("atomic number checked on construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    pub direction: Option<BondDir>,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("unknown atomic number {0}")]
    UnknownElement(u8),
    #[error("bond references atom {0} out of range")]
    BondIndexOutOfRange(usize),
    #[error("self bond on atom {0}")]
    SelfBond(usize),
    #[error("duplicate bond between atoms {0} and {1}")]
    DuplicateBond(usize, usize),
    #[error("aromatic bond between atoms {0} and {1} requires both to be aromatic")]
    AromaticBondOnPlainAtom(usize, usize),
    #[error("atom {0}: element may not carry the aromatic flag")]
    NotAromaticEligible(usize),
}

/// An immutable molecular graph. Ring membership is computed once at
/// construction; every accessor is cheap after that.
#[derive(Debug, Clone)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    adjacency: Vec<Vec<(usize, usize)>>,
    ring_atom: Vec<bool>,
    ring_bond: Vec<bool>,
}

impl Molecule {
    pub fn from_parts(atoms: Vec<Atom>, bonds: Vec<Bond>) -> Result<Molecule, StructureError> {
        let n = atoms.len();
        for atom in &atoms {
            let elem = element::by_atomic_number(atom.atomic_number)
                .ok_or(StructureError::UnknownElement(atom.atomic_number))?;
            if atom.aromatic && !elem.aromatic_eligible {
                return Err(StructureError::NotAromaticEligible(
                    atoms.iter().position(|a| a == atom).unwrap_or(0),
                ));
            }
        }
        let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for (idx, bond) in bonds.iter().enumerate() {
            if bond.a >= n {
                return Err(StructureError::BondIndexOutOfRange(bond.a));
            }
            if bond.b >= n {
                return Err(StructureError::BondIndexOutOfRange(bond.b));
            }
            if bond.a == bond.b {
                return Err(StructureError::SelfBond(bond.a));
            }
            if adjacency[bond.a].iter().any(|&(w, _)| w == bond.b) {
                return Err(StructureError::DuplicateBond(bond.a, bond.b));
            }
            if bond.order == BondOrder::Aromatic
                && !(atoms[bond.a].aromatic && atoms[bond.b].aromatic)
            {
                return Err(StructureError::AromaticBondOnPlainAtom(bond.a, bond.b));
            }
            adjacency[bond.a].push((bond.b, idx));
            adjacency[bond.b].push((bond.a, idx));
        }
        let (ring_atom, ring_bond) = graph::ring_flags(n, &adjacency);
        Ok(Molecule {
            atoms,
            bonds,
            adjacency,
            ring_atom,
            ring_bond,
        })
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, idx: usize) -> &Atom {
        &self.atoms[idx]
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bond(&self, idx: usize) -> &Bond {
        &self.bonds[idx]
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    /// Incident (neighbor atom, bond index) pairs in insertion order.
    pub fn neighbors(&self, idx: usize) -> &[(usize, usize)] {
        &self.adjacency[idx]
    }

    pub fn degree(&self, idx: usize) -> usize {
        self.adjacency[idx].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a].iter().find(|&&(w, _)| w == b).map(|&(_, bond)| bond)
    }

    pub fn atom_in_ring(&self, idx: usize) -> bool {
        self.ring_atom[idx]
    }

    pub fn bond_in_ring(&self, bond_idx: usize) -> bool {
        self.ring_bond[bond_idx]
    }

    /// Connected components (fragments) ordered by lowest atom index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        graph::components(self.atoms.len(), &self.adjacency)
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Independent cycles: bonds - atoms + components.
    pub fn circuit_rank(&self) -> usize {
        self.bonds.len() + self.component_count() - self.atoms.len()
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| a.atomic_number > 1).count()
    }

    pub fn has_aromatic_bonds(&self) -> bool {
        self.bonds.iter().any(|b| b.order == BondOrder::Aromatic)
    }

    fn bond_order_sum(&self, idx: usize) -> u32 {
        self.adjacency[idx]
            .iter()
            .map(|&(_, b)| self.bonds[b].order.numeric() as u32)
            .sum()
    }

    fn has_incident_aromatic_bond(&self, idx: usize) -> bool {
        self.adjacency[idx]
            .iter()
            .any(|&(_, b)| self.bonds[b].order == BondOrder::Aromatic)
    }

    /// Hydrogens carried by the atom itself. Bracket atoms fix the count;
    /// otherwise it is deduced as (smallest allowed valence >= bond-order
    /// sum) - bond-order sum, floored at zero, where the valence list is
    /// adjusted for formal charge. An atom still holding aromatic bonds
    /// reserves one unit of valence for the double bond kekulization will
    /// assign. Hydrogen atoms written as graph nodes are not counted here.
    pub fn hydrogens_on(&self, idx: usize) -> u8 {
        self.hydrogens_probe(idx, &self.atoms[idx])
    }

    /// Hydrogen deduction for a hypothetical replacement of atom `idx`,
    /// against the real bond context. Lets the writer ask what an
    /// unbracketed token would re-parse to.
    pub(crate) fn hydrogens_probe(&self, idx: usize, atom: &Atom) -> u8 {
        if let Some(h) = atom.explicit_h {
            return h;
        }
        let valences = element::charged_valences(atom.atomic_number, atom.formal_charge);
        if valences.is_empty() {
            return 0;
        }
        let sum = self.bond_order_sum(idx);
        if atom.aromatic && self.has_incident_aromatic_bond(idx) {
            let v = *valences.first().unwrap() as i64;
            let gap = v - sum as i64;
            return if gap >= 1 { (gap - 1) as u8 } else { 0 };
        }
        match valences.iter().find(|&&v| v as u32 >= sum) {
            Some(&v) => (v as u32 - sum) as u8,
            None => 0,
        }
    }

    /// Bond-order sum plus hydrogens: the quantity the valence check tests.
    pub fn total_valence(&self, idx: usize) -> u32 {
        self.bond_order_sum(idx) + self.hydrogens_on(idx) as u32
    }

    /// True when kekulization must route a double bond through this atom.
    pub(crate) fn wants_kekule_double(&self, idx: usize) -> bool {
        let atom = &self.atoms[idx];
        if !atom.aromatic {
            return false;
        }
        let valences = element::charged_valences(atom.atomic_number, atom.formal_charge);
        if valences.is_empty() {
            return false;
        }
        let committed = self.bond_order_sum(idx) as i64 + self.hydrogens_on(idx) as i64;
        *valences.first().unwrap() as i64 - committed >= 1
    }

    /// Rebuilds with the given bond orders; used by kekulization. Atom data
    /// and bond endpoints are untouched, so structural checks cannot fail.
    pub(crate) fn with_bond_orders(&self, orders: Vec<BondOrder>) -> Molecule {
        debug_assert_eq!(orders.len(), self.bonds.len());
        let bonds = self
            .bonds
            .iter()
            .zip(orders)
            .map(|(b, order)| Bond { order, ..*b })
            .collect();
        Molecule {
            atoms: self.atoms.clone(),
            bonds,
            adjacency: self.adjacency.clone(),
            ring_atom: self.ring_atom.clone(),
            ring_bond: self.ring_bond.clone(),
        }
    }

    /// Copy with all atom maps cleared; structure is otherwise identical.
    pub fn without_atom_maps(&self) -> Molecule {
        let mut out = self.clone();
        for atom in &mut out.atoms {
            atom.atom_map = None;
        }
        out
    }

    /// The sub-molecule induced by `keep` (ascending atom indices). Bonds
    /// with both endpoints kept survive; everything else is dropped.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Molecule {
        let mut remap = vec![usize::MAX; self.atoms.len()];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let atoms = keep.iter().map(|&i| self.atoms[i].clone()).collect();
        let bonds = self
            .bonds
            .iter()
            .filter(|b| remap[b.a] != usize::MAX && remap[b.b] != usize::MAX)
            .map(|b| Bond {
                a: remap[b.a],
                b: remap[b.b],
                ..*b
            })
            .collect();
        Molecule::from_parts(atoms, bonds).expect("subgraph of a valid molecule is valid")
    }
}

//! Bit-vector fingerprints and Tanimoto similarity.
//!
//! Both generators fold 64-bit feature identifiers into a fixed-width
//! bitset with `id % width`. Identifiers come from `hash::stable_hash_words`
//! over tagged word sequences, so fingerprints are bit-exact across runs
//! and platforms.

use std::collections::HashMap;

use thiserror::Error;

use crate::hash::stable_hash_words;
use crate::molecule::{BondOrder, Molecule};

/// Domain tags keep the three feature kinds from colliding structurally.
const TAG_MORGAN_ATOM: u64 = 1;
const TAG_MORGAN_ROUND: u64 = 2;
const TAG_PATH: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FingerprintKind {
    Morgan { radius: u32 },
    Path { min_len: usize, max_len: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fingerprint {
    kind: FingerprintKind,
    width: usize,
    blocks: Vec<u64>,
}

impl Fingerprint {
    fn empty(kind: FingerprintKind, width: usize) -> Self {
        assert!(width.is_power_of_two(), "fingerprint width must be a power of two");
        Fingerprint {
            kind,
            width,
            blocks: vec![0; width / 64],
        }
    }

    fn set(&mut self, id: u64) {
        let bit = (id % self.width as u64) as usize;
        self.blocks[bit / 64] |= 1u64 << (bit % 64);
    }

    pub fn kind(&self) -> FingerprintKind {
        self.kind
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn popcount(&self) -> u32 {
        self.blocks.iter().map(|b| b.count_ones()).sum()
    }

    pub fn bit(&self, index: usize) -> bool {
        self.blocks[index / 64] & (1u64 << (index % 64)) != 0
    }

    #[cfg(test)]
    pub(crate) fn from_set_bits(kind: FingerprintKind, width: usize, bits: &[usize]) -> Self {
        let mut fp = Fingerprint::empty(kind, width);
        for &b in bits {
            fp.blocks[b / 64] |= 1u64 << (b % 64);
        }
        fp
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FingerprintError {
    #[error("fingerprint parameters differ: {0:?} vs {1:?}")]
    ParamMismatch(FingerprintKind, FingerprintKind),
}

fn bond_code(order: BondOrder) -> u64 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

/// Round-0 atom identifier. Atom maps are deliberately absent so mapped and
/// unmapped forms of a molecule fingerprint identically.
fn atom_seed(mol: &Molecule, idx: usize) -> u64 {
    let atom = mol.atom(idx);
    stable_hash_words(&[
        TAG_MORGAN_ATOM,
        u64::from(atom.atomic_number),
        mol.degree(idx) as u64,
        u64::from(mol.hydrogens_on(idx)),
        (i64::from(atom.formal_charge) + 512) as u64,
        u64::from(atom.isotope.map_or(0, |v| v + 1)),
        u64::from(mol.atom_in_ring(idx)),
        u64::from(atom.aromatic),
    ])
}

/// Circular fingerprint. Each atom contributes one identifier per round;
/// identifiers whose environments cover the same atom set are deduplicated,
/// keeping the earliest round (ties to the smaller identifier).
pub fn morgan_fingerprint(mol: &Molecule, radius: u32, width: usize) -> Fingerprint {
    let n = mol.atom_count();
    let mut fp = Fingerprint::empty(FingerprintKind::Morgan { radius }, width);
    if n == 0 {
        return fp;
    }

    let mut ids: Vec<u64> = (0..n).map(|i| atom_seed(mol, i)).collect();
    let mut in_env: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            let mut mask = vec![false; n];
            mask[i] = true;
            mask
        })
        .collect();
    let mut envs: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();

    // best[env] = (round, id) minimum seen for that exact atom set.
    let mut best: HashMap<Vec<usize>, (u32, u64)> = HashMap::new();
    for i in 0..n {
        let entry = best.entry(envs[i].clone()).or_insert((0, ids[i]));
        if (0, ids[i]) < *entry {
            *entry = (0, ids[i]);
        }
    }

    for round in 1..=radius {
        let next: Vec<u64> = (0..n)
            .map(|i| {
                let mut nbrs: Vec<(u64, u64)> = mol
                    .neighbors(i)
                    .iter()
                    .map(|&(v, b)| (bond_code(mol.bond(b).order), ids[v]))
                    .collect();
                nbrs.sort_unstable();
                let mut words = vec![TAG_MORGAN_ROUND, u64::from(round), ids[i]];
                for (code, id) in nbrs {
                    words.push(code);
                    words.push(id);
                }
                stable_hash_words(&words)
            })
            .collect();
        ids = next;

        for i in 0..n {
            let grown: Vec<usize> = envs[i]
                .iter()
                .flat_map(|&m| mol.neighbors(m).iter().map(|&(v, _)| v))
                .filter(|&v| !in_env[i][v])
                .collect();
            for &v in &grown {
                in_env[i][v] = true;
            }
            if !grown.is_empty() {
                envs[i].extend(grown);
                envs[i].sort_unstable();
                envs[i].dedup();
            }
            let entry = best.entry(envs[i].clone()).or_insert((round, ids[i]));
            if (round, ids[i]) < *entry {
                *entry = (round, ids[i]);
            }
        }
    }

    for &(_, id) in best.values() {
        fp.set(id);
    }
    fp
}

/// Linear-path fingerprint. Paths are simple (no repeated atom), measured
/// in atoms, and hashed in whichever direction gives the smaller word
/// sequence so both traversals land on the same bit.
pub fn path_fingerprint(mol: &Molecule, min_len: usize, max_len: usize, width: usize) -> Fingerprint {
    assert!(min_len >= 1 && min_len <= max_len, "path length bounds must satisfy 1 <= min <= max");
    let kind = FingerprintKind::Path { min_len, max_len };
    let mut fp = Fingerprint::empty(kind, width);
    let n = mol.atom_count();
    if n == 0 {
        return fp;
    }

    let mut on_path = vec![false; n];
    let mut path: Vec<(usize, Option<u64>)> = Vec::with_capacity(max_len);
    for start in 0..n {
        path.push((start, None));
        on_path[start] = true;
        extend_paths(mol, min_len, max_len, &mut fp, &mut path, &mut on_path);
        on_path[start] = false;
        path.pop();
    }
    fp
}

fn extend_paths(
    mol: &Molecule,
    min_len: usize,
    max_len: usize,
    fp: &mut Fingerprint,
    path: &mut Vec<(usize, Option<u64>)>,
    on_path: &mut [bool],
) {
    // Emit once per undirected path: only when the start index is smaller,
    // or for the single-atom path.
    let first = path[0].0;
    let last = path[path.len() - 1].0;
    if path.len() >= min_len && (path.len() == 1 || first < last) {
        fp.set(path_id(mol, path));
    }
    if path.len() == max_len {
        return;
    }
    let tail = path[path.len() - 1].0;
    for &(v, b) in mol.neighbors(tail) {
        if on_path[v] {
            continue;
        }
        on_path[v] = true;
        path.push((v, Some(bond_code(mol.bond(b).order))));
        extend_paths(mol, min_len, max_len, fp, path, on_path);
        path.pop();
        on_path[v] = false;
    }
}

fn path_id(mol: &Molecule, path: &[(usize, Option<u64>)]) -> u64 {
    let k = path.len();
    let mut forward = Vec::with_capacity(2 * k);
    for (i, &(atom, bond)) in path.iter().enumerate() {
        if i > 0 {
            forward.push(bond.expect("non-first path entries carry a bond"));
        }
        forward.push(u64::from(mol.atom(atom).atomic_number));
    }
    let mut backward = Vec::with_capacity(2 * k);
    for (i, &(atom, _)) in path.iter().enumerate().rev() {
        if i < k - 1 {
            backward.push(path[i + 1].1.expect("non-first path entries carry a bond"));
        }
        backward.push(u64::from(mol.atom(atom).atomic_number));
    }
    let seq = if forward <= backward { forward } else { backward };
    let mut words = Vec::with_capacity(seq.len() + 1);
    words.push(TAG_PATH);
    words.extend_from_slice(&seq);
    stable_hash_words(&words)
}

/// |intersection| / |union| over set bits. Two all-zero fingerprints score
/// 0.0: absence of features is no evidence of similarity.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    if a.kind != b.kind || a.width != b.width {
        return Err(FingerprintError::ParamMismatch(a.kind, b.kind));
    }
    let mut inter = 0u64;
    let mut union = 0u64;
    for (x, y) in a.blocks.iter().zip(&b.blocks) {
        inter += u64::from((x & y).count_ones());
        union += u64::from((x | y).count_ones());
    }
    if union == 0 {
        return Ok(0.0);
    }
    Ok(inter as f64 / union as f64)
}

//! Aromatic bond assignment. Every atom that still needs one unit of
//! valence must take part in exactly one double bond chosen from the
//! aromatic bonds, which makes kekulization a perfect-matching problem over
//! those atoms. The search is exact backtracking with a fixed order (lowest
//! atom index first), so results are deterministic.

use crate::molecule::{BondOrder, Molecule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("kekulization failed: no alternating assignment covers atoms {atoms:?}")]
pub struct KekulizeError {
    /// Atoms requiring a double bond in the component that could not be
    /// perfectly matched.
    pub atoms: Vec<usize>,
}

/// Replaces every aromatic bond order with single or double. Atom aromatic
/// flags are kept, so a second call sees no aromatic bonds and returns the
/// molecule unchanged.
pub fn kekulize(mol: &Molecule) -> Result<Molecule, KekulizeError> {
    if !mol.has_aromatic_bonds() {
        return Ok(mol.clone());
    }
    let n = mol.atom_count();
    let needs: Vec<bool> = (0..n).map(|i| mol.wants_kekule_double(i)).collect();

    // Candidate neighbors per needing atom: aromatic bonds to other needing
    // atoms, ascending.
    let mut cands: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for i in (0..n).filter(|&i| needs[i]) {
        let mut list: Vec<(usize, usize)> = mol
            .neighbors(i)
            .iter()
            .filter(|&&(v, b)| needs[v] && mol.bond(b).order == BondOrder::Aromatic)
            .copied()
            .collect();
        list.sort_unstable();
        cands[i] = list;
    }

    // Connected components of the needing set, walked over candidate edges.
    // Matching each component separately keeps backtracking local, and an
    // odd component can be rejected without any search.
    let mut mate = vec![usize::MAX; n];
    let mut comp_seen = vec![false; n];
    for start in (0..n).filter(|&i| needs[i]) {
        if comp_seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = vec![start];
        comp_seen[start] = true;
        while let Some(v) = queue.pop() {
            comp.push(v);
            for &(w, _) in &cands[v] {
                if !comp_seen[w] {
                    comp_seen[w] = true;
                    queue.push(w);
                }
            }
        }
        comp.sort_unstable();
        if comp.len() % 2 != 0 || !match_component(&comp, &cands, &mut mate) {
            return Err(KekulizeError { atoms: comp });
        }
    }

    let orders = mol
        .bonds()
        .iter()
        .map(|bond| match bond.order {
            // At most one bond joins any atom pair, so a matched pair
            // pinpoints its aromatic bond.
            BondOrder::Aromatic => {
                if mate[bond.a] == bond.b {
                    BondOrder::Double
                } else {
                    BondOrder::Single
                }
            }
            other => other,
        })
        .collect();
    Ok(mol.with_bond_orders(orders))
}

/// Exact backtracking over one component. Frames carry the atom being
/// matched and the next candidate slot to try, so the search is iterative
/// and immune to stack depth.
fn match_component(comp: &[usize], cands: &[Vec<(usize, usize)>], mate: &mut [usize]) -> bool {
    let first_free = |mate: &[usize]| comp.iter().copied().find(|&u| mate[u] == usize::MAX);

    let Some(u0) = first_free(mate) else {
        return true;
    };
    let mut frames: Vec<(usize, usize)> = vec![(u0, 0)];
    while let Some(&(u, slot)) = frames.last() {
        // Undo the pairing this frame made on its previous attempt.
        if slot > 0 {
            let (prev, _) = cands[u][slot - 1];
            if mate[u] == prev {
                mate[u] = usize::MAX;
                mate[prev] = usize::MAX;
            }
        }
        let next = cands[u][slot..]
            .iter()
            .position(|&(v, _)| mate[v] == usize::MAX)
            .map(|p| p + slot);
        match next {
            Some(pos) => {
                let (v, _) = cands[u][pos];
                frames.last_mut().unwrap().1 = pos + 1;
                mate[u] = v;
                mate[v] = u;
                match first_free(mate) {
                    Some(w) => frames.push((w, 0)),
                    None => return true,
                }
            }
            None => {
                frames.pop();
                if frames.is_empty() {
                    return false;
                }
            }
        }
    }
    true
}

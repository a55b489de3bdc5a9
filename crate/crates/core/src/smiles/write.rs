//! SMILES writer. Traversal follows a caller-supplied atom priority, which
//! is what makes canonical emission and randomized rewrites the same code
//! path. Both passes are iterative so chain length never threatens the
//! stack.

use std::collections::HashMap;

use crate::molecule::{Atom, BondDir, BondOrder, Chirality, Molecule};

/// Renders the molecule as SMILES. `order`, when given, lists atom indices
/// from highest to lowest priority: fragments are emitted in priority order
/// of their best atom, traversal starts at each fragment's best atom, and
/// neighbors are visited best-first. Defaults to input order.
pub fn write_smiles(mol: &Molecule, order: Option<&[usize]>) -> String {
    let n = mol.atom_count();
    if n == 0 {
        return String::new();
    }
    let priority: Vec<usize> = match order {
        Some(order) => {
            assert_eq!(order.len(), n, "atom order must cover every atom");
            let mut priority = vec![usize::MAX; n];
            for (p, &atom) in order.iter().enumerate() {
                assert!(atom < n && priority[atom] == usize::MAX, "atom order must be a permutation");
                priority[atom] = p;
            }
            priority
        }
        None => (0..n).collect(),
    };

    let plan = plan_traversal(mol, &priority);
    emit(mol, &plan)
}

struct Traversal {
    /// Fragment roots in emission order.
    roots: Vec<usize>,
    /// Tree children per atom, best-first, with the connecting bond.
    children: Vec<Vec<(usize, usize)>>,
    /// Ring-closure digits attached to each atom, in emission order per atom.
    ring_bonds_at: Vec<Vec<usize>>,
    /// For each ring bond, the atom that opens it (emitted first).
    ring_open_at: HashMap<usize, usize>,
}

fn plan_traversal(mol: &Molecule, priority: &[usize]) -> Traversal {
    let n = mol.atom_count();
    let mut by_priority: Vec<usize> = (0..n).collect();
    by_priority.sort_unstable_by_key(|&a| priority[a]);

    let mut visited = vec![false; n];
    let mut visit_seq = vec![usize::MAX; n];
    let mut seq = 0usize;
    let mut roots = Vec::new();
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut parent_bond: Vec<Option<usize>> = vec![None; n];
    let mut ring_bonds: Vec<usize> = Vec::new();
    let mut tree_bond = vec![false; mol.bond_count()];

    // visit_seq is assigned at pop so it matches emission order exactly;
    // the ring-digit opener is whichever endpoint gets emitted first.
    for &root in &by_priority {
        if visited[root] {
            continue;
        }
        roots.push(root);
        visited[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            visit_seq[u] = seq;
            seq += 1;
            let mut nbrs: Vec<(usize, usize)> = mol.neighbors(u).to_vec();
            nbrs.sort_unstable_by_key(|&(v, _)| priority[v]);
            for (v, bond) in nbrs {
                if Some(bond) == parent_bond[u] || tree_bond[bond] {
                    continue;
                }
                if visited[v] {
                    if !ring_bonds.contains(&bond) {
                        ring_bonds.push(bond);
                    }
                } else {
                    visited[v] = true;
                    tree_bond[bond] = true;
                    parent_bond[v] = Some(bond);
                    children[u].push((v, bond));
                }
            }
            for &(v, _) in children[u].iter().rev() {
                stack.push(v);
            }
        }
    }

    // Attach each ring bond to both endpoints; the earlier-visited endpoint
    // opens the digit. Per atom, digits follow neighbor priority order.
    let mut ring_bonds_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut ring_open_at = HashMap::new();
    for &bond in &ring_bonds {
        let b = mol.bond(bond);
        let (first, second) = if visit_seq[b.a] <= visit_seq[b.b] {
            (b.a, b.b)
        } else {
            (b.b, b.a)
        };
        ring_open_at.insert(bond, first);
        ring_bonds_at[first].push(bond);
        ring_bonds_at[second].push(bond);
    }
    for (atom, list) in ring_bonds_at.iter_mut().enumerate() {
        list.sort_unstable_by_key(|&bond| priority[mol.bond(bond).other(atom)]);
    }

    Traversal {
        roots,
        children,
        ring_bonds_at,
        ring_open_at,
    }
}

enum Step {
    Atom { atom: usize, via: Option<usize> },
    Open,
    Close,
}

fn emit(mol: &Molecule, plan: &Traversal) -> String {
    let mut out = String::new();
    let mut digit_of: HashMap<usize, u16> = HashMap::new();
    let mut digit_in_use = [false; 100];

    for (i, &root) in plan.roots.iter().enumerate() {
        if i > 0 {
            out.push('.');
        }
        let mut stack = vec![Step::Atom { atom: root, via: None }];
        while let Some(step) = stack.pop() {
            match step {
                Step::Open => out.push('('),
                Step::Close => out.push(')'),
                Step::Atom { atom, via } => {
                    if let Some(bond) = via {
                        push_bond_symbol(&mut out, mol, bond, atom);
                    }
                    push_atom_token(&mut out, mol, atom);
                    for &bond in &plan.ring_bonds_at[atom] {
                        if plan.ring_open_at[&bond] == atom {
                            // Digit 0 is only writable as %00, so it is the
                            // last resort; beyond 100 simultaneously open
                            // closures SMILES has no notation at all.
                            let digit = (1..100)
                                .chain(std::iter::once(0))
                                .find(|&d| !digit_in_use[d as usize])
                                .expect("more than 100 simultaneously open ring closures");
                            digit_in_use[digit as usize] = true;
                            digit_of.insert(bond, digit);
                            // Bond symbol rides on the opening digit.
                            push_ring_bond_symbol(&mut out, mol, bond, atom);
                            push_digit(&mut out, digit);
                        } else {
                            let digit = digit_of.remove(&bond).expect("ring digit opened earlier");
                            digit_in_use[digit as usize] = false;
                            push_digit(&mut out, digit);
                        }
                    }
                    let kids = &plan.children[atom];
                    for (k, &(child, bond)) in kids.iter().enumerate().rev() {
                        if k + 1 == kids.len() {
                            stack.push(Step::Atom { atom: child, via: Some(bond) });
                        } else {
                            stack.push(Step::Close);
                            stack.push(Step::Atom { atom: child, via: Some(bond) });
                            stack.push(Step::Open);
                        }
                    }
                }
            }
        }
    }
    debug_assert!(digit_of.is_empty(), "every ring digit must close");
    out
}

fn push_digit(out: &mut String, digit: u16) {
    if (1..10).contains(&digit) {
        out.push((b'0' + digit as u8) as char);
    } else {
        out.push('%');
        out.push((b'0' + (digit / 10) as u8) as char);
        out.push((b'0' + (digit % 10) as u8) as char);
    }
}

/// Bond symbol when traversal enters `to` through `bond`.
fn push_bond_symbol(out: &mut String, mol: &Molecule, bond: usize, to: usize) {
    let b = mol.bond(bond);
    match b.order {
        BondOrder::Double => out.push('='),
        BondOrder::Triple => out.push('#'),
        // Omitted bonds between aromatic atoms re-parse as aromatic, which
        // is exactly what an aromatic bond wants.
        BondOrder::Aromatic => {}
        BondOrder::Single => {
            if let Some(dir) = b.direction {
                let dir = if b.b == to { dir } else { flip(dir) };
                out.push(match dir {
                    BondDir::Up => '/',
                    BondDir::Down => '\\',
                });
            } else if mol.atom(b.a).aromatic && mol.atom(b.b).aromatic {
                out.push('-');
            }
        }
    }
}

/// Same as push_bond_symbol but for a ring closure opened at `from`.
fn push_ring_bond_symbol(out: &mut String, mol: &Molecule, bond: usize, from: usize) {
    let b = mol.bond(bond);
    let to = b.other(from);
    match b.order {
        BondOrder::Double => out.push('='),
        BondOrder::Triple => out.push('#'),
        BondOrder::Aromatic => {}
        BondOrder::Single => {
            if let Some(dir) = b.direction {
                let dir = if b.b == to { dir } else { flip(dir) };
                out.push(match dir {
                    BondDir::Up => '/',
                    BondDir::Down => '\\',
                });
            } else if mol.atom(b.a).aromatic && mol.atom(b.b).aromatic {
                out.push('-');
            }
        }
    }
}

fn flip(d: BondDir) -> BondDir {
    match d {
        BondDir::Up => BondDir::Down,
        BondDir::Down => BondDir::Up,
    }
}

fn push_atom_token(out: &mut String, mol: &Molecule, idx: usize) {
    let atom = mol.atom(idx);
    let elem = atom.element();
    let needs_bracket = atom.isotope.is_some()
        || atom.formal_charge != 0
        || atom.atom_map.is_some()
        || atom.chirality.is_some()
        || !elem.organic_subset
        || hydrogen_mismatch(mol, idx, atom);

    if !needs_bracket {
        push_symbol(out, elem.symbol, atom.aromatic);
        return;
    }

    out.push('[');
    if let Some(iso) = atom.isotope {
        out.push_str(&iso.to_string());
    }
    push_symbol(out, elem.symbol, atom.aromatic);
    match atom.chirality {
        Some(Chirality::Anticlockwise) => out.push('@'),
        Some(Chirality::Clockwise) => out.push_str("@@"),
        None => {}
    }
    let h = mol.hydrogens_on(idx);
    if h == 1 {
        out.push('H');
    } else if h > 1 {
        out.push('H');
        out.push_str(&h.to_string());
    }
    let charge = atom.formal_charge;
    if charge != 0 {
        out.push(if charge > 0 { '+' } else { '-' });
        if charge.abs() > 1 {
            out.push_str(&charge.abs().to_string());
        }
    }
    if let Some(map) = atom.atom_map {
        out.push(':');
        out.push_str(&map.to_string());
    }
    out.push(']');
}

fn push_symbol(out: &mut String, symbol: &str, aromatic: bool) {
    if aromatic {
        for c in symbol.chars() {
            out.push(c.to_ascii_lowercase());
        }
    } else {
        out.push_str(symbol);
    }
}

/// True when an unbracketed token would re-parse with a different hydrogen
/// count than the atom carries.
fn hydrogen_mismatch(mol: &Molecule, idx: usize, atom: &Atom) -> bool {
    match atom.explicit_h {
        None => false,
        Some(h) => h != deduced_if_plain(mol, idx),
    }
}

/// Hydrogen count the deduction rule would assign if explicit_h were absent.
fn deduced_if_plain(mol: &Molecule, idx: usize) -> u8 {
    let mut probe = mol.atom(idx).clone();
    probe.explicit_h = None;
    // hydrogens_on only reads the atom's own fields plus incident bonds, so
    // probing through a one-atom swap is sound.
    mol.hydrogens_probe(idx, &probe)
}

//! Small graph routines shared by the molecule model: bridge detection for
//! ring membership and connected-component extraction.

/// Returns (ring_atom, ring_bond) flags. A bond is a ring bond iff it is not
/// a bridge; an atom is a ring atom iff some incident bond is a ring bond.
/// Iterative lowlink search, so deep chains cannot overflow the stack.
pub(crate) fn ring_flags(
    atom_count: usize,
    adjacency: &[Vec<(usize, usize)>],
) -> (Vec<bool>, Vec<bool>) {
    let bond_count = adjacency
        .iter()
        .flat_map(|n| n.iter().map(|&(_, b)| b + 1))
        .max()
        .unwrap_or(0);
    let mut ring_bond = vec![true; bond_count];
    let mut ring_atom = vec![false; atom_count];

    let mut disc = vec![usize::MAX; atom_count];
    let mut low = vec![usize::MAX; atom_count];
    let mut timer = 0usize;
    // Stack entries: (atom, incoming bond, next adjacency slot to visit).
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();

    for start in 0..atom_count {
        if disc[start] != usize::MAX {
            continue;
        }
        disc[start] = timer;
        low[start] = timer;
        timer += 1;
        stack.push((start, usize::MAX, 0));
        while let Some(&mut (v, in_bond, ref mut slot)) = stack.last_mut() {
            if *slot < adjacency[v].len() {
                let (w, bond) = adjacency[v][*slot];
                *slot += 1;
                if bond == in_bond {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, bond, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (parent, _, _)) = stack.last_mut() {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] > disc[parent] {
                        ring_bond[in_bond] = false;
                    }
                }
            }
        }
    }

    for (v, nbrs) in adjacency.iter().enumerate() {
        if nbrs.iter().any(|&(_, b)| ring_bond[b]) {
            ring_atom[v] = true;
        }
    }
    (ring_atom, ring_bond)
}

/// Connected components as atom-index lists, ordered by lowest member; the
/// members of each component are in ascending order.
pub(crate) fn components(atom_count: usize, adjacency: &[Vec<(usize, usize)>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; atom_count];
    let mut out = Vec::new();
    for start in 0..atom_count {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = vec![start];
        seen[start] = true;
        while let Some(v) = queue.pop() {
            comp.push(v);
            for &(w, _) in &adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

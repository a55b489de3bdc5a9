//! Molecular formulas: derivation from a molecule, parsing from text, and
//! Hill-ordered display.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::element::by_symbol;
use crate::molecule::Molecule;

/// Element counts plus an optional net charge. `net_charge` is `None` only
/// for parsed text that carried no charge suffix; a formula derived from a
/// molecule always knows its charge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    counts: BTreeMap<String, u64>,
    net_charge: Option<i64>,
}

impl Formula {
    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn net_charge(&self) -> Option<i64> {
        self.net_charge
    }

    /// Atom-multiset equality. Charge participates only when both sides
    /// specify one, so a bare "C6H12O6" matches the neutral molecule.
    pub fn matches(&self, other: &Formula) -> bool {
        if self.counts != other.counts {
            return false;
        }
        match (self.net_charge, other.net_charge) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        }
    }
}

impl fmt::Display for Formula {
    /// Hill order: C first, then H, then the rest alphabetically. Without
    /// carbon every symbol, hydrogen included, sorts alphabetically. A
    /// nonzero charge appends its sign, with the magnitude first if >1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let push = |f: &mut fmt::Formatter<'_>, sym: &str| -> fmt::Result {
            match self.counts.get(sym) {
                Some(&n) if n > 1 => write!(f, "{sym}{n}"),
                Some(_) => write!(f, "{sym}"),
                None => Ok(()),
            }
        };
        let has_carbon = self.counts.contains_key("C");
        if has_carbon {
            push(f, "C")?;
            push(f, "H")?;
        }
        for sym in self.counts.keys() {
            if has_carbon && (sym == "C" || sym == "H") {
                continue;
            }
            push(f, sym)?;
        }
        match self.net_charge {
            Some(c) if c > 1 => write!(f, "{c}+")?,
            Some(1) => write!(f, "+")?,
            Some(-1) => write!(f, "-")?,
            Some(c) if c < -1 => write!(f, "{}-", -c)?,
            _ => {}
        }
        Ok(())
    }
}

/// Counts every atom in the graph plus deduced hydrogens. Total over all
/// molecules; validity is the caller's concern.
pub fn molecular_formula(mol: &Molecule) -> Formula {
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut charge = 0i64;
    for idx in 0..mol.atom_count() {
        let atom = mol.atom(idx);
        let sym = crate::element::by_atomic_number(atom.atomic_number)
            .expect("molecule atoms carry known elements")
            .symbol;
        *counts.entry(sym.to_string()).or_insert(0) += 1;
        let h = u64::from(mol.hydrogens_on(idx));
        if h > 0 {
            *counts.entry("H".to_string()).or_insert(0) += h;
        }
        charge += i64::from(atom.formal_charge);
    }
    Formula {
        counts,
        net_charge: Some(charge),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("empty formula")]
    Empty,
    #[error("unknown element symbol {0:?}")]
    UnknownSymbol(String),
    #[error("atom count must be positive for {0:?}")]
    ZeroCount(String),
    #[error("unexpected character at byte {0}")]
    Unexpected(usize),
}

/// Parses `(Symbol count?)+` with an optional trailing charge. Counts bind
/// greedily to the symbol on their left, so "Fe2+" reads as two irons with
/// charge +1; write "Fe+2" or "Fe++" for a doubly charged single atom.
pub fn parse_formula(text: &str) -> Result<Formula, FormulaError> {
    let text = text.trim();
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(FormulaError::Empty);
    }
    let mut counts: BTreeMap<String, u64> = BTreeMap::new();
    let mut pos = 0usize;
    while pos < bytes.len() && bytes[pos].is_ascii_uppercase() {
        let mut end = pos + 1;
        if end < bytes.len() && bytes[end].is_ascii_lowercase() {
            end += 1;
        }
        let sym = &text[pos..end];
        if by_symbol(sym).is_none() {
            return Err(FormulaError::UnknownSymbol(sym.to_string()));
        }
        pos = end;
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let count = if pos > digits_start {
            text[digits_start..pos]
                .parse::<u64>()
                .map_err(|_| FormulaError::Unexpected(digits_start))?
        } else {
            1
        };
        if count == 0 {
            return Err(FormulaError::ZeroCount(sym.to_string()));
        }
        *counts.entry(sym.to_string()).or_insert(0) += count;
    }
    if counts.is_empty() {
        return Err(FormulaError::Unexpected(0));
    }
    let net_charge = if pos < bytes.len() {
        Some(parse_charge(text, pos)?)
    } else {
        None
    };
    Ok(Formula { counts, net_charge })
}

/// Charge suffix forms: `+`, `-`, `+n`, `n+`, and repeated same-sign runs.
fn parse_charge(text: &str, start: usize) -> Result<i64, FormulaError> {
    let bytes = text.as_bytes();
    let mut pos = start;
    let digits_start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    let leading: Option<u64> = if pos > digits_start {
        Some(
            text[digits_start..pos]
                .parse()
                .map_err(|_| FormulaError::Unexpected(digits_start))?,
        )
    } else {
        None
    };
    if pos >= bytes.len() {
        return Err(FormulaError::Unexpected(start));
    }
    let sign: i64 = match bytes[pos] {
        b'+' => 1,
        b'-' => -1,
        _ => return Err(FormulaError::Unexpected(pos)),
    };
    let sign_byte = bytes[pos];
    let mut sign_run = 0u64;
    while pos < bytes.len() && bytes[pos] == sign_byte {
        sign_run += 1;
        pos += 1;
    }
    let trailing_start = pos;
    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
        pos += 1;
    }
    let trailing: Option<u64> = if pos > trailing_start {
        Some(
            text[trailing_start..pos]
                .parse()
                .map_err(|_| FormulaError::Unexpected(trailing_start))?,
        )
    } else {
        None
    };
    if pos < bytes.len() {
        return Err(FormulaError::Unexpected(pos));
    }
    let magnitude = match (leading, trailing, sign_run) {
        (Some(n), None, 1) => n,
        (None, Some(n), 1) => n,
        (None, None, run) => run,
        _ => return Err(FormulaError::Unexpected(start)),
    };
    if magnitude == 0 {
        return Err(FormulaError::Unexpected(start));
    }
    Ok(sign * magnitude as i64)
}

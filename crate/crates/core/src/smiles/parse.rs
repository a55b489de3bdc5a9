//! SMILES reader: organic-subset atoms, bracket atoms, bonds, branches, ring
//! closures, and dot-separated components. Every failure carries the byte
//! offset of the offending token in the input string.

use std::collections::HashMap;

use crate::element;
use crate::molecule::{Atom, Bond, BondDir, BondOrder, Chirality, Molecule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SmilesErrorKind {
    EmptyInput,
    UnexpectedChar,
    ExpectedAtom,
    UnbalancedParen,
    DanglingBond,
    UnknownElement,
    MalformedBracket,
    UnmatchedRingClosure,
    RingBondConflict,
    SelfRingBond,
    DuplicateBond,
    InvalidAromaticBond,
}

impl SmilesErrorKind {
    pub fn describe(self) -> &'static str {
        match self {
            SmilesErrorKind::EmptyInput => "empty input",
            SmilesErrorKind::UnexpectedChar => "unexpected character",
            SmilesErrorKind::ExpectedAtom => "expected an atom",
            SmilesErrorKind::UnbalancedParen => "unbalanced parenthesis",
            SmilesErrorKind::DanglingBond => "bond symbol without a following atom",
            SmilesErrorKind::UnknownElement => "unknown element",
            SmilesErrorKind::MalformedBracket => "malformed bracket atom",
            SmilesErrorKind::UnmatchedRingClosure => "unmatched ring closure",
            SmilesErrorKind::RingBondConflict => "conflicting bond orders on ring closure",
            SmilesErrorKind::SelfRingBond => "ring closure bonds an atom to itself",
            SmilesErrorKind::DuplicateBond => "duplicate bond between the same atoms",
            SmilesErrorKind::InvalidAromaticBond => "aromatic bond between non-aromatic atoms",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{} at byte {offset}", kind.describe())]
pub struct SmilesError {
    pub kind: SmilesErrorKind,
    pub offset: usize,
}

fn err<T>(kind: SmilesErrorKind, offset: usize) -> Result<T, SmilesError> {
    Err(SmilesError { kind, offset })
}

#[derive(Clone, Copy)]
struct PendingBond {
    order: BondOrder,
    dir: Option<BondDir>,
    offset: usize,
}

#[derive(Clone, Copy)]
struct OpenRing {
    atom: usize,
    bond: Option<(BondOrder, Option<BondDir>)>,
    offset: usize,
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    end: usize,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    bond_pairs: HashMap<(usize, usize), ()>,
    prev: Option<usize>,
    pending: Option<PendingBond>,
    // (attachment atom, '(' offset, atom count at open) per open branch
    branches: Vec<(usize, usize, usize)>,
    rings: HashMap<u16, OpenRing>,
    // offset of a trailing '.' awaiting its atom
    dot_offset: Option<usize>,
}

pub fn parse_smiles(text: &str) -> Result<Molecule, SmilesError> {
    let bytes = text.as_bytes();
    let start = text.len() - text.trim_start().len();
    let end = text.trim_end().len();
    if start >= end {
        return err(SmilesErrorKind::EmptyInput, 0);
    }
    let mut parser = Parser {
        bytes,
        pos: start,
        end,
        atoms: Vec::new(),
        bonds: Vec::new(),
        bond_pairs: HashMap::new(),
        prev: None,
        pending: None,
        branches: Vec::new(),
        rings: HashMap::new(),
        dot_offset: None,
    };
    parser.run()?;
    let Parser { atoms, bonds, .. } = parser;
    // Structural constraints were checked token by token, so assembly from
    // parts cannot fail here.
    Ok(Molecule::from_parts(atoms, bonds).expect("parser enforces structure"))
}

impl<'a> Parser<'a> {
    fn run(&mut self) -> Result<(), SmilesError> {
        while self.pos < self.end {
            let at = self.pos;
            match self.bytes[at] {
                b'(' => {
                    let Some(prev) = self.prev else {
                        return err(SmilesErrorKind::ExpectedAtom, at);
                    };
                    if self.pending.is_some() {
                        return err(SmilesErrorKind::ExpectedAtom, at);
                    }
                    self.branches.push((prev, at, self.atoms.len()));
                    self.pos += 1;
                }
                b')' => {
                    if let Some(p) = self.pending {
                        return err(SmilesErrorKind::DanglingBond, p.offset);
                    }
                    if self.dot_offset.is_some() {
                        return err(SmilesErrorKind::ExpectedAtom, at);
                    }
                    let Some((attach, _, count_at_open)) = self.branches.pop() else {
                        return err(SmilesErrorKind::UnbalancedParen, at);
                    };
                    if self.atoms.len() == count_at_open {
                        return err(SmilesErrorKind::ExpectedAtom, at);
                    }
                    self.prev = Some(attach);
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' | b'/' | b'\\' => {
                    if self.prev.is_none() {
                        return err(SmilesErrorKind::ExpectedAtom, at);
                    }
                    if self.pending.is_some() {
                        return err(SmilesErrorKind::UnexpectedChar, at);
                    }
                    let (order, dir) = match self.bytes[at] {
                        b'-' => (BondOrder::Single, None),
                        b'=' => (BondOrder::Double, None),
                        b'#' => (BondOrder::Triple, None),
                        b':' => (BondOrder::Aromatic, None),
                        b'/' => (BondOrder::Single, Some(BondDir::Up)),
                        _ => (BondOrder::Single, Some(BondDir::Down)),
                    };
                    self.pending = Some(PendingBond { order, dir, offset: at });
                    self.pos += 1;
                }
                b'.' => {
                    if let Some(p) = self.pending {
                        return err(SmilesErrorKind::DanglingBond, p.offset);
                    }
                    if self.prev.is_none() || self.dot_offset.is_some() {
                        return err(SmilesErrorKind::ExpectedAtom, at);
                    }
                    if !self.branches.is_empty() {
                        return err(SmilesErrorKind::UnexpectedChar, at);
                    }
                    self.prev = None;
                    self.dot_offset = Some(at);
                    self.pos += 1;
                }
                b'1'..=b'9' => {
                    let n = (self.bytes[at] - b'0') as u16;
                    self.pos += 1;
                    self.ring_token(n, at)?;
                }
                b'%' => {
                    if at + 2 >= self.end
                        || !self.bytes[at + 1].is_ascii_digit()
                        || !self.bytes[at + 2].is_ascii_digit()
                    {
                        return err(SmilesErrorKind::UnexpectedChar, at);
                    }
                    let n = (self.bytes[at + 1] - b'0') as u16 * 10
                        + (self.bytes[at + 2] - b'0') as u16;
                    self.pos += 3;
                    self.ring_token(n, at)?;
                }
                b'[' => {
                    let atom = self.bracket_atom()?;
                    self.add_atom(atom, at)?;
                }
                b'A'..=b'Z' | b'a'..=b'z' => {
                    let atom = self.organic_atom()?;
                    self.add_atom(atom, at)?;
                }
                _ => return err(SmilesErrorKind::UnexpectedChar, at),
            }
        }
        if let Some(p) = self.pending {
            return err(SmilesErrorKind::DanglingBond, p.offset);
        }
        if let Some(off) = self.dot_offset {
            return err(SmilesErrorKind::ExpectedAtom, off);
        }
        if let Some(&(_, off, _)) = self.branches.last() {
            return err(SmilesErrorKind::UnbalancedParen, off);
        }
        if let Some(off) = self.rings.values().map(|r| r.offset).min() {
            return err(SmilesErrorKind::UnmatchedRingClosure, off);
        }
        Ok(())
    }

    fn add_atom(&mut self, atom: Atom, offset: usize) -> Result<(), SmilesError> {
        let idx = self.atoms.len();
        self.atoms.push(atom);
        if let Some(p) = self.pending.take() {
            let prev = self.prev.expect("pending bond implies a previous atom");
            self.make_bond(prev, idx, p.order, p.dir, p.offset)?;
        } else if let Some(prev) = self.prev {
            let order = if self.atoms[prev].aromatic && self.atoms[idx].aromatic {
                BondOrder::Aromatic
            } else {
                BondOrder::Single
            };
            self.make_bond(prev, idx, order, None, offset)?;
        }
        self.prev = Some(idx);
        self.dot_offset = None;
        Ok(())
    }

    fn make_bond(
        &mut self,
        a: usize,
        b: usize,
        order: BondOrder,
        dir: Option<BondDir>,
        offset: usize,
    ) -> Result<(), SmilesError> {
        if a == b {
            return err(SmilesErrorKind::SelfRingBond, offset);
        }
        let key = (a.min(b), a.max(b));
        if self.bond_pairs.insert(key, ()).is_some() {
            return err(SmilesErrorKind::DuplicateBond, offset);
        }
        if order == BondOrder::Aromatic && !(self.atoms[a].aromatic && self.atoms[b].aromatic) {
            return err(SmilesErrorKind::InvalidAromaticBond, offset);
        }
        self.bonds.push(Bond { a, b, order, direction: dir });
        Ok(())
    }

    fn ring_token(&mut self, number: u16, offset: usize) -> Result<(), SmilesError> {
        let Some(prev) = self.prev else {
            return err(SmilesErrorKind::ExpectedAtom, offset);
        };
        let pending = self.pending.take();
        match self.rings.remove(&number) {
            None => {
                self.rings.insert(
                    number,
                    OpenRing {
                        atom: prev,
                        bond: pending.map(|p| (p.order, p.dir)),
                        offset,
                    },
                );
                Ok(())
            }
            Some(open) => {
                // The closing side reads the bond in the opposite direction,
                // so its direction marker is flipped before comparison.
                let closer = pending.map(|p| (p.order, p.dir.map(flip_dir)));
                let (order, dir) = match (open.bond, closer) {
                    (None, None) => {
                        let order = if self.atoms[open.atom].aromatic && self.atoms[prev].aromatic
                        {
                            BondOrder::Aromatic
                        } else {
                            BondOrder::Single
                        };
                        (order, None)
                    }
                    (Some((o, d)), None) | (None, Some((o, d))) => (o, d),
                    (Some((o1, d1)), Some((o2, d2))) => {
                        if o1 != o2 || (d1.is_some() && d2.is_some() && d1 != d2) {
                            return err(SmilesErrorKind::RingBondConflict, offset);
                        }
                        (o1, d1.or(d2))
                    }
                };
                self.make_bond(open.atom, prev, order, dir, offset)
            }
        }
    }

    fn organic_atom(&mut self) -> Result<Atom, SmilesError> {
        let at = self.pos;
        let next = if at + 1 < self.end { self.bytes[at + 1] } else { 0 };
        let (num, aromatic, len) = match (self.bytes[at], next) {
            (b'C', b'l') => (17, false, 2),
            (b'B', b'r') => (35, false, 2),
            (b'B', _) => (5, false, 1),
            (b'C', _) => (6, false, 1),
            (b'N', _) => (7, false, 1),
            (b'O', _) => (8, false, 1),
            (b'P', _) => (15, false, 1),
            (b'S', _) => (16, false, 1),
            (b'F', _) => (9, false, 1),
            (b'I', _) => (53, false, 1),
            (b'b', _) => (5, true, 1),
            (b'c', _) => (6, true, 1),
            (b'n', _) => (7, true, 1),
            (b'o', _) => (8, true, 1),
            (b'p', _) => (15, true, 1),
            (b's', _) => (16, true, 1),
            _ => return err(SmilesErrorKind::UnknownElement, at),
        };
        self.pos += len;
        let mut atom = Atom::new(num);
        atom.aromatic = aromatic;
        Ok(atom)
    }

    fn bracket_atom(&mut self) -> Result<Atom, SmilesError> {
        let open = self.pos;
        self.pos += 1; // consume '['

        let isotope = self.bracket_digits(3)?;
        if let Some(v) = isotope {
            if v > 999 {
                return err(SmilesErrorKind::MalformedBracket, open + 1);
            }
        }

        let mut atom = self.bracket_symbol()?;
        atom.isotope = isotope;

        if self.peek() == Some(b'@') {
            self.pos += 1;
            if self.peek() == Some(b'@') {
                self.pos += 1;
                atom.chirality = Some(Chirality::Clockwise);
            } else {
                atom.chirality = Some(Chirality::Anticlockwise);
            }
        }

        let mut h = 0u8;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            h = match self.peek() {
                Some(d @ b'0'..=b'9') => {
                    self.pos += 1;
                    d - b'0'
                }
                _ => 1,
            };
        }
        atom.explicit_h = Some(h);

        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let sign_at = self.pos;
            let mut magnitude = 1i32;
            self.pos += 1;
            if self.peek() == Some(sign) {
                // deprecated doubled-sign form: ++ / --
                while self.peek() == Some(sign) {
                    magnitude += 1;
                    self.pos += 1;
                }
            } else if let Some(v) = self.bracket_digits(2)? {
                magnitude = v as i32;
            }
            if magnitude > 15 {
                return err(SmilesErrorKind::MalformedBracket, sign_at);
            }
            atom.formal_charge = if sign == b'+' {
                magnitude as i8
            } else {
                -magnitude as i8
            };
        }

        if self.peek() == Some(b':') {
            let colon_at = self.pos;
            self.pos += 1;
            let digits_at = self.pos;
            while matches!(self.peek(), Some(b'0'..=b'9')) {
                self.pos += 1;
            }
            if digits_at == self.pos {
                return err(SmilesErrorKind::MalformedBracket, colon_at);
            }
            let text = std::str::from_utf8(&self.bytes[digits_at..self.pos]).unwrap();
            let value: u32 = text
                .parse()
                .map_err(|_| SmilesError { kind: SmilesErrorKind::MalformedBracket, offset: digits_at })?;
            // Map class 0 is the unmapped default.
            atom.atom_map = (value > 0).then_some(value);
        }

        if self.peek() != Some(b']') {
            return err(SmilesErrorKind::MalformedBracket, self.pos.min(self.end));
        }
        self.pos += 1;
        Ok(atom)
    }

    fn bracket_symbol(&mut self) -> Result<Atom, SmilesError> {
        let at = self.pos;
        let Some(first) = self.peek() else {
            return err(SmilesErrorKind::MalformedBracket, at);
        };
        if first.is_ascii_uppercase() {
            let two = if at + 1 < self.end && self.bytes[at + 1].is_ascii_lowercase() {
                std::str::from_utf8(&self.bytes[at..at + 2]).ok()
            } else {
                None
            };
            if let Some(sym) = two {
                if let Some(e) = element::by_symbol(sym) {
                    self.pos += 2;
                    return Ok(Atom::new(e.atomic_number));
                }
            }
            let one = std::str::from_utf8(&self.bytes[at..at + 1]).unwrap();
            if let Some(e) = element::by_symbol(one) {
                self.pos += 1;
                return Ok(Atom::new(e.atomic_number));
            }
            return err(SmilesErrorKind::UnknownElement, at);
        }
        if first.is_ascii_lowercase() {
            let two: Option<u8> = if at + 1 < self.end {
                match &self.bytes[at..at + 2] {
                    b"se" => Some(34),
                    b"as" => Some(33),
                    _ => None,
                }
            } else {
                None
            };
            if let Some(num) = two {
                self.pos += 2;
                let mut atom = Atom::new(num);
                atom.aromatic = true;
                return Ok(atom);
            }
            let num = match first {
                b'b' => 5,
                b'c' => 6,
                b'n' => 7,
                b'o' => 8,
                b'p' => 15,
                b's' => 16,
                _ => return err(SmilesErrorKind::UnknownElement, at),
            };
            self.pos += 1;
            let mut atom = Atom::new(num);
            atom.aromatic = true;
            return Ok(atom);
        }
        err(SmilesErrorKind::MalformedBracket, at)
    }

    /// Reads at most `max` digits; None when no digit is present.
    fn bracket_digits(&mut self, max: usize) -> Result<Option<u16>, SmilesError> {
        let start = self.pos;
        while self.pos < self.end
            && self.bytes[self.pos].is_ascii_digit()
            && self.pos - start < max + 1
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Ok(None);
        }
        if self.pos - start > max {
            return err(SmilesErrorKind::MalformedBracket, start);
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(Some(text.parse().map_err(|_| SmilesError {
            kind: SmilesErrorKind::MalformedBracket,
            offset: start,
        })?))
    }

    fn peek(&self) -> Option<u8> {
        (self.pos < self.end).then(|| self.bytes[self.pos])
    }
}

fn flip_dir(d: BondDir) -> BondDir {
    match d {
        BondDir::Up => BondDir::Down,
        BondDir::Down => BondDir::Up,
    }
}

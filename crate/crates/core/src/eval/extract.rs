//! Answer extraction from free-form model output.
//!
//! Extraction is tag-first: when the kind's tag pair is present, the
//! first pair wins and its contents are returned verbatim (trimmed).
//! Only when no pair is found does the per-kind fallback scan run.
//! Absence is data, not an error.

use crate::validity::validate;

/// What shape of answer a task expects in model output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnswerKind {
    Smiles,
    Formula,
    Iupac,
    Number,
    Boolean,
    Text,
}

impl AnswerKind {
    /// Tag name wrapping this kind in rendered text, if any.
    fn tag(self) -> Option<&'static str> {
        match self {
            AnswerKind::Smiles => Some("SMILES"),
            AnswerKind::Formula => Some("MOLFORMULA"),
            AnswerKind::Iupac => Some("IUPAC"),
            AnswerKind::Number => Some("NUMBER"),
            AnswerKind::Boolean => Some("BOOLEAN"),
            AnswerKind::Text => None,
        }
    }
}

/// Pull the answer of the given kind out of raw model output.
///
/// IUPAC names have no recognizable surface form, so they are only
/// extracted from tags; every other kind has a fallback scan.
pub fn extract_answer(raw: &str, kind: AnswerKind) -> Option<String> {
    if let Some(tag) = kind.tag() {
        if let Some(inner) = between_tags(raw, tag) {
            return Some(inner.trim().to_string());
        }
    }
    match kind {
        AnswerKind::Smiles => longest_structure_token(raw),
        AnswerKind::Formula => first_formula_match(raw),
        AnswerKind::Iupac => None,
        AnswerKind::Number => first_decimal_literal(raw),
        AnswerKind::Boolean => first_yes_no(raw),
        AnswerKind::Text => {
            let trimmed = raw.trim();
            (!trimmed.is_empty()).then(|| trimmed.to_string())
        }
    }
}

/// Contents of the first `<TAG>...</TAG>` pair, untrimmed.
fn between_tags<'a>(raw: &'a str, tag: &str) -> Option<&'a str> {
    let open = format!("<{tag}>");
    let close = format!("</{tag}>");
    let start = raw.find(&open)? + open.len();
    let end = raw[start..].find(&close)? + start;
    Some(&raw[start..end])
}

/// Semicolons stand in for dots in rendered fragment lists.
pub(crate) fn undo_fragment_semicolons(text: &str) -> String {
    text.replace(';', ".")
}

/// Longest whitespace-delimited token that reads as a valid structure.
///
/// Single characters are excluded so that prose like "I" (iodine) or
/// "O" (water) never masquerades as an answer. All-lowercase tokens are
/// excluded too: rings need closure digits, so such a token could only
/// be an acyclic aromatic chain, and prose words like "no" or "soon"
/// would otherwise slip through.
fn longest_structure_token(raw: &str) -> Option<String> {
    let mut best: Option<&str> = None;
    for token in raw.split_whitespace() {
        if token.chars().count() < 2 || token.chars().all(|c| c.is_ascii_lowercase()) {
            continue;
        }
        if best.is_some_and(|b| token.len() <= b.len()) {
            continue;
        }
        if validate(&undo_fragment_semicolons(token)).valid {
            best = Some(token);
        }
    }
    best.map(str::to_string)
}

/// First maximal substring of the shape `([A-Z][a-z]?[0-9]*)+`.
fn first_formula_match(raw: &str) -> Option<String> {
    let bytes = raw.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_uppercase() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_uppercase() {
                j += 1;
                if j < bytes.len() && bytes[j].is_ascii_lowercase() {
                    j += 1;
                }
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
            }
            return Some(raw[i..j].to_string());
        }
        i += 1;
    }
    None
}

/// First decimal literal: optional sign, digits with an optional point,
/// and an optional exponent. The slice must parse as f64 to count.
fn first_decimal_literal(raw: &str) -> Option<String> {
    let bytes = raw.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_digit() || b == b'+' || b == b'-' || b == b'.' {
            if let Some(len) = decimal_len(&bytes[i..]) {
                let slice = &raw[i..i + len];
                if slice.parse::<f64>().is_ok() {
                    return Some(slice.to_string());
                }
                i += len;
                continue;
            }
        }
        i += 1;
    }
    None
}

/// Length of a decimal literal at the start of `bytes`, if one is there.
fn decimal_len(bytes: &[u8]) -> Option<usize> {
    let mut j = 0;
    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
        j += 1;
    }
    let int_start = j;
    while j < bytes.len() && bytes[j].is_ascii_digit() {
        j += 1;
    }
    let int_digits = j - int_start;
    let mut frac_digits = 0;
    if j < bytes.len() && bytes[j] == b'.' {
        let frac_start = j + 1;
        let mut k = frac_start;
        while k < bytes.len() && bytes[k].is_ascii_digit() {
            k += 1;
        }
        frac_digits = k - frac_start;
        if int_digits + frac_digits > 0 {
            j = k;
        }
    }
    if int_digits + frac_digits == 0 {
        return None;
    }
    if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
        let mut k = j + 1;
        if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
            k += 1;
        }
        let exp_start = k;
        while k < bytes.len() && bytes[k].is_ascii_digit() {
            k += 1;
        }
        if k > exp_start {
            j = k;
        }
    }
    Some(j)
}

/// Earliest case-insensitive "yes" or "no" standing on a word boundary.
fn first_yes_no(raw: &str) -> Option<String> {
    let lower = raw.to_lowercase();
    let chars: Vec<char> = lower.chars().collect();
    for i in 0..chars.len() {
        for word in ["yes", "no"] {
            let w: Vec<char> = word.chars().collect();
            if i + w.len() > chars.len() || chars[i..i + w.len()] != w[..] {
                continue;
            }
            let before_ok = i == 0 || !chars[i - 1].is_alphanumeric();
            let after = i + w.len();
            let after_ok = after == chars.len() || !chars[after].is_alphanumeric();
            if before_ok && after_ok {
                return Some(word.to_string());
            }
        }
    }
    None
}

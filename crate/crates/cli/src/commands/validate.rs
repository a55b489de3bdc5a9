use std::io::Write;
use std::path::Path;

use anyhow::Result;
use rayon::prelude::*;
use serde::Serialize;

use molforge::validate;

#[derive(Serialize)]
struct Verdict<'a> {
    line: usize,
    input: &'a str,
    valid: bool,
    failures: Vec<String>,
}

/// Emits one JSON verdict per non-empty line; any invalid line makes
/// the exit code nonzero.
pub fn run(input: Option<&Path>) -> Result<bool> {
    let text = super::read_input(input)?;
    let lines = super::numbered_lines(&text);
    let verdicts: Vec<Verdict> = lines
        .par_iter()
        .map(|&(line_no, line)| {
            let report = validate(line);
            Verdict {
                line: line_no,
                input: line,
                valid: report.valid,
                failures: report.failures.iter().map(|f| f.message.clone()).collect(),
            }
        })
        .collect();

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut clean = true;
    for verdict in &verdicts {
        if !verdict.valid {
            clean = false;
        }
        writeln!(out, "{}", serde_json::to_string(verdict)?)?;
    }
    Ok(clean)
}

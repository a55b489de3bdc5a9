use std::path::Path;

use anyhow::Result;
use rayon::prelude::*;

use molforge::canonical_smiles;

/// Canonical lines go to stdout in input order; failures go to stderr
/// with their line number and make the exit code nonzero.
pub fn run(input: Option<&Path>) -> Result<bool> {
    let text = super::read_input(input)?;
    let lines = super::numbered_lines(&text);
    let results: Vec<(usize, Result<String, String>)> = lines
        .par_iter()
        .map(|&(line_no, line)| {
            (line_no, canonical_smiles(line).map_err(|report| report.summary()))
        })
        .collect();

    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let mut clean = true;
    for (line_no, result) in results {
        match result {
            Ok(canonical) => writeln!(out, "{canonical}")?,
            Err(message) => {
                clean = false;
                eprintln!("line {line_no}: {message}");
            }
        }
    }
    Ok(clean)
}

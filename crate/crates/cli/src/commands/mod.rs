pub mod build;
pub mod canon;
pub mod render;
pub mod score;
pub mod split;
pub mod stats;
pub mod validate;

use std::fmt;
use std::io::{self, Read, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// Reads the whole input up front so line numbers stay stable under
/// parallel processing.
pub(crate) fn read_input(input: Option<&Path>) -> Result<String> {
    match input {
        Some(path) => std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display())),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .context("reading stdin")?;
            Ok(text)
        }
    }
}

/// Non-empty trimmed lines paired with their 1-based line numbers.
pub(crate) fn numbered_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(index, line)| (index + 1, line.trim()))
        .filter(|(_, line)| !line.is_empty())
        .collect()
}

/// Writes to stdout, reporting whether the consumer is still reading.
/// A closed pipe ends output early and is not an error; exit codes
/// stay a property of the input, not of how much was printed.
pub(crate) fn write_stdout(out: &mut impl Write, text: fmt::Arguments<'_>) -> Result<bool> {
    match out.write_fmt(text) {
        Ok(()) => Ok(true),
        Err(err) if err.kind() == io::ErrorKind::BrokenPipe => Ok(false),
        Err(err) => Err(err).context("writing stdout"),
    }
}

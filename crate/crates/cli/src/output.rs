use std::fmt::Display;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use crate::CliError;

pub const TOOL: &str = concat!("evoctrl ", env!("CARGO_PKG_VERSION"));

/// The `#`-prefixed block every CSV file starts with.
#[derive(Debug, Clone, PartialEq)]
pub struct Preamble {
    entries: Vec<(String, String)>,
}

impl Preamble {
    pub fn new(command: &str) -> Self {
        Preamble {
            entries: vec![
                ("tool".into(), TOOL.into()),
                ("command".into(), command.into()),
            ],
        }
    }

    pub fn set(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("# {k}: {v}\n"))
            .collect()
    }
}

/// Reads `key: value` pairs from the leading `#` lines of a file.
pub fn read_preamble(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map_while(|l| l.strip_prefix('#'))
        .filter_map(|l| l.trim().split_once(':'))
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .collect()
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// A CSV document: preamble, header, rows.
pub struct Table {
    preamble: Preamble,
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new(preamble: Preamble, header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).map_err(CliError::io)?;
        Ok(Table { preamble, writer })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(CliError::io)
    }

    pub fn into_bytes(self) -> Result<Vec<u8>, CliError> {
        let body = self
            .writer
            .into_inner()
            .map_err(|e| CliError::io(e.into_error()))?;
        let mut out = self.preamble.render().into_bytes();
        out.extend(body);
        Ok(out)
    }
}

/// Writes the whole document at once, to a file or stdout.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(CliError::io),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(CliError::io)
        }
    }
}

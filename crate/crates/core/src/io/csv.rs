//! CSV tables with `#` provenance lines that re-parse as a run config.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};

use super::config::{parse_config, RunConfig};

/// Significant digits of every emitted value.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

/// C-style `%.{digits}g`: shortest of fixed and exponent notation, trailing
/// zeros removed. Both zeros print as `0`; non-finite values as `nan`,
/// `inf`, `-inf`.
pub fn format_g(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes provenance lines (`# ` + each config line), the header and rows.
/// Extra `notes` are written as `# # note` so they stay config comments.
pub fn write_csv<W: Write>(mut w: W, config: &RunConfig, notes: &[String], table: &Table) -> std::io::Result<()> {
    for note in notes {
        writeln!(w, "# # {note}")?;
    }
    for line in config.to_config_text().lines() {
        writeln!(w, "# {line}")?;
    }
    writeln!(w, "{}", table.columns.join(","))?;
    let mut line = String::new();
    for row in &table.rows {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&format_g(*v, SIGNIFICANT_DIGITS));
        }
        writeln!(w, "{line}")?;
    }
    w.flush()
}

pub fn emit_csv(path: &Path, config: &RunConfig, notes: &[String], table: &Table) -> Result<()> {
    let io_err = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io_err)?;
    write_csv(BufWriter::new(file), config, notes, table).map_err(io_err)
}

/// Recovers the producing configuration from the leading `#` lines.
pub fn provenance_config(csv_text: &str) -> Result<RunConfig> {
    let text: String = csv_text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| {
            let body = &l[1..];
            let body = body.strip_prefix(' ').unwrap_or(body);
            format!("{body}\n")
        })
        .collect();
    parse_config(&text)
}

/// Parses the data section back into a table (values as written).
pub fn read_table(csv_text: &str) -> Result<Table> {
    let mut lines = csv_text.lines().skip_while(|l| l.starts_with('#'));
    let header = lines.next().ok_or(Error::EmptySeries)?;
    let mut table = Table::new(header.split(','));
    for (i, line) in lines.enumerate() {
        let row = line
            .split(',')
            .map(|v| v.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Config(format!("data row {}: {e}", i + 1)))?;
        if row.len() != table.columns.len() {
            return Err(Error::Config(format!("data row {} has {} fields", i + 1, row.len())));
        }
        table.rows.push(row);
    }
    Ok(table)
}

//! CSV with a `#` preamble. Numbers are written with 17 significant digits
//! through Rust's own formatter, so output does not depend on locale.

use crate::CliError;

pub fn number(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn cell(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

pub struct Table {
    preamble: Vec<String>,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(command: &str, echo: Vec<String>, header: Vec<String>) -> Self {
        let mut preamble = vec![format!("dicke-fcs {command} {}", env!("CARGO_PKG_VERSION"))];
        preamble.extend(echo);
        Self {
            preamble,
            header,
            rows: Vec::new(),
        }
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.preamble.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<String>] {
        &self.rows
    }

    pub fn render(&self) -> Result<String, CliError> {
        let mut out = String::new();
        for line in &self.preamble {
            out.push_str("# ");
            out.push_str(line);
            out.push('\n');
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is utf-8"));
        Ok(out)
    }
}

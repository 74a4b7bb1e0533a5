use clap::ValueEnum;
use serde_json::{json, Value};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Default)]
pub(crate) struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Everything one command produces, in every output form.
#[derive(Debug)]
pub(crate) struct Output {
    pub json: Value,
    pub table: Table,
    pub summary: Vec<String>,
    pub overflow: Option<Error>,
    pub failed: bool,
}

impl Output {
    pub fn new(json: Value, table: Table) -> Self {
        Self {
            json,
            table,
            summary: Vec::new(),
            overflow: None,
            failed: false,
        }
    }

    pub fn with_overflow(mut self, overflow: Option<Error>) -> Self {
        self.overflow = overflow;
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.render_json(),
            Format::Csv => self.render_csv(),
            Format::Text => self.render_text(),
        }
    }

    fn render_json(&self) -> String {
        let mut doc = self.json.clone();
        if let (Some(e), Value::Object(map)) = (&self.overflow, &mut doc) {
            map.insert("overflow".into(), overflow_json(e));
        }
        let mut text = serde_json::to_string_pretty(&doc).expect("JSON values serialize");
        text.push('\n');
        text
    }

    fn render_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.table.header).expect("in-memory write");
        for row in &self.table.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8 fields")
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        for line in &self.summary {
            out.push_str(line);
            out.push('\n');
        }
        if self.table.rows.is_empty() {
            return out;
        }
        if !out.is_empty() {
            out.push('\n');
        }
        let cells: Vec<Vec<String>> =
            std::iter::once(self.table.header.iter().map(|h| h.to_string()).collect())
                .chain(
                    self.table
                        .rows
                        .iter()
                        .map(|r| r.iter().map(|c| abbreviate(c)).collect()),
                )
                .collect();
        let columns = self.table.header.len();
        let widths: Vec<usize> = (0..columns)
            .map(|i| {
                cells
                    .iter()
                    .map(|r| r.get(i).map_or(0, |c| c.len()))
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        for row in cells {
            let line: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

pub(crate) fn overflow_json(e: &Error) -> Value {
    match e {
        Error::MagnitudeOverflow {
            required_bits,
            max_bits,
        } => json!({
            "required_bits": required_bits,
            "max_bits": max_bits,
            "message": e.to_string(),
        }),
        other => json!({ "message": other.to_string() }),
    }
}

/// Long digit strings are shortened in text tables only.
fn abbreviate(cell: &str) -> String {
    const LIMIT: usize = 40;
    if cell.len() <= LIMIT || !cell.is_ascii() {
        return cell.to_string();
    }
    let digits = cell.bytes().filter(u8::is_ascii_digit).count();
    format!(
        "{}...{} ({digits} digits)",
        &cell[..12],
        &cell[cell.len() - 6..]
    )
}

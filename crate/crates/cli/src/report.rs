//! Report envelope shared by every command.

use serde::Serialize;
use serde_json::Value;

use crate::{Cli, Failure, Format};

/// Flat rows for CSV output.
#[derive(Debug, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn row(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

#[derive(Debug, Serialize)]
struct Caps {
    max_n: u32,
    max_explicit_s: u32,
    opt_in_n5: bool,
}

#[derive(Debug, Serialize)]
struct Envelope<'a> {
    version: &'static str,
    config: Value,
    caps: Caps,
    provenance: &'a [String],
    result: &'a Value,
}

#[derive(Debug)]
pub struct Report {
    config: Value,
    caps_max_n: u32,
    opt_in_n5: bool,
    pub provenance: Vec<String>,
    pub result: Value,
    pub table: Table,
}

impl Report {
    pub fn new(cli: &Cli) -> Self {
        Report {
            config: serde_json::to_value(cli).expect("config serializes"),
            caps_max_n: cli.max_n,
            opt_in_n5: cli.opt_in_n5,
            provenance: Vec::new(),
            result: Value::Null,
            table: Table::default(),
        }
    }

    fn envelope(&self) -> Envelope<'_> {
        Envelope {
            version: cubestat::VERSION,
            config: self.config.clone(),
            caps: Caps {
                max_n: self.caps_max_n,
                max_explicit_s: cubestat::johnson::MAX_EXPLICIT_S,
                opt_in_n5: self.opt_in_n5,
            },
            provenance: &self.provenance,
            result: &self.result,
        }
    }

    /// JSON envelope, or CSV preceded by `#` lines carrying the version,
    /// config and provenance.
    pub fn render(&self, format: Format) -> Result<String, Failure> {
        match format {
            Format::Json => Ok(format!("{}\n", serde_json::to_string_pretty(&self.envelope())?)),
            Format::Csv => {
                let mut out = format!("# cubestat {}\n", cubestat::VERSION);
                out += &format!("# config {}\n", serde_json::to_string(&self.config)?);
                for p in &self.provenance {
                    out += &format!("# provenance {p}\n");
                }
                let mut writer = csv::Writer::from_writer(Vec::new());
                let fail = |e: csv::Error| Failure::Usage(e.to_string());
                writer.write_record(&self.table.header).map_err(fail)?;
                for row in &self.table.rows {
                    writer.write_record(row).map_err(fail)?;
                }
                let bytes = writer.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
                out += &String::from_utf8(bytes).expect("csv output is utf-8");
                Ok(out)
            }
        }
    }
}

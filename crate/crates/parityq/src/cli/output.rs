//! File writers. CSV files carry `#` header lines; JSON files carry the
//! schema version, units and an echo of the configuration.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::config::JobConfig;
use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const UNITS: &str = "energies GHz (E/2pi), times ns, phases rad";

/// Column-oriented table; rows are written in insertion order.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            comments: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# schema_version: {SCHEMA_VERSION}")?;
        writeln!(w, "# units: {UNITS}")?;
        for c in &self.comments {
            writeln!(w, "# {c}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for r in &self.rows {
            writeln!(w, "{}", r.join(","))?;
        }
        Ok(())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        self.write_to(&mut w)?;
        w.flush()?;
        Ok(())
    }
}

/// Full-precision float formatting for CSV cells.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:e}")
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema_version: u32,
    units: &'static str,
    config: &'a JobConfig,
    result: &'a T,
}

pub fn write_json<T: Serialize>(path: &Path, config: &JobConfig, result: &T) -> Result<()> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        units: UNITS,
        config,
        result,
    };
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, &env).map_err(std::io::Error::from)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

use std::time::Duration;

use crate::error::Result;

/// One CSV block: a header and its rows.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// The cell at `row` in the named column.
    pub fn cell(&self, row: usize, column: &str) -> Option<&str> {
        let i = self.header.iter().position(|h| h == column)?;
        self.rows.get(row)?.get(i).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub checks_failed: usize,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutputOptions {
    pub header: bool,
    pub timestamp: bool,
}

impl Default for OutputOptions {
    fn default() -> Self {
        Self { header: true, timestamp: true }
    }
}

impl RunReport {
    pub fn new(command: &str, parameters: Vec<(String, String)>) -> Self {
        Self { command: command.into(), parameters, tables: Vec::new(), checks_failed: 0, elapsed: Duration::ZERO }
    }

    pub fn table(&self) -> &Table {
        &self.tables[0]
    }

    /// The CSV payload. With timestamps on, the first line is a `#` comment
    /// carrying the command, parameters, wall-clock time and elapsed seconds.
    pub fn render(&self, options: OutputOptions) -> Result<String> {
        let mut out = Vec::new();
        if options.timestamp {
            let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            let line = format!(
                "# smoothspec {} {} generated={} elapsed={:.3}s\n",
                self.command,
                params.join(" "),
                chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
                self.elapsed.as_secs_f64()
            );
            out.extend_from_slice(line.as_bytes());
        }
        {
            let mut writer = csv::WriterBuilder::new().flexible(true).from_writer(&mut out);
            for table in &self.tables {
                if options.header {
                    writer.write_record(&table.header)?;
                }
                for row in &table.rows {
                    writer.write_record(row)?;
                }
            }
            writer.flush().map_err(|source| crate::error::CliError::Io { path: "<csv>".into(), source })?;
        }
        Ok(String::from_utf8(out).expect("csv output is utf-8"))
    }
}

/// Bits, fixed to six decimals (`inf` / `-inf` for unbounded values).
pub fn bits(v: f64) -> String {
    smoothspec::EntropyValue(v).to_string()
}

/// Traces and distances.
pub fn real(v: f64) -> String {
    format!("{v:.9}")
}

/// Grid coordinates as given, without float noise.
pub fn grid(v: f64) -> String {
    let r = (v * 1e9).round() / 1e9;
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

pub fn slack(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.3e}")
    } else {
        format!("{v}")
    }
}

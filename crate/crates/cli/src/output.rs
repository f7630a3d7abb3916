//! Data tables and the single writer that puts them on disk.

use std::fs;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use orir_core::Trajectory;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::report::MetricsReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A named table of numeric columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
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

    /// Time in µs plus one population column per level.
    pub fn from_trajectory(name: impl Into<String>, traj: &Trajectory, levels: &[&str]) -> Result<Self> {
        let mut columns = vec!["t_us".to_string()];
        columns.extend(levels.iter().map(|l| format!("pop_{}", level_column(l))));
        let pops = levels
            .iter()
            .map(|l| traj.populations(l))
            .collect::<orir_core::Result<Vec<_>>>()?;
        let rows = traj
            .times()
            .iter()
            .enumerate()
            .map(|(i, &t)| std::iter::once(t).chain(pops.iter().map(|p| p[i])).collect())
            .collect();
        Ok(Self {
            name: name.into(),
            columns,
            rows,
        })
    }

    fn to_csv(&self) -> Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| CliError::io(format!("formatting {}", self.name), e.into());
        w.write_record(&self.columns).map_err(ser)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| format_value(*x))).map_err(ser)?;
        }
        w.into_inner().map_err(|e| CliError::io(format!("formatting {}", self.name), e.into_error()))
    }
}

/// Scientific notation with 12 significant digits.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

/// `r'` is not a friendly column name.
fn level_column(level: &str) -> String {
    level.replace('\'', "p")
}

/// Everything one command produces.
#[derive(Debug, Clone)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    pub report: MetricsReport,
}

impl Artifacts {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Writes every table and `<scenario>_metrics.json` into `dir`.
    pub fn write(&self, dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
        let json = self.report.to_json()?;
        fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
        let mut written = Vec::new();
        let mut put = |name: String, bytes: Vec<u8>| -> Result<()> {
            let path = dir.join(name);
            fs::write(&path, bytes).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            written.push(path);
            Ok(())
        };
        for t in &self.tables {
            match format {
                Format::Csv => put(format!("{}.csv", t.name), t.to_csv()?)?,
                Format::Json => {
                    let body = serde_json::to_vec_pretty(t).map_err(|e| CliError::Numerical(e.to_string()))?;
                    put(format!("{}.json", t.name), body)?
                }
            }
        }
        put(format!("{}_metrics.json", self.report.scenario), json.into_bytes())?;
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_value(0.1), "1.00000000000e-1");
        assert_eq!(format_value(-2.5e-7), "-2.50000000000e-7");
        assert_eq!(format_value(0.0), "0.00000000000e0");
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut t = Table::new("x", &["a", "b"]);
        t.push(vec![1.0, 2.0]);
        let s = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(s, "a,b\n1.00000000000e0,2.00000000000e0\n");
    }
}

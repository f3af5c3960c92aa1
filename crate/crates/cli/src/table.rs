//! CSV tables with a `# key=value` metadata preamble.
//!
//! Floats are written in scientific notation with 17 significant digits so
//! that output is exact-round-trip and byte-identical across runs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use corrdyn::{Operator, Tolerances};

use crate::error::CliResult;

pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, Default)]
pub struct Metadata(Vec<(String, String)>);

impl Metadata {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn tolerances(&mut self, tol: &Tolerances) -> &mut Self {
        self.push("tol_herm", fmt_f64(tol.herm))
            .push("tol_psd", fmt_f64(tol.psd))
            .push("tol_trace", fmt_f64(tol.trace))
            .push("cond_threshold", fmt_f64(tol.cond_threshold))
    }

    pub fn singular_times(&mut self, times: &[f64]) -> &mut Self {
        let list: Vec<String> = times.iter().map(|t| fmt_f64(*t)).collect();
        self.push("skipped_singular_times", list.join(";"))
    }
}

/// A table assembled in memory and written in one go.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        Self {
            header: header.iter().map(|h| h.as_ref().to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn push_floats(&mut self, row: &[f64]) {
        self.push(row.iter().map(|x| fmt_f64(*x)).collect());
    }

    pub fn write(&self, path: &Path, meta: &Metadata) -> CliResult<()> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut out = BufWriter::new(File::create(path)?);
        for (k, v) in &meta.0 {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Column names `rho_ij_re`, `rho_ij_im` for a `d × d` state.
pub fn state_columns(d: usize) -> Vec<String> {
    let mut cols = Vec::with_capacity(2 * d * d);
    for i in 0..d {
        for j in 0..d {
            cols.push(format!("rho_{i}{j}_re"));
            cols.push(format!("rho_{i}{j}_im"));
        }
    }
    cols
}

pub fn state_values(rho: &Operator) -> Vec<f64> {
    let d = rho.dim();
    let mut vals = Vec::with_capacity(2 * d * d);
    for i in 0..d {
        for j in 0..d {
            let z = rho.get(i, j);
            vals.push(z.re);
            vals.push(z.im);
        }
    }
    vals
}

use corrdyn::dynamics::cp_check;
use rayon::prelude::*;

use super::Session;
use crate::error::CliResult;
use crate::table::{fmt_f64, Table};
use crate::CommonArgs;

#[derive(Debug, Clone)]
pub struct CpSummary {
    pub rows: usize,
    pub first_violation: Option<f64>,
    pub max_spectral_mismatch: f64,
}

pub fn run(common: &CommonArgs) -> CliResult<CpSummary> {
    let session = Session::load(common)?;
    let summary = cpcheck(&session)?;
    match summary.first_violation {
        Some(t) => println!("first CP violation at t = {}", fmt_f64(t)),
        None => println!("no CP violation on the grid"),
    }
    Ok(summary)
}

/// Choi and ε spectra of `Ψ_t` over the time grid.
pub fn cpcheck(session: &Session) -> CliResult<CpSummary> {
    let model = &session.built.model;
    let psd = session.tol.psd;
    let times = session.grid()?.times();
    let diags: Vec<_> = times
        .par_iter()
        .map(|&t| cp_check(&model.linear_map(t).psi))
        .collect::<corrdyn::Result<_>>()?;

    let mut table = Table::new(&[
        "t",
        "min_choi_eigenvalue",
        "min_epsilon_eigenvalue",
        "spectral_mismatch",
        "completely_positive",
    ]);
    let mut first_violation = None;
    let mut max_mismatch = 0.0f64;
    for (t, d) in times.iter().zip(&diags) {
        let cp = d.is_cp(psd);
        if !cp && first_violation.is_none() {
            first_violation = Some(*t);
        }
        max_mismatch = max_mismatch.max(d.spectral_mismatch());
        table.push(vec![
            fmt_f64(*t),
            fmt_f64(d.min_choi_eigenvalue),
            fmt_f64(d.min_epsilon_eigenvalue),
            fmt_f64(d.spectral_mismatch()),
            u8::from(cp).to_string(),
        ]);
    }
    let mut meta = session.metadata("cpcheck");
    meta.push(
        "first_cp_violation",
        first_violation.map_or_else(|| "none".to_string(), fmt_f64),
    )
    .push("max_spectral_mismatch", fmt_f64(max_mismatch));
    table.write(&session.out_path("cpcheck.csv"), &meta)?;
    Ok(CpSummary {
        rows: times.len(),
        first_violation,
        max_spectral_mismatch: max_mismatch,
    })
}

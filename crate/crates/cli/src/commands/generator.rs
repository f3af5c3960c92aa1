use corrdyn::generator::{correlated_canonical, CanonicalForm, CorrelatedCanonical};
use corrdyn::models::{jc_coefficients, jc_rates_closed_form, sigma_rates};
use corrdyn::{Error, Operator};
use rayon::prelude::*;

use super::Session;
use crate::error::{CliError, CliResult};
use crate::table::{fmt_f64, Table};
use crate::CommonArgs;

/// Relative bound on the Hamiltonian of the correlation part alone.
pub const K_CHI_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GeneratorSummary {
    pub evaluated: Vec<f64>,
    pub skipped: Vec<f64>,
    pub max_k_chi_norm: f64,
    pub max_merged_residual: f64,
}

fn operator_columns(prefix: &str, d: usize) -> Vec<String> {
    let mut cols = Vec::with_capacity(2 * d * d);
    for i in 0..d {
        for j in 0..d {
            cols.push(format!("{prefix}_{i}{j}_re"));
            cols.push(format!("{prefix}_{i}{j}_im"));
        }
    }
    cols
}

fn operator_values(op: &Operator) -> Vec<f64> {
    crate::table::state_values(op)
}

pub fn run(common: &CommonArgs, times: &[f64]) -> CliResult<GeneratorSummary> {
    let session = Session::load(common)?;
    generator(&session, times)
}

/// Canonical forms at each requested time (or on the scenario grid when
/// `times` is empty). Singular times are skipped and recorded.
pub fn generator(session: &Session, times: &[f64]) -> CliResult<GeneratorSummary> {
    let model = &session.built.model;
    let cond = session.tol.cond_threshold;
    let times: Vec<f64> = if times.is_empty() {
        session.grid()?.times()
    } else {
        times.to_vec()
    };
    let results: Vec<(f64, Option<CorrelatedCanonical>)> = times
        .par_iter()
        .map(|&t| match correlated_canonical(model, t, cond) {
            Ok(c) => Ok((t, Some(c))),
            Err(Error::SingularMap { .. }) => Ok((t, None)),
            Err(e) => Err(CliError::from(e)),
        })
        .collect::<CliResult<_>>()?;

    let skipped: Vec<f64> = results
        .iter()
        .filter(|r| r.1.is_none())
        .map(|r| r.0)
        .collect();
    if skipped.len() == results.len() {
        return Err(CliError::Singular(
            "every requested time is singular".into(),
        ));
    }

    let d = model.d_s();
    let qubit = d == 2;
    let jc = session.built.jc;
    let mut cols = vec!["t".to_string(), "condition_number".to_string()];
    cols.extend(operator_columns("k", d));
    cols.extend(
        [
            "k_uncorrelated_diff",
            "k_chi_norm",
            "merged_residual",
            "j_norm",
            "channels",
        ]
        .map(String::from),
    );
    cols.extend(operator_columns("j", d));
    if qubit {
        cols.extend(
            [
                "k_splitting",
                "lambda_plus",
                "lambda_minus",
                "lambda_z",
                "rate_off_diagonal",
            ]
            .map(String::from),
        );
    }
    if jc.is_some() {
        cols.extend(
            [
                "f",
                "k_splitting_closed",
                "lambda_plus_closed",
                "lambda_minus_closed",
                "lambda_z_closed",
            ]
            .map(String::from),
        );
    }
    let mut table = Table::new(&cols);
    let mut channels = Table::new(&{
        let mut c = vec![
            "t".to_string(),
            "form".into(),
            "index".into(),
            "rate".into(),
        ];
        c.extend(operator_columns("l", d));
        c
    });

    let mut max_k_chi = 0.0f64;
    let mut max_residual = 0.0f64;
    let mut evaluated = Vec::new();
    let mut violation = None;
    for (t, forms) in &results {
        let Some(c) = forms else { continue };
        evaluated.push(*t);
        let g = &c.generator;
        let k = &c.merged.hamiltonian;
        let k_chi = c.correlation.hamiltonian.frobenius_norm();
        let residual = (&c.merged.to_superop() - &g.l_chi).frobenius_norm();
        let j_norm = g.j.frobenius_norm();
        if k_chi > K_CHI_TOL * j_norm.max(1.0) && violation.is_none() {
            violation = Some((*t, k_chi));
        }
        max_k_chi = max_k_chi.max(k_chi);
        max_residual = max_residual.max(residual);

        let mut row = vec![*t, g.condition_number];
        row.extend(operator_values(k));
        row.extend([
            (k - &c.uncorrelated.hamiltonian).frobenius_norm(),
            k_chi,
            residual,
            j_norm,
            c.merged.channels.len() as f64,
        ]);
        row.extend(operator_values(&g.j));
        if qubit {
            let r = sigma_rates(&c.merged);
            row.extend([
                (k.get(0, 0) - k.get(1, 1)).re,
                r.lambda_plus,
                r.lambda_minus,
                r.lambda_z,
                r.off_diagonal,
            ]);
        }
        if let Some(p) = &jc {
            row.push(jc_coefficients(p, *t).f);
            match jc_rates_closed_form(p, *t) {
                Ok(r) => {
                    let h = &r.hamiltonian;
                    row.extend([
                        (h.get(0, 0) - h.get(1, 1)).re,
                        r.lambda_plus,
                        r.lambda_minus,
                        r.lambda_z,
                    ]);
                }
                Err(_) => row.extend([f64::NAN; 4]),
            }
        }
        table.push_floats(&row);

        let forms: [(&str, &CanonicalForm); 3] = [
            ("uncorrelated", &c.uncorrelated),
            ("correlation", &c.correlation),
            ("merged", &c.merged),
        ];
        for (name, form) in forms {
            for (idx, ch) in form.channels.iter().enumerate() {
                let mut r = vec![
                    fmt_f64(*t),
                    name.to_string(),
                    idx.to_string(),
                    fmt_f64(ch.rate),
                ];
                r.extend(operator_values(&ch.operator).into_iter().map(fmt_f64));
                channels.push(r);
            }
        }
    }

    let mut meta = session.metadata("generator");
    meta.singular_times(&skipped)
        .push("max_k_chi_norm", fmt_f64(max_k_chi))
        .push("max_merged_residual", fmt_f64(max_residual));
    table.write(&session.out_path("generator.csv"), &meta)?;
    channels.write(&session.out_path("channels.csv"), &meta)?;

    if let Some((t, k)) = violation {
        return Err(CliError::Invariant(format!(
            "correlation part carries a Hamiltonian of norm {k:e} at t = {t}"
        )));
    }
    Ok(GeneratorSummary {
        evaluated,
        skipped,
        max_k_chi_norm: max_k_chi,
        max_merged_residual: max_residual,
    })
}

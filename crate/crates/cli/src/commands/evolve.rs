use corrdyn::dynamics::{condition_number, cp_check};
use corrdyn::generator::{
    integrate_master_equation, integrate_master_equation_skipping, SingularInterval,
};
use corrdyn::models::jc_coefficients;
use corrdyn::{Error, Operator, C64};
use log::warn;
use rayon::prelude::*;

use super::{max_deviation, Session};
use crate::error::{CliError, CliResult};
use crate::scenario::initial_state;
use crate::svg;
use crate::table::{fmt_f64, state_columns, state_values, Table};
use crate::CommonArgs;

/// Exact and linear-map trajectories must agree to this (Frobenius norm).
pub const EXACT_LINEAR_TOL: f64 = 1e-8;
/// Trace of every emitted state must be 1 within this.
pub const TRACE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Default)]
pub struct EvolveSummary {
    pub rows: usize,
    pub domain_min_eigenvalue: f64,
    pub exact_vs_linear: Option<f64>,
    pub exact_vs_master: Option<f64>,
    pub linear_vs_master: Option<f64>,
    pub master_trace_drift: Option<f64>,
    pub singular: Vec<SingularInterval>,
}

struct LinearRow {
    state: Operator,
    cond: f64,
    min_choi: f64,
    jc: Option<(f64, f64)>,
}

fn trace_drift<'a>(states: impl IntoIterator<Item = &'a Operator>) -> f64 {
    states
        .into_iter()
        .map(|s| (s.trace() - C64::new(1.0, 0.0)).norm())
        .fold(0.0, f64::max)
}

pub fn run(common: &CommonArgs) -> CliResult<EvolveSummary> {
    let session = Session::load(common)?;
    evolve(&session)
}

pub fn evolve(session: &Session) -> CliResult<EvolveSummary> {
    let model = &session.built.model;
    let tol = session.tol;
    let grid = session.grid()?;
    let outputs = session.loaded.scenario.outputs;
    let rho0 = initial_state(
        &session.loaded.scenario.initial_state,
        &session.built,
        &tol,
        session.common.seed,
    )?;

    let domain = model.context().in_physical_domain(&rho0, &tol)?;
    if !domain.inside {
        if !session.common.allow_unphysical {
            return Err(CliError::Input(format!(
                "initial state is outside the physical domain (min eigenvalue {:e}); pass --allow-unphysical to evaluate anyway",
                domain.min_eigenvalue
            )));
        }
        warn!("evaluating an initial state outside the physical domain");
    }

    let times = grid.times();
    let d = model.d_s();
    let mut summary = EvolveSummary {
        rows: times.len(),
        domain_min_eigenvalue: domain.min_eigenvalue,
        ..Default::default()
    };

    let mut meta = session.metadata("evolve");
    meta.push("domain_min_eigenvalue", fmt_f64(domain.min_eigenvalue))
        .push("allow_unphysical", session.common.allow_unphysical);

    let exact: Option<Vec<Operator>> = if outputs.exact {
        Some(
            times
                .par_iter()
                .map(|&t| model.reduced_exact(&rho0, t))
                .collect::<corrdyn::Result<_>>()?,
        )
    } else {
        None
    };

    let linear: Option<Vec<LinearRow>> = if outputs.linear_map {
        let jc = session.built.jc;
        Some(
            times
                .par_iter()
                .map(|&t| {
                    let snap = model.linear_map(t);
                    let state = snap.psi.apply(&rho0);
                    let jc_cols =
                        jc.map(|p| (jc_coefficients(&p, t).f, snap.phi.apply(&rho0).get(1, 1).re));
                    Ok(LinearRow {
                        state,
                        cond: condition_number(snap.phi.matrix()),
                        min_choi: cp_check(&snap.psi)?.min_choi_eigenvalue,
                        jc: jc_cols,
                    })
                })
                .collect::<corrdyn::Result<_>>()?,
        )
    } else {
        None
    };

    let (master, flagged): (Option<Vec<Operator>>, Vec<bool>) = if outputs.master_equation {
        if session.common.skip_singular {
            let seg = integrate_master_equation_skipping(model, &rho0, grid, tol.cond_threshold)?;
            let flagged = (0..seg.trajectory.len())
                .map(|k| seg.is_flagged(k))
                .collect();
            summary.singular = seg.singular.clone();
            (Some(seg.trajectory.states), flagged)
        } else {
            match integrate_master_equation(model, &rho0, grid, tol.cond_threshold) {
                Ok(traj) => (Some(traj.states), vec![false; times.len()]),
                Err(e @ Error::SingularMap { .. }) => {
                    return Err(CliError::Singular(format!(
                        "{e}; rerun with --skip-singular to step across it"
                    )));
                }
                Err(e) => return Err(e.into()),
            }
        }
    } else {
        (None, vec![false; times.len()])
    };
    let singular_times: Vec<f64> = summary.singular.iter().map(|s| s.t_singular).collect();
    meta.singular_times(&singular_times);

    let mut base_cols = vec!["t".to_string()];
    base_cols.extend(state_columns(d));
    base_cols.push("trace".into());

    if let Some(states) = &exact {
        let mut cols = base_cols.clone();
        cols.push("min_eigenvalue".into());
        let mut table = Table::new(&cols);
        for (t, s) in times.iter().zip(states) {
            let mut row = vec![*t];
            row.extend(state_values(s));
            row.push(s.trace().re);
            row.push(s.hermitian_part().min_eigenvalue()?);
            table.push_floats(&row);
        }
        table.write(&session.out_path("exact.csv"), &meta)?;
    }

    if let Some(rows) = &linear {
        let mut cols = base_cols.clone();
        cols.extend(["condition_number".into(), "min_choi_eigenvalue".into()]);
        let is_jc = session.built.jc.is_some();
        if is_jc {
            cols.extend(["f".into(), "rho_gg_unc".into(), "rho_gg_corr".into()]);
        }
        let mut table = Table::new(&cols);
        for (t, r) in times.iter().zip(rows) {
            let mut row = vec![*t];
            row.extend(state_values(&r.state));
            row.extend([r.state.trace().re, r.cond, r.min_choi]);
            if let Some((f, unc)) = r.jc {
                row.extend([f, unc, r.state.get(1, 1).re]);
            }
            table.push_floats(&row);
        }
        table.write(&session.out_path("linear_map.csv"), &meta)?;
    }

    if let Some(states) = &master {
        let mut cols = base_cols.clone();
        cols.push("flagged".into());
        let mut table = Table::new(&cols);
        for ((t, s), flag) in times.iter().zip(states).zip(&flagged) {
            let mut row: Vec<String> = vec![fmt_f64(*t)];
            row.extend(state_values(s).into_iter().map(fmt_f64));
            row.push(fmt_f64(s.trace().re));
            row.push(u8::from(*flag).to_string());
            table.push(row);
        }
        table.write(&session.out_path("master_equation.csv"), &meta)?;
    }

    let unflagged = |v: &[Operator]| -> Vec<Operator> {
        v.iter()
            .zip(&flagged)
            .filter(|(_, f)| !**f)
            .map(|(s, _)| s.clone())
            .collect()
    };
    let linear_states: Option<Vec<Operator>> = linear
        .as_ref()
        .map(|r| r.iter().map(|x| x.state.clone()).collect());
    if let (Some(a), Some(b)) = (&exact, &linear_states) {
        summary.exact_vs_linear = Some(max_deviation(a, b));
    }
    if let (Some(a), Some(m)) = (&exact, &master) {
        summary.exact_vs_master = Some(max_deviation(&unflagged(a), &unflagged(m)));
    }
    if let (Some(b), Some(m)) = (&linear_states, &master) {
        summary.linear_vs_master = Some(max_deviation(&unflagged(b), &unflagged(m)));
    }
    summary.master_trace_drift = master.as_ref().map(trace_drift);

    let mut table = Table::new(&["quantity", "value"]);
    let mut add = |name: &str, v: Option<f64>| {
        if let Some(v) = v {
            table.push(vec![name.to_string(), fmt_f64(v)]);
        }
    };
    add("max_deviation_exact_linear_map", summary.exact_vs_linear);
    add(
        "max_deviation_exact_master_equation",
        summary.exact_vs_master,
    );
    add(
        "max_deviation_linear_map_master_equation",
        summary.linear_vs_master,
    );
    add(
        "max_trace_drift_exact",
        exact.as_ref().map(trace_drift),
    );
    add(
        "max_trace_drift_linear_map",
        linear_states.as_ref().map(trace_drift),
    );
    add(
        "max_trace_drift_master_equation",
        summary.master_trace_drift,
    );
    add("singular_intervals", Some(summary.singular.len() as f64));
    table.write(&session.out_path("summary.csv"), &meta)?;

    if outputs.svg {
        write_svg(session, &times, &exact, &linear_states, &master)?;
    }

    check_invariants(&summary, &exact, &linear_states)?;
    Ok(summary)
}

fn write_svg(
    session: &Session,
    times: &[f64],
    exact: &Option<Vec<Operator>>,
    linear: &Option<Vec<Operator>>,
    master: &Option<Vec<Operator>>,
) -> CliResult<()> {
    let pop = |v: &Vec<Operator>| v.iter().map(|s| s.get(0, 0).re).collect::<Vec<_>>();
    let mut series = Vec::new();
    if let Some(e) = exact {
        series.push(("exact", pop(e)));
    }
    if let Some(l) = linear {
        series.push(("linear map", pop(l)));
    }
    if let Some(m) = master {
        series.push(("master equation", pop(m)));
    }
    svg::line_plot(&session.out_path("evolve.svg"), "rho_00(t)", times, &series)
}

fn check_invariants(
    summary: &EvolveSummary,
    exact: &Option<Vec<Operator>>,
    linear: &Option<Vec<Operator>>,
) -> CliResult<()> {
    if let Some(dev) = summary.exact_vs_linear {
        if dev > EXACT_LINEAR_TOL {
            return Err(CliError::Invariant(format!(
                "linear map deviates from exact propagation by {dev:e}"
            )));
        }
    }
    let drifts = [
        exact.as_ref().map(trace_drift),
        linear.as_ref().map(trace_drift),
        summary.master_trace_drift,
    ];
    if let Some(drift) = drifts.into_iter().flatten().find(|d| *d > TRACE_TOL) {
        return Err(CliError::Invariant(format!(
            "trace drift {drift:e} exceeds {TRACE_TOL:e}"
        )));
    }
    Ok(())
}

//! Built-in scenarios for the three reference figures:
//!
//! * `fig1`: physical-domain cross-sections of the swap model at `p = 1/2`
//!   and `p = 7/8`;
//! * `fig2`: JC domain cross-sections at `a = 0.7, p0 = 0.5` and for a
//!   sweep of `p0` at `a = 0.9`;
//! * `fig3`: JC ground-state population with and without correlations.

use std::path::PathBuf;

use corrdyn::models::jc_coefficients;
use corrdyn::sampling::bloch_vector;
use rayon::prelude::*;
use serde_json::json;

use super::domain::{cross_section, write_points};
use super::Session;
use crate::error::CliResult;
use crate::svg;
use crate::table::{fmt_f64, Table};
use crate::{CommonArgs, FigureTag};

pub const FIG2_SWEEP_P0: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
const FIG3_T_MAX: f64 = 200.0;
const FIG3_STEPS: usize = 2000;

fn jc_scenario(a: f64, p0: f64) -> String {
    json!({
        "model": {"type": "jaynes_cummings", "a": a, "p0": p0, "omega0": 1.0, "delta": 0.1, "g": 0.1}
    })
    .to_string()
}

fn swap_scenario(p: f64) -> String {
    json!({"model": {"type": "swap", "p": p}}).to_string()
}

fn domain_figure(
    common: &CommonArgs,
    dir: &str,
    name: &str,
    text: &str,
    resolution: usize,
    svg_out: bool,
) -> CliResult<PathBuf> {
    let session = Session::from_text(common, text)?;
    let jc = session.built.jc.as_ref();
    let points = cross_section(&session.built.model, &session.tol, jc, resolution)?;
    let mut meta = session.metadata("figures");
    meta.push("figure", dir).push("resolution", resolution);
    if let Some(rho) = &session.built.reference {
        meta.push("reference_center_z", fmt_f64(bloch_vector(rho)[2]));
    }
    let path = common
        .out
        .join("figures")
        .join(dir)
        .join(format!("{name}.csv"));
    write_points(&path, &meta, &points, &[("x", 0), ("z", 2)])?;
    if svg_out {
        let dots: Vec<(f64, f64, bool)> = points
            .iter()
            .map(|p| (p.v[0], p.v[2], p.accepted))
            .collect();
        svg::acceptance_map(&path.with_extension("svg"), name, &dots)?;
    }
    Ok(path)
}

fn fig1(common: &CommonArgs, resolution: usize, svg_out: bool) -> CliResult<Vec<PathBuf>> {
    [0.5, 0.875]
        .iter()
        .map(|&p| {
            domain_figure(
                common,
                "fig1",
                &format!("swap_p{p}"),
                &swap_scenario(p),
                resolution,
                svg_out,
            )
        })
        .collect()
}

fn fig2(common: &CommonArgs, resolution: usize, svg_out: bool) -> CliResult<Vec<PathBuf>> {
    let mut cases = vec![(0.7, 0.5)];
    cases.extend(FIG2_SWEEP_P0.iter().map(|&p0| (0.9, p0)));
    cases
        .iter()
        .map(|&(a, p0)| {
            domain_figure(
                common,
                "fig2",
                &format!("jc_a{a}_p0_{p0}"),
                &jc_scenario(a, p0),
                resolution,
                svg_out,
            )
        })
        .collect()
}

fn fig3(common: &CommonArgs, svg_out: bool) -> CliResult<Vec<PathBuf>> {
    let session = Session::from_text(common, &jc_scenario(0.6, 0.4))?;
    let model = &session.built.model;
    let params = session.built.jc.expect("JC scenario");
    let rho0 = session.built.reference.clone().expect("JC reference state");
    let t_max = common.t_max.unwrap_or(FIG3_T_MAX);
    let steps = common.steps.unwrap_or(FIG3_STEPS);
    let grid = corrdyn::generator::TimeGrid::new(t_max, steps)?;
    let times = grid.times();
    let rows: Vec<[f64; 5]> = times
        .par_iter()
        .map(|&t| {
            let snap = model.linear_map(t);
            let unc = snap.phi.apply(&rho0).get(1, 1).re;
            let corr = snap.psi.apply(&rho0).get(1, 1).re;
            let exact = model.reduced_exact(&rho0, t)?.get(1, 1).re;
            Ok([t, unc, corr, jc_coefficients(&params, t).f, exact])
        })
        .collect::<CliResult<_>>()?;
    let mut table = Table::new(&["t", "rho_gg_unc", "rho_gg_corr", "f", "rho_gg_exact"]);
    for r in &rows {
        table.push_floats(r);
    }
    let mut meta = session.metadata("figures");
    meta.push("figure", "fig3")
        .push("t_max", fmt_f64(t_max))
        .push("steps", steps);
    let path = common.out.join("figures").join("fig3").join("rho_gg.csv");
    table.write(&path, &meta)?;
    if svg_out {
        let col = |k: usize| rows.iter().map(|r| r[k]).collect::<Vec<_>>();
        svg::line_plot(
            &path.with_extension("svg"),
            "ground-state population",
            &times,
            &[
                ("uncorrelated", col(1)),
                ("correlated", col(2)),
                ("f", col(3)),
            ],
        )?;
    }
    Ok(vec![path])
}

/// Writes the requested bundles under `<out>/figures/` and returns the CSV
/// paths in a fixed order.
pub fn figures(
    common: &CommonArgs,
    tag: FigureTag,
    resolution: usize,
    svg_out: bool,
) -> CliResult<Vec<PathBuf>> {
    let mut paths = Vec::new();
    if matches!(tag, FigureTag::Fig1 | FigureTag::All) {
        paths.extend(fig1(common, resolution, svg_out)?);
    }
    if matches!(tag, FigureTag::Fig2 | FigureTag::All) {
        paths.extend(fig2(common, resolution, svg_out)?);
    }
    if matches!(tag, FigureTag::Fig3 | FigureTag::All) {
        paths.extend(fig3(common, svg_out)?);
    }
    Ok(paths)
}

pub fn run(common: &CommonArgs, tag: FigureTag, resolution: usize, svg_out: bool) -> CliResult<()> {
    for path in figures(common, tag, resolution, svg_out)? {
        println!("{}", path.display());
    }
    Ok(())
}

use std::path::Path;

use clap::ValueEnum;
use corrdyn::dynamics::TotalModel;
use corrdyn::models::{jc_domain, jc_domain_margin, JcParams};
use corrdyn::sampling::{random_bloch_vector, random_state, state_from_bloch};
use corrdyn::{Operator, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::Session;
use crate::error::{CliError, CliResult};
use crate::scenario::{parse_matrix, MatrixSpec};
use crate::table::{fmt_f64, Metadata, Table};
use crate::{CommonArgs, DomainMode};

/// Membership result for one Bloch-ball point.
#[derive(Debug, Clone, Copy)]
pub struct BlochPoint {
    pub v: [f64; 3],
    pub accepted: bool,
    pub min_eigenvalue: f64,
    /// Sphere-intersection test and its margin for JC models.
    pub sphere: Option<(bool, f64)>,
}

#[derive(Debug, Clone)]
pub struct DomainSummary {
    pub points: usize,
    pub accepted: usize,
    /// `(z_min + z_max) / 2` over accepted points on the z-axis, for grid
    /// modes that sample it.
    pub axis_center: Option<f64>,
}

impl DomainSummary {
    pub fn acceptance(&self) -> f64 {
        self.accepted as f64 / self.points.max(1) as f64
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..n)
        .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
        .collect()
}

fn in_ball(v: [f64; 3]) -> bool {
    v.iter().map(|x| x * x).sum::<f64>() <= 1.0 + 1e-12
}

fn clamp_to_ball(v: [f64; 3]) -> [f64; 3] {
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if r > 1.0 {
        v.map(|x| x / r)
    } else {
        v
    }
}

fn evaluate(
    model: &TotalModel,
    tol: &Tolerances,
    jc: Option<&JcParams>,
    v: [f64; 3],
) -> CliResult<BlochPoint> {
    let v = clamp_to_ball(v);
    let check = model
        .context()
        .in_physical_domain(&state_from_bloch(v), tol)?;
    Ok(BlochPoint {
        v,
        accepted: check.inside,
        min_eigenvalue: check.min_eigenvalue,
        sphere: jc.map(|p| (jc_domain(p, v), jc_domain_margin(p, v))),
    })
}

fn evaluate_all(
    model: &TotalModel,
    tol: &Tolerances,
    jc: Option<&JcParams>,
    vs: &[[f64; 3]],
) -> CliResult<Vec<BlochPoint>> {
    vs.par_iter()
        .map(|v| evaluate(model, tol, jc, *v))
        .collect()
}

/// The `(x = |ρ01|·2, z)` half-plane with `resolution` points along x and
/// `2·resolution - 1` along z (equal spacing), restricted to the ball.
pub fn cross_section(
    model: &TotalModel,
    tol: &Tolerances,
    jc: Option<&JcParams>,
    resolution: usize,
) -> CliResult<Vec<BlochPoint>> {
    let n = resolution.max(2);
    let xs = linspace(0.0, 1.0, n);
    let zs = linspace(-1.0, 1.0, 2 * n - 1);
    let vs: Vec<[f64; 3]> = xs
        .iter()
        .flat_map(|&x| zs.iter().map(move |&z| [x, 0.0, z]))
        .filter(|v| in_ball(*v))
        .collect();
    evaluate_all(model, tol, jc, &vs)
}

pub fn lattice(
    model: &TotalModel,
    tol: &Tolerances,
    jc: Option<&JcParams>,
    resolution: usize,
) -> CliResult<Vec<BlochPoint>> {
    let axis = linspace(-1.0, 1.0, resolution.max(2));
    let mut vs = Vec::new();
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                if in_ball([x, y, z]) {
                    vs.push([x, y, z]);
                }
            }
        }
    }
    evaluate_all(model, tol, jc, &vs)
}

/// Midpoint of the accepted points lying on the z-axis.
pub fn axis_center(points: &[BlochPoint]) -> Option<f64> {
    let on_axis = points
        .iter()
        .filter(|p| p.accepted && p.v[0].abs() < 1e-12 && p.v[1].abs() < 1e-12);
    let (lo, hi) = on_axis.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
        (lo.min(p.v[2]), hi.max(p.v[2]))
    });
    (lo <= hi).then_some(0.5 * (lo + hi))
}

/// Writes Bloch-point rows; `coords` picks which coordinates to emit.
pub fn write_points(
    path: &Path,
    meta: &Metadata,
    points: &[BlochPoint],
    coords: &[(&str, usize)],
) -> CliResult<DomainSummary> {
    let with_sphere = points.first().is_some_and(|p| p.sphere.is_some());
    let mut cols: Vec<String> = coords.iter().map(|(n, _)| n.to_string()).collect();
    cols.extend(["accepted".into(), "min_eigenvalue".into()]);
    if with_sphere {
        cols.extend(["sphere_accepted".into(), "sphere_margin".into()]);
    }
    let mut table = Table::new(&cols);
    for p in points {
        let mut row: Vec<String> = coords.iter().map(|(_, k)| fmt_f64(p.v[*k])).collect();
        row.push(u8::from(p.accepted).to_string());
        row.push(fmt_f64(p.min_eigenvalue));
        if let Some((ok, margin)) = p.sphere {
            row.push(u8::from(ok).to_string());
            row.push(fmt_f64(margin));
        }
        table.push(row);
    }
    let summary = DomainSummary {
        points: points.len(),
        accepted: points.iter().filter(|p| p.accepted).count(),
        axis_center: axis_center(points),
    };
    let mut meta = meta.clone();
    meta.push("points", summary.points)
        .push("accepted", summary.accepted)
        .push("acceptance_fraction", fmt_f64(summary.acceptance()));
    if let Some(c) = summary.axis_center {
        meta.push("accepted_axis_center", fmt_f64(c));
    }
    table.write(path, &meta)?;
    Ok(summary)
}

fn write_states(
    path: &Path,
    meta: &Metadata,
    model: &TotalModel,
    tol: &Tolerances,
    states: &[Operator],
) -> CliResult<DomainSummary> {
    let checks: Vec<_> = states
        .par_iter()
        .map(|s| model.context().in_physical_domain(s, tol))
        .collect::<corrdyn::Result<_>>()?;
    let mut table = Table::new(&["index", "accepted", "min_eigenvalue"]);
    for (k, c) in checks.iter().enumerate() {
        table.push(vec![
            k.to_string(),
            u8::from(c.inside).to_string(),
            fmt_f64(c.min_eigenvalue),
        ]);
    }
    let summary = DomainSummary {
        points: checks.len(),
        accepted: checks.iter().filter(|c| c.inside).count(),
        axis_center: None,
    };
    let mut meta = meta.clone();
    meta.push("points", summary.points)
        .push("accepted", summary.accepted)
        .push("acceptance_fraction", fmt_f64(summary.acceptance()));
    table.write(path, &meta)?;
    Ok(summary)
}

fn read_states(path: &Path, tol: &Tolerances) -> CliResult<Vec<Operator>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read states {}: {e}", path.display())))?;
    let specs: Vec<MatrixSpec> =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("states file: {e}")))?;
    specs
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let op = parse_matrix(&format!("state {k}"), m)?;
            op.ensure_state(tol)?;
            Ok(op)
        })
        .collect()
}

pub fn run(
    common: &CommonArgs,
    mode: DomainMode,
    resolution: usize,
    samples: usize,
    states: Option<&Path>,
) -> CliResult<DomainSummary> {
    let session = Session::load(common)?;
    domain(&session, mode, resolution, samples, states)
}

pub fn domain(
    session: &Session,
    mode: DomainMode,
    resolution: usize,
    samples: usize,
    states: Option<&Path>,
) -> CliResult<DomainSummary> {
    let model = &session.built.model;
    let tol = &session.tol;
    let jc = session.built.jc.as_ref();
    let d_s = model.d_s();
    let mut meta = session.metadata("domain");
    meta.push(
        "mode",
        mode.to_possible_value()
            .expect("no skipped variants")
            .get_name(),
    );
    let path = session.out_path("domain.csv");
    let need_qubit = || {
        if d_s == 2 {
            Ok(())
        } else {
            Err(CliError::Input(format!(
                "{mode:?} mode needs d_s = 2 (got {d_s}); use list mode"
            )))
        }
    };
    match mode {
        DomainMode::CrossSection => {
            need_qubit()?;
            meta.push("resolution", resolution);
            let points = cross_section(model, tol, jc, resolution)?;
            write_points(&path, &meta, &points, &[("x", 0), ("z", 2)])
        }
        DomainMode::Lattice => {
            need_qubit()?;
            meta.push("resolution", resolution);
            let points = lattice(model, tol, jc, resolution)?;
            write_points(&path, &meta, &points, &[("x", 0), ("y", 1), ("z", 2)])
        }
        DomainMode::Sample => {
            meta.push("samples", samples)
                .push("seed", session.common.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(session.common.seed);
            if d_s == 2 {
                let vs: Vec<[f64; 3]> = (0..samples)
                    .map(|_| random_bloch_vector(&mut rng))
                    .collect();
                let points = evaluate_all(model, tol, jc, &vs)?;
                write_points(&path, &meta, &points, &[("x", 0), ("y", 1), ("z", 2)])
            } else {
                let states: Vec<Operator> =
                    (0..samples).map(|_| random_state(d_s, &mut rng)).collect();
                write_states(&path, &meta, model, tol, &states)
            }
        }
        DomainMode::List => {
            let file =
                states.ok_or_else(|| CliError::Input("list mode needs --states <file>".into()))?;
            let states = read_states(file, tol)?;
            if let Some(bad) = states.iter().find(|s| s.dim() != d_s) {
                return Err(CliError::Input(format!(
                    "state of dimension {} in list, expected {d_s}",
                    bad.dim()
                )));
            }
            meta.push(
                "states_hash",
                crate::scenario::hash_bytes(&std::fs::read(file)?),
            );
            write_states(&path, &meta, model, tol, &states)
        }
    }
}

use crate::dynamics::TotalModel;
use crate::error::{Error, Result};
use crate::generator::{assemble_generator, GeneratorSnapshot};
use crate::operator::Operator;

/// Uniform grid `t_k = k · t_max / steps`, `k = 0..=steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_max: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) || steps == 0 {
            return Err(Error::InvalidParams(format!(
                "time grid needs t_max > 0 and steps > 0 (got {t_max}, {steps})"
            )));
        }
        Ok(Self { t_max, steps })
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        self.t_max * k as f64 / self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.time(k)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Operator>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest `|Tr ρ(t) - 1|` along the trajectory.
    pub fn trace_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.trace() - crate::C64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }
}

/// A grid step on which `Φ_t` was found singular or ill-conditioned.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularInterval {
    pub t_start: f64,
    pub t_end: f64,
    /// Best estimate of the singular time inside the step.
    pub t_singular: f64,
    pub condition_number: f64,
}

/// Result of integration across singular times: the full grid, with states
/// after each singular step reseeded from the linear map.
#[derive(Debug, Clone)]
pub struct SegmentedTrajectory {
    pub trajectory: Trajectory,
    pub singular: Vec<SingularInterval>,
}

impl SegmentedTrajectory {
    /// Whether grid point `k` is an endpoint of a flagged step.
    pub fn is_flagged(&self, k: usize) -> bool {
        let t = self.trajectory.times[k];
        self.singular.iter().any(|s| t >= s.t_start && t <= s.t_end)
    }
}

/// Steps whose `h · ‖L^χ_t‖_F` exceeds this at any stage are treated as
/// crossing a singular time: the generator diverges there and the fixed step
/// no longer resolves it.
pub const STIFFNESS_LIMIT: f64 = 1.0;

// Generator at `t`, or the location of a singularity. Detection uses the
// condition threshold, a sign change of det Φ relative to `prev`, and the
// stiffness limit.
fn stage(
    model: &TotalModel,
    t: f64,
    prev: &GeneratorSnapshot,
    h: f64,
    cond_threshold: f64,
) -> std::result::Result<GeneratorSnapshot, SingularInterval> {
    let g = match assemble_generator(model, t, cond_threshold, false) {
        Ok(g) => g,
        Err(Error::SingularMap {
            condition_number, ..
        }) => {
            return Err(SingularInterval {
                t_start: prev.t,
                t_end: t,
                t_singular: t,
                condition_number,
            })
        }
        Err(other) => panic!("generator assembly failed unexpectedly: {other}"),
    };
    let (a, b) = (prev.determinant.re, g.determinant.re);
    if a * b < 0.0 {
        return Err(SingularInterval {
            t_start: prev.t,
            t_end: t,
            t_singular: prev.t + (t - prev.t) * a / (a - b),
            condition_number: f64::INFINITY,
        });
    }
    let norm = g.l_chi.frobenius_norm();
    if h * norm > STIFFNESS_LIMIT {
        // Locate the pole assuming ‖L^χ_t‖ ∝ 1/|t - t*| near it.
        let prev_norm = prev.l_chi.frobenius_norm();
        let t_singular = if norm > prev_norm {
            (norm * t - prev_norm * prev.t) / (norm - prev_norm)
        } else {
            t
        };
        return Err(SingularInterval {
            t_start: prev.t,
            t_end: t,
            t_singular,
            condition_number: g.condition_number,
        });
    }
    Ok(g)
}

fn rk4_step(
    model: &TotalModel,
    rho: &Operator,
    start: &GeneratorSnapshot,
    h: f64,
    cond_threshold: f64,
) -> std::result::Result<(Operator, GeneratorSnapshot), SingularInterval> {
    let t = start.t;
    let whole_step = |mut s: SingularInterval| {
        s.t_start = t;
        s.t_end = t + h;
        s
    };
    let mid = stage(model, t + 0.5 * h, start, h, cond_threshold).map_err(whole_step)?;
    let end = stage(model, t + h, &mid, h, cond_threshold).map_err(whole_step)?;
    let k1 = start.l_chi.apply(rho);
    let k2 = mid.l_chi.apply(&(rho + &k1.scale_real(0.5 * h)));
    let k3 = mid.l_chi.apply(&(rho + &k2.scale_real(0.5 * h)));
    let k4 = end.l_chi.apply(&(rho + &k3.scale_real(h)));
    let incr = &(&k1 + &k2.scale_real(2.0)) + &(&k3.scale_real(2.0) + &k4);
    Ok((rho + &incr.scale_real(h / 6.0), end))
}

/// Classical fourth-order Runge–Kutta integration of `ρ̇ = L^χ_t[ρ]` on a
/// uniform grid, rebuilding the generator at every stage time.
///
/// Aborts with [`Error::SingularMap`] at the first step that meets a
/// singular time of `Φ_t` (see [`STIFFNESS_LIMIT`] for the detection rule).
pub fn integrate_master_equation(
    model: &TotalModel,
    rho0: &Operator,
    grid: TimeGrid,
    cond_threshold: f64,
) -> Result<Trajectory> {
    let h = grid.step();
    let mut gen = assemble_generator(model, 0.0, cond_threshold, false)?;
    let mut rho = rho0.clone();
    let mut times = vec![0.0];
    let mut states = vec![rho.clone()];
    for k in 1..=grid.steps {
        let (next, end) =
            rk4_step(model, &rho, &gen, h, cond_threshold).map_err(|s| Error::SingularMap {
                t: s.t_singular,
                condition_number: s.condition_number,
            })?;
        rho = next;
        gen = end;
        gen.t = grid.time(k);
        times.push(gen.t);
        states.push(rho.clone());
    }
    Ok(Trajectory { times, states })
}

/// Like [`integrate_master_equation`], but steps across singular times.
///
/// A step that meets a singularity is not integrated; the state at its end
/// is taken from the linear map `Ψ_t[ρ_0]` and integration resumes from
/// there. Consecutive flagged steps are merged into one interval.
pub fn integrate_master_equation_skipping(
    model: &TotalModel,
    rho0: &Operator,
    grid: TimeGrid,
    cond_threshold: f64,
) -> Result<SegmentedTrajectory> {
    let h = grid.step();
    let mut gen = Some(assemble_generator(model, 0.0, cond_threshold, false)?);
    let mut rho = rho0.clone();
    let mut times = vec![0.0];
    let mut states = vec![rho.clone()];
    let mut singular: Vec<SingularInterval> = Vec::new();
    for k in 1..=grid.steps {
        let (t_prev, t) = (grid.time(k - 1), grid.time(k));
        let outcome = match &gen {
            Some(g) => rk4_step(model, &rho, g, h, cond_threshold),
            None => Err(SingularInterval {
                t_start: t_prev,
                t_end: t,
                t_singular: t_prev,
                condition_number: f64::INFINITY,
            }),
        };
        match outcome {
            Ok((next, mut end)) => {
                end.t = t;
                rho = next;
                gen = Some(end);
            }
            Err(interval) => {
                match singular.last_mut() {
                    Some(last) if last.t_end >= interval.t_start - 0.5 * h => {
                        last.t_end = interval.t_end;
                        if interval.condition_number.is_infinite() && gen.is_some() {
                            last.t_singular = interval.t_singular;
                        }
                        last.condition_number =
                            last.condition_number.max(interval.condition_number);
                    }
                    _ => singular.push(interval),
                }
                rho = model.linear_map(t).psi.apply(rho0);
                gen = assemble_generator(model, t, cond_threshold, false).ok();
            }
        }
        times.push(t);
        states.push(rho.clone());
    }
    Ok(SegmentedTrajectory {
        trajectory: Trajectory { times, states },
        singular,
    })
}

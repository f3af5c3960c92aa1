//! Random operators and states for sampling and tests.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal, UnitBall};

use crate::dynamics::AssignmentContext;
use crate::operator::{pauli, Operator};
use crate::tolerance::Tolerances;
use crate::C64;

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Complex Ginibre matrix.
pub fn random_operator(d: usize, rng: &mut impl Rng) -> Operator {
    Operator::from_square(DMatrix::from_fn(d, d, |_, _| gaussian(rng)))
}

pub fn random_hermitian(d: usize, rng: &mut impl Rng) -> Operator {
    random_operator(d, rng).hermitian_part()
}

/// Random density operator `G G† / Tr{G G†}` with `G` complex Gaussian.
pub fn random_state(d: usize, rng: &mut impl Rng) -> Operator {
    let g = random_operator(d, rng);
    let w = &g * &g.dagger();
    let tr = w.trace().re;
    w.scale_real(1.0 / tr)
}

/// Random operator with trace one (not necessarily positive).
pub fn random_trace_one(d: usize, rng: &mut impl Rng) -> Operator {
    let x = random_operator(d, rng);
    let shift = (C64::new(1.0, 0.0) - x.trace()) / d as f64;
    &x + &Operator::identity(d).scale(shift)
}

/// Uniform sample from the unit Bloch ball.
pub fn random_bloch_vector(rng: &mut impl Rng) -> [f64; 3] {
    UnitBall.sample(rng)
}

/// `(I + v·σ)/2`.
pub fn state_from_bloch(v: [f64; 3]) -> Operator {
    let sum = &(&pauli::x().scale_real(v[0]) + &pauli::y().scale_real(v[1]))
        + &pauli::z().scale_real(v[2]);
    (&pauli::identity() + &sum).scale_real(0.5)
}

/// Bloch vector `(Tr{ρσ_x}, Tr{ρσ_y}, Tr{ρσ_z})` of a qubit operator.
pub fn bloch_vector(rho: &Operator) -> [f64; 3] {
    let comp = |p: Operator| (&p * rho).trace().re;
    [comp(pauli::x()), comp(pauli::y()), comp(pauli::z())]
}

/// Rejection-samples a state in the physical domain of `ctx`.
///
/// Qubits are drawn uniformly from the Bloch ball, larger systems from the
/// normalized Wishart ensemble. Returns `None` after `max_tries` rejections.
pub fn random_physical_state(
    ctx: &AssignmentContext,
    tol: &Tolerances,
    max_tries: usize,
    rng: &mut impl Rng,
) -> Option<Operator> {
    for _ in 0..max_tries {
        let candidate = if ctx.d_s() == 2 {
            state_from_bloch(random_bloch_vector(rng))
        } else {
            random_state(ctx.d_s(), rng)
        };
        if let Ok(check) = ctx.in_physical_domain(&candidate, tol) {
            if check.inside {
                return Some(candidate);
            }
        }
    }
    None
}

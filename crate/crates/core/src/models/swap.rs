//! Two qubits coupled by a swap gate, the first qubit being the system.
//!
//! The reference total state is `p |0⟩⟨0| ⊗ ρ_0 + (1-p) |1⟩⟨1| ⊗ ρ_1` with
//! `ρ_0 = (I - σ_x/2)/2` and `ρ_1 = (I + σ_x/2)/2`. The Hamiltonian
//! `½(I + σ_x⊗σ_x + σ_y⊗σ_y + σ_z⊗σ_z)` is taken in units of angular
//! frequency one.

use crate::dynamics::{decompose_total, TotalModel};
use crate::error::{Error, Result};
use crate::operator::{pauli, tensor, Operator};
use crate::tolerance::Tolerances;
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapParams {
    p: f64,
}

impl SwapParams {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!(
                "swap weight p must lie in (0, 1), got {p}"
            )));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

pub fn swap_hamiltonian() -> Operator {
    let sum = &(&tensor(&pauli::x(), &pauli::x()) + &tensor(&pauli::y(), &pauli::y()))
        + &tensor(&pauli::z(), &pauli::z());
    (&Operator::identity(4) + &sum).scale_real(0.5)
}

/// Environment states `(ρ_0, ρ_1)` paired with the system projectors.
pub fn swap_environment_states() -> (Operator, Operator) {
    let half_x = pauli::x().scale_real(0.5);
    let id = Operator::identity(2);
    (
        (&id - &half_x).scale_real(0.5),
        (&id + &half_x).scale_real(0.5),
    )
}

pub fn swap_reference_state(params: SwapParams) -> Operator {
    let (rho0, rho1) = swap_environment_states();
    let p = params.p;
    &tensor(&Operator::unit(2, 0, 0), &rho0).scale_real(p)
        + &tensor(&Operator::unit(2, 1, 1), &rho1).scale_real(1.0 - p)
}

/// The swap scenario and its reference reduced state `diag(p, 1-p)`.
pub fn swap_model(params: SwapParams, tol: Tolerances) -> Result<(TotalModel, Operator)> {
    let (rho_s, ctx) = decompose_total(&swap_reference_state(params), 2, 2, &tol)?;
    Ok((TotalModel::new(ctx, swap_hamiltonian(), tol)?, rho_s))
}

fn state_from_entries(rho00: f64, rho01: C64) -> Operator {
    Operator::from_rows(&[
        vec![C64::new(rho00, 0.0), rho01],
        vec![rho01.conj(), C64::new(1.0 - rho00, 0.0)],
    ])
    .expect("2x2 rows")
}

/// Closed-form correlated map of the swap scenario at weight `p`, applied to
/// a trace-one Hermitian `ρ_S(0)`.
///
/// ```text
/// ρ00(t) = ½ s² + c² ρ00 + ½ s c (2p-1) Im ρ01
/// ρ01(t) = ¼(s² - i s c) - ½ s² p + (i/2) s c (2p-1)(p - ρ00) + c² ρ01
/// ```
/// with `s = sin t`, `c = cos t`.
pub fn swap_correlated_map_closed_form(p: f64, t: f64, rho0: &Operator) -> Operator {
    let (s, c) = t.sin_cos();
    let r00 = rho0.get(0, 0).re;
    let r01 = rho0.get(0, 1);
    let q = 2.0 * p - 1.0;
    let rho00 = 0.5 * s * s + c * c * r00 + 0.5 * s * c * q * r01.im;
    let rho01 = C64::new(0.25 * s * s - 0.5 * s * s * p, -0.25 * s * c)
        + C64::new(0.0, 0.5 * s * c * q * (p - r00))
        + r01 * (c * c);
    state_from_entries(rho00, rho01)
}

/// The `p`-independent map obtained for zero-discord initial states with the
/// same projectors and environment states. It is a comparison fixture only.
///
/// ```text
/// ρ00(t) = ½ s² + c² ρ00
/// ρ01(t) = ¼(s² - i s c) - ½ s² ρ00 + (√3/2) c² ρ01
/// ```
pub fn swap_zero_discord_map(t: f64, rho0: &Operator) -> Operator {
    let (s, c) = t.sin_cos();
    let r00 = rho0.get(0, 0).re;
    let r01 = rho0.get(0, 1);
    let rho00 = 0.5 * s * s + c * c * r00;
    let rho01 =
        C64::new(0.25 * s * s - 0.5 * s * s * r00, -0.25 * s * c) + r01 * (0.75f64.sqrt() * c * c);
    state_from_entries(rho00, rho01)
}

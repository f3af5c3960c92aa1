use log::warn;
use nalgebra::DMatrix;

use crate::dynamics::{AssignmentContext, MapSnapshot};
use crate::error::{Error, Result};
use crate::operator::{eig_hermitian, partial_trace_env, tensor, HermitianEigen, Operator};
use crate::superop::{vectorize, SuperOperatorMatrix};
use crate::tolerance::Tolerances;
use crate::C64;

/// `U_t = V e^{-iΛt} V†` from the spectral decomposition of `H`.
pub fn propagator(h: &Operator, t: f64, herm_tol: f64) -> Result<Operator> {
    Ok(unitary(&eig_hermitian(h, herm_tol)?, t))
}

fn unitary(spectrum: &HermitianEigen, t: f64) -> Operator {
    spectrum.map_spectrum(|e| C64::from_polar(1.0, -e * t))
}

/// A closed total system: assignment context plus a time-independent
/// Hamiltonian on `H_S ⊗ H_E`.
///
/// The Hamiltonian spectrum is computed once at construction and reused for
/// every propagator.
#[derive(Debug, Clone)]
pub struct TotalModel {
    context: AssignmentContext,
    hamiltonian: Operator,
    spectrum: HermitianEigen,
    tolerances: Tolerances,
}

/// Total-space operators evolved to time `t`: `U_t (E_ij ⊗ ρ_E) U_t†` for
/// every matrix unit (index `i·d_S + j`) and `U_t χ U_t†`.
pub(crate) struct EvolvedPieces {
    pub units: Vec<Operator>,
    pub chi: Operator,
}

impl TotalModel {
    pub fn new(
        context: AssignmentContext,
        hamiltonian: Operator,
        tolerances: Tolerances,
    ) -> Result<Self> {
        let d = context.d_s() * context.d_e();
        if hamiltonian.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: hamiltonian.dim(),
            });
        }
        let spectrum = eig_hermitian(&hamiltonian, tolerances.herm)?;
        Ok(Self {
            context,
            hamiltonian,
            spectrum,
            tolerances,
        })
    }

    pub fn context(&self) -> &AssignmentContext {
        &self.context
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    pub fn d_s(&self) -> usize {
        self.context.d_s()
    }

    pub fn d_e(&self) -> usize {
        self.context.d_e()
    }

    pub fn with_tolerances(mut self, tolerances: Tolerances) -> Self {
        self.tolerances = tolerances;
        self
    }

    /// The same model with `χ = 0`.
    pub fn without_correlations(&self) -> Self {
        Self {
            context: self.context.without_correlations(),
            ..self.clone()
        }
    }

    pub fn propagator(&self, t: f64) -> Operator {
        unitary(&self.spectrum, t)
    }

    fn trace_env(&self, m: &Operator) -> Operator {
        partial_trace_env(m, self.d_s(), self.d_e())
            .expect("total-space operator has model dimensions")
    }

    /// Exact reduced state `Tr_E{U_t (ρ_S ⊗ ρ_E + χ) U_t†}`.
    ///
    /// States outside the physical domain are evaluated anyway, with a
    /// warning.
    pub fn reduced_exact(&self, rho_s0: &Operator, t: f64) -> Result<Operator> {
        let total = self.context.assign(rho_s0)?;
        if let Ok(check) = self.context.in_physical_domain(rho_s0, &self.tolerances) {
            if !check.inside {
                warn!(
                    "initial state outside the physical domain (min eigenvalue {:e})",
                    check.min_eigenvalue
                );
            }
        }
        let u = self.propagator(t);
        Ok(self.trace_env(&u.sandwich(&total)))
    }

    pub(crate) fn evolved_pieces(&self, t: f64) -> EvolvedPieces {
        let d = self.d_s();
        let u = self.propagator(t);
        let mut units = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let total = tensor(&Operator::unit(d, i, j), self.context.rho_e());
                units.push(u.sandwich(&total));
            }
        }
        let chi = u.sandwich(self.context.chi());
        EvolvedPieces { units, chi }
    }

    pub(crate) fn map_from_pieces(&self, pieces: &[Operator]) -> SuperOperatorMatrix {
        let d = self.d_s();
        let mut m = DMatrix::zeros(d * d, d * d);
        for (k, piece) in pieces.iter().enumerate() {
            m.set_column(k, &vectorize(&self.trace_env(piece)));
        }
        SuperOperatorMatrix::from_parts(d, m)
    }

    pub(crate) fn reduce(&self, total: &Operator) -> Operator {
        self.trace_env(total)
    }

    /// `Φ_t[X] = Tr_E{U_t (X ⊗ ρ_E) U_t†}`.
    pub fn uncorrelated_map(&self, t: f64) -> SuperOperatorMatrix {
        let pieces = self.evolved_pieces(t);
        self.map_from_pieces(&pieces.units)
    }

    /// `I_t = Tr_E{U_t χ U_t†}`.
    pub fn inhomogeneity(&self, t: f64) -> Operator {
        let u = self.propagator(t);
        self.trace_env(&u.sandwich(self.context.chi()))
    }

    /// `Φ_t`, `I_t` and `Ψ_t = Φ_t + vec(I_t) vec(I)†` at time `t`.
    pub fn linear_map(&self, t: f64) -> MapSnapshot {
        let pieces = self.evolved_pieces(t);
        let phi = self.map_from_pieces(&pieces.units);
        let inhomogeneity = self.trace_env(&pieces.chi);
        MapSnapshot::new(t, phi, inhomogeneity)
    }
}

use crate::error::{Error, Result};
use crate::operator::{partial_trace_env, partial_trace_sys, tensor, Operator};
use crate::tolerance::Tolerances;

/// The fixed environment state and correlation operator that define a
/// correlated-initial-state scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentContext {
    d_s: usize,
    d_e: usize,
    rho_e: Operator,
    chi: Operator,
}

/// Result of a physical-domain membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainCheck {
    pub inside: bool,
    /// Smallest eigenvalue of `ρ_S ⊗ ρ_E + χ`.
    pub min_eigenvalue: f64,
}

impl AssignmentContext {
    /// Validates that `rho_e` is a state and that `chi` is Hermitian with
    /// vanishing partial traces.
    pub fn new(d_s: usize, rho_e: Operator, chi: Operator, tol: &Tolerances) -> Result<Self> {
        if d_s == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let d_e = rho_e.dim();
        rho_e.ensure_state(tol)?;
        if chi.dim() != d_s * d_e {
            return Err(Error::DimensionMismatch {
                expected: d_s * d_e,
                found: chi.dim(),
            });
        }
        chi.ensure_hermitian(tol.herm)?;
        let env = partial_trace_env(&chi, d_s, d_e)?.max_abs();
        let sys = partial_trace_sys(&chi, d_s, d_e)?.max_abs();
        if env > tol.trace || sys > tol.trace {
            return Err(Error::InvalidParams(format!(
                "correlation operator has nonzero partial traces (Tr_E: {env:e}, Tr_S: {sys:e})"
            )));
        }
        Ok(Self {
            d_s,
            d_e,
            rho_e,
            chi,
        })
    }

    /// Context with `χ = 0`.
    pub fn uncorrelated(d_s: usize, rho_e: Operator, tol: &Tolerances) -> Result<Self> {
        let d = d_s * rho_e.dim();
        Self::new(d_s, rho_e, Operator::zeros(d), tol)
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn d_e(&self) -> usize {
        self.d_e
    }

    pub fn rho_e(&self) -> &Operator {
        &self.rho_e
    }

    pub fn chi(&self) -> &Operator {
        &self.chi
    }

    /// Same `ρ_E`, with `χ` dropped.
    pub fn without_correlations(&self) -> Self {
        Self {
            chi: Operator::zeros(self.chi.dim()),
            ..self.clone()
        }
    }

    /// The linear assignment `X ↦ X ⊗ ρ_E + χ Tr{X}`.
    pub fn assign(&self, x: &Operator) -> Result<Operator> {
        if x.dim() != self.d_s {
            return Err(Error::DimensionMismatch {
                expected: self.d_s,
                found: x.dim(),
            });
        }
        Ok(&tensor(x, &self.rho_e) + &self.chi.scale(x.trace()))
    }

    /// Whether `ρ_S ⊗ ρ_E + χ ≥ -tol.psd`.
    pub fn in_physical_domain(&self, rho_s: &Operator, tol: &Tolerances) -> Result<DomainCheck> {
        if rho_s.dim() != self.d_s {
            return Err(Error::DimensionMismatch {
                expected: self.d_s,
                found: rho_s.dim(),
            });
        }
        rho_s.ensure_state(tol)?;
        let min_eigenvalue = self.assign(rho_s)?.min_eigenvalue()?;
        Ok(DomainCheck {
            inside: min_eigenvalue >= -tol.psd,
            min_eigenvalue,
        })
    }
}

/// Splits a total state into `ρ_S`, `ρ_E` and `χ = ρ_SE - ρ_S ⊗ ρ_E`.
pub fn decompose_total(
    rho_se: &Operator,
    d_s: usize,
    d_e: usize,
    tol: &Tolerances,
) -> Result<(Operator, AssignmentContext)> {
    rho_se.ensure_state(tol)?;
    let rho_s = partial_trace_env(rho_se, d_s, d_e)?;
    let rho_e = partial_trace_sys(rho_se, d_s, d_e)?;
    let chi = (rho_se - &tensor(&rho_s, &rho_e)).hermitian_part();
    let ctx = AssignmentContext::new(d_s, rho_e, chi, tol)?;
    Ok((rho_s, ctx))
}

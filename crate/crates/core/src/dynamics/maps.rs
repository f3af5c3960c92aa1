use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::superop::{vectorize, SuperOperatorMatrix};
use crate::C64;

/// The dynamical maps of a correlated scenario at one time.
#[derive(Debug, Clone)]
pub struct MapSnapshot {
    pub t: f64,
    /// `Φ_t`, the CPT map of the uncorrelated scenario.
    pub phi: SuperOperatorMatrix,
    /// `I_t = Tr_E{U_t χ U_t†}`, traceless and Hermitian.
    pub inhomogeneity: Operator,
    /// `Ψ_t = Φ_t + vec(I_t) vec(I)†`.
    pub psi: SuperOperatorMatrix,
}

impl MapSnapshot {
    pub fn new(t: f64, phi: SuperOperatorMatrix, inhomogeneity: Operator) -> Self {
        let psi = &phi + &SuperOperatorMatrix::trace_offset(&inhomogeneity);
        Self {
            t,
            phi,
            inhomogeneity,
            psi,
        }
    }

    /// `Φ_t[X] + I_t`, the affine map on trace-one operators.
    pub fn apply_affine(&self, x: &Operator) -> Operator {
        &self.phi.apply(x) + &self.inhomogeneity
    }
}

/// Ratio of the extreme singular values; infinite for an exactly singular
/// matrix.
pub fn condition_number(m: &DMatrix<C64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Inverses of `Φ_t` and `Ψ_t` computed from one LU factorization of `Φ_t`.
#[derive(Debug, Clone)]
pub struct MapInverse {
    pub phi_inv: SuperOperatorMatrix,
    pub psi_inv: SuperOperatorMatrix,
    pub condition_number: f64,
    /// `det Φ_t`; real up to rounding for Hermiticity-preserving maps.
    pub determinant: C64,
}

impl MapInverse {
    /// `(Ψ_t)^{-1}[X] = Φ_t^{-1}[X] - Φ_t^{-1}[I_t] Tr{X}`.
    pub fn of(snapshot: &MapSnapshot, cond_threshold: f64) -> Result<Self> {
        let phi = snapshot.phi.matrix();
        let condition_number = condition_number(phi);
        if condition_number.is_nan() || condition_number > cond_threshold {
            return Err(Error::SingularMap {
                t: snapshot.t,
                condition_number,
            });
        }
        let d = snapshot.phi.dim();
        let big = d * d;
        let lu = phi.clone().lu();
        let determinant = lu.determinant();
        let singular = || Error::SingularMap {
            t: snapshot.t,
            condition_number,
        };
        let phi_inv = lu
            .solve(&DMatrix::identity(big, big))
            .ok_or_else(singular)?;
        let shifted: DVector<C64> = lu
            .solve(&vectorize(&snapshot.inhomogeneity))
            .ok_or_else(singular)?;
        let id = vectorize(&Operator::identity(d));
        let psi_inv = &phi_inv - shifted * id.adjoint();
        Ok(Self {
            phi_inv: SuperOperatorMatrix::from_parts(d, phi_inv),
            psi_inv: SuperOperatorMatrix::from_parts(d, psi_inv),
            condition_number,
            determinant,
        })
    }
}

/// `(Ψ_t)^{-1}`; fails with `SingularMap` when the condition number of `Φ_t`
/// exceeds `cond_threshold`.
pub fn inverse_map(snapshot: &MapSnapshot, cond_threshold: f64) -> Result<SuperOperatorMatrix> {
    Ok(MapInverse::of(snapshot, cond_threshold)?.psi_inv)
}

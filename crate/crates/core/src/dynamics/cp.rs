use nalgebra::DMatrix;

use crate::basis::hermitian_basis;
use crate::error::Result;
use crate::operator::{eig_hermitian_unchecked, Operator};
use crate::superop::{vectorize, SuperOperatorMatrix};
use crate::C64;

/// Complete-positivity diagnostics of a Hermiticity-preserving map.
#[derive(Debug, Clone)]
pub struct CpDiagnostics {
    pub min_choi_eigenvalue: f64,
    pub min_epsilon_eigenvalue: f64,
    /// Ascending.
    pub choi_spectrum: Vec<f64>,
    /// Ascending.
    pub epsilon_spectrum: Vec<f64>,
}

impl CpDiagnostics {
    pub fn is_cp(&self, psd_tol: f64) -> bool {
        self.min_choi_eigenvalue >= -psd_tol
    }

    /// Largest elementwise difference between the two sorted spectra.
    pub fn spectral_mismatch(&self) -> f64 {
        self.choi_spectrum
            .iter()
            .zip(&self.epsilon_spectrum)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// The coefficient matrix `ε` of `M[X] = Σ ε_kk' G_k X G_k'†` in the
/// generalized Gell-Mann basis.
///
/// `M` has Choi matrix `Σ ε_kk' vec(G_kᵀ) vec(G_k'ᵀ)†`, so
/// `ε = W† C W` with `W` the unitary whose columns are `vec(G_kᵀ)`.
pub fn epsilon_matrix(m: &SuperOperatorMatrix) -> Result<DMatrix<C64>> {
    let d = m.dim();
    let basis = hermitian_basis(d)?;
    let mut w = DMatrix::zeros(d * d, d * d);
    for (k, g) in basis.elements().iter().enumerate() {
        w.set_column(k, &vectorize(&g.transpose()));
    }
    Ok(w.adjoint() * m.choi().matrix() * w)
}

/// Smallest eigenvalues of the Choi matrix and of the `ε` matrix of `M`.
///
/// The two matrices are unitarily equivalent, so the spectra agree; both are
/// reported as a consistency check.
pub fn cp_check(m: &SuperOperatorMatrix) -> Result<CpDiagnostics> {
    let choi = eig_hermitian_unchecked(&m.choi().as_operator())?;
    let eps = eig_hermitian_unchecked(&Operator::new(epsilon_matrix(m)?)?)?;
    Ok(CpDiagnostics {
        min_choi_eigenvalue: choi.values[0],
        min_epsilon_eigenvalue: eps.values[0],
        choi_spectrum: choi.values,
        epsilon_spectrum: eps.values,
    })
}

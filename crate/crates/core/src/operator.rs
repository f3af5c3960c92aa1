//! Dense complex operators on finite-dimensional Hilbert spaces.

use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;
use crate::C64;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// A square complex matrix acting on a `dim`-dimensional Hilbert space.
///
/// Hamiltonians are in angular-frequency units (ħ = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(DMatrix<C64>);

impl Operator {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        if matrix.nrows() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Ok(Self(matrix))
    }

    /// Wraps a matrix already known to be square.
    pub(crate) fn from_square(matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), matrix.ncols());
        Self(matrix)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| C64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        Self(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    /// The matrix unit `|i⟩⟨j|`.
    pub fn unit(dim: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(i, j)] = C64::new(1.0, 0.0);
        Self(m)
    }

    /// `|psi⟩⟨phi|`.
    pub fn outer(psi: &DVector<C64>, phi: &DVector<C64>) -> Self {
        Self(psi * phi.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    /// Max elementwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        Self(&self.0 * C64::new(factor, 0.0))
    }

    /// `max |A - A†|` elementwise.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn ensure_hermitian(&self, tol: f64) -> Result<()> {
        let err = self.hermiticity_error();
        if err <= tol {
            Ok(())
        } else {
            Err(Error::NotHermitian(err))
        }
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0))
    }

    /// Checks the density-operator invariants: Hermitian, unit trace,
    /// positive semidefinite.
    pub fn ensure_state(&self, tol: &Tolerances) -> Result<()> {
        let herm = self.hermiticity_error();
        if herm > tol.herm {
            return Err(Error::NotAState(format!("not Hermitian (error {herm:e})")));
        }
        let tr = self.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol.trace {
            return Err(Error::NotAState(format!("trace is {tr}")));
        }
        let min = self.hermitian_part().min_eigenvalue()?;
        if min < -tol.psd {
            return Err(Error::NotAState(format!("min eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Smallest eigenvalue of a Hermitian operator.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(eig_hermitian_unchecked(self)?.values[0])
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn anticommutator(&self, other: &Operator) -> Self {
        Self(&self.0 * &other.0 + &other.0 * &self.0)
    }

    /// `A X A†`.
    pub fn sandwich(&self, x: &Operator) -> Self {
        Self(&self.0 * &x.0 * self.0.adjoint())
    }

    /// Hilbert-Schmidt inner product `Tr{A† B}`.
    pub fn hs_inner(&self, other: &Operator) -> C64 {
        self.0.dotc(&other.0)
    }

    fn check_same_dim(&self, other: &Operator) {
        assert_eq!(
            self.dim(),
            other.dim(),
            "operator dimensions differ: {} vs {}",
            self.dim(),
            other.dim()
        );
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.check_same_dim(rhs);
        Operator(&self.0 + &rhs.0)
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.check_same_dim(rhs);
        Operator(&self.0 - &rhs.0)
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl AddAssign<&Operator> for Operator {
    fn add_assign(&mut self, rhs: &Operator) {
        self.check_same_dim(rhs);
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Operator> for Operator {
    fn sub_assign(&mut self, rhs: &Operator) {
        self.check_same_dim(rhs);
        self.0 -= &rhs.0;
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.check_same_dim(rhs);
        Operator(&self.0 * &rhs.0)
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        &self * &rhs
    }
}

impl Mul<C64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: C64) -> Operator {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: f64) -> Operator {
        self.scale_real(rhs)
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator(-&self.0)
    }
}

/// Kronecker product; entry `(i·d_B + k, j·d_B + l)` is `A_ij B_kl`.
pub fn tensor(a: &Operator, b: &Operator) -> Operator {
    Operator(a.0.kronecker(&b.0))
}

fn check_bipartite(m: &Operator, d_s: usize, d_e: usize) -> Result<()> {
    if d_s == 0 || d_e == 0 {
        return Err(Error::InvalidDimension(0));
    }
    if m.dim() != d_s * d_e {
        return Err(Error::DimensionMismatch {
            expected: d_s * d_e,
            found: m.dim(),
        });
    }
    Ok(())
}

/// `Tr_E M` for `M` on `H_S ⊗ H_E`: `(Tr_E M)_ij = Σ_k M_(i,k),(j,k)`.
pub fn partial_trace_env(m: &Operator, d_s: usize, d_e: usize) -> Result<Operator> {
    check_bipartite(m, d_s, d_e)?;
    let out = DMatrix::from_fn(d_s, d_s, |i, j| {
        (0..d_e).map(|k| m.0[(i * d_e + k, j * d_e + k)]).sum()
    });
    Ok(Operator(out))
}

/// `Tr_S M` for `M` on `H_S ⊗ H_E`: `(Tr_S M)_kl = Σ_i M_(i,k),(i,l)`.
pub fn partial_trace_sys(m: &Operator, d_s: usize, d_e: usize) -> Result<Operator> {
    check_bipartite(m, d_s, d_e)?;
    let out = DMatrix::from_fn(d_e, d_e, |k, l| {
        (0..d_s).map(|i| m.0[(i * d_e + k, i * d_e + l)]).sum()
    });
    Ok(Operator(out))
}

/// Spectral decomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: DMatrix<C64>,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.vectors.column(k).into_owned()
    }

    /// `V f(Λ) V†`.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> C64) -> Operator {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for r in 0..n {
                scaled[(r, k)] *= w;
            }
        }
        Operator(scaled * self.vectors.adjoint())
    }
}

/// Eigendecomposition `A = V diag(λ) V†` with ascending real eigenvalues.
pub fn eig_hermitian(a: &Operator, herm_tol: f64) -> Result<HermitianEigen> {
    a.ensure_hermitian(herm_tol)?;
    eig_hermitian_unchecked(a)
}

/// Like [`eig_hermitian`] but symmetrizes instead of validating.
pub(crate) fn eig_hermitian_unchecked(a: &Operator) -> Result<HermitianEigen> {
    if a.0.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::EigenFailure);
    }
    let herm = a.hermitian_part();
    let eig =
        SymmetricEigen::try_new(herm.0, EIGEN_EPS, EIGEN_MAX_ITER).ok_or(Error::EigenFailure)?;
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Pauli matrices and qubit ladder operators in the basis `{|0⟩, |1⟩}`,
/// with `σ_z = |0⟩⟨0| - |1⟩⟨1|`.
pub mod pauli {
    use super::Operator;
    use crate::C64;
    use nalgebra::DMatrix;

    fn from(entries: [[C64; 2]; 2]) -> Operator {
        Operator::from_square(DMatrix::from_fn(2, 2, |i, j| entries[i][j]))
    }

    const O: C64 = C64::new(0.0, 0.0);
    const ONE: C64 = C64::new(1.0, 0.0);
    const I: C64 = C64::new(0.0, 1.0);

    pub fn identity() -> Operator {
        Operator::identity(2)
    }

    pub fn x() -> Operator {
        from([[O, ONE], [ONE, O]])
    }

    pub fn y() -> Operator {
        from([[O, -I], [I, O]])
    }

    pub fn z() -> Operator {
        from([[ONE, O], [O, -ONE]])
    }

    /// `σ_+ = |0⟩⟨1|`, raising `|1⟩ -> |0⟩`.
    pub fn plus() -> Operator {
        from([[O, ONE], [O, O]])
    }

    /// `σ_- = |1⟩⟨0|`.
    pub fn minus() -> Operator {
        from([[O, O], [ONE, O]])
    }
}

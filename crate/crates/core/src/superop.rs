//! Vectorization, superoperator matrices and Choi matrices.
//!
//! Operators are vectorized by row-major stacking: component `i·d + j` holds
//! `X_ij`. With this convention `Tr{X} = ⟨vec(I), vec(X)⟩` and the map
//! `X ↦ A X B` has matrix `A ⊗ Bᵀ`.

use std::ops::{Add, Sub};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::C64;

pub fn vectorize(x: &Operator) -> DVector<C64> {
    let d = x.dim();
    DVector::from_fn(d * d, |k, _| x.get(k / d, k % d))
}

/// Inverse of [`vectorize`]; the length must be a perfect square.
pub fn devectorize(v: &DVector<C64>) -> Result<Operator> {
    let n = v.len();
    let d = (n as f64).sqrt().round() as usize;
    if d == 0 || d * d != n {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: n,
        });
    }
    Operator::new(DMatrix::from_fn(d, d, |i, j| v[i * d + j]))
}

fn devectorize_dim(v: &DVector<C64>, d: usize) -> Operator {
    Operator::from_square(DMatrix::from_fn(d, d, |i, j| v[i * d + j]))
}

/// A linear map on operators of dimension `dim`, as a `dim² × dim²` matrix
/// acting on row-major vectorized operators.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOperatorMatrix {
    dim: usize,
    matrix: DMatrix<C64>,
}

impl SuperOperatorMatrix {
    pub fn new(dim: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let big = dim * dim;
        if dim == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if matrix.nrows() != big || matrix.ncols() != big {
            return Err(Error::DimensionMismatch {
                expected: big,
                found: if matrix.nrows() != big {
                    matrix.nrows()
                } else {
                    matrix.ncols()
                },
            });
        }
        Ok(Self { dim, matrix })
    }

    pub(crate) fn from_parts(dim: usize, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), dim * dim);
        Self { dim, matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_parts(dim, DMatrix::identity(dim * dim, dim * dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_parts(dim, DMatrix::zeros(dim * dim, dim * dim))
    }

    /// Matrix of a linear map given by its action; column `i·d + j` is
    /// `vec(f(|i⟩⟨j|))`.
    pub fn from_action(dim: usize, f: impl Fn(&Operator) -> Operator) -> Self {
        let big = dim * dim;
        let mut matrix = DMatrix::zeros(big, big);
        for i in 0..dim {
            for j in 0..dim {
                let image = f(&Operator::unit(dim, i, j));
                assert_eq!(image.dim(), dim, "action changed the operator dimension");
                matrix.set_column(i * dim + j, &vectorize(&image));
            }
        }
        Self::from_parts(dim, matrix)
    }

    /// `X ↦ A X B`.
    pub fn sandwich(a: &Operator, b: &Operator) -> Self {
        assert_eq!(a.dim(), b.dim());
        Self::from_parts(a.dim(), a.matrix().kronecker(&b.matrix().transpose()))
    }

    /// `X ↦ -i[H, X]`.
    pub fn hamiltonian(h: &Operator) -> Self {
        let d = h.dim();
        let id = DMatrix::<C64>::identity(d, d);
        let m = h.matrix().kronecker(&id) - id.kronecker(&h.matrix().transpose());
        Self::from_parts(d, m * C64::new(0.0, -1.0))
    }

    /// `X ↦ L X L† - ½{L†L, X}`.
    pub fn dissipator(l: &Operator) -> Self {
        let d = l.dim();
        let id = Operator::identity(d);
        let ldl = &l.dagger() * l;
        let half = C64::new(0.5, 0.0);
        let jump = Self::sandwich(l, &l.dagger());
        let left = Self::sandwich(&ldl, &id);
        let right = Self::sandwich(&id, &ldl);
        Self::from_parts(d, jump.matrix - (left.matrix + right.matrix) * half)
    }

    /// `X ↦ A Tr{B† X}`, i.e. the rank-one matrix `vec(A) vec(B)†`.
    pub fn rank_one(a: &Operator, b: &Operator) -> Self {
        assert_eq!(a.dim(), b.dim());
        Self::from_parts(a.dim(), vectorize(a) * vectorize(b).adjoint())
    }

    /// `X ↦ A Tr{X}`.
    pub fn trace_offset(a: &Operator) -> Self {
        Self::rank_one(a, &Operator::identity(a.dim()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn apply(&self, x: &Operator) -> Operator {
        assert_eq!(
            x.dim(),
            self.dim,
            "operator dimension does not match superoperator"
        );
        devectorize_dim(&(&self.matrix * vectorize(x)), self.dim)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperOperatorMatrix) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_parts(self.dim, &self.matrix * &other.matrix)
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::from_parts(self.dim, &self.matrix * factor)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `vec(I)† M`, the covector of `X ↦ Tr{M[X]}`.
    pub fn trace_row(&self) -> DVector<C64> {
        let id = vectorize(&Operator::identity(self.dim));
        (self.matrix.adjoint() * id).map(|z| z.conj())
    }

    /// `max |vec(I)† M - vec(I)†|`.
    pub fn trace_preservation_defect(&self) -> f64 {
        let id = vectorize(&Operator::identity(self.dim));
        (self.trace_row() - id)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// `max |vec(I)† M|`.
    pub fn trace_destruction_defect(&self) -> f64 {
        self.trace_row()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn choi(&self) -> ChoiMatrix {
        choi_from_superop(self)
    }

    /// Hermiticity preservation, via the Hermiticity of the Choi matrix.
    pub fn hermiticity_preservation_error(&self) -> f64 {
        self.choi().as_operator().hermiticity_error()
    }
}

impl Add for &SuperOperatorMatrix {
    type Output = SuperOperatorMatrix;
    fn add(self, rhs: &SuperOperatorMatrix) -> SuperOperatorMatrix {
        assert_eq!(self.dim, rhs.dim);
        SuperOperatorMatrix::from_parts(self.dim, &self.matrix + &rhs.matrix)
    }
}

impl Sub for &SuperOperatorMatrix {
    type Output = SuperOperatorMatrix;
    fn sub(self, rhs: &SuperOperatorMatrix) -> SuperOperatorMatrix {
        assert_eq!(self.dim, rhs.dim);
        SuperOperatorMatrix::from_parts(self.dim, &self.matrix - &rhs.matrix)
    }
}

/// `C = Σ_ij |i⟩⟨j| ⊗ M[|i⟩⟨j|]`, a `d² × d²` matrix on `H ⊗ H`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    dim: usize,
    matrix: DMatrix<C64>,
}

impl ChoiMatrix {
    pub fn new(dim: usize, matrix: DMatrix<C64>) -> Result<Self> {
        let big = dim * dim;
        if matrix.nrows() != big || matrix.ncols() != big {
            return Err(Error::DimensionMismatch {
                expected: big,
                found: matrix.nrows(),
            });
        }
        Ok(Self { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn as_operator(&self) -> Operator {
        Operator::from_square(self.matrix.clone())
    }
}

// C[(i,k),(j,l)] = M[E_ij]_kl = M[(k,l),(i,j)]: a pure index permutation.
fn permute(dim: usize, src: &DMatrix<C64>) -> DMatrix<C64> {
    let big = dim * dim;
    DMatrix::from_fn(big, big, |r, c| {
        let (i, k) = (r / dim, r % dim);
        let (j, l) = (c / dim, c % dim);
        src[(k * dim + l, i * dim + j)]
    })
}

pub fn choi_from_superop(m: &SuperOperatorMatrix) -> ChoiMatrix {
    ChoiMatrix {
        dim: m.dim,
        matrix: permute(m.dim, &m.matrix),
    }
}

pub fn superop_from_choi(c: &ChoiMatrix) -> SuperOperatorMatrix {
    let dim = c.dim;
    let big = dim * dim;
    let m = DMatrix::from_fn(big, big, |r, col| {
        let (k, l) = (r / dim, r % dim);
        let (i, j) = (col / dim, col % dim);
        c.matrix[(i * dim + k, j * dim + l)]
    });
    SuperOperatorMatrix::from_parts(dim, m)
}

/// The operator `A` whose map `X ↦ A X A†` has Choi matrix `v v†`.
///
/// For that map `C[(i,k),(j,l)] = A_ki conj(A_lj)`, so `v = vec(Aᵀ)`.
pub fn operator_from_choi_vector(v: &DVector<C64>, dim: usize) -> Operator {
    devectorize_dim(v, dim).transpose()
}

//! Hilbert-Schmidt orthonormal Hermitian operator bases.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::superop::vectorize;
use crate::C64;

/// Generalized Gell-Mann basis `G_0 = I/√d, G_1, ..., G_{d²-1}`.
///
/// Order after `G_0`: for each pair `i < j` the symmetric element
/// `(E_ij + E_ji)/√2` followed by the antisymmetric `-i(E_ij - E_ji)/√2`,
/// then the `d - 1` traceless diagonal elements. For `d = 2` this is
/// `{I, σ_x, σ_y, σ_z}/√2`.
#[derive(Debug, Clone)]
pub struct HermitianBasis {
    dim: usize,
    elements: Vec<Operator>,
}

impl HermitianBasis {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// The traceless part `G_1, ...`.
    pub fn traceless(&self) -> &[Operator] {
        &self.elements[1..]
    }

    /// Matrix whose columns are `vec(G_α)`.
    pub fn vectorized(&self) -> DMatrix<C64> {
        let big = self.dim * self.dim;
        let mut w = DMatrix::zeros(big, big);
        for (k, g) in self.elements.iter().enumerate() {
            w.set_column(k, &vectorize(g));
        }
        w
    }

    /// Gram matrix `Tr{G_α† G_β}`.
    pub fn gram(&self) -> DMatrix<C64> {
        let w = self.vectorized();
        w.adjoint() * w
    }

    /// Expansion coefficients `Tr{G_α X}` of an operator.
    pub fn coefficients(&self, x: &Operator) -> Vec<C64> {
        self.elements.iter().map(|g| g.hs_inner(x)).collect()
    }
}

pub fn hermitian_basis(d: usize) -> Result<HermitianBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let s = 1.0 / 2f64.sqrt();
    let mut elements = Vec::with_capacity(d * d);
    elements.push(Operator::identity(d).scale_real(1.0 / (d as f64).sqrt()));
    for i in 0..d {
        for j in (i + 1)..d {
            let sym = &Operator::unit(d, i, j) + &Operator::unit(d, j, i);
            elements.push(sym.scale_real(s));
            let anti = &Operator::unit(d, i, j) - &Operator::unit(d, j, i);
            elements.push(anti.scale(C64::new(0.0, -s)));
        }
    }
    for l in 1..d {
        let norm = 1.0 / ((l * (l + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        diag[..l].fill(norm);
        diag[l] = -(l as f64) * norm;
        elements.push(Operator::diagonal(&diag));
    }
    Ok(HermitianBasis { dim: d, elements })
}

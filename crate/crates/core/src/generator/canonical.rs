use std::cmp::Ordering;

use nalgebra::DMatrix;

use crate::basis::hermitian_basis;
use crate::dynamics::TotalModel;
use crate::error::{Error, Result};
use crate::generator::{generator, GeneratorSnapshot};
use crate::operator::{eig_hermitian_unchecked, Operator};
use crate::superop::{operator_from_choi_vector, vectorize, SuperOperatorMatrix};
use crate::tolerance::Tolerances;
use crate::C64;

/// Relative tolerance on the trace-destroying precondition and on the
/// reconstruction of the decomposed generator.
pub const CANONICAL_TOL: f64 = 1e-9;

/// Channels with `|rate|` below this are dropped.
const CHANNEL_CUTOFF: f64 = 1e-12;

/// One dissipative channel: a rate and a traceless, unit-norm Lindblad
/// operator.
#[derive(Debug, Clone)]
pub struct Channel {
    pub rate: f64,
    pub operator: Operator,
}

/// `X ↦ -i[K, X] + Σ_k λ_k (L_k X L_k† - ½{L_k† L_k, X})`.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    /// Traceless effective Hamiltonian.
    pub hamiltonian: Operator,
    /// Sorted by `|rate|` descending.
    pub channels: Vec<Channel>,
}

impl CanonicalForm {
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn to_superop(&self) -> SuperOperatorMatrix {
        let mut m = SuperOperatorMatrix::hamiltonian(&self.hamiltonian);
        for ch in &self.channels {
            m = &m + &SuperOperatorMatrix::dissipator(&ch.operator).scale(C64::new(ch.rate, 0.0));
        }
        m
    }

    pub fn apply(&self, x: &Operator) -> Operator {
        let mut out = self.hamiltonian.commutator(x).scale(C64::new(0.0, -1.0));
        for ch in &self.channels {
            let l = &ch.operator;
            let ldl = &l.dagger() * l;
            let d = &l.sandwich(x) - &ldl.anticommutator(x).scale_real(0.5);
            out += &d.scale_real(ch.rate);
        }
        out
    }

    /// Coefficient matrix `a_αβ = Σ_k λ_k Tr{F_α† L_k} conj(Tr{F_β† L_k})`
    /// of the dissipator in an orthonormal traceless operator basis `F`.
    pub fn coefficient_matrix(&self, basis: &[Operator]) -> DMatrix<C64> {
        let n = basis.len();
        let mut a = DMatrix::zeros(n, n);
        for ch in &self.channels {
            let c: Vec<C64> = basis.iter().map(|f| f.hs_inner(&ch.operator)).collect();
            for r in 0..n {
                for s in 0..n {
                    a[(r, s)] += c[r] * c[s].conj() * ch.rate;
                }
            }
        }
        a
    }
}

fn lexicographic(a: &Operator, b: &Operator) -> Ordering {
    for (x, y) in vectorize(a).iter().zip(vectorize(b).iter()) {
        match x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

// Fixes the arbitrary eigenvector phase: first non-negligible entry real
// positive.
fn fix_phase(op: Operator) -> Operator {
    let v = vectorize(&op);
    match v.iter().find(|z| z.norm() > 1e-12) {
        Some(z) => op.scale(z.conj() / z.norm()),
        None => op,
    }
}

/// Canonical form of a Hermiticity-preserving, trace-destroying generator.
///
/// The Choi eigendecomposition gives a pseudo-Kraus set `(g_i, G_i)`. Then
/// `K = (1/2id) Σ_i g_i (Tr{G_i} G_i† - conj(Tr{G_i}) G_i)`, and the
/// traceless parts `J_i = G_i - (Tr{G_i}/d) I` carry the dissipator
/// `Σ_i g_i D[J_i]`. Diagonalizing its coefficient matrix in an orthonormal
/// traceless basis yields unit-norm Lindblad operators and their rates.
pub fn canonical_decompose(m: &SuperOperatorMatrix, tol: &Tolerances) -> Result<CanonicalForm> {
    let d = m.dim();
    let scale = m.frobenius_norm().max(1.0);
    let defect = m.trace_destruction_defect();
    if defect > CANONICAL_TOL * scale {
        return Err(Error::NotTraceDestroying(defect));
    }
    let choi = m.choi().as_operator();
    let herm = choi.hermiticity_error();
    if herm > tol.herm.max(CANONICAL_TOL) * scale {
        return Err(Error::NotHermitian(herm));
    }
    let eig = eig_hermitian_unchecked(&choi)?;

    let id = Operator::identity(d);
    let dim = d as f64;
    let basis = hermitian_basis(d)?;
    let traceless = basis.traceless();
    let n = traceless.len();
    let mut k_acc = Operator::zeros(d);
    // Dissipator coefficients in the traceless basis, accumulated from the
    // pseudo-Kraus pairs and diagonalized below so that channels sharing a
    // direction merge.
    let mut coeff = DMatrix::<C64>::zeros(n, n);
    for (i, &g) in eig.values.iter().enumerate() {
        let big_g = operator_from_choi_vector(&eig.vector(i), d);
        let tr = big_g.trace();
        let term = &big_g.dagger().scale(tr) - &big_g.scale(tr.conj());
        k_acc += &term.scale_real(g);
        let j = &big_g - &id.scale(tr / dim);
        let c: Vec<C64> = traceless.iter().map(|f| f.hs_inner(&j)).collect();
        for r in 0..n {
            for s in 0..n {
                coeff[(r, s)] += c[r] * c[s].conj() * g;
            }
        }
    }
    let coeff_eig = eig_hermitian_unchecked(&Operator::from_square(coeff).hermitian_part())?;
    let mut channels = Vec::new();
    for (k, &rate) in coeff_eig.values.iter().enumerate() {
        if rate.abs() < CHANNEL_CUTOFF {
            continue;
        }
        let u = coeff_eig.vector(k);
        let mut op = Operator::zeros(d);
        for (a, f) in traceless.iter().enumerate() {
            op += &f.scale(u[a]);
        }
        channels.push(Channel {
            rate,
            operator: fix_phase(op),
        });
    }
    let hamiltonian = k_acc
        .scale(C64::new(0.0, -1.0 / (2.0 * dim)))
        .hermitian_part();
    channels.sort_by(|a, b| {
        b.rate
            .abs()
            .total_cmp(&a.rate.abs())
            .then_with(|| lexicographic(&a.operator, &b.operator))
    });
    let form = CanonicalForm {
        hamiltonian,
        channels,
    };
    let residual = (form.to_superop().matrix() - m.matrix()).norm();
    if residual > CANONICAL_TOL * scale {
        return Err(Error::ReconstructionFailure(residual));
    }
    Ok(form)
}

/// Canonical forms of `L_t`, of `J_t Tr{·}`, and of their sum `L^χ_t`.
#[derive(Debug, Clone)]
pub struct CorrelatedCanonical {
    pub generator: GeneratorSnapshot,
    pub uncorrelated: CanonicalForm,
    pub correlation: CanonicalForm,
    pub merged: CanonicalForm,
}

pub fn correlated_canonical(
    model: &TotalModel,
    t: f64,
    cond_threshold: f64,
) -> Result<CorrelatedCanonical> {
    let generator = generator(model, t, cond_threshold)?;
    let tol = model.tolerances();
    let uncorrelated = canonical_decompose(&generator.l, tol)?;
    let correlation = canonical_decompose(&generator.correlation_part(), tol)?;
    let merged = canonical_decompose(&generator.l_chi, tol)?;
    Ok(CorrelatedCanonical {
        generator,
        uncorrelated,
        correlation,
        merged,
    })
}

use crate::error::{Error, Result};
use crate::operator::{eig_hermitian, eig_hermitian_unchecked, Operator};
use crate::superop::{operator_from_choi_vector, SuperOperatorMatrix};
use crate::tolerance::Tolerances;
use crate::C64;

#[derive(Debug, Clone)]
pub struct KrausTerm {
    pub weight: f64,
    pub operator: Operator,
}

/// Operator-sum `X ↦ Σ_i f_i F_i X F_i†` with real, possibly negative
/// weights.
#[derive(Debug, Clone)]
pub struct PseudoKraus {
    pub dim: usize,
    pub terms: Vec<KrausTerm>,
}

impl PseudoKraus {
    pub fn apply(&self, x: &Operator) -> Operator {
        let mut out = Operator::zeros(self.dim);
        for term in &self.terms {
            out += &term.operator.sandwich(x).scale_real(term.weight);
        }
        out
    }

    /// `Σ_i f_i F_i† F_i`.
    pub fn weighted_completeness(&self) -> Operator {
        let mut out = Operator::zeros(self.dim);
        for term in &self.terms {
            out += &(&term.operator.dagger() * &term.operator).scale_real(term.weight);
        }
        out
    }

    pub fn to_superop(&self) -> SuperOperatorMatrix {
        let mut m = SuperOperatorMatrix::zeros(self.dim);
        for term in &self.terms {
            let s = SuperOperatorMatrix::sandwich(&term.operator, &term.operator.dagger());
            m = &m + &s.scale(C64::new(term.weight, 0.0));
        }
        m
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Pseudo-Kraus form of `X ↦ I_t Tr{X}` from the spectrum
/// `I_t = Σ_j a_j |φ_j⟩⟨φ_j|`: all pairs `(a_j, |φ_j⟩⟨φ_j'|)`.
///
/// `Σ f F†F = (Σ_j a_j) I = 0` because `I_t` is traceless.
pub fn pseudo_kraus_inhomogeneity(
    inhomogeneity: &Operator,
    tol: &Tolerances,
) -> Result<PseudoKraus> {
    let tr = inhomogeneity.trace().norm();
    let eig = eig_hermitian(inhomogeneity, tol.herm)?;
    if tr > tol.trace {
        return Err(Error::NotTraceless(tr));
    }
    let d = inhomogeneity.dim();
    let mut terms = Vec::with_capacity(d * d);
    for j in 0..d {
        let phi_j = eig.vector(j);
        for jp in 0..d {
            terms.push(KrausTerm {
                weight: eig.values[j],
                operator: Operator::outer(&phi_j, &eig.vector(jp)),
            });
        }
    }
    Ok(PseudoKraus { dim: d, terms })
}

/// Kraus operators `Ω_i = √c_i · A(v_i)` of a completely positive map from
/// the eigendecomposition of its Choi matrix.
pub fn kraus_uncorrelated(phi: &SuperOperatorMatrix, tol: &Tolerances) -> Result<PseudoKraus> {
    let d = phi.dim();
    let eig = eig_hermitian_unchecked(&phi.choi().as_operator())?;
    let min = eig.values[0];
    if min < -tol.psd {
        return Err(Error::NotCP(min));
    }
    let max = eig.values.last().copied().unwrap_or(0.0);
    let cutoff = max.abs() * 1e-14;
    let terms = eig
        .values
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c > cutoff)
        .map(|(k, &c)| KrausTerm {
            weight: 1.0,
            operator: operator_from_choi_vector(&eig.vector(k), d).scale_real(c.sqrt()),
        })
        .collect();
    Ok(PseudoKraus { dim: d, terms })
}

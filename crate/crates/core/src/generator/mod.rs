//! Time-local generators and their canonical Lindblad forms.
//!
//! For an invertible `Φ_t` the uncorrelated generator is
//! `L_t = Φ̇_t ∘ Φ_t^{-1}`, and the correlated one
//! `L^χ_t = Ψ̇_t ∘ Ψ_t^{-1} = L_t + J_t Tr{·}` with `J_t = İ_t - L_t[I_t]`.

mod canonical;
mod integrate;

pub use canonical::{
    canonical_decompose, correlated_canonical, CanonicalForm, Channel, CorrelatedCanonical,
};
pub use integrate::{
    integrate_master_equation, integrate_master_equation_skipping, SegmentedTrajectory,
    SingularInterval, TimeGrid, Trajectory,
};

use crate::dynamics::{MapInverse, MapSnapshot, TotalModel};
use crate::error::{Error, Result};
use crate::operator::Operator;
use crate::superop::SuperOperatorMatrix;
use crate::C64;

/// Relative tolerance for agreement of the two generator constructions.
pub const GENERATOR_CONSISTENCY_TOL: f64 = 1e-8;

/// Analytic time derivatives of `Φ_t` and `I_t`.
#[derive(Debug, Clone)]
pub struct MapDerivative {
    pub t: f64,
    /// `Φ̇_t[X] = Tr_E{-i[H, U_t (X ⊗ ρ_E) U_t†]}`.
    pub dphi: SuperOperatorMatrix,
    /// `İ_t = Tr_E{-i[H, U_t χ U_t†]}`.
    pub dinhomogeneity: Operator,
}

impl MapDerivative {
    /// `Ψ̇_t = Φ̇_t + vec(İ_t) vec(I)†`.
    pub fn dpsi(&self) -> SuperOperatorMatrix {
        &self.dphi + &SuperOperatorMatrix::trace_offset(&self.dinhomogeneity)
    }
}

fn snapshot_and_derivative(model: &TotalModel, t: f64) -> (MapSnapshot, MapDerivative) {
    let pieces = model.evolved_pieces(t);
    let minus_i = C64::new(0.0, -1.0);
    let h = model.hamiltonian();
    let dunits: Vec<Operator> = pieces
        .units
        .iter()
        .map(|p| h.commutator(p).scale(minus_i))
        .collect();
    let phi = model.map_from_pieces(&pieces.units);
    let dphi = model.map_from_pieces(&dunits);
    let inhomogeneity = model.reduce(&pieces.chi);
    let dinhomogeneity = model.reduce(&h.commutator(&pieces.chi).scale(minus_i));
    (
        MapSnapshot::new(t, phi, inhomogeneity),
        MapDerivative {
            t,
            dphi,
            dinhomogeneity,
        },
    )
}

pub fn map_derivative(model: &TotalModel, t: f64) -> MapDerivative {
    snapshot_and_derivative(model, t).1
}

/// `L_t`, `J_t` and `L^χ_t` at one time.
#[derive(Debug, Clone)]
pub struct GeneratorSnapshot {
    pub t: f64,
    /// `L_t = Φ̇_t ∘ Φ_t^{-1}`.
    pub l: SuperOperatorMatrix,
    /// `J_t = İ_t - L_t[I_t]`.
    pub j: Operator,
    /// `L^χ_t = L_t + vec(J_t) vec(I)†`.
    pub l_chi: SuperOperatorMatrix,
    /// Condition number of `Φ_t`.
    pub condition_number: f64,
    /// `det Φ_t`.
    pub determinant: C64,
}

impl GeneratorSnapshot {
    /// The correlation part `X ↦ J_t Tr{X}`.
    pub fn correlation_part(&self) -> SuperOperatorMatrix {
        SuperOperatorMatrix::trace_offset(&self.j)
    }
}

pub(crate) fn assemble_generator(
    model: &TotalModel,
    t: f64,
    cond_threshold: f64,
    verify: bool,
) -> Result<GeneratorSnapshot> {
    let (snap, deriv) = snapshot_and_derivative(model, t);
    let inv = MapInverse::of(&snap, cond_threshold)?;
    let l = deriv.dphi.compose(&inv.phi_inv);
    let j = &deriv.dinhomogeneity - &l.apply(&snap.inhomogeneity);
    let l_chi = &l + &SuperOperatorMatrix::trace_offset(&j);
    if verify {
        let direct = deriv.dpsi().compose(&inv.psi_inv);
        let residual = (&direct - &l_chi).frobenius_norm();
        if residual > GENERATOR_CONSISTENCY_TOL * l_chi.frobenius_norm().max(1.0) {
            return Err(Error::GeneratorMismatch { t, residual });
        }
    }
    Ok(GeneratorSnapshot {
        t,
        l,
        j,
        l_chi,
        condition_number: inv.condition_number,
        determinant: inv.determinant,
    })
}

/// Builds the generators at `t`, checking that `L_t + J_t Tr{·}` agrees with
/// `Ψ̇_t ∘ Ψ_t^{-1}`.
pub fn generator(model: &TotalModel, t: f64, cond_threshold: f64) -> Result<GeneratorSnapshot> {
    assemble_generator(model, t, cond_threshold, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{decompose_total, AssignmentContext};
    use crate::operator::tensor;
    use crate::sampling::{random_hermitian, random_operator, random_state};
    use crate::tolerance::Tolerances;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_model(seed: u64) -> TotalModel {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tol = Tolerances::default();
        let (_, ctx) = decompose_total(&random_state(6, &mut rng), 2, 3, &tol).unwrap();
        TotalModel::new(ctx, random_hermitian(6, &mut rng).scale_real(0.5), tol).unwrap()
    }

    #[test]
    fn derivative_at_zero() {
        let model = random_model(61);
        let deriv = map_derivative(&model, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let x = random_operator(2, &mut rng);
        let total = tensor(&x, model.context().rho_e());
        let expected = crate::operator::partial_trace_env(
            &model
                .hamiltonian()
                .commutator(&total)
                .scale(C64::new(0.0, -1.0)),
            2,
            3,
        )
        .unwrap();
        assert!((&deriv.dphi.apply(&x) - &expected).max_abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let h = 1e-5;
        for seed in 63..66 {
            let model = random_model(seed);
            for &t in &[0.4, 1.3] {
                let deriv = map_derivative(&model, t);
                let fd = (model.uncorrelated_map(t + h).matrix()
                    - model.uncorrelated_map(t - h).matrix())
                    / C64::new(2.0 * h, 0.0);
                let rel = (deriv.dphi.matrix() - &fd).norm() / deriv.dphi.frobenius_norm();
                assert!(rel < 1e-6, "relative error {rel}");
                let fdi =
                    (&model.inhomogeneity(t + h) - &model.inhomogeneity(t - h)).scale_real(0.5 / h);
                let rel_i = (&deriv.dinhomogeneity - &fdi).frobenius_norm()
                    / deriv.dinhomogeneity.frobenius_norm();
                assert!(rel_i < 1e-6, "relative error {rel_i}");
            }
        }
    }

    #[test]
    fn uncorrelated_generator_has_no_inhomogeneity() {
        let model = random_model(66).without_correlations();
        let g = generator(&model, 0.7, 1e8).unwrap();
        assert!(g.j.max_abs() < 1e-14);
        assert_eq!(g.l, g.l_chi);
    }

    #[test]
    fn generator_at_zero_inhomogeneity_is_its_derivative() {
        let model = random_model(67);
        let g = generator(&model, 0.0, 1e8).unwrap();
        let deriv = map_derivative(&model, 0.0);
        assert!((&g.j - &deriv.dinhomogeneity).max_abs() < 1e-13);
    }

    #[test]
    fn commuting_correlations_give_zero_derivative() {
        let tol = Tolerances::default();
        let z = crate::operator::pauli::z();
        let chi = tensor(&z, &z).scale_real(0.1);
        let ctx =
            AssignmentContext::new(2, Operator::identity(2).scale_real(0.5), chi, &tol).unwrap();
        let model = TotalModel::new(ctx, tensor(&z, &z), tol).unwrap();
        assert!(map_derivative(&model, 0.9).dinhomogeneity.max_abs() < 1e-14);
    }

    #[test]
    fn generators_are_trace_destroying_and_consistent() {
        let model = random_model(68);
        for &t in &[0.1, 0.6, 1.4] {
            let g = generator(&model, t, 1e8).unwrap();
            assert!(g.l.trace_destruction_defect() < 1e-9);
            assert!(g.l_chi.trace_destruction_defect() < 1e-9);
            assert!(g.j.is_hermitian(1e-9));
            assert!(g.j.trace().norm() < 1e-9);
        }
    }
}

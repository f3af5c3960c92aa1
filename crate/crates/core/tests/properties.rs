//! Algebraic invariants checked over randomly generated inputs.

use corrdyn::basis::hermitian_basis;
use corrdyn::dynamics::{decompose_total, pseudo_kraus_inhomogeneity, TotalModel};
use corrdyn::generator::canonical_decompose;
use corrdyn::operator::{eig_hermitian, partial_trace_env, partial_trace_sys, tensor};
use corrdyn::sampling::{random_hermitian, random_operator, random_state, random_trace_one};
use corrdyn::superop::{choi_from_superop, superop_from_choi, vectorize};
use corrdyn::{Operator, SuperOperatorMatrix, Tolerances, C64};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_superop(d: usize, rng: &mut ChaCha8Rng) -> SuperOperatorMatrix {
    let a = random_operator(d, rng);
    let b = random_operator(d, rng);
    let c = random_operator(d, rng);
    &SuperOperatorMatrix::sandwich(&a, &b) + &SuperOperatorMatrix::trace_offset(&c)
}

fn random_model(seed: u64, d_s: usize, d_e: usize) -> TotalModel {
    let mut r = rng(seed);
    let tol = Tolerances::default();
    let (_, ctx) = decompose_total(&random_state(d_s * d_e, &mut r), d_s, d_e, &tol).unwrap();
    TotalModel::new(ctx, random_hermitian(d_s * d_e, &mut r), tol).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn partial_traces_of_products(seed in any::<u64>(), d_s in 2usize..4, d_e in 2usize..5) {
        let mut r = rng(seed);
        let a = random_operator(d_s, &mut r);
        let b = random_operator(d_e, &mut r);
        let ab = tensor(&a, &b);
        let env = partial_trace_env(&ab, d_s, d_e).unwrap();
        let sys = partial_trace_sys(&ab, d_s, d_e).unwrap();
        prop_assert!((&env - &a.scale(b.trace())).max_abs() < 1e-12);
        prop_assert!((&sys - &b.scale(a.trace())).max_abs() < 1e-12);
        let m = random_operator(d_s * d_e, &mut r);
        prop_assert!((partial_trace_env(&m, d_s, d_e).unwrap().trace() - m.trace()).norm() < 1e-12);
    }

    #[test]
    fn hermitian_eigen_reconstructs(seed in any::<u64>(), d in 2usize..17) {
        let mut r = rng(seed);
        let a = random_hermitian(d, &mut r);
        let eig = eig_hermitian(&a, 1e-10).unwrap();
        let back = eig.map_spectrum(|x| C64::new(x, 0.0));
        prop_assert!((&back - &a).frobenius_norm() <= 1e-10 * a.frobenius_norm());
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn choi_round_trip_is_exact(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let m = SuperOperatorMatrix::new(d, random_operator(d * d, &mut r).into_matrix()).unwrap();
        let back = superop_from_choi(&choi_from_superop(&m));
        prop_assert_eq!(back.matrix(), m.matrix());
        let c = choi_from_superop(&m);
        let again = choi_from_superop(&superop_from_choi(&c));
        prop_assert_eq!(again.matrix(), c.matrix());
    }

    #[test]
    fn hermiticity_preservation_iff_hermitian_choi(seed in any::<u64>(), d in 2usize..4) {
        let mut r = rng(seed);
        let k = random_operator(d, &mut r);
        let hp = &SuperOperatorMatrix::sandwich(&k, &k.dagger())
            + &SuperOperatorMatrix::trace_offset(&random_hermitian(d, &mut r));
        prop_assert!(hp.choi().as_operator().hermiticity_error() < 1e-12);
        let x = random_operator(d, &mut r);
        prop_assert!((&hp.apply(&x.dagger()) - &hp.apply(&x).dagger()).max_abs() < 1e-12);
        let not_hp = random_superop(d, &mut r);
        prop_assert!(not_hp.choi().as_operator().hermiticity_error() > 1e-6);
        prop_assert!((&not_hp.apply(&x.dagger()) - &not_hp.apply(&x).dagger()).max_abs() > 1e-6);
    }

    #[test]
    fn linear_extension_is_unique(seed in any::<u64>(), t in 0.0f64..4.0) {
        let model = random_model(seed, 2, 3);
        let snap = model.linear_map(t);
        let mut r = rng(seed ^ 0x5eed);
        for _ in 0..20 {
            let x = random_trace_one(2, &mut r);
            prop_assert!((&snap.psi.apply(&x) - &snap.apply_affine(&x)).max_abs() < 1e-12);
        }
        // Trace-zero X = X1 + X2 with Tr X1 = 1 = -Tr X2.
        let x1 = random_trace_one(2, &mut r);
        let x2 = random_trace_one(2, &mut r).scale_real(-1.0);
        let x = &x1 + &x2;
        let split = &snap.psi.apply(&x1) + &snap.psi.apply(&x2);
        prop_assert!((&snap.psi.apply(&x) - &split).max_abs() < 1e-12);
        prop_assert!((&snap.psi.apply(&x) - &snap.phi.apply(&x)).max_abs() < 1e-12);
        // Rank-one offset.
        let offset = snap.psi.matrix() - snap.phi.matrix();
        let expected = vectorize(&snap.inhomogeneity) * vectorize(&Operator::identity(2)).adjoint();
        prop_assert!((offset - expected).norm() < 1e-15);
    }

    #[test]
    fn linear_map_preserves_trace_and_hermiticity(seed in any::<u64>(), t in 0.0f64..6.0) {
        let model = random_model(seed, 2, 2);
        let snap = model.linear_map(t);
        prop_assert!(snap.psi.trace_preservation_defect() < 1e-10);
        prop_assert!(snap.phi.trace_preservation_defect() < 1e-10);
        prop_assert!(snap.inhomogeneity.trace().norm() < 1e-10);
        let mut r = rng(seed.wrapping_add(1));
        let x = random_operator(2, &mut r);
        prop_assert!((&snap.psi.apply(&x.dagger()) - &snap.psi.apply(&x).dagger()).max_abs() < 1e-12);
    }

    #[test]
    fn canonical_form_reconstructs(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let basis = hermitian_basis(d).unwrap();
        let f = basis.traceless();
        let coeff = random_hermitian(f.len(), &mut r);
        let id = Operator::identity(d);
        let mut m = SuperOperatorMatrix::hamiltonian(&random_hermitian(d, &mut r));
        for (a, fa) in f.iter().enumerate() {
            for (b, fb) in f.iter().enumerate() {
                let fbfa = fb * fa;
                let anti = &SuperOperatorMatrix::sandwich(&fbfa, &id) + &SuperOperatorMatrix::sandwich(&id, &fbfa);
                let term = &SuperOperatorMatrix::sandwich(fa, fb) - &anti.scale(C64::new(0.5, 0.0));
                m = &m + &term.scale(coeff.get(a, b));
            }
        }
        let form = canonical_decompose(&m, &Tolerances::default()).unwrap();
        prop_assert!((form.to_superop().matrix() - m.matrix()).norm() <= 1e-9);
        prop_assert!(form.hamiltonian.is_hermitian(1e-12));
        for ch in &form.channels {
            prop_assert!(ch.operator.trace().norm() < 1e-10);
            prop_assert!((ch.operator.frobenius_norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn correlation_dissipator_has_no_hamiltonian(seed in any::<u64>(), d in 2usize..5) {
        let mut r = rng(seed);
        let j = random_hermitian(d, &mut r);
        let j = &j - &Operator::identity(d).scale(j.trace() / d as f64);
        let form = canonical_decompose(&SuperOperatorMatrix::trace_offset(&j), &Tolerances::default()).unwrap();
        prop_assert!(form.hamiltonian.frobenius_norm() <= 1e-9);
        let pk = pseudo_kraus_inhomogeneity(&j, &Tolerances::default()).unwrap();
        prop_assert!(pk.weighted_completeness().max_abs() <= 1e-9);
        let x = random_operator(d, &mut r);
        prop_assert!((&pk.apply(&x) - &j.scale(x.trace())).max_abs() < 1e-10);
    }
}

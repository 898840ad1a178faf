//! Wigner functions of states and channels against direct operator oracles.

mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use qudit_magic::wigner::*;
use qudit_magic::{states, Complex64, ComplexMatrix, Error, PhasePoint, PhaseSpace, PrimeDim};

const Q3: PrimeDim = PrimeDim::QUTRIT;

/// `W_E(y|z) = tr[A_y E(A_z)] / d^{n_out}` from Kraus operators.
fn channel_oracle(kraus: &[ComplexMatrix]) -> DMatrix<f64> {
    let space = PhaseSpace::new(Q3, 1).unwrap();
    let ops: Vec<ComplexMatrix> = space.points().map(|z| space.phase_point_operator(&z).unwrap()).collect();
    DMatrix::from_fn(9, 9, |y, z| {
        let out = kraus.iter().fold(ComplexMatrix::zeros(3, 3), |acc, k| acc + k * &ops[z] * k.adjoint());
        (&ops[y] * out).trace().re / 3.0
    })
}

fn random_kraus(rng: &mut impl rand::Rng) -> Vec<ComplexMatrix> {
    let (u1, u2) = (random_unitary(rng, 3), random_unitary(rng, 3));
    let p: f64 = rng.random_range(0.0..1.0);
    vec![u1 * Complex64::new(p.sqrt(), 0.0), u2 * Complex64::new((1.0 - p).sqrt(), 0.0)]
}

#[test]
fn channel_representation_matches_operator_oracle() {
    let mut r = rng(1);
    let mut cases: Vec<Vec<ComplexMatrix>> = vec![vec![states::qutrit_fourier()], vec![states::qutrit_t_gate()]];
    cases.extend((0..10).map(|_| random_kraus(&mut r)));
    for kraus in cases {
        let we = wigner_of_channel(&states::choi_from_kraus(&kraus), Q3, 1, 1).unwrap();
        let oracle = channel_oracle(&kraus);
        assert!((we.matrix() - oracle).abs().max() < 1e-12);
    }
}

#[test]
fn applying_a_channel_matches_evolving_the_state() {
    let mut r = rng(2);
    for _ in 0..20 {
        let kraus = random_kraus(&mut r);
        let rho = random_mixed(&mut r, 3, 2);
        let evolved = kraus.iter().fold(ComplexMatrix::zeros(3, 3), |acc, k| acc + k * &rho * k.adjoint());
        let we = wigner_of_channel(&states::choi_from_kraus(&kraus), Q3, 1, 1).unwrap();
        let direct = wigner_of_state(&evolved, Q3).unwrap();
        let via = apply_channel(&we, &wigner_of_state(&rho, Q3).unwrap()).unwrap();
        for (a, b) in direct.values().iter().zip(via.values()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn displacements_translate_phase_space() {
    let space = PhaseSpace::new(Q3, 1).unwrap();
    for a in space.points() {
        let u = space.displacement_operator(&a).unwrap();
        let we = wigner_of_channel(&states::choi_of_unitary(&u), Q3, 1, 1).unwrap();
        for z in space.points() {
            let y = space.index(&z.add(&a).unwrap()).unwrap();
            let iz = space.index(&z).unwrap();
            assert!((we.matrix()[(y, iz)] - 1.0).abs() < 1e-12, "{a}: {z} ↦ {y}");
        }
    }
}

#[test]
fn clifford_is_a_permutation_and_t_gate_is_not_stochastic() {
    let f = wigner_of_channel(&states::choi_of_unitary(&states::qutrit_fourier()), Q3, 1, 1).unwrap();
    assert!(is_stochastic(&f, 1e-12));
    for c in f.matrix().column_iter() {
        assert_eq!(c.iter().filter(|v| (**v - 1.0).abs() < 1e-12).count(), 1);
    }
    let t = wigner_of_channel(&states::choi_of_unitary(&states::qutrit_t_gate()), Q3, 1, 1).unwrap();
    assert!(!is_stochastic(&t, 1e-9));
    assert!(t.matrix().min() < -1e-3);
}

#[test]
fn depolarizing_the_strange_state_gives_its_noisy_version() {
    let strange = wigner_of_state(&states::strange_state(), Q3).unwrap();
    for eps in [0.0, 0.1, 0.3, 0.6] {
        let we = wigner_of_channel(&states::depolarizing_choi(Q3, eps), Q3, 1, 1).unwrap();
        let out = apply_channel(&we, &strange).unwrap();
        let want = wigner_of_state(&states::noisy_strange_state(eps), Q3).unwrap();
        for (a, b) in out.values().iter().zip(want.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((out.sum_negativity() - (1.0 / 3.0 - 4.0 * eps / 9.0).max(0.0)).abs() < 1e-12);
    }
}

#[test]
fn completely_depolarizing_channel_between_sizes() {
    let choi = states::completely_depolarizing_choi(Q3, 1, 2);
    let we = wigner_of_channel(&choi, Q3, 1, 2).unwrap();
    assert!(is_stochastic(&we, 1e-12));
    let out = apply_channel(&we, &wigner_of_state(&states::strange_state(), Q3).unwrap()).unwrap();
    assert!(out.values().iter().all(|v| (v - 1.0 / 81.0).abs() < 1e-12));
}

#[test]
fn stochastic_channels_do_not_increase_negativity() {
    let mut r = rng(3);
    for _ in 0..200 {
        let m = random_displacement_mixture(&mut r, 3);
        let we = ChannelWigner::from_matrix(Q3, 1, 1, m).unwrap();
        let w = wigner_of_state(&random_pure(&mut r, 3), Q3).unwrap();
        let out = apply_channel(&we, &w).unwrap();
        assert!(out.sum_negativity() <= w.sum_negativity() + 1e-12);
        assert!(out.mana() <= w.mana() + 1e-12);
        let free = wigner_of_state(&random_free(&mut r, Q3), Q3).unwrap();
        assert!(apply_channel(&we, &free).unwrap().is_free(1e-12));
    }
}

#[test]
fn non_cptp_choi_is_rejected() {
    let bad = states::choi_of_unitary(&states::qutrit_fourier()) * Complex64::new(2.0, 0.0);
    assert!(matches!(wigner_of_channel(&bad, Q3, 1, 1), Err(Error::NotCptp(_))));
}

#[test]
fn mana_is_additive_over_three_factors() {
    let mut r = rng(4);
    let ws: Vec<QuasiDistribution> = (0..3).map(|_| wigner_of_state(&random_pure(&mut r, 3), Q3).unwrap()).collect();
    let joint = ws[0].tensor(&ws[1]).unwrap().tensor(&ws[2]).unwrap();
    let sum: f64 = ws.iter().map(|w| w.mana()).sum();
    assert!((joint.mana() - sum).abs() < 1e-12);
}

fn arb_seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn wigner_is_multiplicative(seed in arb_seed()) {
        let mut r = rng(seed);
        let (a, b) = (random_mixed(&mut r, 3, 2), random_mixed(&mut r, 3, 3));
        let joint = wigner_of_state(&a.kronecker(&b), Q3).unwrap();
        let product = wigner_of_state(&a, Q3).unwrap().tensor(&wigner_of_state(&b, Q3).unwrap()).unwrap();
        for (x, y) in joint.values().iter().zip(product.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn wigner_round_trips_and_is_real_normalized(seed in arb_seed()) {
        let mut r = rng(seed);
        let rho = random_mixed(&mut r, 9, 4);
        let w = wigner_of_state(&rho, Q3).unwrap();
        prop_assert!((w.values().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let back = state_from_wigner(&w);
        prop_assert!((back - rho).iter().map(|c| c.norm()).fold(0.0, f64::max) < 1e-12);
    }

    #[test]
    fn mixing_is_linear(seed in arb_seed(), p in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let (a, b) = (random_pure(&mut r, 3), random_pure(&mut r, 3));
        let mixed = &a * Complex64::new(p, 0.0) + &b * Complex64::new(1.0 - p, 0.0);
        let wa = wigner_of_state(&a, Q3).unwrap();
        let wb = wigner_of_state(&b, Q3).unwrap();
        let via = wa.mix(&wb, p).unwrap();
        let direct = wigner_of_state(&mixed, Q3).unwrap();
        for (x, y) in via.values().iter().zip(direct.values()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn wigner_values_are_expectations_of_phase_point_operators(seed in arb_seed(), q in 0i64..3, p in 0i64..3) {
        let mut r = rng(seed);
        let rho = random_mixed(&mut r, 3, 3);
        let space = PhaseSpace::new(Q3, 1).unwrap();
        let z = PhasePoint::single(Q3, q, p);
        let direct = (space.phase_point_operator(&z).unwrap() * &rho).trace().re / 3.0;
        prop_assert!((wigner_of_state(&rho, Q3).unwrap().get(&z).unwrap() - direct).abs() < 1e-12);
    }
}

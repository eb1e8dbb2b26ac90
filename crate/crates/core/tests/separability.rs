use entangle_core::bloch::{self, BlochRep};
use entangle_core::experiments;
use entangle_core::graphstate::PartitionSpec;
use entangle_core::numcore::Dims;
use entangle_core::separability::{self, Status};
use entangle_core::state::{self, DensityMatrix, PureState};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn smolin_is_detected_and_ppt() {
    let rho = experiments::smolin_state();
    let v = separability::kyfan_test(&rho).unwrap();
    assert_eq!(v.status, Status::Entangled);
    assert!((v.witness - 3.0).abs() < 1e-9);
    assert_eq!(v.bound, 1.0);
    for s in [[1, 2], [1, 3], [1, 4]] {
        let cut = PartitionSpec::new(&s, 4).unwrap();
        let ppt = separability::ppt_test(&rho, &cut).unwrap();
        assert_eq!(ppt.status, Status::Inconclusive);
        assert!(separability::min_pt_eigenvalue(&rho, &cut).unwrap() >= -1e-10);
    }
    assert_eq!(separability::nqubit_iff_test(&rho).unwrap().status, Status::Entangled);
}

#[test]
fn dur_state_is_detected() {
    let v = separability::kyfan_test(&experiments::dur_state()).unwrap();
    assert_eq!(v.status, Status::Entangled);
    assert!((v.witness - 1.4).abs() < 0.01);
}

#[test]
fn product_states_sit_exactly_on_the_bound() {
    let v = separability::kyfan_test(&PureState::bits("0110").unwrap().to_density()).unwrap();
    assert_eq!(v.status, Status::Inconclusive);
    assert!((v.witness - v.bound).abs() < 1e-12);
}

#[test]
fn subsystem_tests() {
    let rho = experiments::reduced_w_noisy(6, 2, 0.6).unwrap();
    assert_eq!(separability::kyfan_test(&rho).unwrap().status, Status::Entangled);

    let ghz = state::ghz(3, 2).unwrap().to_density();
    assert!(separability::kyfan_test_subsystem(&ghz, &[2]).is_err());
    let v = separability::kyfan_test_subsystem(&ghz, &[1, 2]).unwrap();
    assert_eq!(v.status, Status::Inconclusive);
    assert_eq!(v.partition, Some(vec![vec![1, 2]]));
}

#[test]
fn grouped_tests() {
    let ghz = state::ghz(3, 2).unwrap().to_density();
    let v = separability::kyfan_test_partition(&ghz, &[vec![1, 2], vec![3]]).unwrap();
    assert!((v.bound - 6f64.sqrt()).abs() < 1e-12);
    assert_eq!(v.status, Status::Entangled);
    assert!(separability::kyfan_test_partition(&ghz, &[vec![1, 2, 3]]).is_err());
}

#[test]
fn sufficiency_verdicts() {
    let mixed = DensityMatrix::maximally_mixed(Dims::qubits(3).unwrap());
    let v = separability::sufficiency_test(&mixed).unwrap();
    assert_eq!(v.status, Status::Separable);
    assert!(v.witness.abs() < 1e-12);

    let ghz = state::ghz(3, 2).unwrap();
    let low = separability::sufficiency_test(&experiments::noisy_state(&ghz, 0.01).unwrap()).unwrap();
    assert_eq!(low.status, Status::Separable);
    let high = separability::sufficiency_test(&experiments::noisy_state(&ghz, 0.9).unwrap()).unwrap();
    assert_eq!(high.status, Status::Inconclusive);
}

#[test]
fn iff_test_on_single_entry_tensor() {
    let mut b = BlochRep::zero(Dims::qubits(3).unwrap());
    b.tensors.get_mut(&vec![1, 2, 3]).unwrap().set(&[2, 2, 2], 0.5);
    let rho = bloch::reconstruct(&b).unwrap();
    let v = separability::nqubit_iff_test(&rho).unwrap();
    assert_eq!(v.status, Status::Separable);
    assert!((v.witness - 0.5).abs() < 1e-12);

    let mixed = DensityMatrix::maximally_mixed(Dims::qubits(2).unwrap());
    assert_eq!(separability::nqubit_iff_test(&mixed).unwrap().status, Status::Separable);

    // Nonzero coherence vectors fall outside the class.
    let zero = PureState::bits("00").unwrap().to_density();
    assert_eq!(
        separability::nqubit_iff_test(&zero).unwrap().status,
        Status::Inconclusive
    );
}

#[test]
fn ppt_verdicts() {
    let cut = PartitionSpec::new(&[1], 2).unwrap();
    let bell = separability::ppt_test(&state::bell().to_density(), &cut).unwrap();
    assert_eq!(bell.status, Status::Entangled);
    assert!((bell.witness - 0.5).abs() < 1e-12);

    let a = PureState::bits("01").unwrap().to_density();
    let b = PureState::bits("10").unwrap().to_density();
    let mix = DensityMatrix::new(
        (a.matrix() + b.matrix()) * num_complex::Complex64::new(0.5, 0.0),
        a.dims().clone(),
    )
    .unwrap();
    assert_eq!(separability::ppt_test(&mix, &cut).unwrap().status, Status::Inconclusive);
    assert!(separability::ppt_test(&mix, &PartitionSpec::new(&[1], 3).unwrap()).is_err());
}

#[test]
fn qutrit_bounds() {
    let v = separability::kyfan_test(&state::ghz(2, 3).unwrap().to_density()).unwrap();
    assert!((v.bound - 3.0).abs() < 1e-12);
    assert_eq!(v.status, Status::Entangled);
}

#[test]
fn single_subsystem_is_rejected() {
    let rho = DensityMatrix::maximally_mixed(Dims::qubits(1).unwrap());
    assert!(separability::kyfan_test(&rho).is_err());
    assert!(separability::sufficiency_test(&rho).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Product states never exceed the bound, so the test never claims entanglement for them.
    #[test]
    fn no_false_entanglement_on_products(seed in any::<u64>(), d in 2usize..4) {
        let mut rng = StdRng::seed_from_u64(seed);
        let a = state::random_mixed(&Dims::new(vec![d]).unwrap(), 1, &mut rng);
        let b = state::random_mixed(&Dims::new(vec![2]).unwrap(), 2, &mut rng);
        let c = state::random_mixed(&Dims::new(vec![d]).unwrap(), 2, &mut rng);
        let rho = a.tensor(&b).tensor(&c);
        let v = separability::kyfan_test(&rho).unwrap();
        prop_assert_ne!(v.status, Status::Entangled);
        prop_assert!(v.witness <= v.bound + 1e-9);
    }

    #[test]
    fn entangled_verdict_implies_witness_margin(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rho = state::random_mixed(&Dims::qubits(3).unwrap(), 1, &mut rng);
        let v = separability::kyfan_test(&rho).unwrap();
        if v.status == Status::Entangled {
            prop_assert!(v.witness > v.bound + 1e-12);
        }
    }
}

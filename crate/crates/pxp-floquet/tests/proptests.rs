//! Property tests over the structural invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use pxp_floquet::basis::{fibonacci, BlockadedBasis};
use pxp_floquet::config::{AxisSpec, NList, RunConfig};
use pxp_floquet::floquet::fold_quasi_energy;
use pxp_floquet::states::{fidelity, StateVector};
use pxp_floquet::thermal::{ergodic_z, instantaneous_distance, BlochVector};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basis_invariants(l in 1usize..=14) {
        let basis = BlockadedBasis::enumerate(l).unwrap();
        prop_assert_eq!(basis.dim() as u64, fibonacci((l + 2) as u64).unwrap());
        for k in 0..basis.dim() {
            let pattern = basis.pattern(k);
            prop_assert_eq!(pattern & (pattern >> 1), 0);
            prop_assert_eq!(basis.index_of(pattern).unwrap(), k);
        }
    }

    #[test]
    fn folding_lands_in_the_zone_and_is_idempotent(
        energy in -50.0f64..50.0,
        omega_d in 0.3f64..12.0,
    ) {
        let folded = fold_quasi_energy(energy, omega_d);
        prop_assert!(folded > -omega_d / 2.0 - 1e-9);
        prop_assert!(folded <= omega_d / 2.0 + 1e-9);
        prop_assert!((fold_quasi_energy(folded, omega_d) - folded).abs() < 1e-9);
        // folding preserves the eigenvalue e^{-i e T}
        let period = std::f64::consts::TAU / omega_d;
        let a = Complex64::from_polar(1.0, -energy * period);
        let b = Complex64::from_polar(1.0, -folded * period);
        prop_assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn fidelity_symmetry_and_range(seed in proptest::collection::vec(-1.0f64..1.0, 26)) {
        let basis = BlockadedBasis::enumerate(5).unwrap();
        let dim = basis.dim();
        let make = |offset: usize| -> Option<StateVector> {
            let mut amp: Vec<Complex64> = (0..dim)
                .map(|k| Complex64::new(seed[(k + offset) % seed.len()], seed[(k + offset + 7) % seed.len()]))
                .collect();
            let norm: f64 = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                return None;
            }
            for a in &mut amp {
                *a /= norm;
            }
            StateVector::new(&basis, amp).ok()
        };
        if let (Some(a), Some(b)) = (make(0), make(3)) {
            let ab = fidelity(&a, &b).unwrap();
            let ba = fidelity(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!((0.0..=1.0 + 1e-12).contains(&ab));
            prop_assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ergodic_z_within_physical_bounds(l in 1usize..=20, seed in 0usize..100) {
        let j = seed % l + 1;
        let z = ergodic_z(j, l).unwrap();
        prop_assert!((-1.0..=1.0).contains(&z));
        // reflection symmetry
        let mirrored = ergodic_z(l + 1 - j, l).unwrap();
        prop_assert!((z - mirrored).abs() < 1e-15);
    }

    #[test]
    fn bloch_distance_is_a_metric_sample(
        ax in -1.0f64..1.0, ay in -1.0f64..1.0, az in -1.0f64..1.0,
        bx in -1.0f64..1.0, by in -1.0f64..1.0, bz in -1.0f64..1.0,
    ) {
        let a = BlochVector { x: ax, y: ay, z: az };
        let b = BlochVector { x: bx, y: by, z: bz };
        let d = instantaneous_distance(&a, &b);
        prop_assert!(d >= 0.0);
        prop_assert_eq!(instantaneous_distance(&b, &a), d);
        prop_assert!(instantaneous_distance(&a, &a) == 0.0);
        // bounded by 1 + slack for vectors inside the ball
        prop_assert!(d <= (3.0f64).sqrt());
    }

    #[test]
    fn axis_range_covers_start_and_stop(
        start in -10.0f64..10.0,
        span in 0.1f64..20.0,
        step in 0.05f64..2.0,
    ) {
        let stop = start + span;
        let axis = AxisSpec::Range { start, stop, step };
        let values = axis.values();
        prop_assert!(!values.is_empty());
        prop_assert!((values[0] - start).abs() < 1e-12);
        // last value within half a step of stop, never far beyond
        let last = *values.last().unwrap();
        prop_assert!(last <= stop + 0.5 * step + 1e-12);
        prop_assert!(stop - last < step);
        // uniform spacing
        for pair in values.windows(2) {
            prop_assert!(((pair[1] - pair[0]) - step).abs() < 1e-9);
        }
    }

    #[test]
    fn config_round_trip(
        l in 2usize..=16,
        h_start in 0.0f64..4.0,
        h_span in 0.5f64..12.0,
        h_step in 0.05f64..0.5,
        omega in 0.5f64..9.0,
        n_hi in 2usize..30,
        steps in 16usize..600,
        eta in 0.01f64..0.9,
        workers in 1usize..8,
    ) {
        let config = RunConfig {
            command: pxp_floquet::config::CommandKind::FidelitySweep,
            l,
            state: pxp_floquet::sweep::StateSpec::Theta(eta), // any angle in (0, 0.9)
            omega_d: AxisSpec::Scalar(omega),
            h: Some(AxisSpec::Range { start: h_start, stop: h_start + h_span, step: h_step }),
            n: Some(NList((1..=n_hi).collect())),
            n_max: None,
            steps_per_period: steps,
            eta,
            fit_window: Some((1.0, 2.2048 * omega)),
            min_height: 0.1,
            min_separation: 2,
            output: std::path::PathBuf::from("out"),
            workers,
            plot_script: false,
        };
        let reparsed = RunConfig::parse(&config.render()).unwrap();
        prop_assert_eq!(config, reparsed);
    }
}

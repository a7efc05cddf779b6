//! Property-based invariants over sampled operators and assemblages.

use proptest::prelude::*;

use steerlab_core::assemblage::{
    apply_inefficiency, assemblage_from_pure, steer, MeasurementAssemblage, PureEntangledState,
};
use steerlab_core::linalg::{
    commutator, herm_sqrt, partial_trace_first, schatten_norm, tensor, Complex64, ComplexMatrix,
};
use steerlab_core::measures::guessing_bound;
use steerlab_core::random;
use steerlab_core::scenarios;

fn matrix_strategy(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim * dim).prop_map(move |entries| {
        ComplexMatrix::from_fn(dim, |i, j| {
            let (re, im) = entries[i * dim + j];
            Complex64::new(re, im)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_undoes_tensor(a in matrix_strategy(2), b in matrix_strategy(3)) {
        let out = partial_trace_first(&tensor(&a, &b), 2, 3).unwrap();
        let expected = b.scale_complex(a.trace());
        prop_assert!((&out - &expected).max_abs() < 1e-10);
    }

    #[test]
    fn herm_sqrt_is_psd_root(g in matrix_strategy(3)) {
        let psd = &g.adjoint() * &g;
        let root = herm_sqrt(&psd, 1e-9).unwrap();
        prop_assert!(root.is_hermitian(1e-11));
        let dev = (&(&root * &root) - &psd).max_abs();
        prop_assert!(dev <= 1e-9 * psd.max_abs().max(1.0));
    }

    #[test]
    fn schatten_triangle_inequality(a in matrix_strategy(3), b in matrix_strategy(3)) {
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            let lhs = schatten_norm(&(&a + &b), p).unwrap();
            let rhs = schatten_norm(&a, p).unwrap() + schatten_norm(&b, p).unwrap();
            prop_assert!(lhs <= rhs + 1e-10, "p = {}: {} > {}", p, lhs, rhs);
        }
    }

    #[test]
    fn schatten_unitary_invariance(a in matrix_strategy(3), seed in any::<u64>()) {
        let mut rng = random::rng_from_seed(seed);
        let u = random::haar_unitary(3, &mut rng);
        let v = random::haar_unitary(3, &mut rng);
        let rotated = &(&u * &a) * &v;
        for p in [1.0, 2.0, f64::INFINITY] {
            let base = schatten_norm(&a, p).unwrap();
            let moved = schatten_norm(&rotated, p).unwrap();
            prop_assert!((base - moved).abs() < 1e-10 * base.max(1.0));
        }
    }

    #[test]
    fn commutator_of_hermitians_is_skew(a in matrix_strategy(3), b in matrix_strategy(3)) {
        let (ha, hb) = (a.hermitized(), b.hermitized());
        let c = commutator(&ha, &hb).unwrap();
        // [a,b] = -[b,a] and anti-Hermitian output.
        let swapped = commutator(&hb, &ha).unwrap();
        prop_assert!((&c + &swapped).max_abs() < 1e-12);
        prop_assert!((&c + &c.adjoint()).max_abs() < 1e-12);
    }

    #[test]
    fn steer_outputs_valid_assemblages(seed in any::<u64>()) {
        let mut rng = random::rng_from_seed(seed);
        let state = scenarios::random_state(2, 2, &mut rng);
        let m = scenarios::random_measurements(2, 2, 2, &mut rng);
        let s = steer(&state, &m).unwrap();
        prop_assert!(s.validate(1e-9).is_ok());
        prop_assert!(s.nosignaling_residual() < 1e-10);
        let total: f64 = (0..2).map(|a| s.probability(0, a)).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pure_route_agreement(raw in prop::collection::vec(0.05f64..1.0, 2..4), seed in any::<u64>()) {
        let norm: f64 = raw.iter().map(|l| l * l).sum::<f64>().sqrt();
        let spectrum: Vec<f64> = raw.iter().map(|l| l / norm).collect();
        let psi = PureEntangledState::new(&spectrum).unwrap();
        let d = psi.dim();
        let mut rng = random::rng_from_seed(seed);
        let m = scenarios::random_measurements(d, 2, 2, &mut rng);
        let direct = assemblage_from_pure(&psi, &m).unwrap();
        let steered = steer(&psi.to_state(), &m).unwrap();
        for (lhs, rhs) in direct.elements().iter().zip(steered.elements()) {
            prop_assert!((lhs - rhs).max_abs() < 1e-10);
        }
    }

    #[test]
    fn inefficiency_keeps_completeness(seed in any::<u64>(), eta in 0.0f64..=1.0) {
        let mut rng = random::rng_from_seed(seed);
        let m = scenarios::random_measurements(2, 2, 2, &mut rng);
        let ext = apply_inefficiency(&m, eta).unwrap();
        let report = ext.validate(1e-12);
        prop_assert!(report.is_ok(), "{}", report);
    }

    #[test]
    fn guessing_bound_monotone(s1 in 0.0f64..=1.0, s2 in 0.0f64..=1.0) {
        let (lo, hi) = if s1 <= s2 { (s1, s2) } else { (s2, s1) };
        let b_lo = guessing_bound(lo).unwrap();
        let b_hi = guessing_bound(hi).unwrap();
        prop_assert!(b_hi.p_g <= b_lo.p_g + 1e-15);
        prop_assert!(b_hi.h_min + 1e-15 >= b_lo.h_min);
    }

    #[test]
    fn mixing_keeps_validity(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut rng = random::rng_from_seed(seed);
        let s1 = scenarios::random_assemblage(2, 2, 2, &mut rng);
        let s2 = scenarios::random_assemblage(2, 2, 2, &mut rng);
        let mixed = steerlab_core::assemblage::mix(p, &s1, &s2).unwrap();
        prop_assert!(mixed.validate(1e-9).is_ok());
    }

    #[test]
    fn steerability_is_normalized(seed in any::<u64>(), p_choice in 0usize..3) {
        let p = [1.0, 2.0, f64::INFINITY][p_choice];
        let mut rng = random::rng_from_seed(seed);
        let d = 2 + (seed % 2) as usize;
        let s = scenarios::random_assemblage(d, 2, 2, &mut rng);
        let value = steerlab_core::measures::sdi_steerability(&s, p, 1e-9).unwrap();
        prop_assert!((0.0..=1.0 + 1e-9).contains(&value), "S = {}", value);
    }
}

#[test]
fn incoherent_emitters_always_pass_validators() {
    // Spot check well beyond proptest's default case count.
    for seed in 0..200u64 {
        let mut rng = random::rng_from_seed(seed);
        let m = scenarios::random_incoherent_measurements(2, 2, 2, &mut rng);
        assert!(m.validate(1e-9).is_ok());
    }
}

#[test]
fn measurement_assemblage_shape_errors() {
    let id = ComplexMatrix::identity(2);
    assert!(MeasurementAssemblage::new(2, 2, 2, vec![id.clone()]).is_err());
    assert!(MeasurementAssemblage::new(3, 1, 1, vec![id]).is_err());
}

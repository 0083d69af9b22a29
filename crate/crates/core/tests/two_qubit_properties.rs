mod common;

use fmq_core::two_qubit::{
    concurrence, coherence_l1_two, discord, ewl_initial, propagate_x_state, EwlKind, EwlParams, XState,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn x_state() -> impl Strategy<Value = XState> {
    any::<u64>().prop_map(|seed| common::random_x_state(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn amplitude() -> impl Strategy<Value = Complex64> {
    (0.0..=1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

proptest! {
    #[test]
    fn channel_preserves_trace_and_positivity(s in x_state(), a in amplitude(), b in amplitude()) {
        let out = propagate_x_state(&s, a, b).unwrap();
        prop_assert!((out.populations.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!(out.validate().is_ok());
        prop_assert!(out.eigenvalues().iter().all(|l| *l > -1e-12));
        prop_assert!(concurrence(&out) >= 0.0 && concurrence(&out) <= 1.0 + 1e-12);
        prop_assert!(discord(&out) >= 0.0);
        prop_assert!(coherence_l1_two(&out) <= coherence_l1_two(&s) + 1e-12);
    }

    #[test]
    fn real_amplitudes_compose(s in x_state(), a1 in 0.0..=1.0f64, a2 in 0.0..=1.0f64,
                               b1 in 0.0..=1.0f64, b2 in 0.0..=1.0f64) {
        let c = |x: f64| Complex64::new(x, 0.0);
        let twice = propagate_x_state(&propagate_x_state(&s, c(a1), c(b1)).unwrap(), c(a2), c(b2)).unwrap();
        let once = propagate_x_state(&s, c(a1 * a2), c(b1 * b2)).unwrap();
        for k in 0..4 {
            prop_assert!((twice.populations[k] - once.populations[k]).abs() < 1e-14);
        }
        prop_assert!((twice.coherence_14 - once.coherence_14).norm() < 1e-14);
        prop_assert!((twice.coherence_23 - once.coherence_23).norm() < 1e-14);
    }

    #[test]
    fn ewl_closed_form_initial_values(r in 0.0..=1.0f64, m in 0.0..=1.0f64, th in 0.0..std::f64::consts::TAU) {
        let mu = Complex64::from_polar(m, th);
        for kind in [EwlKind::Psi, EwlKind::Phi] {
            let ewl = EwlParams::new(kind, r, mu).unwrap();
            let s = ewl_initial(&ewl).unwrap();
            let mn = (ewl.mu * ewl.nu).norm();
            prop_assert!((concurrence(&s) - 2.0 * ((mn + 0.25) * r - 0.25).max(0.0)).abs() < 1e-10);
            prop_assert!((coherence_l1_two(&s) - 2.0 * r * mn).abs() < 1e-10);
            prop_assert!((s.purity() - (1.0 + 3.0 * r * r) / 4.0).abs() < 1e-10);
        }
    }
}

#[test]
fn eigen_oracle_matches_block_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let s = common::random_x_state(&mut rng);
        let mut a = common::hermitian4_eigenvalues(&s.to_matrix());
        let mut b = s.eigenvalues();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for k in 0..4 {
            assert!((a[k] - b[k]).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }
}

#[test]
fn werner_discord_matches_brute_force() {
    let ewl = EwlParams::new(EwlKind::Psi, 0.5, Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0)).unwrap();
    let s = ewl_initial(&ewl).unwrap();
    let d = discord(&s);
    let oracle = common::brute_force_discord(&s);
    assert!((d - oracle).abs() < 1e-6, "{d} vs {oracle}");
    // Werner closed form: ¼[3f(1−r) + f(1+3r)] − ½[f(1−r) + f(1+r)], f(x) = x log₂ x.
    assert!((d - 0.26248318376373436).abs() < 1e-12, "{d}");
}

#[test]
fn bell_discord_matches_brute_force() {
    let s = ewl_initial(&EwlParams::bell(EwlKind::Phi)).unwrap();
    assert!((common::brute_force_discord(&s) - 1.0).abs() < 1e-8);
}

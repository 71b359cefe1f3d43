use ctp_coulomb::modes::dispersion_roots;
use ctp_coulomb::response::{classicality, inverse_propagator, landau_damping, lindhard_real};
use ctp_coulomb::{Error, ModePoint, PlasmaParams};
use proptest::prelude::*;

fn params() -> PlasmaParams {
    PlasmaParams::new(0.05).unwrap()
}

fn re(z: f64, q: f64) -> f64 {
    lindhard_real(ModePoint::new(z, q), &params()).unwrap()
}

fn r(z: f64, q: f64) -> f64 {
    landau_damping(ModePoint::new(z, q), &params()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn real_part_continuous_across_boundaries(q in 0.2f64..3.5, upper in any::<bool>()) {
        let edge = if upper { q + q * q / 2.0 } else { (q - q * q / 2.0).abs() };
        prop_assume!(edge > 1e-3);
        let d = 1e-7;
        prop_assert!((re(edge + d, q) - re(edge - d, q)).abs() < 1e-6);
    }

    // The edge kink grows like δ·ln(δ)/q², so at small q the gap is
    // checked to close as the offset shrinks rather than at a fixed δ.
    #[test]
    fn real_part_gap_closes_at_small_q(q in 0.005f64..0.2, upper in any::<bool>()) {
        let edge = if upper { q + q * q / 2.0 } else { q - q * q / 2.0 };
        let gap = |d: f64| (re(edge + d * q * q, q) - re(edge - d * q * q, q)).abs();
        prop_assert!(gap(1e-7) < 1e-6);
        prop_assert!(gap(1e-10) < gap(1e-7));
    }

    #[test]
    fn damping_continuous_across_seam(q in 0.01f64..1.99) {
        let seam = q - q * q / 2.0;
        let d = 1e-9;
        prop_assert!((r(seam + d, q) - r(seam - d, q)).abs() < 1e-8);
    }

    #[test]
    fn damping_continuous_at_upper_edge(q in 0.01f64..3.5) {
        let edge = q + q * q / 2.0;
        prop_assert!(r(edge - 1e-9, q) < 1e-7);
        prop_assert_eq!(r(edge + 1e-9, q), 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn damping_nonnegative(z in -5.0f64..5.0, q in 1e-6f64..4.0) {
        prop_assert!(r(z, q) >= 0.0);
    }
}

proptest! {
    #[test]
    fn real_part_even_in_z(z in 0.0f64..5.0, q in 1e-4f64..4.0) {
        let (a, b) = (re(z, q), re(-z, q));
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn damping_even_in_z(z in 0.0f64..5.0, q in 1e-4f64..4.0) {
        prop_assert_eq!(r(z, q), r(-z, q));
    }

    #[test]
    fn off_diagonal_entries_follow_sign_of_z(z in 0.01f64..3.0, q in 0.05f64..3.0) {
        let p = params();
        let pos = inverse_propagator(ModePoint::new(z, q), &p).unwrap();
        let neg = inverse_propagator(ModePoint::new(-z, q), &p).unwrap();
        let damp = r(z, q);
        prop_assert_eq!(pos.pm.norm(), 0.0);
        prop_assert!((pos.mp.im + 2.0 * damp).abs() <= 1e-15);
        prop_assert_eq!(neg.mp.norm(), 0.0);
        prop_assert!((neg.pm.im + 2.0 * damp).abs() <= 1e-15);
        let total = pos.pp + pos.pm + pos.mp + pos.mm;
        prop_assert!(total.norm() <= 1e-15);
    }

    #[test]
    fn classicality_is_damping_over_real_part(z in 0.01f64..3.0, q in 0.05f64..3.0) {
        let denom = re(z, q);
        prop_assume!(denom.abs() > 1e-6);
        let c = classicality(ModePoint::new(z, q), &params()).unwrap();
        prop_assert!((c - r(z, q) / denom).abs() <= 1e-14 * c.abs().max(1.0));
    }

    #[test]
    fn mass_shifts_real_part_uniformly(z in 0.0f64..3.0, q in 0.01f64..3.0, m in 0.0f64..2.0) {
        let p = params().with_m_sq(m).unwrap();
        let shifted = lindhard_real(ModePoint::new(z, q), &p).unwrap();
        prop_assert!((shifted - re(z, q) - m).abs() <= 1e-12 * shifted.abs().max(1.0));
    }
}

#[test]
fn classicality_fails_on_shell() {
    let p = params();
    let q = 0.1;
    let roots = dispersion_roots(q, &p).unwrap();
    let in_band = roots.iter().copied().find(|&z| r(z, q) > 0.0).expect("in-band root at q=0.1");
    match classicality(ModePoint::new(in_band, q), &p) {
        Err(Error::OnShellDivergence { .. }) => {}
        other => panic!("expected on-shell divergence, got {other:?}"),
    }
}

#[test]
fn zero_over_zero_is_undefined() {
    // Above the continuum the damping vanishes; with a tuned mass the real part does too.
    let (z, q) = (3.0, 1.0);
    let m = -re(z, q);
    let p = params().with_m_sq(m.max(0.0)).unwrap();
    if m >= 0.0 {
        let v = lindhard_real(ModePoint::new(z, q), &p).unwrap();
        if v.abs() < 1e-12 {
            assert!(matches!(classicality(ModePoint::new(z, q), &p), Err(Error::Undefined)));
        }
    }
    assert_eq!(r(z, q), 0.0);
}

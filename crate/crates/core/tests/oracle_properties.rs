use std::f64::consts::PI;

use icefish_core::analysis::{surface_h_at_one, surface_p_at_one};
use icefish_core::basis::radial_mu;
use icefish_core::hole::hole_kernel_tilde;
use icefish_core::oracle::{
    oracle_hole_l, oracle_hole_l_with_cutoff, oracle_s_hat_at_one, oracle_strip_l, RadialBasis,
    StripBasis,
};
use icefish_core::strip::strip_kernel_tilde;
use proptest::prelude::*;

/// The kernel with the distance factor `(1/4 - (j-1)^2)` in place of
/// `(1/4 - (i-j)^2)`.
fn kernel_with_shifted_index(m: u32, i: usize, j: usize) -> f64 {
    let s = (i + j + m as usize) as f64 - 1.0;
    let d = j as f64 - 1.0;
    radial_mu(m, i) * radial_mu(m, j) / (4.0 * PI * (s * s - 0.25) * (0.25 - d * d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn hole_kernel_matches_hankel_quadrature(m in 0u32..=4, i in 1usize..=9, j in 1usize..=9) {
        let e = oracle_hole_l(m, i, j, RadialBasis::H).unwrap();
        let closed = hole_kernel_tilde(m, i, j);
        prop_assert!((closed - e.value).abs() <= 1e-10 + e.tail_bound, "{closed} vs {}", e.value);
    }

    #[test]
    fn strip_kernel_matches_log_quadrature(i in 1usize..=10, j in 1usize..=10) {
        let v = oracle_strip_l(i, j, StripBasis::P).unwrap();
        prop_assert!((strip_kernel_tilde(i, j) - v).abs() <= 1e-10);
    }
}

#[test]
fn distance_factor_uses_index_difference() {
    // the factors coincide when i = 1 or i = 2j - 1
    for (m, i, j) in [(1, 2, 2), (1, 2, 3), (2, 2, 4), (0, 4, 1)] {
        let e = oracle_hole_l(m, i, j, RadialBasis::H).unwrap();
        let right = hole_kernel_tilde(m, i, j);
        let wrong = kernel_with_shifted_index(m, i, j);
        assert!((right - e.value).abs() < 1e-12, "{right} vs {}", e.value);
        assert!((wrong - e.value).abs() > 1e-3, "{wrong} vs {}", e.value);
    }
    // the shifted form is not even symmetric
    assert!((kernel_with_shifted_index(1, 1, 2) - kernel_with_shifted_index(1, 2, 1)).abs() > 1e-3);
    assert_eq!(
        kernel_with_shifted_index(1, 1, 2),
        hole_kernel_tilde(1, 1, 2)
    );
    // both agree on the first diagonal entry
    assert_eq!(
        kernel_with_shifted_index(2, 1, 1),
        hole_kernel_tilde(2, 1, 1)
    );
}

#[test]
fn kernels_are_symmetric() {
    for m in 0..=3 {
        for i in 1..=8 {
            for j in 1..=8 {
                assert_eq!(hole_kernel_tilde(m, i, j), hole_kernel_tilde(m, j, i));
            }
        }
    }
    for i in 1..=12 {
        for j in 1..=12 {
            assert_eq!(strip_kernel_tilde(i, j), strip_kernel_tilde(j, i));
        }
    }
}

#[test]
fn edge_surface_values_are_positive_and_match_quadrature() {
    for m in 1..=5 {
        for j in 1..=10 {
            let closed = surface_h_at_one(m, j);
            assert!(closed > 0.0, "m={m} j={j}");
            let e = oracle_s_hat_at_one(m, j).unwrap();
            assert!(e.value > 0.0);
            assert!(
                (closed - e.value).abs() <= 1e-9 + e.tail_bound,
                "m={m} j={j}"
            );
        }
    }
    for j in 1..=20 {
        assert!(surface_p_at_one(j) > 0.0);
    }
}

#[test]
fn edge_surface_value_rejects_axisymmetric_mode() {
    assert!(oracle_s_hat_at_one(0, 1).is_err());
    assert!(oracle_s_hat_at_one(1, 0).is_err());
}

#[test]
fn doubling_the_cutoff_stays_within_the_tail_bound() {
    for (m, i, j) in [(0, 2, 3), (1, 1, 1), (3, 4, 2), (2, 6, 6)] {
        let a = oracle_hole_l_with_cutoff(m, i, j, RadialBasis::Q, 100.0).unwrap();
        let b = oracle_hole_l_with_cutoff(m, i, j, RadialBasis::Q, 200.0).unwrap();
        assert!(b.tail_bound < 1e-13);
        assert!((a.value - b.value).abs() <= a.tail_bound + b.tail_bound + 1e-14);
    }
}

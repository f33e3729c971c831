//! Bessel functions of the first kind, integer order.

/// Arguments at or below this use the ascending series.
const SERIES_CUTOFF: f64 = 2.0;

const RESCALE_AT: f64 = 1e250;

fn series(m: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    // (x/2)^m / m!
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / k as f64;
    }
    let mut sum = term;
    for k in 1..200 {
        term *= q / (k as f64 * (k + m) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Starting order for the backward recurrence.
fn miller_start(nmax: usize, x: f64) -> usize {
    let top = (nmax as f64).max(x);
    let n = top + 30.0 + 6.0 * top.sqrt();
    let n = n.ceil() as usize;
    n + n % 2
}

/// `J_0(x) .. J_nmax(x)` for `x >= 0`.
///
/// Small arguments use the ascending series per order; otherwise one Miller
/// backward recurrence normalized by `J_0 + 2 sum J_{2k} = 1`.
pub fn bessel_j_all(nmax: usize, x: f64) -> Vec<f64> {
    if x == 0.0 {
        let mut out = vec![0.0; nmax + 1];
        out[0] = 1.0;
        return out;
    }
    if x <= SERIES_CUTOFF {
        return (0..=nmax).map(|m| series(m, x)).collect();
    }
    let start = miller_start(nmax, x);
    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    let two_over_x = 2.0 / x;
    for k in (1..=start).rev() {
        let next = k as f64 * two_over_x * vals[k] - vals[k + 1];
        vals[k - 1] = next;
        if next.abs() > RESCALE_AT {
            for v in vals[k - 1..].iter_mut() {
                *v /= RESCALE_AT;
            }
        }
    }
    let norm = vals[0] + 2.0 * vals.iter().skip(2).step_by(2).sum::<f64>();
    vals.truncate(nmax + 1);
    for v in vals.iter_mut() {
        *v /= norm;
    }
    vals
}

/// `J_m(x)` for integer `m >= 0`, `x >= 0`.
pub fn bessel_j(m: usize, x: f64) -> f64 {
    if x <= SERIES_CUTOFF {
        if x == 0.0 {
            return if m == 0 { 1.0 } else { 0.0 };
        }
        return series(m, x);
    }
    bessel_j_all(m, x)[m]
}

#[cfg(test)]
mod tests {
    use super::*;

    // 30-digit reference values
    #[allow(clippy::excessive_precision)]
    const REFERENCE: &[(usize, f64, f64)] = &[
        (1, 1.0, 0.440_050_585_744_933_5),
        (0, 0.5, 0.938_469_807_240_812_9),
        (0, 2.5, -0.048_383_776_468_198),
        (1, 7.3, 0.082_570_430_493_257_84),
        (3, 10.0, 0.058_379_379_305_186_815),
        (10, 15.0, -0.090_071_811_047_659_06),
        (20, 5.0, 2.770_330_052_128_941_6e-11),
        (0, 100.3, 0.041_857_982_899_804_08),
        (5, 199.7, -0.049_157_700_054_108_175),
        (40, 150.0, -0.053_178_029_743_433_99),
        (60, 190.0, -0.039_294_210_127_083_215),
        (60, 30.0, 9.807_557_643_128_625e-14),
        (2, 0.001, 1.249_999_895_833_336_5e-7),
        (25, 199.0, -0.054_328_754_213_780_965),
    ];

    #[test]
    fn matches_reference() {
        for &(m, x, want) in REFERENCE {
            let got = bessel_j(m, x);
            let rel = (got - want).abs() / want.abs();
            assert!(rel < 1e-12, "J_{m}({x}) = {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn at_zero() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        for m in 1..10 {
            assert_eq!(bessel_j(m, 0.0), 0.0);
        }
    }

    #[test]
    fn batch_consistent_with_single() {
        for x in [0.7, 3.0, 42.0, 180.0] {
            let all = bessel_j_all(30, x);
            for (m, v) in all.iter().enumerate() {
                let one = bessel_j(m, x);
                assert!((v - one).abs() <= 1e-14 * one.abs().max(1e-3));
            }
        }
    }

    #[test]
    fn wronskian_like_identity() {
        // J_{m-1} + J_{m+1} = (2m/x) J_m
        for x in [2.5, 17.0, 123.4] {
            let j = bessel_j_all(40, x);
            for m in 1..39 {
                let lhs = j[m - 1] + j[m + 1];
                let rhs = 2.0 * m as f64 / x * j[m];
                assert!((lhs - rhs).abs() < 1e-13);
            }
        }
    }
}

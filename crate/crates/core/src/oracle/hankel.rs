//! Brute-force Bessel-product integrals `int_0^inf J_mu(k) J_nu(k) k^-p dk`.
//!
//! The range `[0, K]` is integrated by Gauss panels a quarter period wide
//! (the product oscillates like `cos 2k`), each panel checked against a
//! higher-order rule and bisected when they disagree. The tail `[K, inf)`
//! is integrated term by term from the Hankel asymptotic expansions
//! `J_nu(k) ~ sqrt(2/(pi k)) Re[(P + iQ) e^{i chi}]`, so no closed form for
//! the full integral is involved.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;

use super::bessel::bessel_j_all;
use crate::basis::{hole_beta, radial_mu};
use crate::error::{Error, Result};

/// Default truncation point `K`.
pub const DEFAULT_CUTOFF: f64 = 200.0;

const PANEL_BUDGET: usize = 20_000;
const PANEL_TOL: f64 = 1e-15;
const MAX_ASYMPTOTIC_TERMS: usize = 60;

/// Integral value and an estimate of its total error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselIntegral {
    pub value: f64,
    /// Tail-series truncation plus quadrature disagreement plus rounding.
    pub tail_bound: f64,
}

/// Hankel asymptotic coefficients `a_n(nu)`, `n = 0..len`.
fn hankel_coeffs(nu: f64, len: usize) -> Vec<f64> {
    let four_nu2 = 4.0 * nu * nu;
    let mut out = Vec::with_capacity(len);
    let mut a = 1.0;
    out.push(a);
    for n in 1..len {
        let odd = (2 * n - 1) as f64;
        a *= (four_nu2 - odd * odd) / (8.0 * n as f64);
        out.push(a);
    }
    out
}

fn i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `int_K^inf k^-s e^{2ik} dk` by repeated integration by parts.
fn oscillatory_tail(s: f64, cutoff: f64) -> (Complex64, f64) {
    let two_i = Complex64::new(0.0, 2.0);
    let mut coeff = cutoff.powf(-s) / two_i;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut last = coeff.norm();
    for l in 0..400 {
        sum += coeff;
        last = coeff.norm();
        let next = coeff * (s + l as f64) / (cutoff * two_i);
        if next.norm() < 1e-20 * sum.norm() || next.norm() > coeff.norm() {
            last = next.norm();
            break;
        }
        coeff = next;
    }
    (-Complex64::from_polar(1.0, 2.0 * cutoff) * sum, last)
}

/// `int_K^inf k^-p J_mu(k) J_nu(k) dk` from the asymptotic expansions.
fn asymptotic_tail(mu: usize, nu: usize, power: f64, cutoff: f64) -> (f64, f64) {
    let len = MAX_ASYMPTOTIC_TERMS;
    let a_mu = hankel_coeffs(mu as f64, len);
    let a_nu = hankel_coeffs(nu as f64, len);

    // keep terms while |a_n| K^-n decreases for both orders
    let mut used = 1;
    for n in 1..len {
        let t_mu = a_mu[n].abs() * cutoff.powi(-(n as i32));
        let t_nu = a_nu[n].abs() * cutoff.powi(-(n as i32));
        let p_mu = a_mu[n - 1].abs() * cutoff.powi(-(n as i32 - 1));
        let p_nu = a_nu[n - 1].abs() * cutoff.powi(-(n as i32 - 1));
        if (t_mu > p_mu && t_mu > 0.0) || (t_nu > p_nu && t_nu > 0.0) {
            break;
        }
        used = n + 1;
        if t_mu.max(t_nu) < 1e-20 {
            break;
        }
    }

    // A_mu conj(A_nu) and A_mu A_nu as power series in 1/k
    let mut u = vec![Complex64::new(0.0, 0.0); used];
    let mut v = vec![Complex64::new(0.0, 0.0); used];
    for p in 0..used {
        for q in 0..used - p {
            let prod = a_mu[p] * a_nu[q];
            u[p + q] += i_pow(p) * i_pow(q).conj() * prod;
            v[p + q] += i_pow(p + q) * prod;
        }
    }

    let delta = (mu as f64 - nu as f64) * PI / 2.0;
    let sigma = (mu as f64 + nu as f64 + 1.0) * PI / 2.0;
    let phase_u = Complex64::from_polar(1.0, -delta);
    let phase_v = Complex64::from_polar(1.0, -sigma);

    let mut smooth = Complex64::new(0.0, 0.0);
    let mut osc = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    for n in 0..used {
        let e = power + n as f64;
        let term = u[n] * cutoff.powf(-e) / e;
        smooth += term;
        let (tail, tail_err) = oscillatory_tail(1.0 + power + n as f64, cutoff);
        osc += v[n] * tail;
        err += v[n].norm() * tail_err;
        if n + 1 == used {
            err += term.norm() + (v[n] * tail).norm();
        }
    }
    let value = ((phase_u * smooth).re + (phase_v * osc).re) / PI;
    (value, err / PI)
}

fn product_integrand(mu: usize, nu: usize, power: i32, k: f64) -> f64 {
    if k == 0.0 {
        return 0.0;
    }
    let j = bessel_j_all(mu.max(nu), k);
    j[mu] * j[nu] * k.powi(-power)
}

/// `int_0^K f` with quarter-period panels, each adaptively bisected.
fn panel_integral(f: &dyn Fn(f64) -> f64, cutoff: f64) -> Result<(f64, f64, f64)> {
    let low = GaussLegendre::new(16.try_into().unwrap());
    let high = GaussLegendre::new(24.try_into().unwrap());
    let width = PI / 4.0;
    let panels = (cutoff / width).ceil() as usize;
    let mut stack: Vec<(f64, f64)> = (0..panels)
        .rev()
        .map(|p| (p as f64 * width, ((p + 1) as f64 * width).min(cutoff)))
        .collect();
    let (mut total, mut err, mut abs_total) = (0.0, 0.0, 0.0);
    let mut used = 0;
    while let Some((a, b)) = stack.pop() {
        used += 1;
        if used > PANEL_BUDGET {
            return Err(Error::Accuracy(format!(
                "more than {PANEL_BUDGET} panels needed on [0, {cutoff}]"
            )));
        }
        let lo = low.integrate(a, b, f);
        let hi = high.integrate(a, b, f);
        let diff = (hi - lo).abs();
        if diff > PANEL_TOL * (b - a).max(1e-3) && b - a > 1e-6 {
            let mid = 0.5 * (a + b);
            stack.push((mid, b));
            stack.push((a, mid));
            continue;
        }
        total += hi;
        err += diff;
        abs_total += high.integrate(a, b, |k| f(k).abs());
    }
    Ok((total, err, abs_total))
}

/// `int_0^inf J_mu(k) J_nu(k) k^-power dk`, truncated at `cutoff` with the
/// asymptotic tail added.
pub fn bessel_product_integral(
    mu: usize,
    nu: usize,
    power: i32,
    cutoff: f64,
) -> Result<BesselIntegral> {
    if mu + nu < power as usize - 1 {
        return Err(Error::InvalidArgument(format!(
            "integrand J_{mu} J_{nu} k^-{power} not integrable at 0"
        )));
    }
    let f = |k: f64| product_integrand(mu, nu, power, k);
    let (body, quad_err, abs_body) = panel_integral(&f, cutoff)?;
    let (tail, tail_err) = asymptotic_tail(mu, nu, power as f64, cutoff);
    let rounding = 64.0 * f64::EPSILON * abs_body;
    Ok(BesselIntegral {
        value: body + tail,
        tail_bound: tail_err + quad_err + rounding,
    })
}

/// Which radial family an oracle entry is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialBasis {
    /// Orthonormal radial polynomials `h_j^m`.
    H,
    /// Neumann-adapted combinations `q_j^m = h_j^m + beta_j h_{j+1}^m`.
    Q,
}

/// `int H[h_i] H[h_j] dk = (-1)^{i+j} mu_i mu_j int J_{2i+m-1} J_{2j+m-1} k^-2 dk`.
fn h_pairing(m: u32, i: usize, j: usize, cutoff: f64) -> Result<BesselIntegral> {
    let order = |t: usize| 2 * t + m as usize - 1;
    let raw = bessel_product_integral(order(i), order(j), 2, cutoff)?;
    let sign = if (i + j).is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale = radial_mu(m, i) * radial_mu(m, j);
    Ok(BesselIntegral {
        value: sign * scale * raw.value,
        tail_bound: scale * raw.tail_bound,
    })
}

/// Oracle for the hole surface-operator entry, truncated at [`DEFAULT_CUTOFF`].
pub fn oracle_hole_l(m: u32, i: usize, j: usize, basis: RadialBasis) -> Result<BesselIntegral> {
    oracle_hole_l_with_cutoff(m, i, j, basis, DEFAULT_CUTOFF)
}

/// [`oracle_hole_l`] with an explicit truncation point.
pub fn oracle_hole_l_with_cutoff(
    m: u32,
    i: usize,
    j: usize,
    basis: RadialBasis,
    cutoff: f64,
) -> Result<BesselIntegral> {
    if i == 0 || j == 0 {
        return Err(Error::InvalidArgument("radial indices start at 1".into()));
    }
    match basis {
        RadialBasis::H => h_pairing(m, i, j, cutoff),
        RadialBasis::Q => {
            let (bi, bj) = (hole_beta(m, i), hole_beta(m, j));
            let terms = [
                (1.0, i, j),
                (bi, i + 1, j),
                (bj, i, j + 1),
                (bi * bj, i + 1, j + 1),
            ];
            let mut out = BesselIntegral {
                value: 0.0,
                tail_bound: 0.0,
            };
            for (w, a, b) in terms {
                let e = h_pairing(m, a, b, cutoff)?;
                out.value += w * e.value;
                out.tail_bound += w.abs() * e.tail_bound;
            }
            Ok(out)
        }
    }
}

/// `(S_r h_j^m)(1) = (-1)^{j-1} mu_j^m int_0^inf J_{2j+m-1}(k) J_m(k) / k dk`.
pub fn oracle_s_hat_at_one(m: u32, j: usize) -> Result<BesselIntegral> {
    if m == 0 {
        return Err(Error::ModeZero(0));
    }
    if j == 0 {
        return Err(Error::InvalidArgument("radial indices start at 1".into()));
    }
    let order = 2 * j + m as usize - 1;
    let raw = bessel_product_integral(order, m as usize, 1, DEFAULT_CUTOFF)?;
    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
    let mu = radial_mu(m, j);
    Ok(BesselIntegral {
        value: sign * mu * raw.value,
        tail_bound: mu * raw.tail_bound,
    })
}

//! `-(1/pi) int int ln|x - s| f(x) g(s) ds dx` over `[-1, 1]^2`.
//!
//! The square is split along `x = s`. On each triangle the distance
//! `u = |x - s|` becomes an outer variable, so the singularity sits at the
//! end of a one-dimensional integral `int_0^2 ln(u) G(u) du`. The inner
//! integral `G(u)` is a polynomial integral done exactly by Gauss rules; the
//! outer one uses panels graded geometrically toward `u = 0`.

use std::f64::consts::PI;

use gauss_quad::legendre::GaussLegendre;

use crate::basis::{legendre_eval, strip_beta};
use crate::error::{Error, Result};

const INNER_POINTS: usize = 32;
const OUTER_POINTS: usize = 32;
const GRADING: f64 = 0.2;
const LEVELS: usize = 26;

/// Which strip family an oracle entry is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripBasis {
    /// Normalized Legendre polynomials `p_j`.
    P,
    /// Neumann-adapted `q_j = (p_j - beta_j p_{j+2}) / alpha_j`.
    Q,
}

fn strip_function(basis: StripBasis, j: usize, x: f64) -> f64 {
    match basis {
        StripBasis::P => legendre_eval(j, x),
        StripBasis::Q => {
            let b = strip_beta(j);
            (legendre_eval(j, x) - b * legendre_eval(j + 2, x)) / (1.0 + b * b).sqrt()
        }
    }
}

/// Outer panels `[0, 2]` graded toward zero.
fn outer_panels() -> Vec<(f64, f64)> {
    let mut edges = vec![2.0];
    for _ in 0..LEVELS {
        let last = *edges.last().unwrap();
        edges.push(last * GRADING);
    }
    edges.push(0.0);
    edges.reverse();
    edges.windows(2).map(|w| (w[0], w[1])).collect()
}

/// `-(1/pi) int int ln|x - s| f(x) g(s)` for smooth polynomial-like `f, g`.
pub fn log_kernel_integral(f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64) -> f64 {
    let inner = GaussLegendre::new(INNER_POINTS.try_into().unwrap());
    let outer = GaussLegendre::new(OUTER_POINTS.try_into().unwrap());
    // G(u) = int_{-1}^{1-u} [f(v+u) g(v) + f(v) g(v+u)] dv
    let big_g = |u: f64| inner.integrate(-1.0, 1.0 - u, |v| f(v + u) * g(v) + f(v) * g(v + u));
    let total: f64 = outer_panels()
        .into_iter()
        .map(|(a, b)| outer.integrate(a, b, |u| u.ln() * big_g(u)))
        .sum();
    -total / PI
}

/// Oracle for the strip surface-operator entry in the `p` or `q` family.
pub fn oracle_strip_l(i: usize, j: usize, basis: StripBasis) -> Result<f64> {
    if basis == StripBasis::Q && (i == 0 || j == 0) {
        return Err(Error::InvalidArgument("q indices start at 1".into()));
    }
    let f = |x: f64| strip_function(basis, i, x);
    let g = |x: f64| strip_function(basis, j, x);
    Ok(log_kernel_integral(&f, &g))
}

//! Independent brute-force recomputation of matrix entries.
//!
//! Nothing here uses the closed forms from [`crate::strip`] or
//! [`crate::hole`]; entries come from quadrature of the basis functions
//! themselves and from numerical Bessel integrals.

pub mod bessel;
pub mod hankel;
pub mod logkernel;

use std::fmt;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;

use crate::analysis::surface_h_at_one;
use crate::basis::{hole_beta, radial_h_eval, BasisSpec, Geometry};
use crate::error::{Error, Result};
use crate::hole::{assemble_hole, hole_kernel_tilde};
use crate::strip::{assemble_strip, strip_kernel_tilde};

pub use bessel::{bessel_j, bessel_j_all};
pub use hankel::{
    bessel_product_integral, oracle_hole_l, oracle_hole_l_with_cutoff, oracle_s_hat_at_one,
    BesselIntegral, RadialBasis, DEFAULT_CUTOFF,
};
pub use logkernel::{log_kernel_integral, oracle_strip_l, StripBasis};

const GRAM_POINTS: usize = 64;

/// Which matrix or operator value a report row checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Mass,
    Stiffness,
    /// Surface-operator matrix in the Neumann-adapted basis.
    Kernel,
    /// Surface-operator matrix in the raw (Legendre or radial) basis.
    KernelTilde,
    /// `(S_r h_j^m)(1)`; the `i` column carries `j`.
    SurfaceAtOne,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Mass => "M",
            Quantity::Stiffness => "K",
            Quantity::Kernel => "L",
            Quantity::KernelTilde => "L_tilde",
            Quantity::SurfaceAtOne => "S_at_one",
        }
    }

    /// Acceptance tolerance on `|closed_form - oracle|`.
    pub fn tolerance(self, geometry: Geometry) -> f64 {
        match (geometry, self) {
            (Geometry::Strip, Quantity::Mass) => 1e-10,
            (Geometry::Strip, Quantity::Stiffness) => 1e-9,
            (Geometry::Strip, _) => 1e-7,
            (Geometry::Hole, _) => 1e-8,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One closed-form entry compared against its oracle value.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub geometry: Geometry,
    pub m: u32,
    pub i: usize,
    pub j: usize,
    pub quantity: Quantity,
    pub closed_form: f64,
    pub oracle: f64,
    /// Always `|closed_form - oracle|`.
    pub abs_err: f64,
    /// Error estimate of the oracle itself; zero for polynomial quadratures.
    pub tail_bound: f64,
}

impl OracleReport {
    pub fn new(
        geometry: Geometry,
        m: u32,
        (i, j): (usize, usize),
        quantity: Quantity,
        closed_form: f64,
        oracle: f64,
        tail_bound: f64,
    ) -> Self {
        OracleReport {
            geometry,
            m,
            i,
            j,
            quantity,
            closed_form,
            oracle,
            abs_err: (closed_form - oracle).abs(),
            tail_bound: tail_bound.max(0.0),
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.quantity.tolerance(self.geometry)
    }

    pub fn passes(&self) -> bool {
        self.abs_err <= self.tolerance()
    }
}

/// `(int q_i q_j w, int q_i' q_j' w + m^2/r q_i q_j)` by high-order Gauss
/// quadrature; `w = 1` on `[-1, 1]` for the strip, `w = r` on `[0, 1]` for
/// the hole.
pub fn oracle_gram(spec: &BasisSpec, i: usize, j: usize) -> Result<(f64, f64)> {
    let rule = GaussLegendre::new(GRAM_POINTS.try_into().unwrap());
    let q = |k: usize, x: f64, d: usize| spec.q_eval(k, x, d);
    // validate indices once; the closures below then cannot fail
    q(i, 0.5, 0)?;
    q(j, 0.5, 0)?;
    let val = |k: usize, x: f64, d: usize| q(k, x, d).unwrap_or(f64::NAN);
    match spec.geometry() {
        Geometry::Strip => {
            let mass = rule.integrate(-1.0, 1.0, |x| val(i, x, 0) * val(j, x, 0));
            let stiff = rule.integrate(-1.0, 1.0, |x| val(i, x, 1) * val(j, x, 1));
            Ok((mass, stiff))
        }
        Geometry::Hole => {
            let m2 = (spec.mode() as f64).powi(2);
            let mass = rule.integrate(0.0, 1.0, |r| val(i, r, 0) * val(j, r, 0) * r);
            let stiff = rule.integrate(0.0, 1.0, |r| {
                let grad = val(i, r, 1) * val(j, r, 1) * r;
                if spec.mode() == 0 {
                    grad
                } else {
                    grad + m2 / r * val(i, r, 0) * val(j, r, 0)
                }
            });
            Ok((mass, stiff))
        }
    }
}

/// `int (m^2/r h_i h_j + h_i' h_j' r) dr` for the raw radial polynomials.
pub fn oracle_radial_stiffness(m: u32, i: usize, j: usize) -> Result<f64> {
    radial_h_eval(m, i, 0.5, 0)?;
    radial_h_eval(m, j, 0.5, 0)?;
    let rule = GaussLegendre::new(GRAM_POINTS.try_into().unwrap());
    let h = |k: usize, r: f64, d: usize| radial_h_eval(m, k, r, d).unwrap_or(f64::NAN);
    let m2 = (m as f64).powi(2);
    Ok(rule.integrate(0.0, 1.0, |r| {
        let grad = h(i, r, 1) * h(j, r, 1) * r;
        if m == 0 {
            grad
        } else {
            grad + m2 / r * h(i, r, 0) * h(j, r, 0)
        }
    }))
}

/// Compare strip `M`, `K`, `L` (indices `1..=nmax`) and the Legendre-basis
/// kernel (indices `1..=nmax`) with their oracles.
pub fn validate_strip(nmax: usize) -> Result<Vec<OracleReport>> {
    if nmax == 0 {
        return Err(Error::InvalidArgument("empty index range".into()));
    }
    let sys = assemble_strip(nmax + 2)?;
    let mut out = Vec::new();
    for i in 1..=nmax {
        for j in 1..=nmax {
            let (r, c) = (i - 1, j - 1);
            let (mass, stiff) = oracle_gram(&sys.basis, i, j)?;
            let kern = oracle_strip_l(i, j, StripBasis::Q)?;
            let tilde = oracle_strip_l(i, j, StripBasis::P)?;
            let row = |q, closed, oracle| {
                OracleReport::new(Geometry::Strip, 0, (i, j), q, closed, oracle, 0.0)
            };
            out.push(row(Quantity::Mass, sys.mass[(r, c)], mass));
            out.push(row(Quantity::Stiffness, sys.stiffness[(r, c)], stiff));
            out.push(row(Quantity::Kernel, sys.kernel[(r, c)], kern));
            out.push(row(Quantity::KernelTilde, strip_kernel_tilde(i, j), tilde));
        }
    }
    Ok(out)
}

/// Raw-basis Hankel pairings for indices `1..=top`, as a matrix indexed from 0.
fn hole_pairings(m: u32, top: usize) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let mut value = DMatrix::zeros(top, top);
    let mut bound = DMatrix::zeros(top, top);
    for i in 1..=top {
        for j in i..=top {
            let e = oracle_hole_l(m, i, j, RadialBasis::H)?;
            for (a, b) in [(i - 1, j - 1), (j - 1, i - 1)] {
                value[(a, b)] = e.value;
                bound[(a, b)] = e.tail_bound;
            }
        }
    }
    Ok((value, bound))
}

/// Compare hole `M`, `K`, `L`, the radial kernel and `(S_r h_j)(1)` with
/// their oracles for modes `0..=mmax` and indices up to `nmax`.
///
/// For `m = 0` the Neumann-adapted rows start at `j = 2`.
pub fn validate_hole(mmax: u32, nmax: usize) -> Result<Vec<OracleReport>> {
    if nmax == 0 {
        return Err(Error::InvalidArgument("empty index range".into()));
    }
    let mut out = Vec::new();
    for m in 0..=mmax {
        let sys = assemble_hole(m, nmax.max(2))?;
        let first = *sys.basis.indices().start();
        let (pair, bound) = hole_pairings(m, nmax + 1)?;
        let row = |ij, q, closed, oracle, tail| {
            OracleReport::new(Geometry::Hole, m, ij, q, closed, oracle, tail)
        };
        for i in 1..=nmax {
            for j in 1..=nmax {
                out.push(row(
                    (i, j),
                    Quantity::KernelTilde,
                    hole_kernel_tilde(m, i, j),
                    pair[(i - 1, j - 1)],
                    bound[(i - 1, j - 1)],
                ));
            }
        }
        for i in first..=nmax {
            for j in first..=nmax {
                let (r, c) = (i - first, j - first);
                let (mass, stiff) = oracle_gram(&sys.basis, i, j)?;
                let (bi, bj) = (hole_beta(m, i), hole_beta(m, j));
                let terms = [
                    (1.0, i, j),
                    (bi, i + 1, j),
                    (bj, i, j + 1),
                    (bi * bj, i + 1, j + 1),
                ];
                let (mut kern, mut tail) = (0.0, 0.0);
                for (w, a, b) in terms {
                    kern += w * pair[(a - 1, b - 1)];
                    tail += w.abs() * bound[(a - 1, b - 1)];
                }
                out.push(row((i, j), Quantity::Mass, sys.mass[(r, c)], mass, 0.0));
                out.push(row(
                    (i, j),
                    Quantity::Stiffness,
                    sys.stiffness[(r, c)],
                    stiff,
                    0.0,
                ));
                out.push(row(
                    (i, j),
                    Quantity::Kernel,
                    sys.kernel[(r, c)],
                    kern,
                    tail,
                ));
            }
        }
        if m >= 1 {
            for j in 1..=nmax {
                let e = oracle_s_hat_at_one(m, j)?;
                out.push(row(
                    (j, 0),
                    Quantity::SurfaceAtOne,
                    surface_h_at_one(m, j),
                    e.value,
                    e.tail_bound,
                ));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_invariants() {
        let r = OracleReport::new(Geometry::Hole, 1, (1, 2), Quantity::Kernel, 1.0, 1.5, -3.0);
        assert_eq!(r.abs_err, 0.5);
        assert_eq!(r.tail_bound, 0.0);
        assert!(!r.passes());
    }

    #[test]
    fn gram_rejects_bad_index() {
        let spec = BasisSpec::hole(0, 5).unwrap();
        assert!(oracle_gram(&spec, 1, 2).is_err());
    }

    #[test]
    fn strip_sweep_small() {
        let rows = validate_strip(4).unwrap();
        assert_eq!(rows.len(), 4 * 16);
        for r in &rows {
            assert!(r.passes(), "{r:?}");
        }
    }
}

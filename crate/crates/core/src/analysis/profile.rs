//! Sloshing profiles `xi = sum c_j q_j` and their critical points.

use std::f64::consts::PI;

use nalgebra::DVector;

use crate::basis::{BasisSpec, Geometry};
use crate::error::{Error, Result};
use crate::gevp::EigenSolution;

/// Uniform samples of `xi'` used to bracket critical points.
pub const HIGH_SPOT_GRID: usize = 2048;
/// Bisection width for critical points.
pub const ROOT_TOL: f64 = 1e-12;
/// Roots of `xi'` this close to the edge are the edge itself.
pub const EDGE_MERGE: f64 = 1e-8;

const ZERO_EDGE_REL: f64 = 1e-10;

/// How a profile is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// `xi(1) = 1`.
    BoundaryOne,
    /// `max |xi| = 1`, attained with a positive value.
    MaxAbsOne,
}

/// A free-surface displacement in a boundary-adapted basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceProfile {
    basis: BasisSpec,
    coeffs: DVector<f64>,
    normalization: Normalization,
    edge_curvature: f64,
}

/// `(S_r h_j^m)(1) = mu_j^m / (2 pi (j + m - 1/2)(j - 1/2))`, positive.
pub fn surface_h_at_one(m: u32, j: usize) -> f64 {
    let (mf, jf) = (m as f64, j as f64);
    crate::basis::radial_mu(m, j) / (2.0 * PI * (jf + mf - 0.5) * (jf - 0.5))
}

/// `-(1/pi) int ln(1 - s) p_j(s) ds = sqrt((2j+1)/2) 2 / (pi j (j+1))`, `j >= 1`.
pub fn surface_p_at_one(j: usize) -> f64 {
    let jf = j as f64;
    (0.5 * (2.0 * jf + 1.0)).sqrt() * 2.0 / (PI * jf * (jf + 1.0))
}

fn dot(a: &[f64], b: &DVector<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

impl SurfaceProfile {
    /// Builds a profile from raw coefficients over `basis.indices()`.
    ///
    /// The sign is fixed so `xi(1) > 0`. If `xi(1)` vanishes relative to the
    /// profile's size, `BoundaryOne` falls back to `MaxAbsOne`.
    pub fn new(basis: BasisSpec, coeffs: DVector<f64>, norm: Normalization) -> Result<Self> {
        if coeffs.len() != basis.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a basis of dimension {}",
                coeffs.len(),
                basis.len()
            )));
        }
        if coeffs.iter().all(|c| *c == 0.0) || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::ZeroProfile);
        }
        let mut p = SurfaceProfile {
            basis,
            coeffs,
            normalization: norm,
            edge_curvature: 0.0,
        };
        let terms = p.basis.q_eval_all(1.0, 0)?;
        let edge = dot(&terms, &p.coeffs);
        let cancellation: f64 = terms
            .iter()
            .zip(p.coeffs.iter())
            .map(|(q, c)| (q * c).abs())
            .sum();
        let edge_vanishes = edge.abs() <= ZERO_EDGE_REL * cancellation;
        let scale = match norm {
            Normalization::BoundaryOne if !edge_vanishes => edge,
            _ => {
                p.normalization = Normalization::MaxAbsOne;
                let peak = p.max_abs_sample()?;
                // sign first by the edge, then by the peak
                let sign = if edge_vanishes {
                    peak.signum()
                } else {
                    edge.signum()
                };
                sign * peak.abs()
            }
        };
        p.coeffs /= scale;
        p.edge_curvature = p.eval(1.0, 2)?;
        Ok(p)
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn coeffs(&self) -> &DVector<f64> {
        &self.coeffs
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn geometry(&self) -> Geometry {
        self.basis.geometry()
    }

    pub fn mode(&self) -> u32 {
        self.basis.mode()
    }

    /// `(d/dx)^deriv xi(x)`.
    pub fn eval(&self, x: f64, deriv: usize) -> Result<f64> {
        Ok(dot(&self.basis.q_eval_all(x, deriv)?, &self.coeffs))
    }

    /// `xi''(1)` from the polynomial expansion.
    pub fn boundary_curvature(&self) -> f64 {
        self.edge_curvature
    }

    /// Sample of largest magnitude over the search grid on `[0, 1]`.
    fn max_abs_sample(&self) -> Result<f64> {
        let mut best = 0.0f64;
        for k in 0..=HIGH_SPOT_GRID {
            let v = self.eval(k as f64 / HIGH_SPOT_GRID as f64, 0)?;
            if v.abs() > best.abs() {
                best = v;
            }
        }
        Ok(best)
    }

    /// Zeros of `xi'` in `(0, 1)`, ascending, excluding the edge.
    pub fn interior_critical_points(&self) -> Result<Vec<f64>> {
        let h = 1.0 / HIGH_SPOT_GRID as f64;
        let mut prev = (0.0, self.eval(0.0, 1)?);
        let mut roots = Vec::new();
        for k in 1..=HIGH_SPOT_GRID {
            let x = k as f64 * h;
            let cur = (x, self.eval(x, 1)?);
            if prev.1 == 0.0 && prev.0 > 0.0 {
                roots.push(prev.0);
            } else if prev.1 * cur.1 < 0.0 {
                roots.push(self.bisect_slope(prev, cur)?);
            }
            prev = cur;
        }
        roots.retain(|&r| r > 0.0 && r < 1.0 - EDGE_MERGE);
        Ok(roots)
    }

    fn bisect_slope(&self, mut lo: (f64, f64), mut hi: (f64, f64)) -> Result<f64> {
        while hi.0 - lo.0 > ROOT_TOL {
            let mid = 0.5 * (lo.0 + hi.0);
            let v = self.eval(mid, 1)?;
            if v == 0.0 {
                return Ok(mid);
            }
            if v * lo.1 < 0.0 {
                hi = (mid, v);
            } else {
                lo = (mid, v);
            }
        }
        Ok(0.5 * (lo.0 + hi.0))
    }

    /// Location of the maximum of `xi` on `[0, 1]` and whether it is the edge.
    ///
    /// Interior critical points win ties against the edge.
    pub fn high_spot(&self) -> Result<(f64, bool)> {
        let edge = self.eval(1.0, 0)?;
        let mut best = (1.0, edge, true);
        let tie = 1e-12 * edge.abs().max(1.0);
        let mut candidates = self.interior_critical_points()?;
        candidates.insert(0, 0.0);
        for x in candidates {
            let v = self.eval(x, 0)?;
            let beats = if best.2 {
                v >= best.1 - tie
            } else {
                v > best.1
            };
            if beats {
                best = (x, v, false);
            }
        }
        Ok((best.0, best.2))
    }

    /// Zeros of `xi'` in `(0, 1]`, ascending; always ends with `1.0`.
    pub fn derivative_zeros(&self) -> Result<Vec<f64>> {
        let mut z = self.interior_critical_points()?;
        z.push(1.0);
        Ok(z)
    }

    /// `(S_r xi)(1) = sum a_j ((S_r h_j)(1) + beta_j (S_r h_{j+1})(1))`.
    pub fn surface_at_one(&self) -> Result<f64> {
        self.hole_mode()?;
        Ok(self.edge_surface_value())
    }

    /// Surface operator at the edge for either geometry.
    fn edge_surface_value(&self) -> f64 {
        let b = &self.basis;
        let per_basis = |j: usize| match b.geometry() {
            Geometry::Hole => {
                surface_h_at_one(b.mode(), j) + b.beta(j) * surface_h_at_one(b.mode(), j + 1)
            }
            Geometry::Strip => {
                (surface_p_at_one(j) - b.beta(j) * surface_p_at_one(j + 2)) / b.alpha(j)
            }
        };
        b.indices()
            .zip(self.coeffs.iter())
            .map(|(j, a)| a * per_basis(j))
            .sum()
    }

    /// `m^2 + Bo (1 - lambda (S xi)(1))` (`m = 0` for the strip), the edge
    /// curvature implied by the dynamic boundary condition
    /// `xi - xi''/Bo + m^2 xi/(Bo r^2) = lambda S xi` with `xi'(1) = 0`.
    pub fn curvature_at_boundary(&self, lambda: f64, bond: f64) -> Result<f64> {
        let m = match self.geometry() {
            Geometry::Strip => 0,
            Geometry::Hole => self.hole_mode()?,
        };
        if self.normalization != Normalization::BoundaryOne {
            return Err(Error::NotBoundaryNormalized);
        }
        let mf = m as f64;
        Ok(mf * mf + bond * (1.0 - lambda * self.edge_surface_value()))
    }

    fn hole_mode(&self) -> Result<u32> {
        if self.geometry() != Geometry::Hole {
            return Err(Error::WrongGeometry { expected: "hole" });
        }
        match self.mode() {
            0 => Err(Error::ModeZero(0)),
            m => Ok(m),
        }
    }
}

/// Profile of eigenpair `j` (1-based) of a solution.
pub fn profile_from_solution(
    solution: &EigenSolution,
    j: usize,
    norm: Normalization,
) -> Result<SurfaceProfile> {
    if j == 0 || j > solution.len() {
        return Err(Error::EigenCount {
            requested: j,
            dim: solution.len(),
        });
    }
    SurfaceProfile::new(
        solution.basis.clone(),
        solution.vectors[j - 1].clone(),
        norm,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(basis: &BasisSpec, k: usize) -> DVector<f64> {
        let mut c = DVector::zeros(basis.len());
        c[k] = 1.0;
        c
    }

    #[test]
    fn boundary_normalized_single_mode() {
        let basis = BasisSpec::hole(1, 6).unwrap();
        let c = unit(&basis, 0) * -3.0;
        let p = SurfaceProfile::new(basis, c, Normalization::BoundaryOne).unwrap();
        assert!((p.eval(1.0, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!(p.eval(1.0, 1).unwrap().abs() < 1e-12);
        assert_eq!(p.eval(0.0, 0).unwrap(), 0.0);
    }

    #[test]
    fn zero_profile_rejected() {
        let basis = BasisSpec::strip(6).unwrap();
        let c = DVector::zeros(basis.len());
        assert_eq!(
            SurfaceProfile::new(basis, c, Normalization::BoundaryOne),
            Err(Error::ZeroProfile)
        );
    }

    #[test]
    fn even_strip_mode_falls_back() {
        // q_2 is even and need not vanish at 1, q_1 - c q_3 tuned to vanish does
        let basis = BasisSpec::strip(8).unwrap();
        let a = basis.q_eval(1, 1.0, 0).unwrap();
        let b = basis.q_eval(3, 1.0, 0).unwrap();
        let mut c = DVector::zeros(basis.len());
        c[0] = b;
        c[2] = -a;
        let p = SurfaceProfile::new(basis, c, Normalization::BoundaryOne).unwrap();
        assert_eq!(p.normalization(), Normalization::MaxAbsOne);
    }

    #[test]
    fn surface_value_of_single_basis_function() {
        let basis = BasisSpec::hole(1, 4).unwrap();
        let b1 = basis.beta(1);
        let p = SurfaceProfile {
            coeffs: unit(&basis, 0),
            basis,
            normalization: Normalization::MaxAbsOne,
            edge_curvature: 0.0,
        };
        let want = surface_h_at_one(1, 1) + b1 * surface_h_at_one(1, 2);
        assert!((p.surface_at_one().unwrap() - want).abs() < 1e-15);
        assert!((surface_h_at_one(1, 1) - 4.0 / (3.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn strip_has_no_surface_value() {
        let basis = BasisSpec::strip(6).unwrap();
        let c = unit(&basis, 0);
        let p = SurfaceProfile::new(basis, c, Normalization::BoundaryOne).unwrap();
        assert!(matches!(
            p.surface_at_one(),
            Err(Error::WrongGeometry { .. })
        ));
    }
}

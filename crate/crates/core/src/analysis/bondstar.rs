//! The critical Bond number `Bo*` where `xi''(1)` changes sign.
//!
//! For the hole, `Bo*` is the fixed point of
//! `T(Bo) = m^2 / (lambda_1 (S_r xi)(1) - 1)`, found by iterating the
//! reciprocal map `T~(x) = (1/T(1/x) - alpha x) / (1 - alpha)`.

use crate::basis::Geometry;
use crate::error::{Error, Result};
use crate::gevp::solve_gevp;
use crate::hole::assemble_hole;
use crate::strip::assemble_strip;
use crate::system::{Bond, SpectralSystem};

use super::profile::{profile_from_solution, Normalization, SurfaceProfile};

/// `|lambda S - 1|` below this is treated as a pole of `T`.
pub const POLE_TOL: f64 = 1e-13;

/// Settings for the fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BondStarOptions {
    pub alpha: f64,
    pub n: usize,
    pub threshold: f64,
    pub bond0: f64,
    pub budget: usize,
}

impl Default for BondStarOptions {
    fn default() -> Self {
        BondStarOptions {
            alpha: 2.0,
            n: 80,
            threshold: 1e-14,
            bond0: 2.0,
            budget: 10_000,
        }
    }
}

/// Outcome of the fixed-point iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct BondStarResult {
    /// `1 / x_last`.
    pub bond_star: f64,
    pub m: u32,
    pub alpha: f64,
    /// Number of evaluations of `T~`.
    pub iterations: usize,
    pub threshold: f64,
    /// `x_0, x_1, ..., x_last`.
    pub trace: Vec<f64>,
}

/// Fundamental `BoundaryOne` profile and eigenvalue of an assembled system.
pub fn fundamental(system: &SpectralSystem, bond: Bond) -> Result<(f64, SurfaceProfile)> {
    let sol = solve_gevp(system, bond, 1)?;
    let profile = profile_from_solution(&sol, 1, Normalization::BoundaryOne)?;
    Ok((sol.lambdas[0], profile))
}

/// `T` and `T~` for one mode at one cutoff; assembles once.
#[derive(Debug, Clone)]
pub struct BondMap {
    system: SpectralSystem,
}

impl BondMap {
    pub fn new(m: u32, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::ModeZero(m));
        }
        Ok(BondMap {
            system: assemble_hole(m, n)?,
        })
    }

    pub fn mode(&self) -> u32 {
        self.system.mode()
    }

    pub fn system(&self) -> &SpectralSystem {
        &self.system
    }

    /// `T(Bo) = m^2 / (lambda_1 (S_r xi)(1) - 1)`.
    pub fn t(&self, bond: f64) -> Result<f64> {
        let b = Bond::new(bond)?;
        let (lambda, profile) = fundamental(&self.system, b)?;
        if profile.normalization() != Normalization::BoundaryOne {
            return Err(Error::NotBoundaryNormalized);
        }
        let den = lambda * profile.surface_at_one()? - 1.0;
        if den.abs() < POLE_TOL {
            return Err(Error::PoleOfT {
                bond,
                denominator: den,
            });
        }
        let m = self.mode() as f64;
        Ok(m * m / den)
    }

    /// `T~(x) = (1/T(1/x) - alpha x) / (1 - alpha)` for `0 < x <= 1`.
    pub fn t_tilde(&self, x: f64, alpha: f64) -> Result<f64> {
        if !(alpha > 1.0) || !alpha.is_finite() {
            return Err(Error::InvalidAlpha(alpha));
        }
        if !(x > 0.0 && x <= 1.0) {
            return Err(Error::InvalidReciprocal(x));
        }
        Ok((1.0 / self.t(1.0 / x)? - alpha * x) / (1.0 - alpha))
    }

    /// Iterate `x <- T~(x)` from `x_0 = 1/bond0` until two iterates agree
    /// to `threshold`. An iterate leaving `(0, 1]` ends the search with
    /// [`Error::NoFixedPoint`].
    pub fn iterate(&self, opts: &BondStarOptions) -> Result<BondStarResult> {
        if !(opts.threshold > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "threshold {}",
                opts.threshold
            )));
        }
        if !(opts.bond0 >= 1.0) || !opts.bond0.is_finite() {
            return Err(Error::InvalidBond(opts.bond0.to_string()));
        }
        let m = self.mode();
        let mut x = 1.0 / opts.bond0;
        let mut trace = vec![x];
        let no_fixed_point = |last| Error::NoFixedPoint {
            m,
            budget: opts.budget,
            last,
        };
        for it in 1..=opts.budget {
            let next = self.t_tilde(x, opts.alpha)?;
            trace.push(next);
            if !(next > 0.0 && next <= 1.0) {
                return Err(no_fixed_point(next));
            }
            if (next - x).abs() <= opts.threshold {
                return Ok(BondStarResult {
                    bond_star: 1.0 / next,
                    m,
                    alpha: opts.alpha,
                    iterations: it,
                    threshold: opts.threshold,
                    trace,
                });
            }
            x = next;
        }
        Err(no_fixed_point(x))
    }
}

/// `m^2/(lambda_1 (S_r xi)(1) - 1)` at one Bond number.
pub fn map_t(bond: f64, m: u32, n: usize) -> Result<f64> {
    BondMap::new(m, n)?.t(bond)
}

/// `(1/T(1/x) - alpha x) / (1 - alpha)`.
pub fn map_t_tilde(x: f64, alpha: f64, m: u32, n: usize) -> Result<f64> {
    BondMap::new(m, n)?.t_tilde(x, alpha)
}

/// `Bo*` for hole mode `m` by fixed-point iteration of `T~`.
pub fn bond_star_hole(m: u32, opts: &BondStarOptions) -> Result<BondStarResult> {
    if !(opts.alpha > 1.0) {
        return Err(Error::InvalidAlpha(opts.alpha));
    }
    BondMap::new(m, opts.n)?.iterate(opts)
}

/// Which value of `xi''(1)` a bisection tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureSource {
    /// Second derivative of the polynomial expansion; converges only
    /// algebraically in `n` because of the edge behaviour of `xi`.
    Direct,
    /// `m^2 + Bo (1 - lambda (S xi)(1))`, exact for the discrete eigenpair
    /// up to the spectral accuracy of `lambda` and `xi(1)`.
    Formula,
}

/// `xi''(1)` of the fundamental `BoundaryOne` profile.
pub fn edge_curvature(system: &SpectralSystem, bond: f64, source: CurvatureSource) -> Result<f64> {
    let (lambda, profile) = fundamental(system, Bond::new(bond)?)?;
    if profile.normalization() != Normalization::BoundaryOne {
        return Err(Error::NotBoundaryNormalized);
    }
    match source {
        CurvatureSource::Direct => Ok(profile.boundary_curvature()),
        CurvatureSource::Formula => profile.curvature_at_boundary(lambda, bond),
    }
}

/// Root of `xi''(1)` in `bracket` by bisection to width `tol`.
pub fn bisect_edge_curvature(
    system: &SpectralSystem,
    bracket: (f64, f64),
    tol: f64,
    source: CurvatureSource,
) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo > 0.0 && hi > lo && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "bracket ({lo}, {hi}), tol {tol}"
        )));
    }
    let mut f_lo = edge_curvature(system, lo, source)?;
    let f_hi = edge_curvature(system, hi, source)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f = edge_curvature(system, mid, source)?;
        if f == 0.0 {
            return Ok(mid);
        }
        if f.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Strip `Bo*` by bisection on the sign of the polynomial `xi''(1)`.
pub fn bond_star_strip(n: usize, bracket: (f64, f64), tol: f64) -> Result<f64> {
    bond_star_strip_with(n, bracket, tol, CurvatureSource::Direct)
}

/// [`bond_star_strip`] with a choice of curvature evaluation.
pub fn bond_star_strip_with(
    n: usize,
    bracket: (f64, f64),
    tol: f64,
    source: CurvatureSource,
) -> Result<f64> {
    let system = assemble_strip(n)?;
    bisect_edge_curvature(&system, bracket, tol, source)
}

/// Hole `Bo*` by bisection, as a cross-check on [`bond_star_hole`].
pub fn bond_star_hole_bisection(
    m: u32,
    n: usize,
    bracket: (f64, f64),
    tol: f64,
    source: CurvatureSource,
) -> Result<f64> {
    let map = BondMap::new(m, n)?;
    debug_assert_eq!(map.system().geometry(), Geometry::Hole);
    bisect_edge_curvature(map.system(), bracket, tol, source)
}

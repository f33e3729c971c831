//! Bond-number sweeps, energy decomposition and convergence studies.

use nalgebra::{DMatrix, DVector};

use crate::basis::Geometry;
use crate::error::{Error, Result};
use crate::gevp::{gevp_eigenvalues, solve_gevp, EigenSolution};
use crate::hole::assemble_hole;
use crate::strip::assemble_strip;
use crate::system::{Bond, SpectralSystem};

use super::profile::{profile_from_solution, Normalization, SurfaceProfile};

/// Assemble either geometry; `m` is ignored for the strip.
pub fn assemble(geometry: Geometry, m: u32, n: usize) -> Result<SpectralSystem> {
    match geometry {
        Geometry::Strip => assemble_strip(n),
        Geometry::Hole => assemble_hole(m, n),
    }
}

/// Fundamental mode at one Bond number.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub bond: f64,
    pub lambda1: f64,
    /// Location of the maximum of the profile on `[0, 1]`.
    pub high_spot: f64,
    /// `high_spot` is the edge `x = 1`.
    pub on_boundary: bool,
    /// First zero of `xi'` inside `(0, 1)` (hole only).
    pub first_interior_zero: Option<f64>,
}

/// One sweep point on an assembled system.
pub fn sweep_point(system: &SpectralSystem, bond: Bond) -> Result<SweepRecord> {
    let sol = solve_gevp(system, bond, 1)?;
    let profile = profile_from_solution(&sol, 1, Normalization::BoundaryOne)?;
    let (high_spot, on_boundary) = profile.high_spot()?;
    let first_interior_zero = match system.geometry() {
        Geometry::Hole => profile.interior_critical_points()?.first().copied(),
        Geometry::Strip => None,
    };
    Ok(SweepRecord {
        bond: bond.value(),
        lambda1: sol.lambdas[0],
        high_spot,
        on_boundary,
        first_interior_zero,
    })
}

/// High-spot sweep over a list of Bond numbers, in input order.
pub fn sweep(geometry: Geometry, m: u32, n: usize, bonds: &[Bond]) -> Result<Vec<SweepRecord>> {
    let system = assemble(geometry, m, n)?;
    bonds.iter().map(|&b| sweep_point(&system, b)).collect()
}

/// Zeros of `xi'` in `(0, 1]` for the fundamental hole mode.
pub fn first_zeros_of_derivative(m: u32, bond: Bond, n: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::ModeZero(m));
    }
    let system = assemble_hole(m, n)?;
    let sol = solve_gevp(&system, bond, 1)?;
    profile_from_solution(&sol, 1, Normalization::BoundaryOne)?.derivative_zeros()
}

/// `(c^T M c, c^T K c)` with `c^T L c = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit {
    /// `int xi^2 r dr` (hole) or `int xi^2 dx` (strip).
    pub gravity: f64,
    /// `int (m^2/r xi^2 + xi'^2 r) dr` (hole) or `int xi'^2 dx` (strip).
    pub tension: f64,
}

impl EnergySplit {
    /// `gravity + tension / Bo`, the Rayleigh quotient.
    pub fn rayleigh(&self, bond: Bond) -> f64 {
        self.gravity + self.tension * bond.reciprocal()
    }
}

/// Energy terms of a profile rescaled so `c^T L c = 1`.
pub fn energy_split(system: &SpectralSystem, profile: &SurfaceProfile) -> Result<EnergySplit> {
    if profile.basis() != &system.basis {
        return Err(Error::InvalidArgument(
            "profile and system bases differ".into(),
        ));
    }
    let c = profile.coeffs();
    let l = c.dot(&(&system.kernel * c));
    if !(l > 0.0) {
        return Err(Error::ZeroProfile);
    }
    let quad = |a: &DMatrix<f64>| c.dot(&(a * c)) / l;
    Ok(EnergySplit {
        gravity: quad(&system.mass),
        tension: quad(&system.stiffness),
    })
}

/// Error of eigenpair `j` at cutoff `n` relative to a reference cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub j: usize,
    pub bond: Bond,
    /// `|lambda^(n) - lambda^(ref)| / lambda^(ref)`.
    pub eigen_err: f64,
    /// Relative profile error (strip: `H^1`, hole: `L^2` with weight `r`),
    /// when eigenvectors were requested.
    pub profile_err: Option<f64>,
}

/// `sqrt(e^T G e) / sqrt(c^T G c)` after zero-padding `c_n` and aligning signs.
fn profile_error(coarse: &DVector<f64>, reference: &DVector<f64>, gram: &DMatrix<f64>) -> f64 {
    let mut padded = DVector::zeros(reference.len());
    padded.rows_mut(0, coarse.len()).copy_from(coarse);
    if padded.dot(&(gram * reference)) < 0.0 {
        padded.neg_mut();
    }
    let e = &padded - reference;
    (e.dot(&(gram * &e)) / reference.dot(&(gram * reference))).sqrt()
}

fn profile_gram(system: &SpectralSystem) -> DMatrix<f64> {
    match system.geometry() {
        Geometry::Strip => &system.mass + &system.stiffness,
        Geometry::Hole => system.mass.clone(),
    }
}

/// Relative eigenvalue (and optionally profile) errors for the first `count`
/// pairs at each cutoff in `ns`, against cutoff `n_ref`.
pub fn convergence_study(
    geometry: Geometry,
    m: u32,
    bond: Bond,
    ns: &[usize],
    n_ref: usize,
    count: usize,
    profiles: bool,
) -> Result<Vec<ConvergenceRow>> {
    if let Some(&bad) = ns.iter().find(|&&n| n > n_ref) {
        return Err(Error::InvalidArgument(format!(
            "cutoff {bad} exceeds reference {n_ref}"
        )));
    }
    let reference_sys = assemble(geometry, m, n_ref)?;
    let (ref_lambdas, ref_vectors): (Vec<f64>, Option<EigenSolution>) = if profiles {
        let sol = solve_gevp(&reference_sys, bond, count)?;
        (sol.lambdas.clone(), Some(sol))
    } else {
        (gevp_eigenvalues(&reference_sys, bond, count)?, None)
    };
    let gram = ref_vectors.as_ref().map(|_| profile_gram(&reference_sys));
    let mut rows = Vec::new();
    for &n in ns {
        let sys = assemble(geometry, m, n)?;
        let k = count.min(sys.dim());
        let (lambdas, vectors) = if profiles {
            let sol = solve_gevp(&sys, bond, k)?;
            (sol.lambdas, Some(sol.vectors))
        } else {
            (gevp_eigenvalues(&sys, bond, k)?, None)
        };
        for j in 0..k {
            let profile_err = match (&vectors, &ref_vectors, &gram) {
                (Some(v), Some(r), Some(g)) => Some(profile_error(&v[j], &r.vectors[j], g)),
                _ => None,
            };
            rows.push(ConvergenceRow {
                n,
                j: j + 1,
                bond,
                eigen_err: (lambdas[j] - ref_lambdas[j]).abs() / ref_lambdas[j],
                profile_err,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energy_matches_eigenvalue() {
        for (geometry, m) in [(Geometry::Hole, 1), (Geometry::Strip, 0)] {
            let sys = assemble(geometry, m, 30).unwrap();
            let bond = Bond::Finite(3.0);
            let sol = solve_gevp(&sys, bond, 1).unwrap();
            let p = profile_from_solution(&sol, 1, Normalization::BoundaryOne).unwrap();
            let e = energy_split(&sys, &p).unwrap();
            assert!((e.rayleigh(bond) - sol.lambdas[0]).abs() < 1e-10 * sol.lambdas[0]);
        }
    }

    #[test]
    fn self_comparison_is_exact() {
        let rows =
            convergence_study(Geometry::Hole, 2, Bond::Finite(1.0), &[24], 24, 2, true).unwrap();
        for r in rows {
            assert_eq!(r.eigen_err, 0.0);
            assert_eq!(r.profile_err, Some(0.0));
        }
    }

    #[test]
    fn cutoff_beyond_reference_rejected() {
        assert!(
            convergence_study(Geometry::Strip, 0, Bond::Infinite, &[40], 20, 1, false).is_err()
        );
    }

    #[test]
    fn boundary_is_always_critical() {
        for bond in [Bond::Finite(1.0), Bond::Finite(1000.0)] {
            let z = first_zeros_of_derivative(1, bond, 40).unwrap();
            assert_eq!(*z.last().unwrap(), 1.0);
        }
    }
}

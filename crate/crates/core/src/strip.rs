//! Closed-form Galerkin matrices for the infinite parallel strip.

use nalgebra::DMatrix;

use crate::basis::BasisSpec;
use crate::error::Result;
use crate::system::SpectralSystem;

/// `-(1/pi) int int ln|x - s| p_i(x) p_j(s) ds dx` for normalized Legendre
/// polynomials, `i, j >= 1`. Zero when `i + j` is odd.
pub fn strip_kernel_tilde(i: usize, j: usize) -> f64 {
    if (i + j) % 2 == 1 {
        return 0.0;
    }
    let (fi, fj) = (i as f64, j as f64);
    let d = fi - fj;
    4.0 / std::f64::consts::PI * ((2.0 * fi + 1.0).sqrt() * (2.0 * fj + 1.0).sqrt())
        / ((fi + fj) * (fi + fj + 2.0) * (1.0 - d * d))
}

/// Diagonal stiffness entry `int q_j'^2 dx`.
pub fn strip_stiffness(spec: &BasisSpec, j: usize) -> f64 {
    let jf = j as f64;
    let (a, b) = (spec.alpha(j), spec.beta(j));
    b * (2.0 * jf + 5.0).sqrt() / (a * a * (2.0 * jf + 1.0).sqrt())
        * (2.0 * jf + 1.0)
        * (2.0 * jf + 3.0)
}

/// Assemble `M`, `K`, `L` for basis cutoff `n` (dimension `n - 2`).
pub fn assemble_strip(n: usize) -> Result<SpectralSystem> {
    let basis = BasisSpec::strip(n)?;
    let d = basis.len();
    let mut mass = DMatrix::identity(d, d);
    let mut stiffness = DMatrix::zeros(d, d);
    let mut kernel = DMatrix::zeros(d, d);
    for r in 0..d {
        let i = r + 1;
        if r + 2 < d {
            let v = -basis.beta(i) / (basis.alpha(i) * basis.alpha(i + 2));
            mass[(r, r + 2)] = v;
            mass[(r + 2, r)] = v;
        }
        stiffness[(r, r)] = strip_stiffness(&basis, i);
        for c in 0..=r {
            let j = c + 1;
            let v = if (i + j) % 2 == 1 {
                0.0
            } else {
                let (bi, bj) = (basis.beta(i), basis.beta(j));
                (strip_kernel_tilde(i, j)
                    - bi * strip_kernel_tilde(i + 2, j)
                    - bj * strip_kernel_tilde(i, j + 2)
                    + bi * bj * strip_kernel_tilde(i + 2, j + 2))
                    / (basis.alpha(i) * basis.alpha(j))
            };
            kernel[(r, c)] = v;
            kernel[(c, r)] = v;
        }
    }
    Ok(SpectralSystem {
        basis,
        mass,
        stiffness,
        kernel,
    })
}

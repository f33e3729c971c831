//! Closed-form Galerkin matrices for the circular hole, azimuthal mode `m`.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::basis::{radial_mu, BasisSpec};
use crate::error::Result;
use crate::system::SpectralSystem;

/// `int_0^inf H[h_i^m](k) H[h_j^m](k) dk`, the Hankel-space pairing of two
/// radial polynomials:
///
/// `mu_i mu_j / (4 pi ((i + j + m - 1)^2 - 1/4) (1/4 - (i - j)^2))`.
pub fn hole_kernel_tilde(m: u32, i: usize, j: usize) -> f64 {
    let (fi, fj, fm) = (i as f64, j as f64, m as f64);
    let s = fi + fj + fm - 1.0;
    let d = fi - fj;
    radial_mu(m, i) * radial_mu(m, j) / (4.0 * PI * (s * s - 0.25) * (0.25 - d * d))
}

/// Diagonal stiffness entry `-mu_j mu_{j+1} (mu_j^{m+1})^2 beta_j`.
pub fn hole_stiffness(spec: &BasisSpec, j: usize) -> f64 {
    let m = spec.mode();
    let mu_next = radial_mu(m + 1, j);
    -spec.mu(j) * spec.mu(j + 1) * mu_next * mu_next * spec.beta(j)
}

/// Assemble `M^m`, `K^m`, `L^m` with cutoff `n`.
///
/// Dimension is `n` for `m >= 1` and `n - 1` for `m = 0`, where the basis
/// starts at `j = 2`.
pub fn assemble_hole(m: u32, n: usize) -> Result<SpectralSystem> {
    let basis = BasisSpec::hole(m, n)?;
    let idx: Vec<usize> = basis.indices().collect();
    let d = idx.len();
    let mut mass = DMatrix::zeros(d, d);
    let mut stiffness = DMatrix::zeros(d, d);
    let mut kernel = DMatrix::zeros(d, d);
    for (r, &i) in idx.iter().enumerate() {
        let bi = basis.beta(i);
        mass[(r, r)] = 1.0 + bi * bi;
        if r + 1 < d {
            mass[(r, r + 1)] = bi;
            mass[(r + 1, r)] = bi;
        }
        stiffness[(r, r)] = hole_stiffness(&basis, i);
        for (c, &j) in idx.iter().enumerate().take(r + 1) {
            let bj = basis.beta(j);
            let v = hole_kernel_tilde(m, i, j)
                + bi * hole_kernel_tilde(m, i + 1, j)
                + bj * hole_kernel_tilde(m, i, j + 1)
                + bi * bj * hole_kernel_tilde(m, i + 1, j + 1);
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

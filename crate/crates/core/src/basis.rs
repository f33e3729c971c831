//! Orthonormal polynomial bases for the two aperture geometries.
//!
//! The strip uses normalized Legendre polynomials `p_j` on `[-1, 1]`,
//! combined as `q_j = (p_j - beta_j p_{j+2}) / alpha_j` so that
//! `q_j'(+-1) = 0`, `int q_j = 0` and `int q_j^2 = 1`.
//!
//! The circular hole uses the radial polynomials
//! `h_j^m(r) = mu_j^m r^m P_{j-1}^{(0,m)}(2r^2 - 1)`, orthonormal with weight
//! `r` on `(0, 1)`, combined as `q_j^m = h_j^m + beta_j h_{j+1}^m` so that
//! `(q_j^m)'(1) = 0`.
//!
//! Derivatives are analytic throughout, via
//! `d/dx P_n^{(a,b)} = (n + a + b + 1)/2 * P_{n-1}^{(a+1,b+1)}`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};

/// Aperture shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Geometry {
    /// Infinite parallel strip `|x| < 1`.
    Strip,
    /// Circular hole `r < 1`.
    Hole,
}

impl Geometry {
    pub fn name(self) -> &'static str {
        match self {
            Geometry::Strip => "strip",
            Geometry::Hole => "hole",
        }
    }
}

impl std::fmt::Display for Geometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Values of `P_k^{(a,b)}(x)` for `k = 0..=nmax`, by the three-term recurrence.
pub fn jacobi_all(nmax: usize, a: f64, b: f64, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax == 0 {
        return out;
    }
    out.push(0.5 * (a - b) + 0.5 * (a + b + 2.0) * x);
    for k in 2..=nmax {
        let n = k as f64;
        let s = 2.0 * n + a + b;
        let c0 = 2.0 * n * (n + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * s;
        let next = (c1 * out[k - 1] - c2 * out[k - 2]) / c0;
        out.push(next);
    }
    out
}

/// `P_n^{(a,b)}(x)`.
pub fn jacobi_eval(n: usize, a: f64, b: f64, x: f64) -> f64 {
    jacobi_all(n, a, b, x)[n]
}

fn legendre_scale(j: usize) -> f64 {
    ((2 * j + 1) as f64 / 2.0).sqrt()
}

/// Orthonormal Legendre polynomial `p_j(x)`, `int_{-1}^{1} p_j p_k = delta_jk`.
pub fn legendre_eval(j: usize, x: f64) -> f64 {
    // classical recurrence (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
    let (mut prev, mut cur) = (1.0, x);
    if j == 0 {
        return legendre_scale(0);
    }
    for k in 1..j {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    legendre_scale(j) * cur
}

/// `(d/dx)^deriv p_j(x)` for `deriv` in `0..=2`.
pub fn legendre_deriv(j: usize, x: f64, deriv: usize) -> Result<f64> {
    let jf = j as f64;
    Ok(match deriv {
        0 => legendre_eval(j, x),
        1 if j == 0 => 0.0,
        1 => legendre_scale(j) * 0.5 * (jf + 1.0) * jacobi_eval(j - 1, 1.0, 1.0, x),
        2 if j < 2 => 0.0,
        2 => legendre_scale(j) * 0.25 * (jf + 1.0) * (jf + 2.0) * jacobi_eval(j - 2, 2.0, 2.0, x),
        d => return Err(Error::DerivativeOrder(d)),
    })
}

/// All `(d/dx)^deriv p_k(x)` for `k = 0..=nmax`.
fn legendre_all(nmax: usize, x: f64, deriv: usize) -> Vec<f64> {
    let mut out = vec![0.0; nmax + 1];
    if deriv > nmax {
        return out;
    }
    let d = deriv as f64;
    let shifted = jacobi_all(nmax - deriv, d, d, x);
    for (k, slot) in out.iter_mut().enumerate().skip(deriv) {
        let kf = k as f64;
        // (k+1)(k+2)...(k+deriv) / 2^deriv
        let factor: f64 = (1..=deriv).map(|l| 0.5 * (kf + l as f64)).product();
        *slot = legendre_scale(k) * factor * shifted[k - deriv];
    }
    out
}

/// Normalization constant `mu_j^m = 2 sqrt(j + (m - 1)/2)` of `h_j^m`.
pub fn radial_mu(m: u32, j: usize) -> f64 {
    2.0 * (j as f64 + 0.5 * (m as f64 - 1.0)).sqrt()
}

/// Strip Neumann constant `beta_j`.
pub fn strip_beta(j: usize) -> f64 {
    let jf = j as f64;
    jf * (jf + 1.0) * (2.0 * jf + 1.0).sqrt() / ((jf + 2.0) * (jf + 3.0) * (2.0 * jf + 5.0).sqrt())
}

/// Hole Neumann constant `beta_j^m`, chosen so `(h_j^m + beta_j h_{j+1}^m)'(1) = 0`.
pub fn hole_beta(m: u32, j: usize) -> f64 {
    let (mf, jf) = (m as f64, j as f64);
    -radial_mu(m, j) * (mf + 2.0 * (jf - 1.0) * (jf + mf))
        / (radial_mu(m, j + 1) * (mf + 2.0 * jf * (jf + mf + 1.0)))
}

/// `(h_j^m)'(1) = mu_j^m (m + 2 (j-1)(j+m))`.
pub fn radial_h_slope_at_one(m: u32, j: usize) -> f64 {
    let (mf, jf) = (m as f64, j as f64);
    radial_mu(m, j) * (mf + 2.0 * (jf - 1.0) * (jf + mf))
}

/// Jacobi values `P^{(0,m)}`, `P^{(1,m+1)}`, `P^{(2,m+2)}` at `x = 2r^2 - 1`
/// combined into `h_j^m` and its first two radial derivatives.
fn radial_combine(m: u32, j: usize, r: f64, p: [f64; 3], deriv: usize) -> f64 {
    let mf = m as f64;
    let jf = j as f64;
    let mu = radial_mu(m, j);
    // d/dx P_{j-1}^{(0,m)} and d^2/dx^2
    let dp = 0.5 * (jf + mf) * p[1];
    let ddp = 0.25 * (jf + mf) * (jf + mf + 1.0) * p[2];
    let rm = r.powi(m as i32);
    match deriv {
        0 => mu * rm * p[0],
        1 => {
            let lead = if m >= 1 {
                mf * r.powi(m as i32 - 1) * p[0]
            } else {
                0.0
            };
            mu * (lead + 4.0 * r.powi(m as i32 + 1) * dp)
        }
        _ => {
            let lead = if m >= 2 {
                mf * (mf - 1.0) * r.powi(m as i32 - 2) * p[0]
            } else {
                0.0
            };
            mu * (lead + (8.0 * mf + 4.0) * rm * dp + 16.0 * r.powi(m as i32 + 2) * ddp)
        }
    }
}

/// `(d/dr)^deriv h_j^m(r)` for `j >= 1`.
pub fn radial_h_eval(m: u32, j: usize, r: f64, deriv: usize) -> Result<f64> {
    if j == 0 {
        return Err(Error::IndexOutOfRange {
            index: 0,
            lo: 1,
            hi: usize::MAX,
        });
    }
    if deriv > 2 {
        return Err(Error::DerivativeOrder(deriv));
    }
    let x = 2.0 * r * r - 1.0;
    let mf = m as f64;
    let n = j - 1;
    let p0 = jacobi_eval(n, 0.0, mf, x);
    let p1 = if n >= 1 {
        jacobi_eval(n - 1, 1.0, mf + 1.0, x)
    } else {
        0.0
    };
    let p2 = if n >= 2 {
        jacobi_eval(n - 2, 2.0, mf + 2.0, x)
    } else {
        0.0
    };
    Ok(radial_combine(m, j, r, [p0, p1, p2], deriv))
}

/// All `(d/dr)^deriv h_j^m(r)` for `j = 1..=jmax`, stored at index `j - 1`.
fn radial_all(m: u32, jmax: usize, r: f64, deriv: usize) -> Vec<f64> {
    let x = 2.0 * r * r - 1.0;
    let mf = m as f64;
    let p0 = jacobi_all(jmax.saturating_sub(1), 0.0, mf, x);
    let p1 = if deriv >= 1 && jmax >= 2 {
        jacobi_all(jmax - 2, 1.0, mf + 1.0, x)
    } else {
        Vec::new()
    };
    let p2 = if deriv >= 2 && jmax >= 3 {
        jacobi_all(jmax - 3, 2.0, mf + 2.0, x)
    } else {
        Vec::new()
    };
    (1..=jmax)
        .map(|j| {
            let n = j - 1;
            let a = p0[n];
            let b = if n >= 1 {
                p1.get(n - 1).copied().unwrap_or(0.0)
            } else {
                0.0
            };
            let c = if n >= 2 {
                p2.get(n - 2).copied().unwrap_or(0.0)
            } else {
                0.0
            };
            radial_combine(m, j, r, [a, b, c], deriv)
        })
        .collect()
}

/// A boundary-adapted basis with all constants precomputed.
///
/// For the strip the admissible indices are `1..=n-2`. For the hole they are
/// `1..=n` when `m >= 1` and `2..=n` when `m = 0` (the constant `h_1^0` is
/// excluded by the zero-mean constraint).
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSpec {
    geometry: Geometry,
    mode: u32,
    n: usize,
    alphas: Vec<f64>,
    betas: Vec<f64>,
    mus: Vec<f64>,
}

impl BasisSpec {
    /// Legendre-based strip basis `q_1..q_{n-2}`.
    pub fn strip(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::CutoffTooSmall {
                what: "strip",
                n,
                min: 3,
            });
        }
        let betas: Vec<f64> = (1..=n - 2).map(strip_beta).collect();
        let alphas = betas.iter().map(|b| (1.0 + b * b).sqrt()).collect();
        Ok(Self {
            geometry: Geometry::Strip,
            mode: 0,
            n,
            alphas,
            betas,
            mus: Vec::new(),
        })
    }

    /// Radial basis for azimuthal mode `m`.
    pub fn hole(m: u32, n: usize) -> Result<Self> {
        let min = if m == 0 { 2 } else { 1 };
        if n < min {
            return Err(Error::CutoffTooSmall {
                what: "hole",
                n,
                min,
            });
        }
        let betas = (1..=n).map(|j| hole_beta(m, j)).collect();
        let mus = (1..=n + 1).map(|j| radial_mu(m, j)).collect();
        Ok(Self {
            geometry: Geometry::Hole,
            mode: m,
            n,
            alphas: Vec::new(),
            betas,
            mus,
        })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    /// Azimuthal mode; always 0 for the strip.
    pub fn mode(&self) -> u32 {
        self.mode
    }

    /// Basis cutoff `n`.
    pub fn cutoff(&self) -> usize {
        self.n
    }

    /// `beta_j` for `j >= 1`.
    pub fn beta(&self, j: usize) -> f64 {
        self.betas[j - 1]
    }

    /// `alpha_j` (strip only).
    pub fn alpha(&self, j: usize) -> f64 {
        self.alphas[j - 1]
    }

    /// `mu_j^m` for `j = 1..=n+1` (hole only).
    pub fn mu(&self, j: usize) -> f64 {
        self.mus[j - 1]
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn mus(&self) -> &[f64] {
        &self.mus
    }

    /// Admissible basis indices.
    pub fn indices(&self) -> RangeInclusive<usize> {
        match self.geometry {
            Geometry::Strip => 1..=self.n - 2,
            Geometry::Hole if self.mode == 0 => 2..=self.n,
            Geometry::Hole => 1..=self.n,
        }
    }

    /// Number of basis functions, i.e. the Galerkin matrix dimension.
    pub fn len(&self) -> usize {
        let r = self.indices();
        r.end() + 1 - r.start()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check_index(&self, j: usize) -> Result<()> {
        let r = self.indices();
        if r.contains(&j) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: j,
                lo: *r.start(),
                hi: *r.end(),
            })
        }
    }

    /// `(d/dx)^deriv q_j(x)` for either geometry.
    pub fn q_eval(&self, j: usize, x: f64, deriv: usize) -> Result<f64> {
        self.check_index(j)?;
        if deriv > 2 {
            return Err(Error::DerivativeOrder(deriv));
        }
        Ok(match self.geometry {
            Geometry::Strip => {
                let a = legendre_deriv(j, x, deriv)?;
                let b = legendre_deriv(j + 2, x, deriv)?;
                (a - self.beta(j) * b) / self.alpha(j)
            }
            Geometry::Hole => {
                let a = radial_h_eval(self.mode, j, x, deriv)?;
                let b = radial_h_eval(self.mode, j + 1, x, deriv)?;
                a + self.beta(j) * b
            }
        })
    }

    /// `(d/dx)^deriv q_j(x)` for every admissible `j`, in index order.
    pub fn q_eval_all(&self, x: f64, deriv: usize) -> Result<Vec<f64>> {
        if deriv > 2 {
            return Err(Error::DerivativeOrder(deriv));
        }
        let out = match self.geometry {
            Geometry::Strip => {
                let p = legendre_all(self.n, x, deriv);
                self.indices()
                    .map(|j| (p[j] - self.beta(j) * p[j + 2]) / self.alpha(j))
                    .collect()
            }
            Geometry::Hole => {
                let h = radial_all(self.mode, self.n + 1, x, deriv);
                self.indices()
                    .map(|j| h[j - 1] + self.beta(j) * h[j])
                    .collect()
            }
        };
        Ok(out)
    }
}

/// Strip basis function `q_j` (see [`BasisSpec::q_eval`]).
pub fn strip_q_eval(spec: &BasisSpec, j: usize, x: f64, deriv: usize) -> Result<f64> {
    if spec.geometry() != Geometry::Strip {
        return Err(Error::WrongGeometry { expected: "strip" });
    }
    spec.q_eval(j, x, deriv)
}

/// Hole basis function `q_j^m` (see [`BasisSpec::q_eval`]).
pub fn hole_q_eval(spec: &BasisSpec, j: usize, r: f64, deriv: usize) -> Result<f64> {
    if spec.geometry() != Geometry::Hole {
        return Err(Error::WrongGeometry { expected: "hole" });
    }
    spec.q_eval(j, r, deriv)
}

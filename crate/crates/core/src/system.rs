use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::basis::{BasisSpec, Geometry};
use crate::error::{Error, Result};

/// Bond number. `Infinite` drops the surface-tension term entirely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bond {
    Finite(f64),
    Infinite,
}

impl Bond {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_finite() && value > 0.0 {
            Ok(Bond::Finite(value))
        } else if value == f64::INFINITY {
            Ok(Bond::Infinite)
        } else {
            Err(Error::InvalidBond(value.to_string()))
        }
    }

    /// `1/Bo`, zero for `Infinite`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Bond::Finite(b) => 1.0 / b,
            Bond::Infinite => 0.0,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Bond::Finite(b) => b,
            Bond::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Bond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bond::Finite(b) => write!(f, "{b}"),
            Bond::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for Bond {
    type Err = Error;

    /// Accepts a positive decimal number or the literal `inf`.
    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Bond::Infinite);
        }
        let v: f64 = s.parse().map_err(|_| Error::InvalidBond(s.to_string()))?;
        if !v.is_finite() {
            return Err(Error::InvalidBond(s.to_string()));
        }
        Bond::new(v)
    }
}

/// Assembled Galerkin matrices for one geometry (and azimuthal mode).
///
/// The discrete problem is `(M + K/Bo) c = lambda L c` with `lambda = omega^2`.
#[derive(Debug, Clone)]
pub struct SpectralSystem {
    pub basis: BasisSpec,
    /// Mass matrix `M`.
    pub mass: DMatrix<f64>,
    /// Stiffness matrix `K` (diagonal).
    pub stiffness: DMatrix<f64>,
    /// Surface-operator matrix `L`.
    pub kernel: DMatrix<f64>,
}

impl SpectralSystem {
    pub fn geometry(&self) -> Geometry {
        self.basis.geometry()
    }

    pub fn mode(&self) -> u32 {
        self.basis.mode()
    }

    pub fn dim(&self) -> usize {
        self.mass.nrows()
    }

    /// `A = M + K/Bo`.
    pub fn operator(&self, bond: Bond) -> DMatrix<f64> {
        match bond {
            Bond::Infinite => self.mass.clone(),
            Bond::Finite(_) => &self.mass + &self.stiffness * bond.reciprocal(),
        }
    }
}

/// Largest `|A_ij - A_ji|`.
pub fn asymmetry(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..i {
            worst = worst.max((a[(i, j)] - a[(j, i)]).abs());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bond_parsing() {
        assert_eq!("inf".parse::<Bond>().unwrap(), Bond::Infinite);
        assert_eq!("2.5".parse::<Bond>().unwrap(), Bond::Finite(2.5));
        for bad in ["Inf", "infinity", "-1", "0", "nan", "abc", ""] {
            assert!(bad.parse::<Bond>().is_err(), "{bad}");
        }
        assert_eq!(Bond::Infinite.reciprocal(), 0.0);
        assert_eq!(Bond::new(4.0).unwrap().reciprocal(), 0.25);
        assert_eq!(Bond::Infinite.to_string(), "inf");
    }
}

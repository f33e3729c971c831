//! Spectral Galerkin solver for the ice-fishing sloshing problem: a fluid
//! half-space under a rigid lid, oscillating through a strip or circular
//! aperture, with surface tension and a free-end contact line.
//!
//! Each geometry reduces to `(M + K/Bo) c = lambda L c` in a basis of
//! polynomials that already satisfy the Neumann edge condition.

// negated float comparisons below are deliberate: they also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod basis;
pub mod error;
pub mod gevp;
pub mod hole;
pub mod oracle;
pub mod strip;
pub mod system;

pub use basis::{BasisSpec, Geometry};
pub use error::{Error, Result};
pub use gevp::{gevp_eigenvalues, solve_gevp, EigenSolution};
pub use hole::assemble_hole;
pub use strip::assemble_strip;
pub use system::{Bond, SpectralSystem};

//! Sloshing profiles, high spots and the critical Bond number.

pub mod bondstar;
pub mod profile;
pub mod study;

pub use bondstar::{
    bisect_edge_curvature, bond_star_hole, bond_star_hole_bisection, bond_star_strip,
    bond_star_strip_with, edge_curvature, fundamental, map_t, map_t_tilde, BondMap,
    BondStarOptions, BondStarResult, CurvatureSource, POLE_TOL,
};
pub use profile::{
    profile_from_solution, surface_h_at_one, surface_p_at_one, Normalization, SurfaceProfile,
    EDGE_MERGE, HIGH_SPOT_GRID, ROOT_TOL,
};
pub use study::{
    assemble, convergence_study, energy_split, first_zeros_of_derivative, sweep, sweep_point,
    ConvergenceRow, EnergySplit, SweepRecord,
};

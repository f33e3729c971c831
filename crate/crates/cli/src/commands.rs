//! One function per subcommand. Each writes its data files into the output
//! directory and returns a summary for the sidecar metadata file.

use std::f64::consts::PI;
use std::path::PathBuf;

use icefish_core::analysis::{
    assemble, bond_star_hole, bond_star_strip_with, convergence_study, energy_split, fundamental,
    profile_from_solution, sweep_point, BondStarOptions, Normalization,
};
use icefish_core::basis::{radial_mu, Geometry};
use icefish_core::oracle::{validate_hole, validate_strip, OracleReport, Quantity};
use icefish_core::{solve_gevp, Bond, Error};
use serde_json::{json, Value};

use crate::config::{Command, GeometryArg, KernelForm, RunConfig};
use crate::output::{Cell, Table};
use crate::CliError;

/// Points per sampled profile.
pub const PROFILE_POINTS: usize = 512;

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub summary: Value,
    /// Set when `validate` found entries beyond tolerance.
    pub failed_rows: usize,
}

fn bond_cell(b: Bond) -> Cell {
    match b {
        Bond::Finite(v) => Cell::Float(v),
        Bond::Infinite => Cell::Text("inf".into()),
    }
}

pub fn dispatch(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Solve => solve(cfg),
        Command::Sweep => sweep(cfg),
        Command::Bondstar => bondstar(cfg),
        Command::Converge => converge(cfg),
        Command::Validate => validate(cfg),
        Command::Energy => energy(cfg),
    }
}

fn solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let geometry = cfg.geometry();
    let bond = cfg.bonds[0];
    let system = assemble(geometry, cfg.m, cfg.n)?;
    let sol = solve_gevp(&system, bond, cfg.count)?;

    let mut eig = Table::new(&["geometry", "m", "bond", "n", "j", "lambda"]);
    for (k, &lambda) in sol.lambdas.iter().enumerate() {
        eig.push(vec![
            geometry.name().into(),
            cfg.m.into(),
            bond_cell(bond),
            cfg.n.into(),
            (k + 1).into(),
            lambda.into(),
        ]);
    }
    let mut files = vec![eig.write(&cfg.out, "eigenvalues", cfg.format)?];

    let lo = match geometry {
        Geometry::Strip => -1.0,
        Geometry::Hole => 0.0,
    };
    for j in 1..=sol.len() {
        let profile = profile_from_solution(&sol, j, Normalization::BoundaryOne)?;
        let mut t = Table::new(&["r", "xi", "dxi", "d2xi"]);
        for k in 0..PROFILE_POINTS {
            let r = lo + (1.0 - lo) * k as f64 / (PROFILE_POINTS - 1) as f64;
            t.push(vec![
                r.into(),
                profile.eval(r, 0)?.into(),
                profile.eval(r, 1)?.into(),
                profile.eval(r, 2)?.into(),
            ]);
        }
        files.push(t.write(&cfg.out, &format!("profile_{j}"), cfg.format)?);
    }
    Ok(Outcome {
        files,
        summary: json!({ "lambdas": sol.lambdas, "max_residual": sol.residuals.iter().cloned().fold(0.0, f64::max) }),
        failed_rows: 0,
    })
}

fn sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let geometry = cfg.geometry();
    let system = assemble(geometry, cfg.m, cfg.n)?;
    let hole = geometry == Geometry::Hole;
    let mut header = vec!["bond", "lambda1", "high_spot", "on_boundary"];
    if hole {
        header.push("first_interior_zero");
    }
    let mut t = Table::new(&header);
    let mut transition = None;
    let mut previous: Option<(f64, bool)> = None;
    for bond in cfg.grid.values() {
        let r = sweep_point(&system, Bond::new(bond)?)?;
        let mut row = vec![
            r.bond.into(),
            r.lambda1.into(),
            r.high_spot.into(),
            r.on_boundary.into(),
        ];
        if hole {
            row.push(r.first_interior_zero.into());
        }
        t.push(row);
        if let Some((b, on)) = previous {
            if on && !r.on_boundary && transition.is_none() {
                transition = Some([b, r.bond]);
            }
        }
        previous = Some((r.bond, r.on_boundary));
    }
    let file = t.write(&cfg.out, "sweep", cfg.format)?;
    Ok(Outcome {
        files: vec![file],
        summary: json!({ "rows": t.rows.len(), "transition_bracket": transition }),
        failed_rows: 0,
    })
}

const BONDSTAR_HEADER: [&str; 8] = [
    "geometry",
    "m",
    "n",
    "alpha",
    "threshold",
    "bond_star",
    "iterations",
    "status",
];

fn bondstar(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut t = Table::new(&BONDSTAR_HEADER);
    if cfg.geometry == Some(GeometryArg::Strip) {
        let bracket = (cfg.grid.min, cfg.grid.max);
        let b = bond_star_strip_with(cfg.n, bracket, cfg.threshold, cfg.curvature.into())?;
        t.push(vec![
            "strip".into(),
            0u32.into(),
            cfg.n.into(),
            Cell::Empty,
            cfg.threshold.into(),
            b.into(),
            Cell::Empty,
            "ok".into(),
        ]);
        let file = t.write(&cfg.out, "bondstar", cfg.format)?;
        return Ok(Outcome {
            files: vec![file],
            summary: json!({ "bond_star": b, "bracket": [bracket.0, bracket.1] }),
            failed_rows: 0,
        });
    }

    let opts = BondStarOptions {
        alpha: cfg.alpha,
        n: cfg.n,
        threshold: cfg.threshold,
        bond0: cfg.bond0,
        budget: cfg.budget,
    };
    let prefix = |t: &mut Table, rest: Vec<Cell>| {
        let mut row: Vec<Cell> = vec![
            "hole".into(),
            cfg.m.into(),
            cfg.n.into(),
            cfg.alpha.into(),
            cfg.threshold.into(),
        ];
        row.extend(rest);
        t.push(row);
    };
    match bond_star_hole(cfg.m, &opts) {
        Ok(r) => {
            prefix(
                &mut t,
                vec![r.bond_star.into(), r.iterations.into(), "ok".into()],
            );
            let mut files = vec![t.write(&cfg.out, "bondstar", cfg.format)?];
            if cfg.trace {
                let mut tr = Table::new(&["iteration", "x", "bond"]);
                for (k, &x) in r.trace.iter().enumerate() {
                    tr.push(vec![k.into(), x.into(), (1.0 / x).into()]);
                }
                files.push(tr.write(&cfg.out, "bondstar_trace", cfg.format)?);
            }
            Ok(Outcome {
                files,
                summary: json!({ "bond_star": r.bond_star, "iterations": r.iterations }),
                failed_rows: 0,
            })
        }
        Err(e @ Error::NoFixedPoint { .. }) if cfg.allow_no_fixed_point => {
            eprintln!("icefish: {e}");
            prefix(
                &mut t,
                vec![Cell::Empty, Cell::Empty, "no_fixed_point".into()],
            );
            let file = t.write(&cfg.out, "bondstar", cfg.format)?;
            Ok(Outcome {
                files: vec![file],
                summary: json!({ "status": "no_fixed_point", "diagnostic": e.to_string() }),
                failed_rows: 0,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn converge(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let geometry = cfg.geometry();
    let mut t = Table::new(&[
        "geometry",
        "m",
        "bond",
        "n",
        "j",
        "eigen_err",
        "profile_err",
    ]);
    for &bond in &cfg.bonds {
        let rows = convergence_study(geometry, cfg.m, bond, &cfg.ns, cfg.n_ref, cfg.count, true)?;
        for r in rows {
            t.push(vec![
                geometry.name().into(),
                cfg.m.into(),
                bond_cell(bond),
                r.n.into(),
                r.j.into(),
                r.eigen_err.into(),
                r.profile_err.into(),
            ]);
        }
    }
    let file = t.write(&cfg.out, "converge", cfg.format)?;
    Ok(Outcome {
        files: vec![file],
        summary: json!({ "rows": t.rows.len() }),
        failed_rows: 0,
    })
}

/// Raw hole kernel with the distance factor `1/4 - (j-1)^2`.
fn printed_hole_kernel(m: u32, i: usize, j: usize) -> f64 {
    let s = (i + j + m as usize) as f64 - 1.0;
    let d = j as f64 - 1.0;
    radial_mu(m, i) * radial_mu(m, j) / (4.0 * PI * (s * s - 0.25) * (0.25 - d * d))
}

fn validate(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mut reports: Vec<OracleReport> = Vec::new();
    if cfg.geometry != Some(GeometryArg::Hole) {
        reports.extend(validate_strip(cfg.n)?);
    }
    if cfg.geometry != Some(GeometryArg::Strip) {
        let mut hole = validate_hole(cfg.m, cfg.hole_n)?;
        if cfg.kernel_form == KernelForm::Printed {
            for r in hole
                .iter_mut()
                .filter(|r| r.quantity == Quantity::KernelTilde)
            {
                let closed = printed_hole_kernel(r.m, r.i, r.j);
                *r = OracleReport::new(
                    r.geometry,
                    r.m,
                    (r.i, r.j),
                    r.quantity,
                    closed,
                    r.oracle,
                    r.tail_bound,
                );
            }
        }
        reports.extend(hole);
    }

    let mut t = Table::new(&[
        "geometry",
        "m",
        "i",
        "j",
        "quantity",
        "closed_form",
        "oracle",
        "abs_err",
        "tail_bound",
    ]);
    let mut failed = 0;
    let mut worst = 0.0f64;
    for r in &reports {
        if !r.passes() {
            failed += 1;
        }
        worst = worst.max(r.abs_err / r.tolerance());
        t.push(vec![
            r.geometry.name().into(),
            r.m.into(),
            r.i.into(),
            r.j.into(),
            r.quantity.name().into(),
            r.closed_form.into(),
            r.oracle.into(),
            r.abs_err.into(),
            r.tail_bound.into(),
        ]);
    }
    let file = t.write(&cfg.out, "validate", cfg.format)?;
    Ok(Outcome {
        files: vec![file],
        summary: json!({ "rows": reports.len(), "failed": failed, "worst_err_over_tol": worst }),
        failed_rows: failed,
    })
}

fn energy(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let geometry = cfg.geometry();
    let system = assemble(geometry, cfg.m, cfg.n)?;
    let mut t = Table::new(&[
        "geometry", "m", "bond", "n", "lambda1", "gravity", "tension", "rayleigh",
    ]);
    for &bond in &cfg.bonds {
        let (lambda, profile) = fundamental(&system, bond)?;
        let e = energy_split(&system, &profile)?;
        t.push(vec![
            geometry.name().into(),
            cfg.m.into(),
            bond_cell(bond),
            cfg.n.into(),
            lambda.into(),
            e.gravity.into(),
            e.tension.into(),
            e.rayleigh(bond).into(),
        ]);
    }
    let file = t.write(&cfg.out, "energy", cfg.format)?;
    Ok(Outcome {
        files: vec![file],
        summary: json!({ "rows": t.rows.len() }),
        failed_rows: 0,
    })
}

use icefish_core::analysis::{
    bond_star_hole, bond_star_hole_bisection, edge_curvature, energy_split,
    first_zeros_of_derivative, fundamental, map_t, map_t_tilde, surface_h_at_one, sweep,
    BondStarOptions, CurvatureSource, Normalization, SurfaceProfile,
};
use icefish_core::basis::{hole_beta, BasisSpec, Geometry};
use icefish_core::{assemble_hole, assemble_strip, Bond, Error};
use nalgebra::DVector;

const BOND_STAR_M1: f64 = 4.6346167;

fn log_grid(count: usize, lo: f64, hi: f64) -> Vec<Bond> {
    (0..count)
        .map(|k| {
            let t = k as f64 / (count - 1) as f64;
            Bond::Finite(lo * (hi / lo).powf(t))
        })
        .collect()
}

fn assert_single_transition(geometry: Geometry, m: u32, n: usize, bond_star: f64) {
    let rows = sweep(geometry, m, n, &log_grid(32, 1.0, 1e3)).unwrap();
    for r in &rows {
        assert!((0.0..=1.0).contains(&r.high_spot));
        assert_eq!(r.on_boundary, r.high_spot == 1.0);
        assert_eq!(
            r.on_boundary,
            r.bond < bond_star,
            "{geometry:?} m={m} Bo={} high spot {}",
            r.bond,
            r.high_spot
        );
    }
}

#[test]
fn strip_high_spot_leaves_the_edge_once() {
    assert_single_transition(Geometry::Strip, 0, 80, 8.984166);
}

#[test]
fn hole_high_spot_leaves_the_edge_once() {
    assert_single_transition(Geometry::Hole, 1, 80, BOND_STAR_M1);
}

#[test]
fn high_spot_sits_on_the_edge_at_unit_bond() {
    for sys in [assemble_strip(60).unwrap(), assemble_hole(1, 60).unwrap()] {
        let (_, p) = fundamental(&sys, Bond::Finite(1.0)).unwrap();
        assert_eq!(p.high_spot().unwrap(), (1.0, true));
    }
}

#[test]
fn fixed_point_does_not_depend_on_alpha() {
    for m in [1, 3] {
        let values: Vec<f64> = [2.0, 3.0, 5.0, 10.0]
            .into_iter()
            .map(|alpha| {
                let opts = BondStarOptions {
                    alpha,
                    n: 20,
                    ..Default::default()
                };
                bond_star_hole(m, &opts).unwrap().bond_star
            })
            .collect();
        for v in &values {
            assert!((v - values[0]).abs() <= 1e-10, "m={m}: {values:?}");
        }
    }
}

#[test]
fn bond_star_result_invariants() {
    let r = bond_star_hole(
        2,
        &BondStarOptions {
            n: 40,
            ..Default::default()
        },
    )
    .unwrap();
    let t = &r.trace;
    assert_eq!(t.len(), r.iterations + 1);
    assert_eq!(t[0], 0.5);
    assert!((t[t.len() - 1] - t[t.len() - 2]).abs() <= r.threshold);
    assert_eq!(r.bond_star, 1.0 / t[t.len() - 1]);
}

#[test]
fn bisection_reproduces_the_fixed_point() {
    let opts = BondStarOptions {
        n: 40,
        ..Default::default()
    };
    for m in 1..=3 {
        let fixed = bond_star_hole(m, &opts).unwrap().bond_star;
        let bis =
            bond_star_hole_bisection(m, 40, (2.0, 10.0), 1e-13, CurvatureSource::Formula).unwrap();
        assert!((fixed - bis).abs() <= 1e-8, "m={m}: {fixed} vs {bis}");
    }
}

#[test]
fn map_t_near_its_fixed_point() {
    let t = map_t(BOND_STAR_M1, 1, 80).unwrap();
    assert!((t - BOND_STAR_M1).abs() <= 1e-5, "{t}");
    let x = 1.0 / BOND_STAR_M1;
    let tt = map_t_tilde(x, 3.0, 1, 80).unwrap();
    assert!((tt - x).abs() <= 1e-8, "{tt} vs {x}");
}

#[test]
fn no_fixed_point_beyond_mode_five() {
    let err = bond_star_hole(6, &BondStarOptions::default()).unwrap_err();
    assert!(matches!(err, Error::NoFixedPoint { m: 6, .. }), "{err:?}");
}

#[test]
fn edge_curvature_sign_brackets_the_transition() {
    let hole = assemble_hole(1, 80).unwrap();
    let strip = assemble_strip(80).unwrap();
    for source in [CurvatureSource::Direct, CurvatureSource::Formula] {
        assert!(edge_curvature(&hole, 1.0, source).unwrap() < 0.0);
        assert!(edge_curvature(&hole, 100.0, source).unwrap() > 0.0);
        assert!(edge_curvature(&strip, 1.0, source).unwrap() < 0.0);
        assert!(edge_curvature(&strip, 100.0, source).unwrap() > 0.0);
    }
    let at_star = edge_curvature(&hole, BOND_STAR_M1, CurvatureSource::Formula).unwrap();
    assert!(at_star.abs() < 1e-5, "{at_star}");
}

#[test]
fn direct_curvature_converges_to_the_formula() {
    // the polynomial second derivative converges like n^-2, so quadrupling
    // n shrinks the gap by about 16
    for m in 1..=5 {
        for bond in [1.0, 10.0, 100.0] {
            let gap = |n: usize| {
                let sys = assemble_hole(m, n).unwrap();
                let d = edge_curvature(&sys, bond, CurvatureSource::Direct).unwrap();
                let f = edge_curvature(&sys, bond, CurvatureSource::Formula).unwrap();
                (d - f).abs() / f.abs().max(1.0)
            };
            let (coarse, fine) = (gap(40), gap(160));
            assert!(coarse < 5e-2, "m={m} Bo={bond}: {coarse}");
            let rate = coarse / fine;
            assert!(
                (12.0..20.0).contains(&rate),
                "m={m} Bo={bond}: {coarse} -> {fine}"
            );
        }
    }
}

#[test]
fn edge_is_always_a_critical_point() {
    for m in 1..=5 {
        for bond in [Bond::Finite(1.0), Bond::Finite(30.0), Bond::Infinite] {
            let zeros = first_zeros_of_derivative(m, bond, 60).unwrap();
            assert_eq!(*zeros.last().unwrap(), 1.0);
            assert!(zeros.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

#[test]
fn first_derivative_zeros_examples() {
    let large = first_zeros_of_derivative(1, Bond::Finite(1e3), 80).unwrap();
    assert_eq!(large.len(), 2, "{large:?}");
    assert!((large[0] - 0.650).abs() < 5e-3, "{large:?}");
    let small = first_zeros_of_derivative(1, Bond::Finite(1.0), 80).unwrap();
    assert_eq!(small, vec![1.0]);
    // just above the transition the interior zero is close to the edge
    let near = first_zeros_of_derivative(1, Bond::Finite(BOND_STAR_M1 * 1.001), 80).unwrap();
    assert!(near.len() == 1 || near[0] > 0.95, "{near:?}");
}

#[test]
fn energy_split_is_the_rayleigh_quotient() {
    let sys = assemble_hole(1, 60).unwrap();
    let mut ratio = Vec::new();
    for b in [1.0, 1e6] {
        let bond = Bond::Finite(b);
        let (lambda, p) = fundamental(&sys, bond).unwrap();
        let e = energy_split(&sys, &p).unwrap();
        assert!((e.rayleigh(bond) - lambda).abs() <= 1e-12 * lambda);
        ratio.push(e.tension / b / e.gravity);
    }
    assert!(ratio[0] > 0.5, "{ratio:?}");
    assert!(ratio[1] < 1e-5, "{ratio:?}");
}

#[test]
fn surface_value_of_single_basis_profile() {
    let spec = BasisSpec::hole(1, 10).unwrap();
    let mut c = DVector::zeros(spec.len());
    c[0] = 1.0;
    let p = SurfaceProfile::new(spec.clone(), c, Normalization::MaxAbsOne).unwrap();
    let scale = p.coeffs()[0];
    let want = scale * (surface_h_at_one(1, 1) + hole_beta(1, 1) * surface_h_at_one(1, 2));
    assert!((p.surface_at_one().unwrap() - want).abs() < 1e-14);
}

#[test]
fn surface_value_at_the_bond_star() {
    let sys = assemble_hole(1, 80).unwrap();
    let (lambda, p) = fundamental(&sys, Bond::Finite(BOND_STAR_M1)).unwrap();
    let lhs = lambda * p.surface_at_one().unwrap() - 1.0;
    assert!((lhs - 1.0 / BOND_STAR_M1).abs() < 1e-6, "{lhs}");
}

#[test]
fn surface_value_rejects_strip() {
    let sys = assemble_strip(20).unwrap();
    let (_, p) = fundamental(&sys, Bond::Finite(1.0)).unwrap();
    assert!(matches!(
        p.surface_at_one(),
        Err(Error::WrongGeometry { .. })
    ));
}

#[test]
fn profile_normalization_invariants() {
    for sys in [assemble_strip(50).unwrap(), assemble_hole(2, 50).unwrap()] {
        for bond in [Bond::Finite(0.5), Bond::Finite(50.0)] {
            let (_, p) = fundamental(&sys, bond).unwrap();
            assert!((p.eval(1.0, 0).unwrap() - 1.0).abs() <= 1e-12);
            assert!(p.eval(1.0, 1).unwrap().abs() <= 1e-10);
            if sys.geometry() == Geometry::Hole {
                assert!(p.eval(0.0, 0).unwrap().abs() <= 1e-12);
            } else {
                assert!(p.eval(-1.0, 1).unwrap().abs() <= 1e-10);
            }
        }
    }
}

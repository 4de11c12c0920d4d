use fracrh::oracles::{argument_oracle, argument_oracle_poly};
use fracrh::region::{
    instantiate, max_param_bisect, scan_region, AlphaMode, Axis, BisectOptions, BisectRoute,
    CellCode, ParamSystem, Route, Sampling, ScanOptions, System,
};
use fracrh::sampling::rng;
use fracrh::{Outcome, RealPolynomial, SquareMatrix};
use rand::seq::index::sample;

const TOL: f64 = 1e-9;

fn m2(rows: [[f64; 2]; 2]) -> SquareMatrix {
    SquareMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn two_parameter_family() -> ParamSystem {
    ParamSystem::new(
        vec![
            m2([[-1.0, 3.0], [0.0, -1.0]]),
            m2([[-1.0, 0.0], [1.0, -1.0]]),
            m2([[-1.0, 1.0], [0.0, 0.0]]),
        ],
        vec!["beta1".into(), "beta2".into()],
        AlphaMode::Fixed(1.5),
    )
    .unwrap()
}

fn box_axes(count: usize) -> Vec<Axis> {
    vec![
        Axis::new("beta1", -3.0, 3.0, count, Sampling::Nodes).unwrap(),
        Axis::new("beta2", -3.0, 3.0, count, Sampling::Nodes).unwrap(),
    ]
}

/// Stability inequalities of the family, expanded by hand from its characteristic polynomial
/// `λ² + (2β₁ + 2 + β₂)λ + β₁² + β₂ − β₁ + 1` at `s = cos²(3π/4) = 1/2`.
fn hand_inequalities(b1: f64, b2: f64) -> (f64, f64) {
    let a1 = 2.0 * b1 + 2.0 + b2;
    let a2 = b1 * b1 + b2 - b1 + 1.0;
    (a1, a2 * (a1 * a1 - 2.0 * a2))
}

#[test]
fn rasters_do_not_depend_on_worker_count() {
    let sys = System::Matrix(two_parameter_family());
    let axes = box_axes(81);
    for route in [Route::Auto, Route::Theorem1] {
        let scan = |workers| {
            let opts = ScanOptions {
                workers,
                route,
                ..ScanOptions::default()
            };
            scan_region(&sys, &axes, &[], &opts).unwrap()
        };
        let one = scan(1);
        assert_eq!(one, scan(2));
        assert_eq!(one, scan(4));
        assert_eq!(one, scan(0));
    }
}

#[test]
fn raster_matches_eigenvalue_arguments_on_a_subsample() {
    let fam = two_parameter_family();
    let sys = System::Matrix(fam.clone());
    let raster = scan_region(&sys, &box_axes(121), &[], &ScanOptions::default()).unwrap();
    let picks = sample(&mut rng(5000), raster.len(), raster.len() / 20);
    let mut compared = 0;
    for flat in picks {
        let code = CellCode::from_u8(raster.cells[flat]).unwrap();
        if code == CellCode::Boundary {
            continue;
        }
        let a = instantiate(&fam, &raster.coords(flat)).unwrap();
        let o = argument_oracle(&a, 1.5, TOL).unwrap();
        if o.outcome == Outcome::Boundary {
            continue;
        }
        assert_eq!(
            code,
            CellCode::from_outcome(o.outcome),
            "cell {:?}",
            raster.coords(flat)
        );
        compared += 1;
    }
    assert!(compared > 700, "compared {compared}");
}

#[test]
fn stable_cells_satisfy_the_hand_inequalities() {
    let sys = System::Matrix(two_parameter_family());
    let raster = scan_region(&sys, &box_axes(151), &[], &ScanOptions::default()).unwrap();
    let mut stable = 0;
    for flat in 0..raster.len() {
        let c = raster.coords(flat);
        let (e1, e2) = hand_inequalities(c[0], c[1]);
        match CellCode::from_u8(raster.cells[flat]).unwrap() {
            CellCode::Stable => {
                assert!(e1 > 0.0 && e2 > 0.0, "stable cell {c:?} gives ({e1}, {e2})");
                stable += 1;
            }
            CellCode::NotStable => assert!(
                e1 <= 0.0 || e2 <= 0.0,
                "unstable cell {c:?} gives ({e1}, {e2})"
            ),
            _ => {}
        }
    }
    assert!(
        stable > 5000 && stable < raster.len() - 5000,
        "stable {stable}"
    );
}

#[test]
fn one_parameter_bound_along_an_edge() {
    // β₂ = 0, β₁ = −t: the second inequality is 2t² − 10t + 2 > 0, whose smaller root is
    // (10 − √84)/4
    let fam = two_parameter_family();
    let expected = (10.0 - 84f64.sqrt()) / 4.0;
    let family = |t: f64, _c: f64| -> fracrh::Result<RealPolynomial> {
        Ok(fracrh::charpoly::char_poly(&instantiate(&fam, &[-t, 0.0])?))
    };
    let opts = BisectOptions {
        lo: 0.0,
        hi: 2.0,
        constraint: (0.0, 0.0),
        samples: 2,
        tol: 1e-7,
        ..BisectOptions::default()
    };
    let res = max_param_bisect(family, &opts).unwrap();
    assert!(
        (res.bound - expected).abs() < 2e-7,
        "bound {} vs {expected}",
        res.bound
    );

    // fine 1-D scan with the eigenvalue oracle
    let step = 1e-5;
    let mut last_stable = 0.0;
    for i in 0..40_000 {
        let t = i as f64 * step;
        let a = instantiate(&fam, &[-t, 0.0]).unwrap();
        if argument_oracle(&a, 1.5, TOL).unwrap().outcome != Outcome::Stable {
            break;
        }
        last_stable = t;
    }
    assert!(
        (last_stable - res.bound).abs() <= step,
        "scan {last_stable} vs {}",
        res.bound
    );
}

#[test]
fn bisection_result_is_certified() {
    // quartic family with a rank-one uncertainty, constraint c in [0, 1)
    let family = |eps: f64, c: f64| {
        RealPolynomial::new(vec![
            1.0,
            12.0,
            67.0,
            6.0 * c * eps - 3.0 * eps + 142.0,
            12.0 * c * eps - 6.0 * eps + 96.0,
        ])
    };
    for route in [
        BisectRoute::Theorem1,
        BisectRoute::ClosedForm,
        BisectRoute::ArgumentOracle,
    ] {
        let opts = BisectOptions {
            route,
            ..BisectOptions::default()
        };
        let res = max_param_bisect(family, &opts).unwrap();
        assert!(!res.hit_range_max);
        let below = res.bound - 2.0 * opts.tol;
        let above = res.bound + 2.0 * opts.tol;
        for &c in &res.samples {
            let f = family(below, c).unwrap();
            assert_eq!(
                argument_oracle_poly(&f, opts.alpha, TOL).unwrap().outcome,
                Outcome::Stable,
                "c={c}"
            );
        }
        assert!(res.samples.iter().any(|&c| {
            let f = family(above, c).unwrap();
            argument_oracle_poly(&f, opts.alpha, TOL).unwrap().outcome != Outcome::Stable
        }));
        assert!(
            (res.bound - 7.2742).abs() < 1e-3,
            "{route:?}: {}",
            res.bound
        );
    }
}

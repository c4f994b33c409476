use dicke_core::crit::{estimate_critical_point, scaling_fit, sweep, LambdaGrid};
use dicke_core::model::{critical_coupling, gp_per_atom, gp_slope_at_critical, ModelParams};
use dicke_core::sector::ScanPolicy;

#[test]
fn analytic_curve_shape() {
    let p = ModelParams::resonant();
    let lc = critical_coupling(&p);
    let grid = LambdaGrid::uniform(0.0, 3.0, 601).unwrap();
    let g: Vec<f64> = grid.points().iter().map(|&l| gp_per_atom(&p, l).unwrap()).collect();
    // zero through the normal phase, increasing beyond
    for (l, v) in grid.points().iter().zip(&g) {
        if *l <= lc {
            assert_eq!(*v, 0.0);
        }
    }
    let above: Vec<(f64, f64)> = grid
        .points()
        .iter()
        .copied()
        .zip(g.iter().copied())
        .filter(|(l, _)| *l > lc)
        .collect();
    for w in above.windows(2) {
        assert!(w[1].1 > w[0].1);
    }
    // The curvature (pi/2)(2 - 6 lc^4 / l^4) changes sign at 3^(1/4) lc:
    // concave right after the kink, convex further out.
    let inflection = 3f64.powf(0.25) * lc;
    for w in above.windows(3) {
        let second = w[2].1 - 2.0 * w[1].1 + w[0].1;
        if w[2].0 < inflection {
            assert!(second < 0.0, "at {}", w[1].0);
        } else if w[0].0 > inflection {
            assert!(second > 0.0, "at {}", w[1].0);
        }
    }
}

#[test]
fn ratio_approaches_critical_slope() {
    let p = ModelParams::resonant();
    let lc = critical_coupling(&p);
    let target = gp_slope_at_critical(&p);
    let x = 1e-4;
    let ratio = gp_per_atom(&p, lc + x).unwrap() / x;
    assert!(((ratio - target) / target).abs() < 0.01);
}

#[test]
fn ed_phase_stays_within_order_one_photon_of_condensate() {
    // The finite-N ground state lives in a single excitation sector, so
    // <a'a> moves in steps as lambda crosses sector boundaries. The gap to
    // N alpha^2 is bounded by O(1) photons and shrinks per atom.
    let p = ModelParams::resonant();
    let lc = critical_coupling(&p);
    let ladder = [16, 32, 64, 128, 256];
    let grid = LambdaGrid::new(vec![0.9 * lc, 1.1 * lc, 1.3 * lc]).unwrap();
    let r = sweep(&p, &ladder, &grid, &ScanPolicy::default(), 0).unwrap();
    for (i, a) in r.analytic.iter().enumerate() {
        let gaps: Vec<f64> = r
            .ed
            .iter()
            .map(|s| (s.points[i].gp_per_atom - a.gp_per_atom).abs())
            .collect();
        if a.lambda < lc {
            assert!(gaps.iter().all(|&g| g == 0.0));
            continue;
        }
        for (s, gap) in r.ed.iter().zip(&gaps) {
            let photons = gap * s.n_atoms as f64 / (2.0 * std::f64::consts::PI);
            assert!(photons < 0.5, "N={} lambda={}: {photons}", s.n_atoms, a.lambda);
        }
        assert!(gaps[4] < gaps[0], "{gaps:?}");
    }
}

#[test]
fn finite_size_critical_point_drifts_toward_lambda_c() {
    let p = ModelParams::resonant();
    let lc = critical_coupling(&p);
    let grid = LambdaGrid::uniform(0.5, 1.0, 51).unwrap();
    let h = grid.spacing().unwrap();
    let r = sweep(&p, &[32, 128], &grid, &ScanPolicy::default(), 0).unwrap();
    let small = estimate_critical_point(&r, 32).unwrap();
    let large = estimate_critical_point(&r, 128).unwrap();
    assert!((large - lc).abs() <= (small - lc).abs() + h);
    assert!((large - lc).abs() <= h);
    assert!(estimate_critical_point(&r, 64).is_err());
}

#[test]
fn small_ladder_scaling_is_linear() {
    let p = ModelParams::resonant();
    let grid = LambdaGrid::uniform(0.5, 1.0, 26).unwrap();
    let fit = scaling_fit(&p, &[8, 16, 24, 32], &grid, &ScanPolicy::default(), 0).unwrap();
    assert!(fit.fit.slope > 0.0);
    assert!((0.0..=1.0).contains(&fit.fit.r_squared));
    assert_eq!(fit.n_ladder, vec![8, 16, 24, 32]);
    assert!(fit.peak_slopes.windows(2).all(|w| w[1] > w[0]));
}

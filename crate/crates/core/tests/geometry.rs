mod common;

use approx::assert_abs_diff_eq;
use common::{seeded, ExpLine, Flat, Sphere, Twisted};
use nalgebra::{DMatrix, DVector};
use teleparallel::geometry::*;
use teleparallel::quantum::{MonotoneFunction, QuantumChart};
use teleparallel::simplex::SimplexChart;
use teleparallel::{ChartPoint, DiffConfig, GeometryError, ManifoldChart};

fn cfg() -> DiffConfig {
    DiffConfig::default()
}

fn bures_qubit() -> QuantumChart {
    QuantumChart::standard(2, MonotoneFunction::bures()).unwrap()
}

fn bkm_qubit() -> QuantumChart {
    QuantumChart::standard(2, MonotoneFunction::bkm()).unwrap()
}

fn charts() -> Vec<Box<dyn ManifoldChart>> {
    vec![
        Box::new(Twisted),
        Box::new(ExpLine),
        Box::new(SimplexChart::standard(4).unwrap()),
        Box::new(bures_qubit()),
        Box::new(QuantumChart::standard(3, MonotoneFunction::deformed(0.25).unwrap()).unwrap()),
    ]
}

#[test]
fn constant_frame_has_zero_coefficients() {
    let chart = SimplexChart::standard(3).unwrap();
    let mut rng = seeded(1);
    for _ in 0..10 {
        let x = chart.sample(&mut rng);
        assert_eq!(weitzenbock_coefficients(&chart, &x, &cfg()).unwrap().max_abs(), 0.0);
    }
}

#[test]
fn exponential_frame_on_the_line() {
    for x in [-1.5, 0.0, 0.3, 2.0] {
        let g = weitzenbock_coefficients(&ExpLine, &ChartPoint::new(vec![x]), &cfg()).unwrap();
        assert_abs_diff_eq!(g.get(0, 0, 0), -1.0, epsilon = 1e-9);
    }
}

#[test]
fn twisted_frame_coefficients() {
    let g = weitzenbock_coefficients(&Twisted, &ChartPoint::new(vec![0.4, -0.2]), &cfg()).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                let expected = if (i, j, k) == (1, 0, 1) { -1.0 } else { 0.0 };
                assert_abs_diff_eq!(g.get(i, j, k), expected, epsilon = 1e-9);
            }
        }
    }
}

#[test]
fn frame_columns_are_parallel() {
    let c = cfg();
    let mut rng = seeded(2);
    for chart in charts() {
        let m = chart.as_ref();
        for _ in 0..5 {
            let x = m.sample(&mut rng);
            let frame = |p: &ChartPoint| gradient_frame_at(m, p);
            let g = weitzenbock_coefficients_of(m, &frame, &x, &c).unwrap();
            assert!(weitzenbock_residual(m, &frame, &g, &x, &c).unwrap() < 10.0 * c.step * c.step);
            let g = weitzenbock_coefficients(m, &x, &c).unwrap();
            assert!(weitzenbock_residual(m, &|p| m.frame_at(p), &g, &x, &c).unwrap() < 10.0 * c.step * c.step);
        }
    }
}

#[test]
fn invalid_points_are_rejected() {
    let chart = SimplexChart::standard(3).unwrap();
    let outside = ChartPoint::new(vec![0.7, 0.6]);
    assert_eq!(weitzenbock_coefficients(&chart, &outside, &cfg()).unwrap_err(), GeometryError::InvalidPoint);
    assert!(matches!(
        weitzenbock_coefficients(&chart, &ChartPoint::new(vec![0.2]), &cfg()),
        Err(GeometryError::DimensionMismatch { .. })
    ));
}

#[test]
fn levi_civita_examples() {
    let flat = levi_civita_coefficients(&Flat(3), &ChartPoint::new(vec![0.1, 0.2, 0.3]), &cfg()).unwrap();
    assert_eq!(flat.max_abs(), 0.0);

    let chart = SimplexChart::standard(2).unwrap();
    for p in [0.25, 0.5, 0.8] {
        let g = levi_civita_coefficients(&chart, &ChartPoint::new(vec![p]), &cfg()).unwrap();
        let oracle = 0.5 * (2.0 * p - 1.0) / (p * (1.0 - p));
        assert_abs_diff_eq!(g.get(0, 0, 0), oracle, epsilon = 1e-8);
    }
    let g = levi_civita_coefficients(&chart, &ChartPoint::new(vec![0.25]), &cfg()).unwrap();
    assert_abs_diff_eq!(g.get(0, 0, 0), -4.0 / 3.0, epsilon = 1e-8);
}

#[test]
fn levi_civita_is_symmetric_and_compatible() {
    let c = cfg();
    let mut rng = seeded(3);
    let mut all = charts();
    all.push(Box::new(Sphere));
    for chart in &all {
        let m = chart.as_ref();
        for _ in 0..20 {
            let x = m.sample(&mut rng);
            let g = levi_civita_coefficients(m, &x, &c).unwrap();
            assert_eq!(torsion_components(&g).max_abs(), 0.0);
            assert!(metric_compatibility_residual(m, &g, &x, &c).unwrap() < 10.0 * c.step);
        }
    }
}

#[test]
fn torsion_of_a_single_entry() {
    let mut a = Array3::zeros(2);
    a.set(0, 0, 1, 2.5);
    let t = torsion_components(&ConnectionCoefficients::from_array(a));
    assert_eq!(t.get(0, 0, 1), 2.5);
    assert_eq!(t.get(0, 1, 0), -2.5);
    assert_eq!(t.max_abs(), 2.5);
}

#[test]
fn torsion_matches_brackets() {
    // T(X_j, X_k) = [X_k, X_j] for a Weitzenböck connection
    let c = cfg();
    let mut rng = seeded(4);
    for chart in charts() {
        let m = chart.as_ref();
        let frame = |p: &ChartPoint| gradient_frame_at(m, p);
        for _ in 0..5 {
            let x = m.sample(&mut rng);
            let g = weitzenbock_coefficients_of(m, &frame, &x, &c).unwrap();
            let t = torsion_components(&g);
            let e = frame(&x).unwrap();
            let n = m.dim();
            let scale = g.max_abs().max(1.0) * e.matrix().amax().max(1.0).powi(2);
            for j in 0..n {
                for k in 0..n {
                    let (xj, xk) = (e.column(j), e.column(k));
                    let applied = DVector::from_fn(n, |i, _| {
                        (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| t.get(i, a, b) * xj[a] * xk[b]).sum::<f64>()
                    });
                    let bracket = lie_bracket_of(m, &frame, &x, k, j, &c).unwrap();
                    assert!((applied - bracket).amax() / scale < 1e-5);
                }
            }
        }
    }
}

#[test]
fn lie_bracket_examples() {
    let c = cfg();
    let x = ChartPoint::new(vec![0.3, 0.1]);
    assert_eq!(lie_bracket(&Flat(2), &x, 0, 1, &c).unwrap().amax(), 0.0);
    let b = lie_bracket(&Twisted, &x, 0, 1, &c).unwrap();
    assert_abs_diff_eq!(b[0], 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(b[1], 0.3f64.exp(), epsilon = 1e-8);
    let back = lie_bracket(&Twisted, &x, 1, 0, &c).unwrap();
    assert!((b + back).amax() < 1e-15);
}

#[test]
fn brackets_of_gradient_frames() {
    let c = cfg();
    let mut rng = seeded(5);
    for _ in 0..10 {
        let x = bures_qubit().sample(&mut rng);
        let bures = bures_qubit();
        let norm = frame_bracket_norm(&bures, &|p| gradient_frame_at(&bures, p), &x, &c).unwrap();
        assert!(norm > 1e-3, "{norm}");
        let bkm = bkm_qubit();
        let norm = frame_bracket_norm(&bkm, &|p| gradient_frame_at(&bkm, p), &x, &c).unwrap();
        assert!(norm < 1e-6, "{norm}");
    }
}

#[test]
fn closed_coframe_identity() {
    // dθ^l(X_j, X_k) = -θ^l([X_j, X_k]) when θ^l(X_k) is constant
    let c = cfg();
    let x = ChartPoint::new(vec![0.3, -0.4]);
    let e = Twisted.frame_at(&x).unwrap();
    let theta = Twisted.coframe_at(&x).unwrap();
    let bracket = lie_bracket(&Twisted, &x, 0, 1, &c).unwrap();
    for l in 0..2 {
        let form = |p: &ChartPoint| Ok(Twisted.coframe_at(p)?.matrix().row(l).transpose());
        let d = one_form_differential(&Twisted, &form, &x, &e.column(0), &e.column(1), &c).unwrap();
        let rhs = -(theta.matrix().row(l) * &bracket)[0];
        assert_abs_diff_eq!(d, rhs, epsilon = 1e-8);
    }
    let form = |p: &ChartPoint| Ok(Twisted.coframe_at(p)?.matrix().row(1).transpose());
    let d = one_form_differential(&Twisted, &form, &x, &e.column(0), &e.column(1), &c).unwrap();
    assert_abs_diff_eq!(d, -1.0, epsilon = 1e-8);
}

#[test]
fn curvature_examples() {
    let c = cfg();
    let x = ChartPoint::new(vec![0.2, 0.5]);
    let zero = |_: &ChartPoint| Ok(ConnectionCoefficients::zeros(2));
    assert_eq!(curvature_components(&Flat(2), &zero, &x, &c).unwrap().max_abs(), 0.0);

    let lc = |p: &ChartPoint| levi_civita_coefficients(&Sphere, p, &c);
    for theta in [0.6, 1.2, 2.0] {
        let x = ChartPoint::new(vec![theta, 0.3]);
        let r = curvature_components(&Sphere, &lc, &x, &c).unwrap();
        assert_abs_diff_eq!(r.get(0, 1, 0, 1), theta.sin().powi(2), epsilon = 1e-6);
        assert_abs_diff_eq!(r.get(0, 1, 1, 0), -theta.sin().powi(2), epsilon = 1e-6);
    }
}

#[test]
fn weitzenbock_connections_are_flat_and_curvature_is_antisymmetric() {
    let c = cfg();
    let mut rng = seeded(6);
    for chart in charts() {
        let m = chart.as_ref();
        let dual = |p: &ChartPoint| weitzenbock_coefficients_of(m, &|q| gradient_frame_at(m, q), p, &c);
        let primal = |p: &ChartPoint| weitzenbock_coefficients(m, p, &c);
        for _ in 0..5 {
            let x = m.sample(&mut rng);
            assert!(curvature_residual(m, &dual, &x, &c).unwrap() < 1e-4);
            assert!(curvature_residual(m, &primal, &x, &c).unwrap() < 1e-4);
            let r = curvature_components(m, &dual, &x, &c).unwrap();
            let n = m.dim();
            for i in 0..n {
                for l in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            assert_eq!(r.get(i, l, j, k), -r.get(i, l, k, j));
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn gradient_frame_examples() {
    let y = gradient_frame(&MetricMatrix::identity(3), &CoframeMatrix::identity(3)).unwrap();
    assert_eq!(y.matrix(), &DMatrix::identity(3, 3));

    let chart = SimplexChart::standard(2).unwrap();
    let y = gradient_frame_at(&chart, &ChartPoint::new(vec![0.5])).unwrap();
    assert_abs_diff_eq!(y.matrix()[(0, 0)], 0.5, epsilon = 1e-15);
}

#[test]
fn gradient_frame_pairs_to_a_constant() {
    // G(X_j, Y_k) = θ^k(X_j)
    let mut rng = seeded(7);
    for chart in charts() {
        let m = chart.as_ref();
        let x0 = m.sample(&mut rng);
        let reference = m.coframe_at(&x0).unwrap().pairing(&m.frame_at(&x0).unwrap());
        for _ in 0..32 {
            let x = m.sample(&mut rng);
            let g = m.metric_at(&x).unwrap();
            let (e, y) = (m.frame_at(&x).unwrap(), gradient_frame_at(m, &x).unwrap());
            let pairing = e.matrix().transpose() * g.matrix() * y.matrix();
            assert!((pairing.transpose() - &reference).amax() < 1e-9 * reference.amax().max(1.0));
        }
    }
}

#[test]
fn flat_pair_is_trivial() {
    let (a, b) = dual_weitzenbock_pair(&Flat(3), &ChartPoint::new(vec![0.0, 1.0, 2.0]), &cfg()).unwrap();
    assert_eq!(a.max_abs(), 0.0);
    assert_eq!(b.max_abs(), 0.0);
}

#[test]
fn duality_on_the_simplex_and_levi_civita_self_duality() {
    let c = cfg();
    let chart = SimplexChart::standard(3).unwrap();
    let primal = |p: &ChartPoint| weitzenbock_coefficients(&chart, p, &c);
    let dual = |p: &ChartPoint| weitzenbock_coefficients_of(&chart, &|q| gradient_frame_at(&chart, q), p, &c);
    let mut rng = seeded(8);
    for _ in 0..100 {
        let x = chart.sample(&mut rng);
        assert!(duality_residuals(&chart, &primal, &dual, &x, &c).unwrap().max_abs() < 1e-6);
    }
    for chart in charts() {
        let m = chart.as_ref();
        let lc = |p: &ChartPoint| levi_civita_coefficients(m, p, &c);
        for _ in 0..5 {
            let x = m.sample(&mut rng);
            assert!(duality_residuals(m, &lc, &lc, &x, &c).unwrap().max_abs() < 1e-5);
            assert!(duality_residual(m, &lc, &lc, &x, 0, 0, 0, &c).unwrap() < 1e-5);
        }
    }
    let x = chart.sample(&mut rng);
    assert!(duality_residual(&chart, &primal, &dual, &x, 0, 0, 5, &c).is_err());
}

#[test]
fn bures_duality_and_cross_parallelism() {
    let c = cfg();
    let chart = bures_qubit();
    let primal = |p: &ChartPoint| weitzenbock_coefficients(&chart, p, &c);
    let dual = |p: &ChartPoint| weitzenbock_coefficients_of(&chart, &|q| gradient_frame_at(&chart, q), p, &c);
    let mut rng = seeded(9);
    for _ in 0..100 {
        let x = chart.sample(&mut rng);
        assert!(duality_residuals(&chart, &primal, &dual, &x, &c).unwrap().max_abs() < 1e-5);
    }
    for chart in charts() {
        for _ in 0..5 {
            let x = chart.sample(&mut rng);
            assert!(cross_parallelism_residual(chart.as_ref(), &x, &c).unwrap() < 1e-5);
        }
    }
}

fn defects_at(m: &dyn ManifoldChart, x: &ChartPoint) -> SymmetryDefects {
    let c = cfg();
    let (gamma, _) = dual_weitzenbock_pair(m, x, &c).unwrap();
    let lc = levi_civita_coefficients(m, x, &c).unwrap();
    let t = amari_tensor_components(&gamma, &lc, &m.metric_at(x).unwrap()).unwrap();
    symmetry_defects(&t).relative()
}

#[test]
fn amari_tensor_examples() {
    let c = cfg();
    let chart = SimplexChart::standard(2).unwrap();
    let at = |p: f64| {
        let x = ChartPoint::new(vec![p]);
        let (gamma, star) = dual_weitzenbock_pair(&chart, &x, &c).unwrap();
        let lc = levi_civita_coefficients(&chart, &x, &c).unwrap();
        let g = chart.metric_at(&x).unwrap();
        let t = amari_tensor_components(&gamma, &lc, &g).unwrap();
        let from_dual = amari_tensor_from_dual(&star, &lc, &g).unwrap();
        assert!(t.array().max_abs_diff(from_dual.array()) < 1e-6);
        assert_eq!(amari_tensor_components(&lc, &lc, &g).unwrap().max_abs(), 0.0);
        t.get(0, 0, 0)
    };
    assert_abs_diff_eq!(at(0.25), 64.0 / 9.0, epsilon = 1e-6);
    assert_abs_diff_eq!(at(0.5), 0.0, epsilon = 1e-8);
}

#[test]
fn symmetry_defect_examples() {
    let sym = Tensor3::from_fn(3, |i, j, k| (i + j + k) as f64 + (i * j * k) as f64);
    let d = symmetry_defects(&sym);
    assert_eq!((d.d12, d.d13, d.d23), (0.0, 0.0, 0.0));
    let skew = Tensor3::from_fn(2, |i, j, _| if i < j { 1.0 } else { 0.0 });
    assert_eq!(symmetry_defects(&skew).d12, 1.0);

    let mut rng = seeded(10);
    let simplex = SimplexChart::standard(3).unwrap();
    for _ in 0..20 {
        assert!(defects_at(&simplex, &simplex.sample(&mut rng)).max() < 1e-6);
    }
    let bures = bures_qubit();
    for _ in 0..20 {
        let d = defects_at(&bures, &bures.sample(&mut rng));
        assert!(d.d12 < 1e-6 && d.d13 > 1e-3, "{d:?}");
    }
}

#[test]
fn symmetry_defects_track_brackets() {
    let c = cfg();
    let tol = 1e-5;
    let mut rng = seeded(11);
    let charts: Vec<Box<dyn ManifoldChart>> = vec![
        Box::new(SimplexChart::standard(3).unwrap()),
        Box::new(bkm_qubit()),
        Box::new(bures_qubit()),
        Box::new(QuantumChart::standard(2, MonotoneFunction::wigner_yanase()).unwrap()),
    ];
    for chart in &charts {
        let m = chart.as_ref();
        for _ in 0..10 {
            let x = m.sample(&mut rng);
            let d = defects_at(m, &x);
            let ex = frame_bracket_norm(m, &|p| m.frame_at(p), &x, &c).unwrap();
            let ey = frame_bracket_norm(m, &|p| gradient_frame_at(m, p), &x, &c).unwrap();
            assert_eq!(d.d12 < tol, ex < tol);
            assert_eq!(d.d13 < tol, ey < tol, "{d:?} {ey}");
        }
    }
}

#[test]
fn straight_line_geodesic() {
    let zero = |_: &ChartPoint| Ok(ConnectionCoefficients::zeros(2));
    let path = geodesic_integrate(&Flat(2), &zero, &ChartPoint::new(vec![0.0, 0.0]), &DVector::from_vec(vec![1.0, 0.0]), 1.0, &cfg()).unwrap();
    let end = path.points.last().unwrap().coords();
    assert_abs_diff_eq!(end[0], 1.0, epsilon = 1e-12);
    assert_abs_diff_eq!(end[1], 0.0, epsilon = 1e-15);
    assert_eq!(path.points[0].coords(), &DVector::from_vec(vec![0.0, 0.0]));
    assert_eq!(path.velocities[0], DVector::from_vec(vec![1.0, 0.0]));
    assert!(covariant_acceleration(&path.points, path.dt, &zero).unwrap().iter().all(|r| *r < 1e-9));

    let back = geodesic_integrate(&Flat(2), &zero, &ChartPoint::new(vec![0.0, 0.0]), &DVector::from_vec(vec![1.0, 0.0]), -0.5, &cfg()).unwrap();
    assert_abs_diff_eq!(back.points.last().unwrap().coords()[0], -0.5, epsilon = 1e-12);
}

#[test]
fn mixture_geodesic_on_the_segment() {
    let c = cfg();
    let chart = SimplexChart::standard(2).unwrap();
    let mix = |p: &ChartPoint| weitzenbock_coefficients(&chart, p, &c);
    let path = geodesic_integrate(&chart, &mix, &ChartPoint::new(vec![0.5]), &DVector::from_vec(vec![0.2]), 1.0, &c).unwrap();
    assert_abs_diff_eq!(path.points.last().unwrap().coords()[0], 0.7, epsilon = 1e-12);

    let abort = geodesic_integrate(&chart, &mix, &ChartPoint::new(vec![0.5]), &DVector::from_vec(vec![0.6]), 1.0, &c).unwrap_err();
    assert!(abort.t_exit > 0.8 && abort.t_exit < 0.84, "{}", abort.t_exit);
    assert!(!abort.partial.points.is_empty());
    assert!(matches!(GeometryError::from(abort), GeometryError::LeftManifold(_)));
}

#[test]
fn exponential_geodesic_matches_the_integrator() {
    use teleparallel::simplex::{exponential_geodesic, exponential_initial_velocity, tangent_to_chart, ProbabilityVector};
    let c = cfg();
    let chart = SimplexChart::standard(2).unwrap();
    let exp = |p: &ChartPoint| weitzenbock_coefficients_of(&chart, &|q| gradient_frame_at(&chart, q), p, &c);
    let p = ProbabilityVector::new(vec![0.3, 0.7]).unwrap();
    let v = [0.8, -0.4];
    let v0 = tangent_to_chart(&exponential_initial_velocity(&p, &v).unwrap());
    let path = geodesic_integrate(&chart, &exp, &p.to_chart(), &v0, 1.0, &c).unwrap();
    for (t, x) in path.times.iter().zip(&path.points) {
        let closed = exponential_geodesic(&p, &v, *t).unwrap();
        assert!((x.coords()[0] - closed.as_slice()[0]).abs() < 1e-6);
    }
    let residuals = covariant_acceleration(&path.points, path.dt, &exp).unwrap();
    assert_eq!(residuals.len(), path.points.len() - 4);
    assert!(residuals.iter().all(|r| *r < 1e-5));
}

#[test]
fn covariant_acceleration_needs_five_samples() {
    let zero = |_: &ChartPoint| Ok(ConnectionCoefficients::zeros(1));
    let pts: Vec<ChartPoint> = (0..4).map(|i| ChartPoint::new(vec![i as f64])).collect();
    assert_eq!(
        covariant_acceleration(&pts, 1.0, &zero).unwrap_err(),
        GeometryError::TooFewSamples { needed: 5, got: 4 }
    );
}

#[test]
fn finite_differences_converge_at_the_expected_order() {
    // ∂(sin x0 · e^{x1}) on the flat chart
    let f = |p: &ChartPoint| {
        let c = p.coords();
        Ok(DMatrix::from_element(1, 1, c[0].sin() * c[1].exp()))
    };
    let x = ChartPoint::new(vec![0.7, 0.2]);
    let exact = 0.7f64.cos() * 0.2f64.exp();
    let err = |step: f64, richardson: bool| {
        let d = partial_derivatives(&Flat(2), f, &x, &DiffConfig::new(step, richardson, 1000).unwrap()).unwrap();
        (d[0][(0, 0)] - exact).abs()
    };
    let (coarse, fine) = (err(1e-2, false), err(5e-3, false));
    assert!((coarse / fine - 4.0).abs() < 0.1, "{}", coarse / fine);
    assert!(err(1e-2, true) < 1e-9);
    assert!(err(1e-5, false) < 1e-9);
}

#[test]
fn config_and_matrix_validation() {
    assert!(DiffConfig::new(1e-10, false, 1000).is_err());
    assert!(DiffConfig::new(0.1, false, 1000).is_err());
    assert!(DiffConfig::new(1e-5, false, 5).is_err());
    let d = DiffConfig::default();
    assert_eq!((d.step, d.richardson, d.ode_steps), (1e-5, false, 1000));

    assert!(matches!(FrameMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0])), Err(GeometryError::SingularFrame(_))));
    assert!(matches!(MetricMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.4, 1.0])), Err(GeometryError::AsymmetricMetric(_))));
    assert!(matches!(MetricMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])), Err(GeometryError::SingularMetric(_))));
    assert!(condition_number(&DMatrix::identity(3, 3)) - 1.0 < 1e-12);
}

//! Identity suites evaluated per sample point.

use nalgebra::{Complex, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teleparallel::geometry::{
    amari_tensor_components, amari_tensor_from_dual, covariant_acceleration, curvature_residual,
    dual_weitzenbock_pair, duality_residuals, frame_bracket_norm, geodesic_integrate,
    gradient_frame_at, levi_civita_coefficients, scaled_residual, symmetry_defects,
    torsion_components, weitzenbock_coefficients, weitzenbock_coefficients_of, Array3,
};
use teleparallel::quantum::{
    self, bkm_geodesic, deformed_geodesic, random_unitary, unitary_action, CMatrix, DensityState,
    MonotoneFunction, QuantumChart, Superoperator, TangentMatrix,
};
use teleparallel::simplex::{
    self, exponential_geodesic, fisher_rao_metric, rplus_action, ProbabilityVector, SimplexChart,
    SimplexTangent,
};
use teleparallel::sweep::map_points;
use teleparallel::{ChartPoint, ConnectionCoefficients, DiffConfig, GeometryError, ManifoldChart, Result};

use crate::config::{ManifoldSpec, MetricSpec, ScenarioConfig, Suite};

/// Samples per closed-form curve, spread over `t ∈ [-1, 1]`.
const CURVE_SAMPLES: usize = 81;
const CURVE_SPEED: f64 = 0.3;

/// One suite evaluated at one sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub suite: Suite,
    pub point: usize,
    /// `None` when the evaluation failed; see `error`.
    pub residual: Option<f64>,
    pub threshold: f64,
    pub pass: bool,
    pub details: Vec<(&'static str, f64)>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub max_residual: Option<f64>,
    pub passed: usize,
    pub failed: usize,
    /// Points whose evaluation raised an error (counted in `failed` too).
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub scenario: String,
    pub seed: u64,
    pub samples: usize,
    pub fd_step: f64,
    pub tolerance: f64,
    pub suites: Vec<Suite>,
    /// Suite-major, then point order.
    pub records: Vec<Record>,
    pub summary: Vec<SuiteSummary>,
}

impl VerificationReport {
    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.pass).count()
    }

    pub fn failed(&self) -> usize {
        self.records.len() - self.passed()
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }
}

enum Model {
    Simplex(SimplexChart),
    Quantum(QuantumChart),
}

impl Model {
    fn new(cfg: &ScenarioConfig) -> Result<Self> {
        Ok(match (cfg.manifold, &cfg.metric) {
            (ManifoldSpec::Simplex(n), _) => Model::Simplex(SimplexChart::standard(n)?),
            (ManifoldSpec::Quantum(d), MetricSpec::Petz(f)) => Model::Quantum(QuantumChart::standard(d, f.clone())?),
            (ManifoldSpec::Quantum(_), MetricSpec::FisherRao) => {
                return Err(GeometryError::Spec("fisher_rao on quantum states".into()))
            }
        })
    }

    fn chart(&self) -> &dyn ManifoldChart {
        match self {
            Model::Simplex(c) => c,
            Model::Quantum(c) => c,
        }
    }
}

type Outcome = Result<(f64, Vec<(&'static str, f64)>)>;

struct Point<'a> {
    model: &'a Model,
    x: ChartPoint,
    cfg: DiffConfig,
    rng: ChaCha8Rng,
}

impl Point<'_> {
    fn chart(&self) -> &dyn ManifoldChart {
        self.model.chart()
    }

    fn primal(&self) -> impl Fn(&ChartPoint) -> Result<ConnectionCoefficients> + '_ {
        move |p| weitzenbock_coefficients(self.chart(), p, &self.cfg)
    }

    fn dual(&self) -> impl Fn(&ChartPoint) -> Result<ConnectionCoefficients> + '_ {
        move |p| weitzenbock_coefficients_of(self.chart(), &|q| gradient_frame_at(self.chart(), q), p, &self.cfg)
    }
}

fn duality(pt: &mut Point) -> Outcome {
    let r = duality_residuals(pt.chart(), &pt.primal(), &pt.dual(), &pt.x, &pt.cfg)?;
    Ok((r.max_abs(), vec![]))
}

fn torsion(pt: &mut Point) -> Outcome {
    let (gamma, star) = dual_weitzenbock_pair(pt.chart(), &pt.x, &pt.cfg)?;
    let primal = scaled_residual(torsion_components(&gamma).max_abs(), gamma.max_abs());
    let dual = scaled_residual(torsion_components(&star).max_abs(), star.max_abs());
    let brackets = frame_bracket_norm(pt.chart(), &|q| gradient_frame_at(pt.chart(), q), &pt.x, &pt.cfg)?;
    Ok((primal.max(dual), vec![("primal_torsion", primal), ("dual_torsion", dual), ("dual_bracket", brackets)]))
}

fn curvature(pt: &mut Point) -> Outcome {
    let primal = curvature_residual(pt.chart(), &pt.primal(), &pt.x, &pt.cfg)?;
    let dual = curvature_residual(pt.chart(), &pt.dual(), &pt.x, &pt.cfg)?;
    Ok((primal.max(dual), vec![("primal_curvature", primal), ("dual_curvature", dual)]))
}

/// Checks `T_ijk − T_jik = G_lk Tor^l_ij`, `T_ijk − T_kji = −G_jl Tor*^l_ik` and that the
/// primal and dual constructions of `T` agree. The raw symmetry defects go to the details.
fn amari_symmetry(pt: &mut Point) -> Outcome {
    let c = pt.chart();
    let (gamma, star) = dual_weitzenbock_pair(c, &pt.x, &pt.cfg)?;
    let lc = levi_civita_coefficients(c, &pt.x, &pt.cfg)?;
    let g = c.metric_at(&pt.x)?;
    let t = amari_tensor_components(&gamma, &lc, &g)?;
    let t_dual = amari_tensor_from_dual(&star, &lc, &g)?;
    let (tor, tor_star) = (torsion_components(&gamma), torsion_components(&star));
    let n = c.dim();
    let gm = g.matrix();
    let lowered = |a: &Array3, row: usize, i: usize, j: usize| -> f64 { (0..n).map(|l| gm[(l, row)] * a.get(l, i, j)).sum() };
    let mut gap: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                gap = gap.max((t.get(i, j, k) - t.get(j, i, k) - lowered(&tor, k, i, j)).abs());
                gap = gap.max((t.get(i, j, k) - t.get(k, j, i) + lowered(&tor_star, j, i, k)).abs());
            }
        }
    }
    gap = gap.max(t.array().max_abs_diff(t_dual.array()));
    let d = symmetry_defects(&t).relative();
    Ok((scaled_residual(gap, t.max_abs()), vec![("d12", d.d12), ("d13", d.d13), ("d23", d.d23)]))
}

fn sampled_curve(curve: impl Fn(f64) -> Result<ChartPoint>) -> Result<(Vec<ChartPoint>, f64)> {
    let dt = 2.0 / (CURVE_SAMPLES - 1) as f64;
    let pts = (0..CURVE_SAMPLES).map(|i| curve(-1.0 + i as f64 * dt)).collect::<Result<Vec<_>>>()?;
    Ok((pts, dt))
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

/// Mixture line against the integrator, stopping at the boundary.
fn mixture_gap(pt: &mut Point, v: &DVector<f64>) -> Result<f64> {
    let path = match geodesic_integrate(pt.chart(), &pt.primal(), &pt.x, v, 1.0, &pt.cfg) {
        Ok(p) => p,
        Err(abort) => abort.partial,
    };
    Ok(max_of(path.times.iter().zip(&path.points).map(|(t, p)| (p.coords() - (pt.x.coords() + v * *t)).amax())))
}

fn geodesic(pt: &mut Point) -> Outcome {
    let (model, cfg) = (pt.model, pt.cfg);
    let chart = model.chart();
    let dual = move |p: &ChartPoint| weitzenbock_coefficients_of(chart, &|q| gradient_frame_at(chart, q), p, &cfg);
    let (closed, direction) = match model {
        Model::Simplex(chart) => {
            let p = chart.probabilities(&pt.x)?;
            let v: Vec<f64> = (0..p.len()).map(|_| pt.rng.random_range(-CURVE_SPEED..CURVE_SPEED)).collect();
            let (pts, dt) = sampled_curve(|t| exponential_geodesic(&p, &v, t).map(|q| q.to_chart()))?;
            let acc = max_of(covariant_acceleration(&pts, dt, &dual)?);
            let line = simplex::tangent_to_chart(&simplex::exponential_initial_velocity(&p, &v)?);
            (Some(acc), line)
        }
        Model::Quantum(chart) => {
            let rho = chart.state_at(&pt.x)?;
            let v = TangentMatrix::random(&mut pt.rng, chart.basis(), CURVE_SPEED);
            let kappa = match chart.monotone() {
                MonotoneFunction::Bkm { .. } => Some(None),
                MonotoneFunction::Deformed { kappa } => Some(Some(kappa * kappa)),
                MonotoneFunction::WignerYanase => Some(Some(0.25)),
                MonotoneFunction::Custom { .. } => None,
            };
            let acc = match kappa {
                Some(k) => {
                    let curve = |t: f64| -> Result<DensityState> {
                        match k {
                            None => bkm_geodesic(&rho, &v, t),
                            Some(k) => deformed_geodesic(&rho, &v, t, k),
                        }
                    };
                    let (pts, dt) = sampled_curve(|t| chart.coords_of(&curve(t)?))?;
                    Some(max_of(covariant_acceleration(&pts, dt, &dual)?))
                }
                None => None,
            };
            (acc, chart.tangent_coords(&v))
        }
    };
    let mixture = mixture_gap(pt, &direction)?;
    let mut details = vec![("mixture_line", mixture)];
    if let Some(a) = closed {
        details.push(("closed_form", a));
    }
    Ok((mixture.max(closed.unwrap_or(0.0)), details))
}

fn reduction(pt: &mut Point) -> Outcome {
    match pt.model {
        Model::Simplex(chart) => {
            let p = chart.probabilities(&pt.x)?;
            let n = p.len();
            let closed = chart.exponential_frame_at(&pt.x)?;
            let solved = gradient_frame_at(chart, &pt.x)?;
            let frame = scaled_residual((closed.matrix() - solved.matrix()).amax(), closed.matrix().amax());

            let mut draw = || -> Vec<f64> { (0..n).map(|_| pt.rng.random_range(0.2..5.0)).collect() };
            let (a, b) = (draw(), draw());
            let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
            let lhs = rplus_action(&a, &rplus_action(&b, &p)?)?;
            let rhs = rplus_action(&ab, &p)?;
            let group = max_of(lhs.as_slice().iter().zip(rhs.as_slice()).map(|(x, y)| (x - y).abs()));

            let v: Vec<f64> = (0..n).map(|_| pt.rng.random_range(-1.0..1.0)).collect();
            let t = 0.7;
            let q: Vec<f64> = v.iter().map(|x| (t * x).exp()).collect();
            let orbit = rplus_action(&q, &p)?;
            let geo = exponential_geodesic(&p, &v, t)?;
            let orbit_gap = max_of(geo.as_slice().iter().zip(orbit.as_slice()).map(|(x, y)| (x - y).abs()));
            Ok((frame.max(group).max(orbit_gap), vec![("gradient_frame", frame), ("group_law", group), ("orbit", orbit_gap)]))
        }
        Model::Quantum(chart) => {
            let rho = chart.state_at(&pt.x)?;
            let dim = rho.dim();
            let u = rho.eigenvectors().clone();
            let mut draw = || -> Vec<f64> {
                let mut v: Vec<f64> = (0..dim).map(|_| pt.rng.random_range(-1.0..1.0)).collect();
                let mean = v.iter().sum::<f64>() / dim as f64;
                v.iter_mut().for_each(|x| *x -= mean);
                v
            };
            let (a, b) = (draw(), draw());
            let lift = |d: &[f64]| {
                let m = CMatrix::from_diagonal(&DVector::from_iterator(dim, d.iter().map(|x| Complex::new(*x, 0.0))));
                TangentMatrix::new(&u * m * u.adjoint())
            };
            let q = quantum::metric_gf(&rho, chart.monotone(), &lift(&a)?, &lift(&b)?)?;
            let p = ProbabilityVector::new(rho.spectrum().iter().copied().collect())?;
            let c = fisher_rao_metric(&p, &SimplexTangent::new(a)?, &SimplexTangent::new(b)?)?;
            let r = scaled_residual(q - c, c.abs());
            Ok((r, vec![("fisher_rao_reduction", r)]))
        }
    }
}

fn matrix_gap(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn matrix_scale(a: &CMatrix) -> f64 {
    a.iter().fold(0.0, |m, z| m.max(z.norm()))
}

fn petz_identity(pt: &mut Point) -> Outcome {
    let Model::Quantum(chart) = pt.model else {
        return Err(GeometryError::Spec("petz-identity needs quantum states".into()));
    };
    let f = chart.monotone();
    let rho = chart.state_at(&pt.x)?;
    let dim = rho.dim();
    let sup = Superoperator::new(&rho, f)?;

    let k_identity = matrix_gap(&sup.apply_k(&CMatrix::identity(dim, dim))?, rho.matrix());

    let c = sup.multipliers();
    let symmetry = scaled_residual((c - c.transpose()).amax(), c.amax());

    let a = TangentMatrix::random(&mut pt.rng, chart.basis(), 1.0).into_matrix()
        + CMatrix::identity(dim, dim) * Complex::new(pt.rng.random_range(-1.0..1.0), 0.0);
    let back = sup.apply_tf(&sup.apply_k(&a)?)?;
    let round_trip = scaled_residual(matrix_gap(&back, &a), matrix_scale(&a));

    // G_f(L, Y_k) = Tr(L ω_k)
    let l = TangentMatrix::random(&mut pt.rng, chart.basis(), 1.0);
    let mut gradient: f64 = 0.0;
    for w in chart.omega() {
        let y = sup.gradient(w.matrix())?;
        let lhs = sup.metric(&l, &y)?;
        let rhs = teleparallel::quantum::spectral::trace_product(l.matrix(), w.matrix()).re;
        gradient = gradient.max(scaled_residual(lhs - rhs, lhs.abs() + rhs.abs()));
    }

    let spectrum = rho.spectrum();
    let mut duality: f64 = 0.0;
    for pj in spectrum.iter() {
        for pk in spectrum.iter() {
            let x = pj / pk;
            let (lhs, rhs) = (f.eval(x)?, x * f.eval(1.0 / x)?);
            duality = duality.max((lhs - rhs).abs() / lhs.max(1.0));
        }
    }

    let u = random_unitary(&mut pt.rng, dim);
    let v = TangentMatrix::random(&mut pt.rng, chart.basis(), 1.0);
    let w = TangentMatrix::random(&mut pt.rng, chart.basis(), 1.0);
    let conj = |t: &TangentMatrix| TangentMatrix::new(&u * t.matrix() * u.adjoint());
    let moved = unitary_action(&u, &rho)?;
    let before = sup.metric(&v, &w)?;
    let after = quantum::metric_gf(&moved, f, &conj(&v)?, &conj(&w)?)?;
    let invariance = scaled_residual(before - after, before.abs());

    let details = vec![
        ("k_identity", k_identity),
        ("multiplier_symmetry", symmetry),
        ("round_trip", round_trip),
        ("gradient_relation", gradient),
        ("self_duality", duality),
        ("unitary_invariance", invariance),
    ];
    Ok((max_of(details.iter().map(|d| d.1)), details))
}

fn evaluate(suite: Suite, pt: &mut Point) -> Outcome {
    match suite {
        Suite::Duality => duality(pt),
        Suite::Torsion => torsion(pt),
        Suite::Curvature => curvature(pt),
        Suite::AmariSymmetry => amari_symmetry(pt),
        Suite::Geodesic => geodesic(pt),
        Suite::Reduction => reduction(pt),
        Suite::PetzIdentity => petz_identity(pt),
    }
}

/// Stream `index` of the ChaCha generator seeded with `seed`: independent of the number of
/// worker threads and of evaluation order.
pub fn point_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn record(suite: Suite, point: usize, threshold: f64, outcome: Outcome) -> Record {
    match outcome {
        Ok((r, details)) if r.is_finite() => {
            Record { suite, point, residual: Some(r), threshold, pass: r < threshold, details, error: None }
        }
        Ok((r, details)) => Record {
            suite,
            point,
            residual: None,
            threshold,
            pass: false,
            details: details.into_iter().filter(|d| d.1.is_finite()).collect(),
            error: Some(format!("non-finite residual {r}")),
        },
        Err(e) => Record { suite, point, residual: None, threshold, pass: false, details: vec![], error: Some(e.to_string()) },
    }
}

/// Runs every requested suite at `cfg.samples` seeded points. Per-point failures become
/// records with no residual; they never abort the run.
pub fn run_suites(cfg: &ScenarioConfig) -> VerificationReport {
    let model = Model::new(cfg);
    let diff = cfg.diff_config();
    let indices: Vec<usize> = (0..cfg.samples).collect();
    let per_point: Vec<Vec<Record>> = map_points(&indices, |_, &i| {
        let model = match &model {
            Ok(m) => m,
            Err(e) => {
                return cfg.suites.iter().map(|s| record(*s, i, cfg.tolerance, Err(e.clone()))).collect();
            }
        };
        let mut rng = point_rng(cfg.seed, i);
        let x = model.chart().sample(&mut rng);
        cfg.suites
            .iter()
            .map(|&suite| {
                // each suite draws from its own stream so that adding suites never shifts others
                let mut pt = Point { model, x: x.clone(), cfg: diff, rng: point_rng(cfg.seed ^ ((suite as u64 + 1) << 56), i) };
                record(suite, i, cfg.tolerance, evaluate(suite, &mut pt))
            })
            .collect()
    });

    let mut records = Vec::with_capacity(cfg.samples * cfg.suites.len());
    let mut summary = Vec::with_capacity(cfg.suites.len());
    for (k, &suite) in cfg.suites.iter().enumerate() {
        let rows: Vec<Record> = per_point.iter().map(|p| p[k].clone()).collect();
        let max_residual = rows.iter().filter_map(|r| r.residual).reduce(f64::max);
        let passed = rows.iter().filter(|r| r.pass).count();
        summary.push(SuiteSummary {
            suite,
            max_residual,
            passed,
            failed: rows.len() - passed,
            errors: rows.iter().filter(|r| r.error.is_some()).count(),
        });
        records.extend(rows);
    }

    VerificationReport {
        scenario: cfg.label(),
        seed: cfg.seed,
        samples: cfg.samples,
        fd_step: cfg.fd_step,
        tolerance: cfg.tolerance,
        suites: cfg.suites.clone(),
        records,
        summary,
    }
}

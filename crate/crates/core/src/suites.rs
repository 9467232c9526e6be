//! Batched invariant suites behind the `verify` command. Each suite runs a
//! fixed number of randomized checks and reports pass/fail counts with a few
//! failure descriptions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::means::{variance_slack, support_proximity_slack, BarycenterSolve};
use crate::measures::FiniteMeasure;
use crate::mm::{
    obsdiam_witness_lower_bound, partial_diameter, separation_distance, PushforwardMeasure,
};
use crate::montecarlo::{
    check_sturm_inequality, estimate_crad_of_mean, estimate_mean_drift, lipschitz_ratio_test,
    ExperimentConfig,
};
use crate::random::{
    random_euclidean_measure, random_hyperboloid_measure, random_mm_space, random_tree,
    random_tree_measure,
};
use crate::spaces::{
    cat0_midpoint_slack, geodesic_convexity_slack, Euclidean, Hyperboloid, MetricTree,
    PointSampler, Space, TreePoint,
};

const SLACK_TOL: f64 = -1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: u64,
    pub failed: u64,
    /// Up to five descriptions of failing checks.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport {
            name: name.to_string(),
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(describe());
            }
        }
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

pub const SUITE_NAMES: [&str; 8] = [
    "cat0",
    "convexity",
    "lipschitz",
    "variance",
    "sturm",
    "invariants",
    "crad",
    "drift",
];

/// Runs one named suite, or every suite for `"all"`.
pub fn run(name: &str, seed: u64) -> Result<Vec<SuiteReport>> {
    match name {
        "cat0" => Ok(vec![cat0_suite(seed)]),
        "convexity" => Ok(vec![convexity_suite(seed)]),
        "lipschitz" => Ok(vec![lipschitz_suite(seed)]),
        "variance" => Ok(vec![variance_suite(seed)]),
        "sturm" => Ok(vec![sturm_suite(seed)]),
        "invariants" => Ok(vec![invariants_suite(seed)]),
        "crad" => Ok(vec![crad_suite(seed)]),
        "drift" => Ok(vec![drift_suite(seed)]),
        "all" => Ok(SUITE_NAMES
            .iter()
            .flat_map(|n| run(n, seed).expect("known suite name"))
            .collect()),
        other => Err(Error::Domain(format!(
            "unknown suite '{other}' (expected one of {} or all)",
            SUITE_NAMES.join(", ")
        ))),
    }
}

fn check_space_triples<S>(report: &mut SuiteReport, space: &S, rng: &mut ChaCha8Rng, rounds: u64)
where
    S: Space + PointSampler,
{
    for _ in 0..rounds {
        let x = space.sample_point(rng);
        let y = space.sample_point(rng);
        let z = space.sample_point(rng);
        let slack = cat0_midpoint_slack(space, &x, &y, &z);
        report.record(slack >= SLACK_TOL, || {
            format!("{}: midpoint slack {slack}", space.kind())
        });
    }
}

/// CAT(0) midpoint comparison on random triples in every space.
pub fn cat0_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("cat0");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rounds = 10_000;
    check_space_triples(&mut report, &MetricTree::tripod([1.0, 1.5, 0.75]), &mut rng, rounds / 2);
    let tree = random_tree(&mut rng, 9);
    check_space_triples(&mut report, &tree, &mut rng, rounds / 2);
    check_space_triples(&mut report, &Hyperboloid::new(2), &mut rng, rounds);
    check_space_triples(&mut report, &Euclidean::new(3), &mut rng, rounds);
    report
}

fn check_space_convexity<S>(report: &mut SuiteReport, space: &S, rng: &mut ChaCha8Rng, rounds: u64)
where
    S: Space + PointSampler,
{
    for _ in 0..rounds {
        let gamma = (space.sample_point(rng), space.sample_point(rng));
        let eta = (space.sample_point(rng), space.sample_point(rng));
        let t = rng.gen_range(0.0..=1.0);
        let slack = geodesic_convexity_slack(space, (&gamma.0, &gamma.1), (&eta.0, &eta.1), t);
        report.record(slack >= SLACK_TOL, || {
            format!("{}: convexity slack {slack} at t={t}", space.kind())
        });
    }
}

/// Convexity of the distance between geodesics on random pairs.
pub fn convexity_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("convexity");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let rounds = 10_000;
    check_space_convexity(&mut report, &MetricTree::tripod([1.0, 1.0, 2.0]), &mut rng, rounds / 2);
    let tree = random_tree(&mut rng, 9);
    check_space_convexity(&mut report, &tree, &mut rng, rounds / 2);
    check_space_convexity(&mut report, &Hyperboloid::new(2), &mut rng, rounds);
    check_space_convexity(&mut report, &Euclidean::new(3), &mut rng, rounds);
    report
}

/// The inductive-mean map is 1/n-Lipschitz for the l1 product distance.
pub fn lipschitz_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("lipschitz");
    let tree = MetricTree::tripod([1.0, 1.0, 1.0]);
    let h = Hyperboloid::new(2);
    let e = Euclidean::new(3);
    for n in 1..=16usize {
        let budget = 1.0 / n as f64 + 1e-9;
        let r_tree = lipschitz_ratio_test(&tree, n, 1000, seed.wrapping_add(n as u64));
        report.record(r_tree <= budget, || {
            format!("tree n={n}: max ratio {r_tree}")
        });
        let r_h = lipschitz_ratio_test(&h, n, 1000, seed.wrapping_add(100 + n as u64));
        report.record(r_h <= budget, || {
            format!("hyperboloid n={n}: max ratio {r_h}")
        });
        let r_e = lipschitz_ratio_test(&e, n, 1000, seed.wrapping_add(200 + n as u64));
        report.record(r_e <= budget, || {
            format!("euclidean n={n}: max ratio {r_e}")
        });
    }
    report
}

fn check_measure_slacks<S>(
    report: &mut SuiteReport,
    rng: &mut ChaCha8Rng,
    nu: &FiniteMeasure<S>,
) where
    S: BarycenterSolve + PointSampler,
{
    let z = nu.space().sample_point(rng);
    match variance_slack(nu, &z) {
        Ok(slack) => report.record(slack >= SLACK_TOL, || {
            format!("{}: variance slack {slack}", nu.space().kind())
        }),
        Err(e) => report.record(false, || format!("variance check failed: {e}")),
    }
    match support_proximity_slack(nu) {
        Ok(slack) => report.record(slack >= SLACK_TOL, || {
            format!("{}: proximity slack {slack}", nu.space().kind())
        }),
        Err(e) => report.record(false, || format!("proximity check failed: {e}")),
    }
}

/// Variance inequality and barycenter-near-support on random measures.
pub fn variance_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("variance");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(2));
    for _ in 0..1000 {
        let nu = random_tree_measure(&mut rng, 8, 6);
        check_measure_slacks(&mut report, &mut rng, &nu);
    }
    for _ in 0..1000 {
        let nu = random_euclidean_measure(&mut rng, 3, 6);
        check_measure_slacks(&mut report, &mut rng, &nu);
    }
    for _ in 0..1000 {
        let nu = random_hyperboloid_measure(&mut rng, 2, 6);
        check_measure_slacks(&mut report, &mut rng, &nu);
    }
    report
}

fn tripod_uniform() -> FiniteMeasure<MetricTree> {
    let t = MetricTree::tripod([1.0, 1.0, 1.0]);
    let atoms = (0..3)
        .map(|e| (TreePoint { edge: e, offset: 1.0 }, 1.0 / 3.0))
        .collect();
    FiniteMeasure::new(t, atoms).expect("uniform leaf measure")
}

fn h2_three_atoms() -> FiniteMeasure<Hyperboloid> {
    let h = Hyperboloid::new(2);
    let r = 0.4_f64;
    let atoms = (0..3)
        .map(|k| {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / 3.0;
            let p = h
                .lift(&[
                    r.sinh() * angle.cos(),
                    r.sinh() * angle.sin(),
                ])
                .expect("spatial lift");
            (p, 1.0 / 3.0)
        })
        .collect();
    FiniteMeasure::new(h, atoms).expect("three-atom measure")
}

/// The mean-deviation inequality `E d(s_n, b)^2 <= second_moment(b) / n`.
pub fn sturm_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("sturm");
    let trials = 10_000;
    // when every sample sits at the same distance from the barycenter the
    // interval collapses to a point and only roundoff separates the sides
    let dominated = |rhs: f64, ci_low: f64| rhs >= ci_low - 1e-12 * rhs.max(1.0);
    for n in [1usize, 2, 5, 10, 50] {
        let cfg = ExperimentConfig::new(tripod_uniform(), n, trials, vec![0.0], seed)
            .expect("valid config");
        match check_sturm_inequality(&cfg) {
            Ok(s) => report.record(dominated(s.rhs_exact, s.lhs_ci.low), || {
                format!("tripod n={n}: rhs {} < ci low {}", s.rhs_exact, s.lhs_ci.low)
            }),
            Err(e) => report.record(false, || format!("tripod n={n}: {e}")),
        }
        let cfg = ExperimentConfig::new(h2_three_atoms(), n, trials, vec![0.0], seed)
            .expect("valid config");
        match check_sturm_inequality(&cfg) {
            Ok(s) => report.record(dominated(s.rhs_exact, s.lhs_ci.low), || {
                format!("h2 n={n}: rhs {} < ci low {}", s.rhs_exact, s.lhs_ci.low)
            }),
            Err(e) => report.record(false, || format!("h2 n={n}: {e}")),
        }
        let coin = FiniteMeasure::new(
            Euclidean::new(1),
            vec![(vec![0.0], 0.5), (vec![1.0], 0.5)],
        )
        .expect("coin measure");
        let cfg = ExperimentConfig::new(coin, n, trials, vec![0.0], seed).expect("valid config");
        match check_sturm_inequality(&cfg) {
            Ok(s) => {
                let exact = 1.0 / (4.0 * n as f64);
                report.record(
                    s.lhs_ci.low <= exact && exact <= s.lhs_ci.high,
                    || format!("coin n={n}: CI [{}, {}] misses {exact}", s.lhs_ci.low, s.lhs_ci.high),
                )
            }
            Err(e) => report.record(false, || format!("coin n={n}: {e}")),
        }
    }
    report
}

/// Metric-measure lemmas on small random spaces, exactly.
pub fn invariants_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("invariants");
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(3));
    let kappas = [0.1, 0.2, 0.3, 0.4];
    for _ in 0..20 {
        let x = random_mm_space(&mut rng, 10);
        // separation scaling under an alpha-Lipschitz surjection
        for alpha in [0.5, 2.0] {
            let scaled = x.scaled(alpha);
            for &k in &[0.2, 0.4] {
                let a = separation_distance(&scaled, k, k).expect("small instance").value;
                let b = separation_distance(&x, k, k).expect("small instance").value;
                report.record((a - alpha * b) <= 1e-12, || {
                    format!("scaling alpha={alpha} kappa={k}: {a} > {alpha}*{b}")
                });
            }
        }
        // half-mass thresholds force zero separation
        for &(k1, k2) in &[(0.5, 0.51), (0.6, 0.75), (0.5, 0.9)] {
            let s = separation_distance(&x, k1, k2).expect("small instance");
            report.record(s.value == 0.0, || {
                format!("sep({k1}, {k2}) = {} != 0", s.value)
            });
        }
        // witness lower bound dominates the separation distance
        for &k in &kappas {
            let sep = separation_distance(&x, k, k).expect("small instance").value;
            let wb = obsdiam_witness_lower_bound(&x, k, k / 2.0).expect("small instance");
            report.record(wb.bound >= sep - 1e-12, || {
                format!("witness bound {} < sep {sep} at kappa {k}", wb.bound)
            });
            // every single-point witness obeys the diameter/radius relation
            for i in 0..x.len() {
                let f: Vec<f64> = (0..x.len()).map(|j| x.distance(i, j)).collect();
                let pf = PushforwardMeasure::from_function(&x, &f).expect("valid pushforward");
                let pd = pf.partial_diameter(1.0 - k).expect("small instance");
                let cr = pf.central_radius(k).expect("valid kappa");
                report.record(pd <= 2.0 * cr + 1e-12, || {
                    format!("partial diam {pd} > 2 * crad {cr} at kappa {k}")
                });
            }
        }
        // monotonicity in the mass parameters
        let masses = [0.2, 0.4, 0.6, 0.8, 1.0];
        let pds: Vec<f64> = masses
            .iter()
            .map(|&m| partial_diameter(&x, m).expect("small instance"))
            .collect();
        report.record(pds.windows(2).all(|w| w[0] <= w[1] + 1e-15), || {
            format!("partial diameter not monotone: {pds:?}")
        });
        let seps: Vec<f64> = kappas
            .iter()
            .map(|&k| separation_distance(&x, k, k).expect("small instance").value)
            .collect();
        report.record(seps.windows(2).all(|w| w[0] >= w[1] - 1e-15), || {
            format!("separation not monotone: {seps:?}")
        });
    }
    report
}

/// Central radius of the law of the inductive mean against its bound.
pub fn crad_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("crad");
    for n in [25usize, 100] {
        let cfg = ExperimentConfig::new(tripod_uniform(), n, 10_000, vec![0.0], seed)
            .expect("valid config");
        match estimate_crad_of_mean(&cfg, &[0.1, 0.25, 0.5]) {
            Ok(rows) => {
                for row in rows {
                    match row.empirical {
                        Some(emp) => report.record(emp <= row.bound + row.slack, || {
                            format!(
                                "n={n} kappa={}: empirical {emp} > bound {} + slack {}",
                                row.kappa, row.bound, row.slack
                            )
                        }),
                        None => report.record(false, || {
                            format!("n={n} kappa={}: undersampled", row.kappa)
                        }),
                    }
                }
            }
            Err(e) => report.record(false, || format!("n={n}: {e}")),
        }
    }
    report
}

/// Drift of the expected inductive mean against `2 D / sqrt(n)`.
pub fn drift_suite(seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("drift");
    for n in [25usize, 100] {
        let cfg = ExperimentConfig::new(tripod_uniform(), n, 10_000, vec![0.0], seed)
            .expect("valid config");
        match estimate_mean_drift(&cfg) {
            Ok(d) => report.record(d.estimate <= d.bound + d.slack, || {
                format!(
                    "n={n}: drift {} > bound {} + slack {}",
                    d.estimate, d.bound, d.slack
                )
            }),
            Err(e) => report.record(false, || format!("n={n}: {e}")),
        }
    }
    report
}

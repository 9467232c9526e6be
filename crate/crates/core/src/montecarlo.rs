//! Monte Carlo harness: simulate i.i.d. space-valued variables, form
//! inductive means, estimate tail probabilities with exact binomial
//! confidence intervals, and compare against the closed-form bounds.
//!
//! Trials are split into fixed-size chunks that are mapped in parallel and
//! folded in chunk order, and every draw is a pure function of
//! `(seed, trial * n + i)`, so a report is bit-identical for any worker
//! count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BoundQuery};
use crate::error::{Error, Result};
use crate::means::{barycenter, inductive_mean, BarycenterSolve};
use crate::measures::{uniform01, FiniteMeasure};
use crate::spaces::{Euclidean, Hyperboloid, L1Product, MetricTree, PointSampler, Space};
use crate::stats::{clopper_pearson, mean_interval, Interval};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Trials per parallel work unit. Fixed so that chunk boundaries, and hence
/// float accumulation order, do not depend on the worker count.
const TRIAL_CHUNK: u64 = 1024;

/// The tail bound matching a space: the R-tree bound on trees and the
/// Hadamard-manifold bound on the smooth spaces (flat space is the
/// zero-curvature Hadamard case).
pub trait TheoryTailBound: Space {
    fn tail_bound(&self, n: u64, r: f64, diameter: f64) -> f64;
}

impl TheoryTailBound for MetricTree {
    fn tail_bound(&self, n: u64, r: f64, diameter: f64) -> f64 {
        bounds::rtree_tail_bound(&BoundQuery { n, r, diameter, dim: 1 })
    }
}

impl TheoryTailBound for Hyperboloid {
    fn tail_bound(&self, n: u64, r: f64, diameter: f64) -> f64 {
        bounds::hadamard_tail_bound(&BoundQuery { n, r, diameter, dim: self.dim() }).value
    }
}

impl TheoryTailBound for Euclidean {
    fn tail_bound(&self, n: u64, r: f64, diameter: f64) -> f64 {
        bounds::hadamard_tail_bound(&BoundQuery { n, r, diameter, dim: self.dim() }).value
    }
}

/// Configuration of one experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig<S: Space> {
    pub measure: FiniteMeasure<S>,
    /// Samples averaged per trial.
    pub n: usize,
    pub trials: u64,
    /// Deviation radii, sorted ascending.
    pub r_grid: Vec<f64>,
    pub seed: u64,
    /// Two-sided confidence level of the reported intervals.
    pub confidence: f64,
}

impl<S: Space> ExperimentConfig<S> {
    pub fn new(
        measure: FiniteMeasure<S>,
        n: usize,
        trials: u64,
        r_grid: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("need at least one sample per trial".into()));
        }
        if trials == 0 {
            return Err(Error::Domain("need at least one trial".into()));
        }
        if r_grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain("r grid must be sorted ascending".into()));
        }
        if r_grid.iter().any(|r| !r.is_finite() || *r < 0.0) {
            return Err(Error::Domain("r grid must be nonnegative".into()));
        }
        Ok(ExperimentConfig {
            measure,
            n,
            trials,
            r_grid,
            seed,
            confidence: 0.99,
        })
    }

    pub fn with_confidence(mut self, confidence: f64) -> Result<Self> {
        if !(confidence > 0.0 && confidence < 1.0) {
            return Err(Error::Domain(format!(
                "confidence must be in (0, 1), got {confidence}"
            )));
        }
        self.confidence = confidence;
        Ok(self)
    }
}

/// One grid radius of a tail report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub r: f64,
    pub exceed_count: u64,
    pub empirical: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMeta {
    pub space: String,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub confidence: f64,
    pub diameter: f64,
    pub barycenter: serde_json::Value,
}

/// Estimated tail of `d(s_n, E Y)` with intervals and the matching bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReport {
    pub meta: ReportMeta,
    pub rows: Vec<TailRow>,
}

impl TailReport {
    /// Radii where the bound fails to dominate the lower confidence limit.
    /// The bound constrains the true probability and the interval brackets
    /// it, so the one-sided check is `bound >= ci_low`.
    pub fn domination_failures(&self) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|row| row.bound < row.ci_low)
            .map(|row| row.r)
            .collect()
    }

    /// CSV with one row per radius. Floats carry 17 significant digits so
    /// the text round-trips to the same bits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,exceed_count,empirical,ci_low,ci_high,bound\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                fmt_f64(row.r),
                row.exceed_count,
                fmt_f64(row.empirical),
                fmt_f64(row.ci_low),
                fmt_f64(row.ci_high),
                fmt_f64(row.bound),
            ));
        }
        out
    }
}

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

fn chunk_ranges(trials: u64) -> Vec<(u64, u64)> {
    (0..trials.div_ceil(TRIAL_CHUNK))
        .map(|c| (c * TRIAL_CHUNK, ((c + 1) * TRIAL_CHUNK).min(trials)))
        .collect()
}

/// Distance of each trial's inductive mean from `center`, reduced per chunk
/// by `fold`, then combined in chunk order.
fn map_trial_distances<S, T, F>(
    cfg: &ExperimentConfig<S>,
    center: &S::Point,
    fold: F,
) -> Vec<T>
where
    S: Space + Sync,
    S::Point: Sync,
    T: Send,
    F: Fn(&mut dyn Iterator<Item = f64>) -> T + Sync,
{
    let n = cfg.n as u64;
    chunk_ranges(cfg.trials)
        .into_par_iter()
        .map(|(lo, hi)| {
            let stream = cfg.measure.stream(cfg.seed);
            let space = cfg.measure.space();
            let mut iter = (lo..hi).map(|t| {
                let mean = inductive_mean(space, (0..n).map(|i| stream.draw(t * n + i)))
                    .expect("n >= 1 draws");
                space.distance(&mean, center)
            });
            fold(&mut iter)
        })
        .collect()
}

/// Runs the tail experiment: for each trial draws `n` samples, forms their
/// inductive mean, and measures its distance to the expectation of the
/// measure; exceedance counts per radius get exact binomial intervals and
/// the space's tail bound at the support diameter.
pub fn run_tail_experiment<S>(cfg: &ExperimentConfig<S>) -> Result<TailReport>
where
    S: BarycenterSolve + TheoryTailBound + Sync,
    S::Point: Send + Sync,
{
    if cfg.r_grid.is_empty() {
        return Err(Error::Domain("empty r grid".into()));
    }
    let center = barycenter(&cfg.measure)?;
    let diameter = cfg.measure.support_diameter();
    let grid = cfg.r_grid.clone();
    let partials = map_trial_distances(cfg, &center.point, |distances| {
        let mut counts = vec![0u64; grid.len()];
        for d in distances {
            for (slot, r) in counts.iter_mut().zip(&grid) {
                if d >= *r {
                    *slot += 1;
                }
            }
        }
        counts
    });
    let mut counts = vec![0u64; cfg.r_grid.len()];
    for partial in partials {
        for (total, c) in counts.iter_mut().zip(partial) {
            *total += c;
        }
    }
    let rows = cfg
        .r_grid
        .iter()
        .zip(&counts)
        .map(|(&r, &exceed_count)| {
            let ci = clopper_pearson(exceed_count, cfg.trials, cfg.confidence);
            TailRow {
                r,
                exceed_count,
                empirical: exceed_count as f64 / cfg.trials as f64,
                ci_low: ci.low,
                ci_high: ci.high,
                bound: cfg.measure.space().tail_bound(cfg.n as u64, r, diameter),
            }
        })
        .collect();
    Ok(TailReport {
        meta: ReportMeta {
            space: cfg.measure.space().kind().to_string(),
            n: cfg.n as u64,
            trials: cfg.trials,
            seed: cfg.seed,
            confidence: cfg.confidence,
            diameter,
            barycenter: cfg.measure.space().point_json(&center.point),
        },
        rows,
    })
}

/// Both sides of the mean-deviation inequality for inductive means:
/// the estimated `E d(s_n, b)^2` with a normal-approximation interval, and
/// the exact right-hand side `second_moment(b) / n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SturmCheck {
    pub lhs_estimate: f64,
    pub lhs_ci: Interval,
    pub rhs_exact: f64,
}

pub fn check_sturm_inequality<S>(cfg: &ExperimentConfig<S>) -> Result<SturmCheck>
where
    S: BarycenterSolve + Sync,
    S::Point: Send + Sync,
{
    let center = barycenter(&cfg.measure)?;
    let partials = map_trial_distances(cfg, &center.point, |distances| {
        let mut sum = Kahan::default();
        let mut sum_sq = Kahan::default();
        for d in distances {
            sum.add(d * d);
            sum_sq.add(d * d * d * d);
        }
        (sum.value(), sum_sq.value())
    });
    let mut sum = Kahan::default();
    let mut sum_sq = Kahan::default();
    for (s, s2) in partials {
        sum.add(s);
        sum_sq.add(s2);
    }
    let t = cfg.trials as f64;
    let mean = sum.value() / t;
    let variance = if cfg.trials > 1 {
        ((sum_sq.value() - t * mean * mean) / (t - 1.0)).max(0.0)
    } else {
        0.0
    };
    Ok(SturmCheck {
        lhs_estimate: mean,
        lhs_ci: mean_interval(mean, variance, cfg.trials, cfg.confidence),
        rhs_exact: center.objective / cfg.n as f64,
    })
}

/// Largest observed ratio `d(s_n(x), s_n(y)) / d_l1(x, y)` over random pairs
/// of tuples in the l1 product of `n` copies of the space; the
/// inductive-mean map is `1/n`-Lipschitz, so the ratio stays at or below
/// `1/n`. Coincident tuples are skipped, not divided.
pub fn lipschitz_ratio_test<S>(space: &S, n: usize, pairs: u64, seed: u64) -> f64
where
    S: Space + PointSampler + Clone + Sync,
    S::Point: Send + Sync,
{
    assert!(n >= 1, "need at least one coordinate");
    assert!(pairs >= 1, "need at least one pair");
    let product = L1Product::new(space.clone(), n);
    (0..pairs)
        .into_par_iter()
        .map(|j| {
            let mut rng = ChaCha8Rng::seed_from_u64(crate::measures::counter_rng(seed, j));
            let xs = product.sample_point(&mut rng);
            let ys = product.sample_point(&mut rng);
            let l1 = product.distance(&xs, &ys);
            if l1 == 0.0 {
                return 0.0;
            }
            let sx = inductive_mean(space, xs.iter()).expect("nonempty");
            let sy = inductive_mean(space, ys.iter()).expect("nonempty");
            space.distance(&sx, &sy) / l1
        })
        .reduce(|| 0.0, f64::max)
}

/// Simulated inductive means of every trial, in trial order.
fn simulate_mean_cloud<S>(cfg: &ExperimentConfig<S>) -> Vec<S::Point>
where
    S: Space + Sync,
    S::Point: Send + Sync,
{
    let n = cfg.n as u64;
    chunk_ranges(cfg.trials)
        .into_par_iter()
        .map(|(lo, hi)| {
            let stream = cfg.measure.stream(cfg.seed);
            let space = cfg.measure.space();
            (lo..hi)
                .map(|t| {
                    inductive_mean(space, (0..n).map(|i| stream.draw(t * n + i)))
                        .expect("n >= 1 draws")
                })
                .collect::<Vec<_>>()
        })
        .flatten()
        .collect()
}

/// Empirical central radius of the law of the inductive mean at one
/// threshold, against the closed-form bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CradEstimate {
    pub kappa: f64,
    /// `(1-kappa)`-quantile of distance to the cloud barycenter, or `None`
    /// when `kappa * trials` is too small to estimate.
    pub empirical: Option<f64>,
    /// Width between the quantile and its upper confidence level; the
    /// sampling slack of the estimate.
    pub slack: f64,
    pub bound: f64,
}

/// Minimum tail samples required per threshold before a quantile is reported.
const CRAD_MIN_TAIL: f64 = 50.0;

pub fn estimate_crad_of_mean<S>(
    cfg: &ExperimentConfig<S>,
    kappa_grid: &[f64],
) -> Result<Vec<CradEstimate>>
where
    S: BarycenterSolve + Clone + Sync,
    S::Point: Send + Sync,
{
    let diameter = cfg.measure.support_diameter();
    let cloud_points = simulate_mean_cloud(cfg);
    let cloud = FiniteMeasure::empirical(cfg.measure.space().clone(), cloud_points)?;
    let center = barycenter(&cloud)?;
    let mut distances: Vec<f64> = cloud
        .atoms()
        .iter()
        .map(|(p, _)| cloud.space().distance(p, &center.point))
        .collect();
    distances.sort_by(f64::total_cmp);
    let t = cfg.trials as f64;
    kappa_grid
        .iter()
        .map(|&kappa| {
            let bound = bounds::crad_bound(cfg.n as u64, kappa, diameter)?;
            if kappa * t < CRAD_MIN_TAIL {
                return Ok(CradEstimate {
                    kappa,
                    empirical: None,
                    slack: 0.0,
                    bound,
                });
            }
            let q = quantile(&distances, 1.0 - kappa);
            let delta = 3.0 * (kappa * (1.0 - kappa) / t).sqrt();
            let upper = quantile(&distances, (1.0 - kappa + delta).min(1.0));
            Ok(CradEstimate {
                kappa,
                empirical: Some(q),
                slack: upper - q,
                bound,
            })
        })
        .collect()
}

/// Smallest sorted value with at least `level` of the mass at or below it.
fn quantile(sorted: &[f64], level: f64) -> f64 {
    if level <= 0.0 {
        return 0.0;
    }
    let t = sorted.len() as f64;
    let k = ((level * t - 1e-9).ceil() as usize).clamp(1, sorted.len());
    sorted[k - 1]
}

/// Estimated drift of the expected inductive mean from the barycenter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftEstimate {
    /// Distance from the cloud barycenter (standing in for `E(s_n)`) to the
    /// barycenter of the sampled measure.
    pub estimate: f64,
    /// `2 D / sqrt(n)`.
    pub bound: f64,
    /// Sampling slack of the cloud barycenter.
    pub slack: f64,
}

pub fn estimate_mean_drift<S>(cfg: &ExperimentConfig<S>) -> Result<DriftEstimate>
where
    S: BarycenterSolve + Clone + Sync,
    S::Point: Send + Sync,
{
    if cfg.trials < 1000 {
        return Err(Error::Domain(format!(
            "drift estimation needs at least 1000 trials, got {}",
            cfg.trials
        )));
    }
    let center = barycenter(&cfg.measure)?;
    let cloud_points = simulate_mean_cloud(cfg);
    let cloud = FiniteMeasure::empirical(cfg.measure.space().clone(), cloud_points)?;
    let cloud_center = barycenter(&cloud)?;
    let estimate = cloud.space().distance(&cloud_center.point, &center.point);
    // the cloud barycenter deviates from E(s_n) by about the cloud's own
    // mean-deviation inequality scale
    let slack = 3.0 * (cloud_center.objective / cfg.trials as f64).sqrt();
    Ok(DriftEstimate {
        estimate,
        bound: bounds::mean_drift_bound(cfg.n as u64, cfg.measure.support_diameter()),
        slack,
    })
}

/// Tail report for the coordinate-sum observable on a product of two-point
/// spaces `{0, D_i}` with fair factors, checked against the product-space
/// deviation bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductConcentrationReport {
    pub diameters: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub confidence: f64,
    pub rows: Vec<TailRow>,
}

impl ProductConcentrationReport {
    pub fn domination_failures(&self) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|row| row.bound < row.ci_low)
            .map(|row| row.r)
            .collect()
    }
}

/// Simulates `|f - E f|` for the 1-Lipschitz coordinate sum
/// `f(x) = sum_i x_i` on the fair product of two-point spaces.
pub fn check_product_concentration(
    diameters: &[f64],
    trials: u64,
    r_grid: &[f64],
    seed: u64,
    confidence: f64,
) -> Result<ProductConcentrationReport> {
    if diameters.is_empty() || diameters.iter().any(|d| !d.is_finite() || *d <= 0.0) {
        return Err(Error::Domain(
            "factor diameters must be positive and nonempty".into(),
        ));
    }
    if r_grid.is_empty() {
        return Err(Error::Domain("empty r grid".into()));
    }
    let n = diameters.len() as u64;
    let mean: f64 = diameters.iter().sum::<f64>() / 2.0;
    let partials: Vec<Vec<u64>> = chunk_ranges(trials)
        .into_par_iter()
        .map(|(lo, hi)| {
            let mut counts = vec![0u64; r_grid.len()];
            for t in lo..hi {
                let mut f = 0.0;
                for (i, d) in diameters.iter().enumerate() {
                    if uniform01(seed, t * n + i as u64) < 0.5 {
                        f += d;
                    }
                }
                let dev = (f - mean).abs();
                for (slot, r) in counts.iter_mut().zip(r_grid) {
                    if dev >= *r {
                        *slot += 1;
                    }
                }
            }
            counts
        })
        .collect();
    let mut counts = vec![0u64; r_grid.len()];
    for partial in partials {
        for (total, c) in counts.iter_mut().zip(partial) {
            *total += c;
        }
    }
    let rows = r_grid
        .iter()
        .zip(&counts)
        .map(|(&r, &exceed_count)| {
            let ci = clopper_pearson(exceed_count, trials, confidence);
            TailRow {
                r,
                exceed_count,
                empirical: exceed_count as f64 / trials as f64,
                ci_low: ci.low,
                ci_high: ci.high,
                bound: bounds::ledoux_deviation_bound(r, diameters),
            }
        })
        .collect();
    Ok(ProductConcentrationReport {
        diameters: diameters.to_vec(),
        trials,
        seed,
        confidence,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::TreePoint;

    fn tripod_uniform() -> FiniteMeasure<MetricTree> {
        let t = MetricTree::tripod([1.0, 1.0, 1.0]);
        let atoms = (0..3)
            .map(|e| (TreePoint { edge: e, offset: 1.0 }, 1.0 / 3.0))
            .collect();
        FiniteMeasure::new(t, atoms).unwrap()
    }

    #[test]
    fn point_mass_tail_is_zero() {
        let e = Euclidean::new(1);
        let m = FiniteMeasure::point_mass(e, vec![3.0]).unwrap();
        let cfg = ExperimentConfig::new(m, 5, 500, vec![0.0, 0.5, 1.0], 1).unwrap();
        let rep = run_tail_experiment(&cfg).unwrap();
        assert_eq!(rep.rows[0].exceed_count, 500); // d >= 0 always
        assert_eq!(rep.rows[1].exceed_count, 0);
        assert_eq!(rep.rows[2].exceed_count, 0);
        assert!(rep.rows.iter().all(|row| row.bound >= 0.0));
        assert!(rep.domination_failures().is_empty());
    }

    #[test]
    fn r_zero_has_full_tail_and_constant_bound() {
        let cfg = ExperimentConfig::new(tripod_uniform(), 4, 300, vec![0.0], 7).unwrap();
        let rep = run_tail_experiment(&cfg).unwrap();
        assert_eq!(rep.rows[0].empirical, 1.0);
        assert!((rep.rows[0].bound - 4.219_124_721_014_652).abs() < 1e-12);
    }

    #[test]
    fn empty_grid_is_a_domain_error() {
        let cfg = ExperimentConfig::new(tripod_uniform(), 4, 10, vec![], 7).unwrap();
        assert!(matches!(run_tail_experiment(&cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn counts_are_monotone_along_the_grid() {
        let grid = vec![0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
        let cfg = ExperimentConfig::new(tripod_uniform(), 6, 2000, grid, 11).unwrap();
        let rep = run_tail_experiment(&cfg).unwrap();
        for w in rep.rows.windows(2) {
            assert!(w[0].exceed_count >= w[1].exceed_count);
        }
    }

    #[test]
    fn report_is_reproducible_across_worker_counts() {
        let cfg =
            ExperimentConfig::new(tripod_uniform(), 8, 3000, vec![0.1, 0.3, 0.5], 42).unwrap();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_tail_experiment(&cfg).unwrap());
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| run_tail_experiment(&cfg).unwrap());
        assert_eq!(one, four);
        let again = run_tail_experiment(&cfg).unwrap();
        assert_eq!(one, again);
        let sturm_one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| check_sturm_inequality(&cfg).unwrap());
        let sturm_four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| check_sturm_inequality(&cfg).unwrap());
        assert_eq!(sturm_one, sturm_four);
    }

    #[test]
    fn sturm_point_mass_is_degenerate() {
        let e = Euclidean::new(1);
        let m = FiniteMeasure::point_mass(e, vec![2.0]).unwrap();
        let cfg = ExperimentConfig::new(m, 3, 100, vec![0.0], 5).unwrap();
        let s = check_sturm_inequality(&cfg).unwrap();
        assert_eq!(s.lhs_estimate, 0.0);
        assert_eq!(s.lhs_ci, Interval { low: 0.0, high: 0.0 });
        assert_eq!(s.rhs_exact, 0.0);
    }

    #[test]
    fn sturm_euclidean_coin_has_equality() {
        // fair coin on {0, 1}: E d(s_n, 1/2)^2 = 1/(4n) exactly
        let e = Euclidean::new(1);
        let m = FiniteMeasure::new(e, vec![(vec![0.0], 0.5), (vec![1.0], 0.5)]).unwrap();
        for n in [1usize, 4, 16] {
            let cfg = ExperimentConfig::new(m.clone(), n, 40_000, vec![0.0], 3).unwrap();
            let s = check_sturm_inequality(&cfg).unwrap();
            let exact = 1.0 / (4.0 * n as f64);
            assert!((s.rhs_exact - exact).abs() < 1e-15);
            assert!(
                s.lhs_ci.low <= exact && exact <= s.lhs_ci.high,
                "n={n}: CI [{}, {}] misses {exact}",
                s.lhs_ci.low,
                s.lhs_ci.high
            );
        }
    }

    #[test]
    fn lipschitz_ratio_identity_case() {
        let e = Euclidean::new(2);
        let max = lipschitz_ratio_test(&e, 1, 200, 9);
        // s_1 is the identity, so the ratio is exactly 1 whenever tuples differ
        assert!((max - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lipschitz_ratio_tripod_quarter() {
        let t = MetricTree::tripod([1.0, 1.0, 1.0]);
        let max = lipschitz_ratio_test(&t, 4, 1000, 17);
        assert!(max <= 0.25 + 1e-9, "ratio {max}");
        assert!(max > 0.0);
    }

    #[test]
    fn crad_point_mass_is_zero() {
        let e = Euclidean::new(1);
        let m = FiniteMeasure::point_mass(e, vec![1.0]).unwrap();
        let cfg = ExperimentConfig::new(m, 5, 2000, vec![0.0], 2).unwrap();
        let est = estimate_crad_of_mean(&cfg, &[0.1, 0.5, 0.9]).unwrap();
        for row in est {
            assert_eq!(row.empirical, Some(0.0));
        }
    }

    #[test]
    fn crad_flags_undersampled_and_shrinks_toward_one() {
        let cfg = ExperimentConfig::new(tripod_uniform(), 5, 2000, vec![0.0], 2).unwrap();
        let est = estimate_crad_of_mean(&cfg, &[0.01, 0.5, 0.9999]).unwrap();
        assert!(est[0].empirical.is_none()); // 0.01 * 2000 = 20 < 50
        // tiny mass requirement: the radius shrinks toward the closest sample
        let mid = est[1].empirical.unwrap();
        let near_one = est[2].empirical.unwrap();
        assert!(near_one <= mid, "CRad not monotone in kappa: {near_one} > {mid}");
    }

    #[test]
    fn drift_of_point_mass_is_exactly_zero() {
        let e = Euclidean::new(1);
        let m = FiniteMeasure::point_mass(e, vec![3.0]).unwrap();
        let cfg = ExperimentConfig::new(m, 4, 1000, vec![0.0], 19).unwrap();
        let d = estimate_mean_drift(&cfg).unwrap();
        assert!(d.estimate <= 1e-12, "estimate {}", d.estimate);
        assert_eq!(d.bound, 0.0); // 2 D / sqrt(n) with D = 0
    }

    #[test]
    fn drift_of_euclidean_mean_vanishes() {
        let e = Euclidean::new(1);
        let m = FiniteMeasure::new(e, vec![(vec![0.0], 0.5), (vec![1.0], 0.5)]).unwrap();
        let cfg = ExperimentConfig::new(m, 10, 20_000, vec![0.0], 23).unwrap();
        let d = estimate_mean_drift(&cfg).unwrap();
        assert!(d.estimate <= d.slack, "estimate {} slack {}", d.estimate, d.slack);
        assert!(d.estimate <= d.bound);
        let short = ExperimentConfig::new(cfg.measure.clone(), 10, 10, vec![0.0], 23).unwrap();
        assert!(matches!(estimate_mean_drift(&short), Err(Error::Domain(_))));
    }

    #[test]
    fn product_single_factor_never_deviates_far() {
        let rep = check_product_concentration(&[1.0], 5000, &[0.0, 1.0], 3, 0.99).unwrap();
        // |x1 - 1/2| is always exactly 1/2
        assert_eq!(rep.rows[0].empirical, 1.0);
        assert_eq!(rep.rows[1].exceed_count, 0);
        assert!(rep.rows[1].bound > 1.0); // 2 e^{-1/2}
        assert!(rep.domination_failures().is_empty());
    }

    #[test]
    fn product_hundred_factors_binomial_tail() {
        let diameters = vec![1.0; 100];
        let rep =
            check_product_concentration(&diameters, 100_000, &[10.0], 31, 0.99).unwrap();
        // |sum - 50| >= 10 has binomial probability about 0.057
        let emp = rep.rows[0].empirical;
        assert!(emp > 0.03 && emp < 0.09, "empirical {emp}");
        assert!(rep.rows[0].bound > emp);
    }

    #[test]
    fn csv_round_trips_to_bits() {
        let cfg = ExperimentConfig::new(tripod_uniform(), 4, 200, vec![0.1, 0.7], 5).unwrap();
        let rep = run_tail_experiment(&cfg).unwrap();
        let csv = rep.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "r,exceed_count,empirical,ci_low,ci_high,bound");
        for (line, row) in lines.zip(&rep.rows) {
            let fields: Vec<&str> = line.split(',').collect();
            assert_eq!(fields[0].parse::<f64>().unwrap(), row.r);
            assert_eq!(fields[1].parse::<u64>().unwrap(), row.exceed_count);
            assert_eq!(fields[3].parse::<f64>().unwrap(), row.ci_low);
            assert_eq!(fields[5].parse::<f64>().unwrap(), row.bound);
        }
    }

    #[test]
    fn json_report_round_trips() {
        let cfg = ExperimentConfig::new(tripod_uniform(), 3, 100, vec![0.2], 8).unwrap();
        let rep = run_tail_experiment(&cfg).unwrap();
        let text = serde_json::to_string(&rep).unwrap();
        let back: TailReport = serde_json::from_str(&text).unwrap();
        assert_eq!(rep, back);
    }
}

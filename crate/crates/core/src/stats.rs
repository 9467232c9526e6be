//! Confidence intervals for the Monte Carlo harness: exact binomial
//! (Clopper-Pearson) intervals for tail frequencies, and normal-approximation
//! intervals for moment estimates.

use statrs::distribution::{Beta, ContinuousCDF, Normal};

/// Quantile of a Beta distribution by bisection on its (accurate) cdf.
///
/// The generic `inverse_cdf` of the distribution crate stops near 1e-5;
/// interval endpoints should be exact to roundoff, so invert the cdf
/// directly. The cdf is monotone and cheap, and the interval halves to
/// machine width in at most 120 steps.
fn beta_inverse_cdf(shape_a: f64, shape_b: f64, p: f64) -> f64 {
    let beta = Beta::new(shape_a, shape_b).expect("valid Beta parameters");
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta.cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided interval.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

/// Exact binomial (Clopper-Pearson) interval for `successes` out of
/// `trials` at the given two-sided confidence level. The endpoints are the
/// usual Beta quantiles, with the conventional closed forms at 0 and n.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> Interval {
    assert!(trials >= 1, "need at least one trial");
    assert!(successes <= trials, "more successes than trials");
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must be in (0, 1)"
    );
    let alpha = 1.0 - confidence;
    let k = successes as f64;
    let n = trials as f64;
    let low = if successes == 0 {
        0.0
    } else {
        beta_inverse_cdf(k, n - k + 1.0, alpha / 2.0)
    };
    let high = if successes == trials {
        1.0
    } else {
        beta_inverse_cdf(k + 1.0, n - k, 1.0 - alpha / 2.0)
    };
    Interval { low, high }
}

/// Standard normal quantile for a two-sided interval at `confidence`.
pub fn normal_two_sided_z(confidence: f64) -> f64 {
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence must be in (0, 1)"
    );
    Normal::new(0.0, 1.0)
        .expect("unit normal")
        .inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Normal-approximation interval `mean ± z * sd / sqrt(n)` for a sample
/// mean, clamped below at zero for nonnegative quantities.
pub fn mean_interval(mean: f64, sample_variance: f64, n: u64, confidence: f64) -> Interval {
    let z = normal_two_sided_z(confidence);
    let half = z * (sample_variance.max(0.0) / n as f64).sqrt();
    Interval {
        low: (mean - half).max(0.0),
        high: mean + half,
    }
}

//! Closed-form evaluators for the Gaussian tail bounds and the constants
//! they carry. All functions are pure; values above 1 are returned as-is,
//! since clamping a probability bound is a display concern.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Query for the tail bounds: `n` samples, deviation radius `r`, support
/// diameter `diameter`, and (for the Hadamard bound) manifold dimension
/// `dim`. The tree bound ignores `dim`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub n: u64,
    pub r: f64,
    pub diameter: f64,
    pub dim: usize,
}

/// `exp(-n r^2 / (coeff * D^2))`, with the degenerate point-mass case
/// `D = 0` resolved by its limit: 1 at `r = 0`, 0 otherwise.
fn gaussian_factor(n: u64, r: f64, diameter: f64, coeff: f64) -> f64 {
    if diameter == 0.0 {
        return if r == 0.0 { 1.0 } else { 0.0 };
    }
    (-(n as f64) * r * r / (coeff * diameter * diameter)).exp()
}

/// Tail bound for inductive means of i.i.d. samples in an R-tree:
/// `4 e^{4/75} e^{-n r^2 / (150 D^2)}`.
pub fn rtree_tail_bound(q: &BoundQuery) -> f64 {
    4.0 * (4.0 / 75.0_f64).exp() * gaussian_factor(q.n, q.r, q.diameter, 150.0)
}

/// Intermediate tail bound about the expectation of the inductive mean:
/// `4 e^{-n r^2 / (75 D^2)}`.
pub fn claim_tail_bound(q: &BoundQuery) -> f64 {
    4.0 * gaussian_factor(q.n, q.r, q.diameter, 75.0)
}

/// The dimension-dependent constants of the Hadamard tail bound:
///
/// `A_m  = e^{1/(2m)} (1 + sqrt(pi) e^{(m+1)/(4m-2)} e^{pi^2} / 2)`
/// `Ã_m  = e^{1/(4m)} (1 + sqrt(pi) e^{(m+1)/(4m-2)})`
///
/// Both decrease in `m` toward finite limits, so they are bounded above by
/// their `m = 1` values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HadamardConstants {
    pub a: f64,
    pub a_tilde: f64,
}

pub fn hadamard_constants(m: usize) -> HadamardConstants {
    assert!(m >= 1, "dimension must be at least 1");
    let mf = m as f64;
    let shared = (std::f64::consts::PI.sqrt()) * ((mf + 1.0) / (4.0 * mf - 2.0)).exp();
    let pi_sq = std::f64::consts::PI * std::f64::consts::PI;
    HadamardConstants {
        a: (1.0 / (2.0 * mf)).exp() * (1.0 + shared * pi_sq.exp() / 2.0),
        a_tilde: (1.0 / (4.0 * mf)).exp() * (1.0 + shared),
    }
}

/// Which branch of a two-branch minimum produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundBranch {
    /// Larger constant, faster decay (`A`-branch).
    FastDecay,
    /// Smaller constant, slower decay (`Ã`-branch).
    SlowDecay,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchedBound {
    pub value: f64,
    pub branch: BoundBranch,
}

/// Tail bound for inductive means in an `m`-dimensional Hadamard manifold:
/// `min { A_m e^{-n r^2/(16 D^2 m)}, Ã_m e^{-n r^2/(32 D^2 m)} }`.
pub fn hadamard_tail_bound(q: &BoundQuery) -> BranchedBound {
    let c = hadamard_constants(q.dim);
    let m = q.dim as f64;
    let fast = c.a * gaussian_factor(q.n, q.r, q.diameter, 16.0 * m);
    let slow = c.a_tilde * gaussian_factor(q.n, q.r, q.diameter, 32.0 * m);
    if fast < slow {
        BranchedBound {
            value: fast,
            branch: BoundBranch::FastDecay,
        }
    } else {
        BranchedBound {
            value: slow,
            branch: BoundBranch::SlowDecay,
        }
    }
}

/// Deviation bound for a 1-Lipschitz function on an l1 product of spaces
/// with factor diameters `D_i`: `2 e^{-r^2 / (2 D^2)}`, `D^2 = sum D_i^2`.
pub fn ledoux_deviation_bound(r: f64, diameters: &[f64]) -> f64 {
    let d_sq: f64 = diameters.iter().map(|d| d * d).sum();
    2.0 * (-r * r / (2.0 * d_sq)).exp()
}

/// Concentration-function bound on the same product: `e^{-r^2 / (8 D^2)}`.
pub fn ledoux_concentration_bound(r: f64, diameters: &[f64]) -> f64 {
    let d_sq: f64 = diameters.iter().map(|d| d * d).sum();
    (-r * r / (8.0 * d_sq)).exp()
}

/// Bound on the central radius of the law of the inductive mean:
/// `5 D sqrt((2/n) log(4/kappa))` for `kappa < 1/2` and
/// `5 D sqrt((3/n) log(4/kappa))` for all `kappa`; the tighter valid branch
/// is returned.
pub fn crad_bound(n: u64, kappa: f64, diameter: f64) -> Result<f64> {
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::Domain(format!(
            "central-radius bound needs kappa in (0, 1), got {kappa}"
        )));
    }
    let coeff = if kappa < 0.5 { 2.0 } else { 3.0 };
    Ok(5.0 * diameter * (coeff / n as f64 * (4.0 / kappa).ln()).sqrt())
}

/// Bound on the drift `d(E(s_n), b(nu))` of the expected inductive mean:
/// `2 D / sqrt(n)` (the square root of the `4 D^2 / n` second-moment bound).
pub fn mean_drift_bound(n: u64, diameter: f64) -> f64 {
    2.0 * diameter / (n as f64).sqrt()
}

/// Gaussian concentration profile `alpha_X(r) <= scale * e^{-rate * r^2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationProfile {
    pub scale: f64,
    pub rate: f64,
}

/// Deviation bound for a 1-Lipschitz map from a space with the given
/// concentration profile into an `m`-dimensional Hadamard manifold:
///
/// `min { A_{m,X} e^{-(c/(8m)) r^2}, Ã_{m,X} e^{-(c/(16m)) r^2} }` with
/// `A_{m,X} = 1 + (sqrt(pi) e^{(m+1)/(4m-2)}/2) max{e^{(pi C)^2/2}, 2C e^{(pi C)^2}}`
/// and `Ã_{m,X} = 1 + sqrt(pi) C e^{(m+1)/(4m-2)}`.
pub fn general_hadamard_bound(
    r: f64,
    profile: &ConcentrationProfile,
    m: usize,
) -> BranchedBound {
    assert!(m >= 1, "dimension must be at least 1");
    assert!(
        profile.scale > 0.0 && profile.rate > 0.0,
        "concentration profile must have positive constants"
    );
    let mf = m as f64;
    let dim_factor = ((mf + 1.0) / (4.0 * mf - 2.0)).exp();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let pi_c = std::f64::consts::PI * profile.scale;
    let a = 1.0
        + sqrt_pi * dim_factor / 2.0
            * (pi_c * pi_c / 2.0)
                .exp()
                .max(2.0 * profile.scale * (pi_c * pi_c).exp());
    let a_tilde = 1.0 + sqrt_pi * profile.scale * dim_factor;
    let fast = a * (-(profile.rate / (8.0 * mf)) * r * r).exp();
    let slow = a_tilde * (-(profile.rate / (16.0 * mf)) * r * r).exp();
    if fast < slow {
        BranchedBound {
            value: fast,
            branch: BoundBranch::FastDecay,
        }
    } else {
        BranchedBound {
            value: slow,
            branch: BoundBranch::SlowDecay,
        }
    }
}

//! Metric-measure invariants on small finite spaces, computed exactly by
//! subset enumeration: partial diameter, separation distance, central
//! radius, concentration function, and witness-based lower bounds for the
//! observable diameter.
//!
//! Exactness is the point, so instance sizes are capped (15 points for
//! subset enumeration, 20 for real-line pushforwards) and anything larger is
//! a size error. The observable diameter itself — a supremum over all
//! 1-Lipschitz maps — is not computed; only lower bounds from explicit
//! witness functions are.

use crate::error::{Error, Result};
use crate::means::{barycenter, BarycenterSolve};
use crate::measures::FiniteMeasure;

/// Cap for subset enumeration over a general finite space.
pub const ENUM_CAP: usize = 15;
/// Cap for sorted-window search over a real-line pushforward.
pub const PUSHFORWARD_CAP: usize = 20;

const MASS_TOL: f64 = 1e-12;

/// A finite metric-measure space: a symmetric distance matrix with zero
/// diagonal satisfying the triangle inequality, plus probability weights.
#[derive(Debug, Clone)]
pub struct FiniteMMSpace {
    n: usize,
    dist: Vec<f64>,
    weights: Vec<f64>,
}

impl FiniteMMSpace {
    pub fn new(dist: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        if n == 0 {
            return Err(Error::InvalidMeasure("empty mm-space".into()));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidMeasure(format!(
                "distance matrix is not {n} x {n}"
            )));
        }
        let mut flat = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let d = dist[i][j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidMeasure(format!("bad distance d({i},{j}) = {d}")));
                }
                if (d - dist[j][i]).abs() > MASS_TOL {
                    return Err(Error::InvalidMeasure(format!(
                        "asymmetric distances at ({i},{j})"
                    )));
                }
                flat[i * n + j] = d;
            }
            if dist[i][i] != 0.0 {
                return Err(Error::InvalidMeasure(format!("nonzero diagonal at {i}")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if flat[i * n + j] > flat[i * n + k] + flat[k * n + j] + MASS_TOL {
                        return Err(Error::InvalidMeasure(format!(
                            "triangle inequality fails at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        let sum: f64 = weights.iter().sum();
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMeasure("negative weight".into()));
        }
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {sum}, expected 1 within {MASS_TOL}"
            )));
        }
        Ok(FiniteMMSpace {
            n,
            dist: flat,
            weights,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.weights[i]
    }

    pub fn diameter(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .map(|(i, j)| self.distance(i, j))
            .fold(0.0, f64::max)
    }

    /// A copy with every distance multiplied by `alpha` (the image of the
    /// identity map, which is `alpha`-Lipschitz in both directions).
    pub fn scaled(&self, alpha: f64) -> Self {
        assert!(alpha > 0.0, "scale must be positive");
        FiniteMMSpace {
            n: self.n,
            dist: self.dist.iter().map(|d| alpha * d).collect(),
            weights: self.weights.clone(),
        }
    }

    fn subset_weight(&self, mask: u32) -> f64 {
        let mut w = 0.0;
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            w += self.weights[i];
            m &= m - 1;
        }
        w
    }

    fn subset_diameter(&self, mask: u32) -> f64 {
        let mut best: f64 = 0.0;
        let mut mi = mask;
        while mi != 0 {
            let i = mi.trailing_zeros() as usize;
            mi &= mi - 1;
            let mut mj = mi;
            while mj != 0 {
                let j = mj.trailing_zeros() as usize;
                mj &= mj - 1;
                best = best.max(self.distance(i, j));
            }
        }
        best
    }

    fn check_cap(&self) -> Result<()> {
        if self.n > ENUM_CAP {
            return Err(Error::TooLarge {
                size: self.n,
                max: ENUM_CAP,
            });
        }
        Ok(())
    }
}

/// Smallest diameter of a subset carrying at least `mass`: the partial
/// diameter `diam(mu, mass)`. Zero when `mass <= 0` (the empty set
/// qualifies); exact by enumeration, so the space is capped at
/// [`ENUM_CAP`] points.
pub fn partial_diameter(x: &FiniteMMSpace, mass: f64) -> Result<f64> {
    x.check_cap()?;
    if mass <= 0.0 {
        return Ok(0.0);
    }
    if mass > 1.0 + MASS_TOL {
        return Err(Error::Domain(format!(
            "required mass {mass} exceeds the total mass 1"
        )));
    }
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << x.n) {
        if x.subset_weight(mask) >= mass - MASS_TOL {
            best = best.min(x.subset_diameter(mask));
        }
    }
    Ok(best)
}

/// Result of a separation-distance query.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    /// The supremum, or 0 when no admissible pair exists.
    pub value: f64,
    /// False iff some mass threshold exceeded every achievable mass, so the
    /// supremum ranged over an empty family.
    pub attained: bool,
    /// A first set attaining the value (point indices), empty if none.
    pub witness: Vec<usize>,
}

/// Largest distance `d(A_1, A_2)` over subsets with `mu(A_i) >= kappa_i`.
///
/// The sets are not required to be disjoint; overlapping sets have distance
/// zero, so they never carry the supremum when it is positive. For a fixed
/// `A_1` the best `A_2` greedily collects points farthest from `A_1`, which
/// turns the inner supremum into a sort.
pub fn separation_distance(x: &FiniteMMSpace, kappa1: f64, kappa2: f64) -> Result<Separation> {
    if kappa1 <= 0.0 || kappa2 <= 0.0 {
        return Err(Error::Domain(format!(
            "separation thresholds must be positive, got ({kappa1}, {kappa2})"
        )));
    }
    x.check_cap()?;
    let mut best: Option<(f64, u32)> = None;
    let mut ds = vec![0.0; x.n];
    for mask in 1u32..(1 << x.n) {
        if x.subset_weight(mask) < kappa1 - MASS_TOL {
            continue;
        }
        for (j, slot) in ds.iter_mut().enumerate() {
            let mut m = mask;
            let mut d = f64::INFINITY;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                d = d.min(x.distance(i, j));
                m &= m - 1;
            }
            *slot = d;
        }
        let mut order: Vec<usize> = (0..x.n).collect();
        order.sort_by(|&a, &b| ds[b].total_cmp(&ds[a]));
        let mut acc = 0.0;
        for &j in &order {
            acc += x.weight(j);
            if acc >= kappa2 - MASS_TOL {
                let value = ds[j];
                if best.as_ref().is_none_or(|(v, _)| value > *v) {
                    best = Some((value, mask));
                }
                break;
            }
        }
    }
    Ok(match best {
        Some((value, mask)) => Separation {
            value,
            attained: true,
            witness: (0..x.n).filter(|i| mask & (1 << i) != 0).collect(),
        },
        None => Separation {
            value: 0.0,
            attained: false,
            witness: Vec::new(),
        },
    })
}

/// Concentration function `alpha_X(r)`: the largest mass lying outside the
/// open `r`-neighborhood of a set of mass at least one half.
pub fn concentration_function(x: &FiniteMMSpace, r: f64) -> Result<f64> {
    if r <= 0.0 {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    x.check_cap()?;
    let mut best: f64 = 0.0;
    for mask in 1u32..(1 << x.n) {
        if x.subset_weight(mask) < 0.5 - MASS_TOL {
            continue;
        }
        let mut outside = 0.0;
        for j in 0..x.n {
            let mut m = mask;
            let mut d = f64::INFINITY;
            while m != 0 {
                let i = m.trailing_zeros() as usize;
                d = d.min(x.distance(i, j));
                m &= m - 1;
            }
            if d >= r {
                outside += x.weight(j);
            }
        }
        best = best.max(outside);
    }
    Ok(best)
}

/// Smallest radius of a closed ball about the barycenter that captures mass
/// at least `1 - kappa`. Balls are closed so the infimum is attained on a
/// finite support.
pub fn central_radius<S: BarycenterSolve>(nu: &FiniteMeasure<S>, kappa: f64) -> Result<f64> {
    if kappa <= 0.0 || kappa > 1.0 {
        return Err(Error::Domain(format!(
            "central radius needs kappa in (0, 1], got {kappa}"
        )));
    }
    let b = barycenter(nu)?;
    let target = 1.0 - kappa;
    if target <= MASS_TOL {
        return Ok(0.0);
    }
    let mut dw: Vec<(f64, f64)> = nu
        .atoms()
        .iter()
        .map(|(p, w)| (nu.space().distance(&b.point, p), *w))
        .collect();
    dw.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = 0.0;
    for (d, w) in dw {
        acc += w;
        if acc >= target - MASS_TOL {
            return Ok(d);
        }
    }
    Ok(nu
        .atoms()
        .iter()
        .map(|(p, _)| nu.space().distance(&b.point, p))
        .fold(0.0, f64::max))
}

/// Image of an mm-space under a real-valued map: a weighted set of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct PushforwardMeasure {
    values: Vec<(f64, f64)>,
}

impl PushforwardMeasure {
    pub fn new(values: Vec<(f64, f64)>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMeasure("empty pushforward".into()));
        }
        if values.iter().any(|(v, w)| !v.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMeasure(
                "pushforward needs finite values and nonnegative weights".into(),
            ));
        }
        let sum: f64 = values.iter().map(|(_, w)| w).sum();
        if (sum - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "pushforward weights sum to {sum}"
            )));
        }
        Ok(PushforwardMeasure { values })
    }

    /// Pushforward of `x` under the function with the given per-point values.
    pub fn from_function(x: &FiniteMMSpace, f: &[f64]) -> Result<Self> {
        if f.len() != x.len() {
            return Err(Error::Domain(format!(
                "function has {} values for {} points",
                f.len(),
                x.len()
            )));
        }
        PushforwardMeasure::new(f.iter().enumerate().map(|(i, &v)| (v, x.weight(i))).collect())
    }

    pub fn values(&self) -> &[(f64, f64)] {
        &self.values
    }

    /// Mean of the pushforward — its barycenter, since the line is a Hilbert
    /// space.
    pub fn mean(&self) -> f64 {
        self.values.iter().map(|(v, w)| v * w).sum()
    }

    /// Partial diameter on the line. A mass-optimal set can always be fattened
    /// to every support point between its extremes, so the optimum is a
    /// window of the sorted support and a two-pointer sweep is exact.
    pub fn partial_diameter(&self, mass: f64) -> Result<f64> {
        if self.values.len() > PUSHFORWARD_CAP {
            return Err(Error::TooLarge {
                size: self.values.len(),
                max: PUSHFORWARD_CAP,
            });
        }
        if mass <= 0.0 {
            return Ok(0.0);
        }
        let total: f64 = self.values.iter().map(|(_, w)| w).sum();
        if mass > total + MASS_TOL {
            return Err(Error::Domain(format!(
                "required mass {mass} exceeds the total mass {total}"
            )));
        }
        let mut sorted = self.values.clone();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = f64::INFINITY;
        let mut lo = 0;
        let mut acc = 0.0;
        let mut hi = 0;
        while lo < sorted.len() {
            while hi < sorted.len() && acc < mass - MASS_TOL {
                acc += sorted[hi].1;
                hi += 1;
            }
            if acc < mass - MASS_TOL {
                break;
            }
            best = best.min(sorted[hi - 1].0 - sorted[lo].0);
            acc -= sorted[lo].1;
            lo += 1;
        }
        Ok(best)
    }

    /// Central radius about the mean, closed balls.
    pub fn central_radius(&self, kappa: f64) -> Result<f64> {
        if kappa <= 0.0 || kappa > 1.0 {
            return Err(Error::Domain(format!(
                "central radius needs kappa in (0, 1], got {kappa}"
            )));
        }
        let target = 1.0 - kappa;
        if target <= MASS_TOL {
            return Ok(0.0);
        }
        let m = self.mean();
        let mut dw: Vec<(f64, f64)> = self.values.iter().map(|(v, w)| ((v - m).abs(), *w)).collect();
        dw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut acc = 0.0;
        for (d, w) in &dw {
            acc += w;
            if acc >= target - MASS_TOL {
                return Ok(*d);
            }
        }
        Ok(dw.last().map_or(0.0, |(d, _)| *d))
    }
}

/// Witness-based lower bound for the observable diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessBound {
    /// Best partial diameter over the witness family.
    pub bound: f64,
    /// Values of the best witness function, one per point.
    pub witness: Vec<f64>,
}

/// Lower bound on `ObsDiam(X; -kappa')` from explicit 1-Lipschitz witnesses:
/// distance to an optimal separation set for `Sep(X; kappa, kappa)`, and
/// distance to each single point. For `kappa > kappa'` the bound dominates
/// the separation distance.
pub fn obsdiam_witness_lower_bound(
    x: &FiniteMMSpace,
    kappa: f64,
    kappa_prime: f64,
) -> Result<WitnessBound> {
    if !(kappa > kappa_prime && kappa_prime > 0.0) {
        return Err(Error::Domain(format!(
            "need kappa > kappa' > 0, got ({kappa}, {kappa_prime})"
        )));
    }
    x.check_cap()?;
    let sep = separation_distance(x, kappa, kappa)?;
    let mut witnesses: Vec<Vec<f64>> = Vec::with_capacity(x.len() + 1);
    if !sep.witness.is_empty() {
        let f: Vec<f64> = (0..x.len())
            .map(|j| {
                sep.witness
                    .iter()
                    .map(|&i| x.distance(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        witnesses.push(f);
    }
    for i in 0..x.len() {
        witnesses.push((0..x.len()).map(|j| x.distance(i, j)).collect());
    }
    let mut best: Option<(f64, Vec<f64>)> = None;
    for f in witnesses {
        debug_assert!(is_one_lipschitz(x, &f), "witness is not 1-Lipschitz");
        let pf = PushforwardMeasure::from_function(x, &f)?;
        let pd = pf.partial_diameter(1.0 - kappa_prime)?;
        if best.as_ref().is_none_or(|(b, _)| pd > *b) {
            best = Some((pd, f));
        }
    }
    let (bound, witness) = best.expect("witness family is nonempty");
    Ok(WitnessBound { bound, witness })
}

fn is_one_lipschitz(x: &FiniteMMSpace, f: &[f64]) -> bool {
    (0..x.len()).all(|i| {
        (0..x.len()).all(|j| (f[i] - f[j]).abs() <= x.distance(i, j) + MASS_TOL)
    })
}

//! Finitely supported probability measures on a geodesic space.
//!
//! Sampling is counter-indexed: a [`SampleStream`] is a pure function from
//! `(seed, counter)` to an atom, so replaying a stream is bit-exact and
//! independent of how trials are scheduled across workers.

use crate::error::{Error, Result};
use crate::spaces::Space;

/// Weight sums farther than this from 1 are rejected instead of renormalized.
const WEIGHT_SUM_TOL: f64 = 1e-6;

/// A probability measure with finitely many atoms on a space `S`.
///
/// Construction validates the atoms, merges duplicates (by the space's own
/// equality), and renormalizes the weights to sum to 1.
#[derive(Debug, Clone)]
pub struct FiniteMeasure<S: Space> {
    space: S,
    atoms: Vec<(S::Point, f64)>,
}

impl<S: Space> FiniteMeasure<S> {
    pub fn new(space: S, atoms: Vec<(S::Point, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        let mut sum = 0.0;
        for (p, w) in &atoms {
            space
                .check_point(p)
                .map_err(|e| Error::InvalidMeasure(format!("bad atom: {e}")))?;
            if !w.is_finite() || *w <= 0.0 {
                return Err(Error::InvalidMeasure(format!("nonpositive weight {w}")));
            }
            sum += *w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMeasure(format!(
                "weights sum to {sum}, not 1 within {WEIGHT_SUM_TOL}"
            )));
        }
        let mut merged: Vec<(S::Point, f64)> = Vec::with_capacity(atoms.len());
        for (p, w) in atoms {
            match merged.iter_mut().find(|(q, _)| space.same_point(q, &p)) {
                Some((_, acc)) => *acc += w,
                None => merged.push((p, w)),
            }
        }
        for (_, w) in merged.iter_mut() {
            *w /= sum;
        }
        Ok(FiniteMeasure {
            space,
            atoms: merged,
        })
    }

    /// All mass at a single point.
    pub fn point_mass(space: S, p: S::Point) -> Result<Self> {
        FiniteMeasure::new(space, vec![(p, 1.0)])
    }

    /// Equal-weight empirical measure of a sample cloud. Duplicates are kept
    /// as repeated atoms: merging is not needed for moments or barycenters
    /// and would cost a quadratic pass on large clouds.
    pub fn empirical(space: S, points: Vec<S::Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        for p in &points {
            space
                .check_point(p)
                .map_err(|e| Error::InvalidMeasure(format!("bad atom: {e}")))?;
        }
        let w = 1.0 / points.len() as f64;
        Ok(FiniteMeasure {
            space,
            atoms: points.into_iter().map(|p| (p, w)).collect(),
        })
    }

    pub fn space(&self) -> &S {
        &self.space
    }

    pub fn atoms(&self) -> &[(S::Point, f64)] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Largest pairwise distance between atoms; zero for a point mass.
    pub fn support_diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for (i, (p, _)) in self.atoms.iter().enumerate() {
            for (q, _) in &self.atoms[i + 1..] {
                best = best.max(self.space.distance(p, q));
            }
        }
        best
    }

    /// `sum_i w_i d(x, y_i)^2`, the function whose minimizer is the
    /// barycenter.
    pub fn second_moment(&self, x: &S::Point) -> f64 {
        self.atoms
            .iter()
            .map(|(y, w)| {
                let d = self.space.distance(x, y);
                w * d * d
            })
            .sum()
    }

    /// Distance from `x` to the nearest atom.
    pub fn distance_to_support(&self, x: &S::Point) -> f64 {
        self.atoms
            .iter()
            .map(|(y, _)| self.space.distance(x, y))
            .fold(f64::INFINITY, f64::min)
    }

    /// Deterministic sampler for this measure under the given seed.
    pub fn stream(&self, seed: u64) -> SampleStream<'_, S> {
        let mut cum = Vec::with_capacity(self.atoms.len());
        let mut acc = 0.0;
        for (_, w) in &self.atoms {
            acc += w;
            cum.push(acc);
        }
        SampleStream {
            measure: self,
            seed,
            cum,
        }
    }
}

/// Counter-indexed i.i.d. sampler: `draw(k)` depends only on `(seed, k)`.
#[derive(Debug, Clone)]
pub struct SampleStream<'a, S: Space> {
    measure: &'a FiniteMeasure<S>,
    seed: u64,
    cum: Vec<f64>,
}

impl<'a, S: Space> SampleStream<'a, S> {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Index of the atom drawn at `counter`.
    pub fn draw_index(&self, counter: u64) -> usize {
        let u = uniform01(self.seed, counter);
        let idx = self.cum.partition_point(|&c| c <= u);
        idx.min(self.cum.len() - 1)
    }

    /// Atom drawn at `counter`.
    pub fn draw(&self, counter: u64) -> &'a S::Point {
        &self.measure.atoms[self.draw_index(counter)].0
    }
}

/// The k-th output of the splitmix64 stream started at `seed`.
pub fn counter_rng(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(
        counter
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform draw in `[0, 1)` from `(seed, counter)`.
pub fn uniform01(seed: u64, counter: u64) -> f64 {
    (counter_rng(seed, counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

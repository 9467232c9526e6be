//! Random points for diagnostics and property tests.
//!
//! The distributions are arbitrary but fixed: uniform over edges for trees,
//! a bounded box for Euclidean space, and a bounded exponential shot from
//! the apex for the hyperboloid. Radii are kept moderate so that iterative
//! solvers stay deep inside their contraction regime.

use rand::Rng;

use crate::spaces::{
    Euclidean, Hyperboloid, L1Product, MetricTree, Space, TangentOps, TangentVector, TreePoint,
};

/// Spaces that can produce random points for stress tests.
pub trait PointSampler: Space {
    fn sample_point<R: Rng>(&self, rng: &mut R) -> Self::Point;
}

impl<S: PointSampler> PointSampler for L1Product<S> {
    fn sample_point<R: Rng>(&self, rng: &mut R) -> Vec<S::Point> {
        (0..self.copies())
            .map(|_| self.base().sample_point(rng))
            .collect()
    }
}

impl PointSampler for MetricTree {
    fn sample_point<R: Rng>(&self, rng: &mut R) -> TreePoint {
        let edge = rng.gen_range(0..self.edge_count());
        let offset = rng.gen_range(0.0..=self.edge_length(edge));
        self.canonicalize(&TreePoint { edge, offset })
    }
}

impl PointSampler for Euclidean {
    fn sample_point<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        (0..self.dim()).map(|_| rng.gen_range(-2.0..2.0)).collect()
    }
}

impl PointSampler for Hyperboloid {
    fn sample_point<R: Rng>(&self, rng: &mut R) -> crate::spaces::HyperboloidPoint {
        // direction on the unit sphere via normalized Gaussians, radius in [0, 1.5]
        let mut dir: Vec<f64> = (0..self.dim())
            .map(|_| {
                // Box-Muller
                let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
                let u2: f64 = rng.gen_range(0.0..1.0);
                (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
            })
            .collect();
        let norm = dir.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 {
            return self.origin();
        }
        let radius = rng.gen_range(0.0..1.5);
        for d in dir.iter_mut() {
            *d *= radius / norm;
        }
        let mut components = Vec::with_capacity(self.dim() + 1);
        components.push(0.0);
        components.extend_from_slice(&dir);
        self.exp_map(&TangentVector {
            base: self.origin(),
            components,
        })
    }
}

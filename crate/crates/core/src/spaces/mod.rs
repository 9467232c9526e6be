//! Geodesic-space kernels: distances, constant-speed geodesics, tangent maps,
//! and CAT(0) comparison diagnostics.
//!
//! Four concrete spaces are provided:
//!
//! - [`MetricTree`] — a finite R-tree with positive edge lengths; points are
//!   addressed by an edge index and an offset along that edge;
//! - [`Hyperboloid`] — the upper sheet of the unit hyperboloid in Minkowski
//!   space, the constant-curvature -1 model of an m-dimensional Hadamard
//!   manifold;
//! - [`Euclidean`] — flat R^m, the finite-dimensional Hilbert case;
//! - [`L1Product`] — the n-fold product of a base space with the l1 (sum)
//!   distance, the domain of the inductive-mean map in the Lipschitz check.
//!
//! All spaces are immutable after construction and all operations are safe to
//! call concurrently. Operations require valid points: structural validity is
//! checked by [`Space::check_point`] at boundaries (measure construction,
//! file parsing), and the geometric kernels panic on precondition violations
//! such as a tree point referencing an unknown edge or a geodesic parameter
//! outside `[0, 1]`.

mod euclidean;
mod hyperboloid;
mod product;
mod sampling;
mod tree;

pub use euclidean::Euclidean;
pub use hyperboloid::{Hyperboloid, HyperboloidPoint};
pub use product::L1Product;
pub use sampling::PointSampler;
pub use tree::{MetricTree, TreePoint};

use crate::error::Result;

/// A uniquely geodesic metric space.
pub trait Space {
    type Point: Clone + PartialEq + std::fmt::Debug;

    /// Short label for reports ("tree", "hyperboloid", "euclidean", ...).
    fn kind(&self) -> &'static str;

    /// Validates that `p` is structurally a point of this space.
    fn check_point(&self, p: &Self::Point) -> Result<()>;

    /// Distance between two valid points. Symmetric, nonnegative, zero iff
    /// the points coincide, and satisfies the triangle inequality.
    fn distance(&self, p: &Self::Point, q: &Self::Point) -> f64;

    /// Point at parameter `t` on the constant-speed geodesic from `p` to `q`,
    /// so that `d(p, gamma(t)) = t * d(p, q)`.
    ///
    /// Panics if `t` is outside `[0, 1]`.
    fn geodesic(&self, p: &Self::Point, q: &Self::Point, t: f64) -> Self::Point;

    /// Whether two points denote the same location (for trees this compares
    /// canonical forms, so vertex points on different incident edges are
    /// equal; for coordinate spaces it is exact coordinate equality).
    fn same_point(&self, p: &Self::Point, q: &Self::Point) -> bool {
        p == q
    }

    /// JSON value describing the point in the measure-file convention.
    fn point_json(&self, p: &Self::Point) -> serde_json::Value;
}

/// Tangent vector at a base point, used by the exponential/logarithm maps.
///
/// For hyperboloid bases the components are ambient Minkowski coordinates
/// orthogonal to the base (`<base, v>_M = 0`); for Euclidean bases they are
/// plain coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector<P> {
    pub base: P,
    pub components: Vec<f64>,
}

/// Exponential and logarithm maps for the smooth spaces.
///
/// The tree deliberately does not implement this trait: there is no tangent
/// structure at a branch vertex, so the unsupported-operation case is ruled
/// out at the type level.
pub trait TangentOps: Space {
    /// Initial velocity of the unit-time geodesic from `base` to `target`;
    /// its norm equals `distance(base, target)`.
    fn log_map(&self, base: &Self::Point, target: &Self::Point) -> TangentVector<Self::Point>;

    /// Endpoint of the geodesic starting at `v.base` with initial velocity
    /// `v`, at time 1.
    fn exp_map(&self, v: &TangentVector<Self::Point>) -> Self::Point;

    /// Riemannian norm of a tangent vector.
    fn tangent_norm(&self, v: &TangentVector<Self::Point>) -> f64;
}

/// Slack of the CAT(0) midpoint comparison inequality at `(x, y, z)`:
///
/// `1/2 d(x,y)^2 + 1/2 d(x,z)^2 - 1/4 d(y,z)^2 - d(x, m)^2`
///
/// where `m` is the midpoint of the geodesic from `y` to `z`. Nonnegative in
/// every CAT(0) space, identically zero in Hilbert space.
pub fn cat0_midpoint_slack<S: Space>(
    space: &S,
    x: &S::Point,
    y: &S::Point,
    z: &S::Point,
) -> f64 {
    let mid = space.geodesic(y, z, 0.5);
    let dxy = space.distance(x, y);
    let dxz = space.distance(x, z);
    let dyz = space.distance(y, z);
    let dxm = space.distance(x, &mid);
    0.5 * dxy * dxy + 0.5 * dxz * dxz - 0.25 * dyz * dyz - dxm * dxm
}

/// Slack of the convexity of the distance between two geodesics at `t`:
///
/// `(1-t) d(gamma(0), eta(0)) + t d(gamma(1), eta(1)) - d(gamma(t), eta(t))`
///
/// Nonnegative in every CAT(0) space.
///
/// Panics if `t` is outside `[0, 1]`.
pub fn geodesic_convexity_slack<S: Space>(
    space: &S,
    gamma: (&S::Point, &S::Point),
    eta: (&S::Point, &S::Point),
    t: f64,
) -> f64 {
    let gt = space.geodesic(gamma.0, gamma.1, t);
    let et = space.geodesic(eta.0, eta.1, t);
    let d0 = space.distance(gamma.0, eta.0);
    let d1 = space.distance(gamma.1, eta.1);
    (1.0 - t) * d0 + t * d1 - space.distance(&gt, &et)
}

pub(crate) fn assert_unit_interval(t: f64) {
    assert!(
        (0.0..=1.0).contains(&t),
        "geodesic parameter must lie in [0, 1], got {t}"
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tripod_midpoint_slack_hand_value() {
        // x, y, z on the three branches at the leaf tips: the y-z midpoint
        // is the origin, so the slack is 1/2*4 + 1/2*4 - 1/4*4 - 1 = 2
        let t = MetricTree::tripod([1.0, 1.0, 1.0]);
        let x = TreePoint { edge: 0, offset: 1.0 };
        let y = TreePoint { edge: 1, offset: 1.0 };
        let z = TreePoint { edge: 2, offset: 1.0 };
        assert!((cat0_midpoint_slack(&t, &x, &y, &z) - 2.0).abs() < 1e-12);
        // degenerate triangle
        assert!(cat0_midpoint_slack(&t, &x, &y, &y).abs() < 1e-12);
    }

    #[test]
    fn tripod_convexity_slack_hand_value() {
        // both geodesics leave the leaf of branch 1; at t = 0.75 they sit
        // half-way out branches 2 and 3, giving 0.75*2 - 1 = 0.5
        let t = MetricTree::tripod([1.0, 1.0, 1.0]);
        let a = TreePoint { edge: 0, offset: 1.0 };
        let b = TreePoint { edge: 1, offset: 1.0 };
        let c = TreePoint { edge: 2, offset: 1.0 };
        let slack = geodesic_convexity_slack(&t, (&a, &b), (&a, &c), 0.75);
        assert!((slack - 0.5).abs() < 1e-12);
        // identical geodesics have no slack at any parameter
        for t_param in [0.0, 0.3, 1.0] {
            let s = geodesic_convexity_slack(&t, (&a, &b), (&a, &b), t_param);
            assert!(s.abs() < 1e-12);
        }
    }
}

//! Inductive means and barycenters.
//!
//! The inductive mean is the order-dependent running mean
//! `s_1 = y_1`, `s_n = gamma(1/n)` along the geodesic from `s_{n-1}` to
//! `y_n`. The barycenter of a measure is the unique minimizer of
//! `x -> sum_i w_i d(x, y_i)^2`; it is solved exactly on trees and in
//! Euclidean space and by a fixed-point iteration on the hyperboloid.

use crate::error::{Error, Result};
use crate::measures::FiniteMeasure;
use crate::spaces::{
    Euclidean, Hyperboloid, HyperboloidPoint, MetricTree, Space, TangentOps, TangentVector,
    TreePoint,
};

/// Gradient-norm tolerance of the iterative solver.
pub const KARCHER_TOL: f64 = 1e-12;
/// Iteration cap of the iterative solver.
pub const KARCHER_MAX_ITERS: usize = 10_000;

/// Barycenter of a measure together with solver diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct BarycenterResult<P> {
    pub point: P,
    /// Value of the second moment at `point`.
    pub objective: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Raw solver outcome; unlike [`barycenter`] this never converts a
/// non-converged run into an error, so the best iterate stays reachable.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveOutcome<P> {
    pub point: P,
    pub iterations: usize,
    pub converged: bool,
    /// Final gradient norm for iterative solvers, 0 for exact ones.
    pub residual: f64,
}

/// Spaces with a barycenter solver for finitely supported measures.
pub trait BarycenterSolve: Space {
    fn solve_barycenter(&self, atoms: &[(Self::Point, f64)]) -> SolveOutcome<Self::Point>;
}

/// Sturm's inductive mean of a nonempty ordered sequence.
pub fn inductive_mean<'a, S, I>(space: &S, points: I) -> Result<S::Point>
where
    S: Space,
    S::Point: 'a,
    I: IntoIterator<Item = &'a S::Point>,
{
    let mut iter = points.into_iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::Domain("inductive mean of an empty sequence".into()))?;
    let mut s = first.clone();
    let mut k = 1u64;
    for y in iter {
        k += 1;
        s = space.geodesic(&s, y, 1.0 / k as f64);
    }
    Ok(s)
}

/// Barycenter of `nu`, with the objective evaluated at the solution.
///
/// Fails with [`Error::BarycenterConvergence`] if the iterative solver does
/// not reach its tolerance within the iteration cap.
pub fn barycenter<S: BarycenterSolve>(
    nu: &FiniteMeasure<S>,
) -> Result<BarycenterResult<S::Point>> {
    let out = nu.space().solve_barycenter(nu.atoms());
    if !out.converged {
        return Err(Error::BarycenterConvergence {
            iterations: out.iterations,
            grad_norm: out.residual,
        });
    }
    let objective = nu.second_moment(&out.point);
    Ok(BarycenterResult {
        point: out.point,
        objective,
        iterations: out.iterations,
        converged: true,
    })
}

/// Expectation of a space-valued random variable with law `nu`: the
/// barycenter of the pushforward.
pub fn expectation<S: BarycenterSolve>(nu: &FiniteMeasure<S>) -> Result<S::Point> {
    Ok(barycenter(nu)?.point)
}

/// Slack of the variance inequality at `z`:
/// `int {d(z,x)^2 - d(b,x)^2} dnu(x) - d(z, b)^2` with `b` the barycenter.
/// Nonnegative in every CAT(0) space, zero in Hilbert space.
pub fn variance_slack<S: BarycenterSolve>(nu: &FiniteMeasure<S>, z: &S::Point) -> Result<f64> {
    let b = barycenter(nu)?;
    let dzb = nu.space().distance(z, &b.point);
    Ok(nu.second_moment(z) - b.objective - dzb * dzb)
}

/// Slack of `d(b(nu), supp nu) <= diam(supp nu)`.
pub fn support_proximity_slack<S: BarycenterSolve>(nu: &FiniteMeasure<S>) -> Result<f64> {
    let b = barycenter(nu)?;
    Ok(nu.support_diameter() - nu.distance_to_support(&b.point))
}

impl BarycenterSolve for Euclidean {
    fn solve_barycenter(&self, atoms: &[(Vec<f64>, f64)]) -> SolveOutcome<Vec<f64>> {
        // normalize by the summed weights so that repeated-atom clouds with
        // weights 1/k land exactly on the common coordinate
        let mut mean = vec![0.0; self.dim()];
        let mut total = 0.0;
        for (p, w) in atoms {
            total += w;
            for (m, x) in mean.iter_mut().zip(p) {
                *m += w * x;
            }
        }
        for m in mean.iter_mut() {
            *m /= total;
        }
        SolveOutcome {
            point: mean,
            iterations: 0,
            converged: true,
            residual: 0.0,
        }
    }
}

impl BarycenterSolve for Hyperboloid {
    /// Fixed-point iteration `x <- exp_x(sum_i w_i log_x(y_i))`, started at
    /// the heaviest atom, stopped when the tangent gradient norm falls
    /// below [`KARCHER_TOL`].
    fn solve_barycenter(
        &self,
        atoms: &[(HyperboloidPoint, f64)],
    ) -> SolveOutcome<HyperboloidPoint> {
        let start = atoms
            .iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("measure has at least one atom");
        let mut x = start.0.clone();
        let mut residual = f64::INFINITY;
        for it in 0..KARCHER_MAX_ITERS {
            let mut grad = vec![0.0; self.dim() + 1];
            for (y, w) in atoms {
                let v = self.log_map(&x, y);
                for (g, c) in grad.iter_mut().zip(&v.components) {
                    *g += w * c;
                }
            }
            let step = TangentVector {
                base: x.clone(),
                components: grad,
            };
            residual = self.tangent_norm(&step);
            if residual <= KARCHER_TOL {
                return SolveOutcome {
                    point: x,
                    iterations: it,
                    converged: true,
                    residual,
                };
            }
            x = self.exp_map(&step);
        }
        SolveOutcome {
            point: x,
            iterations: KARCHER_MAX_ITERS,
            converged: false,
            residual,
        }
    }
}

impl BarycenterSolve for MetricTree {
    /// Exact minimization. Restricted to one edge the objective is a single
    /// convex quadratic in the offset with unit leading coefficient: squared
    /// distance to an on-edge atom is `(s - o)^2`, and to an off-edge atom it
    /// is `(s + a)^2` or `(L - s + b)^2` depending on which side of the edge
    /// the atom hangs, because an edge is a cut of the tree. Minimizing each
    /// edge in closed form and taking the best edge is therefore global.
    fn solve_barycenter(&self, atoms: &[(TreePoint, f64)]) -> SolveOutcome<TreePoint> {
        let mut best: Option<(f64, TreePoint)> = None;
        for eidx in 0..self.edge_count() {
            let (u, v, len) = self.edge_raw(eidx);
            let mut opt = 0.0;
            for (p, w) in atoms {
                if p.edge == eidx {
                    opt += w * p.offset;
                } else {
                    let (fu, _, _) = self.edge_raw(p.edge);
                    if self.on_u_side(eidx, fu) {
                        opt -= w * self.point_vertex_distance(p, u);
                    } else {
                        opt += w * (len + self.point_vertex_distance(p, v));
                    }
                }
            }
            let candidate = TreePoint {
                edge: eidx,
                offset: opt.clamp(0.0, len),
            };
            let objective: f64 = atoms
                .iter()
                .map(|(p, w)| {
                    let d = self.distance(&candidate, p);
                    w * d * d
                })
                .sum();
            if best.as_ref().is_none_or(|(obj, _)| objective < *obj) {
                best = Some((objective, candidate));
            }
        }
        let (_, point) = best.expect("tree has at least one edge");
        SolveOutcome {
            point: self.canonicalize(&point),
            iterations: 0,
            converged: true,
            residual: 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::PointSampler;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tripod_uniform() -> FiniteMeasure<MetricTree> {
        let t = MetricTree::tripod([1.0, 1.0, 1.0]);
        let atoms = (0..3)
            .map(|e| (TreePoint { edge: e, offset: 1.0 }, 1.0 / 3.0))
            .collect();
        FiniteMeasure::new(t, atoms).unwrap()
    }

    #[test]
    fn inductive_mean_of_single_point() {
        let e = Euclidean::new(1);
        let y = vec![3.0];
        assert_eq!(inductive_mean(&e, [&y]).unwrap(), y);
        assert!(matches!(
            inductive_mean(&e, std::iter::empty::<&Vec<f64>>()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn inductive_mean_is_arithmetic_in_hilbert_space() {
        let e = Euclidean::new(1);
        let pts = [vec![0.0], vec![1.0], vec![2.0]];
        let m = inductive_mean(&e, pts.iter()).unwrap();
        assert!((m[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tripod_inductive_mean_depends_on_order() {
        let t = MetricTree::tripod([1.0, 1.0, 1.0]);
        let y1 = TreePoint { edge: 0, offset: 1.0 };
        let y2 = TreePoint { edge: 1, offset: 1.0 };
        let y3 = TreePoint { edge: 2, offset: 1.0 };
        let m123 = inductive_mean(&t, [&y1, &y2, &y3]).unwrap();
        let m132 = inductive_mean(&t, [&y1, &y3, &y2]).unwrap();
        // order (1,2,3) lands on branch 3, order (1,3,2) on branch 2,
        // both one third of the way out
        assert_eq!(m123.edge, 2);
        assert!((m123.offset - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(m132.edge, 1);
        assert!((m132.offset - 1.0 / 3.0).abs() < 1e-12);
        assert!(!t.same_point(&m123, &m132));
    }

    #[test]
    fn barycenter_of_point_mass() {
        let e = Euclidean::new(2);
        let m = FiniteMeasure::point_mass(e, vec![1.0, -2.0]).unwrap();
        let b = barycenter(&m).unwrap();
        assert_eq!(b.point, vec![1.0, -2.0]);
        assert_eq!(b.objective, 0.0);
        assert!(b.converged);
    }

    #[test]
    fn euclidean_barycenter_is_weighted_mean() {
        let e = Euclidean::new(1);
        let m = FiniteMeasure::new(e, vec![(vec![0.0], 0.5), (vec![1.0], 0.5)]).unwrap();
        let b = barycenter(&m).unwrap();
        assert!((b.point[0] - 0.5).abs() < 1e-15);
        assert!((b.objective - 0.25).abs() < 1e-15);
    }

    #[test]
    fn tripod_barycenter_is_origin() {
        let m = tripod_uniform();
        let b = barycenter(&m).unwrap();
        let origin = m.space().vertex_point(0).unwrap();
        assert!(m.space().same_point(&b.point, &origin));
        assert!((b.objective - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tripod_barycenter_survives_grid_search() {
        // brute-force the objective on a fine grid over every edge
        let m = tripod_uniform();
        let b = barycenter(&m).unwrap();
        let t = m.space();
        let step = 1e-4;
        for e in 0..t.edge_count() {
            let len = t.edge_length(e);
            let mut s = 0.0;
            while s <= len {
                let p = TreePoint { edge: e, offset: s };
                assert!(m.second_moment(&p) >= b.objective - 1e-9);
                s += step;
            }
        }
    }

    #[test]
    fn skewed_tree_barycenter_interior_minimum() {
        // two atoms on one path: barycenter is their weighted midpoint
        let t = MetricTree::new(vec![0, 1, 2], vec![(0, 1, 2.0), (1, 2, 2.0)]).unwrap();
        let a = TreePoint { edge: 0, offset: 0.0 }; // vertex 0
        let b = TreePoint { edge: 1, offset: 2.0 }; // vertex 2, distance 4 away
        let m = FiniteMeasure::new(t, vec![(a, 0.75), (b, 0.25)]).unwrap();
        let r = barycenter(&m).unwrap();
        // minimizer of 0.75 s^2 + 0.25 (4 - s)^2 is s = 1
        assert_eq!(r.point.edge, 0);
        assert!((r.point.offset - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hyperboloid_barycenter_of_two_atoms_is_midpoint() {
        let h = Hyperboloid::new(2);
        let p = h.lift(&[0.4, 0.0]).unwrap();
        let q = h.lift(&[-0.2, 0.3]).unwrap();
        let m = FiniteMeasure::new(h, vec![(p.clone(), 0.5), (q.clone(), 0.5)]).unwrap();
        let b = barycenter(&m).unwrap();
        let mid = h.geodesic(&p, &q, 0.5);
        assert!(h.distance(&b.point, &mid) < 1e-10);
        assert!(b.converged);
        // gradient norm at the solution
        let mut grad = vec![0.0; 3];
        for (y, w) in m.atoms() {
            let v = h.log_map(&b.point, y);
            for (g, c) in grad.iter_mut().zip(&v.components) {
                *g += w * c;
            }
        }
        let gn = h
            .tangent_norm(&TangentVector { base: b.point.clone(), components: grad });
        assert!(gn <= 1e-10, "gradient norm {gn}");
    }

    #[test]
    fn variance_slack_examples() {
        let m = tripod_uniform();
        let b = barycenter(&m).unwrap();
        assert!(variance_slack(&m, &b.point).unwrap().abs() < 1e-12);
        let leaf = TreePoint { edge: 0, offset: 1.0 };
        // second moment at a leaf is 1/3*0 + 2/3*4 = 8/3; d(leaf, origin)^2 = 1
        let slack = variance_slack(&m, &leaf).unwrap();
        assert!((slack - 2.0 / 3.0).abs() < 1e-12);

        let e = Euclidean::new(1);
        let me = FiniteMeasure::new(e, vec![(vec![0.0], 0.3), (vec![2.0], 0.7)]).unwrap();
        for z in [vec![-1.0], vec![0.7], vec![5.0]] {
            assert!(variance_slack(&me, &z).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn support_proximity_examples() {
        let e = Euclidean::new(1);
        let pm = FiniteMeasure::point_mass(e, vec![3.0]).unwrap();
        assert_eq!(support_proximity_slack(&pm).unwrap(), 0.0);
        let m01 = FiniteMeasure::new(e, vec![(vec![0.0], 0.5), (vec![1.0], 0.5)]).unwrap();
        assert!((support_proximity_slack(&m01).unwrap() - 0.5).abs() < 1e-15);
        assert!((support_proximity_slack(&tripod_uniform()).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_euclidean_barycenters_match_weighted_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let e = Euclidean::new(3);
            let k = 2 + (rng.gen::<u64>() % 6) as usize;
            let mut atoms: Vec<(Vec<f64>, f64)> =
                (0..k).map(|_| (e.sample_point(&mut rng), rng.gen_range(0.1..1.0))).collect();
            let sum: f64 = atoms.iter().map(|(_, w)| *w).sum();
            for (_, w) in atoms.iter_mut() {
                *w /= sum;
            }
            let expected: Vec<f64> = (0..3)
                .map(|i| atoms.iter().map(|(p, w)| w * p[i]).sum())
                .collect();
            let m = FiniteMeasure::new(e, atoms).unwrap();
            let b = barycenter(&m).unwrap();
            for (a, x) in b.point.iter().zip(&expected) {
                assert!((a - x).abs() < 1e-12);
            }
        }
    }
}

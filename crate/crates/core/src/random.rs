//! Random instances for stress suites and tests: trees, measures, and
//! finite mm-spaces. Sizes and scales are kept desk-small; hyperboloid
//! supports stay within radius 1.5 so the fixed-point barycenter solver is
//! firmly contractive.

use rand::Rng;

use crate::measures::FiniteMeasure;
use crate::mm::FiniteMMSpace;
use crate::spaces::{Euclidean, Hyperboloid, MetricTree, PointSampler, Space};

/// Random tree with 2..=max_vertices vertices and lengths in [0.2, 2].
pub fn random_tree<R: Rng>(rng: &mut R, max_vertices: usize) -> MetricTree {
    let n = rng.gen_range(2..=max_vertices.max(2));
    build_tree(rng, n, |rng| rng.gen_range(0.2..2.0))
}

/// Random tree whose edge lengths are multiples of 1/64, so path lengths
/// are exactly representable and independent of summation order.
pub fn random_dyadic_tree<R: Rng>(rng: &mut R, max_vertices: usize) -> MetricTree {
    let n = rng.gen_range(2..=max_vertices.max(2));
    build_tree(rng, n, |rng| rng.gen_range(1..=128) as f64 / 64.0)
}

fn build_tree<R: Rng>(rng: &mut R, n: usize, mut length: impl FnMut(&mut R) -> f64) -> MetricTree {
    let edges = (1..n)
        .map(|i| (rng.gen_range(0..i), i, length(rng)))
        .collect();
    MetricTree::new((0..n).collect(), edges).expect("generated graph is a tree")
}

/// Random measure with 1..=max_atoms atoms sampled from the space.
pub fn random_measure<S, R>(rng: &mut R, space: S, max_atoms: usize) -> FiniteMeasure<S>
where
    S: Space + PointSampler,
    R: Rng,
{
    let k = rng.gen_range(1..=max_atoms.max(1));
    let mut atoms: Vec<(S::Point, f64)> = (0..k)
        .map(|_| (space.sample_point(rng), rng.gen_range(0.05..1.0)))
        .collect();
    let sum: f64 = atoms.iter().map(|(_, w)| *w).sum();
    for (_, w) in atoms.iter_mut() {
        *w /= sum;
    }
    FiniteMeasure::new(space, atoms).expect("generated atoms are valid")
}

pub fn random_tree_measure<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_atoms: usize,
) -> FiniteMeasure<MetricTree> {
    let tree = random_tree(rng, max_vertices);
    random_measure(rng, tree, max_atoms)
}

pub fn random_euclidean_measure<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_atoms: usize,
) -> FiniteMeasure<Euclidean> {
    random_measure(rng, Euclidean::new(dim), max_atoms)
}

pub fn random_hyperboloid_measure<R: Rng>(
    rng: &mut R,
    dim: usize,
    max_atoms: usize,
) -> FiniteMeasure<Hyperboloid> {
    random_measure(rng, Hyperboloid::new(dim), max_atoms)
}

/// Random finite mm-space realized by points in R^3, so the triangle
/// inequality holds to roundoff.
pub fn random_mm_space<R: Rng>(rng: &mut R, max_points: usize) -> FiniteMMSpace {
    let n = rng.gen_range(2..=max_points.max(2));
    let e = Euclidean::new(3);
    let pts: Vec<Vec<f64>> = (0..n).map(|_| e.sample_point(rng)).collect();
    let dist = pts
        .iter()
        .map(|p| pts.iter().map(|q| e.distance(p, q)).collect())
        .collect();
    let mut weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
    let sum: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= sum;
    }
    FiniteMMSpace::new(dist, weights).expect("euclidean configuration is a metric")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_produce_valid_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let t = random_tree(&mut rng, 8);
            assert!(t.edge_count() + 1 == t.vertex_count());
            let m = random_tree_measure(&mut rng, 8, 6);
            assert!(!m.is_empty());
            let me = random_euclidean_measure(&mut rng, 4, 6);
            let sum: f64 = me.atoms().iter().map(|(_, w)| w).sum();
            assert!((sum - 1.0).abs() < 1e-12);
            let mh = random_hyperboloid_measure(&mut rng, 2, 5);
            assert!(mh.support_diameter() <= 3.0 + 1e-9);
            let x = random_mm_space(&mut rng, 10);
            assert!(x.len() <= 10);
        }
    }
}

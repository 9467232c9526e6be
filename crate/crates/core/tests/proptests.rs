//! Property tests with shrinking for the core kernels.

use proptest::prelude::*;

use catzero::means::inductive_mean;
use catzero::measures::FiniteMeasure;
use catzero::mm::{partial_diameter, separation_distance, FiniteMMSpace};
use catzero::spaces::{
    cat0_midpoint_slack, geodesic_convexity_slack, Euclidean, Hyperboloid, MetricTree, Space,
    TreePoint,
};

fn caterpillar() -> MetricTree {
    MetricTree::new(
        vec![0, 1, 2, 3, 4, 5],
        vec![
            (0, 1, 0.75),
            (1, 2, 1.25),
            (1, 3, 0.5),
            (2, 4, 2.0),
            (2, 5, 0.25),
        ],
    )
    .unwrap()
}

prop_compose! {
    fn tree_point()(edge in 0usize..5, frac in 0.0f64..=1.0) -> TreePoint {
        let lengths = [0.75, 1.25, 0.5, 2.0, 0.25];
        TreePoint { edge, offset: frac * lengths[edge] }
    }
}

prop_compose! {
    fn h2_point()(x in -1.2f64..1.2, y in -1.2f64..1.2) -> Vec<f64> {
        vec![x, y]
    }
}

proptest! {
    #[test]
    fn tree_metric_and_cat0(p in tree_point(), q in tree_point(), z in tree_point(), t in 0.0f64..=1.0) {
        let tree = caterpillar();
        let d = tree.distance(&p, &q);
        prop_assert!(d >= 0.0);
        prop_assert_eq!(d, tree.distance(&q, &p));
        let via = tree.distance(&p, &z) + tree.distance(&z, &q);
        prop_assert!(via >= d - 1e-9);
        let g = tree.geodesic(&p, &q, t);
        prop_assert!((tree.distance(&p, &g) - t * d).abs() <= 1e-9 * d.max(1.0));
        prop_assert!(cat0_midpoint_slack(&tree, &z, &p, &q) >= -1e-9);
    }

    #[test]
    fn tree_convexity(p in tree_point(), q in tree_point(), a in tree_point(), b in tree_point(), t in 0.0f64..=1.0) {
        let tree = caterpillar();
        prop_assert!(geodesic_convexity_slack(&tree, (&p, &q), (&a, &b), t) >= -1e-9);
    }

    #[test]
    fn hyperboloid_metric_and_cat0(ps in h2_point(), qs in h2_point(), zs in h2_point(), t in 0.0f64..=1.0) {
        let h = Hyperboloid::new(2);
        let p = h.lift(&ps).unwrap();
        let q = h.lift(&qs).unwrap();
        let z = h.lift(&zs).unwrap();
        let d = h.distance(&p, &q);
        prop_assert_eq!(d, h.distance(&q, &p));
        prop_assert!(h.distance(&p, &z) + h.distance(&z, &q) >= d - 1e-9);
        let g = h.geodesic(&p, &q, t);
        prop_assert!((h.distance(&p, &g) - t * d).abs() <= 1e-9 * d.max(1.0));
        prop_assert!(cat0_midpoint_slack(&h, &z, &p, &q) >= -1e-9);
    }

    #[test]
    fn euclidean_midpoint_slack_is_zero(
        x in prop::collection::vec(-5.0f64..5.0, 3),
        y in prop::collection::vec(-5.0f64..5.0, 3),
        z in prop::collection::vec(-5.0f64..5.0, 3),
    ) {
        let e = Euclidean::new(3);
        let slack = cat0_midpoint_slack(&e, &x, &y, &z);
        prop_assert!(slack.abs() <= 1e-10, "Hilbert slack {}", slack);
    }

    #[test]
    fn inductive_mean_stays_in_range(values in prop::collection::vec(-3.0f64..3.0, 1..32)) {
        let e = Euclidean::new(1);
        let pts: Vec<Vec<f64>> = values.iter().map(|&v| vec![v]).collect();
        let m = inductive_mean(&e, pts.iter()).unwrap();
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(m[0] >= lo - 1e-12 && m[0] <= hi + 1e-12);
    }

    #[test]
    fn measure_weights_renormalize(raw in prop::collection::vec(0.05f64..1.0, 1..12)) {
        let e = Euclidean::new(1);
        let sum: f64 = raw.iter().sum();
        let atoms: Vec<(Vec<f64>, f64)> = raw
            .iter()
            .enumerate()
            .map(|(i, w)| (vec![i as f64], w / sum))
            .collect();
        let m = FiniteMeasure::new(e, atoms).unwrap();
        let total: f64 = m.atoms().iter().map(|(_, w)| w).sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn partial_diameter_is_monotone_in_mass(
        coords in prop::collection::vec(-4.0f64..4.0, 2..8),
        raw_w in prop::collection::vec(0.1f64..1.0, 8),
        lo in 0.05f64..0.95,
        delta in 0.0f64..0.5,
    ) {
        let n = coords.len();
        let sum: f64 = raw_w[..n].iter().sum();
        let weights: Vec<f64> = raw_w[..n].iter().map(|w| w / sum).collect();
        let dist: Vec<Vec<f64>> = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        let x = FiniteMMSpace::new(dist, weights).unwrap();
        let hi = (lo + delta).min(1.0);
        let pd_lo = partial_diameter(&x, lo).unwrap();
        let pd_hi = partial_diameter(&x, hi).unwrap();
        prop_assert!(pd_lo <= pd_hi + 1e-15);
    }

    #[test]
    fn separation_is_monotone_in_thresholds(
        coords in prop::collection::vec(-4.0f64..4.0, 2..8),
        k1 in 0.05f64..0.5,
        bump in 0.0f64..0.4,
    ) {
        let n = coords.len();
        let weights = vec![1.0 / n as f64; n];
        let dist: Vec<Vec<f64>> = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        let x = FiniteMMSpace::new(dist, weights).unwrap();
        let small = separation_distance(&x, k1, k1).unwrap().value;
        let large = separation_distance(&x, k1 + bump, k1 + bump).unwrap().value;
        prop_assert!(large <= small + 1e-15);
    }
}

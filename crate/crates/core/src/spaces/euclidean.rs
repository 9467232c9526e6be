//! Flat R^m with the usual norm — the finite-dimensional Hilbert case.

use serde_json::json;

use crate::error::{Error, Result};
use crate::spaces::{assert_unit_interval, Space, TangentOps, TangentVector};

/// Euclidean space of a fixed dimension; points are coordinate vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Euclidean {
    dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Euclidean { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl Space for Euclidean {
    type Point = Vec<f64>;

    fn kind(&self) -> &'static str {
        "euclidean"
    }

    fn check_point(&self, p: &Self::Point) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::InvalidPoint(format!(
                "expected {} coordinates, got {}",
                self.dim,
                p.len()
            )));
        }
        if p.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        Ok(())
    }

    fn distance(&self, p: &Self::Point, q: &Self::Point) -> f64 {
        p.iter()
            .zip(q)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    fn geodesic(&self, p: &Self::Point, q: &Self::Point, t: f64) -> Self::Point {
        assert_unit_interval(t);
        if t == 0.0 {
            return p.clone();
        }
        if t == 1.0 {
            return q.clone();
        }
        p.iter().zip(q).map(|(a, b)| a + t * (b - a)).collect()
    }

    fn point_json(&self, p: &Self::Point) -> serde_json::Value {
        json!(p)
    }
}

impl TangentOps for Euclidean {
    fn log_map(&self, base: &Self::Point, target: &Self::Point) -> TangentVector<Self::Point> {
        TangentVector {
            base: base.clone(),
            components: base.iter().zip(target).map(|(a, b)| b - a).collect(),
        }
    }

    fn exp_map(&self, v: &TangentVector<Self::Point>) -> Self::Point {
        v.base.iter().zip(&v.components).map(|(a, c)| a + c).collect()
    }

    fn tangent_norm(&self, v: &TangentVector<Self::Point>) -> f64 {
        v.components.iter().map(|c| c * c).sum::<f64>().sqrt()
    }
}

//! The n-fold product of a base space with the l1 (sum) distance — the
//! domain of the inductive-mean map in the Lipschitz diagnostics.
//!
//! The l1 product of geodesic spaces is geodesic but not uniquely so; this
//! implementation follows the coordinatewise geodesic, which is constant
//! speed for the sum distance. The product is not CAT(0) even when the base
//! is, so it is excluded from the comparison-inequality test spaces.

use serde_json::json;

use crate::error::{Error, Result};
use crate::spaces::{assert_unit_interval, Space};

/// `n` copies of `base` with `d(x, y) = sum_i d(x_i, y_i)`.
#[derive(Debug, Clone)]
pub struct L1Product<S: Space> {
    base: S,
    copies: usize,
}

impl<S: Space> L1Product<S> {
    pub fn new(base: S, copies: usize) -> Self {
        assert!(copies >= 1, "a product needs at least one factor");
        L1Product { base, copies }
    }

    pub fn base(&self) -> &S {
        &self.base
    }

    pub fn copies(&self) -> usize {
        self.copies
    }
}

impl<S: Space> Space for L1Product<S> {
    type Point = Vec<S::Point>;

    fn kind(&self) -> &'static str {
        "l1-product"
    }

    fn check_point(&self, p: &Self::Point) -> Result<()> {
        if p.len() != self.copies {
            return Err(Error::InvalidPoint(format!(
                "expected {} factors, got {}",
                self.copies,
                p.len()
            )));
        }
        p.iter().try_for_each(|f| self.base.check_point(f))
    }

    fn distance(&self, p: &Self::Point, q: &Self::Point) -> f64 {
        p.iter()
            .zip(q)
            .map(|(a, b)| self.base.distance(a, b))
            .sum()
    }

    fn geodesic(&self, p: &Self::Point, q: &Self::Point, t: f64) -> Self::Point {
        assert_unit_interval(t);
        p.iter()
            .zip(q)
            .map(|(a, b)| self.base.geodesic(a, b, t))
            .collect()
    }

    fn same_point(&self, p: &Self::Point, q: &Self::Point) -> bool {
        p.len() == q.len()
            && p.iter().zip(q).all(|(a, b)| self.base.same_point(a, b))
    }

    fn point_json(&self, p: &Self::Point) -> serde_json::Value {
        json!(p.iter().map(|f| self.base.point_json(f)).collect::<Vec<_>>())
    }
}

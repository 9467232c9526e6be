//! The hyperboloid (Lorentz) model of m-dimensional hyperbolic space: the
//! upper sheet of `<x, x>_M = -1` in Minkowski space R^{m,1}, where
//! `<x, y>_M = -x_0 y_0 + sum_i x_i y_i`.
//!
//! The distance is `d(p, q) = arccosh(-<p, q>_M)`, evaluated through the
//! equivalent form `2 asinh(|p - q|_M / 2)`: the coordinate differences of
//! nearby points subtract exactly, where the inner product saturates at -1
//! and loses half the significant digits. Minkowski norms are clamped at 0
//! before the square root and every computed point is re-projected onto the
//! sheet; neither case is an error.

use serde_json::json;

use crate::error::{Error, Result};
use crate::spaces::{assert_unit_interval, Space, TangentOps, TangentVector};

const NORMALIZATION_TOL: f64 = 1e-9;

/// A point on the upper hyperboloid sheet: `m + 1` ambient coordinates with
/// `x_0 > 0` and `<x, x>_M = -1` (within `1e-9` at validation boundaries).
#[derive(Debug, Clone, PartialEq)]
pub struct HyperboloidPoint {
    coords: Vec<f64>,
}

impl HyperboloidPoint {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// Hyperbolic space of dimension `m` with curvature -1, in ambient
/// coordinates of length `m + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hyperboloid {
    dim: usize,
}

pub(crate) fn minkowski_dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = -a[0] * b[0];
    for i in 1..a.len() {
        s += a[i] * b[i];
    }
    s
}

impl Hyperboloid {
    pub fn new(dim: usize) -> Self {
        assert!(dim >= 1, "dimension must be at least 1");
        Hyperboloid { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The apex `(1, 0, ..., 0)`.
    pub fn origin(&self) -> HyperboloidPoint {
        let mut coords = vec![0.0; self.dim + 1];
        coords[0] = 1.0;
        HyperboloidPoint { coords }
    }

    /// Validates coordinates and returns the point.
    pub fn point(&self, coords: Vec<f64>) -> Result<HyperboloidPoint> {
        let p = HyperboloidPoint { coords };
        self.check_point(&p)?;
        Ok(p)
    }

    /// Lifts spatial coordinates onto the sheet by solving for `x_0`.
    pub fn lift(&self, spatial: &[f64]) -> Result<HyperboloidPoint> {
        if spatial.len() != self.dim {
            return Err(Error::InvalidPoint(format!(
                "expected {} spatial coordinates, got {}",
                self.dim,
                spatial.len()
            )));
        }
        let sq: f64 = spatial.iter().map(|x| x * x).sum();
        let mut coords = Vec::with_capacity(self.dim + 1);
        coords.push((1.0 + sq).sqrt());
        coords.extend_from_slice(spatial);
        Ok(HyperboloidPoint { coords })
    }

    /// Rescales onto the sheet; used after every exponential/geodesic step.
    fn project(&self, mut coords: Vec<f64>) -> HyperboloidPoint {
        let norm = -minkowski_dot(&coords, &coords);
        if norm > 0.0 {
            let scale = norm.sqrt();
            for c in coords.iter_mut() {
                *c /= scale;
            }
        }
        if coords[0] < 0.0 {
            for c in coords.iter_mut() {
                *c = -*c;
            }
        }
        HyperboloidPoint { coords }
    }

    fn assert_valid(&self, p: &HyperboloidPoint) {
        assert_eq!(
            p.coords.len(),
            self.dim + 1,
            "hyperboloid point has wrong ambient dimension"
        );
    }
}

impl Space for Hyperboloid {
    type Point = HyperboloidPoint;

    fn kind(&self) -> &'static str {
        "hyperboloid"
    }

    fn check_point(&self, p: &Self::Point) -> Result<()> {
        if p.coords.len() != self.dim + 1 {
            return Err(Error::InvalidPoint(format!(
                "expected {} ambient coordinates, got {}",
                self.dim + 1,
                p.coords.len()
            )));
        }
        if p.coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        if p.coords[0] <= 0.0 {
            return Err(Error::InvalidPoint(format!(
                "time coordinate must be positive, got {}",
                p.coords[0]
            )));
        }
        let norm = minkowski_dot(&p.coords, &p.coords);
        if (norm + 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::InvalidPoint(format!(
                "Minkowski norm {norm} is not -1 within {NORMALIZATION_TOL}"
            )));
        }
        Ok(())
    }

    fn distance(&self, p: &Self::Point, q: &Self::Point) -> f64 {
        self.assert_valid(p);
        self.assert_valid(q);
        // <p-q, p-q>_M = 2(-<p,q> - 1) is spacelike; clamp roundoff at 0
        let diff: Vec<f64> = p
            .coords
            .iter()
            .zip(&q.coords)
            .map(|(a, b)| a - b)
            .collect();
        let norm_sq = minkowski_dot(&diff, &diff).max(0.0);
        2.0 * (0.5 * norm_sq.sqrt()).asinh()
    }

    fn geodesic(&self, p: &Self::Point, q: &Self::Point, t: f64) -> Self::Point {
        assert_unit_interval(t);
        if t == 0.0 {
            return p.clone();
        }
        if t == 1.0 {
            return q.clone();
        }
        let d = self.distance(p, q);
        if d == 0.0 {
            return p.clone();
        }
        // unit tangent at p toward q: (q - cosh(d) p) / sinh(d)
        let (ch, sh) = (d.cosh(), d.sinh());
        let (cht, sht) = ((t * d).cosh(), (t * d).sinh());
        let coords = p
            .coords
            .iter()
            .zip(&q.coords)
            .map(|(pi, qi)| cht * pi + sht * (qi - ch * pi) / sh)
            .collect();
        self.project(coords)
    }

    fn point_json(&self, p: &Self::Point) -> serde_json::Value {
        json!(p.coords)
    }
}

impl TangentOps for Hyperboloid {
    fn log_map(&self, base: &Self::Point, target: &Self::Point) -> TangentVector<Self::Point> {
        self.assert_valid(base);
        self.assert_valid(target);
        let d = self.distance(base, target);
        if d == 0.0 {
            return TangentVector {
                base: base.clone(),
                components: vec![0.0; self.dim + 1],
            };
        }
        let ch = d.cosh();
        let scale = d / d.sinh();
        let components = base
            .coords
            .iter()
            .zip(&target.coords)
            .map(|(bi, ti)| scale * (ti - ch * bi))
            .collect();
        TangentVector {
            base: base.clone(),
            components,
        }
    }

    fn exp_map(&self, v: &TangentVector<Self::Point>) -> Self::Point {
        self.assert_valid(&v.base);
        let theta = self.tangent_norm(v);
        if theta == 0.0 {
            return v.base.clone();
        }
        let (ch, sh) = (theta.cosh(), theta.sinh());
        let coords = v
            .base
            .coords
            .iter()
            .zip(&v.components)
            .map(|(bi, ci)| ch * bi + sh * ci / theta)
            .collect();
        self.project(coords)
    }

    fn tangent_norm(&self, v: &TangentVector<Self::Point>) -> f64 {
        minkowski_dot(&v.components, &v.components).max(0.0).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_along_a_coordinate_geodesic() {
        let h = Hyperboloid::new(2);
        let p = h.origin();
        let q = h
            .point(vec![1.0f64.cosh(), 1.0f64.sinh(), 0.0])
            .unwrap();
        assert!((h.distance(&p, &q) - 1.0).abs() < 1e-12);
        assert_eq!(h.distance(&p, &p), 0.0);
    }

    #[test]
    fn log_map_of_coordinate_geodesic_is_unit_vector() {
        let h = Hyperboloid::new(2);
        let p = h.origin();
        let q = h
            .point(vec![1.0f64.cosh(), 1.0f64.sinh(), 0.0])
            .unwrap();
        let v = h.log_map(&p, &q);
        assert!((v.components[0]).abs() < 1e-12);
        assert!((v.components[1] - 1.0).abs() < 1e-12);
        assert!((v.components[2]).abs() < 1e-12);
        // round trip
        let back = h.exp_map(&v);
        for (a, b) in back.coords().iter().zip(q.coords()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn geodesic_parameterization_is_constant_speed() {
        let h = Hyperboloid::new(2);
        let p = h.lift(&[0.3, -0.4]).unwrap();
        let q = h.lift(&[-1.2, 0.8]).unwrap();
        let d = h.distance(&p, &q);
        let tol = 1e-9 * d.max(1.0);
        for &t in &[0.0, 0.25, 0.5, 0.75, 1.0] {
            let g = h.geodesic(&p, &q, t);
            assert!((h.distance(&p, &g) - t * d).abs() < tol);
            assert!((h.distance(&g, &q) - (1.0 - t) * d).abs() < tol);
        }
    }

    #[test]
    fn clamps_near_unit_products() {
        let h = Hyperboloid::new(2);
        // a hair off the sheet but within validation tolerance
        let p = h.point(vec![1.0 + 4e-10, 0.0, 0.0]).unwrap();
        let d = h.distance(&p, &p);
        assert!((0.0..1e-4).contains(&d));
    }

    #[test]
    fn rejects_off_sheet_points() {
        let h = Hyperboloid::new(2);
        assert!(h.point(vec![1.0, 1.0, 0.0]).is_err());
        assert!(h.point(vec![-1.0, 0.0, 0.0]).is_err());
        assert!(h.point(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn lift_lands_on_sheet() {
        let h = Hyperboloid::new(3);
        let p = h.lift(&[0.5, -2.0, 1.5]).unwrap();
        assert!(h.check_point(&p).is_ok());
    }
}

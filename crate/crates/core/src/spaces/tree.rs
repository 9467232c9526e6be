//! Finite R-trees: connected acyclic graphs with positive edge lengths,
//! carrying the path metric. Points live on edges and are addressed by an
//! edge index plus an offset measured from the edge's first endpoint.
//!
//! The geodesic between two points is the unique simple path between them,
//! computed combinatorially (partial edges at both ends plus a vertex path in
//! the middle), so distances are exact sums of edge terms with no search.

use std::collections::HashMap;

use serde_json::json;

use crate::error::{Error, Result};
use crate::spaces::{assert_unit_interval, Space};

/// A point of a [`MetricTree`]: `offset` is measured from the first endpoint
/// of edge `edge` and must lie in `[0, length(edge)]`.
///
/// Points at offset `0` or at the full edge length denote vertices and admit
/// several representations; [`MetricTree::canonicalize`] maps them to a
/// deterministic vertex-anchored form (the smallest incident edge index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreePoint {
    pub edge: usize,
    pub offset: f64,
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    u: usize,
    v: usize,
    length: f64,
}

/// A finite metric tree.
#[derive(Debug, Clone)]
pub struct MetricTree {
    vertex_ids: Vec<usize>,
    id_to_idx: HashMap<usize, usize>,
    edges: Vec<Edge>,
    /// Per vertex: (edge index, neighbor vertex index).
    adj: Vec<Vec<(usize, usize)>>,
    /// `dvert[a][b]` is the path length between vertices `a` and `b`.
    dvert: Vec<Vec<f64>>,
    /// `next_hop[b][a]` is `(next vertex, edge index)` on the path `a -> b`.
    next_hop: Vec<Vec<(usize, usize)>>,
    /// Smallest incident edge index per vertex (canonical anchor).
    min_edge: Vec<usize>,
    /// `u_side[e][w]` is true iff vertex `w` lies in the component of the
    /// first endpoint of edge `e` once that edge is removed.
    u_side: Vec<Vec<bool>>,
}

impl MetricTree {
    /// Builds a tree from vertex ids and `(u, v, length)` edges.
    ///
    /// Fails unless the ids are unique, every edge references known ids with
    /// a strictly positive finite length, and the graph is connected and
    /// acyclic with at least one edge.
    pub fn new(vertices: Vec<usize>, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidTree(
                "a metric tree needs at least one edge".into(),
            ));
        }
        let mut id_to_idx = HashMap::with_capacity(vertices.len());
        for (i, &id) in vertices.iter().enumerate() {
            if id_to_idx.insert(id, i).is_some() {
                return Err(Error::InvalidTree(format!("duplicate vertex id {id}")));
            }
        }
        if edges.len() + 1 != vertices.len() {
            return Err(Error::InvalidTree(format!(
                "{} vertices and {} edges cannot form a tree",
                vertices.len(),
                edges.len()
            )));
        }
        let mut internal = Vec::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); vertices.len()];
        for (eidx, &(u, v, length)) in edges.iter().enumerate() {
            let ui = *id_to_idx
                .get(&u)
                .ok_or_else(|| Error::InvalidTree(format!("edge references unknown vertex {u}")))?;
            let vi = *id_to_idx
                .get(&v)
                .ok_or_else(|| Error::InvalidTree(format!("edge references unknown vertex {v}")))?;
            if ui == vi {
                return Err(Error::InvalidTree(format!("self-loop at vertex {u}")));
            }
            if !length.is_finite() || length <= 0.0 {
                return Err(Error::InvalidTree(format!(
                    "edge ({u}, {v}) has nonpositive length {length}"
                )));
            }
            internal.push(Edge {
                u: ui,
                v: vi,
                length,
            });
            adj[ui].push((eidx, vi));
            adj[vi].push((eidx, ui));
        }

        let n = vertices.len();
        let mut dvert = vec![vec![0.0; n]; n];
        let mut next_hop = vec![vec![(usize::MAX, usize::MAX); n]; n];
        // DFS from every root; dist accumulates root-outward so both the
        // distance table and the hop-toward-root table come from one pass.
        let mut seen = 0usize;
        for root in 0..n {
            let mut visited = vec![false; n];
            let mut stack = vec![(root, 0.0)];
            visited[root] = true;
            while let Some((cur, dist)) = stack.pop() {
                seen += 1;
                for &(eidx, nbr) in &adj[cur] {
                    if !visited[nbr] {
                        visited[nbr] = true;
                        dvert[root][nbr] = dist + internal[eidx].length;
                        next_hop[root][nbr] = (cur, eidx);
                        stack.push((nbr, dvert[root][nbr]));
                    }
                }
            }
        }
        if seen != n * n {
            return Err(Error::InvalidTree("graph is not connected".into()));
        }
        // symmetrize so d(a, b) and d(b, a) are the same bits
        for a in 0..n {
            let (upper, lower) = dvert.split_at_mut(a + 1);
            for (row, &value) in lower.iter_mut().zip(&upper[a][a + 1..]) {
                row[a] = value;
            }
        }

        let min_edge = adj
            .iter()
            .map(|inc| inc.iter().map(|&(e, _)| e).min().expect("no isolated vertices"))
            .collect();

        let mut u_side = Vec::with_capacity(internal.len());
        for (eidx, e) in internal.iter().enumerate() {
            let mut side = vec![false; n];
            let mut stack = vec![e.u];
            side[e.u] = true;
            while let Some(cur) = stack.pop() {
                for &(ei, nbr) in &adj[cur] {
                    if ei != eidx && !side[nbr] {
                        side[nbr] = true;
                        stack.push(nbr);
                    }
                }
            }
            u_side.push(side);
        }

        Ok(MetricTree {
            vertex_ids: vertices,
            id_to_idx,
            edges: internal,
            adj,
            dvert,
            next_hop,
            min_edge,
            u_side,
        })
    }

    /// The tripod: three segments of the given lengths glued at a common
    /// origin. Vertex 0 is the origin, vertices 1..=3 the leaf tips, and
    /// edge `i - 1` is the branch carrying leaf `i`.
    pub fn tripod(legs: [f64; 3]) -> Self {
        MetricTree::new(
            vec![0, 1, 2, 3],
            vec![(0, 1, legs[0]), (0, 2, legs[1]), (0, 3, legs[2])],
        )
        .expect("tripod is a valid tree")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_ids(&self) -> &[usize] {
        &self.vertex_ids
    }

    /// Endpoint ids and length of an edge, in construction order.
    pub fn edge(&self, idx: usize) -> (usize, usize, f64) {
        let e = &self.edges[idx];
        (self.vertex_ids[e.u], self.vertex_ids[e.v], e.length)
    }

    pub fn edge_length(&self, idx: usize) -> f64 {
        self.edges[idx].length
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Validated point on edge `edge` at `offset` from its first endpoint.
    pub fn point(&self, edge: usize, offset: f64) -> Result<TreePoint> {
        let p = TreePoint { edge, offset };
        self.check_point(&p)?;
        Ok(self.canonicalize(&p))
    }

    /// Canonical point at the vertex with external id `id`.
    pub fn vertex_point(&self, id: usize) -> Result<TreePoint> {
        let idx = *self
            .id_to_idx
            .get(&id)
            .ok_or_else(|| Error::InvalidPoint(format!("unknown vertex id {id}")))?;
        Ok(self.vertex_anchor(idx))
    }

    /// Resolves the measure-file edge convention `{edge: [a, b], offset}`:
    /// the offset is measured from `a`, whichever way the edge was stored.
    pub fn point_between(&self, a: usize, b: usize, offset: f64) -> Result<TreePoint> {
        let (idx, reversed) = self
            .find_edge(a, b)
            .ok_or_else(|| Error::InvalidPoint(format!("no edge between {a} and {b}")))?;
        let len = self.edges[idx].length;
        let off = if reversed { len - offset } else { offset };
        self.point(idx, off)
    }

    /// Edge index between external ids `a` and `b`, and whether it is stored
    /// as `(b, a)`.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<(usize, bool)> {
        let ai = *self.id_to_idx.get(&a)?;
        let bi = *self.id_to_idx.get(&b)?;
        for &(eidx, nbr) in &self.adj[ai] {
            if nbr == bi {
                return Some((eidx, self.edges[eidx].u == bi));
            }
        }
        None
    }

    /// Normalizes endpoint offsets to the vertex-anchored canonical form.
    pub fn canonicalize(&self, p: &TreePoint) -> TreePoint {
        let e = &self.edges[p.edge];
        if p.offset == 0.0 {
            self.vertex_anchor(e.u)
        } else if p.offset == e.length {
            self.vertex_anchor(e.v)
        } else {
            *p
        }
    }

    fn vertex_anchor(&self, w: usize) -> TreePoint {
        let eidx = self.min_edge[w];
        let e = &self.edges[eidx];
        TreePoint {
            edge: eidx,
            offset: if e.u == w { 0.0 } else { e.length },
        }
    }

    fn resolve(&self, p: &TreePoint) -> &Edge {
        assert!(
            p.edge < self.edges.len(),
            "tree point references unknown edge {}",
            p.edge
        );
        let e = &self.edges[p.edge];
        assert!(
            p.offset >= 0.0 && p.offset <= e.length,
            "tree point offset {} outside [0, {}]",
            p.offset,
            e.length
        );
        e
    }

    /// Distance from a point to an internal vertex index.
    pub(crate) fn point_vertex_distance(&self, p: &TreePoint, w: usize) -> f64 {
        let e = self.resolve(p);
        let via_u = p.offset + self.dvert[e.u][w];
        let via_v = (e.length - p.offset) + self.dvert[e.v][w];
        via_u.min(via_v)
    }

    /// True iff vertex `w` is on the first-endpoint side of edge `eidx`.
    pub(crate) fn on_u_side(&self, eidx: usize, w: usize) -> bool {
        self.u_side[eidx][w]
    }

    pub(crate) fn edge_raw(&self, idx: usize) -> (usize, usize, f64) {
        let e = &self.edges[idx];
        (e.u, e.v, e.length)
    }

    /// Best route between points on distinct edges: total distance, exit
    /// vertex from `p`'s edge, entry vertex into `q`'s edge, and the two
    /// partial-edge costs.
    fn route(&self, p: &TreePoint, q: &TreePoint) -> (f64, usize, usize, f64, f64) {
        let ep = self.resolve(p);
        let eq = self.resolve(q);
        let exits = [(ep.u, p.offset), (ep.v, ep.length - p.offset)];
        let entries = [(eq.u, q.offset), (eq.v, eq.length - q.offset)];
        let mut best = (f64::INFINITY, 0, 0, 0.0, 0.0);
        for &(a, ca) in &exits {
            for &(b, cb) in &entries {
                // (ca + cb) first: commutative, so swapping p and q yields
                // the same candidate bits and distance stays exactly
                // symmetric
                let d = (ca + cb) + self.dvert[a][b];
                if d < best.0 {
                    best = (d, a, b, ca, cb);
                }
            }
        }
        best
    }
}

impl Space for MetricTree {
    type Point = TreePoint;

    fn kind(&self) -> &'static str {
        "tree"
    }

    fn check_point(&self, p: &Self::Point) -> Result<()> {
        if p.edge >= self.edges.len() {
            return Err(Error::InvalidPoint(format!(
                "edge index {} out of range (tree has {} edges)",
                p.edge,
                self.edges.len()
            )));
        }
        let len = self.edges[p.edge].length;
        if !p.offset.is_finite() || p.offset < 0.0 || p.offset > len {
            return Err(Error::InvalidPoint(format!(
                "offset {} outside [0, {len}] on edge {}",
                p.offset, p.edge
            )));
        }
        Ok(())
    }

    fn distance(&self, p: &Self::Point, q: &Self::Point) -> f64 {
        if p.edge == q.edge {
            self.resolve(p);
            self.resolve(q);
            return (p.offset - q.offset).abs();
        }
        self.route(p, q).0
    }

    fn geodesic(&self, p: &Self::Point, q: &Self::Point, t: f64) -> Self::Point {
        assert_unit_interval(t);
        if p.edge == q.edge {
            let e = self.resolve(p);
            self.resolve(q);
            let off = (p.offset + t * (q.offset - p.offset)).clamp(0.0, e.length);
            return self.canonicalize(&TreePoint {
                edge: p.edge,
                offset: off,
            });
        }
        let (d, exit, entry, cp, cq) = self.route(p, q);
        if d == 0.0 {
            return self.canonicalize(p);
        }
        let mut s = t * d;
        let ep = &self.edges[p.edge];
        if s <= cp {
            let off = if exit == ep.u {
                p.offset - s
            } else {
                p.offset + s
            };
            return self.canonicalize(&TreePoint {
                edge: p.edge,
                offset: off.clamp(0.0, ep.length),
            });
        }
        s -= cp;
        let mut cur = exit;
        while cur != entry {
            let (nxt, eidx) = self.next_hop[entry][cur];
            let e = &self.edges[eidx];
            if s <= e.length {
                let off = if e.u == cur { s } else { e.length - s };
                return self.canonicalize(&TreePoint {
                    edge: eidx,
                    offset: off.clamp(0.0, e.length),
                });
            }
            s -= e.length;
            cur = nxt;
        }
        let eq = &self.edges[q.edge];
        let off = if entry == eq.u {
            s.min(q.offset)
        } else {
            (eq.length - s).max(q.offset)
        };
        let _ = cq;
        self.canonicalize(&TreePoint {
            edge: q.edge,
            offset: off,
        })
    }

    fn same_point(&self, p: &Self::Point, q: &Self::Point) -> bool {
        let a = self.canonicalize(p);
        let b = self.canonicalize(q);
        a.edge == b.edge && a.offset == b.offset
    }

    fn point_json(&self, p: &Self::Point) -> serde_json::Value {
        let (u, v, _) = self.edge(p.edge);
        json!({ "edge": [u, v], "offset": p.offset })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tripod() -> MetricTree {
        MetricTree::tripod([1.0, 1.0, 1.0])
    }

    #[test]
    fn rejects_non_trees() {
        // cycle
        let r = MetricTree::new(
            vec![0, 1, 2],
            vec![(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)],
        );
        assert!(matches!(r, Err(Error::InvalidTree(_))));
        // disconnected (duplicate edge keeps the count right)
        let r = MetricTree::new(
            vec![0, 1, 2, 3],
            vec![(0, 1, 1.0), (0, 1, 2.0), (2, 3, 1.0)],
        );
        assert!(matches!(r, Err(Error::InvalidTree(_))));
        // zero-length edge
        let r = MetricTree::new(vec![0, 1], vec![(0, 1, 0.0)]);
        assert!(matches!(r, Err(Error::InvalidTree(_))));
        // duplicate vertex id
        let r = MetricTree::new(vec![0, 0], vec![(0, 0, 1.0)]);
        assert!(matches!(r, Err(Error::InvalidTree(_))));
    }

    #[test]
    fn leaf_to_leaf_distance_passes_through_origin() {
        let t = tripod();
        let p = TreePoint { edge: 0, offset: 1.0 };
        let q = TreePoint { edge: 1, offset: 1.0 };
        assert_eq!(t.distance(&p, &q), 2.0);
        assert_eq!(t.distance(&p, &p), 0.0);
    }

    #[test]
    fn midpoint_of_leaves_is_origin() {
        let t = tripod();
        let p = TreePoint { edge: 0, offset: 1.0 };
        let q = TreePoint { edge: 1, offset: 1.0 };
        let mid = t.geodesic(&p, &q, 0.5);
        let origin = t.vertex_point(0).unwrap();
        assert!(t.same_point(&mid, &origin));
        assert_eq!(t.distance(&mid, &p), 1.0);
    }

    #[test]
    fn geodesic_endpoints() {
        let t = tripod();
        let p = TreePoint { edge: 0, offset: 0.25 };
        let q = TreePoint { edge: 2, offset: 0.75 };
        assert!(t.same_point(&t.geodesic(&p, &q, 0.0), &p));
        assert!(t.same_point(&t.geodesic(&p, &q, 1.0), &q));
        // quarter point: distance p -> q is 1.0, so t = 0.25 sits at the origin
        let quarter = t.geodesic(&p, &q, 0.25);
        assert!(t.same_point(&quarter, &t.vertex_point(0).unwrap()));
    }

    #[test]
    fn canonical_vertex_forms_compare_equal() {
        let t = tripod();
        // the origin seen from each branch
        let a = TreePoint { edge: 0, offset: 0.0 };
        let b = TreePoint { edge: 1, offset: 0.0 };
        let c = TreePoint { edge: 2, offset: 0.0 };
        assert!(t.same_point(&a, &b));
        assert!(t.same_point(&b, &c));
        assert_eq!(t.canonicalize(&b).edge, 0);
        // a full-length offset is the leaf vertex
        let leaf = TreePoint { edge: 1, offset: 1.0 };
        assert!(t.same_point(&leaf, &t.vertex_point(2).unwrap()));
    }

    #[test]
    fn check_point_rejects_garbage() {
        let t = tripod();
        assert!(t.check_point(&TreePoint { edge: 9, offset: 0.0 }).is_err());
        assert!(t.check_point(&TreePoint { edge: 0, offset: -0.1 }).is_err());
        assert!(t.check_point(&TreePoint { edge: 0, offset: 1.1 }).is_err());
        assert!(t.check_point(&TreePoint { edge: 0, offset: f64::NAN }).is_err());
    }

    #[test]
    #[should_panic(expected = "unknown edge")]
    fn distance_panics_on_unknown_edge() {
        let t = tripod();
        let bad = TreePoint { edge: 7, offset: 0.5 };
        let p = TreePoint { edge: 0, offset: 0.5 };
        let _ = t.distance(&bad, &p);
    }

    #[test]
    #[should_panic(expected = "geodesic parameter")]
    fn geodesic_panics_outside_unit_interval() {
        let t = tripod();
        let p = TreePoint { edge: 0, offset: 0.5 };
        let q = TreePoint { edge: 1, offset: 0.5 };
        let _ = t.geodesic(&p, &q, 1.5);
    }

    #[test]
    fn reversed_edge_lookup_flips_offset() {
        let t = tripod();
        let p = t.point_between(1, 0, 0.25).unwrap();
        // offset measured from vertex 1 equals 0.75 from the origin
        assert!((p.offset - 0.75).abs() < 1e-15);
        assert_eq!(p.edge, 0);
        assert!(t.point_between(1, 2, 0.5).is_err());
    }

    #[test]
    fn caterpillar_distances() {
        // 0 -1- 1 -2- 2 -0.5- 3 with a twig 1 -0.25- 4
        let t = MetricTree::new(
            vec![0, 1, 2, 3, 4],
            vec![(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5), (1, 4, 0.25)],
        )
        .unwrap();
        let p = TreePoint { edge: 0, offset: 0.5 }; // midway 0-1
        let q = TreePoint { edge: 3, offset: 0.25 }; // at vertex 4
        assert_eq!(t.distance(&p, &q), 0.75);
        let r = TreePoint { edge: 2, offset: 0.5 }; // at vertex 3
        assert_eq!(t.distance(&q, &r), 0.25 + 2.0 + 0.5);
        let g = t.geodesic(&q, &r, 0.5); // 1.375 in: past vertex 1, 1.125 along edge 1-2
        assert_eq!(g.edge, 1);
        assert!((g.offset - 1.125).abs() < 1e-15);
    }
}

//! Directed Θ₆ graphs: construction, oracles and JSON interchange.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::Bounds;
use crate::hexgeom::{
    cone_of, euclid_bounds, hex_norm_in_cone, triangle_of, ConeIndex, Dir, GeometryError, Point,
};
use crate::pointset::{PointSet, PointSetError};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(usize),
    #[error(transparent)]
    InvalidPointSet(#[from] PointSetError),
    #[error("malformed graph document: {0}")]
    Malformed(String),
}

#[derive(Debug)]
pub struct Edge {
    pub target: usize,
    pub cone: ConeIndex,
    pub euclid: Bounds,
    hex: OnceLock<Scalar>,
}

#[derive(Debug)]
pub struct Theta6Graph {
    points: PointSet,
    out: Vec<[Option<Edge>; 6]>,
}

/// Minimum-by-key segment tree over slots `0..n`.
struct MinTree {
    size: usize,
    nodes: Vec<Option<usize>>,
}

impl MinTree {
    fn new(n: usize) -> Self {
        let size = n.next_power_of_two().max(1);
        Self { size, nodes: vec![None; 2 * size] }
    }

    fn better(cmp: &impl Fn(usize, usize) -> Ordering, a: Option<usize>, b: Option<usize>) -> Option<usize> {
        match (a, b) {
            (Some(x), Some(y)) => Some(if cmp(y, x) == Ordering::Less { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        }
    }

    fn insert(&mut self, slot: usize, item: usize, cmp: &impl Fn(usize, usize) -> Ordering) {
        let mut i = slot + self.size;
        self.nodes[i] = Some(item);
        while i > 1 {
            i /= 2;
            self.nodes[i] = Self::better(cmp, self.nodes[2 * i], self.nodes[2 * i + 1]);
        }
    }

    /// Best item among slots `from..size`.
    fn query_suffix(&self, from: usize, cmp: &impl Fn(usize, usize) -> Ordering) -> Option<usize> {
        let mut best = None;
        let mut l = from + self.size;
        let mut r = 2 * self.size;
        while l < r {
            if l & 1 == 1 {
                best = Self::better(cmp, best, self.nodes[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                best = Self::better(cmp, best, self.nodes[r]);
            }
            l /= 2;
            r /= 2;
        }
        best
    }
}

/// For every point, the point of `int(C^cone)` minimizing the bisector form.
///
/// With `a`, `b` the two inward side normals, `v ∈ int(C_u^i)` iff
/// `a·v > a·u` and `b·v > b·u`, and the hex distance is proportional to
/// `(a + b)·(v − u)`. Sweeping by decreasing `a` and querying the suffix of
/// `b`-ranks answers all points in `O(n log n)`.
fn nearest_in_cone(points: &[Point], cone: ConeIndex) -> Vec<Option<usize>> {
    let n = points.len();
    let fa: &Dir = cone.first_normal();
    let fb: &Dir = cone.second_normal();
    let fs: &Dir = cone.bisector();
    let mut by_a: Vec<usize> = (0..n).collect();
    by_a.sort_by(|&p, &q| fa.cmp_points(&points[q], &points[p]));
    let mut by_b: Vec<usize> = (0..n).collect();
    by_b.sort_by(|&p, &q| fb.cmp_points(&points[p], &points[q]));
    let mut rank_b = vec![0; n];
    for (r, &p) in by_b.iter().enumerate() {
        rank_b[p] = r;
    }
    let cmp = |x: usize, y: usize| fs.cmp_points(&points[x], &points[y]);
    let mut tree = MinTree::new(n);
    let mut result = vec![None; n];
    for &u in &by_a {
        result[u] = tree.query_suffix(rank_b[u] + 1, &cmp);
        tree.insert(rank_b[u], u, &cmp);
    }
    result
}

impl Theta6Graph {
    pub fn build(points: PointSet) -> Self {
        let pts = points.points();
        let mut out: Vec<[Option<Edge>; 6]> = (0..pts.len()).map(|_| Default::default()).collect();
        for cone in ConeIndex::all() {
            for (u, target) in nearest_in_cone(pts, cone).into_iter().enumerate() {
                if let Some(v) = target {
                    out[u][cone.value()] = Some(Edge {
                        target: v,
                        cone,
                        euclid: euclid_bounds(&pts[v], &pts[u]),
                        hex: OnceLock::new(),
                    });
                }
            }
        }
        Self { points, out }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn point(&self, u: usize) -> &Point {
        &self.points[u]
    }

    pub fn check_vertex(&self, u: usize) -> Result<(), GraphError> {
        if u < self.len() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(u))
        }
    }

    pub fn out_edge(&self, u: usize, cone: ConeIndex) -> Result<Option<usize>, GraphError> {
        self.check_vertex(u)?;
        Ok(self.out[u][cone.value()].as_ref().map(|e| e.target))
    }

    pub fn edge(&self, u: usize, cone: ConeIndex) -> Option<&Edge> {
        self.out.get(u)?[cone.value()].as_ref()
    }

    pub fn out_edges(&self, u: usize) -> impl Iterator<Item = &Edge> {
        self.out[u].iter().flatten()
    }

    /// Cached exact hex length of the edge leaving `u` in `cone`.
    pub fn hex_len(&self, u: usize, cone: ConeIndex) -> Option<&Scalar> {
        let e = self.edge(u, cone)?;
        Some(e.hex.get_or_init(|| {
            hex_norm_in_cone(&(self.point(e.target) - self.point(u)), cone)
        }))
    }

    /// Every edge as `(from, to, cone)`, ordered by source then cone.
    pub fn edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.iter().flatten().map(move |e| (u, e)))
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges().map(|(u, e)| (u, e.target)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn to_json(&self) -> GraphDocument {
        GraphDocument {
            points: self
                .points
                .iter()
                .map(|p| [p.x().to_string(), p.y().to_string()])
                .collect(),
            edges: self
                .edges()
                .map(|(u, e)| EdgeDocument {
                    from: u,
                    to: e.target,
                    cone: e.cone,
                    hex_len: self.hex_len(u, e.cone).expect("edge exists").to_string(),
                    euclid_len: e.euclid.midpoint(),
                })
                .collect(),
        }
    }

    /// Rebuilds the graph from a document's points and checks its edge list.
    pub fn from_json(doc: &GraphDocument) -> Result<Self, GraphError> {
        let mut pts = Vec::with_capacity(doc.points.len());
        for (i, [x, y]) in doc.points.iter().enumerate() {
            let parse = |s: &str| {
                s.parse::<Scalar>()
                    .map_err(|e| GraphError::Malformed(format!("point {i}: {e}")))
            };
            pts.push(Point::new(parse(x)?, parse(y)?));
        }
        let graph = Self::build(PointSet::new(pts)?);
        let listed: BTreeSet<(usize, usize)> = doc.edges.iter().map(|e| (e.from, e.to)).collect();
        if listed != graph.edge_set() || listed.len() != doc.edges.len() {
            return Err(GraphError::Malformed(
                "edge list does not match the Theta-6 graph of the points".into(),
            ));
        }
        Ok(graph)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub points: Vec<[String; 2]>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeDocument {
    pub from: usize,
    pub to: usize,
    pub cone: ConeIndex,
    pub hex_len: String,
    pub euclid_len: f64,
}

/// No point of `P` lies strictly inside `∇_u^v`.
pub fn empty_triangle_oracle(points: &PointSet, u: usize, v: usize) -> Result<bool, GeometryError> {
    let tri = triangle_of(&points[u], &points[v])?;
    Ok(points
        .iter()
        .enumerate()
        .all(|(w, p)| w == u || w == v || !tri.contains_interior(p)))
}

/// Edge set of all pairs whose triangle is empty, in `O(n³)`.
pub fn edges_by_empty_triangles(points: &PointSet) -> Result<BTreeSet<(usize, usize)>, GeometryError> {
    let mut edges = BTreeSet::new();
    for u in 0..points.len() {
        for v in 0..points.len() {
            if u != v && empty_triangle_oracle(points, u, v)? {
                edges.insert((u, v));
            }
        }
    }
    Ok(edges)
}

/// Edge set from the closest bisector projection per cone, all exact.
pub fn edges_by_bisector_projection(points: &PointSet) -> Result<BTreeSet<(usize, usize)>, GeometryError> {
    let mut edges = BTreeSet::new();
    for (u, pu) in points.iter().enumerate() {
        let mut best: [Option<(Scalar, usize)>; 6] = Default::default();
        for (v, pv) in points.iter().enumerate() {
            if u == v {
                continue;
            }
            let cone = cone_of(pu, pv)?;
            let proj = cone.bisector().eval(&(pv - pu));
            let slot = &mut best[cone.value()];
            if slot.as_ref().is_none_or(|(b, _)| proj < *b) {
                *slot = Some((proj, v));
            }
        }
        edges.extend(best.into_iter().flatten().map(|(_, v)| (u, v)));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(text: &str) -> PointSet {
        PointSet::from_text(text).unwrap()
    }

    #[test]
    fn two_points() {
        // (1, -1/5) lies in C^1 of the origin
        let g = Theta6Graph::build(set("0 0\n1 -1/5\n"));
        assert_eq!(g.out_edge(0, ConeIndex::new(1)).unwrap(), Some(1));
        assert_eq!(g.out_edge(1, ConeIndex::new(4)).unwrap(), Some(0));
        assert_eq!(g.out_edge(0, ConeIndex::new(0)).unwrap(), None);
        assert_eq!(g.edge_count(), 2);
        assert!(matches!(g.out_edge(2, ConeIndex::new(0)), Err(GraphError::UnknownVertex(2))));
    }

    #[test]
    fn oracle_examples() {
        let two = set("0 0\n1/10 -1\n");
        assert!(empty_triangle_oracle(&two, 0, 1).unwrap());
        // interior point by interpolation
        let three = set("0 0\n1/10 -1\n1/20 -1/2\n");
        assert!(!empty_triangle_oracle(&three, 0, 1).unwrap());
        // the far side is closed: boundary points are not interior
        let t = triangle_of(&two[0], &two[1]).unwrap();
        let boundary = Point::new("-1/20".parse().unwrap(), Scalar::from_int(-1));
        assert!(t.contains(&boundary) && !t.contains_interior(&boundary));
    }

    #[test]
    fn sweep_matches_oracles_on_small_set() {
        let p = set("0 0\n3 -1/7\n-2 5/3\n1/2 -4\n7/5 11/3\n-13/4 -9/8\n5/6 1/9\n-1/3 -7/2\n");
        let g = Theta6Graph::build(p.clone());
        assert_eq!(g.edge_set(), edges_by_empty_triangles(&p).unwrap());
        assert_eq!(g.edge_set(), edges_by_bisector_projection(&p).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let p = set("0 0\n3 -1/7\n-2 5/3\n1/2 -4\n");
        let g = Theta6Graph::build(p);
        let doc = g.to_json();
        let text = serde_json::to_string(&doc).unwrap();
        let back: GraphDocument = serde_json::from_str(&text).unwrap();
        let g2 = Theta6Graph::from_json(&back).unwrap();
        assert_eq!(g2.edge_set(), g.edge_set());
        let mut broken = back.clone();
        broken.edges.pop();
        assert!(Theta6Graph::from_json(&broken).is_err());
    }
}

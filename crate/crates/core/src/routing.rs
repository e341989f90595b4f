//! Greedy cone routing and the per-cone quantities read off greedy paths.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::Bounds;
use crate::enclosure::{euclid_norm, Enclosure};
use crate::hexgeom::{cone_intersection_side, cone_of, segment_crosses_ray, thex_norm, ConeIndex, GeometryError};
use crate::pointset::PointSet;
use crate::scalar::Scalar;
use crate::theta6::{GraphError, Theta6Graph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoutingError {
    #[error("greedy routing stuck at vertex {vertex}: no out-edge in cone {cone}")]
    Stuck { vertex: usize, cone: ConeIndex },
    #[error("vertex {0} is not on the path")]
    VertexNotOnPath(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub vertices: Vec<usize>,
    pub edge_cones: Vec<ConeIndex>,
}

impl Path {
    pub fn single(v: usize) -> Self {
        Self { vertices: vec![v], edge_cones: Vec::new() }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_cones.len()
    }

    pub fn first(&self) -> usize {
        self.vertices[0]
    }

    pub fn last(&self) -> usize {
        *self.vertices.last().expect("paths are nonempty")
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, ConeIndex)> + '_ {
        self.vertices
            .windows(2)
            .zip(&self.edge_cones)
            .map(|(w, &c)| (w[0], w[1], c))
    }

    pub fn position(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|&w| w == v)
    }
}

pub fn greedy_path(g: &Theta6Graph, s: usize, t: usize) -> Result<Path, RoutingError> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let mut path = Path::single(s);
    let mut cur = s;
    while cur != t {
        let cone = cone_of(g.point(cur), g.point(t))?;
        let next = g.out_edge(cur, cone)?.ok_or(RoutingError::Stuck { vertex: cur, cone })?;
        path.vertices.push(next);
        path.edge_cones.push(cone);
        cur = next;
        if path.vertices.len() > g.len() {
            return Err(RoutingError::Stuck { vertex: cur, cone });
        }
    }
    Ok(path)
}

/// Prefix of `path` ending at the first occurrence of `v`.
pub fn truncate(path: &Path, v: usize) -> Result<Path, RoutingError> {
    let pos = path.position(v).ok_or(RoutingError::VertexNotOnPath(v))?;
    Ok(Path {
        vertices: path.vertices[..=pos].to_vec(),
        edge_cones: path.edge_cones[..pos].to_vec(),
    })
}

/// Greedy path from `s` to `t` cut at the head of the first edge that
/// properly crosses `R_t^j`, together with that edge.
pub fn greedy_until_crossing(
    g: &Theta6Graph,
    s: usize,
    t: usize,
    j: ConeIndex,
) -> Result<(Path, Option<(usize, usize)>), RoutingError> {
    let full = greedy_path(g, s, t)?;
    let origin = g.point(t);
    for (k, (a, b, _)) in full.edges().enumerate() {
        if segment_crosses_ray(g.point(a), g.point(b), origin, j.ray()) {
            let path = Path {
                vertices: full.vertices[..=k + 1].to_vec(),
                edge_cones: full.edge_cones[..=k].to_vec(),
            };
            return Ok((path, Some((a, b))));
        }
    }
    Ok((full, None))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Maximizer of `‖C_t^i ∩ C_w^{i−2}‖`, gap `‖C_t^i ∩ C_w^{i+2}‖`.
    Ccw,
    /// Maximizer of `‖C_t^i ∩ C_w^{i+2}‖`, gap `‖C_t^i ∩ C_w^{i−2}‖`.
    Cw,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConeEntry {
    pub first_vertex: Option<usize>,
    pub first_hex_dist: Scalar,
    pub extreme_vertex: Option<usize>,
    /// The maximized triangle side.
    pub extreme_side: Scalar,
    pub gap: Scalar,
}

impl Default for ConeEntry {
    fn default() -> Self {
        Self {
            first_vertex: None,
            first_hex_dist: Scalar::zero(),
            extreme_vertex: None,
            extreme_side: Scalar::zero(),
            gap: Scalar::zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ConeProfile {
    pub cones: [ConeEntry; 6],
}

impl ConeProfile {
    pub fn get(&self, i: ConeIndex) -> &ConeEntry {
        &self.cones[i.value()]
    }
}

/// Per-cone first vertices and extreme vertices of `path` around `t`.
/// Occurrences of `t` itself are ignored.
pub fn cone_profile(
    points: &PointSet,
    path: &Path,
    t: usize,
    orientation: Orientation,
) -> Result<ConeProfile, GeometryError> {
    let pt = &points[t];
    let mut profile = ConeProfile::default();
    for &w in &path.vertices {
        if w == t {
            continue;
        }
        let pw = &points[w];
        let i = cone_of(pt, pw)?;
        let entry = &mut profile.cones[i.value()];
        let minus = cone_intersection_side(pt, i, pw, i.offset(-2))?;
        let plus = cone_intersection_side(pt, i, pw, i.offset(2))?;
        if entry.first_vertex.is_none() {
            entry.first_vertex = Some(w);
            entry.first_hex_dist = &minus + &plus;
        }
        let (side, gap) = match orientation {
            Orientation::Ccw => (minus, plus),
            Orientation::Cw => (plus, minus),
        };
        if entry.extreme_vertex.is_none() || side > entry.extreme_side {
            entry.extreme_vertex = Some(w);
            entry.extreme_side = side;
            entry.gap = gap;
        }
    }
    Ok(profile)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Norm {
    Hex,
    Thex,
    Euclid,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PathLength {
    Exact(Scalar),
    Enclosed(Bounds),
}

pub fn hex_length(g: &Theta6Graph, path: &Path) -> Scalar {
    path.edges()
        .map(|(a, _, c)| g.hex_len(a, c).expect("path edges are graph edges"))
        .sum()
}

pub fn thex_length(g: &Theta6Graph, path: &Path) -> Scalar {
    path.edges()
        .map(|(a, b, _)| thex_norm(&(g.point(b) - g.point(a))))
        .sum()
}

pub fn euclid_length(g: &Theta6Graph, path: &Path) -> Bounds {
    path.edges().fold(Bounds::zero(), |acc, (a, _, c)| {
        acc.add(g.edge(a, c).expect("path edges are graph edges").euclid)
    })
}

/// Euclidean length enclosed to a relative tolerance per edge.
pub fn euclid_length_precise(g: &Theta6Graph, path: &Path, relative_tolerance: f64) -> Enclosure {
    let zero = Enclosure::exact(num_rational::BigRational::from_integer(0.into()));
    path.edges().fold(zero, |acc, (a, b, _)| {
        acc.add(&euclid_norm(&(g.point(b) - g.point(a)), relative_tolerance))
    })
}

pub fn path_length(g: &Theta6Graph, path: &Path, norm: Norm) -> PathLength {
    match norm {
        Norm::Hex => PathLength::Exact(hex_length(g, path)),
        Norm::Thex => PathLength::Exact(thex_length(g, path)),
        Norm::Euclid => PathLength::Enclosed(euclid_length(g, path)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathDocument {
    pub vertices: Vec<usize>,
    pub cones: Vec<ConeIndex>,
    pub hex_total: String,
    pub thex_total: String,
    pub euclid_total: f64,
}

impl PathDocument {
    pub fn new(g: &Theta6Graph, path: &Path) -> Self {
        Self {
            vertices: path.vertices.clone(),
            cones: path.edge_cones.clone(),
            hex_total: hex_length(g, path).to_string(),
            thex_total: thex_length(g, path).to_string(),
            euclid_total: euclid_length(g, path).midpoint(),
        }
    }
}

//! Reads the case-analysis variables off a concrete Θ₆ graph.
//!
//! Lengths are divided by `‖st‖hex`. When `s` lies left of `B_t^0` the
//! instance is mirrored in the vertical axis first, which maps cone `i` to
//! cone `−i`.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::hexgeom::{cone_intersection_side, cone_of, cross, hex_norm, in_cone, line_intersection, thex_norm, triangle_of};
use crate::hexgeom::{ConeIndex, GeometryError, Point};
use crate::pointset::{PointSet, PointSetError};
use crate::routing::{cone_profile, greedy_until_crossing, ConeProfile, Orientation, Path, RoutingError};
use crate::scalar::Scalar;
use crate::theta6::Theta6Graph;

use super::catalog::{structural_rows, Y0_LE_HALF, X0_LE_HALF, Y5_GE_Y0};
use super::system::{Inequality, Relation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("s = {s} is not in C_t^0 of t = {t}")]
    NotInCone0 { s: usize, t: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error(transparent)]
    PointSet(#[from] PointSetError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PremiseFlags {
    /// No point of the instance in the interior of `R = Q ∪ ∇_s^p ∪ ∇_s^q`.
    pub region_r_empty: bool,
    pub y_in_cone1: bool,
    pub x_in_cone0: bool,
    /// Some `q ∈ C_t^5` on the y-path up to `v^y` has `‖qt‖hex > y0`.
    pub assumption_q: bool,
    /// Every vertex `u ∈ T` sees a vertex in `int(C_t^0 ∩ C_u^4)`.
    pub assumption_x: bool,
    /// No vertex left of `B_t^0` in `int(C_x^2)`.
    pub x_cone2_left_empty: bool,
    /// The x-path visits `C_t^3` before `v^x`.
    pub x_reaches_cone3: bool,
    /// 0 or 1 when `v^y` lies in that cone of `t`.
    pub y_case: Option<u8>,
    pub x_case: Option<u8>,
    /// Greatest `j ∈ 2..=5` whose y-triangle exceeds `x_j`; `None` is NOJ.
    pub j_case: Option<usize>,
}

impl PremiseFlags {
    pub fn case_label(&self) -> Option<String> {
        let y = self.y_case?;
        let x = self.x_case?;
        let j = self.j_case.map_or("NOJ".to_string(), |j| format!("J{j}"));
        Some(format!("Y{y}·X{x}·{j}"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowCheck {
    pub label: String,
    pub applicable: bool,
    /// `None` when a variable of the row is undefined.
    pub holds: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub s: usize,
    pub t: usize,
    pub mirrored: bool,
    /// Normalized values, as `a + b√3` strings when serialized.
    #[serde(serialize_with = "scalar_map")]
    pub values: BTreeMap<String, Scalar>,
    /// Variables that could not be measured, with the reason.
    pub undefined: BTreeMap<String, String>,
    /// `x_i` with the two triangle roles exchanged.
    #[serde(serialize_with = "scalar_map")]
    pub x_swapped: BTreeMap<String, Scalar>,
    pub flags: PremiseFlags,
}

fn scalar_map<S: serde::Serializer>(m: &BTreeMap<String, Scalar>, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &v.to_string())?;
    }
    map.end()
}

fn mirror(points: &PointSet) -> Result<PointSet, PointSetError> {
    PointSet::new(points.iter().map(|p| Point::new(-p.x(), p.y().clone())).collect())
}

/// Strictly inside the convex polygon `poly` (counterclockwise or clockwise).
fn inside_convex(poly: &[Point], w: &Point) -> bool {
    let signs: Vec<_> = (0..poly.len())
        .map(|k| {
            let a = &poly[k];
            let b = &poly[(k + 1) % poly.len()];
            cross(&(b - a), &(w - a)).sign()
        })
        .collect();
    signs.iter().all(|s| s.is_gt()) || signs.iter().all(|s| s.is_lt())
}

fn c(i: i64) -> ConeIndex {
    ConeIndex::new(i)
}

/// Path up to and including `u`, the tail of the crossing edge.
fn up_to_tail(path: &Path, crossing: Option<(usize, usize)>) -> Path {
    match crossing {
        Some(_) => Path {
            vertices: path.vertices[..path.vertices.len() - 1].to_vec(),
            edge_cones: path.edge_cones[..path.edge_cones.len().saturating_sub(1)].to_vec(),
        },
        None => path.clone(),
    }
}

pub fn measure_instance(g: &Theta6Graph, s: usize, t: usize) -> Result<Measurement, MeasureError> {
    g.check_vertex(s).map_err(RoutingError::from)?;
    g.check_vertex(t).map_err(RoutingError::from)?;
    let (ps, pt) = (g.point(s), g.point(t));
    if s == t || cone_of(pt, ps)? != c(0) {
        return Err(MeasureError::NotInCone0 { s, t });
    }
    if ps.x() < pt.x() {
        let mirrored = Theta6Graph::build(mirror(g.points())?);
        let mut m = measure_oriented(&mirrored, s, t)?;
        m.mirrored = true;
        return Ok(m);
    }
    measure_oriented(g, s, t)
}

fn measure_oriented(g: &Theta6Graph, s: usize, t: usize) -> Result<Measurement, MeasureError> {
    let points = g.points();
    let (ps, pt) = (&points[s], &points[t]);
    let unit = hex_norm(&(ps - pt));
    let norm = |v: Scalar| v.checked_div(&unit).expect("s ≠ t");
    let mut values = BTreeMap::new();
    let mut undefined = BTreeMap::new();
    let mut x_swapped = BTreeMap::new();
    let mut flags = PremiseFlags::default();

    let y0_raw = cone_intersection_side(pt, c(0), ps, c(2))?;
    values.insert("y0".to_string(), norm(y0_raw.clone()));

    // region R
    let bis = |i: i64| c(i).bisector().as_point();
    let p = line_intersection(ps, &bis(3), pt, &bis(1));
    let q = line_intersection(ps, &bis(4), pt, &bis(0));
    flags.region_r_empty = match (p, q) {
        (Some(p), Some(q)) => {
            let quad = [ps.clone(), q.clone(), pt.clone(), p.clone()];
            let tp = triangle_of(ps, &p)?;
            let tq = triangle_of(ps, &q)?;
            !points
                .iter()
                .any(|w| inside_convex(&quad, w) || tp.contains_interior(w) || tq.contains_interior(w))
        }
        _ => false,
    };

    // y-path
    let mut y_triangles: [Option<Scalar>; 6] = Default::default();
    match g.out_edge(s, c(3)).map_err(RoutingError::from)? {
        None => {
            undefined.insert("y".into(), "s has no edge in C_s^3".into());
        }
        Some(y) if y == t => {
            undefined.insert("y".into(), "the edge of s in C_s^3 ends at t".into());
        }
        Some(y) => {
            let py = &points[y];
            flags.y_in_cone1 = cone_of(pt, py)? == c(1);
            let sy = hex_norm(&(py - ps));
            values.insert("y1".into(), norm(&unit - &sy));
            let (to_v, crossing) = greedy_until_crossing(g, y, t, c(0))?;
            let body = up_to_tail(&to_v, crossing);
            let prof = cone_profile(points, &body, t, Orientation::Ccw)?;
            read_fan(&prof, "y", "Y", 2..6, &norm, &mut values, &mut undefined);
            let v = crossing.map_or(t, |(_, v)| v);
            values.insert("vy".into(), norm(thex_norm(&(&points[v] - pt))));
            flags.y_case = crossing.and_then(|(_, v)| match cone_of(pt, &points[v]).ok()?.value() {
                k @ (0 | 1) => Some(k as u8),
                _ => None,
            });
            flags.assumption_q = to_v.vertices.iter().any(|&w| {
                w != t && cone_of(pt, &points[w]).is_ok_and(|k| k == c(5)) && hex_norm(&(&points[w] - pt)) > y0_raw
            });
            for j in 2..6 {
                let e = prof.get(c(j as i64));
                if e.extreme_vertex.is_some() {
                    y_triangles[j] = Some(norm(e.extreme_side.clone()));
                }
            }
        }
    }

    // x-path
    match g.out_edge(s, c(4)).map_err(RoutingError::from)? {
        None => {
            undefined.insert("x".into(), "s has no edge in C_s^4".into());
        }
        Some(x) if x == t => {
            undefined.insert("x".into(), "the edge of s in C_s^4 ends at t".into());
        }
        Some(x) => {
            let px = &points[x];
            flags.x_in_cone0 = cone_of(pt, px)? == c(0);
            let (to_v, crossing) = greedy_until_crossing(g, x, t, c(0))?;
            let body = up_to_tail(&to_v, crossing);
            let cw = cone_profile(points, &body, t, Orientation::Cw)?;
            let ccw = cone_profile(points, &body, t, Orientation::Ccw)?;
            for i in [0usize, 5, 4, 3, 2] {
                let e = cw.get(c(i as i64));
                values.insert(format!("x{i}"), norm(e.gap.clone()));
                x_swapped.insert(format!("x{i}"), norm(ccw.get(c(i as i64)).gap.clone()));
            }
            for i in 0..6 {
                values.insert(format!("X{i}"), norm(cw.cones[i].first_hex_dist.clone()));
            }
            flags.x_reaches_cone3 = body.vertices.iter().any(|&w| cone_of(pt, &points[w]).is_ok_and(|k| k == c(3)));
            let v = crossing.map_or(t, |(_, v)| v);
            values.insert("vx".into(), norm(thex_norm(&(&points[v] - pt))));
            flags.x_case = crossing.and_then(|(_, v)| match cone_of(pt, &points[v]).ok()?.value() {
                k @ (0 | 1) => Some(k as u8),
                _ => None,
            });
            let bis0 = c(0).bisector().as_point();
            flags.x_cone2_left_empty = !points.iter().any(|w| {
                in_cone(px, c(2), w) && cross(&bis0, &(w - pt)).is_negative()
            });
        }
    }

    // J: greatest j whose y-triangle exceeds x_j
    let mut j_case = None;
    for j in 2..6usize {
        if let (Some(side), Some(xj)) = (&y_triangles[j], values.get(&format!("x{j}"))) {
            if side > xj {
                j_case = Some(j);
            }
        }
    }
    flags.j_case = j_case;

    // assumption on T = C_t^0 ∩ C_s^2, s included
    let in_t = |u: &Point| u == ps || (in_cone(pt, c(0), u) && in_cone(ps, c(2), u));
    flags.assumption_x = points.iter().filter(|u| in_t(u)).all(|u| {
        points.iter().any(|w| in_cone(pt, c(0), w) && in_cone(u, c(4), w))
    });

    Ok(Measurement { s, t, mirrored: false, values, undefined, x_swapped, flags })
}

fn read_fan(
    prof: &ConeProfile,
    small: &str,
    big: &str,
    defined: std::ops::Range<usize>,
    norm: &impl Fn(Scalar) -> Scalar,
    values: &mut BTreeMap<String, Scalar>,
    undefined: &mut BTreeMap<String, String>,
) {
    for i in defined {
        let e = prof.get(c(i as i64));
        let name = format!("{small}{i}");
        if e.extreme_vertex.is_some() {
            values.insert(name, norm(e.gap.clone()));
        } else {
            undefined.insert(name, format!("path has no vertex in C_t^{i}"));
        }
    }
    for i in 0..6 {
        values.insert(format!("{big}{i}"), norm(prof.cones[i].first_hex_dist.clone()));
    }
}

impl Measurement {
    fn row_applies(&self, label: &str) -> bool {
        let f = &self.flags;
        let y_fan = f.y_in_cone1 && f.assumption_q;
        let x_fan = f.x_in_cone0 && f.assumption_x;
        let both = y_fan && x_fan && f.region_r_empty;
        if let Some(rest) = label.strip_prefix("Ys") {
            return if rest == "0" { f.y_in_cone1 } else { y_fan };
        }
        if let Some(rest) = label.strip_prefix("Xs") {
            return if rest == "0" { f.x_in_cone0 } else { x_fan };
        }
        if label.starts_with("Y0case") {
            return both && f.y_case == Some(0);
        }
        if label.starts_with("Y1case") {
            return both && f.y_case == Some(1) && f.x_cone2_left_empty;
        }
        if label.starts_with("X0case") {
            return both && f.x_case == Some(0);
        }
        if label.starts_with("X1case.min") {
            return both && f.x_case == Some(1) && f.x_cone2_left_empty && f.x_reaches_cone3;
        }
        if label.starts_with("X1case") {
            return both && f.x_case == Some(1) && f.x_cone2_left_empty;
        }
        if let Some(rest) = label.strip_prefix("J.Y") {
            // J.Y{i+1}lex{i}: holds for i > j
            let i: usize = rest.split("lex").nth(1).and_then(|v| v.parse().ok()).unwrap_or(0);
            return both && f.j_case.is_none_or(|j| i > j);
        }
        if let Some(rest) = label.strip_prefix("J.X") {
            // J.X{k−1}ley{k}: holds for k ≤ j
            let k: usize = rest.split("ley").nth(1).and_then(|v| v.parse().ok()).unwrap_or(0);
            return both && f.j_case.is_some_and(|j| k <= j);
        }
        match label {
            Y0_LE_HALF => true,
            X0_LE_HALF => x_fan,
            Y5_GE_Y0 => y_fan,
            _ => false,
        }
    }

    fn evaluate(&self, row: &Inequality, values: &BTreeMap<String, Scalar>) -> Option<bool> {
        let mut lhs = Scalar::zero();
        for (k, coef) in &row.terms {
            lhs = lhs + values.get(k)?.scale(coef);
        }
        let rhs = Scalar::from_rational(row.constant.clone());
        Some(match row.relation {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
        })
    }

    /// Substitutes the measured values into every structural row.
    pub fn check_rows(&self) -> Vec<RowCheck> {
        self.check_with(&self.values)
    }

    /// As [`Self::check_rows`] with the exchanged `x_i` reading.
    pub fn check_rows_swapped(&self) -> Vec<RowCheck> {
        let mut values = self.values.clone();
        values.extend(self.x_swapped.clone());
        self.check_with(&values)
    }

    fn check_with(&self, values: &BTreeMap<String, Scalar>) -> Vec<RowCheck> {
        structural_rows()
            .iter()
            .map(|row| {
                let applicable = self.row_applies(&row.label);
                RowCheck {
                    label: row.label.clone(),
                    applicable,
                    holds: if applicable { self.evaluate(row, values) } else { None },
                }
            })
            .collect()
    }

    /// Region R empty and both assumptions hold.
    pub fn premises_hold(&self) -> bool {
        let f = &self.flags;
        f.region_r_empty && f.y_in_cone1 && f.x_in_cone0 && f.assumption_q && f.assumption_x
    }
}

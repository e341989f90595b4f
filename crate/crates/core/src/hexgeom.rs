//! Points, the six-cone fan, hexagonal norms, equilateral triangles and the
//! exact predicates built on them.
//!
//! Cone `C_p^i` is the open 60° wedge at `p` spanning angles
//! `(240 + 60i)°..(300 + 60i)°`, so `C_p^0` points straight down and indices
//! increase counterclockwise. Ray `R_p^i` is the boundary at `(300 + 60i)°`
//! between `C_p^i` and `C_p^{i+1}`; bisector `B_p^i` points at `(270 + 60i)°`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Sub};
use std::sync::LazyLock;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::{Approx, Bounds};
use crate::scalar::Scalar;

#[derive(Clone)]
pub struct Point {
    x: Scalar,
    y: Scalar,
    ax: Approx,
    ay: Approx,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        let ax = x.approx();
        let ay = y.approx();
        Self { x, y, ax, ay }
    }

    pub fn origin() -> Self {
        Self::new(Scalar::zero(), Scalar::zero())
    }

    pub fn from_ratios(x: (i64, i64), y: (i64, i64)) -> Self {
        Self::new(Scalar::from_ratio(x.0, x.1), Scalar::from_ratio(y.0, y.1))
    }

    pub fn x(&self) -> &Scalar {
        &self.x
    }

    pub fn y(&self) -> &Scalar {
        &self.y
    }

    pub fn approx(&self) -> (Approx, Approx) {
        (self.ax, self.ay)
    }

    pub fn scale(&self, c: &Scalar) -> Point {
        Point::new(&self.x * c, &self.y * c)
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// `(x, y)` as plain floats, for display.
    pub fn to_f64(&self) -> (f64, f64) {
        (self.ax.value, self.ay.value)
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.x.hash(state);
        self.y.hash(state);
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.x, self.y)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

/// A direction `(cx, cy)` used both as a vector and as the linear form
/// `v ↦ cx·v.x + cy·v.y`.
#[derive(Clone, Debug)]
pub struct Dir {
    pub cx: Scalar,
    pub cy: Scalar,
    ax: Approx,
    ay: Approx,
}

impl Dir {
    pub fn new(cx: Scalar, cy: Scalar) -> Self {
        let ax = cx.approx();
        let ay = cy.approx();
        Self { cx, cy, ax, ay }
    }

    pub fn eval(&self, p: &Point) -> Scalar {
        let mut acc = Scalar::zero();
        if !self.cx.is_zero() {
            acc = acc + &self.cx * &p.x;
        }
        if !self.cy.is_zero() {
            acc = acc + &self.cy * &p.y;
        }
        acc
    }

    pub fn eval_approx(&self, p: &Point) -> Approx {
        self.ax * p.ax + self.ay * p.ay
    }

    /// Sign of `self·(p − q)`.
    pub fn cmp_points(&self, p: &Point, q: &Point) -> Ordering {
        if let Some(s) = (self.eval_approx(p) - self.eval_approx(q)).sign() {
            return s;
        }
        self.eval(&(p - q)).sign()
    }

    /// Sign of `self·p − c`.
    pub fn cmp_value(&self, p: &Point, c: &Scalar, c_approx: Approx) -> Ordering {
        if let Some(s) = (self.eval_approx(p) - c_approx).sign() {
            return s;
        }
        (self.eval(p) - c).sign()
    }

    pub fn as_point(&self) -> Point {
        Point::new(self.cx.clone(), self.cy.clone())
    }
}

fn half() -> Scalar {
    Scalar::from_ratio(1, 2)
}

fn half_sqrt3() -> Scalar {
    Scalar::new(BigRational::zero(), BigRational::new(1.into(), 2.into()))
}

/// Unit vectors at `(30 + 60m)°`; the inward normals of all cone and triangle sides.
static NORMALS: LazyLock<[Dir; 6]> = LazyLock::new(|| {
    let h = half();
    let r = half_sqrt3();
    let z = Scalar::zero();
    let one = Scalar::one();
    [
        Dir::new(r.clone(), h.clone()),
        Dir::new(z.clone(), one.clone()),
        Dir::new(-&r, h.clone()),
        Dir::new(-&r, -&h),
        Dir::new(z, -&one),
        Dir::new(r, -&h),
    ]
});

/// Unit vectors at `(60k)°`; the directions of the cone boundary rays.
static RAY_DIRS: LazyLock<[Dir; 6]> = LazyLock::new(|| {
    let h = half();
    let r = half_sqrt3();
    let z = Scalar::zero();
    let one = Scalar::one();
    [
        Dir::new(one.clone(), z.clone()),
        Dir::new(h.clone(), r.clone()),
        Dir::new(-&h, r.clone()),
        Dir::new(-&one, z),
        Dir::new(-&h, -&r),
        Dir::new(h, -&r),
    ]
});

pub fn normal(m: usize) -> &'static Dir {
    &NORMALS[m % 6]
}

pub fn ray_dir(k: usize) -> &'static Dir {
    &RAY_DIRS[k % 6]
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub struct ConeIndex(u8);

impl ConeIndex {
    pub fn new(i: i64) -> Self {
        Self(i.rem_euclid(6) as u8)
    }

    pub fn value(self) -> usize {
        self.0 as usize
    }

    pub fn offset(self, k: i64) -> Self {
        Self::new(self.0 as i64 + k)
    }

    pub fn opposite(self) -> Self {
        self.offset(3)
    }

    pub fn all() -> impl Iterator<Item = ConeIndex> {
        (0..6).map(ConeIndex)
    }

    /// Inward normal of the side at angle `(240 + 60i)°`.
    pub fn first_normal(self) -> &'static Dir {
        normal(5 + self.value())
    }

    /// Inward normal of the side at angle `(300 + 60i)°`.
    pub fn second_normal(self) -> &'static Dir {
        normal(3 + self.value())
    }

    /// Unit vector along the bisector `B^i`.
    pub fn bisector(self) -> &'static Dir {
        normal(4 + self.value())
    }

    /// Unit vector along the ray `R^i` separating this cone from the next.
    pub fn ray(self) -> &'static Dir {
        ray_dir(5 + self.value())
    }
}

impl From<ConeIndex> for u8 {
    fn from(c: ConeIndex) -> u8 {
        c.0
    }
}

impl TryFrom<u8> for ConeIndex {
    type Error = String;
    fn try_from(v: u8) -> Result<Self, String> {
        if v < 6 {
            Ok(ConeIndex(v))
        } else {
            Err(format!("cone index {v} out of range"))
        }
    }
}

impl fmt::Display for ConeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for ConeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Slope {
    Zero,
    Sqrt3,
    MinusSqrt3,
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Slope::Zero => "0",
            Slope::Sqrt3 => "sqrt3",
            Slope::MinusSqrt3 => "-sqrt3",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("degenerate pair: the two points coincide")]
    DegeneratePair,
    #[error("point lies on boundary ray R^{ray} (slope {slope})")]
    BoundaryViolation { ray: ConeIndex, slope: Slope },
    #[error("cones {i} and {j} do not intersect in a bounded triangle")]
    UnboundedIntersection { i: ConeIndex, j: ConeIndex },
}

/// Index `i` with `q ∈ int(C_p^i)`.
pub fn cone_of(p: &Point, q: &Point) -> Result<ConeIndex, GeometryError> {
    use Ordering::*;
    let s0 = normal(1).cmp_points(q, p);
    // sign(dy − √3dx) = −sign(u_5·d)
    let s1 = normal(5).cmp_points(p, q);
    let s2 = normal(0).cmp_points(q, p);
    let cone = match (s0, s1, s2) {
        (Equal, Equal, _) => return Err(GeometryError::DegeneratePair),
        (Equal, s, _) => {
            let ray = if s == Less { 1 } else { 4 };
            return Err(GeometryError::BoundaryViolation { ray: ConeIndex::new(ray), slope: Slope::Zero });
        }
        (s, Equal, _) => {
            let ray = if s == Greater { 2 } else { 5 };
            return Err(GeometryError::BoundaryViolation { ray: ConeIndex::new(ray), slope: Slope::Sqrt3 });
        }
        (s, _, Equal) => {
            let ray = if s == Greater { 3 } else { 0 };
            return Err(GeometryError::BoundaryViolation { ray: ConeIndex::new(ray), slope: Slope::MinusSqrt3 });
        }
        (_, Less, Less) => 0,
        (Less, _, Greater) => 1,
        (Greater, Less, _) => 2,
        (_, Greater, Greater) => 3,
        (Greater, _, Less) => 4,
        (Less, Greater, _) => 5,
    };
    Ok(ConeIndex::new(cone))
}

/// `q ∈ int(C_p^i)`, false for `q == p`.
pub fn in_cone(p: &Point, i: ConeIndex, q: &Point) -> bool {
    i.first_normal().cmp_points(q, p) == Ordering::Greater
        && i.second_normal().cmp_points(q, p) == Ordering::Greater
}

fn inv_sqrt3() -> Scalar {
    Scalar::new(BigRational::zero(), BigRational::new(1.into(), 3.into()))
}

fn two_over_sqrt3() -> Scalar {
    Scalar::new(BigRational::zero(), BigRational::new(2.into(), 3.into()))
}

pub fn hex_norm(v: &Point) -> Scalar {
    let ys = &v.y * &inv_sqrt3();
    let a = (&v.y * &two_over_sqrt3()).abs();
    let b = (&v.x + &ys).abs();
    let c = (&v.x - &ys).abs();
    a.max(b).max(c)
}

pub fn thex_norm(v: &Point) -> Scalar {
    let hx = v.x.half();
    let ry = &v.y * &half_sqrt3();
    let a = v.x.abs();
    let b = (&hx + &ry).abs();
    let c = (&ry - &hx).abs();
    a.max(b).max(c)
}

/// Hex length of `v` when `v ∈ C^i`: the norm is linear there.
pub fn hex_norm_in_cone(v: &Point, i: ConeIndex) -> Scalar {
    i.bisector().eval(v) * two_over_sqrt3()
}

fn max_bounds(parts: [Approx; 3]) -> Bounds {
    let lo = parts.iter().map(|a| a.lo()).fold(f64::NEG_INFINITY, f64::max);
    let hi = parts.iter().map(|a| a.hi()).fold(f64::NEG_INFINITY, f64::max);
    Bounds::new(lo.max(0.0), hi.max(0.0))
}

fn abs_approx(a: Approx) -> Approx {
    Approx::new(a.value.abs(), a.err)
}

/// Rigorous float bounds on `hex_norm(p − q)`.
pub fn hex_bounds(p: &Point, q: &Point) -> Bounds {
    let dx = p.ax - q.ax;
    let dy = p.ay - q.ay;
    let ys = dy * Approx::SQRT3 * Approx::exact(1.0 / 3.0) * Approx::new(1.0, 2.0 * f64::EPSILON);
    let a = abs_approx(ys + ys);
    max_bounds([a, abs_approx(dx + ys), abs_approx(dx - ys)])
}

/// Rigorous float bounds on `thex_norm(p − q)`.
pub fn thex_bounds(p: &Point, q: &Point) -> Bounds {
    let dx = p.ax - q.ax;
    let dy = p.ay - q.ay;
    let hx = dx * Approx::exact(0.5);
    let ry = dy * Approx::SQRT3 * Approx::exact(0.5);
    max_bounds([abs_approx(dx), abs_approx(hx + ry), abs_approx(ry - hx)])
}

/// Rigorous float bounds on the Euclidean length of `p − q`.
pub fn euclid_bounds(p: &Point, q: &Point) -> Bounds {
    let dx = p.ax - q.ax;
    let dy = p.ay - q.ay;
    let sq = dx * dx + dy * dy;
    Bounds::new(sq.lo().max(0.0), sq.hi().max(0.0)).sqrt()
}

/// `∇_apex^q` for any `q` with `‖q − apex‖hex = side` in `C^cone`.
#[derive(Clone, Debug, PartialEq)]
pub struct Triangle {
    pub apex: Point,
    pub cone: ConeIndex,
    pub side: Scalar,
    far: Scalar,
    far_approx: Approx,
}

impl Triangle {
    pub fn new(apex: Point, cone: ConeIndex, side: Scalar) -> Self {
        let far = cone.bisector().eval(&apex) + &side * &half_sqrt3();
        let far_approx = far.approx();
        Self { apex, cone, side, far, far_approx }
    }

    /// Strict interior membership.
    pub fn contains_interior(&self, r: &Point) -> bool {
        in_cone(&self.apex, self.cone, r)
            && self.cone.bisector().cmp_value(r, &self.far, self.far_approx) == Ordering::Less
    }

    /// Closed membership.
    pub fn contains(&self, r: &Point) -> bool {
        self.halfplanes()
            .iter()
            .all(|(m, c)| normal(*m).eval(r) >= *c)
    }

    /// The three sides as `(m, c)` meaning `normal(m)·r ≥ c`.
    pub fn halfplanes(&self) -> [(usize, Scalar); 3] {
        let i = self.cone.value();
        let a = self.cone.first_normal().eval(&self.apex);
        let b = self.cone.second_normal().eval(&self.apex);
        [((5 + i) % 6, a), ((3 + i) % 6, b), ((1 + i) % 6, -&self.far)]
    }

    pub fn corners(&self) -> [Point; 3] {
        let i = self.cone.value();
        let along = |k: usize| {
            let d = ray_dir(k);
            Point::new(&self.apex.x + &d.cx * &self.side, &self.apex.y + &d.cy * &self.side)
        };
        [self.apex.clone(), along(4 + i), along(5 + i)]
    }
}

pub fn triangle_of(p: &Point, q: &Point) -> Result<Triangle, GeometryError> {
    let cone = cone_of(p, q)?;
    Ok(Triangle::new(p.clone(), cone, hex_norm_in_cone(&(q - p), cone)))
}

/// Do the open interiors of two triangles meet? Separating-axis test over the
/// six side normals, exact.
pub fn interiors_intersect(a: &Triangle, b: &Triangle) -> bool {
    if a.side.is_zero() || b.side.is_zero() {
        return false;
    }
    let ca = a.corners();
    let cb = b.corners();
    for m in 0..3 {
        let axis = normal(m);
        let pa: Vec<Scalar> = ca.iter().map(|p| axis.eval(p)).collect();
        let pb: Vec<Scalar> = cb.iter().map(|p| axis.eval(p)).collect();
        let (amin, amax) = min_max(pa);
        let (bmin, bmax) = min_max(pb);
        if amax <= bmin || bmax <= amin {
            return false;
        }
    }
    true
}

fn min_max(v: Vec<Scalar>) -> (Scalar, Scalar) {
    let mut it = v.into_iter();
    let first = it.next().expect("nonempty");
    it.fold((first.clone(), first), |(lo, hi), x| (lo.min(x.clone()), hi.max(x)))
}

/// `‖C_u^i ∩ C_v^j‖` for `j ∈ {i+2, i+4}`; for `j = i+3` the side of the
/// triangle cut from `C_u^i` at the depth of `v`. Zero when empty.
pub fn cone_intersection_side(
    u: &Point,
    i: ConeIndex,
    v: &Point,
    j: ConeIndex,
) -> Result<Scalar, GeometryError> {
    let diff = (j.value() + 6 - i.value()) % 6;
    match diff {
        2 | 4 => {
            let mut offsets: [Option<Scalar>; 6] = Default::default();
            for (apex, cone) in [(u, i), (v, j)] {
                for m in [5 + cone.value(), 3 + cone.value()] {
                    let c = normal(m).eval(apex);
                    let slot = &mut offsets[m % 6];
                    *slot = Some(match slot.take() {
                        Some(prev) => prev.max(c),
                        None => c,
                    });
                }
            }
            let altitude = -offsets.into_iter().flatten().sum::<Scalar>();
            Ok(side_from_altitude(altitude))
        }
        3 => {
            let depth = hex_norm_in_cone(&(v - u), i);
            Ok(depth.max(Scalar::zero()))
        }
        _ => Err(GeometryError::UnboundedIntersection { i, j }),
    }
}

fn side_from_altitude(h: Scalar) -> Scalar {
    if h.is_positive() {
        h * two_over_sqrt3()
    } else {
        Scalar::zero()
    }
}

/// `(‖uv‖thex, ½·min(‖C_u^i ∩ C_v^{i−2}‖, ‖C_u^i ∩ C_v^{i+2}‖))` for `v ∈ C_u^i`.
pub fn hexthex_decompose(u: &Point, v: &Point) -> Result<(Scalar, Scalar), GeometryError> {
    let i = cone_of(u, v)?;
    let left = cone_intersection_side(u, i, v, i.offset(-2))?;
    let right = cone_intersection_side(u, i, v, i.offset(2))?;
    Ok((thex_norm(&(v - u)), left.min(right).half()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Duplicate,
    Slope(Slope),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub first: usize,
    pub second: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::Duplicate => write!(f, "points {} and {} coincide", self.first, self.second),
            ViolationKind::Slope(s) => write!(f, "points {} and {} lie on a line of slope {s}", self.first, self.second),
        }
    }
}

/// Sorting by the three forbidden directions finds every offending pair as a
/// pair of neighbours, so this runs in `O(n log n)`.
pub fn general_position_check(points: &[Point]) -> Result<(), Violation> {
    let checks: [(&Dir, Slope); 3] = [
        (normal(1), Slope::Zero),
        (normal(5), Slope::Sqrt3),
        (normal(0), Slope::MinusSqrt3),
    ];
    let mut found: Option<Violation> = None;
    for (form, slope) in checks {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| form.cmp_points(&points[a], &points[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            if form.cmp_points(&points[a], &points[b]) == Ordering::Equal {
                let kind = if points[a] == points[b] {
                    ViolationKind::Duplicate
                } else {
                    ViolationKind::Slope(slope)
                };
                let v = Violation { first: a, second: b, kind };
                let better = match &found {
                    None => true,
                    Some(f) => (v.kind == ViolationKind::Duplicate && f.kind != ViolationKind::Duplicate)
                        || (v.kind == f.kind && (v.first, v.second) < (f.first, f.second)),
                };
                if better {
                    found = Some(v);
                }
            }
        }
        if found.is_some_and(|f| f.kind == ViolationKind::Duplicate) {
            break;
        }
    }
    found.map_or(Ok(()), Err)
}

/// Sign of `d × w`.
fn cross_sign(d: &Dir, w: &Point) -> Ordering {
    let approx = d.ax * w.ay - d.ay * w.ax;
    if let Some(s) = approx.sign() {
        return s;
    }
    (&d.cx * &w.y - &d.cy * &w.x).sign()
}

/// `a.x·b.y − a.y·b.x`.
pub fn cross(a: &Point, b: &Point) -> Scalar {
    &a.x * &b.y - &a.y * &b.x
}

/// Does the open segment `ab` meet the open ray from `origin` along `dir` in a
/// single interior point?
pub fn segment_crosses_ray(a: &Point, b: &Point, origin: &Point, dir: &Dir) -> bool {
    let sa = cross_sign(dir, &(a - origin));
    let sb = cross_sign(dir, &(b - origin));
    if sa == Ordering::Equal || sb == Ordering::Equal || sa == sb {
        return false;
    }
    // origin + λ·dir on the line ab; need λ > 0
    let ab = b - a;
    let num = cross(&(a - origin), &ab).sign();
    let den = cross(&dir.as_point(), &ab).sign();
    num != Ordering::Equal && num == den
}

/// Intersection of the lines `p + λ·dp` and `q + μ·dq`, if not parallel.
pub fn line_intersection(p: &Point, dp: &Point, q: &Point, dq: &Point) -> Option<Point> {
    let den = cross(dp, dq);
    let lambda = cross(&(q - p), dq).checked_div(&den)?;
    Some(p + &dp.scale(&lambda))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: &str, y: &str) -> Point {
        Point::new(x.parse().unwrap(), y.parse().unwrap())
    }

    #[test]
    fn cone_examples() {
        let o = Point::origin();
        assert_eq!(cone_of(&o, &pt("0", "-1")).unwrap(), ConeIndex::new(0));
        assert_eq!(cone_of(&o, &pt("0", "1")).unwrap(), ConeIndex::new(3));
        assert_eq!(cone_of(&o, &pt("1", "1/5")).unwrap(), ConeIndex::new(2));
        assert_eq!(cone_of(&o, &o), Err(GeometryError::DegeneratePair));
        assert_eq!(
            cone_of(&o, &pt("1", "0")),
            Err(GeometryError::BoundaryViolation { ray: ConeIndex::new(1), slope: Slope::Zero })
        );
        assert_eq!(
            cone_of(&o, &pt("-1", "-sqrt3")),
            Err(GeometryError::BoundaryViolation { ray: ConeIndex::new(5), slope: Slope::Sqrt3 })
        );
        assert_eq!(
            cone_of(&o, &pt("1", "-sqrt3")),
            Err(GeometryError::BoundaryViolation { ray: ConeIndex::new(0), slope: Slope::MinusSqrt3 })
        );
    }

    #[test]
    fn ray_directions_bound_their_cones() {
        let o = Point::origin();
        for i in ConeIndex::all() {
            let d = i.ray().as_point();
            assert!(matches!(cone_of(&o, &d), Err(GeometryError::BoundaryViolation { ray, .. }) if ray == i));
            assert_eq!(cone_of(&o, &i.bisector().as_point()).unwrap(), i);
        }
    }

    #[test]
    fn norm_examples() {
        assert_eq!(hex_norm(&pt("1", "0")), Scalar::one());
        assert_eq!(hex_norm(&Point::origin()), Scalar::zero());
        assert_eq!(hex_norm(&pt("0", "1")), "2/3*sqrt3".parse().unwrap());
        assert_eq!(thex_norm(&pt("0", "2/3*sqrt3")), Scalar::one());
        assert_eq!(thex_norm(&pt("1", "0")), Scalar::one());
    }

    #[test]
    fn triangle_examples() {
        let o = Point::origin();
        let t = triangle_of(&o, &pt("0", "-1")).unwrap();
        assert_eq!(t.cone, ConeIndex::new(0));
        assert_eq!(t.side, "2/3*sqrt3".parse().unwrap());
        assert!(t.contains_interior(&pt("0", "-1/2")));
        assert!(!t.contains_interior(&pt("0", "-1")));
        assert!(t.contains(&pt("0", "-1")));
        assert!(triangle_of(&o, &pt("1", "0")).is_err());
    }

    #[test]
    fn intersection_side_examples() {
        let o = Point::origin();
        let side = cone_intersection_side(&o, ConeIndex::new(0), &pt("0", "-1"), ConeIndex::new(3)).unwrap();
        assert_eq!(side, "2/3*sqrt3".parse().unwrap());
        assert_eq!(
            cone_intersection_side(&o, ConeIndex::new(0), &o, ConeIndex::new(2)).unwrap(),
            Scalar::zero()
        );
        assert!(cone_intersection_side(&o, ConeIndex::new(0), &o, ConeIndex::new(1)).is_err());
    }

    #[test]
    fn general_position_examples() {
        let o = Point::origin();
        let v = general_position_check(&[o.clone(), pt("1", "0")]).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Slope(Slope::Zero));
        assert!(general_position_check(&[o.clone(), pt("1", "1/3")]).is_ok());
        let v = general_position_check(&[o.clone(), pt("1", "sqrt3")]).unwrap_err();
        assert_eq!(v.kind, ViolationKind::Slope(Slope::Sqrt3));
        let v = general_position_check(&[pt("1", "2"), o, pt("1", "2")]).unwrap_err();
        assert_eq!((v.first, v.second, v.kind), (0, 2, ViolationKind::Duplicate));
    }

    #[test]
    fn ray_crossing() {
        let o = Point::origin();
        let r0 = ConeIndex::new(0).ray();
        // R_t^0 points at 300°
        assert!(segment_crosses_ray(&pt("0", "-2"), &pt("2", "-1"), &o, r0));
        assert!(!segment_crosses_ray(&pt("0", "2"), &pt("-2", "1"), &o, r0));
        assert!(!segment_crosses_ray(&pt("0", "-2"), &pt("-1", "-3"), &o, r0));
    }

    #[test]
    fn triangles_overlap() {
        let o = Point::origin();
        let a = triangle_of(&o, &pt("0", "-1")).unwrap();
        let b = triangle_of(&pt("0", "-1/2"), &pt("1/10", "-2")).unwrap();
        assert!(interiors_intersect(&a, &b));
        let c = triangle_of(&pt("0", "-3"), &pt("1/10", "-5")).unwrap();
        assert!(!interiors_intersect(&a, &c));
        let up = triangle_of(&pt("0", "-1"), &o).unwrap();
        assert!(interiors_intersect(&a, &up));
    }
}

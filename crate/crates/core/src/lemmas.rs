//! Batch property suites for the structural lemmas about greedy paths.
//!
//! Every suite is seeded, checks its property exactly, and counts how many
//! samples met the premise. Violations carry the full instance as point text.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::hexgeom::{
    cone_of, cross, hex_norm, hexthex_decompose, interiors_intersect,
    segment_crosses_ray, thex_norm, triangle_of, ConeIndex, Point,
};
use crate::pointset::PointSet;
use crate::routing::greedy_path;
use crate::sampling::SampleSpec;
use crate::scalar::Scalar;
use crate::theta6::Theta6Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LemmaId {
    Hexthex,
    Adjacency,
    Potential,
    PerConeSum,
    Disjointness,
    WithinR,
    RCrossing,
}

impl LemmaId {
    pub const ALL: [LemmaId; 7] = [
        LemmaId::Hexthex,
        LemmaId::Adjacency,
        LemmaId::Potential,
        LemmaId::PerConeSum,
        LemmaId::Disjointness,
        LemmaId::WithinR,
        LemmaId::RCrossing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LemmaId::Hexthex => "hexthex",
            LemmaId::Adjacency => "adjacency",
            LemmaId::Potential => "potential",
            LemmaId::PerConeSum => "per_cone_sum",
            LemmaId::Disjointness => "disjointness",
            LemmaId::WithinR => "within_r",
            LemmaId::RCrossing => "r_crossing",
        }
    }

    /// Suites drawing point triples rather than whole graphs.
    pub fn samples_triples(self) -> bool {
        matches!(self, LemmaId::Hexthex | LemmaId::WithinR | LemmaId::RCrossing)
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown lemma suite `{0}`")]
pub struct UnknownLemma(pub String);

impl FromStr for LemmaId {
    type Err = UnknownLemma;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| UnknownLemma(s.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LemmaError {
    #[error("no sample satisfied the premise of {lemma} ({samples} drawn)")]
    EmptyPremiseSample { lemma: LemmaId, samples: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaViolation {
    pub detail: String,
    /// Point text with role labels; rebuild with `PointSet::from_text`.
    pub instance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaReport {
    pub lemma: LemmaId,
    pub samples: usize,
    pub premise_hits: usize,
    pub rejected: usize,
    pub violations: Vec<LemmaViolation>,
}

impl LemmaReport {
    pub fn rejection_rate(&self) -> f64 {
        let total = self.premise_hits + self.rejected;
        if total == 0 {
            1.0
        } else {
            self.rejected as f64 / total as f64
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.premise_hits > 0
    }
}

#[derive(Default)]
struct Tally {
    hits: usize,
    rejected: usize,
    violations: Vec<LemmaViolation>,
}

impl Tally {
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String, instance: impl FnOnce() -> String) {
        self.hits += 1;
        if !ok {
            self.violations.push(LemmaViolation { detail: detail(), instance: instance() });
        }
    }
}

fn dump(points: &[&Point], names: &[&str]) -> String {
    points
        .iter()
        .zip(names)
        .map(|(p, n)| format!("{} {} # {}\n", p.x(), p.y(), n))
        .collect()
}

fn graph_dump(g: &Theta6Graph, roles: &[(usize, &str)]) -> String {
    instance_text(g.points(), roles)
}

pub fn lemma_suite(spec: &SampleSpec, lemma: LemmaId) -> Result<LemmaReport, LemmaError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut tally = Tally::default();
    for _ in 0..spec.instances {
        if lemma.samples_triples() {
            let pts: Vec<Point> = (0..3).map(|_| spec.random_point(&mut rng)).collect();
            match lemma {
                LemmaId::Hexthex => hexthex_case(&pts[0], &pts[1], &mut tally),
                LemmaId::WithinR => within_r_case(&pts, rng.gen_range(0..6), &mut tally),
                _ => {
                    let i = ConeIndex::new(rng.gen_range(0..6));
                    let pts = crossing_candidate(spec, &mut rng, &pts[2], i);
                    r_crossing_case(&pts, i, &mut tally)
                }
            }
        } else {
            let g = Theta6Graph::build(spec.random_pointset(&mut rng, spec.size));
            match lemma {
                LemmaId::Adjacency => adjacency_graph(&g, &mut tally),
                LemmaId::Potential => potential_graph(&g, &mut tally),
                LemmaId::PerConeSum => per_cone_sum_graph(&g, &mut tally),
                _ => disjointness_graph(&g, &mut tally),
            }
        }
    }
    if tally.hits == 0 {
        return Err(LemmaError::EmptyPremiseSample { lemma, samples: spec.instances });
    }
    Ok(LemmaReport {
        lemma,
        samples: spec.instances,
        premise_hits: tally.hits,
        rejected: tally.rejected,
        violations: tally.violations,
    })
}

/// `‖uv‖hex = ‖uv‖thex + ½·min(‖C_u^i ∩ C_v^{i−2}‖, ‖C_u^i ∩ C_v^{i+2}‖)`.
fn hexthex_case(u: &Point, v: &Point, tally: &mut Tally) {
    let Ok((thex, half_min)) = hexthex_decompose(u, v) else {
        tally.rejected += 1;
        return;
    };
    let hex = hex_norm(&(v - u));
    tally.check(
        hex == &thex + &half_min,
        || format!("hex {hex} != thex {thex} + {half_min}"),
        || dump(&[u, v], &["u", "v"]),
    );
}

/// Greedy successors of a vertex in `C_t^i` stay in `C_t^{i−1} ∪ C_t^i ∪ C_t^{i+1}`.
fn adjacency_graph(g: &Theta6Graph, tally: &mut Tally) {
    for t in 0..g.len() {
        for s in (0..g.len()).filter(|&s| s != t) {
            let path = greedy_path(g, s, t).expect("greedy paths exist in theta graphs");
            let pt = g.point(t);
            for (a, b, _) in path.edges() {
                if b == t {
                    continue;
                }
                let i = cone_of(pt, g.point(a)).expect("general position");
                let j = cone_of(pt, g.point(b)).expect("general position");
                let d = (j.value() + 6 - i.value()) % 6;
                tally.check(
                    matches!(d, 0 | 1 | 5),
                    || format!("edge {a}->{b} jumps from cone {i} to cone {j} around t"),
                    || graph_dump(g, &[(s, "s"), (t, "t"), (a, "a"), (b, "b")]),
                );
            }
        }
    }
}

/// `‖π(s,t)_v‖hex ≤ Σ ‖f_i t‖hex` while no edge of `π(s,t)_u` crosses `R_t^j`.
fn potential_graph(g: &Theta6Graph, tally: &mut Tally) {
    for t in 0..g.len() {
        let pt = g.point(t);
        for s in (0..g.len()).filter(|&s| s != t) {
            let path = greedy_path(g, s, t).expect("greedy paths exist in theta graphs");
            let cones: Vec<Option<ConeIndex>> = path
                .vertices
                .iter()
                .map(|&w| (w != t).then(|| cone_of(pt, g.point(w)).expect("general position")))
                .collect();
            for j in ConeIndex::all() {
                let mut seen = [false; 6];
                let mut bound = Scalar::zero();
                let mut length = Scalar::zero();
                for (k, (a, b, c)) in path.edges().enumerate() {
                    // a is u, b is v; π_u holds vertices 0..=k
                    if let Some(i) = cones[k] {
                        if !std::mem::replace(&mut seen[i.value()], true) {
                            bound = bound + hex_norm(&(g.point(a) - pt));
                        }
                    }
                    length = length + g.hex_len(a, c).expect("path edge");
                    tally.check(
                        length <= bound,
                        || format!("prefix to {b} has hex length {length} > {bound} (j = {j})"),
                        || graph_dump(g, &[(s, "s"), (t, "t"), (b, "v")]),
                    );
                    if segment_crosses_ray(g.point(a), g.point(b), pt, j.ray()) {
                        break;
                    }
                }
            }
        }
    }
}

/// With `ts` an edge, greedy edges leaving `C_t^i` sum to at most `‖∇_t^s‖`.
fn per_cone_sum_graph(g: &Theta6Graph, tally: &mut Tally) {
    for (t, e) in g.edges() {
        let s = e.target;
        let pt = g.point(t);
        let bound = g.hex_len(t, e.cone).expect("edge").clone();
        let path = greedy_path(g, s, t).expect("greedy paths exist in theta graphs");
        let mut sums: [Scalar; 6] = Default::default();
        for (a, _, c) in path.edges() {
            let i = cone_of(pt, g.point(a)).expect("general position");
            sums[i.value()] = &sums[i.value()] + g.hex_len(a, c).expect("path edge");
        }
        for (i, sum) in sums.iter().enumerate() {
            tally.check(
                *sum <= bound,
                || format!("cone {i} carries {sum} > {bound}"),
                || graph_dump(g, &[(s, "s"), (t, "t")]),
            );
        }
    }
}

/// With `ts` an edge and `a, b, c` in order on `π(s,t)` with `a, c ∈ C_t^i`,
/// `int(∇_a^b) ∩ int(∇_t^c) = ∅`. `b` lies strictly between `a` and `c`, or
/// `ab` is a path edge.
fn disjointness_graph(g: &Theta6Graph, tally: &mut Tally) {
    for (t, e) in g.edges() {
        let s = e.target;
        let pt = g.point(t);
        let path = greedy_path(g, s, t).expect("greedy paths exist in theta graphs");
        let body = &path.vertices[..path.vertices.len() - 1];
        let cones: Vec<ConeIndex> = body.iter().map(|&w| cone_of(pt, g.point(w)).expect("general position")).collect();
        for ia in 0..body.len() {
            for ic in ia..body.len() {
                if cones[ia] != cones[ic] {
                    continue;
                }
                let tc = triangle_of(pt, g.point(body[ic])).expect("general position");
                // b = c only when ab is a path edge
                for ib in (ia + 1..=ic).filter(|&ib| ib < ic || ib == ia + 1) {
                    let (a, b, c) = (body[ia], body[ib], body[ic]);
                    let ab = triangle_of(g.point(a), g.point(b)).expect("general position");
                    tally.check(
                        !interiors_intersect(&ab, &tc),
                        || format!("interiors of the triangles at {a}->{b} and t->{c} meet"),
                        || graph_dump(g, &[(s, "s"), (t, "t"), (a, "a"), (b, "b"), (c, "c")]),
                    );
                }
            }
        }
    }
}

/// Is `w − t` strictly between the bisectors `B_t^i` and `B_t^{i+1}`?
fn between_bisectors(t: &Point, w: &Point, i: ConeIndex) -> bool {
    let d = w - t;
    let lo = i.bisector().as_point();
    let hi = i.offset(1).bisector().as_point();
    cross(&lo, &d).is_positive() && cross(&d, &hi).is_positive()
}

/// `u, v` between `B_t^i` and `B_t^{i+1}` with `v ∈ C_u^{i+3} ∪ C_u^{i+4}`
/// imply `‖uv‖hex ≤ 2(‖ut‖thex − ‖vt‖thex)`.
fn within_r_case(pts: &[Point], i: i64, tally: &mut Tally) {
    let (u, v, t) = (&pts[0], &pts[1], &pts[2]);
    let i = ConeIndex::new(i);
    let premise = between_bisectors(t, u, i)
        && between_bisectors(t, v, i)
        && matches!(cone_of(u, v), Ok(c) if c == i.offset(3) || c == i.offset(4));
    if !premise {
        tally.rejected += 1;
        return;
    }
    let lhs = hex_norm(&(v - u));
    let rhs = (thex_norm(&(u - t)) - thex_norm(&(v - t))) * Scalar::from_int(2);
    tally.check(
        lhs <= rhs,
        || format!("‖uv‖hex = {lhs} > {rhs} (i = {i})"),
        || dump(&[u, v, t], &["u", "v", "t"]),
    );
}

/// `uv ⊂ ∇_u^t` crossing both `B_t^i` and `B_t^{i+1}` implies
/// `2‖vt‖thex ≤ ‖uv‖hex`.
fn r_crossing_case(pts: &[Point], i: ConeIndex, tally: &mut Tally) {
    let (u, v, t) = (&pts[0], &pts[1], &pts[2]);
    let premise = triangle_of(u, t).is_ok_and(|tri| tri.contains(v))
        && segment_crosses_ray(u, v, t, i.bisector())
        && segment_crosses_ray(u, v, t, i.offset(1).bisector());
    if !premise {
        tally.rejected += 1;
        return;
    }
    let lhs = thex_norm(&(v - t)) * Scalar::from_int(2);
    let rhs = hex_norm(&(v - u));
    tally.check(
        lhs <= rhs,
        || format!("2‖vt‖thex = {lhs} > ‖uv‖hex = {rhs} (i = {i})"),
        || dump(&[u, v, t], &["u", "v", "t"]),
    );
}

/// `u` on the far side of `B_t^i` and `v` on the far side of `B_t^{i+1}`
/// (or the reverse), each drawn by rejection from the sample box around `t`.
fn crossing_candidate(spec: &SampleSpec, rng: &mut ChaCha8Rng, t: &Point, i: ConeIndex) -> Vec<Point> {
    let beyond = |w: &Point, cone: ConeIndex, clockwise: bool| {
        let side = cross(&cone.bisector().as_point(), w);
        cone_of(&Point::origin(), w) == Ok(cone)
            && if clockwise { side.is_negative() } else { side.is_positive() }
    };
    let forward = rng.gen_bool(0.5);
    let mut draw = |cone: ConeIndex, clockwise: bool| loop {
        let w = spec.random_point(rng);
        if beyond(&w, cone, clockwise) {
            return t + &w;
        }
    };
    let (u, v) = if forward {
        (draw(i, true), draw(i.offset(1), false))
    } else {
        let v = draw(i, true);
        (draw(i.offset(1), false), v)
    };
    vec![u, v, t.clone()]
}

/// Instance text for a point set with optional role names.
pub fn instance_text(points: &PointSet, roles: &[(usize, &str)]) -> String {
    let mut labels = vec![None; points.len()];
    for &(v, n) in roles {
        labels[v] = Some(n.to_string());
    }
    points.to_text(&labels)
}

//! Shortest paths, spanning ratios and the `d ≤ 5‖st‖thex` check.
//!
//! Edge weights are Euclidean lengths, which are irrational, so every search
//! runs twice: once on lower bounds rounded down and once on upper bounds
//! rounded up. The two results enclose the true distance. Comparisons that the
//! `f64` enclosure cannot settle are repeated in fixed point at increasing
//! precision.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::approx::{down, up, Bounds};
use crate::enclosure::{rational_fixed, sqrt_fixed};
use crate::hexgeom::{euclid_bounds, thex_bounds, thex_norm};
use crate::routing::{euclid_length, Path};
use crate::theta6::{Edge, GraphError, Theta6Graph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("graph has fewer than two vertices")]
    TooSmall,
    #[error("vertex {t} unreachable from {s}")]
    Unreachable { s: usize, t: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

trait Weight: Clone + Ord {
    fn zero() -> Self;
    fn plus(&self, other: &Self) -> Self;
}

#[derive(Clone, Copy, PartialEq, Debug)]
struct RoundDown(f64);
#[derive(Clone, Copy, PartialEq, Debug)]
struct RoundUp(f64);

macro_rules! float_weight {
    ($t:ident, $round:ident) => {
        impl Eq for $t {}
        impl PartialOrd for $t {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }
        impl Ord for $t {
            fn cmp(&self, other: &Self) -> Ordering {
                self.0.total_cmp(&other.0)
            }
        }
        impl Weight for $t {
            fn zero() -> Self {
                $t(0.0)
            }
            fn plus(&self, other: &Self) -> Self {
                $t($round(self.0 + other.0))
            }
        }
    };
}

float_weight!(RoundDown, down);
float_weight!(RoundUp, up);

impl Weight for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
}

struct Search<W> {
    dist: Vec<Option<W>>,
    pred: Vec<Option<usize>>,
}

/// Label-setting search keyed on `(distance, hops)`, so equal distances
/// prefer fewer edges.
fn dijkstra<W: Weight>(g: &Theta6Graph, s: usize, weight: impl Fn(usize, &Edge) -> W) -> Search<W> {
    let n = g.len();
    let mut dist: Vec<Option<W>> = vec![None; n];
    let mut hops = vec![usize::MAX; n];
    let mut pred = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(W::zero());
    hops[s] = 0;
    heap.push(Reverse((W::zero(), 0usize, s)));
    while let Some(Reverse((d, h, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for e in g.out_edges(u) {
            let v = e.target;
            if done[v] {
                continue;
            }
            let nd = d.plus(&weight(u, e));
            let better = match &dist[v] {
                None => true,
                Some(old) => (&nd, h + 1) < (old, hops[v]),
            };
            if better {
                dist[v] = Some(nd.clone());
                hops[v] = h + 1;
                pred[v] = Some(u);
                heap.push(Reverse((nd, h + 1, v)));
            }
        }
    }
    Search { dist, pred }
}

/// Enclosures of `d_G(s, ·)` for every target, plus the hops-minimal
/// predecessor tree of the upper-bound search.
pub struct DistanceEnclosures {
    pub source: usize,
    pub dist: Vec<Option<Bounds>>,
    pred: Vec<Option<usize>>,
}

impl DistanceEnclosures {
    pub fn new(g: &Theta6Graph, s: usize) -> Self {
        let lo = dijkstra(g, s, |_, e| RoundDown(e.euclid.lo));
        let hi = dijkstra(g, s, |_, e| RoundUp(e.euclid.hi));
        let dist = lo
            .dist
            .iter()
            .zip(&hi.dist)
            .map(|(l, h)| match (l, h) {
                (Some(l), Some(h)) => Some(Bounds::new(l.0, h.0)),
                _ => None,
            })
            .collect();
        Self { source: s, dist, pred: hi.pred }
    }

    pub fn path_to(&self, g: &Theta6Graph, t: usize) -> Option<Path> {
        self.dist[t]?;
        let mut rev = vec![t];
        let mut cur = t;
        while cur != self.source {
            cur = self.pred[cur]?;
            rev.push(cur);
        }
        rev.reverse();
        let cones = rev
            .windows(2)
            .map(|w| {
                g.out_edges(w[0])
                    .find(|e| e.target == w[1])
                    .map(|e| e.cone)
                    .expect("tree edges are graph edges")
            })
            .collect();
        Some(Path { vertices: rev, edge_cones: cones })
    }
}

/// Fixed-point enclosures `[lo, hi]·2⁻bits` of `d_G(s, ·)`.
pub fn distance_enclosures_fixed(g: &Theta6Graph, s: usize, bits: u32) -> Vec<Option<(BigInt, BigInt)>> {
    let lens: Vec<Vec<(usize, BigInt, BigInt)>> = (0..g.len())
        .map(|u| {
            g.out_edges(u)
                .map(|e| {
                    let d = g.point(e.target) - g.point(u);
                    let sq = d.x() * d.x() + d.y() * d.y();
                    let (lo, hi) = sqrt_fixed(&sq, bits);
                    (e.target, lo, hi)
                })
                .collect()
        })
        .collect();
    let find = |u: usize, v: usize, hi: bool| -> BigInt {
        let (_, lo, h) = lens[u].iter().find(|(t, _, _)| *t == v).expect("edge");
        if hi { h.clone() } else { lo.clone() }
    };
    let lo = dijkstra(g, s, |u, e| find(u, e.target, false));
    let hi = dijkstra(g, s, |u, e| find(u, e.target, true));
    lo.dist
        .into_iter()
        .zip(hi.dist)
        .map(|(l, h)| l.zip(h))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShortestPath {
    pub vertices: Vec<usize>,
    #[serde(skip)]
    pub path: Path,
    /// Encloses `d_G(s, t)`.
    pub distance: Bounds,
    /// Encloses the Euclidean length of `path`.
    pub path_length: Bounds,
    /// Another path might be shorter than `path` within the enclosure width;
    /// `path` is then the one with fewest edges among the candidates found.
    pub ambiguous: bool,
}

pub fn shortest_path(g: &Theta6Graph, s: usize, t: usize) -> Result<ShortestPath, MetricsError> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let enc = DistanceEnclosures::new(g, s);
    let path = enc.path_to(g, t).ok_or(MetricsError::Unreachable { s, t })?;
    let distance = enc.dist[t].expect("reachable");
    let path_length = euclid_length(g, &path);
    Ok(ShortestPath {
        vertices: path.vertices.clone(),
        ambiguous: distance.lo < path_length.lo,
        distance,
        path_length,
        path,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairRatio {
    pub s: usize,
    pub t: usize,
    pub distance: Bounds,
    pub euclid: Bounds,
    pub thex: Bounds,
    pub ratio_vs_euclid: Bounds,
    pub ratio_vs_thex: Bounds,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioReport {
    pub vertices: usize,
    pub worst_pair: (usize, usize),
    pub ratio_vs_euclid: Bounds,
    pub ratio_vs_thex: Bounds,
    pub worst_thex_pair: (usize, usize),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_pair: Option<Vec<PairRatio>>,
}

fn pair_ratio(g: &Theta6Graph, enc: &DistanceEnclosures, t: usize) -> Result<PairRatio, MetricsError> {
    let s = enc.source;
    let distance = enc.dist[t].ok_or(MetricsError::Unreachable { s, t })?;
    let euclid = euclid_bounds(g.point(t), g.point(s));
    let thex = thex_bounds(g.point(t), g.point(s));
    Ok(PairRatio {
        s,
        t,
        distance,
        euclid,
        thex,
        ratio_vs_euclid: distance.div(euclid),
        ratio_vs_thex: distance.div(thex),
    })
}

/// Ratio enclosures for the single pair `(s, t)`.
pub fn pair_spanning_ratio(g: &Theta6Graph, s: usize, t: usize) -> Result<PairRatio, MetricsError> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    pair_ratio(g, &DistanceEnclosures::new(g, s), t)
}

pub fn spanning_ratio(g: &Theta6Graph, per_pair: bool) -> Result<RatioReport, MetricsError> {
    if g.len() < 2 {
        return Err(MetricsError::TooSmall);
    }
    let mut table = Vec::new();
    let mut worst: Option<PairRatio> = None;
    let mut worst_thex: Option<PairRatio> = None;
    let mut euclid_lo = f64::NEG_INFINITY;
    let mut thex_lo = f64::NEG_INFINITY;
    for s in 0..g.len() {
        let enc = DistanceEnclosures::new(g, s);
        for t in (0..g.len()).filter(|&t| t != s) {
            let r = pair_ratio(g, &enc, t)?;
            euclid_lo = euclid_lo.max(r.ratio_vs_euclid.lo);
            thex_lo = thex_lo.max(r.ratio_vs_thex.lo);
            if worst.as_ref().is_none_or(|w| r.ratio_vs_euclid.hi > w.ratio_vs_euclid.hi) {
                worst = Some(r.clone());
            }
            if worst_thex.as_ref().is_none_or(|w| r.ratio_vs_thex.hi > w.ratio_vs_thex.hi) {
                worst_thex = Some(r.clone());
            }
            if per_pair {
                table.push(r);
            }
        }
    }
    let worst = worst.expect("at least one pair");
    let worst_thex = worst_thex.expect("at least one pair");
    Ok(RatioReport {
        vertices: g.len(),
        worst_pair: (worst.s, worst.t),
        ratio_vs_euclid: Bounds::new(euclid_lo, worst.ratio_vs_euclid.hi),
        ratio_vs_thex: Bounds::new(thex_lo, worst_thex.ratio_vs_thex.hi),
        worst_thex_pair: (worst_thex.s, worst_thex.t),
        per_pair: per_pair.then_some(table),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremReport {
    pub pairs: usize,
    pub passed: usize,
    pub failed: Vec<(usize, usize)>,
    pub inconclusive: Vec<(usize, usize)>,
    /// Pairs that needed fixed-point refinement.
    pub refined: usize,
    /// `5‖st‖thex − d_G(s,t)` midpoints: minimum, quartiles, maximum.
    pub margin_quantiles: [f64; 5],
    pub min_margin_pair: Option<(usize, usize)>,
}

impl TheoremReport {
    pub fn all_pass(&self) -> bool {
        self.failed.is_empty() && self.inconclusive.is_empty()
    }
}

/// Checks `d_G(s,t) ≤ 5‖st‖thex + tolerance` for every ordered pair.
/// Ambiguous comparisons are refined in fixed point up to `max_bits`.
pub fn theorem_check(g: &Theta6Graph, tolerance: f64, max_bits: u32) -> TheoremReport {
    theorem_check_from(g, 0..g.len(), tolerance, max_bits)
}

/// As [`theorem_check`], restricted to pairs whose source is in `sources`.
pub fn theorem_check_from(
    g: &Theta6Graph,
    sources: impl IntoIterator<Item = usize>,
    tolerance: f64,
    max_bits: u32,
) -> TheoremReport {
    let mut margins: Vec<(f64, (usize, usize))> = Vec::new();
    let mut report = TheoremReport {
        pairs: 0,
        passed: 0,
        failed: Vec::new(),
        inconclusive: Vec::new(),
        refined: 0,
        margin_quantiles: [0.0; 5],
        min_margin_pair: None,
    };
    for s in sources {
        let enc = DistanceEnclosures::new(g, s);
        let mut pending = Vec::new();
        for t in (0..g.len()).filter(|&t| t != s) {
            report.pairs += 1;
            let Some(d) = enc.dist[t] else {
                report.failed.push((s, t));
                continue;
            };
            let bound = thex_bounds(g.point(t), g.point(s)).scale(5.0);
            margins.push((bound.midpoint() - d.midpoint(), (s, t)));
            if d.hi <= down(bound.lo + tolerance) {
                report.passed += 1;
            } else if d.lo > up(bound.hi + tolerance) {
                report.failed.push((s, t));
            } else {
                pending.push(t);
            }
        }
        if !pending.is_empty() {
            report.refined += pending.len();
            for (t, verdict) in refine_source(g, s, &pending, tolerance, max_bits) {
                match verdict {
                    Verdict::Pass => report.passed += 1,
                    Verdict::Fail => report.failed.push((s, t)),
                    Verdict::Inconclusive => report.inconclusive.push((s, t)),
                }
            }
        }
    }
    margins.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(first) = margins.first() {
        let q = |f: f64| margins[((margins.len() - 1) as f64 * f).round() as usize].0;
        report.margin_quantiles = [q(0.0), q(0.25), q(0.5), q(0.75), q(1.0)];
        report.min_margin_pair = Some(first.1);
    }
    report
}

fn refine_source(g: &Theta6Graph, s: usize, targets: &[usize], tolerance: f64, max_bits: u32) -> Vec<(usize, Verdict)> {
    let tol = BigRational::from_f64(tolerance).expect("finite tolerance");
    let mut open: Vec<usize> = targets.to_vec();
    let mut out = Vec::new();
    let mut bits = 64;
    loop {
        let dist = distance_enclosures_fixed(g, s, bits);
        let (tol_lo, tol_hi) = rational_fixed(&tol, bits);
        let mut still = Vec::new();
        for &t in &open {
            let Some((d_lo, d_hi)) = &dist[t] else {
                out.push((t, Verdict::Fail));
                continue;
            };
            let thex = thex_norm(&(g.point(t) - g.point(s)));
            let (th_lo, th_hi) = thex.fixed_enclosure(bits);
            if *d_hi <= &th_lo * 5 + &tol_lo {
                out.push((t, Verdict::Pass));
            } else if *d_lo > &th_hi * 5 + &tol_hi {
                out.push((t, Verdict::Fail));
            } else {
                still.push(t);
            }
        }
        open = still;
        if open.is_empty() || bits >= max_bits {
            break;
        }
        bits = (bits * 2).min(max_bits);
    }
    out.extend(open.into_iter().map(|t| (t, Verdict::Inconclusive)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointset::PointSet;

    fn graph(text: &str) -> Theta6Graph {
        Theta6Graph::build(PointSet::from_text(text).unwrap())
    }

    #[test]
    fn two_points() {
        let g = graph("0 0\n3 -4\n");
        let sp = shortest_path(&g, 0, 1).unwrap();
        assert_eq!(sp.vertices, vec![0, 1]);
        assert!(sp.distance.lo <= 5.0 && 5.0 <= sp.distance.hi);
        let r = spanning_ratio(&g, true).unwrap();
        assert!(r.ratio_vs_euclid.lo <= 1.0 && 1.0 <= r.ratio_vs_euclid.hi);
        assert_eq!(r.per_pair.unwrap().len(), 2);
        let th = theorem_check(&g, 1e-9, 256);
        assert_eq!((th.pairs, th.passed), (2, 2));
    }

    #[test]
    fn too_small() {
        let g = graph("0 0\n");
        assert_eq!(spanning_ratio(&g, false).unwrap_err(), MetricsError::TooSmall);
    }

    #[test]
    fn fixed_point_agrees_with_float() {
        let g = graph("0 0\n3 -1/7\n-2 5/3\n1/2 -4\n7/5 11/3\n-13/4 -9/8\n");
        let enc = DistanceEnclosures::new(&g, 0);
        let fixed = distance_enclosures_fixed(&g, 0, 128);
        let scale = 2f64.powi(128);
        use num_traits::ToPrimitive;
        for t in 0..g.len() {
            let b = enc.dist[t].unwrap();
            let (lo, hi) = fixed[t].clone().unwrap();
            let (lo, hi) = (lo.to_f64().unwrap() / scale, hi.to_f64().unwrap() / scale);
            assert!(lo <= b.hi + 1e-12 && b.lo <= hi + 1e-12);
            assert!(hi - lo < 1e-30);
        }
    }

    #[test]
    fn refinement_settles_tight_comparisons() {
        let g = graph("0 0\n3 -1/7\n-2 5/3\n1/2 -4\n");
        let verdicts = refine_source(&g, 0, &[1, 2, 3], 1e-9, 256);
        assert!(verdicts.iter().all(|(_, v)| *v == Verdict::Pass));
    }
}

//! The point family whose Θ₆ graph has spanning ratio close to 5.
//!
//! Vertex ids follow the path order `t, s, a, b, c, p⁰, q⁰, p¹, …, q^{k−1}, p^k`
//! with `t = 0`. The q-series is placed on the segment `ct` at dyadic multiples
//! of `c` so coordinates stay small; the p-series is then exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::hexgeom::{line_intersection, Point};
use crate::metrics::{pair_spanning_ratio, MetricsError, PairRatio};
use crate::pointset::{PointSet, PointSetError};
use crate::scalar::Scalar;
use crate::theta6::Theta6Graph;

/// Fixed-point bits used for the q-series multipliers.
pub const SERIES_BITS: u32 = 96;

/// How `q^i` follows `q^{i−1}` on `ct`, with `q⁰ = λc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SeriesRule {
    /// `q^i = λ·q^{i−1}`: each step is the first one scaled about `t`, so
    /// every `q^{i−1}p^i` keeps slope `√3 − δ`.
    #[default]
    SelfSimilar,
    /// `‖q^{i−1}q^i‖ / ‖tq^i‖ = ‖q⁰c‖ / ‖tc‖`, i.e. `q^i = q^{i−1}/(2 − λ)`.
    /// Steps come out slightly short and `p^i` falls inside `∇` of `p^{i−1}`.
    Literal,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversarialError {
    #[error("delta must satisfy 0 < delta < 1/72, got {0}")]
    DeltaOutOfRange(BigRational),
    #[error("construction lost precision: {0}")]
    PrecisionExhausted(String),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Clone, Debug)]
pub struct LowerBoundInstance {
    pub delta: BigRational,
    pub points: PointSet,
    pub k: usize,
    pub labels: BTreeMap<String, usize>,
}

impl LowerBoundInstance {
    pub fn t(&self) -> usize {
        self.labels["t"]
    }

    pub fn s(&self) -> usize {
        self.labels["s"]
    }

    /// `s, a, b, c, p⁰, q⁰, …, q^{k−1}, p^k, t`.
    pub fn expected_path(&self) -> Vec<usize> {
        (1..self.points.len()).chain(std::iter::once(0)).collect()
    }

    /// Role label per vertex id.
    pub fn label_list(&self) -> Vec<Option<String>> {
        let mut out = vec![None; self.points.len()];
        for (name, &id) in &self.labels {
            out[id] = Some(name.clone());
        }
        out
    }

    pub fn to_text(&self) -> String {
        self.points.to_text(&self.label_list())
    }
}

fn rat(r: &BigRational) -> Scalar {
    Scalar::from_rational(r.clone())
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub fn lower_bound_pointset(delta: &BigRational) -> Result<LowerBoundInstance, AdversarialError> {
    lower_bound_pointset_with(delta, SeriesRule::default())
}

pub fn lower_bound_pointset_with(delta: &BigRational, rule: SeriesRule) -> Result<LowerBoundInstance, AdversarialError> {
    if !delta.is_positive() || *delta >= q(1, 72) {
        return Err(AdversarialError::DeltaOutOfRange(delta.clone()));
    }
    let d = rat(delta);
    let half_root3 = Scalar::sqrt3().half();
    let t = Point::origin();
    let s = Point::new(rat(&(q(-1, 1) + delta)), -&d);
    let a = Point::new(rat(&(q(-1, 2) + delta)), &half_root3 - &rat(&(delta * q(2, 1))));
    let b = Point::new(rat(&(q(1, 2) - delta * q(2, 1))), &half_root3 - &rat(&(delta * q(3, 1))));
    let c = Point::new(rat(&(q(1, 1) - delta * q(6, 1))), d.clone());

    let one = Scalar::one();
    let tp_dir = Point::new(one.clone(), -&d);
    let up_dir = Point::new(one.clone(), Scalar::sqrt3() - &d);
    let down_dir = Point::new(one.clone(), &d - Scalar::sqrt3());
    let lost = |what: &str| AdversarialError::PrecisionExhausted(what.to_string());

    let p0 = line_intersection(&t, &tp_dir, &c, &up_dir).ok_or_else(|| lost("p0"))?;
    let q0 = line_intersection(&t, &c, &p0, &down_dir).ok_or_else(|| lost("q0"))?;
    let lambda = q0.x().checked_div(c.x()).ok_or_else(|| lost("lambda"))?;
    let rho = match rule {
        SeriesRule::SelfSimilar => lambda.clone(),
        SeriesRule::Literal => (Scalar::from_int(2) - &lambda).recip().ok_or_else(|| lost("rho"))?,
    };
    // p^i is linear in q^i = μ·c, so p^i = μ·p_unit
    let p_unit = line_intersection(&Point::origin(), &tp_dir, &c, &down_dir).ok_or_else(|| lost("p-series"))?;
    let along = |pt: &Point, mu: &BigInt| Point::new(pt.x().scale_dyadic(mu, SERIES_BITS), pt.y().scale_dyadic(mu, SERIES_BITS));

    let mut points = vec![t, s, a, b, c.clone(), p0.clone()];
    let mut labels: BTreeMap<String, usize> = ["t", "s", "a", "b", "c", "p0"]
        .iter()
        .enumerate()
        .map(|(i, n)| (n.to_string(), i))
        .collect();

    let scale = BigInt::one() << SERIES_BITS;
    let (rho_lo, rho_hi) = rho.fixed_enclosure(SERIES_BITS);
    let rho_fix = (rho_lo + rho_hi) / 2;
    let (lam_lo, lam_hi) = lambda.fixed_enclosure(SERIES_BITS);
    let mut mu = (lam_lo + lam_hi) / 2;

    let mut k = 0usize;
    let mut p_i = p0;
    let mut q_i = q0;
    let d_approx = d.approx();
    let at_least_delta = |x: &Scalar, ax: crate::approx::Approx| match (ax - d_approx).sign() {
        Some(o) => o.is_ge(),
        None => x >= &d,
    };
    while at_least_delta(p_i.x(), p_i.approx().0) {
        labels.insert(format!("q{k}"), points.len());
        points.push(q_i.clone());
        k += 1;
        let next: BigInt = (&mu * &rho_fix + (&scale >> 1usize)) / &scale;
        if next >= mu || next.is_zero() {
            return Err(lost("q-series stopped decreasing"));
        }
        mu = next;
        q_i = along(&c, &mu);
        p_i = along(&p_unit, &mu);
        labels.insert(format!("p{k}"), points.len());
        points.push(p_i.clone());
    }
    let points = PointSet::new(points).map_err(|e| match e {
        PointSetError::InvalidPointSet(v) => lost(&format!("general position fails: {v}")),
        other => lost(&other.to_string()),
    })?;
    Ok(LowerBoundInstance { delta: delta.clone(), points, k, labels })
}

/// Ratio enclosure for the pair `(s, t)` together with the built graph.
pub fn achieved_ratio_with_graph(delta: &BigRational) -> Result<(PairRatio, LowerBoundInstance, Theta6Graph), AdversarialError> {
    let inst = lower_bound_pointset(delta)?;
    let g = Theta6Graph::build(inst.points.clone());
    let r = pair_spanning_ratio(&g, inst.s(), inst.t())?;
    Ok((r, inst, g))
}

pub fn achieved_ratio(delta: &BigRational) -> Result<PairRatio, AdversarialError> {
    achieved_ratio_with_graph(delta).map(|(r, _, _)| r)
}

/// `5 − 72δ` as a float rounded down.
pub fn guaranteed_ratio(delta: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    let v = (q(5, 1) - delta * q(72, 1)).to_f64().unwrap_or(f64::NAN);
    v.next_down()
}


#[cfg(test)]
mod ratio_tests {
    use super::*;
    use crate::routing::greedy_path;

    #[test]
    fn ratio_at_one_percent() {
        let d = q(1, 100);
        let (r, inst, g) = achieved_ratio_with_graph(&d).unwrap();
        assert!(r.ratio_vs_euclid.lo >= guaranteed_ratio(&d), "{:?}", r.ratio_vs_euclid);
        assert!(r.ratio_vs_euclid.hi <= 5.0 + 1e-9);
        let path = greedy_path(&g, inst.s(), inst.t()).unwrap();
        assert_eq!(path.vertices, inst.expected_path());
    }
}

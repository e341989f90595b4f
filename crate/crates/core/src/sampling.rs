//! Seeded random point sets in general position.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::hexgeom::Point;
use crate::pointset::PointSet;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub instances: usize,
    pub size: usize,
    /// Coordinates lie in `[−range, range]`.
    pub range: i64,
    /// Grid denominator for rational coordinates.
    pub denominator: i64,
    /// Add small `√3` parts to coordinates.
    pub irrational: bool,
    pub seed: u64,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { instances: 100, size: 16, range: 8, denominator: 1 << 12, irrational: false, seed: 0 }
    }
}

impl SampleSpec {
    pub fn random_scalar(&self, rng: &mut ChaCha8Rng) -> Scalar {
        let span = self.range * self.denominator;
        let den = BigInt::from(self.denominator);
        let a = BigRational::new(BigInt::from(rng.gen_range(-span..=span)), den.clone());
        if self.irrational && rng.gen_bool(0.5) {
            let b = BigRational::new(BigInt::from(rng.gen_range(-self.denominator..=self.denominator)), den * 4);
            Scalar::new(a, b)
        } else {
            Scalar::from_rational(a)
        }
    }

    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> Point {
        Point::new(self.random_scalar(rng), self.random_scalar(rng))
    }

    /// `size` points; redraws the whole set until it is in general position.
    pub fn random_pointset(&self, rng: &mut ChaCha8Rng, size: usize) -> PointSet {
        loop {
            let pts = (0..size).map(|_| self.random_point(rng)).collect();
            if let Ok(set) = PointSet::new(pts) {
                return set;
            }
        }
    }
}

/// Index of `t` in a [`spiral_instance`].
pub const SPIRAL_T: usize = 0;
/// Index of `s` in a [`spiral_instance`].
pub const SPIRAL_S: usize = 1;

fn dyadic(v: f64) -> (i64, i64) {
    let d = 1i64 << 24;
    ((v * d as f64).round() as i64, d)
}

fn dyadic_point(x: f64, y: f64) -> Point {
    Point::from_ratios(dyadic(x), dyadic(y))
}

/// Point at `angle` degrees with hex norm `h`.
fn polar_hex(angle: f64, h: f64) -> (f64, f64) {
    let s3 = 3f64.sqrt();
    let (dy, dx) = angle.to_radians().sin_cos();
    let unit = (2.0 * dy / s3).abs().max((dx + dy / s3).abs()).max((dx - dy / s3).abs());
    (dx * h / unit, dy * h / unit)
}

/// A pair `s ∈ C_t^0` whose C_s^3 neighbour `y` starts a greedy path that winds
/// once around `t`, and whose C_s^4 neighbour starts a clockwise path.
///
/// `t` is at the origin and `‖st‖hex = 1`. Returns `None` for the rare draw
/// that is not in general position or cannot place the crossing vertex.
pub fn spiral_instance(rng: &mut ChaCha8Rng) -> Option<PointSet> {
    let s3 = 3f64.sqrt();
    let mut pts = vec![dyadic_point(0.0, 0.0)];
    let (sx, sy) = polar_hex(rng.gen_range(290.0..299.5), 1.0);
    pts.push(dyadic_point(sx, sy));
    let eps = rng.gen_range(0.001..0.03);
    let yx = sx + rng.gen_range(0.5..1.0) * (-sy - eps) / s3;
    pts.push(dyadic_point(yx, -eps));

    // each step shrinks enough to clear the previous vertex's offset from the ray
    let mut h = yx + eps / s3;
    let mut off = 2.0 * eps / s3;
    for k in 2..=5 {
        for _ in 0..rng.gen_range(1..=2) {
            h = (h - 1.2 * off) * rng.gen_range(0.9..0.995);
            let d = rng.gen_range(0.3..4.0);
            let (x, y) = polar_hex(300.0 + 60.0 * k as f64 - d, h);
            pts.push(dyadic_point(x, y));
            off = h * d.to_radians().sin() * 1.2;
        }
    }
    // u^y in C_t^0 left of the C_s^3 column, v^y in C_t^1 above y
    h = (h - 1.2 * off) * rng.gen_range(0.9..0.995);
    let ux = (0.49 * h).min(sx - 0.5 + 0.5 * h - 0.01) - rng.gen_range(0.0..0.1) * h;
    if ux < -0.5 * h {
        return None;
    }
    pts.push(dyadic_point(ux, -s3 / 2.0 * h));
    if rng.gen_bool(0.8) {
        let vx = ux + rng.gen_range(0.0..0.5) * h;
        if vx > 0.0 {
            pts.push(dyadic_point(vx, -eps * rng.gen_range(0.05..0.95)));
        }
    }

    let mut h = rng.gen_range(0.5..0.98);
    let mut off = 0.0;
    for k in [0, 5, 4, 3] {
        for _ in 0..rng.gen_range(0..=2) {
            h = (h - 1.2 * off) * rng.gen_range(0.9..0.995);
            let d = rng.gen_range(0.3..4.0);
            let (x, y) = polar_hex(240.0 + 60.0 * k as f64 + d, h);
            pts.push(dyadic_point(x, y));
            off = h * d.to_radians().sin() * 1.2;
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        pts.push(dyadic_point(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
    }
    PointSet::new(pts).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn deterministic_and_valid() {
        let spec = SampleSpec { irrational: true, ..SampleSpec::default() };
        let a = spec.random_pointset(&mut ChaCha8Rng::seed_from_u64(7), 20);
        let b = spec.random_pointset(&mut ChaCha8Rng::seed_from_u64(7), 20);
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert!(a.iter().any(|p| !p.x().is_rational() || !p.y().is_rational()));
    }
}

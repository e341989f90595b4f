//! Euclidean lengths as rational enclosures of arbitrary width.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::approx::Bounds;
use crate::hexgeom::Point;
use crate::scalar::Scalar;

/// Default relative width for Euclidean enclosures.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-15;

#[derive(Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn exact(v: BigRational) -> Self {
        Self { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    /// Outward-rounded float bounds.
    pub fn to_bounds(&self) -> Bounds {
        Bounds::new(rational_down(&self.lo), rational_up(&self.hi))
    }

    pub fn midpoint(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl fmt::Debug for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

pub(crate) fn rational_down(r: &BigRational) -> f64 {
    let v = r.to_f64().unwrap_or(f64::NEG_INFINITY);
    if v == 0.0 && r.is_zero() {
        0.0
    } else {
        v.next_down()
    }
}

pub(crate) fn rational_up(r: &BigRational) -> f64 {
    let v = r.to_f64().unwrap_or(f64::INFINITY);
    if v == 0.0 && r.is_zero() {
        0.0
    } else {
        v.next_up()
    }
}

/// `‖v‖₂` enclosed with width at most `relative_tolerance · max(‖v‖₂, 2⁻⁶⁰)`.
pub fn euclid_norm(v: &Point, relative_tolerance: f64) -> Enclosure {
    let sq = v.x() * v.x() + v.y() * v.y();
    let magnitude = sq.to_f64().max(0.0).sqrt().max(2f64.powi(-60));
    let target = (relative_tolerance * magnitude).max(f64::MIN_POSITIVE);
    let bits = ((4.0 / target).log2().ceil().max(53.0)) as u32;
    sqrt_enclosure(&sq, bits)
}

/// Encloses `√s` for `s ≥ 0` with absolute error below `3·2⁻bits`.
pub fn sqrt_enclosure(s: &Scalar, bits: u32) -> Enclosure {
    if s.is_rational() {
        if let Some(r) = rational_sqrt(s.rational_part()) {
            return Enclosure::exact(r);
        }
    }
    let (lo_sq, hi_sq) = s.fixed_enclosure(2 * bits);
    let lo_sq = lo_sq.max(BigInt::zero());
    let hi_sq = hi_sq.max(BigInt::zero());
    let lo = lo_sq.sqrt();
    let root = hi_sq.sqrt();
    let hi = if &root * &root == hi_sq { root } else { root + 1 };
    let scale = BigInt::one() << bits;
    Enclosure {
        lo: BigRational::new(lo, scale.clone()),
        hi: BigRational::new(hi, scale),
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

/// Fixed-point enclosure `[lo, hi]·2⁻bits` of `√s`.
pub fn sqrt_fixed(s: &Scalar, bits: u32) -> (BigInt, BigInt) {
    let (lo_sq, hi_sq) = s.fixed_enclosure(2 * bits);
    let lo = lo_sq.max(BigInt::zero()).sqrt();
    let hi_sq = hi_sq.max(BigInt::zero());
    let root = hi_sq.sqrt();
    let hi = if (&root * &root).cmp(&hi_sq).is_eq() { root } else { root + 1 };
    (lo, hi)
}

/// `floor(r·2^bits)` and `ceil(r·2^bits)`.
pub fn rational_fixed(r: &BigRational, bits: u32) -> (BigInt, BigInt) {
    let scaled = r * BigRational::from_integer(BigInt::one() << bits);
    let (q, rem) = scaled.numer().div_mod_floor(scaled.denom());
    if rem.is_zero() {
        (q.clone(), q)
    } else {
        (q.clone(), q + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: i64, y: i64) -> Point {
        Point::new(Scalar::from_int(x), Scalar::from_int(y))
    }

    #[test]
    fn pythagorean_is_exact() {
        let e = euclid_norm(&pt(3, 4), DEFAULT_RELATIVE_TOLERANCE);
        assert!(e.is_exact());
        assert_eq!(e.lo, BigRational::from_integer(5.into()));
        assert!(euclid_norm(&pt(1, 0), DEFAULT_RELATIVE_TOLERANCE).is_exact());
    }

    #[test]
    fn sqrt2_is_tight() {
        let e = euclid_norm(&pt(1, 1), DEFAULT_RELATIVE_TOLERANCE);
        let b = e.to_bounds();
        assert!(b.lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= b.hi);
        assert!(e.width().to_f64().unwrap() <= 1e-15);
    }

    #[test]
    fn irrational_coordinates() {
        // (1, √3) has length 2
        let v = Point::new(Scalar::one(), Scalar::sqrt3());
        let e = euclid_norm(&v, 1e-20);
        assert!(e.lo <= BigRational::from_integer(2.into()));
        assert!(e.hi >= BigRational::from_integer(2.into()));
        assert!(e.width().to_f64().unwrap() < 1e-19);
    }
}

//! Floating-point filter values and outward-rounded `f64` intervals.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

pub const SQRT3_F64: f64 = 1.732_050_807_568_877_2;

/// `value` within `err` of some exact quantity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub err: f64,
}

const ROUND: f64 = f64::EPSILON;

impl Approx {
    pub const fn new(value: f64, err: f64) -> Self {
        Self { value, err }
    }

    pub const fn exact(value: f64) -> Self {
        Self { value, err: 0.0 }
    }

    pub const SQRT3: Approx = Approx::new(SQRT3_F64, 2.3e-16);

    /// Sign if certain.
    pub fn sign(self) -> Option<Ordering> {
        if !self.value.is_finite() || !self.err.is_finite() {
            return None;
        }
        if self.value > self.err {
            Some(Ordering::Greater)
        } else if self.value < -self.err {
            Some(Ordering::Less)
        } else if self.err == 0.0 && self.value == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn lo(self) -> f64 {
        (self.value - self.err).next_down()
    }

    pub fn hi(self) -> f64 {
        (self.value + self.err).next_up()
    }

    pub fn abs(self) -> Self {
        Self::new(self.value.abs(), self.err)
    }

    pub fn bounds(self) -> Bounds {
        Bounds::new(self.lo(), self.hi())
    }
}

impl Add for Approx {
    type Output = Approx;
    fn add(self, rhs: Approx) -> Approx {
        let v = self.value + rhs.value;
        Approx::new(v, self.err + rhs.err + ROUND * v.abs())
    }
}

impl Sub for Approx {
    type Output = Approx;
    fn sub(self, rhs: Approx) -> Approx {
        self + (-rhs)
    }
}

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx::new(-self.value, self.err)
    }
}

impl Mul for Approx {
    type Output = Approx;
    fn mul(self, rhs: Approx) -> Approx {
        let v = self.value * rhs.value;
        let err = self.err * rhs.value.abs()
            + rhs.err * self.value.abs()
            + self.err * rhs.err
            + ROUND * v.abs();
        Approx::new(v, err * (1.0 + 4.0 * ROUND) + f64::MIN_POSITIVE)
    }
}

/// Closed interval `[lo, hi]` with outward rounding on every operation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted bounds {lo} > {hi}");
        Self { lo, hi }
    }

    pub fn point(v: f64) -> Self {
        Self { lo: v, hi: v }
    }

    pub fn zero() -> Self {
        Self::point(0.0)
    }

    pub fn width(self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn add(self, other: Bounds) -> Bounds {
        Bounds::new(down(self.lo + other.lo), up(self.hi + other.hi))
    }

    pub fn scale(self, c: f64) -> Bounds {
        debug_assert!(c >= 0.0);
        Bounds::new(down(self.lo * c), up(self.hi * c))
    }

    /// `self / other` for positive intervals.
    pub fn div(self, other: Bounds) -> Bounds {
        debug_assert!(other.lo > 0.0 && self.lo >= 0.0);
        Bounds::new(down(self.lo / other.hi), up(self.hi / other.lo))
    }

    pub fn sqrt(self) -> Bounds {
        Bounds::new(down(self.lo.max(0.0).sqrt()).max(0.0), up(self.hi.max(0.0).sqrt()))
    }

    pub fn overlaps(self, other: Bounds) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Rounds toward −∞ past the result of one correctly-rounded operation.
pub(crate) fn down(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.next_down()
    }
}

pub(crate) fn up(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.next_up()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_is_conservative() {
        assert_eq!(Approx::new(1.0, 0.5).sign(), Some(Ordering::Greater));
        assert_eq!(Approx::new(-1.0, 0.5).sign(), Some(Ordering::Less));
        assert_eq!(Approx::new(0.1, 0.5).sign(), None);
        assert_eq!(Approx::exact(0.0).sign(), Some(Ordering::Equal));
    }

    #[test]
    fn sqrt3_encloses() {
        let a = Approx::SQRT3 * Approx::SQRT3 - Approx::exact(3.0);
        assert!(a.value.abs() <= a.err);
    }

    #[test]
    fn bounds_arithmetic_is_outward() {
        let b = Bounds::point(0.1).add(Bounds::point(0.2));
        assert!(b.lo <= 0.1 + 0.2 && 0.1 + 0.2 < b.hi && b.lo < b.hi);
        let r = Bounds::point(2.0).sqrt();
        assert!(r.lo <= std::f64::consts::SQRT_2 && std::f64::consts::SQRT_2 <= r.hi);
    }
}

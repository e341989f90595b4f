//! Exact numbers of the form `a + b·√3` with `a`, `b` arbitrary-precision rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::approx::Approx;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse scalar from {0:?}")]
pub struct ParseScalarError(pub String);

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    rational: BigRational,
    root3: BigRational,
}

impl Scalar {
    pub fn new(rational: BigRational, root3: BigRational) -> Self {
        Self { rational, root3 }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn sqrt3() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `n / d`; panics when `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.rational
    }

    pub fn root3_part(&self) -> &BigRational {
        &self.root3
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.root3.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.root3.is_zero()
    }

    pub fn sign(&self) -> Ordering {
        let sa = sign_of(&self.rational);
        let sb = sign_of(&self.root3);
        match (sa, sb) {
            (s, Ordering::Equal) | (Ordering::Equal, s) => s,
            (x, y) if x == y => x,
            _ => {
                let a2 = &self.rational * &self.rational;
                let b2 = &self.root3 * &self.root3 * BigRational::from_integer(3.into());
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sb,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// `a − b√3`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.rational.clone(), -&self.root3)
    }

    /// `a² − 3b²`, nonzero unless `self` is zero.
    pub fn field_norm(&self) -> BigRational {
        &self.rational * &self.rational
            - &self.root3 * &self.root3 * BigRational::from_integer(3.into())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.field_norm();
        Some(Self::new(&self.rational / &n, -&self.root3 / &n))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        if other.is_rational() {
            if other.rational.is_zero() {
                return None;
            }
            return Some(self.scale(&other.rational.recip()));
        }
        other.recip().map(|r| self * &r)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(&self.rational * c, &self.root3 * c)
    }

    /// `self · mu / 2^bits` without a full gcd per component.
    pub fn scale_dyadic(&self, mu: &BigInt, bits: u32) -> Self {
        Self::new(dyadic_product(&self.rational, mu, bits), dyadic_product(&self.root3, mu, bits))
    }

    pub fn half(&self) -> Self {
        self.scale(&BigRational::new(1.into(), 2.into()))
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Nearest-ish `f64`; use [`Scalar::approx`] when an error bound is needed.
    pub fn to_f64(&self) -> f64 {
        self.approx().value
    }

    /// Floating-point value with a rigorous absolute error bound.
    pub fn approx(&self) -> Approx {
        let a = ratio_to_f64(&self.rational);
        if self.root3.is_zero() {
            return Approx::new(a, rational_err(a));
        }
        let b = ratio_to_f64(&self.root3);
        let v = a + b * crate::approx::SQRT3_F64;
        let magnitude = a.abs() + 2.0 * b.abs();
        if v.abs() >= magnitude * 1e-6 && magnitude.is_finite() {
            return Approx::new(v, 8.0 * f64::EPSILON * magnitude + f64::MIN_POSITIVE);
        }
        // heavy cancellation: evaluate in fixed point
        let bits = 128 + magnitude_bits(magnitude);
        let (lo, hi) = self.fixed_enclosure(bits);
        let scale = (bits as f64).exp2();
        let lo_f = big_to_f64(&lo) / scale;
        let hi_f = big_to_f64(&hi) / scale;
        let mid = (lo_f + hi_f) * 0.5;
        let err = (hi_f - lo_f).abs() + 4.0 * f64::EPSILON * mid.abs() + f64::MIN_POSITIVE;
        Approx::new(mid, err)
    }

    /// Integers `lo ≤ self·2^bits ≤ hi`.
    pub fn fixed_enclosure(&self, bits: u32) -> (BigInt, BigInt) {
        let scale = BigInt::one() << bits;
        let a = &self.rational * BigRational::from_integer(scale.clone());
        let a_lo = a.floor().to_integer();
        let a_hi = a.ceil().to_integer();
        if self.root3.is_zero() {
            return (a_lo, a_hi);
        }
        // guard bits keep the error of the √3 approximation below one unit
        let p = self.root3.numer();
        let guard = p.bits() as u32 + 2;
        let q = self.root3.denom() << guard;
        // r ≤ √3·2^(bits+guard) < r + 1
        let r = (BigInt::from(3) << (2 * (bits + guard))).sqrt();
        let (b_lo, b_hi) = if p.is_positive() {
            ((p * &r).div_floor(&q), ceil_div(&(p * (&r + 1u32)), &q))
        } else {
            ((p * (&r + 1u32)).div_floor(&q), ceil_div(&(p * &r), &q))
        };
        (a_lo + b_lo, a_hi + b_hi)
    }
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn magnitude_bits(m: f64) -> u32 {
    if m <= 1.0 || !m.is_finite() {
        0
    } else {
        m.log2().ceil() as u32
    }
}

fn big_to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(f64::NAN)
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = big_to_f64(r.numer());
        let d = big_to_f64(r.denom());
        n / d
    })
}

fn rational_err(v: f64) -> f64 {
    2.0 * f64::EPSILON * v.abs() + f64::MIN_POSITIVE
}

fn sign_of(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Scalar::new(&a.rational + &b.rational, &a.root3 + &b.root3));
binop!(Sub, sub, |a, b| Scalar::new(&a.rational - &b.rational, &a.root3 - &b.root3));
binop!(Mul, mul, |a, b| {
    if a.root3.is_zero() {
        return b.scale(&a.rational);
    }
    if b.root3.is_zero() {
        return a.scale(&b.rational);
    }
    let three = BigRational::from_integer(3.into());
    Scalar::new(
        &a.rational * &b.rational + &a.root3 * &b.root3 * three,
        &a.rational * &b.root3 + &a.root3 * &b.rational,
    )
});

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.rational, -self.root3)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.rational, -&self.root3)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root3.is_zero() {
            return write!(f, "{}", self.rational);
        }
        if self.rational.is_zero() {
            return write!(f, "{}*sqrt3", self.root3);
        }
        if self.root3.is_negative() {
            write!(f, "{}-{}*sqrt3", self.rational, -&self.root3)
        } else {
            write!(f, "{}+{}*sqrt3", self.rational, self.root3)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let stripped = compact
            .strip_suffix("sqrt3")
            .or_else(|| compact.strip_suffix("√3"));
        let Some(body) = stripped else {
            return parse_rational(&compact).map(Scalar::from_rational).ok_or_else(err);
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
        let (rat_str, coef_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let rational = if rat_str.is_empty() {
            BigRational::zero()
        } else {
            parse_rational(rat_str).ok_or_else(err)?
        };
        let root3 = match coef_str {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            c => parse_rational(c.strip_prefix('+').unwrap_or(c)).ok_or_else(err)?,
        };
        Ok(Scalar::new(rational, root3))
    }
}

/// Parses `p/q`, an integer, or a decimal with optional exponent, exactly.
/// `r · mu / 2^bits` for reduced `r`: the odd common factor can only come
/// from `mu` and the denominator.
fn dyadic_product(r: &BigRational, mu: &BigInt, bits: u32) -> BigRational {
    if r.is_zero() || mu.is_zero() {
        return BigRational::zero();
    }
    let mu_twos = mu.trailing_zeros().unwrap_or(0);
    let mu_odd = mu >> mu_twos;
    let den_twos = r.denom().trailing_zeros().unwrap_or(0);
    let den_odd = r.denom() >> den_twos;
    let g = (&den_odd % &mu_odd).gcd(&mu_odd);
    let num_twos = r.numer().trailing_zeros().unwrap_or(0);
    let top_twos = num_twos + mu_twos;
    let bottom_twos = den_twos + u64::from(bits);
    let common = top_twos.min(bottom_twos);
    let num = (r.numer() >> num_twos) * (&mu_odd / &g) << (top_twos - common) as usize;
    let den = (&den_odd / &g) << (bottom_twos - common) as usize;
    BigRational::new_raw(num, den)
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.parse().ok()?;
        let q: BigInt = q.parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all: BigInt = format!("0{int_part}{frac_part}").parse().ok()?;
    let ten = BigInt::from(10);
    let shift = exponent - frac_part.len() as i32;
    let mut value = BigRational::from_integer(all);
    if shift >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, shift as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-shift) as usize));
    }
    Some(if negative { -value } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn sign_of_mixed_parts() {
        assert!(s("2-1*sqrt3").is_positive());
        assert!(s("-2+1*sqrt3").is_negative());
        assert!(s("1-1*sqrt3").is_negative());
        assert!(s("-7/4+1*sqrt3").is_negative());
        assert!(s("-7/4+1*sqrt3") < Scalar::zero());
        assert!(s("-17/10+1*sqrt3").is_positive());
        assert_eq!(Scalar::zero().sign(), Ordering::Equal);
    }

    #[test]
    fn parse_forms() {
        assert_eq!(s("-0.999"), Scalar::from_ratio(-999, 1000));
        assert_eq!(s("1e-3"), Scalar::from_ratio(1, 1000));
        assert_eq!(s("3/4+1/2*sqrt3"), Scalar::new(BigRational::new(3.into(), 4.into()), BigRational::new(1.into(), 2.into())));
        assert_eq!(s("sqrt3"), Scalar::sqrt3());
        assert_eq!(s("-sqrt3"), -Scalar::sqrt3());
        assert_eq!(s("1/2-sqrt3"), Scalar::from_ratio(1, 2) - Scalar::sqrt3());
        assert_eq!(s("-1/2*sqrt3"), Scalar::sqrt3().scale(&BigRational::new((-1).into(), 2.into())));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for t in ["0", "-5/3", "1/2*sqrt3", "3/4+1/2*sqrt3", "3/4-1/2*sqrt3", "-2-7*sqrt3"] {
            assert_eq!(s(t).to_string(), t);
            assert_eq!(s(&s(t).to_string()), s(t));
        }
    }

    #[test]
    fn field_operations() {
        let x = s("1+1*sqrt3");
        let y = x.recip().unwrap();
        assert_eq!(&x * &y, Scalar::one());
        assert_eq!(Scalar::sqrt3() * Scalar::sqrt3(), Scalar::from_int(3));
        assert_eq!(s("3").checked_div(&s("2*sqrt3")).unwrap(), s("1/2*sqrt3"));
        assert!(x.checked_div(&Scalar::zero()).is_none());
    }

    #[test]
    fn dyadic_scaling_matches_plain_scaling() {
        let mu = BigInt::from(0b1011_0100u32);
        for v in ["3/20+7/12*sqrt3", "-5/8", "9*sqrt3", "0"] {
            let v = s(v);
            let m = BigRational::new(mu.clone(), BigInt::one() << 9);
            let fast = v.scale_dyadic(&mu, 9);
            assert_eq!(fast, v.scale(&m));
            assert_eq!(fast.rational_part().denom(), v.scale(&m).rational_part().denom());
        }
    }

    #[test]
    fn approx_encloses_cancelling_values() {
        // 97 - 56√3 ≈ 0.00515 with large parts
        let v = s("97-56*sqrt3");
        let a = v.approx();
        let exact = 97.0_f64 - 56.0 * 3f64.sqrt();
        assert!((a.value - exact).abs() <= a.err + 1e-12);
        assert!(a.err < 1e-12);
        let (lo, hi) = v.fixed_enclosure(64);
        assert!(lo <= hi && &hi - &lo <= BigInt::from(3));
    }
}

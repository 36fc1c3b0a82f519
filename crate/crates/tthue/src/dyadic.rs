//! Exact dyadic numbers `m * 2^e` with directed rounding.
//!
//! A [`Dyadic`] stores an arbitrary-precision mantissa and a machine-word
//! exponent, kept in canonical form: the mantissa is odd or zero, and zero
//! forces exponent zero. Ring operations and comparisons are exact; precision
//! only enters through the explicit [`Dyadic::round`] operation, which rounds
//! to a requested number of mantissa bits in a caller-chosen direction. This
//! is the ground layer for the outward-rounded enclosures in
//! [`crate::enclosure`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Rounding direction for precision-reducing operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    /// Round toward negative infinity.
    Floor,
    /// Round toward positive infinity.
    Ceil,
}

impl Rounding {
    /// The opposite direction.
    pub fn flip(self) -> Self {
        match self {
            Rounding::Floor => Rounding::Ceil,
            Rounding::Ceil => Rounding::Floor,
        }
    }
}

/// An exact dyadic rational `mantissa * 2^exponent`.
///
/// Canonical form: `mantissa` is odd or zero; zero has exponent 0. Structural
/// equality therefore coincides with numerical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

/// `x >> k` rounding toward negative infinity.
fn shr_floor(x: &BigInt, k: u64) -> BigInt {
    // num-bigint's Shr on BigInt is arithmetic (floor) for negative values.
    x >> k
}

/// `x / 2^k` rounding toward positive infinity.
fn shr_ceil(x: &BigInt, k: u64) -> BigInt {
    -shr_floor(&-x, k)
}

/// Directed integer division; `den` must be positive.
fn div_dir(num: &BigInt, den: &BigInt, dir: Rounding) -> BigInt {
    debug_assert!(den.is_positive());
    match dir {
        Rounding::Floor => num.div_floor(den),
        Rounding::Ceil => -(-num).div_floor(den),
    }
}

impl Dyadic {
    /// Builds `mantissa * 2^exponent` and canonicalizes.
    pub fn new(mantissa: BigInt, exponent: i64) -> Self {
        if mantissa.is_zero() {
            return Dyadic { mantissa, exponent: 0 };
        }
        let tz = mantissa.trailing_zeros().expect("nonzero mantissa");
        if tz == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: shr_floor(&mantissa, tz),
                exponent: exponent + tz as i64,
            }
        }
    }

    /// The exact value zero.
    pub fn zero() -> Self {
        Dyadic { mantissa: BigInt::zero(), exponent: 0 }
    }

    /// The exact value one.
    pub fn one() -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: 0 }
    }

    /// Exact conversion from a machine integer.
    pub fn from_int(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// Exact conversion from a big integer.
    pub fn from_bigint(v: BigInt) -> Self {
        Dyadic::new(v, 0)
    }

    /// `2^k` exactly.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mantissa: BigInt::one(), exponent: k }
    }

    /// Directed conversion from an exact rational to at most `bits + 1`
    /// significant bits. Exact when the denominator is a power of two small
    /// enough to fit the budget; otherwise off by less than one unit in the
    /// last place, on the requested side.
    pub fn from_ratio(r: &Ratio<BigInt>, bits: u32, dir: Rounding) -> Self {
        let p = r.numer();
        let q = r.denom();
        if p.is_zero() {
            return Dyadic::zero();
        }
        debug_assert!(q.is_positive());
        let w = bits as i64 + 1 + q.bits() as i64 - p.magnitude().bits() as i64;
        let m = if w >= 0 {
            div_dir(&(p << w as u64), q, dir)
        } else {
            div_dir(p, &(q << (-w) as u64), dir)
        };
        Dyadic::new(m, -w)
    }

    /// Mantissa in canonical form (odd or zero).
    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Exponent in canonical form.
    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Number of significant mantissa bits (0 for zero).
    pub fn precision_bits(&self) -> u64 {
        self.mantissa.bits()
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Sign as -1, 0, or +1.
    pub fn signum(&self) -> i32 {
        match self.mantissa.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic { mantissa: self.mantissa.abs(), exponent: self.exponent }
    }

    /// Exact multiplication by `2^k`.
    pub fn shl(&self, k: i64) -> Self {
        if self.is_zero() {
            self.clone()
        } else {
            Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent + k }
        }
    }

    /// Exact halving.
    pub fn half(&self) -> Self {
        self.shl(-1)
    }

    /// Rounds to at most `bits` significant mantissa bits in direction `dir`.
    /// Values already within the budget are returned unchanged.
    pub fn round(&self, bits: u32, dir: Rounding) -> Self {
        assert!(bits >= 1, "rounding needs at least one mantissa bit");
        let have = self.mantissa.bits();
        if have <= bits as u64 {
            return self.clone();
        }
        let drop = have - bits as u64;
        let m = match dir {
            Rounding::Floor => shr_floor(&self.mantissa, drop),
            Rounding::Ceil => shr_ceil(&self.mantissa, drop),
        };
        Dyadic::new(m, self.exponent + drop as i64)
    }

    /// Largest integer `<= self`.
    pub fn floor_int(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shr_floor(&self.mantissa, (-self.exponent) as u64)
        }
    }

    /// Smallest integer `>= self`.
    pub fn ceil_int(&self) -> BigInt {
        if self.exponent >= 0 {
            &self.mantissa << self.exponent as u64
        } else {
            shr_ceil(&self.mantissa, (-self.exponent) as u64)
        }
    }

    /// `self * 2^w`, rounded to an integer in direction `dir`.
    pub fn scaled_int(&self, w: i64, dir: Rounding) -> BigInt {
        let shifted = self.shl(w);
        match dir {
            Rounding::Floor => shifted.floor_int(),
            Rounding::Ceil => shifted.ceil_int(),
        }
    }

    /// Exact comparison against a rational.
    pub fn cmp_ratio(&self, r: &Ratio<BigInt>) -> Ordering {
        // m*2^e vs p/q  <=>  m*2^e*q vs p  (q > 0).
        let p = r.numer();
        let q = r.denom();
        if self.exponent >= 0 {
            ((&self.mantissa << self.exponent as u64) * q).cmp(p)
        } else {
            (&self.mantissa * q).cmp(&(p << (-self.exponent) as u64))
        }
    }

    /// Exact conversion to a rational.
    pub fn to_ratio(&self) -> Ratio<BigInt> {
        if self.exponent >= 0 {
            Ratio::from_integer(&self.mantissa << self.exponent as u64)
        } else {
            Ratio::new(self.mantissa.clone(), BigInt::one() << (-self.exponent) as u64)
        }
    }

    /// Nearest `f64`, for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = self.mantissa.bits() as i64;
        let shift = b - 54;
        let m = if shift > 0 {
            shr_floor(&self.mantissa, shift as u64)
        } else {
            &self.mantissa << (-shift) as u64
        };
        let e = self.exponent + shift;
        let base = m.to_f64().unwrap_or(f64::NAN);
        if e >= 0 {
            base * 2f64.powi(e.min(i32::MAX as i64) as i32)
        } else {
            base * 2f64.powi(e.max(i32::MIN as i64) as i32)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // Same nonzero sign: compare magnitudes, cheaply when the binades
        // already separate them (|v| lies in [2^(L-1), 2^L) for L = e + bits).
        let la = self.exponent + self.mantissa.bits() as i64;
        let lb = other.exponent + other.mantissa.bits() as i64;
        let mag = if la != lb {
            la.cmp(&lb)
        } else {
            let e = self.exponent.min(other.exponent);
            let ma = self.mantissa.magnitude() << (self.exponent - e) as u64;
            let mb = other.mantissa.magnitude() << (other.exponent - e) as u64;
            ma.cmp(&mb)
        };
        if sa > 0 {
            mag
        } else {
            mag.reverse()
        }
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exponent.min(rhs.exponent);
        let m = (&self.mantissa << (self.exponent - e) as u64)
            + (&rhs.mantissa << (rhs.exponent - e) as u64);
        Dyadic::new(m, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mantissa * &rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mantissa: -&self.mantissa, exponent: self.exponent }
    }
}

impl fmt::Display for Dyadic {
    /// Canonical text form `m*2^e`, exact and round-trippable.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mantissa, self.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dyadic({} ~ {:.6e})", self, self.to_f64())
    }
}

/// Error from parsing the `m*2^e` text form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDyadicError(String);

impl fmt::Display for ParseDyadicError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid dyadic literal: {}", self.0)
    }
}

impl std::error::Error for ParseDyadicError {}

impl FromStr for Dyadic {
    type Err = ParseDyadicError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (m_str, e_str) = s
            .split_once("*2^")
            .ok_or_else(|| ParseDyadicError(format!("missing '*2^' in {s:?}")))?;
        let m = BigInt::from_str(m_str.trim())
            .map_err(|e| ParseDyadicError(format!("bad mantissa in {s:?}: {e}")))?;
        let e = i64::from_str(e_str.trim())
            .map_err(|e| ParseDyadicError(format!("bad exponent in {s:?}: {e}")))?;
        Ok(Dyadic::new(m, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: i64, e: i64) -> Dyadic {
        Dyadic::new(BigInt::from(m), e)
    }

    #[test]
    fn canonical_form_is_odd_or_zero() {
        let x = d(12, 3); // 12*2^3 = 3*2^5
        assert_eq!(x.mantissa(), &BigInt::from(3));
        assert_eq!(x.exponent(), 5);
        let z = d(0, 17);
        assert!(z.is_zero());
        assert_eq!(z.exponent(), 0);
    }

    #[test]
    fn bigint_shr_is_floor_for_negatives() {
        // The rounding helpers rely on arithmetic shift semantics.
        assert_eq!(shr_floor(&BigInt::from(-3), 1), BigInt::from(-2));
        assert_eq!(shr_ceil(&BigInt::from(-3), 1), BigInt::from(-1));
        assert_eq!(shr_floor(&BigInt::from(3), 1), BigInt::from(1));
        assert_eq!(shr_ceil(&BigInt::from(3), 1), BigInt::from(2));
    }

    #[test]
    fn exact_ring_ops() {
        let a = d(3, -2); // 0.75
        let b = d(5, -3); // 0.625
        assert_eq!(&a + &b, d(11, -3));
        assert_eq!(&a - &b, d(1, -3));
        assert_eq!(&a * &b, d(15, -5));
        assert_eq!(-&a, d(-3, -2));
    }

    #[test]
    fn comparison_crosses_binades_and_signs() {
        assert!(d(1, 100) > d(3, 50));
        assert!(d(-1, 100) < d(-3, 50));
        assert!(d(1, -80) > Dyadic::zero());
        assert!(d(-1, 1000) < d(1, -1000));
        assert_eq!(d(4, 0), d(1, 2));
        assert!(d(5, -3) < d(3, -2));
    }

    #[test]
    fn directed_rounding_brackets_the_value() {
        let x = d(0b10110111, -4); // 183/16
        let lo = x.round(3, Rounding::Floor);
        let hi = x.round(3, Rounding::Ceil);
        assert!(lo <= x && x <= hi);
        assert!(lo.precision_bits() <= 3 && hi.precision_bits() <= 3);
        assert_eq!(lo, d(0b101, 1)); // 10
        assert_eq!(hi, d(0b110, 1)); // 12
        // Negative values round in the numeric, not magnitude, direction.
        let y = -&x;
        assert_eq!(y.round(3, Rounding::Floor), d(-0b110, 1));
        assert_eq!(y.round(3, Rounding::Ceil), d(-0b101, 1));
        // Already-short values pass through untouched.
        assert_eq!(x.round(64, Rounding::Floor), x);
    }

    #[test]
    fn from_ratio_brackets_one_third() {
        let third = Ratio::new(BigInt::from(1), BigInt::from(3));
        let lo = Dyadic::from_ratio(&third, 64, Rounding::Floor);
        let hi = Dyadic::from_ratio(&third, 64, Rounding::Ceil);
        assert_eq!(lo.cmp_ratio(&third), Ordering::Less);
        assert_eq!(hi.cmp_ratio(&third), Ordering::Greater);
        let gap = &hi - &lo;
        assert!(gap <= Dyadic::pow2(-64));
    }

    #[test]
    fn from_ratio_exact_for_dyadic_rationals() {
        let r = Ratio::new(BigInt::from(-7), BigInt::from(16));
        let v = Dyadic::from_ratio(&r, 8, Rounding::Floor);
        assert_eq!(v.cmp_ratio(&r), Ordering::Equal);
    }

    #[test]
    fn floor_and_ceil_integers() {
        assert_eq!(d(7, -1).floor_int(), BigInt::from(3));
        assert_eq!(d(7, -1).ceil_int(), BigInt::from(4));
        assert_eq!(d(-7, -1).floor_int(), BigInt::from(-4));
        assert_eq!(d(-7, -1).ceil_int(), BigInt::from(-3));
        assert_eq!(d(3, 2).floor_int(), BigInt::from(12));
        assert_eq!(d(3, 2).ceil_int(), BigInt::from(12));
    }

    #[test]
    fn display_round_trips() {
        for x in [d(-11, -7), Dyadic::zero(), d(1, 63), d(17, 0)] {
            let s = x.to_string();
            let back: Dyadic = s.parse().unwrap();
            assert_eq!(back, x, "round-trip of {s}");
        }
        assert!("nonsense".parse::<Dyadic>().is_err());
        assert!("3*2^x".parse::<Dyadic>().is_err());
    }

    #[test]
    fn to_f64_matches_small_values() {
        assert_eq!(d(3, -2).to_f64(), 0.75);
        assert_eq!(d(-1, 10).to_f64(), -1024.0);
        assert_eq!(Dyadic::zero().to_f64(), 0.0);
    }
}

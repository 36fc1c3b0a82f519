//! Outward-rounded real enclosures over exact dyadic endpoints.
//!
//! A [`RealEnclosure`] is a closed interval `[lo, hi]` of [`Dyadic`] numbers
//! guaranteed to contain the real value it stands for. Ring operations are
//! exact (dyadics are closed under them); division and rounding take an
//! explicit bit budget and always round outward, so containment is preserved
//! by construction. Certified comparisons return `None` instead of guessing
//! when intervals overlap.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Signed;

use crate::dyadic::{Dyadic, Rounding};
use crate::{Error, Result};

/// A closed interval `[lo, hi]` with `lo <= hi`, both exact dyadics.
#[derive(Clone, PartialEq, Eq)]
pub struct RealEnclosure {
    lo: Dyadic,
    hi: Dyadic,
}

impl RealEnclosure {
    /// Builds `[lo, hi]`; panics if the endpoints are inverted, which is
    /// always a programming error rather than a data condition.
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        assert!(lo <= hi, "inverted enclosure: {lo} > {hi}");
        RealEnclosure { lo, hi }
    }

    /// The degenerate interval `[d, d]`.
    pub fn point(d: Dyadic) -> Self {
        RealEnclosure { lo: d.clone(), hi: d }
    }

    pub fn zero() -> Self {
        Self::point(Dyadic::zero())
    }

    pub fn one() -> Self {
        Self::point(Dyadic::one())
    }

    pub fn from_int(v: i64) -> Self {
        Self::point(Dyadic::from_int(v))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::point(Dyadic::from_bigint(v.clone()))
    }

    /// Outward bracket of an exact rational at `bits` precision. Exact
    /// (zero-width) when the rational is dyadic and fits the budget.
    pub fn from_ratio(r: &Ratio<BigInt>, bits: u32) -> Self {
        RealEnclosure::new(
            Dyadic::from_ratio(r, bits, Rounding::Floor),
            Dyadic::from_ratio(r, bits, Rounding::Ceil),
        )
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    /// Exact width `hi - lo`.
    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// Exact midpoint `(lo + hi) / 2`.
    pub fn midpoint(&self) -> Dyadic {
        (&self.lo + &self.hi).half()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, d: &Dyadic) -> bool {
        self.lo <= *d && *d <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn contains_ratio(&self, r: &Ratio<BigInt>) -> bool {
        self.lo.cmp_ratio(r) != Ordering::Greater && self.hi.cmp_ratio(r) != Ordering::Less
    }

    /// Does `self` contain all of `other`?
    pub fn encloses(&self, other: &RealEnclosure) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_strictly_negative(&self) -> bool {
        self.hi.is_negative()
    }

    /// Certified comparison: `Some(ordering)` only when every point of `self`
    /// relates that way to every point of `other`. Overlapping non-point
    /// intervals yield `None`.
    pub fn cmp_certain(&self, other: &RealEnclosure) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_point() && other.is_point() && self.lo == other.lo {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Smallest interval containing both inputs.
    pub fn hull(&self, other: &RealEnclosure) -> Self {
        RealEnclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Exact sum.
    pub fn add(&self, other: &RealEnclosure) -> Self {
        RealEnclosure { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    /// Exact difference.
    pub fn sub(&self, other: &RealEnclosure) -> Self {
        RealEnclosure { lo: &self.lo - &other.hi, hi: &self.hi - &other.lo }
    }

    /// Exact negation.
    pub fn neg(&self) -> Self {
        RealEnclosure { lo: -&self.hi, hi: -&self.lo }
    }

    /// Exact product (endpoint products, no rounding).
    pub fn mul(&self, other: &RealEnclosure) -> Self {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let mut lo = c[0].clone();
        let mut hi = c[0].clone();
        for v in &c[1..] {
            if *v < lo {
                lo = v.clone();
            }
            if *v > hi {
                hi = v.clone();
            }
        }
        RealEnclosure { lo, hi }
    }

    /// Exact image under `|.|`.
    pub fn abs(&self) -> Self {
        if self.is_strictly_positive() {
            self.clone()
        } else if self.is_strictly_negative() {
            self.neg()
        } else {
            RealEnclosure {
                lo: Dyadic::zero(),
                hi: self.lo.abs().max(self.hi.abs()),
            }
        }
    }

    /// Enclosure of `max(x, y)` over the inputs (endpoint-wise max).
    pub fn max_with(&self, other: &RealEnclosure) -> Self {
        RealEnclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    /// Exact scaling by an integer.
    pub fn mul_bigint(&self, c: &BigInt) -> Self {
        let cd = Dyadic::from_bigint(c.clone());
        if c.is_negative() {
            RealEnclosure { lo: &self.hi * &cd, hi: &self.lo * &cd }
        } else {
            RealEnclosure { lo: &self.lo * &cd, hi: &self.hi * &cd }
        }
    }

    /// Exact scaling by a machine integer.
    pub fn mul_int(&self, c: i64) -> Self {
        self.mul_bigint(&BigInt::from(c))
    }

    /// Exact scaling by `2^k`.
    pub fn scale_pow2(&self, k: i64) -> Self {
        RealEnclosure { lo: self.lo.shl(k), hi: self.hi.shl(k) }
    }

    /// Outward rounding of both endpoints to `bits` mantissa bits.
    pub fn round_out(&self, bits: u32) -> Self {
        RealEnclosure {
            lo: self.lo.round(bits, Rounding::Floor),
            hi: self.hi.round(bits, Rounding::Ceil),
        }
    }

    /// Outward-rounded reciprocal at `bits` precision. Errors if the
    /// enclosure contains zero.
    pub fn recip(&self, bits: u32) -> Result<Self> {
        if self.contains_zero() {
            return Err(Error::ZeroSpan(format!("recip of {self}")));
        }
        let lo = div_dyadic(&Dyadic::one(), &self.hi, bits, Rounding::Floor);
        let hi = div_dyadic(&Dyadic::one(), &self.lo, bits, Rounding::Ceil);
        Ok(RealEnclosure::new(lo, hi))
    }

    /// Outward-rounded quotient at `bits` precision. Errors if the divisor
    /// contains zero.
    pub fn div(&self, other: &RealEnclosure, bits: u32) -> Result<Self> {
        Ok(self.mul(&other.recip(bits)?))
    }

    /// `x^k` for integer `k`. Non-negative powers are exact; negative powers
    /// reciprocate at a budget of 64 bits beyond the widest endpoint mantissa
    /// and error when the enclosure contains zero. `x^0` is the exact `[1, 1]`
    /// for every input.
    pub fn pow_int(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow_unsigned(k as u64, None))
        } else {
            if self.contains_zero() {
                return Err(Error::ZeroSpan(format!("negative power of {self}")));
            }
            let p = self.pow_unsigned((-k) as u64, None);
            let bits = (p.lo.precision_bits().max(p.hi.precision_bits()) as u32).saturating_add(64);
            p.recip(bits)
        }
    }

    /// `x^k` for `k >= 0` with outward rounding to `bits` after every step,
    /// for use at a fixed working precision.
    pub fn pow_int_round(&self, k: u64, bits: u32) -> Self {
        self.pow_unsigned(k, Some(bits))
    }

    fn pow_unsigned(&self, k: u64, bits: Option<u32>) -> Self {
        let trim = |x: RealEnclosure| match bits {
            Some(b) => x.round_out(b),
            None => x,
        };
        let mut acc = RealEnclosure::one();
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = trim(acc.mul(&base));
            }
            k >>= 1;
            if k > 0 {
                base = trim(base.mul(&base));
            }
        }
        acc
    }
}

/// Directed dyadic division to about `bits` significant bits.
pub(crate) fn div_dyadic(num: &Dyadic, den: &Dyadic, bits: u32, dir: Rounding) -> Dyadic {
    assert!(!den.is_zero(), "division by exact zero");
    if num.is_zero() {
        return Dyadic::zero();
    }
    // Work on magnitudes; negative quotients flip the rounding direction.
    let negative = num.is_negative() != den.is_negative();
    let eff = if negative { dir.flip() } else { dir };
    let nm = num.mantissa().abs();
    let dm = den.mantissa().abs();
    let s = bits as i64 + 2 + dm.bits() as i64 - nm.bits() as i64;
    let q = if s >= 0 {
        dir_div_mag(&(nm << s as u64), &dm, eff)
    } else {
        dir_div_mag(&nm, &(dm << (-s) as u64), eff)
    };
    let m = if negative { -q } else { q };
    Dyadic::new(m, num.exponent() - den.exponent() - s)
}

/// Directed division of non-negative magnitudes: rounds the magnitude down
/// for `Floor`, up for `Ceil` (caller has normalized signs).
fn dir_div_mag(num: &BigInt, den: &BigInt, dir: Rounding) -> BigInt {
    use num_integer::Integer;
    use num_traits::Zero;
    let (q, r) = num.div_rem(den);
    match dir {
        Rounding::Floor => q,
        Rounding::Ceil => {
            if r.is_zero() {
                q
            } else {
                q + 1
            }
        }
    }
}

impl fmt::Display for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl fmt::Debug for RealEnclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RealEnclosure([{:.9e}, {:.9e}], width {:.3e})",
            self.lo.to_f64(),
            self.hi.to_f64(),
            self.width().to_f64()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn enc(lo: (i64, i64), hi: (i64, i64)) -> RealEnclosure {
        RealEnclosure::new(
            Dyadic::new(BigInt::from(lo.0), lo.1),
            Dyadic::new(BigInt::from(hi.0), hi.1),
        )
    }

    #[test]
    fn ring_ops_are_exact_and_contain() {
        let a = enc((1, 0), (3, -1)); // [1, 1.5]
        let b = enc((-1, -1), (1, -2)); // [-0.5, 0.25]
        let s = a.add(&b);
        assert_eq!(s, enc((1, -1), (7, -2))); // [0.5, 1.75]
        let d = a.sub(&b);
        assert_eq!(d, enc((3, -2), (1, 1))); // [0.75, 2]
        let p = a.mul(&b);
        assert_eq!(p, enc((-3, -2), (3, -3))); // [-0.75, 0.375]
    }

    #[test]
    fn mul_handles_sign_cases() {
        let neg = enc((-3, 0), (-1, 0));
        let mixed = enc((-1, 0), (2, 0));
        assert_eq!(neg.mul(&neg), enc((1, 0), (9, 0)));
        assert_eq!(neg.mul(&mixed), enc((-6, 0), (3, 0)));
        assert_eq!(mixed.mul(&mixed), enc((-2, 0), (4, 0)));
    }

    #[test]
    fn abs_and_max() {
        assert_eq!(enc((-3, 0), (-1, 0)).abs(), enc((1, 0), (3, 0)));
        assert_eq!(enc((-3, 0), (2, 0)).abs(), enc((0, 0), (3, 0)));
        let m = enc((1, 0), (2, 0)).max_with(&enc((0, 0), (3, 0)));
        assert_eq!(m, enc((1, 0), (3, 0)));
    }

    #[test]
    fn certified_comparisons_refuse_overlap() {
        let a = enc((0, 0), (1, 0));
        let b = enc((1, -1), (2, 0));
        assert_eq!(a.cmp_certain(&b), None);
        let c = enc((3, 0), (4, 0));
        assert_eq!(a.cmp_certain(&c), Some(Ordering::Less));
        assert_eq!(c.cmp_certain(&a), Some(Ordering::Greater));
        let p = RealEnclosure::one();
        assert_eq!(p.cmp_certain(&RealEnclosure::one()), Some(Ordering::Equal));
    }

    #[test]
    fn recip_brackets_and_rejects_zero_span() {
        let x = enc((3, 0), (5, 0));
        let r = x.recip(64).unwrap();
        let third = Ratio::new(BigInt::one(), BigInt::from(3));
        let fifth = Ratio::new(BigInt::one(), BigInt::from(5));
        assert!(r.contains_ratio(&fifth));
        assert!(r.contains_ratio(&third));
        let p = RealEnclosure::from_int(3).recip(64).unwrap();
        assert!(p.contains_ratio(&third));
        assert!(p.width() < Dyadic::new(BigInt::one(), -60));
        let neg = enc((-5, 0), (-3, 0));
        let rn = neg.recip(64).unwrap();
        assert!(rn.is_strictly_negative());
        assert!(enc((-1, 0), (1, 0)).recip(64).is_err());
    }

    #[test]
    fn division_by_zero_span_errors() {
        let err = RealEnclosure::one().div(&enc((-1, 0), (1, 0)), 64);
        assert!(matches!(err, Err(Error::ZeroSpan(_))));
    }

    #[test]
    fn pow_zero_is_exact_one_even_for_zero_spanning_base() {
        let x = enc((-1, 0), (1, 1));
        assert_eq!(x.pow_int(0).unwrap(), RealEnclosure::one());
    }

    #[test]
    fn pow_positive_is_exact() {
        let two = RealEnclosure::from_int(2);
        let p = two.pow_int(10).unwrap();
        assert_eq!(p, RealEnclosure::from_int(1024));
        let x = enc((1, 0), (3, -1));
        let c = x.pow_int(3).unwrap();
        // Cube of [1, 1.5] = [1, 3.375].
        assert_eq!(c, enc((1, 0), (27, -3)));
    }

    #[test]
    fn pow_negative_reciprocates_or_errors() {
        let two = RealEnclosure::from_int(2);
        let inv = two.pow_int(-3).unwrap();
        let eighth = Ratio::new(BigInt::one(), BigInt::from(8));
        assert!(inv.contains_ratio(&eighth));
        assert!(enc((-1, 0), (1, 0)).pow_int(-1).is_err());
    }

    #[test]
    fn round_out_widens_never_narrows() {
        let x = RealEnclosure::from_ratio(&Ratio::new(BigInt::from(1), BigInt::from(3)), 128);
        let r = x.round_out(16);
        assert!(r.encloses(&x));
        assert!(r.lo().precision_bits() <= 16 && r.hi().precision_bits() <= 16);
    }

    #[test]
    fn midpoint_and_width() {
        let x = enc((1, 0), (2, 0));
        assert_eq!(x.midpoint(), Dyadic::new(BigInt::from(3), -1));
        assert_eq!(x.width(), Dyadic::one());
    }
}

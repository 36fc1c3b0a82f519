//! Directed log and exp kernels on dyadic enclosures.
//!
//! Both kernels work in fixed point at `w = bits + 32` fractional bits. Lower
//! endpoints are produced by all-floor runs of the defining series (every
//! dropped quantity is positive), upper endpoints by all-ceil runs plus an
//! explicit geometric tail bound, so the returned intervals contain the true
//! value by construction rather than by error analysis after the fact.
//!
//! `log` reduces to `log f + g log 2` with `f ∈ [1, 2)` and uses
//! `log f = 2 atanh((f-1)/(f+1))`, whose argument lies in `[0, 1/3]`;
//! `log 2` itself is `2 atanh(1/3)`. `exp` reduces the argument by an integer
//! multiple of `log 2` into `[log 2, 2 log 2 + ε)`, where the series has
//! positive terms and both endpoints are monotone in the argument.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dyadic::{Dyadic, Rounding};
use crate::enclosure::RealEnclosure;
use crate::{Error, Result};

/// Fixed-point guard bits beyond the requested precision.
const GUARD_BITS: u32 = 32;

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

/// `ceil(a / b)` for `a >= 0`, `b > 0`.
fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(!a.is_negative() && b.is_positive());
    let (q, r) = num_integer::Integer::div_rem(a, b);
    if r.is_zero() {
        q
    } else {
        q + 1
    }
}

/// `ceil(a / 2^k)` for `a >= 0`.
fn ceil_shr(a: &BigInt, k: u64) -> BigInt {
    debug_assert!(!a.is_negative());
    let mask = (BigInt::one() << k) - 1;
    (a + mask) >> k
}

/// Scaled partial sums of `atanh(z) = z + z^3/3 + z^5/5 + ...`.
///
/// Inputs are fixed-point numerators at scale `2^w` with
/// `0 <= z_lo <= z_hi < 2^(w-1)` (that is, z < 1/2 so the term ratio is
/// below 1/4). Returns `(s_lo, s_hi)` with
/// `s_lo <= 2^w atanh(z_lo/2^w)` and `s_hi >= 2^w atanh(z_hi/2^w)`.
fn atanh_scaled(z_lo: &BigInt, z_hi: &BigInt, w: u32) -> (BigInt, BigInt) {
    debug_assert!(!z_lo.is_negative() && z_lo <= z_hi);
    debug_assert!(*z_hi < BigInt::one() << (w - 1));
    let two_w = 2 * w as u64;

    // Lower: every floor drops a non-negative amount, every omitted term is
    // positive, so the partial sum stays below the true value.
    let zl2 = z_lo * z_lo;
    let mut term = z_lo.clone();
    let mut s_lo = term.clone();
    let mut i: u64 = 1;
    loop {
        term = (&term * &zl2) >> two_w;
        if term.is_zero() {
            break;
        }
        s_lo += &term / big(2 * i + 1);
        i += 1;
    }

    // Upper: all-ceil keeps every scaled power at or above its true value;
    // once the power bound drops to at most 4 the remaining true tail is at
    // most term/(1 - z^2) <= 2*term.
    let zh2 = z_hi * z_hi;
    let mut term = z_hi.clone();
    let mut s_hi = BigInt::zero();
    let mut i: u64 = 0;
    loop {
        s_hi += ceil_div(&term, &big(2 * i + 1));
        term = ceil_shr(&(&term * &zh2), two_w);
        i += 1;
        if term <= big(4) {
            s_hi += &term << 1;
            break;
        }
    }

    (s_lo, s_hi)
}

/// `(lo, hi)` integer bounds of `2^w log 2`, memoized per scale.
fn log2_scaled(w: u32) -> (BigInt, BigInt) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (BigInt, BigInt)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&w) {
        return hit.clone();
    }
    // log 2 = 2 atanh(1/3); 2^w is never divisible by 3, so the floor and
    // floor+1 genuinely bracket the scaled argument.
    let z_lo = (BigInt::one() << w) / big(3);
    let z_hi = &z_lo + 1;
    let (s_lo, s_hi) = atanh_scaled(&z_lo, &z_hi, w);
    let out = (&s_lo << 1, &s_hi << 1);
    cache.lock().unwrap().insert(w, out.clone());
    out
}

/// Enclosure of `log 2` at `bits` precision.
pub fn log2_enclosure(bits: u32) -> RealEnclosure {
    let w = bits + GUARD_BITS;
    let (lo, hi) = log2_scaled(w);
    RealEnclosure::new(Dyadic::new(lo, -(w as i64)), Dyadic::new(hi, -(w as i64)))
}

/// Enclosure of the natural log of a positive dyadic at `bits` precision.
pub fn log_dyadic(d: &Dyadic, bits: u32) -> Result<RealEnclosure> {
    if !d.is_positive() {
        return Err(Error::LogDomain(d.to_string()));
    }
    let w = bits + GUARD_BITS;
    // d = f * 2^g with f = m/2^(b-1) in [1, 2).
    let b = d.precision_bits();
    let g = d.exponent() + b as i64 - 1;
    let shift = w as i64 - (b as i64 - 1);
    let (f_lo, f_hi) = if shift >= 0 {
        let f = d.mantissa() << shift as u64;
        (f.clone(), f)
    } else {
        let f = d.mantissa() >> (-shift) as u64;
        let f_hi = &f + 1;
        (f, f_hi)
    };
    // z = (f-1)/(f+1) in [0, 1/3]; increasing in f.
    let unit = BigInt::one() << w;
    let a_lo = &f_lo - &unit;
    let a_hi = &f_hi - &unit;
    let b_lo = &f_lo + &unit;
    let b_hi = &f_hi + &unit;
    let z_lo = (&a_lo << w) / &b_hi;
    let z_hi = ceil_div(&(&a_hi << w), &b_lo);
    let (s_lo, s_hi) = atanh_scaled(&z_lo, &z_hi, w);
    // log d = 2 atanh(z) + g log 2, all at scale 2^w.
    let (l2_lo, l2_hi) = log2_scaled(w);
    let gb = BigInt::from(g);
    let (g_lo, g_hi) = if g >= 0 {
        (&gb * &l2_lo, &gb * &l2_hi)
    } else {
        (&gb * &l2_hi, &gb * &l2_lo)
    };
    let lo = (&s_lo << 1) + g_lo;
    let hi = (&s_hi << 1) + g_hi;
    Ok(RealEnclosure::new(
        Dyadic::new(lo, -(w as i64)),
        Dyadic::new(hi, -(w as i64)),
    ))
}

/// Enclosure of `log x` over a strictly positive enclosure; monotone, so the
/// endpoints are the logs of the endpoints.
pub fn log_enclosure(x: &RealEnclosure, bits: u32) -> Result<RealEnclosure> {
    if !x.is_strictly_positive() {
        return Err(Error::LogDomain(x.to_string()));
    }
    let lo = log_dyadic(x.lo(), bits)?;
    let hi = log_dyadic(x.hi(), bits)?;
    Ok(RealEnclosure::new(lo.lo().clone(), hi.hi().clone()))
}

/// Enclosure of `log k` for a positive integer.
pub fn log_bigint(k: &BigInt, bits: u32) -> Result<RealEnclosure> {
    log_dyadic(&Dyadic::from_bigint(k.clone()), bits)
}

/// Enclosure of `log k` for a positive machine integer.
pub fn log_int(k: i64, bits: u32) -> Result<RealEnclosure> {
    log_dyadic(&Dyadic::from_int(k), bits)
}

/// Enclosure of `log(p/q)` for a positive rational, computed as
/// `log p - log q` so no conversion rounding enters.
pub fn log_ratio(r: &Ratio<BigInt>, bits: u32) -> Result<RealEnclosure> {
    if !r.is_positive() {
        return Err(Error::LogDomain(r.to_string()));
    }
    let lp = log_bigint(r.numer(), bits + 2)?;
    let lq = log_bigint(r.denom(), bits + 2)?;
    Ok(lp.sub(&lq))
}

/// Scaled bounds of `e^r` for `0 <= r <= 2.2`, same contract style as
/// [`atanh_scaled`].
fn exp_scaled(r_lo: &BigInt, r_hi: &BigInt, w: u32) -> (BigInt, BigInt) {
    debug_assert!(!r_lo.is_negative() && r_lo <= r_hi);
    debug_assert!(*r_hi <= (BigInt::from(11) << w) / big(5), "exp argument not reduced");
    let w = w as u64;

    let mut term = BigInt::one() << w;
    let mut s_lo = term.clone();
    let mut i: u64 = 1;
    loop {
        term = (&term * r_lo) >> w;
        term /= big(i);
        if term.is_zero() {
            break;
        }
        s_lo += &term;
        i += 1;
    }

    // Upper: after index i >= 5 the term ratio r/(i+1) is at most 2.2/6, so
    // the remaining tail is below 0.6 * term and one extra `term` covers it.
    let mut term = BigInt::one() << w;
    let mut s_hi = term.clone();
    let mut i: u64 = 1;
    loop {
        term = ceil_div(&ceil_shr(&(&term * r_hi), w), &big(i));
        s_hi += &term;
        i += 1;
        if i >= 6 && term <= big(4) {
            s_hi += &term;
            break;
        }
    }

    (s_lo, s_hi)
}

/// Enclosure of `e^d` at `bits` precision.
pub fn exp_dyadic(d: &Dyadic, bits: u32) -> Result<RealEnclosure> {
    if d.is_zero() {
        return Ok(RealEnclosure::one());
    }
    if d.abs() > Dyadic::pow2(50) {
        return Err(Error::InvalidParameter(format!(
            "exp argument {d} out of supported range"
        )));
    }
    let w = bits + GUARD_BITS;
    let (l2_lo, l2_hi) = log2_scaled(w);
    let ln2 = RealEnclosure::new(Dyadic::new(l2_lo, -(w as i64)), Dyadic::new(l2_hi, -(w as i64)));
    // k = floor(lower bound of d/log 2) - 1 puts r = d - k log 2 in
    // [log 2 - eps, 2 log 2 + eps] strictly inside [0, 2.2].
    let q = RealEnclosure::point(d.clone()).div(&ln2, 64)?;
    let k = q.lo().floor_int() - 1;
    let r = RealEnclosure::point(d.clone()).sub(&ln2.mul_bigint(&k));
    let r_lo = r.lo().scaled_int(w as i64, Rounding::Floor).max(BigInt::zero());
    let r_hi = r.hi().scaled_int(w as i64, Rounding::Ceil);
    let (s_lo, s_hi) = exp_scaled(&r_lo, &r_hi, w);
    let k64 = k.to_i64().expect("reduced exponent fits i64");
    Ok(RealEnclosure::new(
        Dyadic::new(s_lo, k64 - w as i64),
        Dyadic::new(s_hi, k64 - w as i64),
    ))
}

/// Enclosure of `e^x` over an enclosure; monotone in the endpoints.
pub fn exp_enclosure(x: &RealEnclosure, bits: u32) -> Result<RealEnclosure> {
    let lo = exp_dyadic(x.lo(), bits)?;
    let hi = exp_dyadic(x.hi(), bits)?;
    Ok(RealEnclosure::new(lo.lo().clone(), hi.hi().clone()))
}

/// Enclosure of `base^expo = exp(expo * log base)` for positive rational
/// `base` and rational exponent.
pub fn pow_rational(base: &Ratio<BigInt>, expo: &Ratio<BigInt>, bits: u32) -> Result<RealEnclosure> {
    let lb = log_ratio(base, bits + 8)?;
    let e = RealEnclosure::from_ratio(expo, bits + 8);
    exp_enclosure(&lb.mul(&e), bits)
}

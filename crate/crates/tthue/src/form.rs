//! The twisted norm form `F(X, Y; n, s, t)` and its integer coefficients.
//!
//! For twist exponents `(s, t)` set `α0 = λ0^s λ1^t`; its Galois orbit is
//! `α1 = λ1^s λ2^t` and `α2 = λ2^s λ0^t`. The form is
//!
//! ```text
//! F(X, Y) = (X - α0 Y)(X - α1 Y)(X - α2 Y) = X^3 - e1 X^2 Y + e2 X Y^2 - e3 Y^3
//! ```
//!
//! whose coefficients are the elementary symmetric functions of the orbit,
//! read off exactly from the characteristic polynomial of `α0`. Since `α0` is
//! a unit, `e3 = ±1`, and `|F(x, y)| = 1` is the unit equation this crate
//! studies. The untwisted case `(s, t) = (1, 0)` recovers the classical form
//! with coefficient vector `(n-1, -(n+2), 1)`.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::order::OrderElement;
use crate::{Error, Result};

/// Twist exponent pair with its derived size `τ = max(|s|, |t|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwistExponents {
    pub s: i64,
    pub t: i64,
}

impl TwistExponents {
    pub fn new(s: i64, t: i64) -> Self {
        TwistExponents { s, t }
    }

    /// `τ = max(|s|, |t|)`.
    pub fn tau(&self) -> i64 {
        self.s.abs().max(self.t.abs())
    }
}

/// Exact coefficients of the cubic form for one `(n, s, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormFormCoeffs {
    pub n: i64,
    pub s: i64,
    pub t: i64,
    pub e1: BigInt,
    pub e2: BigInt,
    pub e3: BigInt,
}

impl NormFormCoeffs {
    /// `F(x, y) = x^3 - e1 x^2 y + e2 x y^2 - e3 y^3`, exactly.
    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let x2 = x * x;
        let y2 = y * y;
        &x2 * x - &self.e1 * &x2 * y + &self.e2 * x * &y2 - &self.e3 * &y2 * y
    }

    /// Is `(x, y)` a solution of `|F| = 1`?
    pub fn is_solution(&self, x: &BigInt, y: &BigInt) -> bool {
        self.evaluate(x, y).abs().is_one()
    }
}

fn check_params(n: i64) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("field parameter n = {n}, need n >= 3")));
    }
    Ok(())
}

/// The twist unit `α_i = σ^i(λ0^s λ1^t)` as an exact order element.
pub fn alpha_element(n: i64, s: i64, t: i64, i: usize) -> Result<OrderElement> {
    check_params(n)?;
    if i > 2 {
        return Err(Error::InvalidParameter(format!("conjugate index {i}, need 0..=2")));
    }
    let a0 = OrderElement::lambda0(n)
        .pow(s)?
        .mul(&OrderElement::lambda1(n).pow(t)?)?;
    Ok(a0.conjugate_times(i as i64))
}

/// All three conjugates of the twist unit.
pub fn alpha_family(n: i64, s: i64, t: i64) -> Result<[OrderElement; 3]> {
    let a0 = alpha_element(n, s, t, 0)?;
    let a1 = a0.conjugate();
    let a2 = a1.conjugate();
    Ok([a0, a1, a2])
}

/// Exact form coefficients `(e1, e2, e3)` from the characteristic polynomial
/// of `α0`. The discriminant-free route: `e1 = tr`, `e2` the second symmetric
/// function, `e3 = norm`, which is ±1 because `α0` is a unit.
pub fn form_coeffs(n: i64, s: i64, t: i64) -> Result<NormFormCoeffs> {
    let a0 = alpha_element(n, s, t, 0)?;
    let cp = a0.char_poly();
    let e3 = cp.norm();
    debug_assert!(e3.clone().abs().is_one(), "twist unit must have unit norm");
    Ok(NormFormCoeffs { n, s, t, e1: cp.trace(), e2: cp.second_symmetric(), e3 })
}

/// Evaluates `F(x, y; n, s, t)` exactly.
pub fn evaluate_form(n: i64, s: i64, t: i64, x: &BigInt, y: &BigInt) -> Result<BigInt> {
    Ok(form_coeffs(n, s, t)?.evaluate(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn untwisted_coefficients_are_classical() {
        for n in 3i64..20 {
            let c = form_coeffs(n, 1, 0).unwrap();
            assert_eq!(c.e1, BigInt::from(n - 1));
            assert_eq!(c.e2, BigInt::from(-(n + 2)));
            assert_eq!(c.e3, BigInt::from(1));
        }
    }

    #[test]
    fn twist_unit_norm_is_plus_minus_one() {
        let mut rng = StdRng::seed_from_u64(21);
        for _ in 0..60 {
            let n = rng.gen_range(3..=300);
            let s = rng.gen_range(-6..=6);
            let t = rng.gen_range(-6..=6);
            let c = form_coeffs(n, s, t).unwrap();
            assert_eq!(c.e3.clone().abs(), BigInt::from(1), "(n,s,t)=({n},{s},{t})");
        }
    }

    #[test]
    fn conjugate_family_matches_direct_construction() {
        for (n, s, t) in [(3i64, 1i64, 1i64), (7, 2, -1), (50, -3, 2)] {
            let fam = alpha_family(n, s, t).unwrap();
            let l1 = OrderElement::lambda1(n);
            let l2 = OrderElement::lambda2(n);
            let l0 = OrderElement::lambda0(n);
            // α1 = λ1^s λ2^t and α2 = λ2^s λ0^t.
            let a1 = l1.pow(s).unwrap().mul(&l2.pow(t).unwrap()).unwrap();
            let a2 = l2.pow(s).unwrap().mul(&l0.pow(t).unwrap()).unwrap();
            assert_eq!(fam[1], a1);
            assert_eq!(fam[2], a2);
            assert_eq!(fam[0].conjugate(), fam[1]);
        }
    }

    #[test]
    fn swapped_generator_twists_share_an_orbit() {
        // (s,t) = (1,0) has orbit {λ0, λ1, λ2}; so does (0,1), hence the
        // same symmetric functions.
        for n in [3i64, 12, 99] {
            let a = form_coeffs(n, 1, 0).unwrap();
            let b = form_coeffs(n, 0, 1).unwrap();
            assert_eq!((a.e1, a.e2, a.e3), (b.e1, b.e2, b.e3));
        }
    }

    #[test]
    fn evaluate_matches_norm_of_linear_factor() {
        let mut rng = StdRng::seed_from_u64(22);
        for _ in 0..40 {
            let n = rng.gen_range(3..=60);
            let s = rng.gen_range(-4..=4);
            let t = rng.gen_range(-4..=4);
            let x = BigInt::from(rng.gen_range(-500i64..=500));
            let y = BigInt::from(rng.gen_range(-500i64..=500));
            let via_form = evaluate_form(n, s, t, &x, &y).unwrap();
            let a0 = alpha_element(n, s, t, 0).unwrap();
            let beta = OrderElement::from_int(n, &x).sub(&a0.scalar_mul(&y)).unwrap();
            assert_eq!(via_form, beta.norm(), "(n,s,t,x,y)=({n},{s},{t},{x},{y})");
        }
    }

    #[test]
    fn trivial_solutions_always_exist() {
        for (n, s, t) in [(3i64, 2i64, 1i64), (10, -1, 3), (42, 5, -5)] {
            let c = form_coeffs(n, s, t).unwrap();
            assert!(c.is_solution(&BigInt::from(1), &BigInt::from(0)));
            assert!(c.is_solution(&BigInt::from(0), &BigInt::from(1)));
            assert!(c.is_solution(&BigInt::from(-1), &BigInt::from(0)));
        }
    }

    #[test]
    fn degenerate_twist_is_a_perfect_cube() {
        let c = form_coeffs(5, 0, 0).unwrap();
        assert_eq!(c.e1, BigInt::from(3));
        assert_eq!(c.e2, BigInt::from(3));
        assert_eq!(c.e3, BigInt::from(1));
        let v = c.evaluate(&BigInt::from(7), &BigInt::from(4));
        assert_eq!(v, BigInt::from(27)); // (7-4)^3
    }

    #[test]
    fn tau_is_max_absolute_exponent() {
        assert_eq!(TwistExponents::new(3, -5).tau(), 5);
        assert_eq!(TwistExponents::new(-2, 1).tau(), 2);
        assert_eq!(TwistExponents::new(0, 0).tau(), 0);
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert!(form_coeffs(2, 1, 0).is_err());
        assert!(alpha_element(3, 1, 0, 5).is_err());
    }
}

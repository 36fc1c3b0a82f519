//! Heights, Mahler measures, the explicit linear-forms-in-logarithms constant,
//! and the derived asymptotic bound formulas.
//!
//! Everything here returns certified [`RealEnclosure`]s. The height machinery
//! uses the standard self-consistent definitions throughout: for an integer
//! polynomial `p = a_d ∏(X - rᵢ)` the Mahler measure is
//! `M(p) = |a_d| ∏ max(1, |rᵢ|)`, and the absolute logarithmic height of an
//! algebraic number of degree `d` is `h(α) = (1/d) log M(minpoly α)`. For the
//! cubic order elements handled here the characteristic polynomial always
//! works in place of the minimal polynomial: a rational integer `q` has
//! characteristic polynomial `(X - q)^3`, and `(1/3) log max(1,|q|)^3 =
//! log max(1,|q|)` is exactly its degree-1 height, so no case split is needed.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::dyadic::Dyadic;
use crate::enclosure::RealEnclosure;
use crate::order::OrderElement;
use crate::precision::{refine_until, PrecisionPolicy};
use crate::transcendental::{log_bigint, log_enclosure, log_int};
use crate::{cubic, Error, Result, Verdict};

/// Internal working precision for the fixed-formula evaluations (the explicit
/// constant and the derived bound formulas). 128 bits leaves relative widths
/// around `2^-100`, far below every tolerance used by callers.
const FORMULA_BITS: u32 = 128;

/// An absolute logarithmic height, always ≥ 0.
#[derive(Debug, Clone)]
pub struct HeightValue {
    pub value: RealEnclosure,
}

/// Inputs to the explicit lower bound for a nonzero linear form in logarithms:
/// `t_count` logarithms of numbers in a degree-`d` field, each with a height
/// enclosure floored at `0.16/d`, and a coefficient bound `B ≥ 3`.
#[derive(Debug, Clone)]
pub struct BakerInputs {
    pub t_count: u32,
    pub d: u32,
    pub heights: Vec<RealEnclosure>,
    pub b: RealEnclosure,
}

impl BakerInputs {
    /// Validates counts and the certified-violation checks (see
    /// [`baker_lower_bound`] for the exact acceptance rule).
    pub fn new(t_count: u32, d: u32, heights: Vec<RealEnclosure>, b: RealEnclosure) -> Result<Self> {
        let inputs = BakerInputs { t_count, d, heights, b };
        inputs.validate()?;
        Ok(inputs)
    }

    /// The height floor `0.16/d` as an exact rational `4/(25 d)`.
    pub fn height_floor(&self) -> Ratio<BigInt> {
        Ratio::new(BigInt::from(4), BigInt::from(25u32) * BigInt::from(self.d))
    }

    fn validate(&self) -> Result<()> {
        if self.t_count == 0 || self.d == 0 {
            return Err(Error::InvalidParameter(format!(
                "linear-form shape t={}, d={}, need both ≥ 1",
                self.t_count, self.d
            )));
        }
        if self.heights.len() != self.t_count as usize {
            return Err(Error::InvalidParameter(format!(
                "{} height enclosures for t = {}",
                self.heights.len(),
                self.t_count
            )));
        }
        // Only certified violations are rejected: an enclosure whose upper
        // endpoint is below the floor cannot contain a legal height. An
        // enclosure straddling the floor is accepted (outward rounding can
        // never place a lower endpoint exactly on a non-dyadic threshold) and
        // is intersected with the legal half-line during evaluation.
        let floor = self.height_floor();
        for (i, h) in self.heights.iter().enumerate() {
            if h.hi().cmp_ratio(&floor).is_lt() {
                return Err(Error::InvalidParameter(format!(
                    "height {i} certainly below floor 4/(25·{}): {:?}",
                    self.d, h
                )));
            }
        }
        if h_below_int(&self.b, 3) {
            return Err(Error::InvalidParameter(format!(
                "coefficient bound B certainly below 3: {:?}",
                self.b
            )));
        }
        Ok(())
    }
}

fn h_below_int(e: &RealEnclosure, k: i64) -> bool {
    *e.hi() < Dyadic::from_int(k)
}

/// Configurable constants for the derived bound formulas. The asymptotic
/// statements only assert that *some* positive constants work, so these are
/// honest knobs, defaulting to 1 (and 64 for the coefficient-ratio check).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundConstants {
    pub c2: Ratio<BigInt>,
    pub c3: Ratio<BigInt>,
    pub c4: Ratio<BigInt>,
    pub c5: Ratio<BigInt>,
    pub c_cu: Ratio<BigInt>,
}

impl Default for BoundConstants {
    fn default() -> Self {
        let one = Ratio::from_integer(BigInt::from(1));
        BoundConstants {
            c2: one.clone(),
            c3: one.clone(),
            c4: one.clone(),
            c5: one,
            c_cu: Ratio::from_integer(BigInt::from(64)),
        }
    }
}

impl BoundConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, c) in [
            ("c2", &self.c2),
            ("c3", &self.c3),
            ("c4", &self.c4),
            ("c5", &self.c5),
            ("C_cu", &self.c_cu),
        ] {
            if !c.is_positive() {
                return Err(Error::InvalidParameter(format!("bound constant {name} = {c} not positive")));
            }
        }
        Ok(())
    }
}

/// Report from [`derived_bounds`]: the four right-hand sides evaluated as
/// enclosures, plus certified verdicts where a value to compare was supplied.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub n: i64,
    pub tau: i64,
    /// `c2 · τ · (log n)^3 · (log τ + log log n)` — bound on `log |y|`.
    pub logy_ub: RealEnclosure,
    /// `c3 · log n · log log n` — bound on `τ`.
    pub tau_ub: RealEnclosure,
    /// `c4 · (log n)^4 · (log log n)^2` — `n`-only bound on `log |y|`.
    pub logy_by_n: RealEnclosure,
    /// `c5 · (log n)^3 · (log log n)^2` — `n`-only bound on unit exponents.
    pub coeff_by_n: RealEnclosure,
    /// Whether `τ < tau_ub` is certified at these constants.
    pub tau_within: Verdict,
    /// Whether the supplied `log |y|` is ≤ `logy_ub` (if supplied).
    pub logy_within: Option<Verdict>,
    /// Whether the supplied `log |y|` is ≤ `logy_by_n` (if supplied).
    pub logy_by_n_within: Option<Verdict>,
}

/// Certified enclosure of the Mahler measure `|leading| · ∏ max(1, |rootᵢ|)`
/// given enclosures covering all roots with multiplicity. Exact interval
/// arithmetic end to end — no rounding is introduced here.
pub fn mahler_measure(leading: &BigInt, roots: &[RealEnclosure]) -> RealEnclosure {
    let one = RealEnclosure::one();
    let mut m = RealEnclosure::from_bigint(&leading.abs());
    for r in roots {
        m = m.mul(&r.abs().max_with(&one));
    }
    m
}

/// Certified enclosure of the absolute logarithmic height `h(u) =
/// (1/3) log M(charpoly u)`, refined along the policy's bit schedule. The
/// result's lower endpoint is clamped at 0, which is sound because
/// `M ≥ 1` holds exactly by construction.
pub fn absolute_log_height(u: &OrderElement, policy: &PrecisionPolicy) -> Result<HeightValue> {
    let c = u.coords();
    let refined = if c[1].is_zero() && c[2].is_zero() {
        // Rational integer: h = log max(1, |c0|), exactly the degree-1 height.
        let q = c[0].abs();
        if q <= BigInt::from(1) {
            return Ok(HeightValue { value: RealEnclosure::zero() });
        }
        refine_until(policy, |bits| log_bigint(&q, bits))?
    } else {
        let n = u.n();
        refine_until(policy, |bits| {
            let one_shot = PrecisionPolicy {
                start_bits: bits,
                max_bits: bits,
                escalation_factor: 2,
                target_width: Dyadic::pow2(-(bits as i64)),
            };
            let roots = cubic::compute_roots(n, &one_shot)?;
            let conj: Vec<RealEnclosure> =
                (0..3).map(|i| u.embed(roots.get(i))).collect();
            let m = mahler_measure(&BigInt::from(1), &conj);
            let log_m = log_enclosure(&m, bits)?;
            log_m.div(&RealEnclosure::from_int(3), bits)
        })?
    };
    let mut value = refined.enclosure;
    if value.lo().is_negative() {
        value = RealEnclosure::new(Dyadic::zero(), value.hi().clone());
    }
    Ok(HeightValue { value })
}

/// The explicit constant `18 (t+1)! t^{t+1} (32 d)^{t+2} log(2 t d)` from the
/// lower bound for nonzero linear forms in `t` logarithms over a degree-`d`
/// field. The integer prefactor is exact; only the final logarithm is rounded.
pub fn baker_constant(t_count: u32, d: u32) -> Result<RealEnclosure> {
    if t_count == 0 || d == 0 {
        return Err(Error::InvalidParameter(format!(
            "constant requested for t = {t_count}, d = {d}, need both ≥ 1"
        )));
    }
    let t = BigInt::from(t_count);
    let mut factorial = BigInt::from(1);
    for k in 2..=(t_count + 1) {
        factorial *= BigInt::from(k);
    }
    let prefactor = BigInt::from(18) * factorial * t.pow(t_count + 1)
        * (BigInt::from(32) * BigInt::from(d)).pow(t_count + 2);
    let log_arg = 2 * i64::from(t_count) * i64::from(d);
    Ok(log_int(log_arg, FORMULA_BITS)?.mul_bigint(&prefactor))
}

/// Certified enclosure of the lower-bound magnitude `−C · ∏ hᵢ · log B`.
///
/// Heights are intersected with the legal half-line `[0.16/d, ∞)` and `B`
/// with `[3, ∞)` before use; inputs whose enclosures lie certainly outside
/// those ranges were already rejected by validation. A nonzero linear form
/// `Λ` then satisfies `log |Λ| ≥` this bound.
pub fn baker_lower_bound(inputs: &BakerInputs) -> Result<RealEnclosure> {
    inputs.validate()?;
    let c = baker_constant(inputs.t_count, inputs.d)?;
    let floor_lo = RealEnclosure::from_ratio(&inputs.height_floor(), FORMULA_BITS)
        .lo()
        .clone();
    let mut magnitude = c;
    for h in &inputs.heights {
        let lo = h.lo().clone().max(floor_lo.clone());
        let clamped = RealEnclosure::new(lo, h.hi().clone());
        magnitude = magnitude.mul(&clamped);
    }
    let b_lo = inputs.b.lo().clone().max(Dyadic::from_int(3));
    let b = RealEnclosure::new(b_lo, inputs.b.hi().clone());
    let log_b = log_enclosure(&b, FORMULA_BITS)?;
    Ok(magnitude.mul(&log_b).neg())
}

fn scale_by_ratio(e: &RealEnclosure, c: &Ratio<BigInt>, bits: u32) -> Result<RealEnclosure> {
    e.mul_bigint(c.numer())
        .div(&RealEnclosure::from_bigint(c.denom()), bits)
}

/// Verdict for `value ≤ bound` from a certified comparison.
fn le_verdict(value: &RealEnclosure, bound: &RealEnclosure) -> Verdict {
    match value.cmp_certain(bound) {
        Some(std::cmp::Ordering::Less) | Some(std::cmp::Ordering::Equal) => Verdict::Pass,
        Some(std::cmp::Ordering::Greater) => Verdict::Fail,
        None => Verdict::Undecided,
    }
}

/// Evaluates the four derived bound formulas at `(n, τ)` and, when an
/// enclosure of `log |y|` is supplied, certifies whether each `log |y|`
/// bound holds at the configured constants.
///
/// Requires `n ≥ 3` (so `log log n > 0`) and `τ ≥ 3` (so `log τ > 1`).
///
/// Substituting the `τ` bound into the `log |y|` bound does not literally
/// reproduce `logy_by_n`: with unit constants the substituted value is
/// `(2 + log log log n / log log n)` times `(log n)^4 (log log n)^2`, a factor
/// that lies in `(1, 4)` for all `n ≥ 16`. The `n`-only formulas fold that
/// bounded factor into their constants.
pub fn derived_bounds(
    n: i64,
    tau: i64,
    consts: &BoundConstants,
    logy: Option<&RealEnclosure>,
) -> Result<BoundReport> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n}, need n ≥ 3 for log log n > 0")));
    }
    if tau < 3 {
        return Err(Error::InvalidParameter(format!("τ = {tau}, need τ ≥ 3")));
    }
    consts.validate()?;
    let bits = FORMULA_BITS;
    let ln = log_int(n, bits)?;
    let lln = log_enclosure(&ln, bits)?;
    let ltau = log_int(tau, bits)?;
    let ln3 = ln.pow_int(3)?;
    let ln4 = ln.pow_int(4)?;
    let lln2 = lln.pow_int(2)?;

    let logy_ub = scale_by_ratio(&ln3.mul(&ltau.add(&lln)).mul_int(tau), &consts.c2, bits)?;
    let tau_ub = scale_by_ratio(&ln.mul(&lln), &consts.c3, bits)?;
    let logy_by_n = scale_by_ratio(&ln4.mul(&lln2), &consts.c4, bits)?;
    let coeff_by_n = scale_by_ratio(&ln3.mul(&lln2), &consts.c5, bits)?;

    let tau_enc = RealEnclosure::from_int(tau);
    let tau_within = match tau_enc.cmp_certain(&tau_ub) {
        Some(std::cmp::Ordering::Less) => Verdict::Pass,
        Some(_) => Verdict::Fail,
        None => Verdict::Undecided,
    };
    let logy_within = logy.map(|l| le_verdict(l, &logy_ub));
    let logy_by_n_within = logy.map(|l| le_verdict(l, &logy_by_n));

    Ok(BoundReport {
        n,
        tau,
        logy_ub,
        tau_ub,
        logy_by_n,
        coeff_by_n,
        tau_within,
        logy_within,
        logy_by_n_within,
    })
}

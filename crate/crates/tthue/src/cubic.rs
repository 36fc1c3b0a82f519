//! Certified real roots of the family `f(X; n) = X^3 - (n-1)X^2 - (n+2)X - 1`.
//!
//! For every `n >= 3` the cubic has three real roots
//! `λ0 > n > 0 > λ1 > -1 > λ2`, isolated here by exact-sign bisection inside
//! the rational brackets
//!
//! ```text
//! λ0 ∈ (n + 1/n,      n + 2/n)
//! λ1 ∈ (-1/(n+1),    -1/(n+2))
//! λ2 ∈ (-1 - 1/n,    -1 - 1/(n+1))
//! ```
//!
//! `f` has no rational roots (its values at ±1 are -2n-1 and 1), so the sign
//! of `f` at any dyadic point is exact and nonzero, and every bisection step
//! is a certificate. Root enclosures therefore carry a sign-change proof, not
//! a numerical estimate.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;

use crate::dyadic::{Dyadic, Rounding};
use crate::enclosure::RealEnclosure;
use crate::precision::{PrecisionPolicy, Verdict};
use crate::transcendental::log_enclosure;
use crate::{Error, Result};

/// Certified enclosures of the three real roots for one `n`.
#[derive(Debug, Clone)]
pub struct RootTriple {
    pub n: i64,
    pub lam0: RealEnclosure,
    pub lam1: RealEnclosure,
    pub lam2: RealEnclosure,
    /// Precision at which the final refinement ran.
    pub bits: u32,
    /// Whether every width reached the policy target.
    pub converged: bool,
}

impl RootTriple {
    /// Root enclosure by conjugate index (0, 1, 2).
    pub fn get(&self, i: usize) -> &RealEnclosure {
        match i {
            0 => &self.lam0,
            1 => &self.lam1,
            2 => &self.lam2,
            _ => panic!("root index {i} out of range"),
        }
    }
}

/// Certified enclosures of `log λ0`, `log |λ1|`, `log |λ2|`.
#[derive(Debug, Clone)]
pub struct RootLogs {
    pub n: i64,
    pub log_lam0: RealEnclosure,
    pub log_abs_lam1: RealEnclosure,
    pub log_abs_lam2: RealEnclosure,
    pub bits: u32,
    pub converged: bool,
}

impl RootLogs {
    /// Log enclosure by conjugate index (0, 1, 2).
    pub fn get(&self, i: usize) -> &RealEnclosure {
        match i {
            0 => &self.log_lam0,
            1 => &self.log_abs_lam1,
            2 => &self.log_abs_lam2,
            _ => panic!("log index {i} out of range"),
        }
    }
}

/// One named certified check inside a bracket report.
#[derive(Debug, Clone)]
pub struct BracketCheck {
    pub name: &'static str,
    pub verdict: Verdict,
}

/// Outcome of a family of bracket checks; `verdict` is their conjunction.
#[derive(Debug, Clone)]
pub struct BracketReport {
    pub n: i64,
    pub verdict: Verdict,
    pub checks: Vec<BracketCheck>,
}

impl BracketReport {
    fn from_checks(n: i64, checks: Vec<BracketCheck>) -> Self {
        let verdict = Verdict::all(checks.iter().map(|c| c.verdict));
        BracketReport { n, verdict, checks }
    }

    /// All-undecided report used when even root isolation was impossible at
    /// the allowed precision.
    fn undecided(n: i64, names: &[&'static str]) -> Self {
        let checks = names
            .iter()
            .map(|name| BracketCheck { name, verdict: Verdict::Undecided })
            .collect();
        BracketReport { n, verdict: Verdict::Undecided, checks }
    }
}

fn ratio(p: i64, q: i64) -> Ratio<BigInt> {
    Ratio::new(BigInt::from(p), BigInt::from(q))
}

/// `f(x; n)` at an exact rational point.
fn f_at_ratio(n: i64, x: &Ratio<BigInt>) -> Ratio<BigInt> {
    let n1 = Ratio::from_integer(BigInt::from(n - 1));
    let n2 = Ratio::from_integer(BigInt::from(n + 2));
    ((x - n1) * x - n2) * x - Ratio::from_integer(BigInt::one())
}

/// `f(x; n)` at an exact dyadic point.
fn f_at_dyadic(n: i64, x: &Dyadic) -> Dyadic {
    let n1 = Dyadic::from_int(n - 1);
    let n2 = Dyadic::from_int(n + 2);
    let one = Dyadic::one();
    let cubic = &(&(x - &n1) * x) - &n2;
    &(&cubic * x) - &one
}

/// `f` over an enclosure, by exact interval arithmetic.
pub fn f_enclosure(n: i64, x: &RealEnclosure) -> RealEnclosure {
    let n1 = RealEnclosure::from_int(n - 1);
    let n2 = RealEnclosure::from_int(n + 2);
    x.sub(&n1).mul(x).sub(&n2).mul(x).sub(&RealEnclosure::one())
}

/// Initial rational bracket `(lo, hi)` of root `i`.
fn bracket(n: i64, i: usize) -> (Ratio<BigInt>, Ratio<BigInt>) {
    match i {
        0 => (ratio(n * n + 1, n), ratio(n * n + 2, n)),
        1 => (ratio(-1, n + 1), ratio(-1, n + 2)),
        2 => (ratio(-(n + 1), n), ratio(-(n + 2), n + 1)),
        _ => panic!("root index {i} out of range"),
    }
}

fn check_n(n: i64) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("field parameter n = {n}, need n >= 3")));
    }
    Ok(())
}

/// A dyadic interval with certified opposite signs of `f` at its endpoints.
#[derive(Clone)]
struct Isolation {
    a: Dyadic,
    b: Dyadic,
    sign_a: i32,
}

impl Isolation {
    /// Converts the rational bracket of root `i` to dyadic endpoints at
    /// `p` bits and certifies the sign change survives the conversion.
    fn start(n: i64, i: usize, p: u32) -> Result<Isolation> {
        let (lo, hi) = bracket(n, i);
        let flo = f_at_ratio(n, &lo);
        let fhi = f_at_ratio(n, &hi);
        if flo.numer().sign() == fhi.numer().sign() {
            return Err(Error::InvalidParameter(format!(
                "bracket for root {i} at n = {n} carries no sign change"
            )));
        }
        // Inward conversion keeps the dyadic interval inside the bracket.
        let a = Dyadic::from_ratio(&lo, p, Rounding::Ceil);
        let b = Dyadic::from_ratio(&hi, p, Rounding::Floor);
        if a >= b {
            return Err(Error::PrecisionExhausted {
                bits: p,
                what: format!("bracket endpoints for root {i} at n = {n} collapse"),
            });
        }
        let sa = f_at_dyadic(n, &a).signum();
        let sb = f_at_dyadic(n, &b).signum();
        if sa == 0 || sb == 0 || sa == sb {
            return Err(Error::PrecisionExhausted {
                bits: p,
                what: format!("sign change for root {i} at n = {n} lost in conversion"),
            });
        }
        Ok(Isolation { a, b, sign_a: sa })
    }

    /// Exact-sign bisection until the interval is at most `target` wide.
    fn refine(&mut self, n: i64, target: &Dyadic) {
        while &self.b - &self.a > *target {
            let mid = (&self.a + &self.b).half();
            if f_at_dyadic(n, &mid).signum() == self.sign_a {
                self.a = mid;
            } else {
                self.b = mid;
            }
        }
    }

    fn enclosure(&self) -> RealEnclosure {
        RealEnclosure::new(self.a.clone(), self.b.clone())
    }
}

/// Escalating root finder that reuses earlier bisection work across the
/// policy's bit schedule.
struct RootFinder {
    n: i64,
    state: [Option<Isolation>; 3],
}

impl RootFinder {
    fn new(n: i64) -> Self {
        RootFinder { n, state: [None, None, None] }
    }

    /// All three roots at width `<= 2^-bits`, starting isolation lazily.
    fn roots_at(&mut self, bits: u32) -> Result<[RealEnclosure; 3]> {
        let target = Dyadic::pow2(-(bits as i64));
        let mut out = Vec::with_capacity(3);
        for i in 0..3 {
            if self.state[i].is_none() {
                self.state[i] = Some(Isolation::start(self.n, i, bits + 32)?);
            }
            let iso = self.state[i].as_mut().expect("just initialized");
            iso.refine(self.n, &target);
            out.push(iso.enclosure());
        }
        Ok(out.try_into().expect("three roots"))
    }
}

/// Computes certified enclosures of the three roots, escalating precision per
/// `policy` until all widths are at most `policy.target_width`.
///
/// A non-converged result is still a valid (wider) enclosure triple; the
/// `converged` flag reports it. Errors with `PrecisionExhausted` only when the
/// bracket endpoints cannot even be separated at the allowed precision.
pub fn compute_roots(n: i64, policy: &PrecisionPolicy) -> Result<RootTriple> {
    check_n(n)?;
    let mut finder = RootFinder::new(n);
    let schedule = policy.bit_schedule();
    let last = *schedule.last().expect("non-empty schedule");
    let mut result: Option<(u32, [RealEnclosure; 3])> = None;
    for bits in schedule {
        match finder.roots_at(bits) {
            Ok(roots) => {
                let done = roots.iter().all(|r| r.width() <= policy.target_width);
                result = Some((bits, roots));
                if done {
                    break;
                }
            }
            Err(e @ Error::PrecisionExhausted { .. }) => {
                if bits == last && result.is_none() {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
    let (bits, [lam0, lam1, lam2]) = result.ok_or(Error::PrecisionExhausted {
        bits: last,
        what: format!("no root isolation possible for n = {n}"),
    })?;
    let converged = [&lam0, &lam1, &lam2].iter().all(|r| r.width() <= policy.target_width);
    Ok(RootTriple { n, lam0, lam1, lam2, bits, converged })
}

/// Computes certified enclosures of `log λ0`, `log |λ1|`, `log |λ2|`,
/// escalating until the log widths meet the policy target.
pub fn compute_root_logs(n: i64, policy: &PrecisionPolicy) -> Result<RootLogs> {
    check_n(n)?;
    let mut finder = RootFinder::new(n);
    let schedule = policy.bit_schedule();
    let last = *schedule.last().expect("non-empty schedule");
    let mut result: Option<(u32, [RealEnclosure; 3])> = None;
    for bits in schedule {
        match finder.roots_at(bits) {
            Ok(roots) => {
                let logs = [
                    log_enclosure(&roots[0], bits)?,
                    log_enclosure(&roots[1].abs(), bits)?,
                    log_enclosure(&roots[2].abs(), bits)?,
                ];
                let done = logs.iter().all(|l| l.width() <= policy.target_width);
                result = Some((bits, logs));
                if done {
                    break;
                }
            }
            Err(e @ Error::PrecisionExhausted { .. }) => {
                if bits == last && result.is_none() {
                    return Err(e);
                }
            }
            Err(e) => return Err(e),
        }
    }
    let (bits, [log_lam0, log_abs_lam1, log_abs_lam2]) = result.ok_or(Error::PrecisionExhausted {
        bits: last,
        what: format!("no root isolation possible for n = {n}"),
    })?;
    let converged = [&log_lam0, &log_abs_lam1, &log_abs_lam2]
        .iter()
        .all(|l| l.width() <= policy.target_width);
    Ok(RootLogs { n, log_lam0, log_abs_lam1, log_abs_lam2, bits, converged })
}

/// Certifies `enc relation bound` strictly; `Undecided` when the enclosure
/// straddles the bound.
fn certify_ratio(enc: &RealEnclosure, bound: &Ratio<BigInt>, want_greater: bool) -> Verdict {
    use std::cmp::Ordering::*;
    let lo = enc.lo().cmp_ratio(bound);
    let hi = enc.hi().cmp_ratio(bound);
    if want_greater {
        match (lo, hi) {
            (Greater, _) => Verdict::Pass,
            (_, Less) | (_, Equal) => Verdict::Fail,
            _ => Verdict::Undecided,
        }
    } else {
        match (lo, hi) {
            (_, Less) => Verdict::Pass,
            (Greater, _) | (Equal, _) => Verdict::Fail,
            _ => Verdict::Undecided,
        }
    }
}

/// Certifies `left < right` for enclosures.
fn certify_less(left: &RealEnclosure, right: &RealEnclosure) -> Verdict {
    if left.hi() < right.lo() {
        Verdict::Pass
    } else if left.lo() >= right.hi() {
        Verdict::Fail
    } else {
        Verdict::Undecided
    }
}

const BRACKET_CHECKS: [&str; 7] = [
    "lam0_above_lower",
    "lam0_below_upper",
    "lam1_above_lower",
    "lam1_below_upper",
    "lam2_above_lower",
    "lam2_below_upper",
    "roots_disjoint",
];

/// Certifies the six rational bracket inequalities for the three roots plus
/// pairwise disjointness of the enclosures (which pins each interval to a
/// distinct root). Precision exhaustion yields an all-undecided report.
pub fn verify_root_brackets(n: i64, policy: &PrecisionPolicy) -> Result<BracketReport> {
    check_n(n)?;
    let triple = match compute_roots(n, policy) {
        Ok(t) => t,
        Err(Error::PrecisionExhausted { .. }) => {
            return Ok(BracketReport::undecided(n, &BRACKET_CHECKS));
        }
        Err(e) => return Err(e),
    };
    let mut checks = Vec::new();
    for (i, root) in [&triple.lam0, &triple.lam1, &triple.lam2].into_iter().enumerate() {
        let (lo, hi) = bracket(n, i);
        checks.push(BracketCheck {
            name: BRACKET_CHECKS[2 * i],
            verdict: certify_ratio(root, &lo, true),
        });
        checks.push(BracketCheck {
            name: BRACKET_CHECKS[2 * i + 1],
            verdict: certify_ratio(root, &hi, false),
        });
    }
    let disjoint = Verdict::all([
        certify_less(&triple.lam2, &triple.lam1),
        certify_less(&triple.lam1, &triple.lam0),
    ]);
    checks.push(BracketCheck { name: "roots_disjoint", verdict: disjoint });
    Ok(BracketReport::from_checks(n, checks))
}

const LOG_BRACKET_CHECKS: [&str; 6] = [
    "log_lam0_above_log_n",
    "log_lam0_below_log_n_plus_2_over_n2",
    "log_lam1_above",
    "log_lam1_below",
    "log_lam2_above",
    "log_lam2_below",
];

/// Certifies the root-log brackets
///
/// ```text
/// log n            < log λ0      < log n + 2/n^2
/// -log n - 2/n     < log |λ1|    < -log n - 1/(2n)
/// 1/n - 2/n^2      < log |λ2|    < 1/n + 1/n^2
/// ```
///
/// The λ0 upper constant is 2/n^2: it follows from `λ0 < n + 2/n` via
/// `log(1+x) < x`, and the certified check shows the often-quoted `1/n^2`
/// variant is below the true value for every n, so that variant would fail.
pub fn verify_root_log_brackets(n: i64, policy: &PrecisionPolicy) -> Result<BracketReport> {
    check_n(n)?;
    let logs = match compute_root_logs(n, policy) {
        Ok(l) => l,
        Err(Error::PrecisionExhausted { .. }) => {
            return Ok(BracketReport::undecided(n, &LOG_BRACKET_CHECKS));
        }
        Err(e) => return Err(e),
    };
    let bits = logs.bits + 16;
    let log_n = crate::transcendental::log_int(n, bits)?;
    let bound = |r: Ratio<BigInt>| RealEnclosure::from_ratio(&r, bits);
    let n2 = n.checked_mul(n).expect("n^2 fits i64");

    let checks = vec![
        BracketCheck {
            name: LOG_BRACKET_CHECKS[0],
            verdict: certify_less(&log_n, &logs.log_lam0),
        },
        BracketCheck {
            name: LOG_BRACKET_CHECKS[1],
            verdict: certify_less(&logs.log_lam0, &log_n.add(&bound(ratio(2, n2)))),
        },
        BracketCheck {
            name: LOG_BRACKET_CHECKS[2],
            verdict: certify_less(&log_n.neg().sub(&bound(ratio(2, n))), &logs.log_abs_lam1),
        },
        BracketCheck {
            name: LOG_BRACKET_CHECKS[3],
            verdict: certify_less(&logs.log_abs_lam1, &log_n.neg().sub(&bound(ratio(1, 2 * n)))),
        },
        BracketCheck {
            name: LOG_BRACKET_CHECKS[4],
            verdict: certify_less(&bound(ratio(1, n) - ratio(2, n2)), &logs.log_abs_lam2),
        },
        BracketCheck {
            name: LOG_BRACKET_CHECKS[5],
            verdict: certify_less(&logs.log_abs_lam2, &bound(ratio(1, n) + ratio(1, n2))),
        },
    ];
    Ok(BracketReport::from_checks(n, checks))
}

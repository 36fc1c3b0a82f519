//! Precision escalation policy and three-valued verification verdicts.

use std::fmt;

use crate::dyadic::Dyadic;
use crate::enclosure::RealEnclosure;

/// Controls how adaptive computations escalate working precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrecisionPolicy {
    /// First precision tried.
    pub start_bits: u32,
    /// Hard ceiling; computations stop escalating here.
    pub max_bits: u32,
    /// Multiplier between successive precisions (clamped to at least 2).
    pub escalation_factor: u32,
    /// Refinement stops once an enclosure is at most this wide.
    pub target_width: Dyadic,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: 128,
            max_bits: 16384,
            escalation_factor: 2,
            target_width: Dyadic::pow2(-64),
        }
    }
}

impl PrecisionPolicy {
    /// Default policy with custom start and ceiling.
    pub fn with_bits(start_bits: u32, max_bits: u32) -> Self {
        PrecisionPolicy { start_bits, max_bits, ..Default::default() }
    }

    /// The precisions tried, in order: `start, start*f, ...` capped at
    /// `max_bits` (which is always the last entry when reached).
    pub fn bit_schedule(&self) -> Vec<u32> {
        let factor = self.escalation_factor.max(2);
        let max = self.max_bits.max(1);
        let mut b = self.start_bits.clamp(1, max);
        let mut out = Vec::new();
        loop {
            out.push(b);
            if b >= max {
                break;
            }
            b = b.saturating_mul(factor).min(max);
        }
        out
    }
}

/// Result of an adaptive refinement.
#[derive(Debug, Clone)]
pub struct Refined {
    /// Narrowest enclosure achieved.
    pub enclosure: RealEnclosure,
    /// Precision at which it was computed.
    pub bits: u32,
    /// Whether the target width was reached. `false` is a report, not an
    /// error: the enclosure is still valid, just wider than requested.
    pub converged: bool,
}

/// Runs `compute` along the policy's bit schedule until the result is at most
/// `target_width` wide or the budget is exhausted, returning the narrowest
/// enclosure seen. Errors from `compute` abort the refinement.
pub fn refine_until<E>(
    policy: &PrecisionPolicy,
    mut compute: impl FnMut(u32) -> std::result::Result<RealEnclosure, E>,
) -> std::result::Result<Refined, E> {
    let mut best: Option<Refined> = None;
    for bits in policy.bit_schedule() {
        let enc = compute(bits)?;
        let done = enc.width() <= policy.target_width;
        let better = match &best {
            Some(b) => enc.width() < b.enclosure.width(),
            None => true,
        };
        if better {
            best = Some(Refined { enclosure: enc, bits, converged: done });
        } else if let Some(b) = &mut best {
            b.converged = done;
        }
        if done {
            break;
        }
    }
    Ok(best.expect("bit schedule is never empty"))
}

/// Outcome of a certified check. `Pass` and `Fail` are proven; `Undecided`
/// means the precision budget ran out before either could be certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
}

impl Verdict {
    /// Conjunction: any `Fail` dominates, then any `Undecided`.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Undecided, _) | (_, Undecided) => Undecided,
            (Pass, Pass) => Pass,
        }
    }

    /// Conjunction over an iterator, `Pass` when empty.
    pub fn all(checks: impl IntoIterator<Item = Verdict>) -> Verdict {
        checks.into_iter().fold(Verdict::Pass, Verdict::and)
    }

    /// `true` on a certified inequality, `false` otherwise.
    pub fn from_certain(decided: Option<bool>) -> Verdict {
        match decided {
            Some(true) => Verdict::Pass,
            Some(false) => Verdict::Fail,
            None => Verdict::Undecided,
        }
    }

    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Undecided => "undecided",
        };
        f.write_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enclosure::RealEnclosure;
    use num_bigint::BigInt;

    #[test]
    fn schedule_doubles_and_caps() {
        let p = PrecisionPolicy::default();
        let s = p.bit_schedule();
        assert_eq!(s.first(), Some(&128));
        assert_eq!(s.last(), Some(&16384));
        assert!(s.windows(2).all(|w| w[1] == (w[0] * 2).min(16384)));
    }

    #[test]
    fn degenerate_schedule_is_single_entry() {
        let p = PrecisionPolicy::with_bits(16, 16);
        assert_eq!(p.bit_schedule(), vec![16]);
    }

    #[test]
    fn refine_stops_at_target() {
        let p = PrecisionPolicy::default();
        let mut calls = 0u32;
        let r: Result<_, std::convert::Infallible> = refine_until(&p, |bits| {
            calls += 1;
            Ok(RealEnclosure::new(
                Dyadic::zero(),
                Dyadic::new(BigInt::from(1), -(bits as i64)),
            ))
        });
        let r = r.unwrap();
        assert!(r.converged);
        assert_eq!(calls, 1, "128-bit width already beats 2^-64");
        assert_eq!(r.bits, 128);
    }

    #[test]
    fn refine_reports_plateau_without_erroring() {
        // Width stuck at 1/2 regardless of precision: must return the best
        // achieved enclosure with converged = false, not an error.
        let p = PrecisionPolicy { start_bits: 32, max_bits: 128, ..Default::default() };
        let r: Result<_, std::convert::Infallible> = refine_until(&p, |_| {
            Ok(RealEnclosure::new(Dyadic::zero(), Dyadic::pow2(-1)))
        });
        let r = r.unwrap();
        assert!(!r.converged);
        assert_eq!(r.enclosure.width(), Dyadic::pow2(-1));
    }

    #[test]
    fn refine_keeps_narrowest() {
        // A buggy-looking oscillation still yields the narrowest result.
        let p = PrecisionPolicy { start_bits: 32, max_bits: 64, ..Default::default() };
        let mut widths = [Dyadic::pow2(-10), Dyadic::pow2(-5)].into_iter();
        let r: Result<_, std::convert::Infallible> = refine_until(&p, |_| {
            Ok(RealEnclosure::new(Dyadic::zero(), widths.next().unwrap()))
        });
        assert_eq!(r.unwrap().enclosure.width(), Dyadic::pow2(-10));
    }

    #[test]
    fn verdict_conjunction() {
        use Verdict::*;
        assert_eq!(Pass.and(Pass), Pass);
        assert_eq!(Pass.and(Undecided), Undecided);
        assert_eq!(Undecided.and(Fail), Fail);
        assert_eq!(Verdict::all([Pass, Pass, Pass]), Pass);
        assert_eq!(Verdict::all([Pass, Undecided]), Undecided);
        assert_eq!(Verdict::all([]), Pass);
    }
}

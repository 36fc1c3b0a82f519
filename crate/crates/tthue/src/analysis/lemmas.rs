//! Certified verifiers for the supporting inequalities of the analysis.
//!
//! Each verifier evaluates one named statement on concrete inputs and
//! returns a [`LemmaReport`]: hypothesis checks (exact arithmetic), claim
//! checks (certified enclosure comparisons, escalating precision until
//! every comparison is decided or the budget runs out), and free-form
//! notes. A violated hypothesis yields `Undecided` — the statement makes
//! no claim there — and a claim that certifiably fails yields `Fail`.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::enclosure::RealEnclosure;
use crate::form::alpha_family;
use crate::precision::{PrecisionPolicy, Verdict};
use crate::transcendental::{log_bigint, log_enclosure, log_int, pow_rational};
use crate::{Dyadic, Error, Result};

use super::{
    compute_c1, embed_context, embed_triple, round_unique, separation_condition,
    BetaDecomposition, C1Outcome, Epsilon, RecordOrigin, SolutionRecord,
};

/// One named inequality or side condition inside a lemma verification.
#[derive(Debug, Clone)]
pub struct LemmaCheckItem {
    pub what: String,
    pub verdict: Verdict,
}

/// Outcome of one lemma verification run.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub name: &'static str,
    /// `Pass` when every claim is certified, `Fail` when some claim
    /// certifiably fails, `Undecided` when the hypotheses do not hold or
    /// the precision budget could not decide every comparison.
    pub verdict: Verdict,
    /// Whether all hypothesis items held (exact checks).
    pub hypothesis_ok: bool,
    /// Hypothesis items followed by claim items, in evaluation order.
    pub checks: Vec<LemmaCheckItem>,
    /// Dimensionless measurement reported by some verifiers (e.g. the
    /// coefficient-to-cap quotient), for calibration.
    pub observed_ratio: Option<RealEnclosure>,
    pub notes: Vec<String>,
}

/// Accumulates hypothesis and claim items, then folds the verdict.
struct ReportBuilder {
    name: &'static str,
    hypothesis_ok: bool,
    checks: Vec<LemmaCheckItem>,
    claim_verdicts: Vec<Verdict>,
    observed_ratio: Option<RealEnclosure>,
    notes: Vec<String>,
}

impl ReportBuilder {
    fn new(name: &'static str) -> Self {
        ReportBuilder {
            name,
            hypothesis_ok: true,
            checks: Vec::new(),
            claim_verdicts: Vec::new(),
            observed_ratio: None,
            notes: Vec::new(),
        }
    }

    fn hypothesis(&mut self, what: impl Into<String>, ok: bool) -> bool {
        self.checks.push(LemmaCheckItem {
            what: what.into(),
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        });
        self.hypothesis_ok &= ok;
        ok
    }

    fn claim(&mut self, what: impl Into<String>, verdict: Verdict) {
        self.checks.push(LemmaCheckItem { what: what.into(), verdict });
        self.claim_verdicts.push(verdict);
    }

    fn claims(&mut self, items: Vec<LemmaCheckItem>) {
        for item in items {
            self.claim(item.what, item.verdict);
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.notes.push(msg.into());
    }

    fn finish(self) -> LemmaReport {
        let verdict = if !self.hypothesis_ok {
            Verdict::Undecided
        } else if self.claim_verdicts.is_empty() {
            Verdict::Undecided
        } else {
            Verdict::all(self.claim_verdicts.iter().copied())
        };
        LemmaReport {
            name: self.name,
            verdict,
            hypothesis_ok: self.hypothesis_ok,
            checks: self.checks,
            observed_ratio: self.observed_ratio,
            notes: self.notes,
        }
    }
}

/// Certified verdict for `left < right`.
fn certify_lt(left: &RealEnclosure, right: &RealEnclosure) -> Verdict {
    Verdict::from_certain(match left.cmp_certain(right) {
        Some(std::cmp::Ordering::Less) => Some(true),
        Some(_) => Some(false),
        None => None,
    })
}

/// Certified verdict for `left ≤ right`.
fn certify_le(left: &RealEnclosure, right: &RealEnclosure) -> Verdict {
    Verdict::from_certain(match left.cmp_certain(right) {
        Some(std::cmp::Ordering::Greater) => Some(false),
        Some(_) => Some(true),
        None => None,
    })
}

/// Runs one precision step repeatedly over the policy's bit schedule.
/// `step` returns `None` when the inputs are not yet separated well enough
/// to even state the claims; otherwise the items, possibly `Undecided`.
/// Stops at the first fully decided set, else keeps the last attempt.
fn escalate_claims<F>(policy: &PrecisionPolicy, mut step: F) -> Result<Option<Vec<LemmaCheckItem>>>
where
    F: FnMut(u32) -> Result<Option<Vec<LemmaCheckItem>>>,
{
    let mut last: Option<Vec<LemmaCheckItem>> = None;
    for bits in policy.bit_schedule() {
        if let Some(items) = step(bits)? {
            let decided = items.iter().all(|i| i.verdict != Verdict::Undecided);
            last = Some(items);
            if decided {
                break;
            }
        }
    }
    Ok(last)
}

/// Verifies that admissible twists keep the conjugates of `α₀` far apart:
/// for every pair with `|α_q| > |α_p|` certified,
/// `|α_p/α_q| < ρ`, `ρ ≤ 1/2`, and `|α_p − α_q| > (1 − ρ)|α_q| > |α_q|/2`,
/// where `ρ = n^{−c₁τ}` at the certified feasible `c₁`.
///
/// Hypotheses: the separation condition on `(s, t, ε)` and feasibility of
/// `c₁ = ε − 3(n+1)/(n² log n)`.
pub fn verify_alphadiff(
    n: i64,
    s: i64,
    t: i64,
    eps: &Epsilon,
    policy: &PrecisionPolicy,
) -> Result<LemmaReport> {
    let mut rb = ReportBuilder::new("alphadiff");
    let tau = s.abs().max(t.abs());
    if !rb.hypothesis(
        format!("separation: min(|2s−t|, |2t−s|, |s+t|) > ε·max(|s|, |t|) and st ≠ 0 at (s, t) = ({s}, {t})"),
        separation_condition(s, t, eps),
    ) {
        rb.note("the twist violates the separation condition; no claim is made");
        return Ok(rb.finish());
    }
    let c1_value = match compute_c1(eps, n, tau)? {
        C1Outcome::Feasible(v) => v,
        C1Outcome::Infeasible { reason } => {
            rb.hypothesis("c₁ = ε − 3(n+1)/(n²·log n) is feasible", false);
            rb.note(reason);
            return Ok(rb.finish());
        }
    };
    rb.hypothesis("c₁ = ε − 3(n+1)/(n²·log n) is feasible", true);

    let alphas = alpha_family(n, s, t)?;
    let base = Ratio::new(BigInt::one(), BigInt::from(n));
    let expo = &c1_value * Ratio::from_integer(BigInt::from(tau));
    let half = RealEnclosure::point(Dyadic::pow2(-1));

    let items = escalate_claims(policy, |bits| {
        let ctx = embed_context(n, bits)?;
        let a_re = embed_triple(&alphas, &ctx);
        let abs = [a_re[0].abs(), a_re[1].abs(), a_re[2].abs()];
        // Certified (smaller, larger) pairs; ties are impossible for
        // (s, t) ≠ (0, 0), so escalate until all three are decided.
        let mut pairs = Vec::new();
        for p in 0..3usize {
            for q in (p + 1)..3 {
                match abs[p].cmp_certain(&abs[q]) {
                    Some(std::cmp::Ordering::Less) => pairs.push((p, q)),
                    Some(std::cmp::Ordering::Greater) => pairs.push((q, p)),
                    _ => return Ok(None),
                }
            }
        }
        let rho = pow_rational(&base, &expo, bits)?;
        let one_minus_rho = RealEnclosure::one().sub(&rho);
        let mut items = vec![LemmaCheckItem {
            what: "ρ = n^(−c₁τ) ≤ 1/2".into(),
            verdict: certify_le(&rho, &half),
        }];
        for &(p, q) in &pairs {
            let quotient = abs[p].div(&abs[q], bits)?;
            let diff = a_re[p].sub(&a_re[q]).abs();
            let floor = one_minus_rho.mul(&abs[q]);
            items.push(LemmaCheckItem {
                what: format!("|α_{p}/α_{q}| < ρ"),
                verdict: certify_lt(&quotient, &rho),
            });
            items.push(LemmaCheckItem {
                what: format!("|α_{p} − α_{q}| > (1 − ρ)·|α_{q}|"),
                verdict: certify_lt(&floor, &diff),
            });
            items.push(LemmaCheckItem {
                what: format!("(1 − ρ)·|α_{q}| > |α_{q}|/2"),
                verdict: certify_lt(&abs[q].scale_pow2(-1), &floor),
            });
        }
        Ok(Some(items))
    })?;
    match items {
        Some(items) => rb.claims(items),
        None => {
            rb.claim("certified |α| ordering", Verdict::Undecided);
            rb.note("the conjugate magnitudes could not be separated within the precision budget");
        }
    }
    Ok(rb.finish())
}

/// Verifies the exact product-of-maxima inequality: for positive rationals
/// with `a·b·c = 1`, `(max(a,b)·max(a,c))² ≥ max(a,b,c)`.
pub fn verify_prodbymax(a: &Ratio<BigInt>, b: &Ratio<BigInt>, c: &Ratio<BigInt>) -> LemmaReport {
    let mut rb = ReportBuilder::new("prodbymax");
    if !rb.hypothesis("a, b, c are positive", a.is_positive() && b.is_positive() && c.is_positive())
    {
        return rb.finish();
    }
    if !rb.hypothesis("a·b·c = 1", (a * b * c).is_one()) {
        return rb.finish();
    }
    let max_ab = a.max(b);
    let max_ac = a.max(c);
    let max_abc = max_ab.max(c);
    let product = max_ab * max_ac;
    let squared = &product * &product;
    rb.claim(
        "(max(a,b)·max(a,c))² ≥ max(a,b,c)",
        Verdict::from_certain(Some(squared >= *max_abc)),
    );
    rb.finish()
}

/// Verifies the two-sided bound on `M = max_i log|α_i|`:
/// `M ≤ 3τ·log n` and `M ≥ 0.19·τ·log n` for any twist with `st ≠ 0`,
/// plus `M ≥ c₁·τ·log n` when an `ε` is supplied and `c₁` is feasible.
///
/// The observed ratio `M / (τ·log n)` is reported for calibration.
pub fn verify_alphamax(
    n: i64,
    s: i64,
    t: i64,
    eps: Option<&Epsilon>,
    policy: &PrecisionPolicy,
) -> Result<LemmaReport> {
    let mut rb = ReportBuilder::new("alphamax");
    let tau = s.abs().max(t.abs());
    if !rb.hypothesis(format!("st ≠ 0 at (s, t) = ({s}, {t})"), s != 0 && t != 0) {
        return Ok(rb.finish());
    }
    let c1_value = match eps {
        None => {
            rb.note("no ε supplied; the conditional bound M ≥ c₁·τ·log n was not evaluated");
            None
        }
        Some(e) => match compute_c1(e, n, tau)? {
            C1Outcome::Feasible(v) => Some(v),
            C1Outcome::Infeasible { reason } => {
                rb.note(format!("conditional bound M ≥ c₁·τ·log n skipped: {reason}"));
                None
            }
        },
    };

    let alphas = alpha_family(n, s, t)?;
    let nineteen = Ratio::new(BigInt::from(19), BigInt::from(100));
    let mut observed = None;
    let items = escalate_claims(policy, |bits| {
        let ctx = embed_context(n, bits)?;
        let a_re = embed_triple(&alphas, &ctx);
        let abs = [a_re[0].abs(), a_re[1].abs(), a_re[2].abs()];
        if abs.iter().any(|e| !e.lo().is_positive()) {
            return Ok(None);
        }
        let logs = [
            log_enclosure(&abs[0], bits)?,
            log_enclosure(&abs[1], bits)?,
            log_enclosure(&abs[2], bits)?,
        ];
        let m = logs[0].max_with(&logs[1]).max_with(&logs[2]);
        let tau_log_n = log_int(n, bits)?.mul_int(tau);
        observed = Some(m.div(&tau_log_n, bits)?);
        let mut items = vec![
            LemmaCheckItem {
                what: "M ≤ 3τ·log n".into(),
                verdict: certify_le(&m, &tau_log_n.mul_int(3)),
            },
            LemmaCheckItem {
                what: "M ≥ 0.19·τ·log n".into(),
                verdict: certify_le(
                    &tau_log_n.mul(&RealEnclosure::from_ratio(&nineteen, bits)),
                    &m,
                ),
            },
        ];
        if let Some(c1) = &c1_value {
            items.push(LemmaCheckItem {
                what: "M ≥ c₁·τ·log n".into(),
                verdict: certify_le(
                    &tau_log_n.mul(&RealEnclosure::from_ratio(c1, bits)),
                    &m,
                ),
            });
        }
        Ok(Some(items))
    })?;
    rb.observed_ratio = observed;
    match items {
        Some(items) => rb.claims(items),
        None => {
            rb.claim("separate |α_i| from zero", Verdict::Undecided);
            rb.note("a conjugate magnitude stayed unseparated from zero within the precision budget");
        }
    }
    Ok(rb.finish())
}

/// Verifies the size bound gleaned from a classified solution record with
/// both coordinates nonzero:
/// `max(|α_k|, |α_l|) < 2|y| · max(|α_j|, |α_k|) · max(|α_j|, |α_l|)`,
/// together with the coordinate bound it rests on, `2|y|·|α_j| > 1`.
///
/// Hypotheses: the record classifies a genuine solution, `|y| ≥ 1`, and
/// `x ≠ 0`. Records with `x = 0` form the trivial family `(0, ±1)`; the
/// report still checks `|y| = 1` for them exactly, but the size bound
/// makes no claim there — it can genuinely fail on that family whenever
/// the middle conjugate magnitude drops below `1/2`, as it does for
/// example at `(n, s, t) = (3, −2, −1)`.
pub fn verify_alphasalad(record: &SolutionRecord, policy: &PrecisionPolicy) -> Result<LemmaReport> {
    let mut rb = ReportBuilder::new("alphasalad");
    rb.hypothesis(
        "the record classifies a genuine solution",
        record.origin == RecordOrigin::Solution,
    );
    rb.hypothesis("|y| ≥ 1", !record.y.is_zero());
    let x_zero = record.x.is_zero();
    rb.hypothesis("x ≠ 0", !x_zero);
    if x_zero {
        // The excluded family still carries exact content worth surfacing:
        // a vanishing x-coordinate pins |y| to 1.
        rb.claim(
            "x = 0 forces |y| = 1",
            Verdict::from_certain(Some(record.y.abs() == BigInt::one())),
        );
        rb.note("x = 0: the record lies in the trivial family (0, ±1), outside the size bound's scope");
    }
    if !rb.hypothesis_ok {
        return Ok(rb.finish());
    }
    let (j, k, l) = (record.j, record.k, record.l);
    let y_abs = record.y.abs();
    let two_y = &y_abs * BigInt::from(2);
    let alphas = record.alphas().clone();
    let items = escalate_claims(policy, |bits| {
        let ctx = embed_context(record.n, bits)?;
        let a_re = embed_triple(&alphas, &ctx);
        let abs = [a_re[0].abs(), a_re[1].abs(), a_re[2].abs()];
        let max_kl = abs[k].max_with(&abs[l]);
        let max_jk = abs[j].max_with(&abs[k]);
        let max_jl = abs[j].max_with(&abs[l]);
        let denom = max_jk.mul(&max_jl);
        if !denom.lo().is_positive() {
            return Ok(None);
        }
        let ratio = max_kl.div(&denom, bits)?;
        let items = vec![
            LemmaCheckItem {
                what: format!(
                    "max(|α_{k}|, |α_{l}|) / (max(|α_{j}|, |α_{k}|)·max(|α_{j}|, |α_{l}|)) < 2|y|"
                ),
                verdict: certify_lt(&ratio, &RealEnclosure::from_bigint(&two_y)),
            },
            LemmaCheckItem {
                what: format!("2|y|·|α_{j}| > 1"),
                verdict: certify_lt(&RealEnclosure::one(), &abs[j].mul_bigint(&two_y)),
            },
        ];
        Ok(Some(items))
    })?;
    match items {
        Some(items) => rb.claims(items),
        None => {
            rb.claim("separate the α maxima from zero", Verdict::Undecided);
            rb.note("could not separate the α maxima from zero within the precision budget");
        }
    }
    Ok(rb.finish())
}

/// Verifies the coefficient upper bound for a decomposed `β₀ = ±λ₀^a λ₂^b`:
/// `max(|a|, |b|) ≤ C·(max(0, log|y|)/log n + τ)`, reporting the observed
/// quotient `max(|a|, |b|) / (max(0, log|y|)/log n + τ)` against the cap `C`.
///
/// Also re-derives `(a, b)` from the two conjugate log equations away from
/// the dominated index `j` — rows `(log λ₀, log|λ₂|)` for `β₀`,
/// `(log|λ₁|, log λ₀)` for `β₁`, `(log|λ₂|, log|λ₁|)` for `β₂` — and checks
/// that the rounded solution reproduces the exact word.
pub fn verify_coeff_ub_theta(
    record: &SolutionRecord,
    decomposition: &BetaDecomposition,
    cap: &Ratio<BigInt>,
    policy: &PrecisionPolicy,
) -> Result<LemmaReport> {
    if !cap.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "coefficient cap must be positive, got {cap}"
        )));
    }
    let mut rb = ReportBuilder::new("coeff_ub_theta");
    let n = record.n;
    let tau = record.tau();
    rb.hypothesis("the twist is nontrivial: τ ≥ 1", tau >= 1);
    rb.hypothesis(
        "the decomposition was exactly verified",
        decomposition.exact_verified,
    );
    let expanded = decomposition.word.expand(n)?;
    rb.hypothesis(
        "the decomposition word expands to the record's β₀",
        expanded == record.betas()[0],
    );
    if !rb.hypothesis_ok {
        return Ok(rb.finish());
    }

    let (a, b) = (decomposition.word.a, decomposition.word.b);
    let coeff_max = a.abs().max(b.abs());
    let j = record.j;
    let rows: Vec<usize> = (0..3).filter(|i| *i != j).collect();
    let betas = record.betas().clone();
    let y_abs = record.y.abs();
    let mut observed = None;
    let items = escalate_claims(policy, |bits| {
        let ctx = embed_context(n, bits)?;
        let b_re = embed_triple(&betas, &ctx);
        // Row of the log system for conjugate index i, so that
        // log|β_i| = row.0·a + row.1·b.
        let row = |i: usize| match i {
            0 => (ctx.logs.log_lam0.clone(), ctx.logs.log_abs_lam2.clone()),
            1 => (ctx.logs.log_abs_lam1.clone(), ctx.logs.log_lam0.clone()),
            _ => (ctx.logs.log_abs_lam2.clone(), ctx.logs.log_abs_lam1.clone()),
        };
        let (m11, m12) = row(rows[0]);
        let (m21, m22) = row(rows[1]);
        let abs0 = b_re[rows[0]].abs();
        let abs1 = b_re[rows[1]].abs();
        if !abs0.lo().is_positive() || !abs1.lo().is_positive() {
            return Ok(None);
        }
        let r1 = log_enclosure(&abs0, bits)?;
        let r2 = log_enclosure(&abs1, bits)?;
        let det = m11.mul(&m22).sub(&m12.mul(&m21));
        if det.contains_zero() {
            return Ok(None);
        }
        let a_enc = r1.mul(&m22).sub(&r2.mul(&m12)).div(&det, bits)?;
        let b_enc = m11.mul(&r2).sub(&m21.mul(&r1)).div(&det, bits)?;
        let system_verdict = match (round_unique(&a_enc), round_unique(&b_enc)) {
            (Some(ra), Some(rb_)) => Verdict::from_certain(Some(
                ra == BigInt::from(a) && rb_ == BigInt::from(b),
            )),
            _ => Verdict::Undecided,
        };

        let y_log = if y_abs <= BigInt::one() {
            RealEnclosure::zero()
        } else {
            log_bigint(&y_abs, bits)?
        };
        let scale = y_log
            .div(&log_int(n, bits)?, bits)?
            .add(&RealEnclosure::from_int(tau));
        observed = Some(RealEnclosure::from_int(coeff_max).div(&scale, bits)?);
        let rhs = scale.mul(&RealEnclosure::from_ratio(cap, bits));
        Ok(Some(vec![
            LemmaCheckItem {
                what: format!("the log system at rows {:?} reproduces (a, b) = ({a}, {b})", rows),
                verdict: system_verdict,
            },
            LemmaCheckItem {
                what: format!("max(|a|, |b|) = {coeff_max} ≤ C·(max(0, log|y|)/log n + τ)"),
                verdict: certify_le(&RealEnclosure::from_int(coeff_max), &rhs),
            },
        ]))
    })?;
    rb.observed_ratio = observed;
    match items {
        Some(items) => rb.claims(items),
        None => {
            rb.claim("condition the log system", Verdict::Undecided);
            rb.note("the log system stayed singular or unseparated within the precision budget");
        }
    }
    Ok(rb.finish())
}

/// Parameter bundle for [`verify_lemma`].
pub enum LemmaParams<'a> {
    AlphaDiff { n: i64, s: i64, t: i64, epsilon: &'a Epsilon },
    ProdByMax { a: &'a Ratio<BigInt>, b: &'a Ratio<BigInt>, c: &'a Ratio<BigInt> },
    AlphaMax { n: i64, s: i64, t: i64, epsilon: Option<&'a Epsilon> },
    AlphaSalad { record: &'a SolutionRecord },
    CoeffUbTheta {
        record: &'a SolutionRecord,
        decomposition: &'a BetaDecomposition,
        cap: &'a Ratio<BigInt>,
    },
}

/// Dispatches to the verifier named by the parameter bundle.
pub fn verify_lemma(params: LemmaParams<'_>, policy: &PrecisionPolicy) -> Result<LemmaReport> {
    match params {
        LemmaParams::AlphaDiff { n, s, t, epsilon } => verify_alphadiff(n, s, t, epsilon, policy),
        LemmaParams::ProdByMax { a, b, c } => Ok(verify_prodbymax(a, b, c)),
        LemmaParams::AlphaMax { n, s, t, epsilon } => verify_alphamax(n, s, t, epsilon, policy),
        LemmaParams::AlphaSalad { record } => verify_alphasalad(record, policy),
        LemmaParams::CoeffUbTheta { record, decomposition, cap } => {
            verify_coeff_ub_theta(record, decomposition, cap, policy)
        }
    }
}

//! The three linear forms in logarithms attached to a classified record.
//!
//! With `j, k, l, u, v` as in [`super`] and `δ_pq := α_p − α_q`:
//!
//! - `Λ  = log|β_l/β_k| + log|δ_jk/δ_jl|`, bounded by
//!   `2·|β_j/β_k|·|δ_kl|/|δ_jl|` (valid once that bound is below 1/2);
//! - `Λ′ = log|β_l/β_k| + log|α_u/α_v|` — every α-term is a unit power
//!   product, so `Λ′` is an exact integer word over `(log λ₀, log|λ₂|)`;
//! - `Λ″` — equal to `Λ′` when its word is nonzero; otherwise the vanishing
//!   forces an exact relation `β_l·α_u = ±β_k·α_v` in `Z[λ₀]`, and
//!   substituting it into Siegel's identity isolates one small logarithm,
//!   yielding a form `A·log λ₀ + B·log|λ₂| − C·log 2` with `C ∈ {0, 1}`.
//!
//! Nonzero certification is exact integer/element algebra, never interval
//! guessing: a word `A·log λ₀ + B·log|λ₂| − C·log 2` vanishes iff
//! `(A, B, C) = (0, 0, 0)` — taking norms shows `2^{3C} = 1` kills `C`, and
//! the multiplicative independence of the fundamental pair kills `(A, B)`.

use crate::enclosure::RealEnclosure;
use crate::order::siegel_residual;
use crate::precision::PrecisionPolicy;
use crate::transcendental::{log2_enclosure, log_enclosure};
use crate::{Error, Result};

use super::{
    alpha_log_word, beta_words_for, embed_context, embed_triple, SolutionRecord,
};

/// Which linear form a report describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearFormKind {
    /// `Λ`: β-quotient plus root-difference quotient.
    Lambda,
    /// `Λ′`: β-quotient plus α-maximum quotient (pure unit word).
    LambdaPrime,
    /// `Λ″`: `Λ′` when nonzero, else the branch form with a `log 2` term.
    LambdaDoublePrime,
}

impl std::fmt::Display for LinearFormKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinearFormKind::Lambda => write!(f, "LAMBDA"),
            LinearFormKind::LambdaPrime => write!(f, "LAMBDA_PRIME"),
            LinearFormKind::LambdaDoublePrime => write!(f, "LAMBDA_DBLPRIME"),
        }
    }
}

/// Which substitution produced a `Λ″` branch form, keyed by the `(u, v)`
/// pattern and whether the exact relation `β_l·α_u = ±β_k·α_v` carries a
/// sign flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DoublePrimeBranch {
    /// `(u, v) = (j, j)` with `β_l = −β_k`: emits `log|α_k/α_j| − log 2`.
    MaxJFlip,
    /// `(u, v) = (k, l)`, no flip: emits `log|β_l/β_k|`.
    KlNoFlip,
    /// `(u, v) = (k, l)`, flip: emits `log|β_k/β_l| + log|α_j/α_k| − log 2`.
    KlFlip,
    /// `(u, v) = (k, j)`, no flip: emits `log|β_l/β_k| − log 2`.
    KjNoFlip,
    /// `(u, v) = (k, j)`, flip: emits `log|β_k/β_l| + log|α_l/α_j|`.
    KjFlip,
    /// `(u, v) = (j, l)`, no flip: emits `log|β_k/β_l| − log 2`.
    JlNoFlip,
    /// `(u, v) = (j, l)`, flip: emits `log|β_k/β_l| + log|α_j/α_k|`.
    JlFlip,
}

/// A linear form in logarithms with exact integer coefficients.
#[derive(Debug, Clone)]
pub struct LinearFormReport {
    pub kind: LinearFormKind,
    /// Coefficient of `log λ₀`. For `Λ′`/`Λ″` the enclosure equals
    /// `coeff_lam0·log λ₀ + coeff_lam2·log|λ₂| − coeff_log2·log 2` exactly;
    /// for `Λ` the coefficients carry the β-part word only and the enclosure
    /// additionally contains the `log|δ_jk/δ_jl|` term, which is not an
    /// integer word over the unit logarithms.
    pub coeff_lam0: i64,
    /// Coefficient of `log|λ₂|`.
    pub coeff_lam2: i64,
    /// Coefficient of `−log 2`; always in `{−1, 0, 1}`.
    pub coeff_log2: i64,
    /// Enclosure of the form's value.
    pub enclosure: RealEnclosure,
    /// Enclosure of the derivation's upper-bound expression for the form's
    /// absolute value. Its upper endpoint certifies `|form| ≤ bound` only
    /// when the record's β-triple satisfies Siegel's identity
    /// ([`siegel_exact`](Self::siegel_exact)) and, for `Λ`, when the bound
    /// itself lies below 1/2.
    pub paper_upper_bound: RealEnclosure,
    /// Whether the form is certified nonzero by exact algebra.
    pub nonzero_certified: bool,
    /// The branch taken, for `Λ″` reports that went through a vanishing word.
    pub branch: Option<DoublePrimeBranch>,
    /// Exact check of Siegel's identity on the record's β-triple. Genuine
    /// records always satisfy it; synthetic triples usually do not, and
    /// their bound expressions are then formal.
    pub siegel_exact: bool,
    /// Precision at which the enclosures were produced.
    pub bits: u32,
}

/// Integer coefficient pair of `log|α_p/α_q|` over `(log λ₀, log|λ₂|)`,
/// together with its enclosure.
#[derive(Debug, Clone)]
pub struct AlphaQuotient {
    pub coeff_lam0: i64,
    pub coeff_lam2: i64,
    pub enclosure: RealEnclosure,
}

/// Exact exponent word and enclosure of `log|α_p/α_q|`.
///
/// The word is `A(p) − A(q)` with `A(·)` the α-log words; the three
/// canonical ordered pairs reproduce the quotient table
/// `(0,1) → (2s−t, s−2t)`, `(0,2) → (s−2t, −s−t)`, `(2,1) → (s+t, 2s−t)`,
/// and swapping `(p, q)` negates the word.
pub fn log_alpha_quotient(
    p: usize,
    q: usize,
    n: i64,
    s: i64,
    t: i64,
    policy: &PrecisionPolicy,
) -> Result<AlphaQuotient> {
    if p > 2 || q > 2 || p == q {
        return Err(Error::InvalidParameter(format!(
            "conjugate pair (p, q) = ({p}, {q}) must be distinct indices in 0..=2"
        )));
    }
    let ap = alpha_log_word(s, t, p);
    let aq = alpha_log_word(s, t, q);
    let (c0, c1) = (ap.0 - aq.0, ap.1 - aq.1);
    let logs = crate::cubic::compute_root_logs(n, policy)?;
    let enclosure = logs
        .log_lam0
        .mul_int(c0)
        .add(&logs.log_abs_lam2.mul_int(c1));
    Ok(AlphaQuotient { coeff_lam0: c0, coeff_lam2: c1, enclosure })
}

/// Evaluates the requested linear form for a classified record.
///
/// `Λ` needs only the record's embeddings; `Λ′` and `Λ″` additionally fold
/// the β-quotient into exact unit words (decomposing `β₀` on demand for
/// genuine records). A `Λ″` request first checks the `Λ′` word: if nonzero
/// the report is `Λ′` relabeled, with `nonzero_certified = true`; if zero,
/// the exact relation `β_l·α_u = ±β_k·α_v` selects a branch of the
/// substitution table (see [`DoublePrimeBranch`]), whose emitted form and
/// small-term bound are reported. The degenerate configuration
/// `(u, v) = (j, j)` without sign flip means `β_l = β_k`, which forces
/// `y = 0`; no linear form arises and the call fails with `UnsupportedCase`.
pub fn linear_form(
    record: &SolutionRecord,
    kind: LinearFormKind,
    policy: &PrecisionPolicy,
) -> Result<LinearFormReport> {
    let (j, k, l, u, v) = (record.j, record.k, record.l, record.u, record.v);
    let alphas = record.alphas();
    let betas = record.betas();
    for other in [k, l] {
        if alphas[j] == alphas[other] {
            return Err(Error::InvalidParameter(format!(
                "degenerate twist: α_{j} = α_{other} exactly, the root differences vanish"
            )));
        }
    }
    if alphas[k] == alphas[l] {
        return Err(Error::InvalidParameter(format!(
            "degenerate twist: α_{k} = α_{l} exactly, the root differences vanish"
        )));
    }
    let siegel_exact = siegel_residual(alphas, betas, j, k, l)?.is_zero();

    match kind {
        LinearFormKind::Lambda => lambda_report(record, policy, siegel_exact),
        LinearFormKind::LambdaPrime => {
            let words = beta_words_for(record, policy)?;
            let au = alpha_log_word(record.s, record.t, u);
            let av = alpha_log_word(record.s, record.t, v);
            let coeff = (
                words[l].0 - words[k].0 + au.0 - av.0,
                words[l].1 - words[k].1 + au.1 - av.1,
            );
            prime_report(record, policy, siegel_exact, coeff, LinearFormKind::LambdaPrime, None)
        }
        LinearFormKind::LambdaDoublePrime => {
            let words = beta_words_for(record, policy)?;
            let au = alpha_log_word(record.s, record.t, u);
            let av = alpha_log_word(record.s, record.t, v);
            let coeff = (
                words[l].0 - words[k].0 + au.0 - av.0,
                words[l].1 - words[k].1 + au.1 - av.1,
            );
            if coeff != (0, 0) {
                return prime_report(
                    record,
                    policy,
                    siegel_exact,
                    coeff,
                    LinearFormKind::LambdaDoublePrime,
                    None,
                );
            }
            branch_report(record, policy, siegel_exact, &words)
        }
    }
}

/// `Λ` from the definition, with the quotient bound.
fn lambda_report(
    record: &SolutionRecord,
    policy: &PrecisionPolicy,
    siegel_exact: bool,
) -> Result<LinearFormReport> {
    let (j, k, l) = (record.j, record.k, record.l);
    let alphas = record.alphas();
    let betas = record.betas();
    let words = beta_words_for(record, policy)?;
    let coeff = (words[l].0 - words[k].0, words[l].1 - words[k].1);

    // Exact nonzero test: Λ = log|β_l·δ_jk / (β_k·δ_jl)|, which vanishes
    // iff β_l·δ_jk = ±β_k·δ_jl in Z[λ₀] (the real embedding is injective).
    // Under Siegel's identity this is the classical v ∉ {0, 2} criterion
    // for Λ = log|1 − v|, v = β_j·δ_kl/(β_k·δ_jl), but the element form
    // stays sound for triples that do not satisfy the identity.
    let lhs = betas[l].mul(&alphas[j].sub(&alphas[k])?)?;
    let rhs = betas[k].mul(&alphas[j].sub(&alphas[l])?)?;
    let nonzero_certified = lhs != rhs && lhs != rhs.neg();

    let mut last_bits = policy.start_bits;
    for bits in policy.bit_schedule() {
        last_bits = bits;
        let ctx = embed_context(record.n, bits)?;
        let a_re = embed_triple(alphas, &ctx);
        let b_re = embed_triple(betas, &ctx);
        let d_jk = a_re[j].sub(&a_re[k]).abs();
        let d_jl = a_re[j].sub(&a_re[l]).abs();
        let d_kl = a_re[k].sub(&a_re[l]).abs();
        let b_k = b_re[k].abs();
        let b_l = b_re[l].abs();
        if [&d_jk, &d_jl, &b_k, &b_l].iter().any(|e| !e.lo().is_positive()) {
            continue;
        }
        let enclosure = log_enclosure(&b_l, bits)?
            .sub(&log_enclosure(&b_k, bits)?)
            .add(&log_enclosure(&d_jk, bits)?)
            .sub(&log_enclosure(&d_jl, bits)?);
        let paper_upper_bound = b_re[j]
            .abs()
            .div(&b_k, bits)?
            .mul(&d_kl.div(&d_jl, bits)?)
            .scale_pow2(1);
        return Ok(LinearFormReport {
            kind: LinearFormKind::Lambda,
            coeff_lam0: coeff.0,
            coeff_lam2: coeff.1,
            coeff_log2: 0,
            enclosure,
            paper_upper_bound,
            nonzero_certified,
            branch: None,
            siegel_exact,
            bits,
        });
    }
    Err(Error::PrecisionExhausted {
        bits: last_bits,
        what: "Λ: could not separate β or root-difference magnitudes from zero".into(),
    })
}

/// `Λ′` (or a nonzero-word `Λ″`) from its exact coefficient word.
fn prime_report(
    record: &SolutionRecord,
    policy: &PrecisionPolicy,
    siegel_exact: bool,
    coeff: (i64, i64),
    kind: LinearFormKind,
    branch: Option<DoublePrimeBranch>,
) -> Result<LinearFormReport> {
    let (j, k, l, u, v) = (record.j, record.k, record.l, record.u, record.v);
    let alphas = record.alphas();
    let betas = record.betas();
    let mut last_bits = policy.start_bits;
    for bits in policy.bit_schedule() {
        last_bits = bits;
        let ctx = embed_context(record.n, bits)?;
        let a_re = embed_triple(alphas, &ctx);
        let b_re = embed_triple(betas, &ctx);
        let enclosure = ctx
            .logs
            .log_lam0
            .mul_int(coeff.0)
            .add(&ctx.logs.log_abs_lam2.mul_int(coeff.1));
        // |Λ′| ≤ |Λ| + |log|δ_jk/α_u|| + |log|δ_jl/α_v||, from the exact
        // identity Λ′ = Λ − log|δ_jk/α_u| + log|δ_jl/α_v|.
        let d_jk = a_re[j].sub(&a_re[k]).abs();
        let d_jl = a_re[j].sub(&a_re[l]).abs();
        let d_kl = a_re[k].sub(&a_re[l]).abs();
        let b_k = b_re[k].abs();
        let a_u = a_re[u].abs();
        let a_v = a_re[v].abs();
        if [&d_jk, &d_jl, &b_k, &a_u, &a_v]
            .iter()
            .any(|e| !e.lo().is_positive())
        {
            continue;
        }
        let lambda_bound = b_re[j]
            .abs()
            .div(&b_k, bits)?
            .mul(&d_kl.div(&d_jl, bits)?)
            .scale_pow2(1);
        let term_u = log_enclosure(&d_jk.div(&a_u, bits)?, bits)?.abs();
        let term_v = log_enclosure(&d_jl.div(&a_v, bits)?, bits)?.abs();
        let paper_upper_bound = lambda_bound.add(&term_u).add(&term_v);
        return Ok(LinearFormReport {
            kind,
            coeff_lam0: coeff.0,
            coeff_lam2: coeff.1,
            coeff_log2: 0,
            enclosure,
            paper_upper_bound,
            nonzero_certified: coeff != (0, 0),
            branch,
            siegel_exact,
            bits,
        });
    }
    Err(Error::PrecisionExhausted {
        bits: last_bits,
        what: "Λ′: could not separate the bound's denominators from zero".into(),
    })
}

/// `Λ″` with a vanishing `Λ′` word: select and evaluate the branch form.
fn branch_report(
    record: &SolutionRecord,
    policy: &PrecisionPolicy,
    siegel_exact: bool,
    words: &[(i64, i64); 3],
) -> Result<LinearFormReport> {
    let (j, k, l, u, v) = (record.j, record.k, record.l, record.u, record.v);
    let (s, t) = (record.s, record.t);
    let alphas = record.alphas();
    let betas = record.betas();

    // The vanishing Λ′ word means |β_l·α_u| = |β_k·α_v|; in a real field
    // that forces equality up to sign, and the record's elements decide it.
    let p_el = betas[l].mul(&alphas[u])?;
    let q_el = betas[k].mul(&alphas[v])?;
    let flipped = if p_el == q_el {
        false
    } else if p_el == q_el.neg() {
        true
    } else {
        return Err(Error::ExactVerificationFailed(format!(
            "Λ′ word vanishes but β_{l}·α_{u} ≠ ±β_{k}·α_{v}; the record's words \
             are inconsistent with its elements"
        )));
    };

    let aw = |i: usize| alpha_log_word(s, t, i);
    let wd = |p: usize, q: usize| (words[p].0 - words[q].0, words[p].1 - words[q].1);
    let add = |x: (i64, i64), y: (i64, i64)| (x.0 + y.0, x.1 + y.1);
    let sub = |x: (i64, i64), y: (i64, i64)| (x.0 - y.0, x.1 - y.1);

    // Emitted word, log-2 coefficient, branch tag, and the small terms of
    // `form = log|1 − v|` with `|form| ≤ 2·Σ|small|`:
    // each small term is (numerator elements, denominator elements, halve?).
    let (coeff, c2, branch, smalls) = match (u == j && v == j, u == k && v == l, u == k && v == j)
    {
        (true, _, _) => {
            if !flipped {
                return Err(Error::UnsupportedCase(
                    "β_l = β_k with β_j dominated forces y = 0; the (u, v) = (j, j) \
                     branch only exists for the sign-flipped relation β_l = −β_k"
                        .into(),
                ));
            }
            (
                sub(aw(k), aw(j)),
                1,
                DoublePrimeBranch::MaxJFlip,
                vec![SmallTerm::beta_quotient(j, k, l, k, j, true), SmallTerm::alpha_ratio(l, j, true)],
            )
        }
        (_, true, _) => {
            if !flipped {
                (
                    wd(l, k),
                    0,
                    DoublePrimeBranch::KlNoFlip,
                    vec![SmallTerm::beta_quotient(j, k, l, k, j, false)],
                )
            } else {
                (
                    add(wd(k, l), sub(aw(j), aw(k))),
                    1,
                    DoublePrimeBranch::KlFlip,
                    vec![
                        SmallTerm::beta_quotient(j, k, l, l, k, true),
                        SmallTerm::alpha_ratio(j, k, true),
                    ],
                )
            }
        }
        (_, _, true) => {
            if !flipped {
                (
                    wd(l, k),
                    1,
                    DoublePrimeBranch::KjNoFlip,
                    vec![
                        SmallTerm::beta_quotient(j, k, l, k, j, true),
                        SmallTerm::alpha_ratio(l, j, true),
                    ],
                )
            } else {
                (
                    add(wd(k, l), sub(aw(l), aw(j))),
                    0,
                    DoublePrimeBranch::KjFlip,
                    vec![SmallTerm::beta_quotient(j, k, l, l, j, false)],
                )
            }
        }
        _ => {
            debug_assert!(u == j && v == l, "j = {j}: u ∈ {{j, k}}, v ∈ {{j, l}}");
            if !flipped {
                (
                    wd(k, l),
                    1,
                    DoublePrimeBranch::JlNoFlip,
                    vec![
                        SmallTerm::beta_quotient(j, k, l, l, j, true),
                        SmallTerm::alpha_ratio(k, j, true),
                    ],
                )
            } else {
                (
                    add(wd(k, l), sub(aw(j), aw(k))),
                    0,
                    DoublePrimeBranch::JlFlip,
                    vec![SmallTerm::beta_quotient(j, k, l, l, k, false)],
                )
            }
        }
    };

    let mut last_bits = policy.start_bits;
    for bits in policy.bit_schedule() {
        last_bits = bits;
        let ctx = embed_context(record.n, bits)?;
        let a_re = embed_triple(alphas, &ctx);
        let b_re = embed_triple(betas, &ctx);
        let enclosure = ctx
            .logs
            .log_lam0
            .mul_int(coeff.0)
            .add(&ctx.logs.log_abs_lam2.mul_int(coeff.1))
            .sub(&log2_enclosure(bits).mul_int(c2));
        let mut bound = RealEnclosure::zero();
        let mut retry = false;
        for term in &smalls {
            match term.evaluate(&a_re, &b_re, bits)? {
                Some(value) => bound = bound.add(&value),
                None => {
                    retry = true;
                    break;
                }
            }
        }
        if retry {
            continue;
        }
        return Ok(LinearFormReport {
            kind: LinearFormKind::LambdaDoublePrime,
            coeff_lam0: coeff.0,
            coeff_lam2: coeff.1,
            coeff_log2: c2,
            enclosure,
            paper_upper_bound: bound.scale_pow2(1),
            nonzero_certified: coeff != (0, 0) || c2 != 0,
            branch: Some(branch),
            siegel_exact,
            bits,
        });
    }
    Err(Error::PrecisionExhausted {
        bits: last_bits,
        what: "Λ″: could not separate the branch bound's denominators from zero".into(),
    })
}

/// One small term of a branch derivation, `|numerator| / |denominator|`
/// with an optional factor 1/2.
enum SmallTerm {
    /// `|β_j·(α_k − α_l)| / (factor·|β_d·α_e|)` with `factor ∈ {1, 2}`.
    BetaQuotient { j: usize, k: usize, l: usize, d: usize, e: usize, halve: bool },
    /// `|α_p| / (factor·|α_q|)`.
    AlphaRatio { p: usize, q: usize, halve: bool },
}

impl SmallTerm {
    fn beta_quotient(j: usize, k: usize, l: usize, d: usize, e: usize, halve: bool) -> Self {
        SmallTerm::BetaQuotient { j, k, l, d, e, halve }
    }

    fn alpha_ratio(p: usize, q: usize, halve: bool) -> Self {
        SmallTerm::AlphaRatio { p, q, halve }
    }

    /// Enclosure of the term, or `None` when a denominator is not yet
    /// separated from zero at this precision.
    fn evaluate(
        &self,
        a_re: &[RealEnclosure; 3],
        b_re: &[RealEnclosure; 3],
        bits: u32,
    ) -> Result<Option<RealEnclosure>> {
        match *self {
            SmallTerm::BetaQuotient { j, k, l, d, e, halve } => {
                let numer = b_re[j].abs().mul(&a_re[k].sub(&a_re[l]).abs());
                let denom = b_re[d].abs().mul(&a_re[e].abs());
                if !denom.lo().is_positive() {
                    return Ok(None);
                }
                let q = numer.div(&denom, bits)?;
                Ok(Some(if halve { q.scale_pow2(-1) } else { q }))
            }
            SmallTerm::AlphaRatio { p, q, halve } => {
                let denom = a_re[q].abs();
                if !denom.lo().is_positive() {
                    return Ok(None);
                }
                let r = a_re[p].abs().div(&denom, bits)?;
                Ok(Some(if halve { r.scale_pow2(-1) } else { r }))
            }
        }
    }
}

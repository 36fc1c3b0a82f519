//! Analytic core: admissibility condition, the gap constant `c1`, certified
//! solution classification, unit-word decomposition of `β = x − α₀y`, the
//! case analysis driving the contradiction argument, and the logarithmic
//! approximation of `|y|`.
//!
//! Index conventions used throughout (and by [`linear`] and [`lemmas`]):
//! for a point `(x, y)` put `βᵢ = x − αᵢy`. Then
//! - `j` is the index of the smallest `|βᵢ|` (the dominated conjugate),
//! - `k < l` are the two remaining indices,
//! - `u` is the index of `max(|α_j|, |α_k|)` and `v` of `max(|α_j|, |α_l|)`.
//!
//! Every ordering is certified by disjoint enclosures at escalating
//! precision; exact ties are detected by exact algebra (`P = ±Q` in `Z[λ₀]`)
//! and resolved deterministically toward the smallest index, with the tie
//! recorded in the classification certificate.

pub mod lemmas;
pub mod linear;

use std::fmt;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::cubic::{compute_root_logs, compute_roots, RootLogs, RootTriple};
use crate::enclosure::RealEnclosure;
use crate::form::{alpha_family, evaluate_form};
use crate::order::{OrderElement, UnitWord};
use crate::precision::PrecisionPolicy;
use crate::transcendental::{log2_enclosure, log_enclosure, log_int};
use crate::{Error, Result};

pub use lemmas::{verify_lemma, LemmaCheckItem, LemmaParams, LemmaReport};
pub use linear::{
    linear_form, log_alpha_quotient, AlphaQuotient, DoublePrimeBranch, LinearFormKind,
    LinearFormReport,
};

/// Strictly positive rational `ε` from the admissibility condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epsilon {
    value: Ratio<BigInt>,
}

impl Epsilon {
    /// Wraps a rational, rejecting non-positive values.
    pub fn new(value: Ratio<BigInt>) -> Result<Self> {
        if value <= Ratio::zero() {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be positive, got {value}"
            )));
        }
        Ok(Epsilon { value })
    }

    /// Convenience constructor from an integer fraction `num/den`.
    pub fn from_parts(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("epsilon denominator is zero".into()));
        }
        Epsilon::new(Ratio::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The underlying rational value.
    pub fn value(&self) -> &Ratio<BigInt> {
        &self.value
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `min(|2s−t|, |2t−s|, |s+t|)` — the smallest pairwise exponent separation.
fn min_separation(s: i64, t: i64) -> i64 {
    let a = (2 * s - t).abs();
    let b = (2 * t - s).abs();
    let c = (s + t).abs();
    a.min(b).min(c)
}

/// Full admissibility condition on the twist exponents:
/// `min(|2s−t|, |2t−s|, |s+t|) > ε·max(|s|, |t|) > 2` and `s·t ≠ 0`.
pub fn check_condition(s: i64, t: i64, eps: &Epsilon) -> bool {
    if s == 0 || t == 0 {
        return false;
    }
    let tau = s.abs().max(t.abs());
    let eps_tau = eps.value() * Ratio::from_integer(BigInt::from(tau));
    let min_sep = Ratio::from_integer(BigInt::from(min_separation(s, t)));
    let two = Ratio::from_integer(BigInt::from(2));
    min_sep > eps_tau && eps_tau > two
}

/// The separation half of the admissibility condition:
/// `min(|2s−t|, |2t−s|, |s+t|) > ε·max(|s|, |t|)` with `s·t ≠ 0`.
///
/// This is the hypothesis actually consumed by the pairwise-gap and
/// maximum-size verifiers; the full [`check_condition`] additionally demands
/// `ε·max(|s|, |t|) > 2`, which only feeds the global contradiction step.
pub fn separation_condition(s: i64, t: i64, eps: &Epsilon) -> bool {
    if s == 0 || t == 0 {
        return false;
    }
    let tau = s.abs().max(t.abs());
    let eps_tau = eps.value() * Ratio::from_integer(BigInt::from(tau));
    Ratio::from_integer(BigInt::from(min_separation(s, t))) > eps_tau
}

/// Outcome of solving for the gap constant `c1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum C1Outcome {
    /// A certified positive rational `c1` with `c1·τ·log n ≥ log 2`.
    ///
    /// The value is the lower endpoint of the enclosure of
    /// `ε − 3(1/n + 1/n²)/log n` at the certifying precision, so every
    /// inequality guaranteed for the true `c1` also holds for it.
    Feasible(Ratio<BigInt>),
    /// The defining inequalities fail (or could not be certified); the
    /// pairwise-gap machinery does not apply at these parameters.
    Infeasible { reason: String },
}

impl C1Outcome {
    /// True iff the outcome carries a certified constant.
    pub fn is_feasible(&self) -> bool {
        matches!(self, C1Outcome::Feasible(_))
    }

    /// The certified constant, if feasible.
    pub fn value(&self) -> Option<&Ratio<BigInt>> {
        match self {
            C1Outcome::Feasible(v) => Some(v),
            C1Outcome::Infeasible { .. } => None,
        }
    }
}

/// Computes the largest certified gap constant `c1` with
/// `ε·τ·log n − 3τ/n − 3τ/n² ≥ c1·τ·log n` and `c1·τ·log n ≥ log 2`,
/// i.e. `c1 = ε − 3(1/n + 1/n²)/log n` whenever the `log 2` constraint holds.
///
/// Both feasibility checks are certified by enclosures. A marginal instance
/// that stays undecided at the maximum working precision is reported as
/// infeasible: downstream verifiers then refuse to claim the gap inequalities
/// rather than assuming them.
pub fn compute_c1(eps: &Epsilon, n: i64, tau: i64) -> Result<C1Outcome> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n must be ≥ 3, got {n}")));
    }
    if tau < 1 {
        return Err(Error::InvalidParameter(format!("tau must be ≥ 1, got {tau}")));
    }
    // 3(1/n + 1/n²) = 3(n+1)/n², exactly.
    let correction = Ratio::new(BigInt::from(3) * BigInt::from(n + 1), BigInt::from(n) * BigInt::from(n));
    for bits in [128u32, 256, 512, 1024] {
        let log_n = log_int(n, bits)?;
        let c1 = RealEnclosure::from_ratio(eps.value(), bits)
            .sub(&RealEnclosure::from_ratio(&correction, bits).div(&log_n, bits)?);
        if !c1.lo().is_positive() {
            if c1.hi().is_positive() {
                continue; // straddles zero: escalate
            }
            return Ok(C1Outcome::Infeasible {
                reason: format!(
                    "ε·log n ≤ 3(1/n + 1/n²) certified at {bits} bits (ε = {}, n = {n})",
                    eps.value()
                ),
            });
        }
        // Certify c1·τ·log n ≥ log 2 with the rational lower endpoint.
        let c1_lo = c1.lo().to_ratio();
        let lhs = RealEnclosure::from_ratio(&c1_lo, bits)
            .mul_int(tau)
            .mul(&log_n);
        let log2 = log2_enclosure(bits);
        match lhs.cmp_certain(&log2) {
            Some(std::cmp::Ordering::Greater) => return Ok(C1Outcome::Feasible(c1_lo)),
            Some(_) => {
                return Ok(C1Outcome::Infeasible {
                    reason: format!(
                        "c1·τ·log n < log 2 certified at {bits} bits (c1 ≈ {}, τ = {tau}, n = {n})",
                        c1.lo()
                    ),
                })
            }
            None => continue,
        }
    }
    Ok(C1Outcome::Infeasible {
        reason: "feasibility undecided at maximum precision; reported infeasible conservatively"
            .into(),
    })
}

/// How a [`SolutionRecord`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordOrigin {
    /// From an integer point verified to satisfy `|F(x, y)| = 1` exactly.
    Solution,
    /// From an arbitrary integer point (diagnostic; `|F| = 1` not required).
    Point,
    /// From independently supplied unit words per conjugate; `x = y = 0`
    /// are placeholders and the β-triple need not satisfy Siegel's identity.
    Synthetic,
}

/// Certificate for the orderings recorded in a [`SolutionRecord`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderingCert {
    /// All comparisons decided by disjoint enclosures at the given precision.
    Certified { bits: u32 },
    /// Some pairs are exactly equal in absolute value (`P = ±Q` in `Z[λ₀]`);
    /// those ties were broken toward the smaller index.
    ExactTies {
        /// Pairs `(p, q)` with `|β_p| = |β_q|` exactly.
        beta_ties: Vec<(usize, usize)>,
        /// Pairs `(p, q)` with `|α_p| = |α_q|` exactly.
        alpha_ties: Vec<(usize, usize)>,
        bits: u32,
    },
}

/// A classified point of the twisted form, with certified index data.
#[derive(Debug, Clone)]
pub struct SolutionRecord {
    pub x: BigInt,
    pub y: BigInt,
    pub n: i64,
    pub s: i64,
    pub t: i64,
    /// Index of the smallest `|βᵢ|`.
    pub j: usize,
    /// Smaller of the two non-`j` indices.
    pub k: usize,
    /// Larger of the two non-`j` indices.
    pub l: usize,
    /// Index realizing `max(|α_j|, |α_k|)`.
    pub u: usize,
    /// Index realizing `max(|α_j|, |α_l|)`.
    pub v: usize,
    /// Enclosures of the real values `βᵢ` at the classification precision.
    pub beta_enclosures: [RealEnclosure; 3],
    /// Enclosures of the real values `αᵢ` at the classification precision.
    pub alpha_enclosures: [RealEnclosure; 3],
    /// Permutation of `(0, 1, 2)` sorting `|αᵢ|` in descending order.
    pub alpha_order: [usize; 3],
    /// How the orderings were certified.
    pub ordering: OrderingCert,
    /// Provenance of the record.
    pub origin: RecordOrigin,
    /// Precision at which classification succeeded.
    pub bits: u32,
    betas: [OrderElement; 3],
    alphas: [OrderElement; 3],
    beta_words: Option<[UnitWord; 3]>,
}

impl SolutionRecord {
    /// Exact conjugate elements `βᵢ` (for synthetic records: the supplied units).
    pub fn betas(&self) -> &[OrderElement; 3] {
        &self.betas
    }

    /// Exact elements `αᵢ`.
    pub fn alphas(&self) -> &[OrderElement; 3] {
        &self.alphas
    }

    /// Unit words of the βᵢ, when supplied at construction (synthetic records).
    pub fn beta_words(&self) -> Option<&[UnitWord; 3]> {
        self.beta_words.as_ref()
    }

    /// `max(|s|, |t|)`.
    pub fn tau(&self) -> i64 {
        self.s.abs().max(self.t.abs())
    }
}

/// Result of one certified absolute-value comparison.
enum AbsCmp {
    Decided(std::cmp::Ordering),
    /// `|P| = |Q|` exactly (elements equal up to sign).
    Tie,
    /// Enclosures overlap and no exact tie: escalate.
    Unknown,
}

fn cmp_abs(
    reals: &[RealEnclosure; 3],
    elems: &[OrderElement; 3],
    p: usize,
    q: usize,
) -> AbsCmp {
    match reals[p].abs().cmp_certain(&reals[q].abs()) {
        Some(ord) => AbsCmp::Decided(ord),
        None => {
            if elems[p] == elems[q] || elems[p] == elems[q].neg() {
                AbsCmp::Tie
            } else {
                AbsCmp::Unknown
            }
        }
    }
}

/// Pairwise relation table for one triple; `rel[p][q]` for p < q.
struct AbsRelations {
    rel: [[Option<AbsCmp>; 3]; 3],
}

impl AbsRelations {
    fn build(reals: &[RealEnclosure; 3], elems: &[OrderElement; 3]) -> Option<Self> {
        let mut rel: [[Option<AbsCmp>; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| None));
        for p in 0..3 {
            for q in (p + 1)..3 {
                match cmp_abs(reals, elems, p, q) {
                    AbsCmp::Unknown => return None,
                    other => rel[p][q] = Some(other),
                }
            }
        }
        Some(AbsRelations { rel })
    }

    /// `Less`/`Greater` when `|value_p|` vs `|value_q|` is decided by
    /// disjoint enclosures, `Equal` on an exact tie. Requires `p ≠ q`.
    fn ordering(&self, p: usize, q: usize) -> std::cmp::Ordering {
        let (a, b, swapped) = if p < q { (p, q, false) } else { (q, p, true) };
        let ord = match self.rel[a][b].as_ref().expect("relation filled") {
            AbsCmp::Decided(ord) => *ord,
            AbsCmp::Tie => std::cmp::Ordering::Equal,
            AbsCmp::Unknown => unreachable!("unknown relations rejected in build"),
        };
        if swapped {
            ord.reverse()
        } else {
            ord
        }
    }

    /// True iff `p` ranks strictly below `q`, with exact ties broken toward
    /// the smaller index (so `p` wins a tie iff `p < q`).
    fn lt(&self, p: usize, q: usize) -> bool {
        match self.ordering(p, q) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => p < q,
        }
    }

    /// Index of the larger of the pair, ties toward the smaller index.
    fn pick_max(&self, p: usize, q: usize) -> usize {
        match self.ordering(p, q) {
            std::cmp::Ordering::Less => q,
            std::cmp::Ordering::Greater => p,
            std::cmp::Ordering::Equal => p.min(q),
        }
    }

    fn ties(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for p in 0..3 {
            for q in (p + 1)..3 {
                if matches!(
                    self.rel[p][q].as_ref().expect("relation filled"),
                    AbsCmp::Tie | AbsCmp::Decided(std::cmp::Ordering::Equal)
                ) {
                    out.push((p, q));
                }
            }
        }
        out
    }
}

/// Shared per-precision embedding data.
pub(crate) struct EmbedContext {
    pub roots: RootTriple,
    pub logs: RootLogs,
}

pub(crate) fn embed_context(n: i64, bits: u32) -> Result<EmbedContext> {
    let policy = PrecisionPolicy::with_bits(bits, bits);
    let roots = compute_roots(n, &policy)?;
    let logs = compute_root_logs(n, &policy)?;
    Ok(EmbedContext { roots, logs })
}

/// Embeds each element of a triple under the distinguished embedding
/// (evaluation of the `(1, λ₀, λ₀²)` coordinates at the real root `λ₀`).
pub(crate) fn embed_triple(elems: &[OrderElement; 3], ctx: &EmbedContext) -> [RealEnclosure; 3] {
    [
        elems[0].embed(&ctx.roots.lam0),
        elems[1].embed(&ctx.roots.lam0),
        elems[2].embed(&ctx.roots.lam0),
    ]
}

fn classify_core(
    x: BigInt,
    y: BigInt,
    n: i64,
    s: i64,
    t: i64,
    policy: &PrecisionPolicy,
    origin: RecordOrigin,
    betas_override: Option<([OrderElement; 3], [UnitWord; 3])>,
) -> Result<SolutionRecord> {
    let alphas = alpha_family(n, s, t)?;
    let (betas, beta_words) = match betas_override {
        Some((b, w)) => (b, Some(w)),
        None => {
            // β₀ = x − α₀ y; conjugates by the cyclic automorphism.
            let beta0 = OrderElement::from_int(n, &x).sub(&alphas[0].scalar_mul(&y))?;
            (
                [beta0.clone(), beta0.conjugate_times(1), beta0.conjugate_times(2)],
                None,
            )
        }
    };

    let mut last_bits = policy.start_bits;
    for bits in policy.bit_schedule() {
        last_bits = bits;
        let ctx = embed_context(n, bits)?;
        let beta_re = embed_triple(&betas, &ctx);
        let alpha_re = embed_triple(&alphas, &ctx);
        let (beta_rel, alpha_rel) = match (
            AbsRelations::build(&beta_re, &betas),
            AbsRelations::build(&alpha_re, &alphas),
        ) {
            (Some(b), Some(a)) => (b, a),
            _ => continue,
        };

        // j: index whose |β| is no larger than both others (ties to the
        // smaller index). The tie relation is exact equality, so this
        // selection is well defined.
        let mut j = 0usize;
        for cand in 1..3 {
            if beta_rel.lt(cand, j) {
                j = cand;
            }
        }
        let (k, l) = match j {
            0 => (1, 2),
            1 => (0, 2),
            2 => (0, 1),
            _ => unreachable!(),
        };
        let u = alpha_rel.pick_max(j, k);
        let v = alpha_rel.pick_max(j, l);
        let mut alpha_order = [0usize, 1, 2];
        alpha_order.sort_by(|&p, &q| {
            if p == q {
                return std::cmp::Ordering::Equal;
            }
            // Descending by |α|, exact ties by ascending index.
            alpha_rel.ordering(q, p).then(p.cmp(&q))
        });

        let beta_ties = beta_rel.ties();
        let alpha_ties = alpha_rel.ties();
        let ordering = if beta_ties.is_empty() && alpha_ties.is_empty() {
            OrderingCert::Certified { bits }
        } else {
            OrderingCert::ExactTies { beta_ties, alpha_ties, bits }
        };

        return Ok(SolutionRecord {
            x,
            y,
            n,
            s,
            t,
            j,
            k,
            l,
            u,
            v,
            beta_enclosures: beta_re,
            alpha_enclosures: alpha_re,
            alpha_order,
            ordering,
            origin,
            bits,
            betas,
            alphas,
            beta_words,
        });
    }
    Err(Error::UndecidableOrdering(format!(
        "could not certify |β| / |α| orderings at {last_bits} bits for (x, y) = ({x}, {y}), \
         (n, s, t) = ({n}, {s}, {t})"
    )))
}

/// Classifies a solution of `|F(x, y; n, s, t)| = 1`: certifies the dominated
/// conjugate index `j`, the companion indices `(k, l)`, the α-maximum indices
/// `(u, v)`, and the full `|α|`-ordering.
///
/// The solution property is checked exactly first; non-solutions are rejected.
pub fn classify_solution(
    x: BigInt,
    y: BigInt,
    n: i64,
    s: i64,
    t: i64,
    policy: &PrecisionPolicy,
) -> Result<SolutionRecord> {
    let value = evaluate_form(n, s, t, &x, &y)?;
    if value.abs() != BigInt::from(1) {
        return Err(Error::NotASolution { x, y, value });
    }
    classify_core(x, y, n, s, t, policy, RecordOrigin::Solution, None)
}

/// Classifies an arbitrary integer point `(x, y) ≠ (0, 0)` without requiring
/// `|F(x, y)| = 1`.
///
/// Diagnostic variant of [`classify_solution`]: the index data is certified
/// the same way, but solution-only conclusions do not apply.
pub fn classify_point(
    x: BigInt,
    y: BigInt,
    n: i64,
    s: i64,
    t: i64,
    policy: &PrecisionPolicy,
) -> Result<SolutionRecord> {
    if x.is_zero() && y.is_zero() {
        return Err(Error::InvalidParameter(
            "classify_point requires (x, y) ≠ (0, 0): β would vanish identically".into(),
        ));
    }
    classify_core(x, y, n, s, t, policy, RecordOrigin::Point, None)
}

/// Builds a record from three independently chosen unit words, one per
/// conjugate slot.
///
/// The β-triple is *not* assumed to come from one point: the words need not
/// be conjugate-linked and need not satisfy Siegel's identity. The index
/// data (`j`, `u`, `v`, the `|α|`-order) is still certified from enclosures
/// exactly as for genuine records — the α-side depends only on `(n, s, t)`,
/// and the β-side embeds each supplied unit under the distinguished
/// embedding. `x = y = 0` are stored as placeholders.
pub fn synthetic_record(
    n: i64,
    s: i64,
    t: i64,
    words: [UnitWord; 3],
    policy: &PrecisionPolicy,
) -> Result<SolutionRecord> {
    let betas = [
        words[0].expand(n)?,
        words[1].expand(n)?,
        words[2].expand(n)?,
    ];
    classify_core(
        BigInt::zero(),
        BigInt::zero(),
        n,
        s,
        t,
        policy,
        RecordOrigin::Synthetic,
        Some((betas, words)),
    )
}

/// Exponents of a unit over the fundamental pair, with its verification bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaDecomposition {
    /// `sign · λ₀^a λ₂^b`.
    pub word: UnitWord,
    /// True iff the expansion of `word` reproduced the unit exactly in `Z[λ₀]`.
    pub exact_verified: bool,
}

/// Decomposes a unit of `Z[λ₀]` over the fundamental pair `(λ₀, λ₂)`.
///
/// Solves the 2×2 real system from the first two conjugate log equations
/// `log|u| = a·log λ₀ + b·log|λ₂|` and `log|σ(u)| = a·log|λ₁| + b·log λ₀`
/// by Cramer's rule on enclosures, rounds `(a, b)` to the nearest integers
/// once the enclosures certify a unique rounding, determines the sign, and
/// verifies `u = sign·λ₀^a λ₂^b` exactly.
pub fn decompose_unit(unit: &OrderElement, policy: &PrecisionPolicy) -> Result<BetaDecomposition> {
    let n = unit.n();
    let norm = unit.norm();
    if norm.abs() != BigInt::from(1) {
        return Err(Error::NotAUnit(norm));
    }
    let sigma_unit = unit.conjugate();
    let mut last_interval = String::new();
    let mut last_bits = policy.start_bits;
    for bits in policy.bit_schedule() {
        last_bits = bits;
        let ctx = embed_context(n, bits)?;
        let u0 = unit.embed(&ctx.roots.lam0).abs();
        let u1 = sigma_unit.embed(&ctx.roots.lam0).abs();
        if !u0.lo().is_positive() || !u1.lo().is_positive() {
            continue; // unit magnitude not yet separated from zero
        }
        let r0 = log_enclosure(&u0, bits)?;
        let r1 = log_enclosure(&u1, bits)?;
        let l0 = &ctx.logs.log_lam0;
        let l1 = &ctx.logs.log_abs_lam1;
        let l2 = &ctx.logs.log_abs_lam2;
        // det [[L0, L2], [L1, L0]] = L0² − L1·L2 > 0.
        let det = l0.mul(l0).sub(&l1.mul(l2));
        let a_enc = r0.mul(l0).sub(&r1.mul(l2)).div(&det, bits)?;
        let b_enc = l0.mul(&r1).sub(&l1.mul(&r0)).div(&det, bits)?;
        let (a_int, b_int) = match (round_unique(&a_enc), round_unique(&b_enc)) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                last_interval = format!("a ∈ {a_enc}, b ∈ {b_enc}");
                continue;
            }
        };
        let a = i64::try_from(a_int).map_err(|_| {
            Error::InvalidParameter("decomposition exponent exceeds i64 range".into())
        })?;
        let b = i64::try_from(b_int).map_err(|_| {
            Error::InvalidParameter("decomposition exponent exceeds i64 range".into())
        })?;
        let candidate = UnitWord::new(1, a, b)?.expand(n)?;
        let sign = if *unit == candidate {
            1
        } else if *unit == candidate.neg() {
            -1
        } else {
            return Err(Error::ExactVerificationFailed(format!(
                "rounded exponents (a, b) = ({a}, {b}) at {bits} bits do not reproduce the unit; \
                 the fundamental pair (λ₀, λ₂) cannot miss a unit, so the input data is inconsistent"
            )));
        };
        return Ok(BetaDecomposition {
            word: UnitWord::new(sign, a, b)?,
            exact_verified: true,
        });
    }
    Err(Error::RoundingAmbiguous { interval: last_interval, bits: last_bits })
}

/// Decomposes `β₀ = x − α₀y` for a solution of `|F(x, y)| = 1` over the
/// fundamental pair `(λ₀, λ₂)`. See [`decompose_unit`].
pub fn decompose_beta(
    x: BigInt,
    y: BigInt,
    n: i64,
    s: i64,
    t: i64,
    policy: &PrecisionPolicy,
) -> Result<BetaDecomposition> {
    let value = evaluate_form(n, s, t, &x, &y)?;
    if value.abs() != BigInt::from(1) {
        return Err(Error::NotASolution { x, y, value });
    }
    let alpha0 = crate::form::alpha_element(n, s, t, 0)?;
    let beta0 = OrderElement::from_int(n, &x).sub(&alpha0.scalar_mul(&y))?;
    decompose_unit(&beta0, policy)
}

/// If the enclosure certifies a unique nearest integer (it lies strictly
/// inside `(m − 1/2, m + 1/2)`), returns `m`.
fn round_unique(enc: &RealEnclosure) -> Option<BigInt> {
    let mid = enc.midpoint();
    // Nearest integer to the midpoint: floor(mid + 1/2).
    let m = mid.to_ratio() + Ratio::new(BigInt::from(1), BigInt::from(2));
    let m = m.floor().to_integer();
    let half = Ratio::new(BigInt::from(1), BigInt::from(2));
    let lo_bound = Ratio::from_integer(m.clone()) - &half;
    let hi_bound = Ratio::from_integer(m.clone()) + &half;
    if enc.lo().cmp_ratio(&lo_bound) == std::cmp::Ordering::Greater
        && enc.hi().cmp_ratio(&hi_bound) == std::cmp::Ordering::Less
    {
        Some(m)
    } else {
        None
    }
}

/// Exponent word of `log|βᵢ|` over `(log λ₀, log|λ₂|)` for a unit with
/// `β₀ = ±λ₀^a λ₂^b`:
/// `i = 0 → (a, b)`, `i = 1 → (b − a, −a)`, `i = 2 → (−b, a − b)`.
pub(crate) fn beta_log_word(a: i64, b: i64, i: usize) -> (i64, i64) {
    match i {
        0 => (a, b),
        1 => (b - a, -a),
        2 => (-b, a - b),
        _ => panic!("conjugate index {i} out of range"),
    }
}

/// Exponent word of `log|αᵢ|` over `(log λ₀, log|λ₂|)` for the twist
/// `α₀ = λ₀^s λ₁^t`:
/// `i = 0 → (s − t, −t)`, `i = 1 → (−s, t − s)`, `i = 2 → (t, s)`.
pub(crate) fn alpha_log_word(s: i64, t: i64, i: usize) -> (i64, i64) {
    match i {
        0 => (s - t, -t),
        1 => (-s, t - s),
        2 => (t, s),
        _ => panic!("conjugate index {i} out of range"),
    }
}

/// Per-conjugate `(log λ₀, log|λ₂|)` exponent words for a record's β-triple.
///
/// Genuine records derive all three words from the decomposition of `β₀` via
/// the conjugation table; synthetic records read them off the supplied words.
pub(crate) fn beta_words_for(
    record: &SolutionRecord,
    policy: &PrecisionPolicy,
) -> Result<[(i64, i64); 3]> {
    if let Some(words) = record.beta_words() {
        return Ok([
            (words[0].a, words[0].b),
            (words[1].a, words[1].b),
            (words[2].a, words[2].b),
        ]);
    }
    let decomp = decompose_unit(&record.betas[0], policy)?;
    let (a, b) = (decomp.word.a, decomp.word.b);
    Ok([beta_log_word(a, b, 0), beta_log_word(a, b, 1), beta_log_word(a, b, 2)])
}

/// Predicted consequence of a case's exponent relations for `log|y|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YPrediction {
    /// `(a, b) = (0, 0)` forces `β₀ = ±1`, hence `x − α₀y = ±1` and `y = 0`.
    UnitBeta,
    /// The forecast word for `log|y|` is negative, contradicting `|y| ≥ 2`.
    NegativeLogY,
    /// The forecast word vanishes: `log|y|` is pure error term, so `|y| < 2`.
    SmallY,
}

/// Report of one contradiction-case fidelity check (for `j = 0`).
#[derive(Debug, Clone)]
pub struct CaseReport {
    pub u: usize,
    pub v: usize,
    /// The decomposition exponents `(a, b)` under test.
    pub observed: (i64, i64),
    /// The unique solution of the case's two integer relations.
    pub expected: (i64, i64),
    /// Residuals of the case's two integer relations at `observed`.
    pub residuals: (i64, i64),
    /// True iff both residuals vanish (equivalently `observed = expected`).
    pub holds: bool,
    /// Exponent word of the `log|y|` forecast
    /// `log|β₂| − log|α_v| = w₀·log λ₀ + w₁·log|λ₂| + (small error)`,
    /// evaluated at the observed `(a, b)`.
    pub forecast_word: (i64, i64),
    /// What the case predicts about `y`.
    pub prediction: YPrediction,
    /// Certification of the predicted sign/smallness of the forecast word.
    pub prediction_certified: crate::Verdict,
}

/// Checks the exponent relations of the contradiction argument's `j = 0`
/// cases against a decomposition, and certifies the predicted sign of the
/// `log|y|` forecast.
///
/// The four sub-cases are keyed by `(u, v)`:
///
/// | (u, v) | relations                                  | solution        | forecast word  |
/// |--------|--------------------------------------------|-----------------|----------------|
/// | (0, 0) | `a − 2b = 0`, `2a − b = 0`                 | `(0, 0)`        | — (`β₀ = ±1`)  |
/// | (0, 2) | `a − 2b + s − 2t = 0`, `2a − b − s − t = 0`| `(s, s − t)`    | `(−s, t − s)`  |
/// | (1, 0) | `a − 2b − 2s + t = 0`, `2a − b − s + 2t = 0`| `(−t, −s)`     | `(t, s)`       |
/// | (1, 2) | `a − 2b − s − t = 0`, `2a − b − 2s + t = 0`| `(s − t, −t)`   | `(0, 0)`       |
///
/// The relations are the authoritative data: each case's displayed pair of
/// linear equations has a unique integer solution, listed above. (For the
/// `(1, 0)` case the prose conclusion circulating alongside the system reads
/// `a = t`; the system itself, and the final `log|y| = t·log λ₀ + s·log|λ₂|`
/// display it feeds, force `a = −t` — substituting `a = t` fails both
/// relations whenever `t ≠ 0`.)
///
/// The forecast word is `log|β₂| − log|α_v|` expressed over
/// `(log λ₀, log|λ₂|)` at the *observed* `(a, b)`:
/// `(−b − A_v·e₁, a − b − A_v·e₂)` with `A_v` the α-word of index `v`.
pub fn case_check(
    record: &SolutionRecord,
    decomp: &BetaDecomposition,
    policy: &PrecisionPolicy,
) -> Result<CaseReport> {
    if record.j != 0 {
        return Err(Error::UnsupportedCase(format!(
            "case analysis is tabulated for j = 0 (k, l) = (1, 2); record has j = {}",
            record.j
        )));
    }
    if !decomp.exact_verified {
        return Err(Error::InvalidParameter(
            "case_check requires an exactly verified decomposition".into(),
        ));
    }
    let (a, b) = (decomp.word.a, decomp.word.b);
    let (s, t) = (record.s, record.t);
    let (u, v) = (record.u, record.v);
    let (residuals, expected, prediction) = match (u, v) {
        (0, 0) => ((a - 2 * b, 2 * a - b), (0, 0), YPrediction::UnitBeta),
        (0, 2) => (
            (a - 2 * b + s - 2 * t, 2 * a - b - s - t),
            (s, s - t),
            YPrediction::NegativeLogY,
        ),
        (1, 0) => (
            (a - 2 * b - 2 * s + t, 2 * a - b - s + 2 * t),
            (-t, -s),
            YPrediction::NegativeLogY,
        ),
        (1, 2) => (
            (a - 2 * b - s - t, 2 * a - b - 2 * s + t),
            (s - t, -t),
            YPrediction::SmallY,
        ),
        other => {
            return Err(Error::UnsupportedCase(format!(
                "(u, v) = {other:?} cannot arise for j = 0: u ∈ {{0, 1}}, v ∈ {{0, 2}}"
            )))
        }
    };
    let holds = residuals == (0, 0);
    debug_assert_eq!(holds, (a, b) == expected);

    // Forecast word: log|β₂| − log|α_v| over (log λ₀, log|λ₂|).
    let e2 = beta_log_word(a, b, 2);
    let av = alpha_log_word(s, t, v);
    let forecast_word = (e2.0 - av.0, e2.1 - av.1);

    let prediction_certified = match prediction {
        YPrediction::UnitBeta => {
            crate::Verdict::from_certain(Some(decomp.word.a == 0 && decomp.word.b == 0))
        }
        YPrediction::NegativeLogY => certify_word_sign(record.n, forecast_word, policy)?,
        YPrediction::SmallY => {
            if forecast_word == (0, 0) {
                crate::Verdict::Pass
            } else {
                // Not the exact-vanishing configuration: certify |word| < log 2.
                certify_word_small(record.n, forecast_word, policy)?
            }
        }
    };

    Ok(CaseReport {
        u,
        v,
        observed: (a, b),
        expected,
        residuals,
        holds,
        forecast_word,
        prediction,
        prediction_certified,
    })
}

/// Certifies that `w₀·log λ₀ + w₁·log|λ₂| < 0`.
fn certify_word_sign(
    n: i64,
    word: (i64, i64),
    policy: &PrecisionPolicy,
) -> Result<crate::Verdict> {
    for bits in policy.bit_schedule() {
        let ctx = embed_context(n, bits)?;
        let value = ctx
            .logs
            .log_lam0
            .mul_int(word.0)
            .add(&ctx.logs.log_abs_lam2.mul_int(word.1));
        if value.is_strictly_negative() {
            return Ok(crate::Verdict::Pass);
        }
        if value.is_strictly_positive() {
            return Ok(crate::Verdict::Fail);
        }
    }
    Ok(crate::Verdict::Undecided)
}

/// Certifies that `|w₀·log λ₀ + w₁·log|λ₂|| < log 2`.
fn certify_word_small(
    n: i64,
    word: (i64, i64),
    policy: &PrecisionPolicy,
) -> Result<crate::Verdict> {
    for bits in policy.bit_schedule() {
        let ctx = embed_context(n, bits)?;
        let value = ctx
            .logs
            .log_lam0
            .mul_int(word.0)
            .add(&ctx.logs.log_abs_lam2.mul_int(word.1))
            .abs();
        match value.cmp_certain(&log2_enclosure(bits)) {
            Some(std::cmp::Ordering::Less) => return Ok(crate::Verdict::Pass),
            Some(_) => return Ok(crate::Verdict::Fail),
            None => continue,
        }
    }
    Ok(crate::Verdict::Undecided)
}

/// Certified logarithmic approximation of `|y|`.
#[derive(Debug, Clone)]
pub struct LogYApprox {
    /// Enclosure of `log|β_k| − log|α_j − α_k|`.
    pub value: RealEnclosure,
    /// Certified upper bound for the approximation error `|δ|`, where
    /// `log|β_k| − log|α_j − α_k| = log|y| + δ`.
    pub delta_bound: RealEnclosure,
    /// Precision at which the bound was certified.
    pub bits: u32,
}

/// Approximates `log|y|` by `log|β_k| − log|α_j − α_k|` with a certified
/// error bound.
///
/// Exactly, `β_k = β_j + (α_j − α_k)·y`, so the approximation error is
/// `δ = log|1 + β_j / (y·(α_j − α_k))|`. With `r = |β_j| / (|y|·|α_j − α_k|)`
/// certified below 1, `|δ| ≤ −log(1 − r)`; this two-sided bound dominates
/// the one-sided `log(1 + r)` and is the one reported.
pub fn approx_log_y(record: &SolutionRecord, policy: &PrecisionPolicy) -> Result<LogYApprox> {
    if record.origin == RecordOrigin::Synthetic {
        return Err(Error::InvalidParameter(
            "approx_log_y needs a record with a real point (x, y); synthetic records have none"
                .into(),
        ));
    }
    if record.y.is_zero() {
        return Err(Error::InvalidParameter(
            "approx_log_y requires |y| ≥ 1".into(),
        ));
    }
    let (j, k) = (record.j, record.k);
    let abs_y = RealEnclosure::from_bigint(&record.y.abs());
    let mut last_bits = policy.start_bits;
    for bits in policy.bit_schedule() {
        last_bits = bits;
        let ctx = embed_context(record.n, bits)?;
        let beta_re = embed_triple(&record.betas, &ctx);
        let alpha_re = embed_triple(&record.alphas, &ctx);
        let diff = alpha_re[j].sub(&alpha_re[k]).abs();
        let beta_k = beta_re[k].abs();
        if !diff.lo().is_positive() || !beta_k.lo().is_positive() {
            continue;
        }
        let value = log_enclosure(&beta_k, bits)?.sub(&log_enclosure(&diff, bits)?);
        let r = beta_re[j].abs().div(&abs_y.mul(&diff), bits)?;
        let one_minus_r = RealEnclosure::one().sub(&r);
        if !one_minus_r.lo().is_positive() {
            continue; // r not yet certified below 1
        }
        let delta_bound = log_enclosure(&one_minus_r, bits)?.neg();
        return Ok(LogYApprox { value, delta_bound, bits });
    }
    Err(Error::PrecisionExhausted {
        bits: last_bits,
        what: "approx_log_y: could not certify the error ratio below 1".into(),
    })
}

//! Acceptance suite: one test per release criterion, each printing a
//! single `[criterion NN] PASS/FAIL` line (visible under `--nocapture`).
//!
//! Every numeric tolerance and time budget is pinned as a constant next to
//! the check that uses it. Randomized checks use fixed seeds so the suite
//! is deterministic.

use std::panic::{catch_unwind, resume_unwind, UnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tthue::analysis::lemmas::{
    verify_alphadiff, verify_alphamax, verify_alphasalad, verify_prodbymax,
};
use tthue::analysis::{
    case_check, compute_c1, decompose_beta, decompose_unit, separation_condition,
    synthetic_record, Epsilon, YPrediction,
};
use tthue::bounds::{absolute_log_height, baker_constant, baker_lower_bound, BakerInputs};
use tthue::cubic::{compute_roots, verify_root_brackets, verify_root_log_brackets};
use tthue::form::{alpha_family, evaluate_form, form_coeffs};
use tthue::order::{siegel_residual, OrderElement, UnitWord};
use tthue::search::{compare_strategies, enumerate_solutions, ParamRange, SearchGrid};
use tthue::transcendental::log_enclosure;
use tthue::{Dyadic, PrecisionPolicy, RealEnclosure, Verdict};

/// Runs a criterion body and prints its one-line outcome.
fn criterion<F: FnOnce() + UnwindSafe>(number: u32, what: &str, body: F) {
    let outcome = catch_unwind(body);
    match &outcome {
        Ok(()) => println!("[criterion {number:02}] PASS — {what}"),
        Err(_) => println!("[criterion {number:02}] FAIL — {what}"),
    }
    if let Err(payload) = outcome {
        resume_unwind(payload);
    }
}

fn assert_within(start: Instant, budget: Duration, what: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "{what}: took {elapsed:?}, budget {budget:?}"
    );
}

fn default_policy() -> PrecisionPolicy {
    PrecisionPolicy::default()
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn rat(p: i64, q: i64) -> Ratio<BigInt> {
    Ratio::new(big(p), big(q))
}

/// True iff the two enclosures intersect (necessary whenever both contain
/// the same real number).
fn overlap(a: &RealEnclosure, b: &RealEnclosure) -> bool {
    !(a.hi() < b.lo() || b.hi() < a.lo())
}

#[test]
fn criterion_01_untwisted_coefficients() {
    criterion(1, "untwisted coefficients are (n−1, −(n+2), 1) for n in 3..100", || {
        const BUDGET: Duration = Duration::from_secs(1);
        let start = Instant::now();
        for n in 3..100 {
            let c = form_coeffs(n, 1, 0).expect("coefficients");
            assert_eq!(c.e1, big(n - 1), "e1 at n = {n}");
            assert_eq!(c.e2, big(-(n + 2)), "e2 at n = {n}");
            assert_eq!(c.e3, big(1), "e3 at n = {n}");
        }
        assert_within(start, BUDGET, "criterion 1");
    });
}

#[test]
fn criterion_02_root_and_log_brackets() {
    criterion(2, "root and root-log brackets certify across six magnitudes of n", || {
        const BUDGET: Duration = Duration::from_secs(5);
        const MAX_BITS: u32 = 1024;
        let policy = PrecisionPolicy::with_bits(128, MAX_BITS);
        let start = Instant::now();
        for &n in &[3i64, 10, 100, 10_000, 1_000_000, 1_000_000_000] {
            let roots = verify_root_brackets(n, &policy).expect("bracket report");
            assert_eq!(roots.verdict, Verdict::Pass, "root brackets at n = {n}");
            let logs = verify_root_log_brackets(n, &policy).expect("log bracket report");
            assert_eq!(logs.verdict, Verdict::Pass, "log brackets at n = {n}");
        }
        assert_within(start, BUDGET, "criterion 2");
    });
}

#[test]
fn criterion_03_siegel_residual_vanishes() {
    criterion(3, "the telescoped conjugate identity is exactly zero on 200 random instances", || {
        const BUDGET: Duration = Duration::from_secs(10);
        const INSTANCES: usize = 200;
        let mut rng = ChaCha8Rng::seed_from_u64(0x5163e1);
        let start = Instant::now();
        for _ in 0..INSTANCES {
            let n = rng.gen_range(3..=100);
            let s = rng.gen_range(-6..=6);
            let t = rng.gen_range(-6..=6);
            let x = big(rng.gen_range(-50..=50));
            let y = big(rng.gen_range(-50..=50));
            let alphas = alpha_family(n, s, t).expect("alpha family");
            let betas: [OrderElement; 3] = std::array::from_fn(|i| {
                OrderElement::from_int(n, &x)
                    .sub(&alphas[i].scalar_mul(&y))
                    .expect("same field")
            });
            // Any permutation of the three indices must telescope to zero.
            let mut idx = [0usize, 1, 2];
            let swap_a = rng.gen_range(0..3);
            let swap_b = rng.gen_range(0..3);
            idx.swap(swap_a, swap_b);
            let residual =
                siegel_residual(&alphas, &betas, idx[0], idx[1], idx[2]).expect("residual");
            assert!(
                residual.is_zero(),
                "nonzero residual at n={n} s={s} t={t} x={x} y={y} order {idx:?}"
            );
        }
        assert_within(start, BUDGET, "criterion 3");
    });
}

#[test]
fn criterion_04_unit_norm_and_form_agreement() {
    criterion(4, "|e3| = 1 on 500 random twists; form value equals the norm on 500 points", || {
        const BUDGET: Duration = Duration::from_secs(10);
        const SAMPLES: usize = 500;
        let mut rng = ChaCha8Rng::seed_from_u64(0x404);
        let start = Instant::now();
        for _ in 0..SAMPLES {
            let n = rng.gen_range(3..=100);
            let s = rng.gen_range(-6..=6);
            let t = rng.gen_range(-6..=6);
            let c = form_coeffs(n, s, t).expect("coefficients");
            assert_eq!(c.e3.abs(), big(1), "constant coefficient at ({n}, {s}, {t})");
        }
        for _ in 0..SAMPLES {
            let n = rng.gen_range(3..=100);
            let s = rng.gen_range(-6..=6);
            let t = rng.gen_range(-6..=6);
            let x = big(rng.gen_range(-50..=50));
            let y = big(rng.gen_range(-50..=50));
            let value = evaluate_form(n, s, t, &x, &y).expect("form value");
            let alphas = alpha_family(n, s, t).expect("alpha family");
            let beta0 = OrderElement::from_int(n, &x)
                .sub(&alphas[0].scalar_mul(&y))
                .expect("same field");
            assert_eq!(value, beta0.norm(), "value ≠ norm at ({n},{s},{t},{x},{y})");
        }
        assert_within(start, BUDGET, "criterion 4");
    });
}

#[test]
fn criterion_05_galois_structure() {
    criterion(5, "the conjugation map has order three, respects the ring, and cycles the roots", || {
        const BUDGET: Duration = Duration::from_secs(5);
        // Both enclosure families are ≤ 2^-48 wide and must intersect.
        let width_tol = Dyadic::pow2(-48);
        let mut rng = ChaCha8Rng::seed_from_u64(0x515);
        let start = Instant::now();
        let random_elem = |rng: &mut ChaCha8Rng, n: i64| {
            OrderElement::from_coords(
                n,
                rng.gen_range(-1_000_000..=1_000_000),
                rng.gen_range(-1_000_000..=1_000_000),
                rng.gen_range(-1_000_000..=1_000_000),
            )
        };
        for _ in 0..1000 {
            let n = rng.gen_range(3..=50);
            let u = random_elem(&mut rng, n);
            assert_eq!(u.conjugate_times(3), u, "order three failed at n = {n}");
        }
        for _ in 0..500 {
            let n = rng.gen_range(3..=50);
            let u = random_elem(&mut rng, n);
            let v = random_elem(&mut rng, n);
            let sum = u.add(&v).expect("same field");
            let prod = u.mul(&v).expect("same field");
            assert_eq!(sum.conjugate(), u.conjugate().add(&v.conjugate()).unwrap());
            assert_eq!(prod.conjugate(), u.conjugate().mul(&v.conjugate()).unwrap());
        }
        // Root cycling under the distinguished embedding, for a spread of n.
        for &n in &[3i64, 7, 100] {
            let roots = compute_roots(n, &default_policy()).expect("roots");
            let sigma_lam0 = OrderElement::lambda0(n).conjugate().embed(&roots.lam0);
            let sigma_lam2 = OrderElement::lambda2(n).conjugate().embed(&roots.lam0);
            for (image, target, name) in [
                (&sigma_lam0, &roots.lam1, "σ(λ0) vs λ1"),
                (&sigma_lam2, &roots.lam0, "σ(λ2) vs λ0"),
            ] {
                assert!(overlap(image, target), "{name} disjoint at n = {n}");
                assert!(image.width() <= width_tol, "{name} image too wide at n = {n}");
                assert!(target.width() <= width_tol, "{name} target too wide at n = {n}");
            }
        }
        assert_within(start, BUDGET, "criterion 5");
    });
}

#[test]
fn criterion_06_decomposition_round_trip() {
    criterion(6, "unit decomposition recovers 300 random exponent words exactly", || {
        const BUDGET: Duration = Duration::from_secs(30);
        const WORDS: usize = 300;
        let policy = default_policy();
        let mut rng = ChaCha8Rng::seed_from_u64(0x6e6);
        let start = Instant::now();
        let mut synthetic_runs = 0usize;
        let mut check = |word: UnitWord, n: i64| {
            let unit = word.expand(n).expect("expansion");
            let decomp = decompose_unit(&unit, &policy).expect("decomposition");
            assert_eq!(decomp.word, word, "word round-trip at n = {n}");
            assert!(decomp.exact_verified, "unverified decomposition at n = {n}");
            // When the unit has no λ0² coordinate it is x − λ0·y for
            // integers (x, y), i.e. β0 of the point (x, y) at (s, t) = (1, 0);
            // the point-level decomposition must agree.
            let coords = unit.coords();
            if coords[2].is_zero() {
                let x = coords[0].clone();
                let y = -coords[1].clone();
                let from_point =
                    decompose_beta(x, y, n, 1, 0, &policy).expect("point decomposition");
                assert_eq!(from_point.word, word, "point route diverged at n = {n}");
                assert!(from_point.exact_verified);
                synthetic_runs += 1;
            }
        };
        for _ in 0..WORDS {
            let n = rng.gen_range(3..=50);
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let a = rng.gen_range(-10..=10);
            let b = rng.gen_range(-10..=10);
            check(UnitWord::new(sign, a, b).expect("word"), n);
        }
        // Words whose expansions drop the λ0² coordinate, so the synthetic
        // point route is exercised deterministically: ±1, ±λ0, ±λ0λ2 = ∓(1 + λ0).
        for n in [3i64, 10, 50] {
            for sign in [1, -1] {
                check(UnitWord::new(sign, 0, 0).unwrap(), n);
                check(UnitWord::new(sign, 1, 0).unwrap(), n);
                check(UnitWord::new(sign, 1, 1).unwrap(), n);
            }
        }
        assert!(synthetic_runs >= 18, "only {synthetic_runs} synthetic round-trips");
        assert_within(start, BUDGET, "criterion 6");
    });
}

/// The criterion-7 grid: n ∈ {3, 4, 5} and s, t ∈ {−2, −1, 1, 2}, expressed
/// as four sign-quadrant grids since ranges are contiguous.
fn quadrant_grids(y_max: i64) -> Vec<SearchGrid> {
    let mut grids = Vec::new();
    for s_range in [ParamRange::new(-2, -1), ParamRange::new(1, 2)] {
        for t_range in [ParamRange::new(-2, -1), ParamRange::new(1, 2)] {
            grids.push(
                SearchGrid::new(ParamRange::new(3, 5), s_range, t_range, y_max)
                    .expect("valid grid"),
            );
        }
    }
    grids
}

/// One full windowed-vs-exhaustive comparison pass; returns a canonical
/// serialization of everything observable plus the equality flag.
fn comparison_pass(policy: &PrecisionPolicy) -> (String, bool) {
    use std::fmt::Write as _;
    let mut canon = String::new();
    let mut all_equal = true;
    for grid in quadrant_grids(50) {
        let cmp = compare_strategies(&grid, 50, policy).expect("comparison");
        all_equal &= cmp.equal;
        for (tag, result) in [("W", &cmp.windowed), ("E", &cmp.exhaustive)] {
            writeln!(
                canon,
                "{tag} stats {} {} {}",
                result.stats.candidates_tested,
                result.stats.solutions_found,
                result.stats.undecided_classifications
            )
            .unwrap();
            for rec in &result.records {
                // Every emitted record satisfies the equation exactly.
                let value = evaluate_form(rec.n, rec.s, rec.t, &rec.x, &rec.y).unwrap();
                assert_eq!(value.abs(), big(1), "non-solution emitted: {rec:?}");
                match &rec.classification {
                    Some(c) => writeln!(
                        canon,
                        "{tag} {} {} {} {} {} {} {} {} {} {} {}",
                        rec.n, rec.s, rec.t, rec.y, rec.x, c.j, c.k, c.l, c.u, c.v, c.bits
                    )
                    .unwrap(),
                    None => {
                        writeln!(canon, "{tag} {} {} {} {} {} ?", rec.n, rec.s, rec.t, rec.y, rec.x)
                            .unwrap()
                    }
                }
            }
        }
    }
    (canon, all_equal)
}

#[test]
fn criterion_07_search_soundness_and_completeness() {
    criterion(7, "windowed search equals the exhaustive oracle, deterministically", || {
        const BUDGET: Duration = Duration::from_secs(120);
        let policy = default_policy();
        let start = Instant::now();
        let (reference, equal) = comparison_pass(&policy);
        assert!(equal, "strategy mismatch on the acceptance grid");
        // Deterministic across three runs…
        for run in 0..2 {
            let (again, equal) = comparison_pass(&policy);
            assert!(equal);
            assert_eq!(reference, again, "run {} diverged", run + 2);
        }
        // …and across thread counts {1, 4}.
        for threads in [1usize, 4] {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .expect("thread pool");
            let (pooled, equal) = pool.install(|| comparison_pass(&policy));
            assert!(equal);
            assert_eq!(reference, pooled, "{threads}-thread run diverged");
        }
        assert_within(start, BUDGET, "criterion 7");
    });
}

/// All (s, t) with max(|s|, |t|) = τ and st ≠ 0 meeting the separation
/// condition at the given ε — the hypothesis the gap and magnitude
/// verifiers consume. (The full admissibility chain additionally demands
/// ε·τ > 2, which no τ ≤ 10 can meet at ε = 1/10; it is not a hypothesis
/// of these verifiers.)
fn admissible_pairs(tau: i64, eps: &Epsilon) -> Vec<(i64, i64)> {
    let mut pairs = Vec::new();
    for s in -tau..=tau {
        for t in -tau..=tau {
            if s.abs().max(t.abs()) == tau && s * t != 0 && separation_condition(s, t, eps) {
                pairs.push((s, t));
            }
        }
    }
    pairs
}

#[test]
fn criterion_08_inequality_verifiers() {
    criterion(8, "product, gap, magnitude, and solution inequalities certify on their grids", || {
        const BUDGET: Duration = Duration::from_secs(120);
        const TRIPLES: usize = 100_000;
        let policy = default_policy();
        let start = Instant::now();

        // Normalized random triples: a, b random positive, c = 1/(ab).
        let mut rng = ChaCha8Rng::seed_from_u64(0xf00d);
        for _ in 0..TRIPLES {
            let a = rat(rng.gen_range(1..=1000), rng.gen_range(1..=1000));
            let b = rat(rng.gen_range(1..=1000), rng.gen_range(1..=1000));
            let c = (&a * &b).recip();
            let report = verify_prodbymax(&a, &b, &c);
            assert_eq!(report.verdict, Verdict::Pass, "triple ({a}, {b}, {c})");
        }

        // Conjugate-gap and magnitude bounds over the (n, τ) grid.
        let eps = Epsilon::from_parts(1, 10).expect("epsilon");
        let mut feasible_cells = 0usize;
        for &n in &[10i64, 100, 1000] {
            for tau in 3..=10 {
                for (s, t) in admissible_pairs(tau, &eps) {
                    let c1 = compute_c1(&eps, n, tau).expect("c1");
                    let gap = verify_alphadiff(n, s, t, &eps, &policy).expect("gap report");
                    if c1.is_feasible() {
                        assert_eq!(
                            gap.verdict,
                            Verdict::Pass,
                            "gap bound at (n, s, t) = ({n}, {s}, {t})"
                        );
                        feasible_cells += 1;
                    } else {
                        assert_eq!(gap.verdict, Verdict::Undecided, "infeasible yet decided");
                    }
                    let magnitude =
                        verify_alphamax(n, s, t, Some(&eps), &policy).expect("magnitude report");
                    assert_eq!(
                        magnitude.verdict,
                        Verdict::Pass,
                        "magnitude bound at (n, s, t) = ({n}, {s}, {t})"
                    );
                }
            }
        }
        assert!(feasible_cells > 0, "the c1-feasible part of the grid is empty");

        // Per-solution inequality on every record of the criterion-7 grid
        // with |y| ≥ 1 whose hypotheses hold. The size bound requires
        // x ≠ 0; on the excluded (0, ±1) family the verifier must report
        // the violated hypothesis (never a false pass) together with the
        // exact fact that x = 0 forces |y| = 1.
        let mut checked_records = 0usize;
        let mut excluded_records = 0usize;
        for grid in quadrant_grids(50) {
            let found = enumerate_solutions(&grid, &policy).expect("enumeration");
            for rec in &found.records {
                let record = rec.classification.as_ref().expect("classified");
                if record.y.is_zero() {
                    continue;
                }
                let report = verify_alphasalad(record, &policy).expect("solution report");
                if record.x.is_zero() {
                    assert!(!report.hypothesis_ok);
                    assert_eq!(report.verdict, Verdict::Undecided);
                    let forced = report
                        .checks
                        .iter()
                        .find(|c| c.what.contains("x = 0 forces"))
                        .expect("exact |y| = 1 check");
                    assert_eq!(forced.verdict, Verdict::Pass);
                    excluded_records += 1;
                    continue;
                }
                assert!(report.hypothesis_ok);
                assert_eq!(
                    report.verdict,
                    Verdict::Pass,
                    "solution inequality at ({}, {}, {}, x = {}, y = {}): {:?}",
                    rec.n,
                    rec.s,
                    rec.t,
                    rec.x,
                    rec.y,
                    report.checks
                );
                checked_records += 1;
            }
        }
        assert!(checked_records > 0, "no records with x ≠ 0 and |y| ≥ 1");
        assert!(excluded_records > 0, "no records on the (0, ±1) family");
        assert_within(start, BUDGET, "criterion 8");
    });
}

/// Exact rational brackets of `log(1/(1 − x)) = Σ_{k≥1} x^k/k` for rational
/// `x ∈ (0, 1)`: the truncation plus its geometric tail bound
/// `Σ_{k>K} x^k/k < x^{K+1} / ((K+1)(1 − x))`.
fn series_log_brackets(x: &Ratio<BigInt>, terms: usize) -> (Ratio<BigInt>, Ratio<BigInt>) {
    let mut sum: Ratio<BigInt> = Ratio::zero();
    let mut power: Ratio<BigInt> = Ratio::one();
    for k in 1..=terms {
        power *= x;
        sum += &power / Ratio::from_integer(big(k as i64));
    }
    let tail =
        &power * x / (Ratio::from_integer(big(terms as i64 + 1)) * (Ratio::one() - x));
    (sum.clone(), sum + tail)
}

#[test]
fn criterion_09_explicit_lower_bound_machinery() {
    criterion(9, "the explicit constant, its monotonicity, and the height of λ0 check out", || {
        const BUDGET: Duration = Duration::from_secs(5);
        const SERIES_TERMS: usize = 150;
        let start = Instant::now();
        // Relative agreement tolerance 10^-12, exact.
        let rel_tol = rat(1, 1_000_000_000_000);

        // Independent evaluation of 18·(t+1)!·t^(t+1)·(32D)^(t+2)·log(2tD)
        // at (t, D) = (2, 3): the integer factor exactly, log 12 by exact
        // rational series via log 12 = 3·log 2 + log(3/2).
        let factor = big(18) * big(6) * big(8) * big(96).pow(4);
        assert_eq!(factor, big(73_383_542_784));
        let (lo2, hi2) = series_log_brackets(&rat(1, 2), SERIES_TERMS);
        let (lo32, hi32) = series_log_brackets(&rat(1, 3), SERIES_TERMS);
        let three = Ratio::from_integer(big(3));
        let oracle_lo = (&three * lo2 + lo32) * Ratio::from_integer(factor.clone());
        let oracle_hi = (&three * hi2 + hi32) * Ratio::from_integer(factor);

        let constant = baker_constant(2, 3).expect("constant");
        let enc_lo = constant.lo().to_ratio();
        let enc_hi = constant.hi().to_ratio();
        assert!(enc_lo <= oracle_hi && oracle_lo <= enc_hi, "oracle and enclosure disjoint");
        let hull_lo = enc_lo.min(oracle_lo);
        let hull_hi = enc_hi.max(oracle_hi);
        assert!(hull_lo.is_positive());
        assert!(
            (&hull_hi - &hull_lo) / hull_lo <= rel_tol,
            "relative hull width exceeds 10^-12"
        );

        // Monotonicity of the constant and of the lower bound, on 100
        // random inputs.
        let mut rng = ChaCha8Rng::seed_from_u64(0xba3e);
        for _ in 0..100 {
            let t_count = rng.gen_range(1..=4u32);
            let d = rng.gen_range(1..=5u32);
            let c = baker_constant(t_count, d).expect("constant");
            let c_bigger_d = baker_constant(t_count, d + 1).expect("constant");
            let c_bigger_t = baker_constant(t_count + 1, d).expect("constant");
            assert!(c_bigger_d.lo() > c.hi(), "not increasing in the degree");
            assert!(c_bigger_t.lo() > c.hi(), "not increasing in the logarithm count");

            // Lower bound: strictly negative, and |bound| grows when any
            // height or the coefficient bound doubles.
            let heights: Vec<Ratio<BigInt>> = (0..t_count)
                .map(|_| rat(rng.gen_range(1..=12), rng.gen_range(1..=4)))
                .collect();
            let b_val = rat(rng.gen_range(4..=1000), 1);
            let as_enc = |r: &Ratio<BigInt>| RealEnclosure::from_ratio(r, 128);
            let base_inputs = BakerInputs::new(
                t_count,
                3,
                heights.iter().map(&as_enc).collect(),
                as_enc(&b_val),
            )
            .expect("inputs");
            let base = baker_lower_bound(&base_inputs).expect("bound");
            assert!(base.hi().is_negative(), "bound not strictly negative");

            let grow = rng.gen_range(0..t_count) as usize;
            let mut grown = heights.clone();
            grown[grow] = &grown[grow] * rat(2, 1);
            let taller = BakerInputs::new(
                t_count,
                3,
                grown.iter().map(&as_enc).collect(),
                as_enc(&b_val),
            )
            .expect("inputs");
            let taller_bound = baker_lower_bound(&taller).expect("bound");
            assert!(taller_bound.hi() < base.lo(), "not decreasing in a height");

            let wider = BakerInputs::new(
                t_count,
                3,
                heights.iter().map(&as_enc).collect(),
                as_enc(&(&b_val * rat(2, 1))),
            )
            .expect("inputs");
            let wider_bound = baker_lower_bound(&wider).expect("bound");
            assert!(wider_bound.hi() < base.lo(), "not decreasing in the coefficient bound");
        }

        // h(λ0) at n = 3 against (1/3)·log(λ0 + 1) from the root enclosure.
        let width_tol = Dyadic::pow2(-40);
        let height = absolute_log_height(&OrderElement::lambda0(3), &default_policy())
            .expect("height");
        let roots = compute_roots(3, &default_policy()).expect("roots");
        let lam0_plus_1 = roots.lam0.add(&RealEnclosure::one());
        let third = RealEnclosure::from_ratio(&rat(1, 3), 128);
        let oracle = log_enclosure(&lam0_plus_1, 128).expect("log").mul(&third);
        assert!(overlap(&height.value, &oracle), "height and oracle disjoint");
        assert!(height.value.width() <= width_tol);
        assert!(oracle.width() <= width_tol);
        assert_within(start, BUDGET, "criterion 9");
    });
}

#[test]
fn criterion_10_contradiction_case_fidelity() {
    criterion(10, "the four dominated-conjugate cases force their exponent pairs and y forecasts", || {
        const BUDGET: Duration = Duration::from_secs(30);
        let policy = default_policy();
        let start = Instant::now();
        // β-words putting the smallest conjugate at index 0; (s, t) selects
        // the α-ordering and hence (u, v).
        let beta_words = [
            UnitWord::new(1, -8, 0).unwrap(),
            UnitWord::new(1, 0, 0).unwrap(),
            UnitWord::new(1, 4, 0).unwrap(),
        ];
        let n = 11;
        struct Case {
            s: i64,
            t: i64,
            uv: (usize, usize),
            expected: fn(i64, i64) -> (i64, i64),
            prediction: YPrediction,
        }
        let cases = [
            Case { s: 3, t: -2, uv: (0, 0), expected: |_, _| (0, 0), prediction: YPrediction::UnitBeta },
            Case { s: 2, t: 3, uv: (0, 2), expected: |s, t| (s, s - t), prediction: YPrediction::NegativeLogY },
            Case { s: -3, t: -2, uv: (1, 0), expected: |s, t| (-t, -s), prediction: YPrediction::NegativeLogY },
            Case { s: -2, t: 2, uv: (1, 2), expected: |s, t| (s - t, -t), prediction: YPrediction::SmallY },
        ];
        for case in &cases {
            let record = synthetic_record(n, case.s, case.t, beta_words, &policy)
                .expect("synthetic record");
            assert_eq!(record.j, 0, "smallest conjugate must sit at index 0");
            assert_eq!((record.u, record.v), case.uv, "(u, v) at (s, t) = ({}, {})", case.s, case.t);
            let solution = (case.expected)(case.s, case.t);
            let unit = UnitWord::new(1, solution.0, solution.1).unwrap().expand(n).unwrap();
            let decomp = decompose_unit(&unit, &policy).expect("decomposition");
            let report = case_check(&record, &decomp, &policy).expect("case report");
            assert_eq!(report.expected, solution, "relation solution at {:?}", case.uv);
            assert!(report.holds, "relations rejected their own solution at {:?}", case.uv);
            assert_eq!(report.residuals, (0, 0));
            assert_eq!(report.prediction, case.prediction);
            assert_eq!(
                report.prediction_certified,
                Verdict::Pass,
                "uncertified forecast sign at {:?}",
                case.uv
            );
            // A perturbed word must violate the case's relations.
            let off = UnitWord::new(1, solution.0 + 1, solution.1).unwrap().expand(n).unwrap();
            let off_decomp = decompose_unit(&off, &policy).expect("decomposition");
            let off_report = case_check(&record, &off_decomp, &policy).expect("case report");
            assert!(!off_report.holds, "perturbed solution accepted at {:?}", case.uv);
        }
        assert_within(start, BUDGET, "criterion 10");
    });
}

#[test]
fn criterion_11_three_valued_honesty() {
    criterion(11, "a precision-starved run reports undecided, never a false pass or fail", || {
        const BUDGET: Duration = Duration::from_secs(1);
        let starved = PrecisionPolicy::with_bits(16, 16);
        let start = Instant::now();

        // Root brackets at n = 10^9 need far more than 16 bits: the starved
        // run must say undecided (a fail would be false — the full-precision
        // verdict is pass, criterion 2).
        let brackets = verify_root_brackets(1_000_000_000, &starved).expect("report");
        assert_eq!(brackets.verdict, Verdict::Undecided);
        assert_eq!(brackets.verdict.to_string(), "undecided");
        let log_brackets = verify_root_log_brackets(1_000_000_000, &starved).expect("report");
        assert_eq!(log_brackets.verdict, Verdict::Undecided);

        // A certifying lemma under starvation may stay undecided but must
        // never flip to fail; its true verdict (criterion 8 grid) is pass.
        let eps = Epsilon::from_parts(1, 10).expect("epsilon");
        let starved_gap = verify_alphadiff(1000, 5, -2, &eps, &starved).expect("report");
        assert_ne!(starved_gap.verdict, Verdict::Fail, "false fail under starvation");
        let full_gap = verify_alphadiff(1000, 5, -2, &eps, &default_policy()).expect("report");
        assert_eq!(full_gap.verdict, Verdict::Pass);
        assert_within(start, BUDGET, "criterion 11");
    });
}

//! Enumeration of the integer solutions of `|F(x, y; n, s, t)| = 1` over
//! parameter grids.
//!
//! Two strategies share one exact acceptance test (integer evaluation of
//! the norm form — never a floating comparison):
//!
//! - **windowed**: for each `y` the only `x` candidates examined are small
//!   integer windows around the rounded products `α_i·y`. A solution makes
//!   the product of the three real factors `x − α_i y` equal to `±1`, so
//!   not all factors can have modulus `> 1`; one of them has modulus `< 1`
//!   unless every factor is exactly `±1`, which forces `α_i` rational
//!   (the degenerate twist `(s, t) = (0, 0)`), and in that case `x` still
//!   lies within `1` of `α_i·y`. Hence `x` lies within `1` of some `α_i·y`
//!   and a window of radius `≥ 2` around the rounded midpoint finds it
//!   whenever the midpoint sits within `1/2 + 1/2` of `α_i·y`.
//! - **exhaustive**: a guarded full-rectangle scan, used as the oracle the
//!   windowed strategy is compared against.
//!
//! Results are sorted by `(n, s, t, y, x)`; repeated runs and runs under
//! different thread counts produce identical results.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Signed;
use rayon::prelude::*;

use crate::analysis::{check_condition, classify_solution, Epsilon, SolutionRecord};
use crate::cubic::compute_roots;
use crate::form::{alpha_family, form_coeffs, NormFormCoeffs};
use crate::precision::PrecisionPolicy;
use crate::{Error, RealEnclosure, Result};

/// Largest exhaustive-scan rectangle area, as `x_max·y_max`.
const EXHAUSTIVE_GUARD: i64 = 100_000_000;

/// Inclusive integer interval of one grid parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParamRange {
    pub lo: i64,
    pub hi: i64,
}

impl ParamRange {
    pub fn new(lo: i64, hi: i64) -> Self {
        ParamRange { lo, hi }
    }

    /// A single-value interval.
    pub fn point(v: i64) -> Self {
        ParamRange { lo: v, hi: v }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// Parameter region and knobs for a windowed enumeration run.
#[derive(Debug, Clone)]
pub struct SearchGrid {
    pub n_range: ParamRange,
    pub s_range: ParamRange,
    pub t_range: ParamRange,
    /// Largest `|y|` examined; at least 1.
    pub y_max: i64,
    /// Window radius around each rounded `α_i·y`; at least 1, default 2.
    pub window: i64,
    /// Condition parameter for `require_condition` filtering.
    pub epsilon: Option<Epsilon>,
    /// When set, `(s, t)` cells failing the admissibility condition are
    /// skipped entirely.
    pub require_condition: bool,
}

impl SearchGrid {
    /// Builds a grid with the default window radius 2 and no condition
    /// filtering. Ranges may be empty; a non-empty `n` range must start at
    /// `n ≥ 3` and `y_max` must be positive.
    pub fn new(
        n_range: ParamRange,
        s_range: ParamRange,
        t_range: ParamRange,
        y_max: i64,
    ) -> Result<Self> {
        if !n_range.is_empty() && n_range.lo < 3 {
            return Err(Error::InvalidParameter(format!(
                "grid requires n ≥ 3, got n range starting at {}",
                n_range.lo
            )));
        }
        if y_max < 1 {
            return Err(Error::InvalidParameter(format!(
                "grid requires y_max ≥ 1, got {y_max}"
            )));
        }
        Ok(SearchGrid {
            n_range,
            s_range,
            t_range,
            y_max,
            window: 2,
            epsilon: None,
            require_condition: false,
        })
    }

    /// Overrides the window radius (must stay ≥ 1).
    pub fn with_window(mut self, window: i64) -> Result<Self> {
        if window < 1 {
            return Err(Error::InvalidParameter(format!(
                "window radius must be ≥ 1, got {window}"
            )));
        }
        self.window = window;
        Ok(self)
    }

    /// Supplies the condition parameter ε.
    pub fn with_epsilon(mut self, epsilon: Epsilon) -> Self {
        self.epsilon = Some(epsilon);
        self
    }

    /// Turns admissibility filtering on or off (needs an ε when on).
    pub fn filter_by_condition(mut self, on: bool) -> Self {
        self.require_condition = on;
        self
    }

    /// The `(n, s, t)` cells of the run, in sorted order, honoring the
    /// condition filter.
    fn cells(&self) -> Result<Vec<(i64, i64, i64)>> {
        if self.require_condition && self.epsilon.is_none() {
            return Err(Error::InvalidParameter(
                "condition filtering requires an ε parameter".into(),
            ));
        }
        let mut cells = Vec::new();
        for n in self.n_range.iter() {
            for s in self.s_range.iter() {
                for t in self.t_range.iter() {
                    if self.require_condition {
                        let eps = self.epsilon.as_ref().expect("checked above");
                        if !check_condition(s, t, eps) {
                            continue;
                        }
                    }
                    cells.push((n, s, t));
                }
            }
        }
        Ok(cells)
    }
}

/// Which enumeration strategy produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    Windowed,
    Exhaustive,
}

impl std::fmt::Display for SearchStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchStrategy::Windowed => write!(f, "WINDOWED"),
            SearchStrategy::Exhaustive => write!(f, "EXHAUSTIVE"),
        }
    }
}

/// Aggregate counters of one enumeration run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// Distinct `(x, y)` pairs evaluated exactly.
    pub candidates_tested: u64,
    /// Pairs with `|F(x, y)| = 1`.
    pub solutions_found: u64,
    /// Solutions whose certified classification did not complete within
    /// the precision budget.
    pub undecided_classifications: u64,
    /// Set on windowed runs without condition filtering: the window
    /// heuristic is validated against the oracle rather than backed by the
    /// admissibility analysis.
    pub completeness_caveat: bool,
}

/// One exactly verified solution. `classification` is `None` when the
/// conjugate-ordering certification ran out of precision; the solution
/// itself is still exact.
#[derive(Debug, Clone)]
pub struct FoundSolution {
    pub n: i64,
    pub s: i64,
    pub t: i64,
    pub x: BigInt,
    pub y: BigInt,
    pub classification: Option<SolutionRecord>,
}

impl FoundSolution {
    /// Sort and identity key `(n, s, t, y, x)`.
    pub fn key(&self) -> SolutionKey {
        SolutionKey {
            n: self.n,
            s: self.s,
            t: self.t,
            y: self.y.clone(),
            x: self.x.clone(),
        }
    }
}

/// Identity of a solution within a grid, ordered as the output.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SolutionKey {
    pub n: i64,
    pub s: i64,
    pub t: i64,
    pub y: BigInt,
    pub x: BigInt,
}

/// Outcome of one enumeration run.
#[derive(Debug, Clone)]
pub struct SearchResult {
    /// Verified solutions sorted by `(n, s, t, y, x)`.
    pub records: Vec<FoundSolution>,
    pub stats: SearchStats,
    pub strategy: SearchStrategy,
}

/// Per-cell partial result, merged in deterministic cell order.
struct CellOutcome {
    found: Vec<FoundSolution>,
    tested: u64,
    undecided: u64,
}

/// Nearest integer to a midpoint.
fn nearest_int(d: &crate::Dyadic) -> BigInt {
    let shifted = d.to_ratio() + Ratio::new(BigInt::from(1), BigInt::from(2));
    shifted.floor().to_integer()
}

/// Tests one candidate; pushes a verified solution with its classification
/// attempt. Classification failures are counted, never raised.
fn test_candidate(
    coeffs: &NormFormCoeffs,
    n: i64,
    s: i64,
    t: i64,
    x: &BigInt,
    y: &BigInt,
    policy: &PrecisionPolicy,
    out: &mut CellOutcome,
) {
    out.tested += 1;
    if !coeffs.is_solution(x, y) {
        return;
    }
    let classification = match classify_solution(x.clone(), y.clone(), n, s, t, policy) {
        Ok(record) => Some(record),
        Err(_) => {
            out.undecided += 1;
            None
        }
    };
    out.found.push(FoundSolution {
        n,
        s,
        t,
        x: x.clone(),
        y: y.clone(),
        classification,
    });
}

/// Windowed candidates and tests for one `(n, s, t)` cell.
fn windowed_cell(
    n: i64,
    s: i64,
    t: i64,
    y_max: i64,
    window: i64,
    policy: &PrecisionPolicy,
) -> Result<CellOutcome> {
    let coeffs = form_coeffs(n, s, t)?;
    let alphas = alpha_family(n, s, t)?;
    let one_shot = PrecisionPolicy::with_bits(policy.start_bits, policy.start_bits);
    let roots = compute_roots(n, &one_shot)?;
    let alpha_re: Vec<RealEnclosure> = alphas.iter().map(|a| a.embed(&roots.lam0)).collect();

    let small_reach = window.max(1);
    let mut out = CellOutcome { found: Vec::new(), tested: 0, undecided: 0 };
    for y in -y_max..=y_max {
        let y_big = BigInt::from(y);
        let mut candidates: BTreeSet<BigInt> = BTreeSet::new();
        if y.abs() <= 1 {
            for x in -small_reach..=small_reach {
                candidates.insert(BigInt::from(x));
            }
        }
        if y != 0 {
            for alpha in &alpha_re {
                let center = nearest_int(&alpha.mul_bigint(&y_big).midpoint());
                for d in -window..=window {
                    candidates.insert(&center + BigInt::from(d));
                }
            }
        }
        for x in &candidates {
            test_candidate(&coeffs, n, s, t, x, &y_big, policy, &mut out);
        }
    }
    Ok(out)
}

/// Merges per-cell outcomes (already in deterministic cell order) into a
/// sorted result.
fn merge_cells(
    outcomes: Vec<CellOutcome>,
    strategy: SearchStrategy,
    completeness_caveat: bool,
) -> SearchResult {
    let mut records = Vec::new();
    let mut stats = SearchStats { completeness_caveat, ..SearchStats::default() };
    for cell in outcomes {
        stats.candidates_tested += cell.tested;
        stats.solutions_found += cell.found.len() as u64;
        stats.undecided_classifications += cell.undecided;
        records.extend(cell.found);
    }
    records.sort_by(|a, b| a.key().cmp(&b.key()));
    SearchResult { records, stats, strategy }
}

/// Runs the windowed enumeration over every cell of the grid.
///
/// Candidates per cell: all `|x| ≤ max(1, window)` for `|y| ≤ 1` (including
/// `x = ±1, y = 0`), plus, for every `1 ≤ |y| ≤ y_max`, the integer windows
/// of radius `window` around each rounded `α_i·y`. Each hit is verified by
/// exact integer evaluation; classification failures are recorded in the
/// stats and the solution is still emitted.
pub fn enumerate_solutions(grid: &SearchGrid, policy: &PrecisionPolicy) -> Result<SearchResult> {
    let cells = grid.cells()?;
    let outcomes: Vec<CellOutcome> = cells
        .par_iter()
        .map(|&(n, s, t)| windowed_cell(n, s, t, grid.y_max, grid.window, policy))
        .collect::<Result<_>>()?;
    Ok(merge_cells(
        outcomes,
        SearchStrategy::Windowed,
        !grid.require_condition,
    ))
}

/// Scans the full rectangle `|x| ≤ x_max`, `|y| ≤ y_max` for one `(n, s, t)`
/// with exact evaluation. Guarded by `x_max·y_max ≤ 10⁸`.
pub fn exhaustive_scan(
    n: i64,
    s: i64,
    t: i64,
    x_max: i64,
    y_max: i64,
    policy: &PrecisionPolicy,
) -> Result<SearchResult> {
    if x_max < 0 || y_max < 0 {
        return Err(Error::InvalidParameter(format!(
            "rectangle bounds must be nonnegative, got ({x_max}, {y_max})"
        )));
    }
    if x_max.checked_mul(y_max).is_none_or(|area| area > EXHAUSTIVE_GUARD) {
        return Err(Error::InvalidParameter(format!(
            "exhaustive rectangle {x_max}·{y_max} exceeds the {EXHAUSTIVE_GUARD} guard"
        )));
    }
    let coeffs = form_coeffs(n, s, t)?;
    let rows: Vec<i64> = (-y_max..=y_max).collect();
    let outcomes: Vec<CellOutcome> = rows
        .par_iter()
        .map(|&y| {
            let y_big = BigInt::from(y);
            let mut out = CellOutcome { found: Vec::new(), tested: 0, undecided: 0 };
            for x in -x_max..=x_max {
                test_candidate(&coeffs, n, s, t, &BigInt::from(x), &y_big, policy, &mut out);
            }
            out
        })
        .collect();
    Ok(merge_cells(outcomes, SearchStrategy::Exhaustive, false))
}

/// Set comparison of the two strategies over a grid.
#[derive(Debug, Clone)]
pub struct StrategyComparison {
    /// True iff the solution sets agree on the common rectangle.
    pub equal: bool,
    pub windowed: SearchResult,
    pub exhaustive: SearchResult,
    /// Keys found only by the windowed strategy (within `|x| ≤ x_max`).
    pub only_windowed: Vec<SolutionKey>,
    /// Keys found only by the exhaustive oracle.
    pub only_exhaustive: Vec<SolutionKey>,
}

/// Runs both strategies and compares their solution sets on the common
/// rectangle `|x| ≤ x_max`, `|y| ≤ grid.y_max` (the windowed set is
/// restricted to the rectangle, since its windows reach beyond it).
pub fn compare_strategies(
    grid: &SearchGrid,
    x_max: i64,
    policy: &PrecisionPolicy,
) -> Result<StrategyComparison> {
    if x_max < 0 {
        return Err(Error::InvalidParameter(format!(
            "rectangle x bound must be nonnegative, got {x_max}"
        )));
    }
    let windowed = enumerate_solutions(grid, policy)?;
    let cells = grid.cells()?;
    let cell_results: Vec<SearchResult> = cells
        .par_iter()
        .map(|&(n, s, t)| exhaustive_scan(n, s, t, x_max, grid.y_max, policy))
        .collect::<Result<_>>()?;
    let mut exhaustive_records = Vec::new();
    let mut stats = SearchStats::default();
    for r in cell_results {
        stats.candidates_tested += r.stats.candidates_tested;
        stats.solutions_found += r.stats.solutions_found;
        stats.undecided_classifications += r.stats.undecided_classifications;
        exhaustive_records.extend(r.records);
    }
    exhaustive_records.sort_by(|a, b| a.key().cmp(&b.key()));
    let exhaustive = SearchResult {
        records: exhaustive_records,
        stats,
        strategy: SearchStrategy::Exhaustive,
    };

    let x_bound = BigInt::from(x_max);
    let windowed_keys: BTreeSet<SolutionKey> = windowed
        .records
        .iter()
        .filter(|rec| rec.x.abs() <= x_bound)
        .map(FoundSolution::key)
        .collect();
    let exhaustive_keys: BTreeSet<SolutionKey> =
        exhaustive.records.iter().map(FoundSolution::key).collect();
    let only_windowed: Vec<SolutionKey> =
        windowed_keys.difference(&exhaustive_keys).cloned().collect();
    let only_exhaustive: Vec<SolutionKey> =
        exhaustive_keys.difference(&windowed_keys).cloned().collect();
    Ok(StrategyComparison {
        equal: only_windowed.is_empty() && only_exhaustive.is_empty(),
        windowed,
        exhaustive,
        only_windowed,
        only_exhaustive,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn keys(result: &SearchResult) -> Vec<(i64, i64, i64, i64, i64)> {
        result
            .records
            .iter()
            .map(|r| {
                (
                    r.n,
                    r.s,
                    r.t,
                    i64::try_from(&r.y).expect("small y"),
                    i64::try_from(&r.x).expect("small x"),
                )
            })
            .collect()
    }

    #[test]
    fn grid_validation() {
        assert!(SearchGrid::new(
            ParamRange::new(2, 5),
            ParamRange::point(1),
            ParamRange::point(1),
            5
        )
        .is_err());
        assert!(SearchGrid::new(
            ParamRange::point(3),
            ParamRange::point(1),
            ParamRange::point(1),
            0
        )
        .is_err());
        let grid = SearchGrid::new(
            ParamRange::point(3),
            ParamRange::point(1),
            ParamRange::point(1),
            5,
        )
        .unwrap();
        assert_eq!(grid.window, 2);
        assert!(grid.clone().with_window(0).is_err());
        assert!(grid.clone().with_window(3).is_ok());
        // Condition filtering without ε is rejected at run time.
        let bad = grid.filter_by_condition(true);
        assert!(enumerate_solutions(&bad, &policy()).is_err());
    }

    #[test]
    fn untwisted_grid_contains_trivial_solutions() {
        let grid = SearchGrid::new(
            ParamRange::point(3),
            ParamRange::point(1),
            ParamRange::point(1),
            50,
        )
        .unwrap();
        let result = enumerate_solutions(&grid, &policy()).unwrap();
        let found = keys(&result);
        for expected in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
            assert!(
                found.contains(&(3, 1, 1, expected.1, expected.0)),
                "missing (x, y) = {expected:?} in {found:?}"
            );
        }
        assert_eq!(result.stats.solutions_found, result.records.len() as u64);
        assert!(result.stats.completeness_caveat);
        assert_eq!(result.strategy, SearchStrategy::Windowed);
    }

    #[test]
    fn empty_range_gives_empty_result() {
        let grid = SearchGrid::new(
            ParamRange::point(3),
            ParamRange::new(1, 0),
            ParamRange::point(1),
            5,
        )
        .unwrap();
        let result = enumerate_solutions(&grid, &policy()).unwrap();
        assert!(result.records.is_empty());
        assert_eq!(result.stats.candidates_tested, 0);
    }

    #[test]
    fn untwisted_n3_finds_minus_one_one() {
        let grid = SearchGrid::new(
            ParamRange::point(3),
            ParamRange::point(1),
            ParamRange::point(0),
            5,
        )
        .unwrap();
        let result = enumerate_solutions(&grid, &policy()).unwrap();
        assert!(keys(&result).contains(&(3, 1, 0, 1, -1)));
        // Every emitted record satisfies the equation exactly.
        for rec in &result.records {
            let coeffs = form_coeffs(rec.n, rec.s, rec.t).unwrap();
            assert!(coeffs.is_solution(&rec.x, &rec.y));
            assert!(rec.classification.is_some());
        }
    }

    #[test]
    fn results_are_sorted_and_repeatable() {
        let grid = SearchGrid::new(
            ParamRange::new(3, 4),
            ParamRange::new(-1, 1),
            ParamRange::point(1),
            10,
        )
        .unwrap();
        let a = enumerate_solutions(&grid, &policy()).unwrap();
        let b = enumerate_solutions(&grid, &policy()).unwrap();
        assert_eq!(keys(&a), keys(&b));
        assert_eq!(a.stats, b.stats);
        let mut sorted = a.records.iter().map(FoundSolution::key).collect::<Vec<_>>();
        sorted.sort();
        assert_eq!(sorted, a.records.iter().map(FoundSolution::key).collect::<Vec<_>>());
    }

    #[test]
    fn exhaustive_guard_and_degenerate_rectangle() {
        assert!(exhaustive_scan(3, 1, 1, 100_000, 10_000, &policy()).is_err());
        assert!(exhaustive_scan(3, 1, 1, -1, 5, &policy()).is_err());
        let empty = exhaustive_scan(3, 1, 1, 0, 0, &policy()).unwrap();
        assert_eq!(empty.stats.candidates_tested, 1);
        assert_eq!(empty.stats.solutions_found, 0);
        assert!(!empty.stats.completeness_caveat);
    }

    #[test]
    fn exhaustive_solution_set_is_odd_symmetric() {
        let result = exhaustive_scan(3, 1, 1, 20, 20, &policy()).unwrap();
        let found: BTreeSet<(i64, i64)> = keys(&result)
            .into_iter()
            .map(|(_, _, _, y, x)| (x, y))
            .collect();
        assert!(!found.is_empty());
        for &(x, y) in &found {
            assert!(found.contains(&(-x, -y)), "missing mirror of ({x}, {y})");
        }
    }

    #[test]
    fn windowed_matches_exhaustive_on_small_rectangle() {
        let grid = SearchGrid::new(
            ParamRange::point(3),
            ParamRange::point(1),
            ParamRange::point(1),
            20,
        )
        .unwrap();
        let cmp = compare_strategies(&grid, 20, &policy()).unwrap();
        assert!(cmp.equal, "windowed-only {:?}, exhaustive-only {:?}", cmp.only_windowed, cmp.only_exhaustive);
        assert!(cmp.exhaustive.stats.candidates_tested >= cmp.windowed.stats.candidates_tested);
    }

    #[test]
    fn degenerate_twist_reduces_to_a_line() {
        // (s, t) = (0, 0) collapses the form to (x − y)³.
        let grid = SearchGrid::new(
            ParamRange::point(3),
            ParamRange::point(0),
            ParamRange::point(0),
            5,
        )
        .unwrap();
        let cmp = compare_strategies(&grid, 6, &policy()).unwrap();
        assert!(cmp.equal);
        for rec in &cmp.exhaustive.records {
            let d = &rec.x - &rec.y;
            assert!(d.abs() == big(1), "({}, {}) off the line", rec.x, rec.y);
        }
        // x = y ± 1 for each |y| ≤ 5 with |x| ≤ 6: 22 solutions.
        assert_eq!(cmp.exhaustive.records.len(), 22);
    }

    #[test]
    fn single_point_grid_strategies_agree() {
        let grid = SearchGrid::new(
            ParamRange::point(4),
            ParamRange::point(2),
            ParamRange::point(-1),
            8,
        )
        .unwrap();
        let cmp = compare_strategies(&grid, 15, &policy()).unwrap();
        assert!(cmp.equal);
    }

    #[test]
    fn condition_filter_skips_inadmissible_cells() {
        let eps = Epsilon::from_parts(1, 2).unwrap();
        // (1, 1): min(|2s−t|, |2t−s|, |s+t|) = 1 is not > 2, so the cell
        // is filtered out entirely.
        let filtered = SearchGrid::new(
            ParamRange::point(3),
            ParamRange::point(1),
            ParamRange::point(1),
            5,
        )
        .unwrap()
        .with_epsilon(eps.clone())
        .filter_by_condition(true);
        let result = enumerate_solutions(&filtered, &policy()).unwrap();
        assert!(result.records.is_empty());
        assert_eq!(result.stats.candidates_tested, 0);
        assert!(!result.stats.completeness_caveat);

        // (5, 1): min(9, 3, 6) = 3 > max(ε·5, 2), so the cell is kept.
        let kept = SearchGrid::new(
            ParamRange::point(3),
            ParamRange::point(5),
            ParamRange::point(1),
            3,
        )
        .unwrap()
        .with_epsilon(eps)
        .filter_by_condition(true);
        let result = enumerate_solutions(&kept, &policy()).unwrap();
        assert!(result.stats.candidates_tested > 0);
    }
}

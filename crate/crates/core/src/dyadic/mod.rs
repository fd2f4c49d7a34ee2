//! Dyadic intervals, the single-scale quantities `a_I`, bad intervals and
//! greedy tree covers.
//!
//! A dyadic interval `(n, j)` is `{x ∈ ℤ : j·2^n < x ≤ (j+1)·2^n}`, `n ≥ 0`.
//! For indicator data `E_0, …, E_k` the quantity attached to it is
//! `a_I = 2^{−2n} |single_scale_form(1_{E_0}, …, 1_{E_k}; n, j)|`.

pub mod bumps;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mht::{dyadic_scales, kernel_mass, single_scale_form, SingleScaleWindow, TruncationParams};
use crate::signals::{maximal_function, IndicatorSet, Signal};
use bumps::BumpPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DyadicInterval {
    pub n: u32,
    pub j: i64,
}

impl DyadicInterval {
    pub fn new(n: u32, j: i64) -> Self {
        Self { n, j }
    }

    pub fn len(&self) -> i64 {
        1i64 << self.n
    }

    /// Dyadic intervals always hold at least one point.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// First point `j·2^n + 1`.
    pub fn start(&self) -> i64 {
        self.j * self.len() + 1
    }

    /// Last point `(j+1)·2^n`.
    pub fn end(&self) -> i64 {
        (self.j + 1) * self.len()
    }

    pub fn contains_point(&self, x: i64) -> bool {
        x >= self.start() && x <= self.end()
    }

    /// `other ⊆ self`, by index arithmetic.
    pub fn contains(&self, other: &DyadicInterval) -> bool {
        other.n <= self.n && other.j.div_euclid(1i64 << (self.n - other.n)) == self.j
    }

    pub fn window(&self) -> SingleScaleWindow {
        SingleScaleWindow { n: self.n, j: self.j }
    }

    /// Sub-intervals of length `2^m`, `m ≤ n`, in increasing order.
    pub fn descendants(&self, m: u32) -> impl Iterator<Item = DyadicInterval> {
        let shift = self.n - m;
        let first = self.j << shift;
        (first..first + (1i64 << shift)).map(move |j| DyadicInterval::new(m, j))
    }
}

/// Indicator data `E_0, …, E_k` together with their signals.
#[derive(Clone, Debug)]
pub struct IndicatorTuple {
    sets: Vec<IndicatorSet>,
    signals: Vec<Signal>,
}

impl IndicatorTuple {
    pub fn new(sets: Vec<IndicatorSet>) -> Result<Self> {
        if sets.len() < 2 {
            return Err(Error::Arity {
                expected: 2,
                got: sets.len(),
            });
        }
        let signals = sets.iter().map(IndicatorSet::to_signal).collect();
        Ok(Self { sets, signals })
    }

    pub fn k(&self) -> usize {
        self.sets.len() - 1
    }

    pub fn sets(&self) -> &[IndicatorSet] {
        &self.sets
    }

    pub fn signals(&self) -> &[Signal] {
        &self.signals
    }
}

/// `a_I` for indicator data.
pub fn a_value(data: &IndicatorTuple, interval: DyadicInterval, bumps: &BumpPair) -> f64 {
    let form = single_scale_form(data.signals(), interval.window(), bumps)
        .expect("tuple arity checked at construction");
    form.norm() / (interval.len() as f64).powi(2)
}

/// Code-derived ceiling `C_ψφ ≥ a_I` for every interval and every data set.
///
/// At scale `n` the summand is bounded by `ψ_sup φ_sup` and there are
/// `2^{n+1} + 1` admissible `x` and `2(2^{n+1} − ⌈2^{n−1}⌉ + 1)` admissible
/// `t`; the ratio to `4^n` is largest at `n = 0`.
pub fn a_ceiling(bumps: &BumpPair) -> f64 {
    let worst = (0..30u32)
        .map(|n| {
            let len = 1i64 << n;
            let xs = 2 * len + 1;
            let ts = 2 * (2 * len - (len + 1) / 2 + 1);
            (xs * ts) as f64 / (len as f64).powi(2)
        })
        .fold(0.0, f64::max);
    bumps.psi_sup() * bumps.phi_sup() * worst
}

/// All intervals with `r ≤ |I| ≤ R` whose `φ`-window meets the hull of `E_0`.
///
/// Every other interval has `a_I = 0`. Ordered by decreasing length, then
/// increasing `j`.
pub fn enumerate_intervals(data: &IndicatorTuple, r: f64, big_r: f64) -> Result<Vec<DyadicInterval>> {
    let params = TruncationParams::new(r, big_r, 1)?;
    let Some((lo, hi)) = data.sets()[0].hull() else {
        return Ok(Vec::new());
    };
    let mut scales: Vec<u32> = dyadic_scales(&params).collect();
    scales.reverse();
    let mut out = Vec::new();
    for n in scales {
        let len = 1i64 << n;
        let j_lo = -(-lo).div_euclid(len) - 1;
        let j_hi = hi.div_euclid(len) + 1;
        out.extend((j_lo..=j_hi).map(|j| DyadicInterval::new(n, j)));
    }
    Ok(out)
}

/// Both sides of the maximal-function bound on `Σ a_I^{p/2} |I|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LawSum {
    pub lhs: f64,
    pub rhs: f64,
    /// `C_law = C^{p/2}` with `a_I ≤ C · inf_{x ∈ I} M1_{E_0}(x) M1_{E_1}(x)`.
    pub constant: f64,
}

/// Constant `C` in `a_I ≤ C · inf_{x ∈ I} M1_{E_0}(x) · M1_{E_1}(x)`.
///
/// For `x' ∈ I = (n, j)`: the `x`-window `[(j−1)2^n, (j+1)2^n]` lies in the
/// ball of radius `2^{n+1}` about `x'`, and the reachable `x + t` lie in the
/// ball of radius `2^{n+2}`. Counting pairs by `|E_0 ∩ ·| |E_1 ∩ ·|` gives
/// `C = ψ_sup φ_sup (4 + 2^{−n})(8 + 2^{−n}) ≤ 45 ψ_sup φ_sup`.
pub fn law_constant(bumps: &BumpPair) -> f64 {
    45.0 * bumps.psi_sup() * bumps.phi_sup()
}

/// `Σ_{r ≤ |I| ≤ R} a_I^{p/2} |I|` against
/// `C^{p/2} (log₂(R/r) + 1) Σ_x (M1_{E_0} M1_{E_1})^{p/2}(x)`.
///
/// The right-hand sum runs over the points of the enumerated intervals,
/// which is where the per-interval chain is applied.
pub fn lemma_law_sum(data: &IndicatorTuple, r: f64, big_r: f64, p: f64, bumps: &BumpPair) -> Result<LawSum> {
    if !(p.is_finite() && p > 1.0) {
        return Err(Error::ExponentOutOfRange(p));
    }
    let constant = law_constant(bumps).powf(p / 2.0);
    let intervals = enumerate_intervals(data, r, big_r)?;
    if intervals.is_empty() || data.sets()[1].is_empty() {
        return Ok(LawSum {
            lhs: 0.0,
            rhs: 0.0,
            constant,
        });
    }
    let lhs: f64 = intervals
        .iter()
        .map(|&i| a_value(data, i, bumps).powf(p / 2.0) * i.len() as f64)
        .sum();
    let lo = intervals.iter().map(DyadicInterval::start).min().unwrap_or(0);
    let hi = intervals.iter().map(DyadicInterval::end).max().unwrap_or(0);
    let m0 = maximal_function(&data.signals()[0], lo..=hi);
    let m1 = maximal_function(&data.signals()[1], lo..=hi);
    let point_sum: f64 = (lo..=hi)
        .map(|x| (m0.get(x).re * m1.get(x).re).powf(p / 2.0))
        .sum();
    let params = TruncationParams::new(r, big_r, 1)?;
    let rhs = constant * (params.ratio().log2() + 1.0) * point_sum;
    Ok(LawSum { lhs, rhs, constant })
}

/// Intervals with `r ≤ |I| ≤ R` and `a_I > δ`, largest first, ties by `j`.
pub fn bad_intervals(
    data: &IndicatorTuple,
    r: f64,
    big_r: f64,
    delta: f64,
    bumps: &BumpPair,
) -> Result<Vec<DyadicInterval>> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    Ok(enumerate_intervals(data, r, big_r)?
        .into_iter()
        .filter(|&i| a_value(data, i, bumps) > delta)
        .collect())
}

/// A tree: the top `I_T` and every dyadic `I ⊆ I_T` with `|I_T|/A ≤ |I|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub top: DyadicInterval,
    /// Depth factor `A`, a power of two.
    pub a: f64,
    /// Whether `A` met the cancellation target.
    pub achieved: bool,
}

impl Tree {
    /// Number of scales below the top: largest `s` with `2^s ≤ A`, capped at `n`.
    pub fn depth(&self) -> u32 {
        depth_for(self.top, self.a)
    }

    pub fn contains(&self, interval: &DyadicInterval) -> bool {
        self.top.contains(interval) && interval.n + self.depth() >= self.top.n
    }

    pub fn members(&self) -> Vec<DyadicInterval> {
        let lowest = self.top.n - self.depth();
        (lowest..=self.top.n)
            .rev()
            .flat_map(|m| self.top.descendants(m))
            .collect()
    }
}

fn depth_for(top: DyadicInterval, a: f64) -> u32 {
    let mut s = 0u32;
    while s < top.n && ((s + 1) as f64).exp2() <= a {
        s += 1;
    }
    s
}

/// `Σ_{I ⊆ I_0, |I_0|/A ≤ |I| ≤ |I_0|} a_I |I|`.
pub fn tree_sum(top: DyadicInterval, a: f64, data: &IndicatorTuple, bumps: &BumpPair) -> Result<f64> {
    if a.is_nan() || a < 1.0 {
        return Err(Error::InvalidArgument(format!("A must be at least 1, got {a}")));
    }
    let tree = Tree {
        top,
        a,
        achieved: false,
    };
    Ok(tree
        .members()
        .into_iter()
        .map(|i| a_value(data, i, bumps) * i.len() as f64)
        .sum())
}

/// First power of two `A ∈ [2, cap]` with `tree_sum ≤ δ |I_0| ln A`.
///
/// `cap` is the largest power of two below `min(A_max, |I_0|)`, and at least 2.
/// Returns `(cap, false)` when no candidate qualifies.
pub fn select_tree_a(
    top: DyadicInterval,
    data: &IndicatorTuple,
    delta: f64,
    a_max: f64,
    bumps: &BumpPair,
) -> Result<(f64, bool)> {
    if a_max.is_nan() || a_max < 1.0 {
        return Err(Error::InvalidArgument(format!("A_max must be at least 1, got {a_max}")));
    }
    let limit = a_max.min(top.len() as f64);
    let mut cap = 2.0;
    while cap * 2.0 <= limit {
        cap *= 2.0;
    }
    let mut a = 2.0;
    while a <= cap {
        let sum = tree_sum(top, a, data, bumps)?;
        if sum <= delta * top.len() as f64 * a.ln() {
            return Ok((a, true));
        }
        a *= 2.0;
    }
    Ok((cap, false))
}

/// Greedy cover of the bad intervals by disjoint trees, largest tops first.
///
/// A bad interval already inside an earlier tree is skipped; otherwise it
/// becomes a new top with `A` chosen for the target `ε δ`. Tops are processed
/// in decreasing length, so a later tree can never share an interval with an
/// earlier one.
pub fn greedy_tree_cover(
    bad: &[DyadicInterval],
    data: &IndicatorTuple,
    delta: f64,
    eps: f64,
    a_max: f64,
    bumps: &BumpPair,
) -> Result<Vec<Tree>> {
    let mut order = bad.to_vec();
    order.sort_by(|x, y| y.n.cmp(&x.n).then(x.j.cmp(&y.j)));
    order.dedup();
    let mut trees: Vec<Tree> = Vec::new();
    for interval in order {
        if trees.iter().any(|t| t.contains(&interval)) {
            continue;
        }
        let (a, achieved) = select_tree_a(interval, data, eps * delta, a_max, bumps)?;
        trees.push(Tree {
            top: interval,
            a,
            achieved,
        });
    }
    Ok(trees)
}

/// Structural checks on a cover: every bad interval covered, trees pairwise
/// disjoint as interval sets, every top bad.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverCheck {
    pub coverage: bool,
    pub disjoint: bool,
    pub bad_tops: bool,
}

impl CoverCheck {
    pub fn all(&self) -> bool {
        self.coverage && self.disjoint && self.bad_tops
    }
}

pub fn check_cover(bad: &[DyadicInterval], trees: &[Tree]) -> CoverCheck {
    let coverage = bad.iter().all(|i| trees.iter().any(|t| t.contains(i)));
    let bad_tops = trees.iter().all(|t| bad.contains(&t.top));
    let mut seen = std::collections::HashSet::new();
    let disjoint = trees.iter().flat_map(Tree::members).all(|i| seen.insert(i));
    CoverCheck {
        coverage,
        disjoint,
        bad_tops,
    }
}

/// Masses entering the reduction from bad intervals to tree estimates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsdelReport {
    /// `Σ_{bad I} |I|`.
    pub bad_mass: f64,
    /// `Σ_{r ≤ |I| ≤ R} a_I |I|`.
    pub weighted_mass: f64,
    /// `K(r, R) |E_0|`.
    pub trivial_mass: f64,
    /// `weighted_mass / (ln(R/r) |E_0|)`; absent when the denominator vanishes.
    pub normalized_weighted: Option<f64>,
    /// `bad_mass / (ln(R/r) |E_0|)`; absent when the denominator vanishes.
    pub normalized_bad: Option<f64>,
    pub bad_count: usize,
    pub interval_count: usize,
}

pub fn epsdel_report(
    data: &IndicatorTuple,
    r: f64,
    big_r: f64,
    delta: f64,
    bumps: &BumpPair,
) -> Result<EpsdelReport> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!("delta must be positive, got {delta}")));
    }
    let params = TruncationParams::new(r, big_r, 1)?;
    let intervals = enumerate_intervals(data, r, big_r)?;
    let mut bad_mass = 0.0;
    let mut weighted_mass = 0.0;
    let mut bad_count = 0;
    for &i in &intervals {
        let a = a_value(data, i, bumps);
        weighted_mass += a * i.len() as f64;
        if a > delta {
            bad_mass += i.len() as f64;
            bad_count += 1;
        }
    }
    let e0 = data.sets()[0].len() as f64;
    let denom = params.ratio().ln() * e0;
    let normalize = |v: f64| (denom > 0.0).then(|| v / denom);
    Ok(EpsdelReport {
        bad_mass,
        weighted_mass,
        trivial_mass: kernel_mass(&params) * e0,
        normalized_weighted: normalize(weighted_mass),
        normalized_bad: normalize(bad_mass),
        bad_count,
        interval_count: intervals.len(),
    })
}

/// Number of dyadic scales with `r ≤ 2^n ≤ R`; every point lies in exactly
/// one interval per scale.
pub fn scale_count(r: f64, big_r: f64) -> Result<usize> {
    Ok(dyadic_scales(&TruncationParams::new(r, big_r, 1)?).count())
}

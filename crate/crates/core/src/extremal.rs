//! Lower bounds on the operator norm of the truncated transform.
//!
//! Two search families work on the dual form
//! `Λ(f_0, …, f_k) = Σ_t Σ_x f_0(x) f_1(x+t) ⋯ f_k(x+kt) / t` with data on
//! `[1, N]`: block ascent over complex signals, where each slot update is the
//! Hölder extremizer of a linear functional, and random indicator tuples.
//! For `k = 1` the exact norm on `ℓ²(ℤ)` is the sup of the Fourier multiplier.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mht::{dual_form, kernel_mass, TruncationParams};
use crate::rng::{derive_seed, seeded};
use crate::signals::{conjugate_exponent, lp_norm, HolderExponents, IndicatorSet, Signal};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest supported domain `[1, N]`.
pub const MAX_DOMAIN: usize = 4096;

/// Relative improvement per sweep below which block ascent stops.
pub const STOP_TOLERANCE: f64 = 1e-10;

/// Refinement doubling must move the multiplier sup by less than this.
pub const MULTIPLIER_TOLERANCE: f64 = 1e-6;

/// Smallest accepted θ-grid for [`multiplier_norm_k1`].
pub const MIN_GRID_POINTS: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Alternating,
    Indicator,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Alternating => "alternating",
            Method::Indicator => "indicator",
        }
    }
}

/// A lower bound on the best constant, with the tuple that achieves it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub lower_bound: f64,
    /// `k + 1` signals on `[1, N]` in dual form.
    pub extremizers: Vec<Signal>,
    pub exponents: HolderExponents,
    pub params: TruncationParams,
    pub iterations: usize,
    pub converged: bool,
    pub seed: u64,
    pub method: Method,
    /// Best score of every restart or trial, in index order.
    pub restart_scores: Vec<f64>,
    /// Objective after the initial normalization and after each slot update
    /// of the reported run.
    pub objective_history: Vec<f64>,
    /// Largest relative drop of the objective across slot updates over all runs.
    pub monotonicity_defect: f64,
}

impl NormEstimate {
    /// `|Λ(extremizers)| / Π ‖f_i‖_{p_i}` from scratch.
    pub fn recompute(&self) -> Result<f64> {
        score(&self.extremizers, &self.exponents, &self.params)
    }

    /// Relative discrepancy between the stored and recomputed bound.
    pub fn verify(&self) -> Result<f64> {
        let again = self.recompute()?;
        Ok((again - self.lower_bound).abs() / self.lower_bound.abs().max(f64::MIN_POSITIVE))
    }

    pub fn trivial(&self) -> f64 {
        kernel_mass(&self.params)
    }
}

/// One point of a growth curve, `r = 1` and `R = ratio`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub ratio: f64,
    pub lower_bound: f64,
    /// `K(1, ratio)`.
    pub trivial: f64,
    /// `lower_bound / trivial`, zero when `trivial` vanishes.
    pub normalized: f64,
    pub method: Method,
    pub seed: u64,
    pub iterations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    pub max_iter: usize,
    /// Random restarts of block ascent.
    pub restarts: usize,
    /// Indicator tuples tried by [`indicator_search`] inside [`growth_curve`].
    pub trials: usize,
    /// Worker threads; `0` uses the global pool.
    pub workers: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            restarts: 4,
            trials: 64,
            workers: 0,
        }
    }
}

fn in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

fn dual_exponents(exponents: &HolderExponents, params: &TruncationParams) -> Result<Vec<f64>> {
    if let HolderExponents::Primal { exponents: ps, p } = exponents {
        HolderExponents::primal(ps.clone(), *p)?;
    } else {
        HolderExponents::dual(exponents.exponents().to_vec())?;
    }
    let dual = exponents.to_dual().exponents().to_vec();
    if dual.len() != params.k + 1 {
        return Err(Error::Arity {
            expected: params.k + 1,
            got: dual.len(),
        });
    }
    Ok(dual)
}

fn check_domain(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DOMAIN {
        return Err(Error::InvalidArgument(format!("domain size must lie in [1, {MAX_DOMAIN}], got {n}")));
    }
    Ok(())
}

fn score(fs: &[Signal], exponents: &HolderExponents, params: &TruncationParams) -> Result<f64> {
    let ps = exponents.to_dual().exponents().to_vec();
    let mut denom = 1.0;
    for (f, &p) in fs.iter().zip(&ps) {
        denom *= lp_norm(f, p)?;
    }
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(dual_form(fs, params)?.norm() / denom)
}

/// Shifts `t` with `r ≤ |t| ≤ R` that can connect two points of `[1, N]`.
fn shifts(params: &TruncationParams, n: usize) -> Vec<i64> {
    let hi = params.t_max().min(n as i64 - 1);
    (params.t_min()..=hi).flat_map(|t| [t, -t]).collect()
}

/// `g_i(y) = ∂Λ/∂f_i(y) = Σ_t (1/t) Π_{l ≠ i} f_l(y + (l − i)t)`.
fn gradient(slots: &[Vec<Complex64>], i: usize, ts: &[i64]) -> Vec<Complex64> {
    let n = slots[i].len() as i64;
    (1..=n)
        .map(|y| {
            let mut g = ZERO;
            for &t in ts {
                let mut prod = Complex64::new(1.0 / t as f64, 0.0);
                for (l, f) in slots.iter().enumerate() {
                    if l == i {
                        continue;
                    }
                    let z = y + (l as i64 - i as i64) * t;
                    if z < 1 || z > n {
                        prod = ZERO;
                        break;
                    }
                    prod *= f[(z - 1) as usize];
                    if prod == ZERO {
                        break;
                    }
                }
                g += prod;
            }
            g
        })
        .collect()
}

fn norm_p(f: &[Complex64], p: f64) -> f64 {
    let m = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    m * f.iter().map(|z| (z.norm() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

/// Unit-`ℓ^p` maximizer of `f ↦ Σ f g`; returns it with `‖g‖_{p'}`.
fn holder_extremizer(g: &[Complex64], p: f64) -> Option<(Vec<Complex64>, f64)> {
    let q = conjugate_exponent(p);
    let m = g.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return None;
    }
    let mass: f64 = g.iter().map(|z| (z.norm() / m).powf(q)).sum();
    let scale = mass.powf((q - 1.0) / q);
    let f = g
        .iter()
        .map(|z| {
            let a = z.norm() / m;
            if a == 0.0 {
                ZERO
            } else {
                (z.conj() / z.norm()) * (a.powf(q - 1.0) / scale)
            }
        })
        .collect();
    Some((f, m * mass.powf(1.0 / q)))
}

fn dense_to_signal(f: &[Complex64]) -> Signal {
    Signal::new(1, f.to_vec()).expect("slot values stay finite")
}

struct Run {
    slots: Vec<Vec<Complex64>>,
    history: Vec<f64>,
    iterations: usize,
    converged: bool,
    defect: f64,
}

fn ascend(mut slots: Vec<Vec<Complex64>>, ps: &[f64], params: &TruncationParams, max_iter: usize) -> Run {
    let n = slots[0].len();
    let ts = shifts(params, n);
    for (f, &p) in slots.iter_mut().zip(ps) {
        let norm = norm_p(f, p);
        if norm > 0.0 {
            f.iter_mut().for_each(|z| *z /= norm);
        }
    }
    let g0 = gradient(&slots, 0, &ts);
    let start: f64 = slots[0].iter().zip(&g0).map(|(a, b)| a * b).sum::<Complex64>().norm();
    let mut history = vec![start];
    let mut defect: f64 = 0.0;
    let mut current = start;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let before = current;
        for i in 0..slots.len() {
            let g = gradient(&slots, i, &ts);
            if let Some((f, value)) = holder_extremizer(&g, ps[i]) {
                slots[i] = f;
                if value < current {
                    defect = defect.max((current - value) / current);
                }
                current = value;
            }
            history.push(current);
        }
        if current - before <= STOP_TOLERANCE * before.max(f64::MIN_POSITIVE) {
            converged = true;
            break;
        }
    }
    Run {
        slots,
        history,
        iterations,
        converged,
        defect,
    }
}

fn random_slots(seed: u64, k: usize, n: usize) -> Vec<Vec<Complex64>> {
    let mut rng = seeded(seed);
    (0..=k)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect()
}

fn finish(
    runs: Vec<Run>,
    exponents: &HolderExponents,
    params: &TruncationParams,
    seed: u64,
) -> Result<NormEstimate> {
    let exponents = exponents.to_dual();
    let mut scored = Vec::with_capacity(runs.len());
    for run in runs {
        let fs: Vec<Signal> = run.slots.iter().map(|f| dense_to_signal(f)).collect();
        let value = score(&fs, &exponents, params)?;
        scored.push((value, fs, run));
    }
    let restart_scores: Vec<f64> = scored.iter().map(|s| s.0).collect();
    let defect = scored.iter().map(|s| s.2.defect).fold(0.0, f64::max);
    let best = (0..scored.len())
        .max_by(|&a, &b| scored[a].0.total_cmp(&scored[b].0).then(b.cmp(&a)))
        .ok_or_else(|| Error::InvalidArgument("at least one restart is required".into()))?;
    let (lower_bound, extremizers, run) = scored.swap_remove(best);
    Ok(NormEstimate {
        lower_bound,
        extremizers,
        exponents,
        params: *params,
        iterations: run.iterations,
        converged: run.converged,
        seed,
        method: Method::Alternating,
        restart_scores,
        objective_history: run.history,
        monotonicity_defect: defect,
    })
}

/// Block ascent with the default number of restarts.
pub fn alternating_maximize(
    exponents: &HolderExponents,
    params: &TruncationParams,
    n: usize,
    seed: u64,
    max_iter: usize,
) -> Result<NormEstimate> {
    let opts = SearchOptions {
        max_iter,
        ..SearchOptions::default()
    };
    alternating_maximize_with(exponents, params, n, seed, &opts)
}

/// Block ascent from `opts.restarts` random starts on `[1, N]`; restart `i`
/// uses the derived seed `derive_seed(seed, i)`.
pub fn alternating_maximize_with(
    exponents: &HolderExponents,
    params: &TruncationParams,
    n: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<NormEstimate> {
    let ps = dual_exponents(exponents, params)?;
    check_domain(n)?;
    let restarts = opts.restarts.max(1);
    let runs: Vec<Run> = in_pool(opts.workers, || {
        (0..restarts)
            .into_par_iter()
            .map(|i| ascend(random_slots(derive_seed(seed, i as u64), params.k, n), &ps, params, opts.max_iter))
            .collect()
    });
    finish(runs, exponents, params, seed)
}

/// Block ascent from a given tuple; signals are restricted to `[1, N]` with
/// `N` the largest right end of their supports.
pub fn alternating_maximize_from(
    exponents: &HolderExponents,
    params: &TruncationParams,
    init: &[Signal],
    seed: u64,
    max_iter: usize,
) -> Result<NormEstimate> {
    let ps = dual_exponents(exponents, params)?;
    if init.len() != params.k + 1 {
        return Err(Error::Arity {
            expected: params.k + 1,
            got: init.len(),
        });
    }
    let n = init
        .iter()
        .filter_map(|f| f.support())
        .map(|(_, hi)| hi)
        .max()
        .unwrap_or(1)
        .max(1) as usize;
    check_domain(n)?;
    let slots = init
        .iter()
        .map(|f| (1..=n as i64).map(|y| f.get(y)).collect())
        .collect();
    finish(vec![ascend(slots, &ps, params, max_iter)], exponents, params, seed)
}

fn random_set(rng: &mut impl Rng, n: usize) -> IndicatorSet {
    let density: f64 = rng.gen_range(0.05..=1.0);
    loop {
        let set = IndicatorSet::new((1..=n as i64).filter(|_| rng.gen_bool(density)));
        if !set.is_empty() {
            return set;
        }
    }
}

/// Best of `trials` random indicator tuples on `[1, N]`, scored by
/// `|Λ(1_{E_0}, …, 1_{E_k})| / Π |E_i|^{1/p_i}`. Empty sets are resampled.
pub fn indicator_search(
    exponents: &HolderExponents,
    params: &TruncationParams,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<NormEstimate> {
    let ps = dual_exponents(exponents, params)?;
    if n > MAX_DOMAIN {
        check_domain(n)?;
    }
    let exponents = exponents.to_dual();
    let zero = || NormEstimate {
        lower_bound: 0.0,
        extremizers: vec![Signal::zero(); params.k + 1],
        exponents: exponents.clone(),
        params: *params,
        iterations: 0,
        converged: true,
        seed,
        method: Method::Indicator,
        restart_scores: Vec::new(),
        objective_history: Vec::new(),
        monotonicity_defect: 0.0,
    };
    if n == 0 || trials == 0 {
        return Ok(zero());
    }
    let results: Vec<(f64, Vec<Signal>)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = seeded(derive_seed(seed, trial as u64));
            let sets: Vec<IndicatorSet> = (0..ps.len()).map(|_| random_set(&mut rng, n)).collect();
            let fs: Vec<Signal> = sets.iter().map(IndicatorSet::to_signal).collect();
            let denom: f64 = sets.iter().zip(&ps).map(|(e, p)| (e.len() as f64).powf(1.0 / p)).product();
            let value = dual_form(&fs, params).map(|l| l.norm() / denom);
            value.map(|v| (v, fs))
        })
        .collect::<Result<_>>()?;
    let restart_scores: Vec<f64> = results.iter().map(|r| r.0).collect();
    let best = (0..results.len())
        .max_by(|&a, &b| results[a].0.total_cmp(&results[b].0).then(b.cmp(&a)))
        .expect("trials > 0");
    let (lower_bound, extremizers) = results.into_iter().nth(best).expect("index in range");
    Ok(NormEstimate {
        lower_bound,
        extremizers,
        iterations: trials,
        restart_scores,
        ..zero()
    })
}

/// `S(θ) = Σ_{t=t_min}^{t_max} sin(2πtθ)/t`, so that `|m(θ)| = 2|S(θ)|`.
fn sine_sum(t_min: i64, t_max: i64, theta: f64) -> f64 {
    (t_min..=t_max)
        .map(|t| ((t as f64 * theta).rem_euclid(1.0) * 2.0 * PI).sin() / t as f64)
        .sum()
}

/// `|S|` on `θ_j = j/G` for `0 ≤ j ≤ G/2`; frequencies alias exactly mod `G`.
fn sine_sum_grid(t_min: i64, t_max: i64, g: usize) -> Vec<f64> {
    let mut buf = vec![ZERO; g];
    for t in t_min..=t_max {
        buf[(t as usize) % g] += Complex64::new(1.0 / t as f64, 0.0);
    }
    FftPlanner::new().plan_fft_inverse(g).process(&mut buf);
    buf[..=g / 2].iter().map(|z| z.im.abs()).collect()
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
        if b - a < 1e-15 {
            break;
        }
    }
    fc.max(fd)
}

fn refined_sup(t_min: i64, t_max: i64, g: usize) -> f64 {
    let grid = sine_sum_grid(t_min, t_max, g);
    let mut peaks: Vec<usize> = (1..grid.len() - 1)
        .filter(|&j| grid[j] >= grid[j - 1] && grid[j] >= grid[j + 1])
        .collect();
    peaks.sort_by(|&a, &b| grid[b].total_cmp(&grid[a]).then(a.cmp(&b)));
    peaks.truncate(8);
    let step = 1.0 / g as f64;
    let mut best = grid.iter().copied().fold(0.0, f64::max);
    for j in peaks {
        let centre = j as f64 * step;
        let local = golden_max(|th| sine_sum(t_min, t_max, th).abs(), centre - step, centre + step);
        best = best.max(local);
    }
    2.0 * best
}

/// `sup_θ |m(θ)|` for `m(θ) = Σ_{r ≤ |t| ≤ R} e^{−2πitθ}/t`, the `ℓ²(ℤ)`
/// operator norm of the linear truncated transform.
///
/// Grid maxima are refined locally by golden-section search; the grid is
/// doubled until two successive estimates agree to [`MULTIPLIER_TOLERANCE`].
pub fn multiplier_norm_k1(params: &TruncationParams, grid_points: usize) -> Result<f64> {
    if params.k != 1 {
        return Err(Error::InvalidArgument(format!("multiplier norm needs k = 1, got {}", params.k)));
    }
    if grid_points < MIN_GRID_POINTS {
        return Err(Error::InvalidArgument(format!(
            "grid must have at least {MIN_GRID_POINTS} points, got {grid_points}"
        )));
    }
    let (t_min, t_max) = (params.t_min(), params.t_max());
    if t_max < t_min {
        return Ok(0.0);
    }
    let mut g = grid_points.max((8 * t_max as usize).next_power_of_two());
    let mut previous = refined_sup(t_min, t_max, g);
    for _ in 0..6 {
        g *= 2;
        let next = refined_sup(t_min, t_max, g);
        if (next - previous).abs() < MULTIPLIER_TOLERANCE {
            return Ok(next);
        }
        previous = next;
    }
    Err(Error::NotConverged("multiplier grid refinement"))
}

/// For each ratio, block ascent and indicator search with `r = 1`,
/// `R = ratio`; the larger bound is reported. Point `i` uses the seed
/// `derive_seed(seed, i)`.
pub fn growth_curve(
    exponents: &HolderExponents,
    ratios: &[f64],
    n: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<Vec<CurvePoint>> {
    if ratios.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::InvalidArgument("ratios must be strictly increasing".into()));
    }
    let k = exponents.k();
    let params: Vec<TruncationParams> = ratios
        .iter()
        .map(|&ratio| TruncationParams::new(1.0, ratio, k))
        .collect::<Result<_>>()?;
    dual_exponents(exponents, &params.first().copied().unwrap_or(TruncationParams::new(1.0, 1.0, k)?))?;
    check_domain(n)?;
    let inner = SearchOptions { workers: 0, ..*opts };
    in_pool(opts.workers, || {
        params
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let point_seed = derive_seed(seed, i as u64);
                let ascent = alternating_maximize_with(exponents, p, n, point_seed, &inner)?;
                let floor = indicator_search(exponents, p, n, opts.trials, point_seed)?;
                let best = if floor.lower_bound > ascent.lower_bound { floor } else { ascent };
                let trivial = kernel_mass(p);
                Ok(CurvePoint {
                    ratio: p.big_r,
                    lower_bound: best.lower_bound,
                    trivial,
                    normalized: if trivial > 0.0 { best.lower_bound / trivial } else { 0.0 },
                    method: best.method,
                    seed: point_seed,
                    iterations: best.iterations,
                })
            })
            .collect()
    })
}

//! The discrete truncated `k`-linear Hilbert transform
//!
//! `H_{k,r,R}(f_1, …, f_k)(x) = Σ_{r ≤ |t| ≤ R} f_1(x+t) ⋯ f_k(x+kt) / t`,
//! its dual form, the kernel mass behind the trivial bound, and the
//! single-scale weighted forms used by the dyadic decomposition.
//!
//! Sums over `t` are taken in symmetric pairs `(t, −t)` so that the odd
//! cancellation of the kernel happens before any accumulation.

use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dyadic::bumps::BumpPair;
use crate::error::{Error, Result};
use crate::gowers::{gowers_norm_cyclic, is_prime};
use crate::signals::{lp_norm, CyclicSignal, HolderExponents, Signal};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Truncation `r ≤ |t| ≤ R` of the kernel `1/t`, for a `k`-linear transform.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationParams {
    pub r: f64,
    #[serde(rename = "R")]
    pub big_r: f64,
    pub k: usize,
}

impl TruncationParams {
    pub fn new(r: f64, big_r: f64, k: usize) -> Result<Self> {
        if !(r.is_finite() && big_r.is_finite() && r >= 1.0 && big_r >= r) {
            return Err(Error::Truncation { r, big_r });
        }
        if k == 0 {
            return Err(Error::InvalidArgument("k must be positive".into()));
        }
        Ok(Self { r, big_r, k })
    }

    /// Smallest `t > 0` in the kernel support.
    pub fn t_min(&self) -> i64 {
        self.r.ceil() as i64
    }

    /// Largest `t > 0` in the kernel support (may be below `t_min`).
    pub fn t_max(&self) -> i64 {
        self.big_r.floor() as i64
    }

    pub fn ratio(&self) -> f64 {
        self.big_r / self.r
    }
}

/// Scale `n` (length `2^n`) and position `j` of a single-scale window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingleScaleWindow {
    pub n: u32,
    pub j: i64,
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `K(r, R) = Σ_{t ∈ ℤ, r ≤ |t| ≤ R} 1/|t|`, the discrete analogue of `2 log(R/r)`.
pub fn kernel_mass(params: &TruncationParams) -> f64 {
    let (lo, hi) = (params.t_min(), params.t_max());
    if hi < lo {
        return 0.0;
    }
    compensated_sum((lo..=hi).rev().map(|t| 2.0 / t as f64))
}

fn check_arity(fs: &[Signal], expected: usize) -> Result<()> {
    if fs.len() != expected {
        Err(Error::Arity {
            expected,
            got: fs.len(),
        })
    } else {
        Ok(())
    }
}

#[inline]
fn product_along(fs: &[Signal], x: i64, t: i64, first: usize) -> Complex64 {
    let mut prod = Complex64::new(1.0, 0.0);
    for (i, f) in fs.iter().enumerate() {
        prod *= f.get(x + (i + first) as i64 * t);
        if prod == ZERO {
            break;
        }
    }
    prod
}

/// Indices `x` where `H_{k,r,R}(f_1, …, f_k)` can be nonzero.
///
/// Each factor forces `x + it ∈ supp f_i` with `|t| ≤ R`, so the support lies
/// in `⋂_i [lo_i − iR, hi_i + iR]`.
pub fn output_support(fs: &[Signal], params: &TruncationParams) -> Option<RangeInclusive<i64>> {
    let t_max = params.t_max();
    if t_max < params.t_min() {
        return None;
    }
    let mut lo = i64::MIN;
    let mut hi = i64::MAX;
    for (i, f) in fs.iter().enumerate() {
        let (a, b) = f.support()?;
        let reach = (i as i64 + 1) * t_max;
        lo = lo.max(a - reach);
        hi = hi.min(b + reach);
    }
    (lo <= hi).then_some(lo..=hi)
}

fn transform_at(fs: &[Signal], params: &TruncationParams, x: i64, lo1: i64, hi1: i64) -> Complex64 {
    let t_min = params.t_min();
    let t_max = params.t_max();
    let mut acc = ZERO;
    // positive t with x + t in supp f_1, or negative t with x - t in supp f_1
    let pos = (lo1 - x).max(t_min)..=(hi1 - x).min(t_max);
    let neg = (x - hi1).max(t_min)..=(x - lo1).min(t_max);
    let lo = (*pos.start()).min(*neg.start());
    let hi = (*pos.end()).max(*neg.end());
    for t in lo..=hi {
        let plus = if pos.contains(&t) { product_along(fs, x, t, 1) } else { ZERO };
        let minus = if neg.contains(&t) { product_along(fs, x, -t, 1) } else { ZERO };
        acc += (plus - minus) / t as f64;
    }
    acc
}

/// `x ↦ Σ_{r ≤ |t| ≤ R} f_1(x+t) ⋯ f_k(x+kt) / t` sampled on `window`.
pub fn truncated_transform(
    fs: &[Signal],
    params: &TruncationParams,
    window: RangeInclusive<i64>,
) -> Result<Signal> {
    check_arity(fs, params.k)?;
    let offset = *window.start();
    let Some((lo1, hi1)) = fs[0].support() else {
        return Signal::new(offset, vec![ZERO; window.count()]);
    };
    if fs.iter().any(Signal::is_zero) {
        return Signal::new(offset, vec![ZERO; window.count()]);
    }
    let values = window.map(|x| transform_at(fs, params, x, lo1, hi1)).collect();
    Signal::new(offset, values)
}

/// The transform on its full output support.
pub fn truncated_transform_full(fs: &[Signal], params: &TruncationParams) -> Result<Signal> {
    check_arity(fs, params.k)?;
    match output_support(fs, params) {
        None => Ok(Signal::zero()),
        Some(window) => truncated_transform(fs, params, window),
    }
}

/// `Λ = Σ_{r ≤ |t| ≤ R} Σ_x f_0(x) f_1(x+t) ⋯ f_k(x+kt) / t`.
pub fn dual_form(fs: &[Signal], params: &TruncationParams) -> Result<Complex64> {
    check_arity(fs, params.k + 1)?;
    let (Some((lo0, hi0)), Some((lo1, hi1))) = (fs[0].support(), fs[1].support()) else {
        return Ok(ZERO);
    };
    let mut total = ZERO;
    for x in lo0..=hi0 {
        let f0 = fs[0].get(x);
        if f0 == ZERO {
            continue;
        }
        total += f0 * transform_at(&fs[1..], params, x, lo1, hi1);
    }
    Ok(total)
}

/// Both sides of `‖H_{k,r,R}(f)‖_p ≤ K(r, R) Π_i ‖f_i‖_{p_i}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrivialBound {
    pub lhs: f64,
    pub rhs: f64,
}

impl TrivialBound {
    /// `lhs ≤ rhs (1 + rel)`.
    pub fn holds(&self, rel: f64) -> bool {
        self.lhs <= self.rhs + rel * self.rhs
    }
}

pub fn trivial_bound_check(
    fs: &[Signal],
    params: &TruncationParams,
    exponents: &HolderExponents,
) -> Result<TrivialBound> {
    check_arity(fs, params.k)?;
    let HolderExponents::Primal { exponents: ps, p } = exponents.to_primal() else {
        unreachable!("to_primal returns the primal form");
    };
    if ps.len() != params.k {
        return Err(Error::Arity {
            expected: params.k,
            got: ps.len(),
        });
    }
    let out = truncated_transform_full(fs, params)?;
    let lhs = lp_norm(&out, p)?;
    let mut rhs = kernel_mass(params);
    for (f, &q) in fs.iter().zip(&ps) {
        rhs *= lp_norm(f, q)?;
    }
    Ok(TrivialBound { lhs, rhs })
}

/// `Σ_{x,t} f_0(x) f_1(x+t) ⋯ f_k(x+kt) ψ(t/2^n) φ(2^{−n}x − j)`.
///
/// Restricted to `2^{n−1} ≤ |t| ≤ 2^{n+1}` and `|2^{−n}x − j| ≤ 1`, the
/// supports of the two bumps. Since `ψ` is odd, the `t` and `−t` terms are
/// combined as `ψ(t/2^n) (P(t) − P(−t))`.
pub fn single_scale_form(fs: &[Signal], w: SingleScaleWindow, bumps: &BumpPair) -> Result<Complex64> {
    if fs.len() < 2 {
        return Err(Error::Arity {
            expected: 2,
            got: fs.len(),
        });
    }
    let (Some((lo0, hi0)), Some((lo1, hi1))) = (fs[0].support(), fs[1].support()) else {
        return Ok(ZERO);
    };
    let len = 1i64 << w.n;
    let scale = len as f64;
    let x_lo = lo0.max((w.j - 1) * len);
    let x_hi = hi0.min((w.j + 1) * len);
    let t_lo = (len + 1) / 2;
    let t_hi = 2 * len;
    let psi: Vec<f64> = (t_lo..=t_hi).map(|t| bumps.psi(t as f64 / scale)).collect();
    let mut total = ZERO;
    for x in x_lo..=x_hi {
        let f0 = fs[0].get(x);
        if f0 == ZERO {
            continue;
        }
        let weight = bumps.phi(x as f64 / scale - w.j as f64);
        if weight == 0.0 {
            continue;
        }
        let mut inner = ZERO;
        for (t, &psi_t) in (t_lo..=t_hi).zip(&psi) {
            if psi_t == 0.0 {
                continue;
            }
            let plus = if (lo1..=hi1).contains(&(x + t)) { product_along(&fs[1..], x, t, 1) } else { ZERO };
            let minus = if (lo1..=hi1).contains(&(x - t)) { product_along(&fs[1..], x, -t, 1) } else { ZERO };
            inner += (plus - minus) * psi_t;
        }
        total += f0 * weight * inner;
    }
    Ok(total)
}

/// `|1_{r ≤ |t| ≤ R}/t − Σ_{n: r ≤ 2^n ≤ R} 2^{−n} ψ(t/2^n)|`.
///
/// Zero for `2r ≤ |t| ≤ R/2`, where the dyadic pieces telescope to `1/t`.
pub fn dyadic_synthesis_residual(params: &TruncationParams, bumps: &BumpPair, t: i64) -> Result<f64> {
    if t == 0 {
        return Err(Error::ZeroShift);
    }
    let abs = t.unsigned_abs() as f64;
    let exact = if abs >= params.r && abs <= params.big_r { 1.0 / t as f64 } else { 0.0 };
    let synthesized = compensated_sum(dyadic_scales(params).map(|n| {
        let s = (n as f64).exp2();
        bumps.psi(t as f64 / s) / s
    }));
    Ok((exact - synthesized).abs())
}

/// Scales `n ≥ 0` with `r ≤ 2^n ≤ R`.
pub fn dyadic_scales(params: &TruncationParams) -> impl Iterator<Item = u32> {
    let mut lo = 0u32;
    while ((lo as f64).exp2()) < params.r {
        lo += 1;
    }
    let big_r = params.big_r;
    (lo..63).take_while(move |&n| (n as f64).exp2() <= big_r)
}

fn next_prime(mut n: usize) -> usize {
    while !is_prime(n) {
        n += 1;
    }
    n
}

/// Constant `C_w` with
/// `|single_scale_form(f_0, …, f_k)| ≤ C_w N² min_i ‖f_i‖_{U^d([N])}`,
/// `d = max(k, 2)`, for `|f_i| ≤ 1` supported on `[1, N]`.
///
/// Expanding both bumps by Fourier inversion costs `‖ψ̂‖₁ ‖φ̂‖₁`; the
/// remaining modulated pattern sum is moved to `ℤ/N'ℤ` with `N'` the first
/// prime `≥ 2^d N` (no wraparound), where the von Neumann inequality holds with
/// constant one. Linear phases leave `U^d` of data on `[N]` unchanged for
/// `d ≥ 2`, and for `k = 1` the `U^1` bound is dominated by `U^2`. Converting
/// back to `U^d([N])` gives
/// `C_w = ‖ψ̂‖₁ ‖φ̂‖₁ (N'/N)² ‖1_{[N]}‖_{U^d(ℤ/N'ℤ)}`.
pub fn weighted_von_neumann_constant(bumps: &BumpPair, k: usize, n: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    let d = k.max(2);
    let modulus = next_prime(n << d);
    let ones = CyclicSignal::embed(&Signal::indicator_interval(1, n as i64), modulus)?;
    let ones_norm = gowers_norm_cyclic(&ones, d as u32)?.value;
    let (psi_l1, phi_l1) = bumps.fourier_l1_norms();
    let ratio = modulus as f64 / n as f64;
    Ok(psi_l1 * phi_l1 * ratio * ratio * ones_norm)
}

/// `Σ_{n: N/A ≤ 2^n ≤ N} Σ_{j=0}^{N/2^n − 1} 2^{−n} |single_scale_form(f, (n, j))|`.
pub fn scale_aggregated_sum(fs: &[Signal], n_len: usize, a: f64, bumps: &BumpPair) -> Result<f64> {
    let mut total = 0.0;
    for n in 0..63u32 {
        let len = 1usize << n;
        if len > n_len {
            break;
        }
        if (len as f64) < n_len as f64 / a {
            continue;
        }
        for j in 0..(n_len / len) as i64 {
            total += single_scale_form(fs, SingleScaleWindow { n, j }, bumps)?.norm() / len as f64;
        }
    }
    Ok(total)
}

/// `C'_w` with `scale_aggregated_sum ≤ C'_w (log₂ A + 1) N^{1/2} min_i ‖f_i‖_2`
/// for `|f_i| ≤ 1` supported on `[1, N]`.
///
/// For fixed `y`, scale `n` and slot `i`, the pairs `(x, t)` with `x + it = y`
/// inside one window number at most `3·2^n + 2` (one per `t`), and each such
/// pair meets at most 3 windows `j`. Bounding the other factors by one and
/// the bumps by their sup-norms gives `2^{−n} Σ_j |form| ≤ 3 (3 + 2^{1−n})
/// ψ_sup φ_sup ‖f_i‖_1 ≤ 15 ψ_sup φ_sup ‖f_i‖_1`; Cauchy–Schwarz on `[N]`
/// finishes.
pub fn scale_aggregated_constant(bumps: &BumpPair) -> f64 {
    15.0 * bumps.psi_sup() * bumps.phi_sup()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::bumps::build_bumps;
    use num_rational::Rational64;
    use rand::Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn params(r: f64, big_r: f64, k: usize) -> TruncationParams {
        TruncationParams::new(r, big_r, k).unwrap()
    }

    #[test]
    fn kernel_mass_examples() {
        assert_eq!(kernel_mass(&params(1.0, 2.0, 1)), 3.0);
        assert!(TruncationParams::new(3.0, 2.9, 1).is_err());
        assert!(TruncationParams::new(0.5, 2.0, 1).is_err());
        let k = kernel_mass(&params(1.0, 1000.0, 1));
        let mut oracle = 0.0;
        for t in 1..=1000 {
            oracle += 2.0 / t as f64;
        }
        assert!((k - oracle).abs() < 1e-12);
        assert!((k - 2.0 * 1000f64.ln()).abs() <= 2.0);
        // no integer in [1.2, 1.8]
        assert_eq!(kernel_mass(&params(1.2, 1.8, 1)), 0.0);
    }

    #[test]
    fn transform_examples() {
        let p = params(1.0, 2.0, 1);
        let out = truncated_transform(&[Signal::delta(0)], &p, -4..=4).unwrap();
        for x in -4..=4i64 {
            let expected = if (1..=2).contains(&x.abs()) { -1.0 / x as f64 } else { 0.0 };
            assert_eq!(out.get(x), c(expected));
        }
        let zero = truncated_transform(&[Signal::zero()], &p, -4..=4).unwrap();
        assert!(zero.is_zero());
        let p2 = params(1.0, 9.0, 2);
        let both = truncated_transform(&[Signal::delta(0), Signal::delta(0)], &p2, -30..=30).unwrap();
        assert!(both.is_zero());
        assert!(truncated_transform(&[Signal::delta(0)], &p2, 0..=1).is_err());
    }

    #[test]
    fn output_support_covers_transform() {
        let mut rng = crate::rng::seeded(2);
        for _ in 0..20 {
            let k = rng.gen_range(1..=3);
            let p = params(1.0, rng.gen_range(1.0..8.0), k);
            let fs: Vec<Signal> = (0..k)
                .map(|_| Signal::from_real(rng.gen_range(-5..5), &[1.0, -0.5, 2.0]).unwrap())
                .collect();
            let full = truncated_transform_full(&fs, &p).unwrap();
            let wide = truncated_transform(&fs, &p, -60..=60).unwrap();
            assert_eq!(full, wide);
        }
    }

    #[test]
    fn odd_kernel_against_even_data() {
        let f = Signal::from_real(-3, &[0.5, 2.0, 1.0, 7.0, 1.0, 2.0, 0.5]).unwrap();
        let out = truncated_transform(&[f], &params(1.0, 5.0, 1), 0..=0).unwrap();
        assert_eq!(out.get(0), ZERO);
    }

    #[test]
    fn dual_form_examples() {
        let p = params(1.0, 2.0, 1);
        assert_eq!(dual_form(&[Signal::delta(0), Signal::delta(1)], &p).unwrap(), c(1.0));
        let even = Signal::from_real(-2, &[1.0, 3.0, 4.0, 3.0, 1.0]).unwrap();
        let v = dual_form(&[even.clone(), even], &params(1.0, 3.0, 1)).unwrap();
        assert!(v.norm() <= kernel_mass(&params(1.0, 3.0, 1)) * 5.0);
        assert!(dual_form(&[Signal::delta(0)], &p).is_err());
    }

    #[test]
    fn dual_form_equals_pairing_with_transform() {
        let mut rng = crate::rng::seeded(4);
        for _ in 0..30 {
            let k = rng.gen_range(1..=3);
            let p = params(rng.gen_range(1.0..3.0), rng.gen_range(3.0..12.0), k);
            let fs: Vec<Signal> = (0..=k)
                .map(|_| {
                    let vals = (0..12)
                        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                        .collect();
                    Signal::new(rng.gen_range(-6..6), vals).unwrap()
                })
                .collect();
            let lambda = dual_form(&fs, &p).unwrap();
            let out = truncated_transform_full(&fs[1..], &p).unwrap();
            let paired: Complex64 = fs[0].iter().map(|(x, v)| v * out.get(x)).sum();
            let scale = fs[0].iter().map(|(x, v)| v.norm() * out.get(x).norm()).sum::<f64>();
            assert!((lambda - paired).norm() <= 1e-10 * scale.max(1e-300));
        }
    }

    #[test]
    fn paired_summation_matches_exact_rationals() {
        let mut rng = crate::rng::seeded(8);
        for _ in 0..20 {
            let k = rng.gen_range(1..=2);
            let p = params(1.0, rng.gen_range(2..10) as f64, k);
            let ints: Vec<Vec<i64>> = (0..=k).map(|_| (0..10).map(|_| rng.gen_range(-3..=3)).collect()).collect();
            let fs: Vec<Signal> = ints
                .iter()
                .map(|v| Signal::from_real(0, &v.iter().map(|&a| a as f64).collect::<Vec<_>>()).unwrap())
                .collect();
            let get = |i: usize, x: i64| -> i64 {
                if (0..10).contains(&x) { ints[i][x as usize] } else { 0 }
            };
            let mut exact = Rational64::from_integer(0);
            for t in (-(p.t_max())..=p.t_max()).filter(|t| t.abs() >= p.t_min()) {
                for x in -40..40 {
                    let prod: i64 = (0..=k).map(|i| get(i, x + i as i64 * t)).product();
                    exact += Rational64::new(prod, t);
                }
            }
            let got = dual_form(&fs, &p).unwrap();
            let exact_f = *exact.numer() as f64 / *exact.denom() as f64;
            assert!((got.re - exact_f).abs() < 1e-12 * exact_f.abs().max(1.0));
            assert_eq!(got.im, 0.0);
        }
    }

    #[test]
    fn trivial_bound_examples() {
        let p = params(1.0, 2.0, 1);
        let ex = HolderExponents::primal(vec![2.0], 2.0).unwrap();
        let zero = trivial_bound_check(&[Signal::zero()], &p, &ex).unwrap();
        assert_eq!((zero.lhs, zero.rhs), (0.0, 0.0));
        let tb = trivial_bound_check(&[Signal::delta(0)], &p, &ex).unwrap();
        assert!((tb.lhs - 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(tb.rhs, 3.0);
        assert!(tb.holds(1e-9));
    }

    #[test]
    fn single_scale_examples() {
        let bumps = build_bumps(1.0).unwrap();
        for n in 0..=5u32 {
            let len = 1i64 << n;
            let j = 3;
            let k = 2;
            let pad = 2 * k as i64 * 2 * len;
            let ones = Signal::indicator_interval((j - 1) * len - pad, (j + 2) * len + pad);
            let v = single_scale_form(&vec![ones; k + 1], SingleScaleWindow { n, j }, &bumps).unwrap();
            assert_eq!(v, ZERO);
        }
        let w = SingleScaleWindow { n: 2, j: 0 };
        let v = single_scale_form(&[Signal::delta(0), Signal::zero()], w, &bumps).unwrap();
        assert_eq!(v, ZERO);
    }

    #[test]
    fn single_scale_matches_brute_force() {
        let bumps = build_bumps(1.0).unwrap();
        let mut rng = crate::rng::seeded(12);
        let w = SingleScaleWindow { n: 4, j: 0 };
        for _ in 0..10 {
            let k = rng.gen_range(1..=3);
            let sets: Vec<Vec<i64>> = (0..=k)
                .map(|_| (0..rng.gen_range(1..=30)).map(|_| rng.gen_range(-40..40)).collect())
                .collect();
            let fs: Vec<Signal> = sets
                .iter()
                .map(|s| crate::signals::IndicatorSet::new(s.iter().copied()).to_signal())
                .collect();
            let got = single_scale_form(&fs, w, &bumps).unwrap();
            let mut oracle = 0.0;
            for x in -200..=200i64 {
                for t in -200..=200i64 {
                    let prod: f64 = (0..=k).map(|i| fs[i].get(x + i as i64 * t).re).product();
                    if prod != 0.0 {
                        oracle += prod * bumps.psi(t as f64 / 16.0) * bumps.phi(x as f64 / 16.0);
                    }
                }
            }
            assert!((got.re - oracle).abs() < 1e-11 * oracle.abs().max(1.0));
            assert_eq!(got.im, 0.0);
        }
    }

    #[test]
    fn synthesis_residual_examples() {
        let bumps = build_bumps(1.0).unwrap();
        let p = params(1.0, 1024.0, 1);
        assert!(dyadic_synthesis_residual(&p, &bumps, 64).unwrap() < 1e-15);
        assert_eq!(dyadic_synthesis_residual(&p, &bumps, 3000).unwrap(), 0.0);
        assert_eq!(dyadic_synthesis_residual(&p, &bumps, 0), Err(Error::ZeroShift));
        for (r, big_r) in [(1.0, 1024.0), (3.0, 200.0), (5.5, 77.0)] {
            let p = params(r, big_r, 1);
            for t in (-(4 * big_r as i64)..=4 * big_r as i64).filter(|&t| t != 0) {
                let res = dyadic_synthesis_residual(&p, &bumps, t).unwrap();
                let abs = t.abs() as f64;
                if abs >= 2.0 * r && abs <= big_r / 2.0 {
                    assert!(res < 1e-15, "interior t = {t}: {res}");
                }
                assert!(res <= 1.0 / r + 1.0 / big_r, "t = {t}: {res}");
            }
        }
    }

    #[test]
    fn dyadic_scales_respect_bounds() {
        let scales: Vec<u32> = dyadic_scales(&params(3.0, 40.0, 1)).collect();
        assert_eq!(scales, vec![2, 3, 4, 5]);
        let scales: Vec<u32> = dyadic_scales(&params(1.0, 1.0, 1)).collect();
        assert_eq!(scales, vec![0]);
    }
}

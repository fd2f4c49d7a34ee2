//! Gowers uniformity norms on `ℤ/Nℤ` and on intervals `[N]`.
//!
//! `‖f‖_{U^d}^{2^d}` is evaluated two ways: a direct sum over all
//! parallelepipeds (reference, small `N` only) and the recursion
//! `‖f‖_{U^d}^{2^d} = E_h ‖Δ_h f‖_{U^{d-1}}^{2^{d-1}}` bottoming out at
//! `‖f‖_{U^1} = |E f|`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{fourier_coefficients, from_coefficients};
use crate::signals::{pattern_sum, CyclicSignal, Signal};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest negative roundoff tolerated in a `2^d`-th power before it is treated as a bug.
pub const NEGATIVE_POWER_TOLERANCE: f64 = 1e-12;

/// Slack on `|f| ≤ 1` preconditions.
pub const BOUNDED_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GowersNormResult {
    pub degree: u32,
    pub value: f64,
    /// `value^{2^d}`, before taking the root.
    pub raw_power: f64,
}

impl GowersNormResult {
    fn from_raw(degree: u32, raw: f64) -> Result<Self> {
        if raw.is_nan() || raw < -NEGATIVE_POWER_TOLERANCE {
            return Err(Error::NegativeGowersPower(raw));
        }
        let raw_power = raw.max(0.0);
        Ok(Self {
            degree,
            value: raw_power.powf(1.0 / f64::from(1u32 << degree)),
            raw_power,
        })
    }
}

/// `Δ_h f(x) = f(x + h) · conj(f(x))` with indices mod `N`.
pub fn difference_op(f: &CyclicSignal, h: i64) -> CyclicSignal {
    let n = f.modulus();
    let values = f.values();
    let shift = h.rem_euclid(n as i64) as usize;
    let out = (0..n)
        .map(|x| values[(x + shift) % n] * values[x].conj())
        .collect();
    CyclicSignal::new(out).expect("products of finite values are finite")
}

fn check_degree(d: u32) -> Result<()> {
    if d == 0 {
        Err(Error::ZeroDegree)
    } else {
        Ok(())
    }
}

/// Pairwise sum; merge order depends only on the input length.
fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

fn raw_recursive(values: &[Complex64], d: u32) -> f64 {
    let n = values.len();
    if d == 1 {
        return (values.iter().sum::<Complex64>() / n as f64).norm_sqr();
    }
    let mut diff = vec![ZERO; n];
    let mut total = 0.0;
    for h in 0..n {
        let mut nonzero = false;
        for x in 0..n {
            let v = values[(x + h) % n] * values[x].conj();
            nonzero |= v != ZERO;
            diff[x] = v;
        }
        if nonzero {
            total += raw_recursive(&diff, d - 1);
        }
    }
    total / n as f64
}

/// `‖f‖_{U^d(ℤ/Nℤ)}` by the difference recursion.
///
/// The outermost shift loop runs on the rayon pool; the partial results are
/// merged pairwise in shift order, so the value does not depend on the
/// number of workers.
pub fn gowers_norm_cyclic(f: &CyclicSignal, d: u32) -> Result<GowersNormResult> {
    check_degree(d)?;
    let values = f.values();
    let n = values.len();
    let raw = if d == 1 {
        raw_recursive(values, 1)
    } else {
        let per_shift: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|h| {
                let diff: Vec<Complex64> = (0..n)
                    .map(|x| values[(x + h) % n] * values[x].conj())
                    .collect();
                if diff.iter().all(|v| *v == ZERO) {
                    0.0
                } else {
                    raw_recursive(&diff, d - 1)
                }
            })
            .collect();
        pairwise_sum(&per_shift) / n as f64
    };
    GowersNormResult::from_raw(d, raw)
}

/// `‖f‖_{U^d(ℤ/Nℤ)}` as the literal average of `Δ_{h_1} ⋯ Δ_{h_d} f(x)`
/// over `(h_1, …, h_d, x) ∈ (ℤ/Nℤ)^{d+1}`. Cost `N^{d+1} 2^d`.
pub fn gowers_norm_cyclic_direct(f: &CyclicSignal, d: u32) -> Result<GowersNormResult> {
    check_degree(d)?;
    let n = f.modulus();
    let values = f.values();
    let d = d as usize;
    let vertices = 1usize << d;
    let per_first: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|h1| {
            let mut h = vec![0usize; d];
            h[0] = h1;
            let mut acc = ZERO;
            loop {
                for x in 0..n {
                    let mut prod = Complex64::new(1.0, 0.0);
                    for omega in 0..vertices {
                        let mut pos = x;
                        for (bit, hb) in h.iter().enumerate() {
                            if omega >> bit & 1 == 1 {
                                pos += hb;
                            }
                        }
                        let v = values[pos % n];
                        // a vertex is conjugated once per zero bit of ω
                        prod *= if (d as u32 - omega.count_ones()) % 2 == 1 { v.conj() } else { v };
                    }
                    acc += prod;
                }
                // odometer over h_2, …, h_d
                let mut i = 1;
                while i < d {
                    h[i] += 1;
                    if h[i] < n {
                        break;
                    }
                    h[i] = 0;
                    i += 1;
                }
                if i == d {
                    break;
                }
            }
            acc
        })
        .collect();
    let total: Complex64 = per_first.iter().sum();
    let raw = total.re / (n as f64).powi(d as i32 + 1);
    GowersNormResult::from_raw(d as u32, raw)
}

/// `‖f‖_{U^d([N])}` with the embedding modulus `N' = 2^d N`.
pub fn gowers_norm_interval(f: &Signal, d: u32, n: usize) -> Result<GowersNormResult> {
    check_degree(d)?;
    gowers_norm_interval_with_modulus(f, d, n, n << d)
}

/// `‖f‖_{U^d(ℤ/N'ℤ)} / ‖1_{[N]}‖_{U^d(ℤ/N'ℤ)}` for an explicit `N' ≥ 2^d N`.
pub fn gowers_norm_interval_with_modulus(
    f: &Signal,
    d: u32,
    n: usize,
    modulus: usize,
) -> Result<GowersNormResult> {
    check_degree(d)?;
    if n == 0 {
        return Err(Error::ZeroModulus);
    }
    if modulus < n << d {
        return Err(Error::EmbeddingTooSmall {
            modulus,
            min: n << d,
        });
    }
    if let Some((lo, hi)) = f.support() {
        if lo < 1 || hi > n as i64 {
            return Err(Error::SupportOutsideInterval { lo, hi, n });
        }
    }
    let embedded = CyclicSignal::embed(f, modulus)?;
    let ones = CyclicSignal::embed(&Signal::indicator_interval(1, n as i64), modulus)?;
    let num = gowers_norm_cyclic(&embedded, d)?;
    let den = gowers_norm_cyclic(&ones, d)?;
    GowersNormResult::from_raw(d, num.raw_power / den.raw_power)
}

/// Multiplication by the phase `x ↦ e^{2πi x v}`.
pub trait Modulate {
    fn modulate(&self, v: f64) -> Self;
}

fn phase(x: i64, v: f64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * (x as f64 * v).rem_euclid(1.0))
}

impl Modulate for Signal {
    fn modulate(&self, v: f64) -> Self {
        if v == 0.0 {
            return self.clone();
        }
        self.map(|x, value| value * phase(x, v))
    }
}

impl Modulate for CyclicSignal {
    /// Uses representatives `x ∈ [0, N)`; a character of `ℤ/Nℤ` only when `vN ∈ ℤ`.
    fn modulate(&self, v: f64) -> Self {
        if v == 0.0 {
            return self.clone();
        }
        CyclicSignal::from_fn(self.modulus(), |x| self.values()[x] * phase(x as i64, v))
            .expect("unit phases keep values finite")
    }
}

/// Both sides of a von Neumann-type inequality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VonNeumann {
    pub lhs: f64,
    pub rhs: f64,
}

impl VonNeumann {
    pub fn holds(&self, slack: f64) -> bool {
        self.lhs <= self.rhs + slack
    }
}

pub fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

fn check_bounded(sup: f64) -> Result<()> {
    if sup > 1.0 + BOUNDED_TOLERANCE {
        Err(Error::NotBounded(sup))
    } else {
        Ok(())
    }
}

/// `|N^{-2} Σ_{x,t} Π_i f_i(x + it)|` against `min_i ‖f_i‖_{U^k(ℤ/Nℤ)}`, for prime `N > k`.
pub fn von_neumann_check(fs: &[CyclicSignal]) -> Result<VonNeumann> {
    if fs.len() < 2 {
        return Err(Error::Arity {
            expected: 2,
            got: fs.len(),
        });
    }
    let k = fs.len() - 1;
    let n = fs[0].modulus();
    for f in fs {
        if f.modulus() != n {
            return Err(Error::ModulusMismatch(n, f.modulus()));
        }
        check_bounded(f.sup_abs())?;
    }
    if !is_prime(n) || n <= k {
        return Err(Error::NotPrimeModulus(n, k));
    }
    let mut total = ZERO;
    for x in 0..n as i64 {
        for t in 0..n as i64 {
            let mut prod = fs[0].get(x);
            for (i, f) in fs.iter().enumerate().skip(1) {
                prod *= f.get(x + i as i64 * t);
            }
            total += prod;
        }
    }
    let lhs = total.norm() / (n * n) as f64;
    let rhs = fs
        .iter()
        .map(|f| gowers_norm_cyclic(f, k as u32).map(|g| g.value))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(VonNeumann { lhs, rhs })
}

/// Interval form: `N^{-2} |Σ_{x,t ∈ ℤ} Π f_i(x + it)|` against `min_i ‖f_i‖_{U^k([N])}`.
///
/// The inequality holds only up to an unspecified constant, so this returns
/// both sides for ratio tracking rather than a verdict.
pub fn von_neumann_interval(fs: &[Signal], n: usize) -> Result<VonNeumann> {
    if fs.len() < 2 {
        return Err(Error::Arity {
            expected: 2,
            got: fs.len(),
        });
    }
    for f in fs {
        check_bounded(f.sup_abs())?;
    }
    let k = (fs.len() - 1) as u32;
    let lhs = pattern_sum(fs)?.norm() / (n * n) as f64;
    let rhs = fs
        .iter()
        .map(|f| gowers_norm_interval(f, k, n).map(|g| g.value))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(VonNeumann { lhs, rhs })
}

/// Degree-one regularity split `f = f_str + f_sml + f_unf`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct U2Decomposition {
    /// Projection onto the retained frequencies.
    pub structured: CyclicSignal,
    /// Always zero at degree one; kept for the shape of the general statement.
    pub small: CyclicSignal,
    pub uniform: CyclicSignal,
    /// Number of retained frequencies `M`.
    pub mode_count: usize,
    /// Retained frequencies, largest coefficient first.
    pub frequencies: Vec<usize>,
    /// `1 / F(M)`, the promised bound on `‖f_unf‖_{U²}`.
    pub growth_value: f64,
}

/// Splits off the largest Fourier modes until the remainder satisfies
/// `‖f_unf‖_{U²} ≤ 1/F(M)`.
///
/// Uses `‖g‖_{U²}^4 = Σ_ξ |ĝ(ξ)|^4`: dropping modes in decreasing order of
/// `|f̂(ξ)|` gives the smallest possible tail for each `M`. `M = 0` is only
/// returned for `f ≡ 0`; at `M = N` the tail vanishes, so the scan terminates.
pub fn u2_decompose(f: &CyclicSignal, growth: impl Fn(usize) -> f64) -> Result<U2Decomposition> {
    check_bounded(f.sup_abs())?;
    let n = f.modulus();
    let hat = fourier_coefficients(f);
    let zero = CyclicSignal::constant(n, ZERO)?;
    if hat.iter().all(|c| *c == ZERO) {
        return Ok(U2Decomposition {
            structured: zero.clone(),
            small: zero,
            uniform: f.clone(),
            mode_count: 0,
            frequencies: Vec::new(),
            growth_value: 0.0,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| hat[b].norm().total_cmp(&hat[a].norm()).then(a.cmp(&b)));
    // tail[m] = Σ_{i >= m} |f̂(order[i])|^4, accumulated from the small end
    let mut tail = vec![0.0; n + 1];
    for m in (0..n).rev() {
        tail[m] = tail[m + 1] + hat[order[m]].norm_sqr().powi(2);
    }
    let mut chosen = None;
    for (m, &rest) in tail.iter().enumerate().skip(1) {
        let grow = growth(m);
        if !(grow >= m as f64 && grow >= 1.0) {
            return Err(Error::Growth(m));
        }
        if rest.powf(0.25) <= 1.0 / grow {
            chosen = Some((m, 1.0 / grow));
            break;
        }
    }
    let (m, growth_value) = chosen.ok_or(Error::NotConverged("u2_decompose"))?;
    let frequencies = order[..m].to_vec();
    let mut kept = vec![ZERO; n];
    for &xi in &frequencies {
        kept[xi] = hat[xi];
    }
    let structured = CyclicSignal::new(from_coefficients(&kept))?;
    let uniform = f.sub(&structured)?;
    Ok(U2Decomposition {
        structured,
        small: zero,
        uniform,
        mode_count: m,
        frequencies,
        growth_value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_bounded(rng: &mut impl Rng, n: usize) -> CyclicSignal {
        CyclicSignal::from_fn(n, |_| {
            Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .unwrap()
    }

    #[test]
    fn difference_examples() {
        let ones = CyclicSignal::constant(9, c(1.0)).unwrap();
        assert_eq!(difference_op(&ones, 4), ones);
        let n = 9;
        let chi = CyclicSignal::character(n, 1).unwrap();
        for h in [-3i64, 0, 2, 11] {
            let expected = Complex64::from_polar(1.0, std::f64::consts::TAU * h as f64 / n as f64);
            for v in difference_op(&chi, h).values() {
                assert!((v - expected).norm() < 1e-14);
            }
        }
        let mut rng = crate::rng::seeded(1);
        let f = random_bounded(&mut rng, 11);
        for (a, b) in difference_op(&f, 0).values().iter().zip(f.values()) {
            assert!((a - c(b.norm_sqr())).norm() < 1e-15);
        }
    }

    #[test]
    fn constant_one_has_unit_norm() {
        let ones = CyclicSignal::constant(10, c(1.0)).unwrap();
        for d in 1..=4 {
            assert_eq!(gowers_norm_cyclic(&ones, d).unwrap().value, 1.0);
            assert!((gowers_norm_cyclic_direct(&ones, d).unwrap().value - 1.0).abs() < 1e-14);
        }
        assert_eq!(gowers_norm_cyclic(&ones, 0), Err(Error::ZeroDegree));
    }

    #[test]
    fn delta_on_z4() {
        let delta = CyclicSignal::new(vec![c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        let direct = gowers_norm_cyclic_direct(&delta, 2).unwrap();
        assert_eq!(direct.raw_power, 4f64.powi(-3));
        let fast = gowers_norm_cyclic(&delta, 2).unwrap();
        assert!((fast.value - 4f64.powf(-0.75)).abs() < 1e-15);
        assert!((fast.value - 0.353553).abs() < 1e-6);
    }

    #[test]
    fn character_has_unit_u2_norm() {
        for n in [7usize, 16, 31] {
            let chi = CyclicSignal::character(n, 3).unwrap();
            // Fourier oracle: a single coefficient of modulus one
            let oracle: f64 = fourier_coefficients(&chi).iter().map(|z| z.norm_sqr().powi(2)).sum();
            let g = gowers_norm_cyclic(&chi, 2).unwrap();
            assert!((g.raw_power - oracle).abs() < 1e-12);
            assert!((g.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn negative_power_clamping() {
        assert_eq!(GowersNormResult::from_raw(2, -5e-13).unwrap().value, 0.0);
        assert!(GowersNormResult::from_raw(2, -1e-9).is_err());
    }

    #[test]
    fn interval_norm_examples() {
        let n = 12;
        let ones = Signal::indicator_interval(1, n as i64);
        for d in 1..=3 {
            assert!((gowers_norm_interval(&ones, d, n).unwrap().value - 1.0).abs() < 1e-12);
            assert_eq!(gowers_norm_interval(&Signal::zero(), d, n).unwrap().value, 0.0);
        }
        assert!(matches!(
            gowers_norm_interval(&Signal::delta(0), 2, n),
            Err(Error::SupportOutsideInterval { .. })
        ));
        assert!(gowers_norm_interval_with_modulus(&ones, 2, n, 4 * n - 1).is_err());
    }

    #[test]
    fn interval_norm_is_independent_of_embedding() {
        let mut rng = crate::rng::seeded(5);
        let n = 16usize;
        for _ in 0..5 {
            let vals: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 }).collect();
            let f = Signal::from_real(1, &vals).unwrap();
            let a = gowers_norm_interval_with_modulus(&f, 2, n, 4 * n).unwrap().value;
            let b = gowers_norm_interval_with_modulus(&f, 2, n, 4 * n + 7).unwrap().value;
            assert!((a - b).abs() <= 1e-9 * a);
        }
    }

    #[test]
    fn von_neumann_examples() {
        let n = 17;
        let ones = CyclicSignal::constant(n, c(1.0)).unwrap();
        let vn = von_neumann_check(&[ones.clone(), ones.clone(), ones.clone()]).unwrap();
        assert!((vn.lhs - 1.0).abs() < 1e-12 && (vn.rhs - 1.0).abs() < 1e-12);
        let chi = CyclicSignal::character(n, 1).unwrap();
        let vn = von_neumann_check(&[chi, ones.clone(), ones.clone()]).unwrap();
        assert!(vn.lhs < 1e-12);
        let composite = CyclicSignal::constant(15, c(1.0)).unwrap();
        assert!(matches!(
            von_neumann_check(&[composite.clone(), composite]),
            Err(Error::NotPrimeModulus(15, 1))
        ));
        let small = CyclicSignal::constant(3, c(1.0)).unwrap();
        assert!(von_neumann_check(&vec![small; 4]).is_err());
        let big = CyclicSignal::constant(n, c(1.5)).unwrap();
        assert!(matches!(von_neumann_check(&[big, ones]), Err(Error::NotBounded(_))));
    }

    #[test]
    fn modulation_examples() {
        let mut rng = crate::rng::seeded(9);
        let f = random_bounded(&mut rng, 13);
        assert_eq!(f.modulate(0.0), f);
        let ones = CyclicSignal::constant(13, c(1.0)).unwrap();
        let chi = CyclicSignal::character(13, 1).unwrap();
        for (a, b) in ones.modulate(1.0 / 13.0).values().iter().zip(chi.values()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn u2_decompose_examples() {
        let chi = CyclicSignal::character(32, 5).unwrap();
        let dec = u2_decompose(&chi, |m| m as f64 + 1.0).unwrap();
        assert_eq!(dec.mode_count, 1);
        assert_eq!(dec.frequencies, vec![5]);
        assert!(dec.uniform.sup_abs() < 1e-14);

        let zero = CyclicSignal::constant(32, c(0.0)).unwrap();
        let dec = u2_decompose(&zero, |m| m as f64 + 1.0).unwrap();
        assert_eq!(dec.mode_count, 0);
        assert_eq!(dec.structured.sup_abs(), 0.0);
        assert_eq!(dec.uniform.sup_abs(), 0.0);

        let big = CyclicSignal::constant(8, c(2.0)).unwrap();
        assert!(u2_decompose(&big, |m| m as f64 + 1.0).is_err());
        assert_eq!(u2_decompose(&chi, |_| 0.5), Err(Error::Growth(1)));
    }
}

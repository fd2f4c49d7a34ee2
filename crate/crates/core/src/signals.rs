//! Finitely supported functions on `ℤ` and on cyclic groups.
//!
//! A [`Signal`] stores a contiguous block of complex values starting at some
//! integer offset; every index outside that block is zero. Two signals are
//! equal when they agree as functions `ℤ → ℂ`, so padding with zeros never
//! changes identity.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A finitely supported function `ℤ → ℂ`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(try_from = "RawSignal")]
pub struct Signal {
    offset: i64,
    values: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawSignal {
    offset: i64,
    values: Vec<Complex64>,
}

impl TryFrom<RawSignal> for Signal {
    type Error = Error;

    fn try_from(raw: RawSignal) -> Result<Self> {
        Signal::new(raw.offset, raw.values)
    }
}

impl Signal {
    pub fn new(offset: i64, values: Vec<Complex64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(offset + i as i64));
            }
        }
        Ok(Self { offset, values })
    }

    pub fn from_real(offset: i64, values: &[f64]) -> Result<Self> {
        Self::new(offset, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Samples `f` on `range`; values outside the range are zero.
    pub fn from_fn(range: RangeInclusive<i64>, mut f: impl FnMut(i64) -> Complex64) -> Result<Self> {
        let offset = *range.start();
        Self::new(offset, range.map(&mut f).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The unit mass at `at`.
    pub fn delta(at: i64) -> Self {
        Self {
            offset: at,
            values: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// The indicator of the integer interval `[lo, hi]`.
    pub fn indicator_interval(lo: i64, hi: i64) -> Self {
        if hi < lo {
            return Self::zero();
        }
        Self {
            offset: lo,
            values: vec![Complex64::new(1.0, 0.0); (hi - lo + 1) as usize],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Number of stored entries (not the support size).
    pub fn stored_len(&self) -> usize {
        self.values.len()
    }

    /// Value at `x`; zero outside the stored block.
    #[inline]
    pub fn get(&self, x: i64) -> Complex64 {
        let i = x - self.offset;
        if i < 0 || i >= self.values.len() as i64 {
            ZERO
        } else {
            self.values[i as usize]
        }
    }

    /// Smallest and largest index carrying a nonzero value.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.values.iter().position(|v| *v != ZERO)?;
        let last = self.values.iter().rposition(|v| *v != ZERO)?;
        Some((self.offset + first as i64, self.offset + last as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    /// Copy with leading and trailing zeros removed.
    pub fn trimmed(&self) -> Self {
        match self.support() {
            None => Self::zero(),
            Some((lo, hi)) => Self {
                offset: lo,
                values: self.values[(lo - self.offset) as usize..=(hi - self.offset) as usize].to_vec(),
            },
        }
    }

    /// Iterates over `(index, value)` for every stored entry.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, v)| (self.offset + i as i64, *v))
    }

    pub fn map(&self, mut f: impl FnMut(i64, Complex64) -> Complex64) -> Self {
        Self {
            offset: self.offset,
            values: self.iter().map(|(x, v)| f(x, v)).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|_, v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|_, v| v.conj())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Signal) -> Self {
        match (self.support(), other.support()) {
            (None, _) => other.trimmed(),
            (_, None) => self.trimmed(),
            (Some((a, b)), Some((c, d))) => {
                let lo = a.min(c);
                let hi = b.max(d);
                Self {
                    offset: lo,
                    values: (lo..=hi).map(|x| self.get(x) + other.get(x)).collect(),
                }
            }
        }
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Restriction to the integer interval `window`.
    pub fn restrict(&self, window: RangeInclusive<i64>) -> Self {
        let offset = *window.start();
        Self {
            offset,
            values: window.map(|x| self.get(x)).collect(),
        }
    }
}

impl PartialEq for Signal {
    fn eq(&self, other: &Self) -> bool {
        match (self.support(), other.support()) {
            (None, None) => true,
            (Some((a, b)), Some((c, d))) => a == c && b == d && (a..=b).all(|x| self.get(x) == other.get(x)),
            _ => false,
        }
    }
}

/// A finite set of integers, used through its indicator function.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndicatorSet {
    elements: BTreeSet<i64>,
}

impl IndicatorSet {
    pub fn new(elements: impl IntoIterator<Item = i64>) -> Self {
        Self {
            elements: elements.into_iter().collect(),
        }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::new(lo..=hi)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elements.contains(&x)
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.elements.iter().copied()
    }

    /// Smallest and largest element.
    pub fn hull(&self) -> Option<(i64, i64)> {
        Some((*self.elements.first()?, *self.elements.last()?))
    }

    pub fn to_signal(&self) -> Signal {
        match self.hull() {
            None => Signal::zero(),
            Some((lo, hi)) => Signal {
                offset: lo,
                values: (lo..=hi)
                    .map(|x| if self.contains(x) { Complex64::new(1.0, 0.0) } else { ZERO })
                    .collect(),
            },
        }
    }
}

/// Hölder exponents for the primal `(p_1, …, p_k; p)` or dual `(p_0, …, p_k)` form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum HolderExponents {
    /// `1/p = Σ 1/p_i` over the `k` input exponents.
    Primal { exponents: Vec<f64>, p: f64 },
    /// `Σ_{i=0}^{k} 1/p_i = 1`.
    Dual { exponents: Vec<f64> },
}

/// Tolerance on the scaling identity.
pub const SCALING_TOLERANCE: f64 = 1e-12;

fn check_exponent(p: f64) -> Result<()> {
    if p.is_finite() && p > 1.0 {
        Ok(())
    } else {
        Err(Error::ExponentOutOfRange(p))
    }
}

/// Conjugate exponent `p' = p / (p - 1)`.
pub fn conjugate_exponent(p: f64) -> f64 {
    p / (p - 1.0)
}

impl HolderExponents {
    pub fn primal(exponents: Vec<f64>, p: f64) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::InvalidArgument("need at least one exponent".into()));
        }
        exponents.iter().copied().try_for_each(check_exponent)?;
        check_exponent(p)?;
        let residual = (1.0 / p - exponents.iter().map(|q| 1.0 / q).sum::<f64>()).abs();
        if residual > SCALING_TOLERANCE {
            return Err(Error::ScalingIdentity(residual));
        }
        Ok(Self::Primal { exponents, p })
    }

    /// Primal exponents with `p` solved from the scaling identity.
    pub fn primal_from_inputs(exponents: Vec<f64>) -> Result<Self> {
        exponents.iter().copied().try_for_each(check_exponent)?;
        let inv: f64 = exponents.iter().map(|q| 1.0 / q).sum();
        if inv >= 1.0 {
            return Err(Error::ExponentOutOfRange(1.0 / inv));
        }
        Self::primal(exponents, 1.0 / inv)
    }

    pub fn dual(exponents: Vec<f64>) -> Result<Self> {
        if exponents.len() < 2 {
            return Err(Error::InvalidArgument("dual form needs k + 1 >= 2 exponents".into()));
        }
        exponents.iter().copied().try_for_each(check_exponent)?;
        let residual = (1.0 - exponents.iter().map(|q| 1.0 / q).sum::<f64>()).abs();
        if residual > SCALING_TOLERANCE {
            return Err(Error::ScalingIdentity(residual));
        }
        Ok(Self::Dual { exponents })
    }

    /// Number of input functions `k` of the underlying operator.
    pub fn k(&self) -> usize {
        match self {
            Self::Primal { exponents, .. } => exponents.len(),
            Self::Dual { exponents } => exponents.len() - 1,
        }
    }

    /// Dual tuple `(p', p_1, …, p_k)`.
    pub fn to_dual(&self) -> Self {
        match self {
            Self::Primal { exponents, p } => {
                let mut all = Vec::with_capacity(exponents.len() + 1);
                all.push(conjugate_exponent(*p));
                all.extend_from_slice(exponents);
                Self::Dual { exponents: all }
            }
            Self::Dual { .. } => self.clone(),
        }
    }

    /// Primal tuple `(p_1, …, p_k; p_0')`.
    pub fn to_primal(&self) -> Self {
        match self {
            Self::Dual { exponents } => Self::Primal {
                exponents: exponents[1..].to_vec(),
                p: conjugate_exponent(exponents[0]),
            },
            Self::Primal { .. } => self.clone(),
        }
    }

    /// The listed exponents (k in primal form, k + 1 in dual form).
    pub fn exponents(&self) -> &[f64] {
        match self {
            Self::Primal { exponents, .. } | Self::Dual { exponents } => exponents,
        }
    }
}

/// A function on `ℤ/Nℤ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CyclicSignal {
    values: Vec<Complex64>,
}

impl CyclicSignal {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::ZeroModulus);
        }
        for (i, v) in values.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite(i as i64));
            }
        }
        Ok(Self { values })
    }

    pub fn from_fn(modulus: usize, f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        Self::new((0..modulus).map(f).collect())
    }

    pub fn constant(modulus: usize, c: Complex64) -> Result<Self> {
        Self::new(vec![c; modulus])
    }

    /// `x ↦ e^{2πi ξ x / N}`.
    pub fn character(modulus: usize, frequency: i64) -> Result<Self> {
        let n = modulus as i64;
        Self::from_fn(modulus, |x| {
            let phase = ((frequency.rem_euclid(n) * x as i64) % n) as f64 / n as f64;
            Complex64::from_polar(1.0, std::f64::consts::TAU * phase)
        })
    }

    /// Zero-extends a signal to `ℤ/Mℤ`, reducing indices mod `M`.
    pub fn embed(signal: &Signal, modulus: usize) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::ZeroModulus);
        }
        let mut values = vec![ZERO; modulus];
        for (x, v) in signal.iter() {
            values[x.rem_euclid(modulus as i64) as usize] += v;
        }
        Ok(Self { values })
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: i64) -> Complex64 {
        self.values[x.rem_euclid(self.values.len() as i64) as usize]
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.modulus() != other.modulus() {
            return Err(Error::ModulusMismatch(self.modulus(), other.modulus()));
        }
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }
}

/// `(Σ_x |f(x)|^p)^{1/p}` for `1 < p < ∞`.
pub fn lp_norm(f: &Signal, p: f64) -> Result<f64> {
    check_exponent(p)?;
    // Scale by the sup to keep |v|^p in range.
    let sup = f.sup_abs();
    if sup == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = f.values.iter().map(|v| (v.norm() / sup).powf(p)).sum();
    Ok(sup * sum.powf(1.0 / p))
}

/// Hardy–Littlewood maximal function over integer radii `r ≥ 1`, sampled on `window`.
pub fn maximal_function(f: &Signal, window: RangeInclusive<i64>) -> Signal {
    let (lo, hi) = match f.support() {
        None => return Signal::restrict(&Signal::zero(), window),
        Some(s) => s,
    };
    // prefix[i] = Σ_{lo <= y < lo + i} |f(y)|
    let mut prefix = Vec::with_capacity((hi - lo + 2) as usize);
    prefix.push(0.0);
    let mut acc = 0.0;
    for y in lo..=hi {
        acc += f.get(y).norm();
        prefix.push(acc);
    }
    let mass_between = |a: i64, b: i64| -> f64 {
        let a = a.max(lo);
        let b = b.min(hi);
        if a > b {
            0.0
        } else {
            prefix[(b - lo + 1) as usize] - prefix[(a - lo) as usize]
        }
    };
    let offset = *window.start();
    let values = window
        .map(|x| {
            // Past this radius the window holds all the mass and the average only shrinks.
            let r_max = (x - lo).abs().max((hi - x).abs()).max(1);
            let best = (1..=r_max)
                .map(|r| mass_between(x - r, x + r) / (2 * r + 1) as f64)
                .fold(0.0, f64::max);
            Complex64::new(best, 0.0)
        })
        .collect();
    Signal { offset, values }
}

/// `Σ_{x,t ∈ ℤ} f_0(x) f_1(x+t) ⋯ f_k(x+kt)` for `k ≥ 1`.
///
/// The rectangle is `x ∈ supp f_0` and `t ∈ supp f_1 − x`; every other
/// `(x, t)` has a vanishing factor.
pub fn pattern_sum(fs: &[Signal]) -> Result<Complex64> {
    if fs.len() < 2 {
        return Err(Error::Arity {
            expected: 2,
            got: fs.len(),
        });
    }
    let (Some((lo0, hi0)), Some((lo1, hi1))) = (fs[0].support(), fs[1].support()) else {
        return Ok(ZERO);
    };
    let mut total = ZERO;
    for x in lo0..=hi0 {
        let f0 = fs[0].get(x);
        if f0 == ZERO {
            continue;
        }
        for t in (lo1 - x)..=(hi1 - x) {
            let mut prod = f0;
            for (i, f) in fs.iter().enumerate().skip(1) {
                prod *= f.get(x + i as i64 * t);
                if prod == ZERO {
                    break;
                }
            }
            total += prod;
        }
    }
    Ok(total)
}

/// `#{x : x + i t ∈ E_i for all i}`, evaluated exactly.
pub fn progression_count(sets: &[IndicatorSet], t: i64) -> usize {
    match sets.first() {
        None => 0,
        Some(first) => first
            .iter()
            .filter(|&x| sets.iter().enumerate().skip(1).all(|(i, e)| e.contains(x + i as i64 * t)))
            .count(),
    }
}

/// Checks `Σ_x 1_{E_0}(x) ⋯ 1_{E_k}(x + kt) ≤ min_i |E_i|` in integer arithmetic.
pub fn min_cardinality_bound_check(sets: &[IndicatorSet], t: i64) -> bool {
    let min = sets.iter().map(IndicatorSet::len).min().unwrap_or(0);
    progression_count(sets, t) <= min
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(Signal::new(3, vec![c(1.0), c(f64::NAN)]), Err(Error::NonFinite(4)));
        assert!(CyclicSignal::new(vec![c(f64::INFINITY)]).is_err());
        assert!(serde_json::from_str::<Signal>(r#"{"offset":0,"values":[[1.0,0.0]]}"#).is_ok());
    }

    #[test]
    fn equality_ignores_padding() {
        let a = Signal::new(-2, vec![c(0.0), c(0.0), c(1.0), c(2.0), c(0.0)]).unwrap();
        let b = Signal::new(0, vec![c(1.0), c(2.0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(Signal::new(5, vec![c(0.0); 4]).unwrap(), Signal::zero());
        assert_ne!(b, Signal::delta(0));
    }

    #[test]
    fn lp_norm_examples() {
        for p in [1.5, 2.0, 7.0] {
            assert_eq!(lp_norm(&Signal::delta(0), p).unwrap(), 1.0);
            let n = 37.0_f64;
            let got = lp_norm(&Signal::indicator_interval(1, 37), p).unwrap();
            assert!((got - n.powf(1.0 / p)).abs() < 1e-12 * got);
        }
        let f = Signal::from_real(0, &[3.0, 4.0]).unwrap();
        assert!((lp_norm(&f, 2.0).unwrap() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn lp_norm_rejects_bad_exponents() {
        for p in [1.0, 0.5, f64::INFINITY, f64::NAN] {
            assert!(lp_norm(&Signal::delta(0), p).is_err());
        }
    }

    #[test]
    fn maximal_function_examples() {
        let m = maximal_function(&Signal::delta(0), -6..=6);
        assert_eq!(m.get(0).re, 1.0 / 3.0);
        assert_eq!(m.get(5).re, 1.0 / 11.0);
        assert_eq!(m.get(-5).re, 1.0 / 11.0);
    }

    #[test]
    fn maximal_function_matches_radius_scan() {
        let f = Signal::indicator_interval(1, 100);
        let v = maximal_function(&f, 50..=50).get(50).re;
        // exhaustive scan over radii 1..=200
        let oracle = (1..=200i64)
            .map(|r| ((50 - r).max(1)..=(50 + r).min(100)).count() as f64 / (2 * r + 1) as f64)
            .fold(0.0, f64::max);
        assert_eq!(v, oracle);
        assert_eq!(v, 1.0);
    }

    #[test]
    fn maximal_function_dominates_third() {
        let mut rng = crate::rng::seeded(3);
        for _ in 0..20 {
            let vals: Vec<f64> = (0..30).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let f = Signal::from_real(-10, &vals).unwrap();
            let m = maximal_function(&f, -15..=25);
            for x in -15..=25 {
                assert!(m.get(x).re * 3.0 >= f.get(x).norm() * (1.0 - 1e-15));
            }
        }
    }

    #[test]
    fn pattern_sum_examples() {
        let zero = pattern_sum(&[Signal::delta(0), Signal::zero(), Signal::delta(1)]).unwrap();
        assert_eq!(zero, ZERO);
        let one = pattern_sum(&[Signal::delta(0), Signal::delta(3)]).unwrap();
        assert_eq!(one, c(1.0));
        assert!(pattern_sum(&[Signal::delta(0)]).is_err());
    }

    #[test]
    fn pattern_sum_matches_double_loop() {
        let f = Signal::indicator_interval(0, 7);
        let got = pattern_sum(&[f.clone(), f.clone(), f.clone()]).unwrap();
        let mut oracle = 0.0;
        for x in -16..=16i64 {
            for t in -16..=16i64 {
                let inside = |y: i64| (0..=7).contains(&y);
                if inside(x) && inside(x + t) && inside(x + 2 * t) {
                    oracle += 1.0;
                }
            }
        }
        assert_eq!(got, c(oracle));
        // 3-APs in [0, 7] including trivial ones: 8 + 2 * (6 + 4 + 2)
        assert_eq!(oracle, 32.0);
    }

    #[test]
    fn min_cardinality_examples() {
        let zero = IndicatorSet::new([0]);
        assert!(min_cardinality_bound_check(&[zero.clone(), zero.clone(), zero.clone()], 0));
        assert_eq!(progression_count(&[zero.clone(), zero.clone()], 0), 1);
        for t in -5..5 {
            assert!(min_cardinality_bound_check(&[zero.clone(), IndicatorSet::empty()], t));
            assert_eq!(progression_count(&[zero.clone(), IndicatorSet::empty()], t), 0);
        }
    }

    #[test]
    fn min_cardinality_random_sets() {
        let mut rng = crate::rng::seeded(17);
        for _ in 0..100 {
            let k = rng.gen_range(1..=3);
            let sets: Vec<IndicatorSet> = (0..=k)
                .map(|_| {
                    let size = rng.gen_range(0..=50);
                    IndicatorSet::new((0..size).map(|_| rng.gen_range(-40..40)))
                })
                .collect();
            let t = rng.gen_range(-30..30);
            let count = progression_count(&sets, t);
            let min = sets.iter().map(IndicatorSet::len).min().unwrap();
            assert!(count <= min);
            assert!(min_cardinality_bound_check(&sets, t));
        }
    }

    #[test]
    fn exponents_scaling_identity() {
        assert!(HolderExponents::primal(vec![2.0], 2.0).is_ok());
        assert!(HolderExponents::primal(vec![4.0, 4.0], 2.0).is_ok());
        assert!(matches!(
            HolderExponents::primal(vec![4.0, 4.0], 3.0),
            Err(Error::ScalingIdentity(_))
        ));
        assert!(HolderExponents::primal(vec![1.0], 2.0).is_err());
        assert!(HolderExponents::dual(vec![2.0, 2.0]).is_ok());
        assert!(HolderExponents::dual(vec![3.0, 3.0, 3.0]).is_ok());
        assert!(HolderExponents::dual(vec![2.0, 3.0]).is_err());
        let primal = HolderExponents::primal_from_inputs(vec![3.0, 6.0]).unwrap();
        let dual = primal.to_dual();
        assert_eq!(dual.k(), 2);
        let HolderExponents::Dual { exponents } = &dual else { unreachable!() };
        assert!((exponents.iter().map(|p| 1.0 / p).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(HolderExponents::dual(exponents.clone()).is_ok());
        let back = dual.to_primal();
        assert!((match back { HolderExponents::Primal { p, .. } => p, _ => 0.0 } - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cyclic_indexing_wraps() {
        let f = CyclicSignal::from_fn(5, |x| c(x as f64)).unwrap();
        assert_eq!(f.get(-1), c(4.0));
        assert_eq!(f.get(12), c(2.0));
        let e = CyclicSignal::embed(&Signal::indicator_interval(4, 6), 5).unwrap();
        assert_eq!(e.values(), &[c(1.0), c(1.0), c(0.0), c(0.0), c(1.0)]);
    }

    proptest! {
        #[test]
        fn lp_norm_is_homogeneous(
            vals in prop::collection::vec(-10.0f64..10.0, 1..40),
            re in -5.0f64..5.0, im in -5.0f64..5.0, p in 1.05f64..8.0,
        ) {
            let f = Signal::from_real(-3, &vals).unwrap();
            let scalar = Complex64::new(re, im);
            let lhs = lp_norm(&f.scale(scalar), p).unwrap();
            let rhs = scalar.norm() * lp_norm(&f, p).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn pattern_sum_is_linear_in_each_slot(
            seed in any::<u64>(), slot in 0usize..3, a in -3.0f64..3.0, b in -3.0f64..3.0,
        ) {
            let mut rng = crate::rng::seeded(seed);
            let mut random = |len: usize| {
                let vals = (0..len).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
                Signal::new(rng.gen_range(-4..4), vals).unwrap()
            };
            let mut fs: Vec<Signal> = (0..3).map(|_| random(9)).collect();
            let g = random(9);
            let h = random(9);
            fs[slot] = g.scale(c(a)).add(&h.scale(c(b)));
            let combined = pattern_sum(&fs).unwrap();
            fs[slot] = g;
            let sg = pattern_sum(&fs).unwrap();
            fs[slot] = h;
            let sh = pattern_sum(&fs).unwrap();
            let expected = sg * a + sh * b;
            let scale = (sg.norm() * a.abs() + sh.norm() * b.abs()).max(1e-300);
            prop_assert!((combined - expected).norm() <= 1e-12 * scale);
        }
    }
}

//! Smooth bumps for the dyadic decomposition.
//!
//! Everything is generated from the smooth step built on `u ↦ e^{−σ/u}`:
//!
//! * `η` equals 1 on `(−∞, 0]`, 0 on `[1, ∞)`;
//! * `φ̃(u) = η(2|u| − 1)` is even, 1 on `[−1/2, 1/2]`, supported in `[−1, 1]`;
//! * `ψ(u) = (φ̃(u/2) − φ̃(u)) / u` is odd, supported in `1/2 ≤ |u| ≤ 2`, and
//!   `Σ_n 2^{−n} ψ(2^{−n} u) = 1/u` telescopes;
//! * `φ(x) = η(x) − η(x + 1)` is supported in `[−1, 1]` and its integer
//!   translates sum to one.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Accepted range for the step sharpness `σ`.
pub const SHARPNESS_RANGE: (f64, f64) = (0.1, 10.0);

/// Points per certification check.
pub const CERTIFICATION_GRID: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationTolerances {
    pub odd: f64,
    pub support: f64,
    pub telescoping: f64,
    pub partition: f64,
}

impl Default for CertificationTolerances {
    fn default() -> Self {
        Self {
            odd: 1e-14,
            support: 0.0,
            telescoping: 1e-10,
            partition: 1e-12,
        }
    }
}

/// Worst residuals found on the certification grids.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certification {
    /// `max |ψ(u) + ψ(−u)|`, including `|ψ(0)|`.
    pub odd: f64,
    /// Largest `|ψ|` or `|φ|` outside the nominal supports.
    pub support: f64,
    /// `max |Σ_n 2^{−n} ψ(2^{−n} u) − 1/u|` over `2^{−8} ≤ |u| ≤ 2^8`.
    pub telescoping: f64,
    /// `max |Σ_j φ(x − j) − 1|`.
    pub partition: f64,
    pub grid_points: usize,
}

impl Certification {
    /// Named residuals paired with their tolerances.
    pub fn table(&self, tol: &CertificationTolerances) -> [(&'static str, f64, f64); 4] {
        [
            ("psi_odd", self.odd, tol.odd),
            ("support", self.support, tol.support),
            ("telescoping", self.telescoping, tol.telescoping),
            ("partition", self.partition, tol.partition),
        ]
    }

    pub fn passes(&self, tol: &CertificationTolerances) -> bool {
        self.table(tol).iter().all(|(_, r, t)| r <= t)
    }
}

/// The odd bump `ψ` and partition-of-unity bump `φ`, certified at construction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BumpPair {
    sharpness: f64,
    psi_sup: f64,
    phi_sup: f64,
    certification: Certification,
    #[serde(skip)]
    fourier_l1: OnceLock<(f64, f64)>,
}

impl BumpPair {
    fn mollifier(&self, u: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            (-self.sharpness / u).exp()
        }
    }

    /// Smooth step: 1 for `u ≤ 0`, 0 for `u ≥ 1`.
    pub fn eta(&self, u: f64) -> f64 {
        if u <= 0.0 {
            1.0
        } else if u >= 1.0 {
            0.0
        } else {
            let a = self.mollifier(1.0 - u);
            a / (a + self.mollifier(u))
        }
    }

    /// Even bump, 1 on `[−1/2, 1/2]`, supported in `[−1, 1]`.
    pub fn phi_tilde(&self, u: f64) -> f64 {
        self.eta(2.0 * u.abs() - 1.0)
    }

    pub fn psi(&self, u: f64) -> f64 {
        let a = u.abs();
        if !(0.5..2.0).contains(&a) {
            return 0.0;
        }
        (self.phi_tilde(u / 2.0) - self.phi_tilde(u)) / u
    }

    pub fn phi(&self, x: f64) -> f64 {
        if x.abs() >= 1.0 {
            return 0.0;
        }
        self.eta(x) - self.eta(x + 1.0)
    }

    pub fn sharpness(&self) -> f64 {
        self.sharpness
    }

    /// Upper bound on `sup |ψ|`.
    pub fn psi_sup(&self) -> f64 {
        self.psi_sup
    }

    /// Upper bound on `sup |φ|`.
    pub fn phi_sup(&self) -> f64 {
        self.phi_sup
    }

    pub fn certification(&self) -> &Certification {
        &self.certification
    }

    /// `(‖ψ̂‖₁, ‖φ̂‖₁)` by quadrature plus an integration-by-parts tail bound.
    pub fn fourier_l1_norms(&self) -> (f64, f64) {
        *self.fourier_l1.get_or_init(|| {
            let psi = fourier_l1(|t| self.psi(t), 0.5, 2.0, FourierParity::Odd);
            let phi = fourier_l1(|x| self.phi(x), 0.0, 1.0, FourierParity::Even);
            (psi, phi)
        })
    }

    /// Re-runs every certification check on `grid_points` samples.
    pub fn certify(&self, grid_points: usize) -> Certification {
        let grid = grid_points.max(2);
        let mut odd = self.psi(0.0).abs();
        let mut support = 0.0f64;
        for i in 0..grid {
            let u = -3.0 + 6.0 * i as f64 / (grid - 1) as f64;
            odd = odd.max((self.psi(u) + self.psi(-u)).abs());
            let a = u.abs();
            if !(0.5..=2.0).contains(&a) {
                support = support.max(self.psi(u).abs());
            }
            if a > 1.0 {
                support = support.max(self.phi(u).abs());
            }
        }
        let mut telescoping = 0.0f64;
        for i in 0..grid {
            // log-uniform in [2^-8, 2^8], alternating sign
            let e = -8.0 + 16.0 * i as f64 / (grid - 1) as f64;
            let u = if i % 2 == 0 { e.exp2() } else { -e.exp2() };
            let top = u.abs().log2().floor() as i32;
            let sum: f64 = (top - 2..=top + 2)
                .map(|n| {
                    let s = f64::from(n).exp2();
                    self.psi(u / s) / s
                })
                .sum();
            telescoping = telescoping.max((sum - 1.0 / u).abs());
        }
        let mut partition = 0.0f64;
        for i in 0..grid {
            let x = -5.0 + 10.0 * i as f64 / (grid - 1) as f64;
            let base = x.floor() as i64;
            let sum: f64 = (base - 2..=base + 2).map(|j| self.phi(x - j as f64)).sum();
            partition = partition.max((sum - 1.0).abs());
        }
        Certification {
            odd,
            support,
            telescoping,
            partition,
            grid_points: grid,
        }
    }
}

#[derive(Clone, Copy)]
enum FourierParity {
    Odd,
    Even,
}

/// Grid maximum of `|g|` on `[a, b]` padded by the largest observed step,
/// which bounds the excursion between adjacent nodes for smooth `g`.
fn padded_sup(g: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> f64 {
    let h = (b - a) / (points - 1) as f64;
    let mut max = 0.0f64;
    let mut step = 0.0f64;
    let mut prev = g(a);
    for i in 0..points {
        let v = g(a + h * i as f64);
        max = max.max(v.abs());
        step = step.max((v - prev).abs());
        prev = v;
    }
    max + step
}

fn simpson(g: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let m = intervals + intervals % 2;
    let h = (b - a) / m as f64;
    let mut acc = g(a) + g(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(a + h * i as f64);
    }
    acc * h / 3.0
}

/// `‖ĝ‖₁` for `g` odd or even, supported in `±[a, b]`.
///
/// `|ĝ(ξ)| = 2 |∫_a^b g(t) sin(2πξt) dt|` (odd) or `2 |∫_a^b g cos|` (even).
/// The integral over `|ξ| ≤ Ξ` is Simpson on a fine grid; beyond `Ξ`,
/// `|ĝ(ξ)| ≤ ‖g''‖₁ / (4π²ξ²)` contributes at most `2‖g''‖₁ / (4π²Ξ)`.
fn fourier_l1(g: impl Fn(f64) -> f64 + Copy, a: f64, b: f64, parity: FourierParity) -> f64 {
    const XI_MAX: f64 = 64.0;
    const XI_STEPS: usize = 6400;
    const INNER: usize = 2048;
    let hat = |xi: f64| -> f64 {
        let integrand = |t: f64| match parity {
            FourierParity::Odd => g(t) * (2.0 * PI * xi * t).sin(),
            FourierParity::Even => g(t) * (2.0 * PI * xi * t).cos(),
        };
        2.0 * simpson(integrand, a, b, INNER).abs()
    };
    let body = 2.0 * simpson(hat, 0.0, XI_MAX, XI_STEPS);
    // ‖g''‖₁ over the full support by second differences
    let points = 200_000;
    let lo = -b - 0.01;
    let hi = b + 0.01;
    let h = (hi - lo) / points as f64;
    let mut second = 0.0;
    for i in 1..points {
        let x = lo + h * i as f64;
        second += (g(x + h) - 2.0 * g(x) + g(x - h)).abs() / h;
    }
    let tail = 2.0 * second / (4.0 * PI * PI * XI_MAX);
    (body + tail) * (1.0 + 1e-3)
}

/// Builds the pair with the default tolerances.
pub fn build_bumps(step_sharpness: f64) -> Result<BumpPair> {
    build_bumps_with(step_sharpness, &CertificationTolerances::default())
}

/// Builds the pair and fails if any certification residual exceeds `tol`.
pub fn build_bumps_with(step_sharpness: f64, tol: &CertificationTolerances) -> Result<BumpPair> {
    let (lo, hi) = SHARPNESS_RANGE;
    if !(lo..=hi).contains(&step_sharpness) {
        return Err(Error::InvalidArgument(format!(
            "step sharpness {step_sharpness} outside [{lo}, {hi}]"
        )));
    }
    let mut pair = BumpPair {
        sharpness: step_sharpness,
        psi_sup: 0.0,
        phi_sup: 0.0,
        certification: Certification {
            odd: 0.0,
            support: 0.0,
            telescoping: 0.0,
            partition: 0.0,
            grid_points: 0,
        },
        fourier_l1: OnceLock::new(),
    };
    pair.psi_sup = padded_sup(|u| pair.psi(u), 0.5, 2.0, CERTIFICATION_GRID);
    pair.phi_sup = padded_sup(|x| pair.phi(x), -1.0, 1.0, CERTIFICATION_GRID);
    pair.certification = pair.certify(CERTIFICATION_GRID);
    for (check, residual, tolerance) in pair.certification.table(tol) {
        if residual > tolerance {
            return Err(Error::Certification {
                check,
                residual,
                tolerance,
            });
        }
    }
    Ok(pair)
}

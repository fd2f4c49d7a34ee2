//! Normalized discrete Fourier transform on `ℤ/Nℤ`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::signals::CyclicSignal;

/// `f̂(ξ) = N^{-1} Σ_x f(x) e^{-2πi x ξ / N}` for every `ξ ∈ ℤ/Nℤ`.
pub fn fourier_coefficients(f: &CyclicSignal) -> Vec<Complex64> {
    let n = f.modulus();
    let mut buf = f.values().to_vec();
    FftPlanner::<f64>::new().plan_fft_forward(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter_mut().for_each(|v| *v *= scale);
    buf
}

/// Inverse of [`fourier_coefficients`]: `f(x) = Σ_ξ f̂(ξ) e^{2πi x ξ / N}`.
pub fn from_coefficients(coefficients: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coefficients.to_vec();
    FftPlanner::<f64>::new()
        .plan_fft_inverse(coefficients.len())
        .process(&mut buf);
    buf
}

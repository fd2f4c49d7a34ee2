//! Numerical toolkit for the discrete truncated multilinear Hilbert transform.
//!
//! The crate is split along the lines of the underlying harmonic analysis:
//!
//! * [`signals`]: finitely supported functions on `ℤ`, cyclic signals,
//!   `ℓ^p` norms, the Hardy–Littlewood maximal function and raw pattern sums.
//! * [`gowers`]: Gowers uniformity norms on `ℤ/Nℤ` and `[N]`, the
//!   generalized von Neumann inequality and a degree-one regularity split.
//! * [`mht`]: the truncated `k`-linear transform, its dual form, the kernel
//!   mass behind the trivial bound, and single-scale weighted forms.
//! * [`dyadic`]: certified bump functions, dyadic intervals, the
//!   single-scale quantities `a_I`, bad intervals and greedy tree covers.
//! * [`extremal`]: lower bounds on the operator norm by block ascent and
//!   indicator probing, and growth curves against the trivial bound.

pub mod dyadic;
pub mod error;
pub mod extremal;
pub mod fourier;
pub mod gowers;
pub mod mht;
pub mod rng;
pub mod signals;

pub use error::{Error, Result};
pub use num_complex::Complex64;

//! Numerics for L¹ convergence and L¹ approximation of Fourier series whose
//! coefficients satisfy the mean value bounded variation (MVBV) condition.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs: coefficient families, MVBV ratio scans, the
//! kernels `D_k`, `D_k*`, `E_k`, partial sums and de la Vallée Poussin means,
//! L¹ quadrature, and the theorem-level diagnostic runners built on them.
//! File formats and the command-line driver live in `mvbv-harness`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagnostics;
mod error;
pub mod fft;
pub mod kernels;
pub mod mvbv;
pub mod quadrature;
pub mod sequences;
pub mod synthesis;

pub use error::Error;
pub use num_complex::Complex64 as Complex;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Integer part `[x]` as used for the index windows `[λ⁻¹m]`, `[λm]`, `[μn]`.
#[inline]
pub(crate) fn floor_index(x: f64) -> i64 {
    x.floor() as i64
}

/// Natural log with `log 1 = 0` and `log 0` treated as `0`.
#[inline]
pub(crate) fn log_index(k: i64) -> f64 {
    if k <= 1 {
        0.0
    } else {
        (k as f64).ln()
    }
}

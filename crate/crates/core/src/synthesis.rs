//! Partial sums `S_n(f, x) = Σ_{|k|≤n} f̂(k) e^{ikx}`, de la Vallée Poussin
//! means `τ_{μn,n} = (1/([μn]−n)) Σ_{k=n}^{[μn]−1} S_k`, the summation-by-parts
//! expansion of `τ_{μn,n} − S_n` in the kernels `D_k`, `E_k`, and the
//! truncated reference standing in for `f` itself.
//!
//! Pointwise sums run in ascending `|k|`, negative index first. Uniform-grid
//! sampling goes through a radix-2 transform when `M` is a power of two.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::fft;
use crate::kernels::{complex_kernel, dirichlet};
use crate::sequences::{CoefficientSequence, Side, TailModel};
use crate::{floor_index, Complex, Error, Result};

/// Grid-size policy turning an order `n` into a [`SynthesisPlan`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PlanPolicy {
    /// `N_ref / n`.
    pub nref_ratio: u64,
    /// `M / N_ref`.
    pub m_ratio: u64,
    pub mu: f64,
    /// Lower bound on the index cap used by tail bounds.
    pub k_cap: u64,
}

impl Default for PlanPolicy {
    fn default() -> Self {
        PlanPolicy {
            nref_ratio: 16,
            m_ratio: 8,
            mu: 1.5,
            k_cap: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SynthesisPlan {
    pub n: u64,
    pub mu: f64,
    pub n_ref: u64,
    pub m: usize,
}

impl SynthesisPlan {
    pub fn new(n: u64, mu: f64, n_ref: u64, m: usize) -> Result<Self> {
        if !(mu > 1.0 && mu <= 2.0) {
            return Err(Error::InvalidArgument(format!(
                "mu must lie in (1, 2], got {mu}"
            )));
        }
        let upper = floor_index(mu * n as f64);
        if (n_ref as i64) <= upper {
            return Err(Error::InvalidArgument(format!(
                "N_ref = {n_ref} must exceed [mu n] = {upper}"
            )));
        }
        if (m as u64) < 8 * n_ref || !m.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "M = {m} must be even and at least 8 N_ref = {}",
                8 * n_ref
            )));
        }
        Ok(SynthesisPlan { n, mu, n_ref, m })
    }

    pub fn from_policy(n: u64, policy: &PlanPolicy) -> Result<Self> {
        if policy.nref_ratio < 2 || policy.m_ratio < 8 {
            return Err(Error::InvalidArgument(
                "policy needs N_ref ratio >= 2 and M ratio >= 8".into(),
            ));
        }
        let upper = floor_index(policy.mu * n as f64).max(0) as u64;
        let n_ref = (policy.nref_ratio * n).max(upper + 1).max(2);
        let m = ((policy.m_ratio * n_ref) as usize).max(16);
        Self::new(n, policy.mu, n_ref, m + m % 2)
    }
}

fn require_two_sided(seq: &CoefficientSequence, n: u64) -> Result<()> {
    if seq.is_two_sided() || n == 0 {
        Ok(())
    } else {
        Err(Error::OutOfSupport { index: -1 })
    }
}

#[inline]
fn cis(t: f64) -> Complex {
    let (s, c) = t.sin_cos();
    Complex::new(c, s)
}

fn weighted_point_sum<W: Fn(u64) -> f64>(
    seq: &CoefficientSequence,
    top: u64,
    weight: W,
    x: f64,
) -> Complex {
    let mut acc = seq.at(0) * weight(0);
    for j in 1..=top {
        let w = weight(j);
        if w == 0.0 {
            continue;
        }
        let t = j as f64 * x;
        acc += seq.at(-(j as i64)) * cis(-t) * w;
        acc += seq.at(j as i64) * cis(t) * w;
    }
    acc
}

/// `S_n(f, x)`.
pub fn partial_sum(seq: &CoefficientSequence, n: u64, x: f64) -> Result<Complex> {
    require_two_sided(seq, n)?;
    Ok(weighted_point_sum(seq, n, |_| 1.0, x))
}

/// `Σ_{|k|≤top} w(|k|) f̂(k) e^{ikx}` at `x_j = −π + 2πj/M`.
pub fn sample_weighted<W: Fn(u64) -> f64>(
    seq: &CoefficientSequence,
    top: u64,
    weight: W,
    m: usize,
) -> Result<Vec<Complex>> {
    require_two_sided(seq, top)?;
    sample_coefficients(top, |k| seq.at(k) * weight(k.unsigned_abs()), m)
}

/// `Σ_{|k|≤top} c(k) e^{ikx}` at `x_j = −π + 2πj/M`.
pub fn sample_coefficients<C: Fn(i64) -> Complex>(
    top: u64,
    coef: C,
    m: usize,
) -> Result<Vec<Complex>> {
    let needed = 2 * top as usize + 2;
    if m < needed {
        return Err(Error::TooFewSamples { m, n: top, needed });
    }
    // e^{ik(−π + 2πj/M)} = (−1)^k e^{2πi kj/M}
    let mut buf = alloc::vec![Complex::new(0.0, 0.0); m];
    buf[0] = coef(0);
    for k in 1..=top {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        buf[k as usize] = coef(k as i64) * sign;
        buf[m - k as usize] = coef(-(k as i64)) * sign;
    }
    if m.is_power_of_two() {
        fft::inverse_unnormalized(&mut buf);
        return Ok(buf);
    }
    let roots = fft::roots_of_unity(m);
    let active: Vec<(usize, Complex)> = buf
        .iter()
        .enumerate()
        .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
        .map(|(r, c)| (r, *c))
        .collect();
    Ok((0..m)
        .map(|j| active.iter().map(|&(r, c)| c * roots[(r * j) % m]).sum())
        .collect())
}

/// `S_n` on the uniform `M`-point grid; needs `M ≥ 2n + 2`.
pub fn sample_partial_sum(seq: &CoefficientSequence, n: u64, m: usize) -> Result<Vec<Complex>> {
    sample_weighted(seq, n, |_| 1.0, m)
}

/// `([μn], [μn] − n)`, rejecting an empty window.
pub fn vp_window(n: u64, mu: f64) -> Result<(u64, u64)> {
    let upper = floor_index(mu * n as f64);
    if upper <= n as i64 {
        return Err(Error::DegenerateWindow { n, upper });
    }
    let upper = upper as u64;
    Ok((upper, upper - n))
}

fn vp_weight(n: u64, upper: u64, len: u64) -> impl Fn(u64) -> f64 {
    move |j| {
        if j <= n {
            1.0
        } else if j < upper {
            (upper - j) as f64 / len as f64
        } else {
            0.0
        }
    }
}

/// `τ_{μn,n}(f, x)`, the mean of `S_k` over `k = n, …, [μn] − 1`.
pub fn vallee_poussin(seq: &CoefficientSequence, n: u64, mu: f64, x: f64) -> Result<Complex> {
    let (upper, len) = vp_window(n, mu)?;
    require_two_sided(seq, upper)?;
    Ok(weighted_point_sum(seq, upper, vp_weight(n, upper, len), x))
}

pub fn sample_vallee_poussin(
    seq: &CoefficientSequence,
    n: u64,
    mu: f64,
    m: usize,
) -> Result<Vec<Complex>> {
    let (upper, len) = vp_window(n, mu)?;
    sample_weighted(seq, upper, vp_weight(n, upper, len), m)
}

/// Right side of the summation-by-parts expansion of `τ_{μn,n} − S_n`:
///
/// ```text
///   (1/L) Σ_{k=n}^{p}   (p−k) [ −2Δf̂(k) D_k(x) + (Δf̂(k) − Δf̂(−k)) E_k(−x) ]
/// + (1/L) Σ_{k=n}^{p−1} [ f̂(k+1) E_k(x) + f̂(−k−1) E_k(−x) ]
/// −       [ f̂(n) E_n(x) + f̂(−n) E_n(−x) ]
/// ```
///
/// with `p = [μn]`, `L = p − n` and every `E_k` built with breakpoint parameter `n`.
pub fn abel_expansion(seq: &CoefficientSequence, n: u64, mu: f64, x: f64) -> Result<Complex> {
    let (upper, len) = vp_window(n, mu)?;
    require_two_sided(seq, upper + 1)?;
    let inv_len = 1.0 / len as f64;
    let mut first = Complex::new(0.0, 0.0);
    let mut second = Complex::new(0.0, 0.0);
    for k in n..=upper {
        let ki = k as i64;
        let dp = seq.diff(ki, Side::Plus);
        let dm = seq.diff(ki, Side::Minus);
        let weight = (upper - k) as f64;
        if weight != 0.0 {
            first +=
                (dp * (-2.0 * dirichlet(k, x)) + (dp - dm) * complex_kernel(k, n, -x)) * weight;
        }
        if k < upper {
            second += seq.at(ki + 1) * complex_kernel(k, n, x)
                + seq.at(-ki - 1) * complex_kernel(k, n, -x);
        }
    }
    let ni = n as i64;
    let boundary = seq.at(ni) * complex_kernel(n, n, x) + seq.at(-ni) * complex_kernel(n, n, -x);
    Ok((first + second) * inv_len - boundary)
}

/// `max_x |expansion(x) − (τ_{μn,n}(x) − S_n(x))|` over `grid`.
pub fn abel_decomposition_residual(
    seq: &CoefficientSequence,
    n: u64,
    mu: f64,
    grid: &[f64],
) -> Result<f64> {
    if let Some(x) = grid.iter().find(|x| x.abs() < 1e-6) {
        return Err(Error::InvalidArgument(format!(
            "grid point {x} is within 1e-6 of the origin"
        )));
    }
    let mut worst: f64 = 0.0;
    for &x in grid {
        let lhs = vallee_poussin(seq, n, mu, x)? - partial_sum(seq, n, x)?;
        let rhs = abel_expansion(seq, n, mu, x)?;
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// Samples of `S_{N_ref}` standing in for `f`, with a bound on `‖f − S_{N_ref}‖_L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub values: Vec<Complex>,
    /// `None` when the family declares nothing about its tail.
    pub tail_bound: Option<f64>,
    /// Doubling `N_ref` keeps more than [`SLOW_TAIL_RATIO`] of the bound.
    pub slow_tail: bool,
}

/// `1/N`-type tails keep about 0.53 of the bound per doubling (the extra
/// factor is logarithmic); `1/log N` tails keep 0.9 or more.
pub const SLOW_TAIL_RATIO: f64 = 0.75;

pub fn reference_values(
    seq: &CoefficientSequence,
    plan: &SynthesisPlan,
    k_cap: u64,
) -> Result<Reference> {
    let values = sample_partial_sum(seq, plan.n_ref, plan.m)?;
    let tail = tail_bound(seq, plan.n_ref, k_cap);
    let slow_tail = match (tail, tail_bound(seq, 2 * plan.n_ref, k_cap)) {
        (Some(a), Some(b)) if a > 0.0 => b > SLOW_TAIL_RATIO * a,
        _ => false,
    };
    Ok(Reference {
        values,
        tail_bound: tail,
        slow_tail,
    })
}

/// Upper estimate of `∫_{−π}^{π} |Σ_{|k|>N} f̂(k) e^{ikx}| dx` from the family's tail model.
///
/// A monotone piece `g` centred at `c` contributes `2g(N+1) / (2|sin((x−c)/2)|)`
/// for `|x − c| ≥ δ` and the crude `Σ_{k=N+1}^{K} g(k)` inside; `δ` is picked
/// from `π 2^{−j}` to minimise the total.
pub fn tail_bound(seq: &CoefficientSequence, n_ref: u64, k_cap: u64) -> Option<f64> {
    match seq.tail_model() {
        TailModel::Finite { degree } => {
            if n_ref >= degree {
                Some(0.0)
            } else {
                let sup: f64 = (n_ref + 1..=degree)
                    .map(|k| seq.at(k as i64).norm() + seq.at(-(k as i64)).norm())
                    .sum();
                Some(2.0 * PI * sup)
            }
        }
        TailModel::SquareSummable => seq.square_tail(n_ref).map(|s| 2.0 * PI * s.sqrt()),
        TailModel::Unknown => None,
        TailModel::Monotone(components) => {
            let cap = k_cap.max(16 * n_ref);
            Some(
                components
                    .iter()
                    .map(|c| {
                        let g = |k: u64| c.envelope.eval(k);
                        let jump = 2.0 * g(n_ref + 1);
                        let near: f64 = (n_ref + 1..=cap).map(g).sum();
                        (0..60)
                            .map(|j| {
                                let delta = PI / (1u64 << j) as f64;
                                let far = -2.0 * jump * (delta / 4.0).tan().ln();
                                far + 2.0 * delta * near
                            })
                            .fold(f64::INFINITY, f64::min)
                    })
                    .sum(),
            )
        }
    }
}
